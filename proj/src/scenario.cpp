// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "ismf/fft.hpp"
#include "ismf/parallel.hpp"
#include "ismf/resample.hpp"
#include "ismf/wav.hpp"

namespace ismf {

namespace fs = std::filesystem;

ScenarioProfile ScenarioProfile::by_name(const std::string& name) {
  ScenarioProfile p;
  p.name = name;
  // synthetic talker stand-in: ~-6 dB at the sides, ~-16 dB behind
  p.source_pattern_advanced = DirectivityPattern::make_cardioid(0.7, 2.0);
  if (name == "voicehome") {
    p.aperture_m = 0.104;
    p.mic_pattern_advanced = DirectivityPattern::make_omni();
  } else if (name == "dirha") {
    p.aperture_m = 0.30;
    p.wall_mounted_advanced = true;
    p.mic_pattern_advanced = DirectivityPattern::make_half_sphere();
  } else if (name == "starss") {
    p.aperture_m = 0.068;
    // baffled-capsule stand-in, looking outward along the pair axis
    p.mic_pattern_advanced = DirectivityPattern::make_cardioid(0.6, 1.0);
    p.mic_looks_outward = true;
  } else {
    throw ConfigError("unknown scenario profile: " + name);
  }
  return p;
}

double NoiseConfig::draw_snr_db(RandomStream& rng) const {
  return rng.truncated_normal(snr_mean_db, snr_sd_db, snr_clip_lo_db, snr_clip_hi_db);
}

Vec3 SceneSpec::mic_position(int m) const {
  return receiver.center +
         receiver.orientation.to_world(receiver.array.mics.at(m).position);
}

Vec3 SceneSpec::pair_axis() const {
  return (mic_position(1) - mic_position(0)).normalized();
}

double SceneSpec::aperture() const {
  return (mic_position(1) - mic_position(0)).norm();
}

RirRequest SceneSpec::main_request() const {
  RirRequest req;
  req.room = room;
  req.surfaces = surfaces;
  req.source = source;
  req.receiver = receiver;
  req.fs = fs;
  req.max_order = max_order;
  req.mode = mode;
  req.seed = seed;
  return req;
}

RirRequest SceneSpec::noise_request() const {
  RirRequest req = main_request();
  req.source.position = aux_noise_source;
  req.source.pattern = DirectivityPattern::make_omni();
  req.source.orientation = Orientation{};
  return req;
}

std::uint64_t SceneSpec::digest() const {
  return fnv1a64(main_request().canonical_text() + " aux " +
                 std::to_string(std::bit_cast<std::uint64_t>(aux_noise_source.x)) + " " +
                 std::to_string(std::bit_cast<std::uint64_t>(aux_noise_source.y)) + " " +
                 std::to_string(std::bit_cast<std::uint64_t>(aux_noise_source.z)));
}

RandomStream scene_stream(std::uint64_t master_seed, std::uint64_t index,
                          SceneStream which, SimMode mode) {
  std::uint64_t tag = static_cast<std::uint64_t>(which);
  // geometry and speech streams are shared between modes; the rest are
  // mode-specific so paired datasets reuse rooms and poses
  bool mode_specific = which == SceneStream::materials ||
                       which == SceneStream::source_orientation;
  if (mode_specific && mode == SimMode::advanced) tag |= 0x100;
  std::uint64_t per_sample = splitmix64(master_seed ^ splitmix64(index + 0x51ed));
  return RandomStream::derive(per_sample, tag);
}

namespace {

Vec3 uniform_in_margin_box(RandomStream& rng, const Shoebox& room, double margin) {
  return {rng.uniform(margin, room.dims.x - margin),
          rng.uniform(margin, room.dims.y - margin),
          rng.uniform(margin, room.dims.z - margin)};
}

Vec3 uniform_direction(RandomStream& rng) {
  double z = rng.uniform(-1.0, 1.0);
  double phi = rng.uniform(0.0, 2.0 * kPi);
  double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

bool inside_with_margin(const Shoebox& room, const Vec3& p, double margin) {
  return p.x >= margin && p.x <= room.dims.x - margin && p.y >= margin &&
         p.y <= room.dims.y - margin && p.z >= margin && p.z <= room.dims.z - margin;
}

struct WallFrame {
  Vec3 inward;   // inward normal
  Vec3 in_u, in_v;  // in-plane axes
  Vec3 origin;   // wall plane corner at (0,0)
  double span_u, span_v;
};

WallFrame wall_frame(const Shoebox& room, int wall) {
  const Vec3& d = room.dims;
  switch (wall) {
    case 0: return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {0, 0, 0}, d.y, d.z};
    case 1: return {{-1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {d.x, 0, 0}, d.y, d.z};
    case 2: return {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}, {0, 0, 0}, d.x, d.z};
    default: return {{0, -1, 0}, {1, 0, 0}, {0, 0, 1}, {0, d.y, 0}, d.x, d.z};
  }
}

}  // namespace

SceneSpec sample_scene(SimMode mode, const ScenarioProfile& profile,
                       std::uint64_t master_seed, std::uint64_t index) {
  bool advanced = mode == SimMode::advanced;
  bool wall_mounted = advanced && profile.wall_mounted_advanced;

  RandomStream geom = scene_stream(master_seed, index, SceneStream::geometry, mode);
  RandomStream mat = scene_stream(master_seed, index, SceneStream::materials, mode);
  RandomStream srcdir =
      scene_stream(master_seed, index, SceneStream::source_orientation, mode);

  SceneSpec scene;
  scene.mode = mode;
  scene.profile = profile.name;
  scene.seed = splitmix64(master_seed ^ splitmix64(index + 0x51ed));

  // room sizes per the standard distribution
  scene.room.dims = {geom.uniform(3.0, 10.0), geom.uniform(3.0, 10.0),
                     geom.uniform(2.0, 4.5)};

  double half_ap = profile.aperture_m / 2.0;
  bool placed = false;
  for (int attempt = 0; attempt < kMaxSceneRejections && !placed; ++attempt) {
    Vec3 src = uniform_in_margin_box(geom, scene.room, kMinWallDistance);
    Vec3 center, axis;
    Orientation array_orient;
    if (wall_mounted) {
      int wall = static_cast<int>(geom.uniform_index(4));
      WallFrame wf = wall_frame(scene.room, wall);
      double u = geom.uniform(kMinWallDistance, wf.span_u - kMinWallDistance);
      double v = geom.uniform(kMinWallDistance, wf.span_v - kMinWallDistance);
      center = wf.origin + wf.in_u * u + wf.in_v * v + wf.inward * kWallStandoff;
      double phi = geom.uniform(0.0, 2.0 * kPi);
      axis = (wf.in_u * std::cos(phi) + wf.in_v * std::sin(phi)).normalized();
      array_orient.look = axis;
      array_orient.up = wf.inward;  // mic local +z is the inward normal
    } else {
      center = uniform_in_margin_box(geom, scene.room, kMinWallDistance);
      axis = uniform_direction(geom);
      array_orient = Orientation::from_look(axis);
    }

    Vec3 mic0 = center - axis * half_ap;
    Vec3 mic1 = center + axis * half_ap;
    bool mics_ok;
    if (wall_mounted) {
      // standoff axis exempt from the margin; in-plane margins still hold
      mics_ok = scene.room.strictly_inside(mic0) && scene.room.strictly_inside(mic1);
      for (const Vec3& m : {mic0, mic1}) {
        Vec3 q = m;
        double margin = kMinWallDistance;
        mics_ok = mics_ok &&
                  ((q.x >= margin && q.x <= scene.room.dims.x - margin) ||
                   std::abs(array_orient.up.x) > 0.5) &&
                  ((q.y >= margin && q.y <= scene.room.dims.y - margin) ||
                   std::abs(array_orient.up.y) > 0.5) &&
                  ((q.z >= margin && q.z <= scene.room.dims.z - margin) ||
                   std::abs(array_orient.up.z) > 0.5);
      }
    } else {
      mics_ok = inside_with_margin(scene.room, mic0, kMinWallDistance) &&
                inside_with_margin(scene.room, mic1, kMinWallDistance);
    }
    if (!mics_ok) continue;
    if ((src - center).norm() < kMinSourceArrayDistance) continue;

    scene.source.position = src;
    scene.receiver.center = center;
    scene.receiver.orientation = array_orient;
    scene.receiver.array.mode = ReceiverMode::per_microphone;
    scene.receiver.array.mics.clear();
    for (int m = 0; m < 2; ++m) {
      ArrayMic mic;
      mic.position = {m == 0 ? -half_ap : half_ap, 0.0, 0.0};
      if (advanced) {
        mic.pattern = profile.mic_pattern_advanced;
        if (wall_mounted) {
          mic.orientation = {{0, 0, 1}, {1, 0, 0}};  // local +z = inward normal
        } else if (profile.mic_looks_outward) {
          mic.orientation = m == 0 ? Orientation{{-1, 0, 0}, {0, 0, 1}}
                                   : Orientation{{1, 0, 0}, {0, 0, 1}};
        } else {
          mic.orientation = Orientation{};
        }
      } else {
        mic.pattern = DirectivityPattern::make_omni();
        mic.orientation = Orientation{};
      }
      scene.receiver.array.mics.push_back(mic);
    }
    placed = true;
  }
  if (!placed)
    throw std::runtime_error("sample_scene: infeasible profile, placement rejected " +
                             std::to_string(kMaxSceneRejections) + " times");

  // auxiliary noise source, away from the array
  bool aux_ok = false;
  for (int attempt = 0; attempt < kMaxSceneRejections && !aux_ok; ++attempt) {
    Vec3 aux = uniform_in_margin_box(geom, scene.room, kMinWallDistance);
    if ((aux - scene.receiver.center).norm() < kMinSourceArrayDistance) continue;
    scene.aux_noise_source = aux;
    aux_ok = true;
  }
  if (!aux_ok) throw std::runtime_error("sample_scene: no feasible noise source");

  // materials (mode-specific stream)
  if (advanced) {
    scene.surfaces = sample_advanced_absorption(mat);
  } else {
    double target = mat.uniform(0.2, 1.0);
    target = std::max(target, min_naive_t60(scene.room));  // achievable clip
    scene.surfaces = sample_naive_absorption(target, scene.room);
  }

  // source directivity and orientation
  if (advanced) {
    scene.source.pattern = profile.source_pattern_advanced;
    double phi = srcdir.uniform(0.0, 2.0 * kPi);
    scene.source.orientation =
        Orientation{{std::cos(phi), std::sin(phi), 0.0}, {0, 0, 1}};
  } else {
    scene.source.pattern = DirectivityPattern::make_omni();
    scene.source.orientation = Orientation{};
  }
  return scene;
}

double ground_truth_doa(const SceneSpec& scene) {
  if (scene.receiver.array.mics.size() != 2)
    throw std::invalid_argument("ground_truth_doa: needs a two-microphone array");
  Vec3 to_source = scene.source.position - scene.receiver.center;
  double dist = to_source.norm();
  if (dist < 1e-9)
    throw std::invalid_argument("ground_truth_doa: source at the array center");
  double c = std::clamp(scene.pair_axis().dot(to_source * (1.0 / dist)), -1.0, 1.0);
  return std::acos(c) * 180.0 / kPi;
}

std::vector<double> speech_shaping_fir() {
  // frequency-sample the LTASS envelope 1/sqrt(1+(f/500)^2) at 16 kHz,
  // zero-phase IFFT, keep the center 9 taps under a Hann window
  constexpr std::size_t n = 512;
  std::vector<std::complex<double>> spec(n / 2 + 1);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    double f = static_cast<double>(i) * kSceneFs / n;
    spec[i] = {1.0 / std::sqrt(1.0 + (f / 500.0) * (f / 500.0)), 0.0};
  }
  std::vector<double> kernel(n);
  fft::irfft(spec, kernel);
  constexpr int half = 4;
  std::vector<double> taps(2 * half + 1);
  for (int k = -half; k <= half; ++k) {
    double w = 0.5 * (1.0 + std::cos(kPi * k / (half + 1.0)));
    taps[k + half] = kernel[(n + k) % n] * w;
  }
  return taps;
}

namespace {

double mean_power(const std::vector<std::vector<double>>& ch) {
  double acc = 0.0;
  std::size_t count = 0;
  for (const auto& c : ch) {
    for (double v : c) acc += v * v;
    count += c.size();
  }
  return count ? acc / static_cast<double>(count) : 0.0;
}

}  // namespace

Sample render_sample(const SceneSpec& scene, const std::vector<double>& dry_speech,
                     const NoiseConfig& noise, RandomStream& rng) {
  const auto n_samp = static_cast<std::size_t>(kSampleSeconds * scene.fs);
  if (dry_speech.size() < n_samp)
    throw std::invalid_argument("render_sample: dry speech shorter than 2 s");

  Rir rir = synthesize_rir(scene.main_request());
  std::size_t n_ch = rir.channels.size();

  // speech image
  std::vector<std::vector<double>> conv(n_ch);
  for (std::size_t m = 0; m < n_ch; ++m)
    conv[m] = fft::convolve(rir.channels[m], dry_speech);
  std::size_t conv_len = conv[0].size();

  // candidate 2 s crops on a 0.25 s grid; keep those holding >= 50 % of the
  // best window's RMS
  const auto hop = static_cast<std::size_t>(0.25 * scene.fs);
  std::vector<std::size_t> starts;
  std::vector<double> rms;
  for (std::size_t s = 0; s + n_samp <= conv_len; s += hop) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n_ch; ++m)
      for (std::size_t i = 0; i < n_samp; ++i) acc += conv[m][s + i] * conv[m][s + i];
    starts.push_back(s);
    rms.push_back(std::sqrt(acc / (n_samp * n_ch)));
  }
  double max_rms = *std::max_element(rms.begin(), rms.end());
  if (!(max_rms > 0.0))
    throw std::runtime_error("render_sample: silent dry input, no valid crop");
  std::vector<std::size_t> eligible;
  for (std::size_t i = 0; i < starts.size(); ++i)
    if (rms[i] >= 0.5 * max_rms) eligible.push_back(starts[i]);
  std::size_t crop = eligible[rng.uniform_index(eligible.size())];

  Sample sample;
  sample.fs = scene.fs;
  sample.doa_true_deg = ground_truth_doa(scene);
  sample.scene_digest = scene.digest();
  sample.audio.assign(n_ch, std::vector<double>(n_samp));
  for (std::size_t m = 0; m < n_ch; ++m)
    std::copy(conv[m].begin() + crop, conv[m].begin() + crop + n_samp,
              sample.audio[m].begin());

  if (!noise.enabled) {
    sample.snr_db = std::numeric_limits<double>::infinity();
    return sample;
  }

  double snr_db = noise.draw_snr_db(rng);

  // white component
  std::vector<std::vector<double>> white(n_ch, std::vector<double>(n_samp));
  for (auto& c : white)
    for (auto& v : c) v = rng.normal();

  // diffuse component: speech-shaped noise through the late part of the
  // auxiliary RIR (zeroed before direct arrival + onset)
  Rir aux = synthesize_rir(scene.noise_request());
  double min_direct = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < n_ch; ++m)
    min_direct = std::min(min_direct,
                          (scene.aux_noise_source - scene.mic_position(static_cast<int>(m))).norm() /
                              kSpeedOfSound);
  auto onset = static_cast<std::size_t>(
      std::round(scene.fs * (min_direct + noise.late_onset_s)));
  for (auto& c : aux.channels)
    for (std::size_t i = 0; i < std::min(onset, c.size()); ++i) c[i] = 0.0;

  std::size_t late_len = aux.length();
  std::vector<double> shaped(n_samp + late_len);
  for (auto& v : shaped) v = rng.normal();
  shaped = fft::convolve(shaped, speech_shaping_fir());
  std::vector<std::vector<double>> diffuse(n_ch, std::vector<double>(n_samp));
  for (std::size_t m = 0; m < n_ch; ++m) {
    auto full = fft::convolve(aux.channels[m], shaped);
    // fully-driven region, aligned past the RIR transient
    std::copy(full.begin() + late_len - 1, full.begin() + late_len - 1 + n_samp,
              diffuse[m].begin());
  }

  double p_white = mean_power(white);
  double p_diffuse = mean_power(diffuse);
  if (!(p_diffuse > 0.0) || !(p_white > 0.0))
    throw std::runtime_error("render_sample: degenerate noise component");
  double g_white = std::sqrt(noise.white_fraction / p_white);
  double g_diffuse = std::sqrt((1.0 - noise.white_fraction) / p_diffuse);
  std::vector<std::vector<double>> mixed(n_ch, std::vector<double>(n_samp));
  for (std::size_t m = 0; m < n_ch; ++m)
    for (std::size_t i = 0; i < n_samp; ++i)
      mixed[m][i] = g_white * white[m][i] + g_diffuse * diffuse[m][i];

  // exact SNR: speech-image power over total noise power in the window
  double p_sig = mean_power(sample.audio);
  double p_mix = mean_power(mixed);
  double gain = std::sqrt(p_sig / (p_mix * std::pow(10.0, snr_db / 10.0)));
  for (std::size_t m = 0; m < n_ch; ++m)
    for (std::size_t i = 0; i < n_samp; ++i) sample.audio[m][i] += gain * mixed[m][i];
  sample.snr_db = snr_db;
  return sample;
}

KvMap DatasetConfig::provenance() const {
  KvMap kv;
  kv.set("profile", profile.name);
  kv.set("mode", mode == SimMode::naive ? "naive" : "advanced");
  kv.set_int("n", static_cast<long long>(n));
  kv.set_u64("master_seed", master_seed);
  kv.set("dry_dir", dry_dir);
  kv.set_double("fs", kSceneFs);
  kv.set_int("max_order", max_order);
  kv.set_double("aperture_m", profile.aperture_m);
  kv.set_int("wall_mounted_advanced", profile.wall_mounted_advanced ? 1 : 0);
  kv.set_int("noise.enabled", noise.enabled ? 1 : 0);
  kv.set_double("noise.snr_mean_db", noise.snr_mean_db);
  kv.set_double("noise.snr_sd_db", noise.snr_sd_db);
  kv.set_double("noise.snr_clip_lo_db", noise.snr_clip_lo_db);
  kv.set_double("noise.snr_clip_hi_db", noise.snr_clip_hi_db);
  kv.set_double("noise.white_fraction", noise.white_fraction);
  kv.set_double("noise.late_onset_s", noise.late_onset_s);
  kv.set_double("val_fraction", val_fraction);
  kv.set_double("min_wall_distance_m", kMinWallDistance);
  kv.set_double("min_source_array_distance_m", kMinSourceArrayDistance);
  kv.set_double("wall_standoff_m", kWallStandoff);
  return kv;
}

DatasetSummary generate_dataset(const DatasetConfig& config) {
  if (config.n == 0) throw ConfigError("generate_dataset: n must be positive");
  if (config.out_dir.empty()) throw ConfigError("generate_dataset: out_dir required");

  // eligible dry files: mono, >= 2 s, sorted for determinism
  std::vector<std::string> dry_files;
  if (!fs::is_directory(config.dry_dir))
    throw ConfigError("generate_dataset: dry speech directory not found: " +
                      config.dry_dir);
  for (const auto& ent : fs::directory_iterator(config.dry_dir)) {
    if (!ent.is_regular_file()) continue;
    if (ent.path().extension() != ".wav") continue;
    dry_files.push_back(ent.path().string());
  }
  std::sort(dry_files.begin(), dry_files.end());
  std::vector<std::string> eligible;
  for (const auto& f : dry_files) {
    WavInfo info = wav_info(f);
    if (info.channels == 1 && info.seconds() >= kSampleSeconds) eligible.push_back(f);
  }
  if (eligible.empty())
    throw ConfigError("generate_dataset: no mono dry speech >= 2 s in " + config.dry_dir);

  fs::create_directories(fs::path(config.out_dir) / "wav");
  std::string manifest_path = (fs::path(config.out_dir) / "manifest.txt").string();
  std::string train_path = (fs::path(config.out_dir) / "manifest_train.txt").string();
  std::string val_path = (fs::path(config.out_dir) / "manifest_val.txt").string();

  std::vector<ManifestEntry> entries(config.n);
  try {
    parallel_for(config.n, config.workers, [&](std::size_t i) {
      SceneSpec scene =
          sample_scene(config.mode, config.profile, config.master_seed, i);
      scene.max_order = config.max_order;

      RandomStream speech =
          scene_stream(config.master_seed, i, SceneStream::speech, config.mode);
      const std::string& dry_path = eligible[speech.uniform_index(eligible.size())];
      Wav dry = read_wav(dry_path);
      std::vector<double> mono = resample_sinc(dry.channels.at(0),
                                               dry.sample_rate, kSceneFs);

      RandomStream render =
          scene_stream(config.master_seed, i, SceneStream::render, config.mode);
      Sample sample = render_sample(scene, mono, config.noise, render);

      char idbuf[16];
      std::snprintf(idbuf, sizeof idbuf, "s%06zu", i);
      std::string wav_rel = std::string("wav/") + idbuf + ".wav";
      write_wav_float32((fs::path(config.out_dir) / wav_rel).string(),
                        sample.audio, static_cast<int>(scene.fs));

      ManifestEntry e;
      e.id = idbuf;
      e.wav_path = wav_rel;
      e.fs = scene.fs;
      e.doa_true_deg = sample.doa_true_deg;
      e.snr_db = sample.snr_db;
      e.mode = config.mode == SimMode::naive ? "naive" : "advanced";
      e.scene_digest = sample.scene_digest;
      e.seed = scene.seed;
      entries[i] = std::move(e);
    });

    KvMap header = config.provenance();
    auto n_train = static_cast<std::size_t>(
        std::llround((1.0 - config.val_fraction) * static_cast<double>(config.n)));
    n_train = std::min(n_train, config.n);
    header.set_int("n_train", static_cast<long long>(n_train));
    header.set_int("n_val", static_cast<long long>(config.n - n_train));

    write_manifest(manifest_path, header, entries);
    write_manifest(train_path, header,
                   {entries.begin(), entries.begin() + n_train});
    write_manifest(val_path, header, {entries.begin() + n_train, entries.end()});

    DatasetSummary summary;
    summary.manifest_path = manifest_path;
    summary.n_train = n_train;
    summary.n_val = config.n - n_train;
    return summary;
  } catch (...) {
    // never leave a partial manifest behind
    std::error_code ec;
    fs::remove(manifest_path, ec);
    fs::remove(train_path, ec);
    fs::remove(val_path, ec);
    throw;
  }
}

// ---- scene spec serialization ----------------------------------------------

namespace {

std::string pattern_to_string(const DirectivityPattern& p) {
  char buf[96];
  switch (p.kind) {
    case PatternKind::omni:
      return "omni";
    case PatternKind::half_sphere:
      return "half_sphere";
    case PatternKind::cardioid_family:
      std::snprintf(buf, sizeof buf, "cardioid %.17g %.17g", p.cardioid_a,
                    p.cardioid_p);
      return buf;
    case PatternKind::measured_grid:
      throw std::invalid_argument(
          "scene spec: measured patterns must be referenced as 'measured <path>'");
  }
  return "omni";
}

DirectivityPattern pattern_from_string(const std::string& s) {
  std::istringstream is(s);
  std::string kind;
  is >> kind;
  if (kind == "omni") return DirectivityPattern::make_omni();
  if (kind == "half_sphere") return DirectivityPattern::make_half_sphere();
  if (kind == "cardioid") {
    double a, p;
    if (!(is >> a >> p)) throw ConfigError("scene spec: bad cardioid parameters");
    return DirectivityPattern::make_cardioid(a, p);
  }
  if (kind == "measured") {
    std::string path;
    if (!(is >> path)) throw ConfigError("scene spec: measured pattern needs a path");
    return load_pattern(path);
  }
  throw ConfigError("scene spec: unknown pattern kind '" + kind + "'");
}

void set_vec(KvMap& kv, const std::string& key, const Vec3& v) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g", v.x, v.y, v.z);
  kv.set(key, buf);
}

Vec3 get_vec(const KvMap& kv, const std::string& key) {
  auto v = kv.get_doubles(key);
  if (v.size() != 3) throw ConfigError("scene spec: key '" + key + "' needs 3 numbers");
  return {v[0], v[1], v[2]};
}

}  // namespace

KvMap SceneSpec::to_kv() const {
  KvMap kv;
  kv.set("profile", profile);
  kv.set("mode", mode == SimMode::naive ? "naive" : "advanced");
  kv.set_double("fs", fs);
  kv.set_int("max_order", max_order);
  kv.set_u64("seed", seed);
  set_vec(kv, "room.dims", room.dims);
  for (int s = 0; s < kNumSurfaces; ++s) {
    std::ostringstream os;
    char buf[32];
    for (int b = 0; b < kNumBands; ++b) {
      std::snprintf(buf, sizeof buf, "%.17g ", surfaces.surfaces[s].alphas[b]);
      os << buf;
    }
    kv.set("surface." + std::to_string(s), os.str());
  }
  set_vec(kv, "source.pos", source.position);
  set_vec(kv, "source.look", source.orientation.look);
  set_vec(kv, "source.up", source.orientation.up);
  kv.set("source.pattern", pattern_to_string(source.pattern));
  set_vec(kv, "array.center", receiver.center);
  set_vec(kv, "array.look", receiver.orientation.look);
  set_vec(kv, "array.up", receiver.orientation.up);
  kv.set("array.mode", receiver.array.mode == ReceiverMode::per_microphone
                           ? "per_mic"
                           : "centered");
  kv.set_int("array.n_mics", static_cast<long long>(receiver.array.mics.size()));
  for (std::size_t m = 0; m < receiver.array.mics.size(); ++m) {
    const auto& mic = receiver.array.mics[m];
    std::string prefix = "mic." + std::to_string(m);
    set_vec(kv, prefix + ".pos", mic.position);
    set_vec(kv, prefix + ".look", mic.orientation.look);
    set_vec(kv, prefix + ".up", mic.orientation.up);
    kv.set(prefix + ".pattern", pattern_to_string(mic.pattern));
  }
  set_vec(kv, "aux.pos", aux_noise_source);
  return kv;
}

SceneSpec SceneSpec::from_kv(const KvMap& kv) {
  SceneSpec s;
  s.profile = kv.get_or("profile", "custom");
  std::string mode = kv.get_or("mode", "advanced");
  if (mode != "naive" && mode != "advanced")
    throw ConfigError("scene spec: mode must be naive or advanced");
  s.mode = mode == "naive" ? SimMode::naive : SimMode::advanced;
  s.fs = kv.get_double_or("fs", kSceneFs);
  s.max_order = static_cast<int>(kv.get_int_or("max_order", 20));
  s.seed = kv.has("seed") ? kv.get_u64("seed") : 0;
  s.room.dims = get_vec(kv, "room.dims");
  for (int sf = 0; sf < kNumSurfaces; ++sf) {
    auto alphas = kv.get_doubles("surface." + std::to_string(sf));
    if (alphas.size() != kNumBands)
      throw ConfigError("scene spec: surface." + std::to_string(sf) +
                        " needs 6 coefficients");
    for (int b = 0; b < kNumBands; ++b) s.surfaces.surfaces[sf].alphas[b] = alphas[b];
  }
  s.source.position = get_vec(kv, "source.pos");
  s.source.orientation.look = get_vec(kv, "source.look");
  s.source.orientation.up = get_vec(kv, "source.up");
  s.source.pattern = pattern_from_string(kv.get("source.pattern"));
  s.receiver.center = get_vec(kv, "array.center");
  s.receiver.orientation.look = get_vec(kv, "array.look");
  s.receiver.orientation.up = get_vec(kv, "array.up");
  std::string amode = kv.get_or("array.mode", "per_mic");
  s.receiver.array.mode = amode == "centered" ? ReceiverMode::array_centered
                                              : ReceiverMode::per_microphone;
  auto n_mics = kv.get_int("array.n_mics");
  for (long long m = 0; m < n_mics; ++m) {
    std::string prefix = "mic." + std::to_string(m);
    ArrayMic mic;
    mic.position = get_vec(kv, prefix + ".pos");
    mic.orientation.look = get_vec(kv, prefix + ".look");
    mic.orientation.up = get_vec(kv, prefix + ".up");
    mic.pattern = pattern_from_string(kv.get(prefix + ".pattern"));
    s.receiver.array.mics.push_back(std::move(mic));
  }
  s.aux_noise_source = kv.has("aux.pos") ? get_vec(kv, "aux.pos") : s.source.position;
  return s;
}

}  // namespace ismf
