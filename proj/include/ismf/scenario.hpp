// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_SCENARIO_HPP_
#define ISMF_SCENARIO_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ismf/ism_engine.hpp"
#include "ismf/kv.hpp"
#include "ismf/manifest.hpp"
#include "ismf/math_util.hpp"

namespace ismf {

inline constexpr double kSceneFs = 16000.0;
inline constexpr double kSampleSeconds = 2.0;
inline constexpr double kMinWallDistance = 0.3;
inline constexpr double kMinSourceArrayDistance = 0.3;
inline constexpr double kWallStandoff = 0.01;  // wall-mounted array offset
inline constexpr int kMaxSceneRejections = 10000;

/// Two-microphone recording scenario: aperture plus the advanced-mode source
/// and receiver responses. Naive mode always uses free-space omni receivers.
struct ScenarioProfile {
  std::string name;
  double aperture_m = 0.1;
  bool wall_mounted_advanced = false;
  DirectivityPattern source_pattern_advanced;  // talker stand-in by default
  DirectivityPattern mic_pattern_advanced;     // per-capsule response
  bool mic_looks_outward = false;  // orient capsules along the pair axis

  /// voicehome (10.4 cm, omni mics in both modes), dirha (30 cm,
  /// wall-mounted half-sphere mics in advanced mode), starss (6.8 cm,
  /// baffled-capsule stand-in in advanced mode).
  static ScenarioProfile by_name(const std::string& name);
};

struct NoiseConfig {
  bool enabled = true;
  double snr_mean_db = 40.0;
  double snr_sd_db = 10.0;
  double snr_clip_lo_db = 15.0;
  double snr_clip_hi_db = 75.0;
  double white_fraction = 0.1;  // white/diffuse power split
  double late_onset_s = 0.05;   // diffuse noise uses the RIR past this point

  double draw_snr_db(RandomStream& rng) const;
};

/// Fully-specified random scene; everything needed to build RIR requests.
struct SceneSpec {
  Shoebox room;
  SurfaceSet surfaces;
  SourceSpec source;
  ReceiverSpec receiver;
  Vec3 aux_noise_source;  // same-room source used for the diffuse-noise RIR
  SimMode mode = SimMode::advanced;
  double fs = kSceneFs;
  int max_order = 20;
  std::string profile;
  std::uint64_t seed = 0;

  Vec3 mic_position(int m) const;
  Vec3 pair_axis() const;  // unit vector mic0 -> mic1, world frame
  double aperture() const;

  RirRequest main_request() const;
  RirRequest noise_request() const;  // aux source, omni, same surfaces/mode

  std::uint64_t digest() const;
  KvMap to_kv() const;
  static SceneSpec from_kv(const KvMap& kv);
};

/// Per-sample stream derivation: every concern draws from its own stream so
/// naive/advanced datasets generated from one master seed share geometry.
enum class SceneStream : std::uint64_t {
  geometry = 1,
  materials = 2,
  source_orientation = 3,
  speech = 4,
  render = 5,
};
RandomStream scene_stream(std::uint64_t master_seed, std::uint64_t index,
                          SceneStream which, SimMode mode);

/// Rejection-sample a scene satisfying all placement invariants. Deterministic
/// in (master_seed, index); room dimensions and poses are mode-independent
/// for free-space profiles. Throws after kMaxSceneRejections draws.
SceneSpec sample_scene(SimMode mode, const ScenarioProfile& profile,
                       std::uint64_t master_seed, std::uint64_t index = 0);

/// Angle in [0, 180] degrees between the mic0->mic1 axis and the
/// array-center -> source direction.
double ground_truth_doa(const SceneSpec& scene);

struct Sample {
  std::vector<std::vector<double>> audio;  // 2 x (2 s * fs)
  double fs = kSceneFs;
  double doa_true_deg = 0.0;
  double snr_db = 0.0;  // +inf when noise is disabled
  std::uint64_t scene_digest = 0;
};

/// Convolve dry speech through the scene RIR, crop a 2 s window containing
/// speech energy, and add white + diffuse speech-shaped noise at an SNR drawn
/// from the noise config. dry_speech must be mono 16 kHz, >= 2 s.
/// Draw order on rng: crop window, SNR, white noise, shaped noise.
Sample render_sample(const SceneSpec& scene, const std::vector<double>& dry_speech,
                     const NoiseConfig& noise, RandomStream& rng);

/// 9-tap FIR approximating the long-term speech spectrum envelope
/// (flat below 500 Hz, -6 dB/octave above).
std::vector<double> speech_shaping_fir();

struct DatasetConfig {
  ScenarioProfile profile = ScenarioProfile::by_name("voicehome");
  SimMode mode = SimMode::advanced;
  std::size_t n = 0;
  std::uint64_t master_seed = 0;
  std::string dry_dir;
  std::string out_dir;
  NoiseConfig noise;
  int workers = 1;
  int max_order = 20;
  double val_fraction = 0.05;

  KvMap provenance() const;  // effective values, written to manifest headers
};

struct DatasetSummary {
  std::string manifest_path;
  std::size_t n_train = 0, n_val = 0;
};

/// Generate n samples in parallel and write wav/<id>.wav plus manifest.txt,
/// manifest_train.txt and manifest_val.txt under out_dir. Byte-identical
/// across reruns and worker counts. Any failure removes the manifests.
DatasetSummary generate_dataset(const DatasetConfig& config);

}  // namespace ismf

#endif  // ISMF_SCENARIO_HPP_
