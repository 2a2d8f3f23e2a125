// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

#include "ismf/doa.hpp"
#include "ismf/ism_engine.hpp"
#include "ismf/manifest.hpp"
#include "ismf/metrics.hpp"
#include "ismf/parallel.hpp"
#include "ismf/scenario.hpp"
#include "ismf/wav.hpp"

namespace ismf::cli {

namespace {

namespace fsys = std::filesystem;

struct GenOptions {
  std::string config_file;
  std::string profile = "voicehome";
  std::string mode = "advanced";
  std::size_t n = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string dry_dir;
  std::string out_dir;
  int workers = default_workers();
  int max_order = 20;
  bool no_noise = false;
  std::string source_pattern_file;
  std::string mic_pattern_file;
};

SimMode parse_mode(const std::string& mode) {
  if (mode == "naive") return SimMode::naive;
  if (mode == "advanced") return SimMode::advanced;
  throw ConfigError("mode must be 'naive' or 'advanced', got '" + mode + "'");
}

DatasetConfig build_dataset_config(const GenOptions& opt, CLI::App* sub) {
  KvMap file;
  if (!opt.config_file.empty()) file = KvMap::parse_file(opt.config_file);
  auto pick_str = [&](const char* flag, const std::string& cli_value,
                      const std::string& key, const std::string& fallback) {
    if (sub->count(flag)) return cli_value;
    return file.get_or(key, fallback);
  };

  DatasetConfig cfg;
  cfg.profile = ScenarioProfile::by_name(pick_str("--profile", opt.profile, "profile", "voicehome"));
  cfg.mode = parse_mode(pick_str("--mode", opt.mode, "mode", "advanced"));
  cfg.n = sub->count("--n") ? opt.n
                            : static_cast<std::size_t>(file.get_int_or("n", 0));
  if (opt.seed_set)
    cfg.master_seed = opt.seed;
  else if (file.has("master_seed"))
    cfg.master_seed = file.get_u64("master_seed");
  else
    throw ConfigError("--seed is required (no implicit entropy)");
  cfg.dry_dir = pick_str("--dry", opt.dry_dir, "dry_dir", "");
  cfg.out_dir = pick_str("--out", opt.out_dir, "out_dir", "");
  cfg.workers = sub->count("--workers")
                    ? opt.workers
                    : static_cast<int>(file.get_int_or("workers", opt.workers));
  cfg.max_order = sub->count("--max-order")
                      ? opt.max_order
                      : static_cast<int>(file.get_int_or("max_order", 20));
  cfg.noise.enabled = !opt.no_noise && file.get_int_or("noise.enabled", 1) != 0;
  cfg.noise.snr_mean_db = file.get_double_or("noise.snr_mean_db", cfg.noise.snr_mean_db);
  cfg.noise.snr_sd_db = file.get_double_or("noise.snr_sd_db", cfg.noise.snr_sd_db);
  cfg.noise.snr_clip_lo_db =
      file.get_double_or("noise.snr_clip_lo_db", cfg.noise.snr_clip_lo_db);
  cfg.noise.snr_clip_hi_db =
      file.get_double_or("noise.snr_clip_hi_db", cfg.noise.snr_clip_hi_db);
  cfg.noise.white_fraction =
      file.get_double_or("noise.white_fraction", cfg.noise.white_fraction);
  cfg.noise.late_onset_s = file.get_double_or("noise.late_onset_s", cfg.noise.late_onset_s);
  cfg.val_fraction = file.get_double_or("val_fraction", cfg.val_fraction);

  std::string src_file = pick_str("--source-pattern", opt.source_pattern_file,
                                  "source_pattern_file", "");
  if (!src_file.empty()) cfg.profile.source_pattern_advanced = load_pattern(src_file);
  std::string mic_file =
      pick_str("--mic-pattern", opt.mic_pattern_file, "mic_pattern_file", "");
  if (!mic_file.empty()) cfg.profile.mic_pattern_advanced = load_pattern(mic_file);

  // validation before any work
  if (cfg.n == 0) throw ConfigError("sample count --n must be positive");
  if (cfg.dry_dir.empty() || !fsys::is_directory(cfg.dry_dir))
    throw ConfigError("dry speech directory not found: '" + cfg.dry_dir + "'");
  if (cfg.out_dir.empty()) throw ConfigError("--out directory is required");
  if (cfg.workers < 1) throw ConfigError("--workers must be >= 1");
  return cfg;
}

int cmd_gen(const GenOptions& opt, CLI::App* sub) {
  DatasetConfig cfg = build_dataset_config(opt, sub);
  DatasetSummary summary = generate_dataset(cfg);
  std::printf("wrote %zu samples (%zu train / %zu val) to %s\n", cfg.n,
              summary.n_train, summary.n_val, cfg.out_dir.c_str());
  std::printf("manifest: %s\n", summary.manifest_path.c_str());
  return 0;
}

int cmd_rir(const std::string& scene_file, const std::string& out_wav,
            const std::string& dump_file) {
  SceneSpec scene = SceneSpec::from_kv(KvMap::parse_file(scene_file));
  RirRequest req = scene.main_request();
  Rir rir = synthesize_rir(req);
  write_wav_float32(out_wav, rir.channels, static_cast<int>(rir.fs));

  KvMap meta;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(rir.request_digest));
  meta.set("request_digest", buf);
  meta.set_u64("seed", rir.seed);
  meta.set_double("fs", rir.fs);
  meta.set_int("n_samples", static_cast<long long>(rir.length()));
  meta.set_int("n_channels", static_cast<long long>(rir.channels.size()));
  meta.set("mode", scene.mode == SimMode::naive ? "naive" : "advanced");
  std::ofstream meta_out(out_wav + ".meta");
  meta_out << meta.serialize();
  if (!meta_out) throw std::runtime_error("cannot write " + out_wav + ".meta");

  std::vector<ImageContribution> rows = image_table(req);
  std::ostream* os = &std::cout;
  std::ofstream dump;
  if (!dump_file.empty()) {
    dump.open(dump_file);
    if (!dump) throw std::runtime_error("cannot write " + dump_file);
    os = &dump;
  }
  Vec3 axis = scene.receiver.array.mics.size() == 2 ? scene.pair_axis()
                                                    : scene.receiver.orientation.look;
  *os << "# k order r_m doa_deg |d| at " << kBandCenters[0];
  for (int b = 1; b < kNumBands; ++b) *os << ' ' << kBandCenters[b];
  *os << " Hz\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const auto& row = rows[k];
    double doa =
        std::acos(std::clamp(axis.dot(row.direction), -1.0, 1.0)) * 180.0 / kPi;
    std::snprintf(buf, sizeof buf, "%.4f", row.distance);
    *os << k << '\t' << row.image.order << '\t' << buf << '\t';
    std::snprintf(buf, sizeof buf, "%.3f", doa);
    *os << buf;
    for (int b = 0; b < kNumBands; ++b) {
      std::snprintf(buf, sizeof buf, "\t%.6f", row.reflection_mag[b]);
      *os << buf;
    }
    *os << '\n';
  }
  std::printf("wrote %s (%zu channels x %zu samples), %zu image rows\n",
              out_wav.c_str(), rir.channels.size(), rir.length(), rows.size());
  return 0;
}

int cmd_eval(const std::string& manifest_path, const std::string& out_path,
             double aperture, int workers) {
  Manifest manifest = read_manifest(manifest_path);
  EstimatorConfig cfg;
  cfg.aperture_m = aperture;
  cfg.workers = workers;
  std::vector<ResultRow> rows = evaluate_dataset(manifest, cfg);
  KvMap header = cfg.provenance();
  if (cfg.aperture_m <= 0.0 && manifest.header.has("aperture_m"))
    header.set("aperture_m", manifest.header.get("aperture_m"));
  header.set("manifest", manifest_path);
  write_results(out_path, header, rows);
  std::size_t ok = 0;
  for (const auto& r : rows)
    if (r.ok()) ++ok;
  std::printf("evaluated %zu samples (%zu ok) -> %s\n", rows.size(), ok,
              out_path.c_str());
  return 0;
}

int cmd_report(const std::vector<std::string>& files,
               const std::string& machine_out) {
  struct Loaded {
    std::string path;
    ResultsFile results;
    EvalSummary summary;
    std::vector<double> errors;      // ok rows only
    std::vector<std::string> ids;    // ok rows only
  };
  std::vector<Loaded> loaded;
  for (const auto& f : files) {
    Loaded l;
    l.path = f;
    l.results = read_results(f);
    for (const auto& row : l.results.rows) {
      if (!row.ok()) continue;
      l.errors.push_back(row.error_deg);
      l.ids.push_back(row.id);
    }
    if (l.errors.empty())
      throw std::runtime_error("report: no successful rows in " + f);
    l.summary = summarize(l.errors);
    loaded.push_back(std::move(l));
  }

  std::ostringstream machine;
  std::printf("%-40s %6s %9s %16s\n", "results", "n", "recall", "mae (deg)");
  for (const auto& l : loaded) {
    std::printf("%-40s %6zu %8.1f%% %9.2f +- %.2f\n", l.path.c_str(), l.summary.n,
                100.0 * l.summary.recall, l.summary.mae_deg, l.summary.mae_ci95_deg);
    machine << "summary\t" << l.path << '\t' << l.summary.n << '\t'
            << l.summary.recall << '\t' << l.summary.mae_deg << '\t'
            << l.summary.mae_ci95_deg << "\n";
  }

  // pairwise significance on the common ok ids
  for (std::size_t a = 0; a < loaded.size(); ++a) {
    for (std::size_t b = a + 1; b < loaded.size(); ++b) {
      std::set<std::string> ids_b(loaded[b].ids.begin(), loaded[b].ids.end());
      std::vector<double> ea, eb;
      std::vector<bool> ha, hb;
      for (std::size_t i = 0; i < loaded[a].ids.size(); ++i) {
        const std::string& id = loaded[a].ids[i];
        if (!ids_b.count(id)) continue;
        auto it = std::find(loaded[b].ids.begin(), loaded[b].ids.end(), id);
        std::size_t j = static_cast<std::size_t>(it - loaded[b].ids.begin());
        ea.push_back(loaded[a].errors[i]);
        eb.push_back(loaded[b].errors[j]);
        ha.push_back(loaded[a].errors[i] < kRecallThresholdDeg);
        hb.push_back(loaded[b].errors[j] < kRecallThresholdDeg);
      }
      if (ea.empty()) {
        std::printf("\n%s vs %s: no common sample ids, skipping tests\n",
                    loaded[a].path.c_str(), loaded[b].path.c_str());
        continue;
      }
      double p = mcnemar(ha, hb);
      PairedDiff diff = paired_mae_ci(ea, eb);
      std::printf("\n%s vs %s (n = %zu paired)\n", loaded[a].path.c_str(),
                  loaded[b].path.c_str(), ea.size());
      std::printf("  recall: %.1f%% vs %.1f%%, McNemar p = %.5g%s\n",
                  100.0 * loaded[a].summary.recall, 100.0 * loaded[b].summary.recall,
                  p, p < 0.05 ? " (significant)" : "");
      std::printf("  mae diff (a - b): %.2f +- %.2f deg%s\n", diff.mean, diff.ci95,
                  diff.significant() ? " (significant)" : "");
      machine << "pair\t" << loaded[a].path << '\t' << loaded[b].path << '\t'
              << ea.size() << '\t' << p << '\t' << diff.mean << '\t' << diff.ci95
              << "\n";
    }
  }

  if (!machine_out.empty()) {
    std::ofstream out(machine_out);
    if (!out) throw std::runtime_error("cannot write " + machine_out);
    out << machine.str();
  }
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"shoebox image-source room simulator and SRP-PHAT evaluation"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* sub_gen = app.add_subcommand("gen", "generate a reverberant-speech dataset");
  sub_gen->add_option("--config", gen.config_file, "key/value config file");
  sub_gen->add_option("--profile", gen.profile, "voicehome | dirha | starss");
  sub_gen->add_option("--mode", gen.mode, "naive | advanced");
  sub_gen->add_option("--n", gen.n, "number of samples");
  sub_gen->add_option("--seed", gen.seed, "master seed (required)")
      ->each([&gen](const std::string&) { gen.seed_set = true; });
  sub_gen->add_option("--dry", gen.dry_dir, "directory of mono dry-speech wavs");
  sub_gen->add_option("--out", gen.out_dir, "output dataset directory");
  sub_gen->add_option("--workers", gen.workers, "parallel workers");
  sub_gen->add_option("--max-order", gen.max_order, "image source order");
  sub_gen->add_flag("--no-noise", gen.no_noise, "disable noise injection");
  sub_gen->add_option("--source-pattern", gen.source_pattern_file,
                      "measured source directivity (ISMF-DIR v1)");
  sub_gen->add_option("--mic-pattern", gen.mic_pattern_file,
                      "measured microphone directivity (ISMF-DIR v1)");

  std::string rir_scene, rir_out = "rir.wav", rir_dump;
  CLI::App* sub_rir = app.add_subcommand("rir", "synthesize one RIR from a scene spec");
  sub_rir->add_option("--scene", rir_scene, "scene spec file (key/value)")->required();
  sub_rir->add_option("--out", rir_out, "output wav path");
  sub_rir->add_option("--dump", rir_dump, "per-image table path (stdout otherwise)");

  std::string eval_manifest, eval_out = "results.txt";
  double eval_aperture = 0.0;
  int eval_workers = default_workers();
  CLI::App* sub_eval = app.add_subcommand("eval", "run SRP-PHAT over a dataset");
  sub_eval->add_option("--manifest", eval_manifest, "dataset manifest")->required();
  sub_eval->add_option("--out", eval_out, "results file path");
  sub_eval->add_option("--aperture", eval_aperture,
                       "mic pair aperture in meters (default: manifest header)");
  sub_eval->add_option("--workers", eval_workers, "parallel workers");

  std::vector<std::string> report_files;
  std::string report_machine;
  CLI::App* sub_report =
      app.add_subcommand("report", "summaries and significance tests over results");
  sub_report->add_option("files", report_files, "results files")->required();
  sub_report->add_option("--machine-out", report_machine, "machine-readable TSV path");

  std::vector<std::string> argv_owned = args;
  std::vector<const char*> argv;
  argv.push_back("ismf");
  for (const auto& a : argv_owned) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (sub_gen->parsed()) return cmd_gen(gen, sub_gen);
    if (sub_rir->parsed()) return cmd_rir(rir_scene, rir_out, rir_dump);
    if (sub_eval->parsed())
      return cmd_eval(eval_manifest, eval_out, eval_aperture, eval_workers);
    if (sub_report->parsed()) return cmd_report(report_files, report_machine);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 2;
}

}  // namespace ismf::cli
