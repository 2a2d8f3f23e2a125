// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_MANIFEST_HPP_
#define ISMF_MANIFEST_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ismf/kv.hpp"

namespace ismf {

// Dataset manifest, version `ISMF-MAN v1`:
//   line 1: ISMF-MAN v1
//   `# key = value` provenance lines (full effective configuration)
//   one tab-separated record per sample:
//     id  wav_path  fs  doa_true_deg  snr_db  mode  scene_digest  seed
// wav_path is relative to the manifest's directory; scene_digest and seed are
// hexadecimal.

struct ManifestEntry {
  std::string id;
  std::string wav_path;
  double fs = 0.0;
  double doa_true_deg = 0.0;
  double snr_db = 0.0;
  std::string mode;
  std::uint64_t scene_digest = 0;
  std::uint64_t seed = 0;
};

struct Manifest {
  KvMap header;
  std::vector<ManifestEntry> entries;
  std::string dir;  // directory of the manifest file, for resolving wav paths

  std::string resolve_wav(const ManifestEntry& e) const;
};

void write_manifest(const std::string& path, const KvMap& header,
                    const std::vector<ManifestEntry>& entries);
Manifest read_manifest(const std::string& path);

// Evaluation results, version `ISMF-RES v1`: same header layout, records
//   id  doa_true_deg  doa_hat_deg  error_deg  status
// status is `ok` or an error token; non-ok rows carry nan estimates.

struct ResultRow {
  std::string id;
  double doa_true_deg = 0.0;
  double doa_hat_deg = 0.0;
  double error_deg = 0.0;
  std::string status = "ok";
  bool ok() const { return status == "ok"; }
};

struct ResultsFile {
  KvMap header;
  std::vector<ResultRow> rows;
};

void write_results(const std::string& path, const KvMap& header,
                   const std::vector<ResultRow>& rows);
ResultsFile read_results(const std::string& path);

}  // namespace ismf

#endif  // ISMF_MANIFEST_HPP_
