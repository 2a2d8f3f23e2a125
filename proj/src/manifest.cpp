// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ismf {

namespace {

constexpr const char* kManMagic = "ISMF-MAN v1";
constexpr const char* kResMagic = "ISMF-RES v1";

std::string fmt(double v, const char* spec = "%.6f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

struct Parsed {
  KvMap header;
  std::vector<std::vector<std::string>> records;
};

Parsed parse_records(const std::string& path, const char* magic,
                     std::size_t n_fields) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line != magic)
    throw std::runtime_error(path + ": missing '" + magic + "' magic line");

  Parsed out;
  std::string header_text;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      header_text += line.substr(1) + "\n";
      continue;
    }
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
      auto tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != n_fields)
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(n_fields) +
                               " fields, got " + std::to_string(fields.size()));
    out.records.push_back(std::move(fields));
  }
  out.header = KvMap::parse_text(header_text, path);
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    return std::stod(s);
  } catch (...) {
    throw std::runtime_error(where + ": bad number '" + s + "'");
  }
}

std::uint64_t parse_hex(const std::string& s, const std::string& where) {
  try {
    return std::stoull(s, nullptr, 16);
  } catch (...) {
    throw std::runtime_error(where + ": bad hex value '" + s + "'");
  }
}

}  // namespace

std::string Manifest::resolve_wav(const ManifestEntry& e) const {
  std::filesystem::path p(e.wav_path);
  if (p.is_absolute()) return e.wav_path;
  return (std::filesystem::path(dir) / p).string();
}

void write_manifest(const std::string& path, const KvMap& header,
                    const std::vector<ManifestEntry>& entries) {
  std::ostringstream os;
  os << kManMagic << "\n";
  for (const auto& [k, v] : header.items()) os << "# " << k << " = " << v << "\n";
  char buf[32];
  for (const auto& e : entries) {
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(e.scene_digest));
    std::string digest = buf;
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(e.seed));
    os << e.id << '\t' << e.wav_path << '\t' << fmt(e.fs, "%.0f") << '\t'
       << fmt(e.doa_true_deg) << '\t' << fmt(e.snr_db, "%.3f") << '\t' << e.mode
       << '\t' << digest << '\t' << buf << "\n";
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest: " + path);
  out << os.str();
  if (!out) throw std::runtime_error("manifest write failed: " + path);
}

Manifest read_manifest(const std::string& path) {
  Parsed p = parse_records(path, kManMagic, 8);
  Manifest m;
  m.header = std::move(p.header);
  m.dir = std::filesystem::path(path).parent_path().string();
  for (const auto& f : p.records) {
    ManifestEntry e;
    e.id = f[0];
    e.wav_path = f[1];
    e.fs = parse_double(f[2], path);
    e.doa_true_deg = parse_double(f[3], path);
    e.snr_db = parse_double(f[4], path);
    e.mode = f[5];
    e.scene_digest = parse_hex(f[6], path);
    e.seed = parse_hex(f[7], path);
    m.entries.push_back(std::move(e));
  }
  return m;
}

void write_results(const std::string& path, const KvMap& header,
                   const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << kResMagic << "\n";
  for (const auto& [k, v] : header.items()) os << "# " << k << " = " << v << "\n";
  for (const auto& r : rows) {
    os << r.id << '\t' << fmt(r.doa_true_deg) << '\t' << fmt(r.doa_hat_deg)
       << '\t' << fmt(r.error_deg) << '\t' << r.status << "\n";
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write results: " + path);
  out << os.str();
  if (!out) throw std::runtime_error("results write failed: " + path);
}

ResultsFile read_results(const std::string& path) {
  Parsed p = parse_records(path, kResMagic, 5);
  ResultsFile r;
  r.header = std::move(p.header);
  for (const auto& f : p.records) {
    ResultRow row;
    row.id = f[0];
    row.doa_true_deg = parse_double(f[1], path);
    row.doa_hat_deg = parse_double(f[2], path);
    row.error_deg = parse_double(f[3], path);
    row.status = f[4];
    r.rows.push_back(std::move(row));
  }
  return r;
}

}  // namespace ismf
