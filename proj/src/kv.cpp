// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/kv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ismf {

namespace {
std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}
}  // namespace

KvMap KvMap::parse_text(const std::string& text, const std::string& origin) {
  KvMap kv;
  kv.origin_ = origin;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(line_no) +
                        ": expected 'key = value'");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty())
      throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
    kv.set(key, value);
  }
  return kv;
}

KvMap KvMap::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

std::optional<std::size_t> KvMap::find(const std::string& key) const {
  for (std::size_t i = 0; i < items_.size(); ++i)
    if (items_[i].first == key) return i;
  return std::nullopt;
}

bool KvMap::has(const std::string& key) const { return find(key).has_value(); }

const std::string& KvMap::get(const std::string& key) const {
  auto i = find(key);
  if (!i) throw ConfigError(origin_ + ": missing key '" + key + "'");
  return items_[*i].second;
}

std::string KvMap::get_or(const std::string& key, const std::string& fallback) const {
  auto i = find(key);
  return i ? items_[*i].second : fallback;
}

double KvMap::get_double(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return d;
  } catch (...) {
    throw ConfigError(origin_ + ": key '" + key + "' is not a number: " + v);
  }
}

double KvMap::get_double_or(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KvMap::get_int(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t pos = 0;
    long long n = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return n;
  } catch (...) {
    throw ConfigError(origin_ + ": key '" + key + "' is not an integer: " + v);
  }
}

long long KvMap::get_int_or(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::uint64_t KvMap::get_u64(const std::string& key) const {
  const std::string& v = get(key);
  try {
    std::size_t pos = 0;
    std::uint64_t n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return n;
  } catch (...) {
    throw ConfigError(origin_ + ": key '" + key + "' is not an unsigned integer: " + v);
  }
}

std::vector<double> KvMap::get_doubles(const std::string& key) const {
  std::istringstream is(get(key));
  std::vector<double> out;
  double d;
  while (is >> d) out.push_back(d);
  if (!is.eof())
    throw ConfigError(origin_ + ": key '" + key + "' is not a number list");
  return out;
}

void KvMap::set(const std::string& key, const std::string& value) {
  auto i = find(key);
  if (i)
    items_[*i].second = value;
  else
    items_.emplace_back(key, value);
}

void KvMap::set_double(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  set(key, buf);
}

void KvMap::set_int(const std::string& key, long long value) {
  set(key, std::to_string(value));
}

void KvMap::set_u64(const std::string& key, std::uint64_t value) {
  set(key, std::to_string(value));
}

std::string KvMap::serialize() const {
  std::ostringstream os;
  for (const auto& [k, v] : items_) os << k << " = " << v << "\n";
  return os.str();
}

}  // namespace ismf
