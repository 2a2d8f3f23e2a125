// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/directivity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ismf/math_util.hpp"

namespace ismf {

Orientation Orientation::from_look(const Vec3& look) {
  Orientation o;
  o.look = look.normalized();
  // Gram-Schmidt the world axis least aligned with look
  Vec3 ref = std::abs(o.look.z) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  o.up = (ref - o.look * ref.dot(o.look)).normalized();
  return o;
}

bool Orientation::orthonormal(double tol) const {
  return std::abs(look.norm() - 1.0) < tol && std::abs(up.norm() - 1.0) < tol &&
         std::abs(look.dot(up)) < tol;
}

Vec3 Orientation::to_world(const Vec3& local) const {
  Vec3 ey = up.cross(look);
  return look * local.x + ey * local.y + up * local.z;
}

Vec3 Orientation::to_local(const Vec3& world) const {
  Vec3 ey = up.cross(look);
  return {world.dot(look), world.dot(ey), world.dot(up)};
}

namespace {

std::complex<double> eval_measured(const DirectivityPattern& p,
                                   const Orientation& o, const Vec3& dir,
                                   double f) {
  Vec3 local = o.to_local(dir);
  double az = std::atan2(local.y, local.x) * 180.0 / kPi;
  if (az < 0) az += 360.0;
  double el = std::asin(std::clamp(local.z, -1.0, 1.0)) * 180.0 / kPi;

  // nearest direction sample; azimuth distance is circular
  std::size_t best_a = 0;
  double best_da = 1e300;
  for (std::size_t i = 0; i < p.azimuths_deg.size(); ++i) {
    double d = std::abs(az - p.azimuths_deg[i]);
    d = std::min(d, 360.0 - d);
    if (d < best_da) {
      best_da = d;
      best_a = i;
    }
  }
  std::size_t best_e = 0;
  double best_de = 1e300;
  for (std::size_t i = 0; i < p.elevations_deg.size(); ++i) {
    double d = std::abs(el - p.elevations_deg[i]);
    if (d < best_de) {
      best_de = d;
      best_e = i;
    }
  }

  std::size_t n_f = p.freqs_hz.size();
  const std::complex<double>* row =
      &p.gains[(best_a * p.elevations_deg.size() + best_e) * n_f];
  if (f <= p.freqs_hz.front()) return row[0];
  if (f >= p.freqs_hz.back()) return row[n_f - 1];
  std::size_t hi = 1;
  while (p.freqs_hz[hi] < f) ++hi;
  double f0 = p.freqs_hz[hi - 1], f1 = p.freqs_hz[hi];
  double w = (f - f0) / (f1 - f0);
  return row[hi - 1] * (1.0 - w) + row[hi] * w;
}

}  // namespace

std::complex<double> eval_pattern(const DirectivityPattern& p,
                                  const Orientation& o, const Vec3& direction,
                                  double f) {
  if (std::abs(direction.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("eval_pattern: direction must be unit norm");
  switch (p.kind) {
    case PatternKind::omni:
      return {1.0, 0.0};
    case PatternKind::half_sphere:
      // grazing incidence (dot == 0) counts as inside
      return direction.dot(o.look) >= 0.0 ? std::complex<double>{1.0, 0.0}
                                          : std::complex<double>{0.0, 0.0};
    case PatternKind::cardioid_family: {
      double base = p.cardioid_a + (1.0 - p.cardioid_a) * direction.dot(o.look);
      return {std::pow(base, p.cardioid_p), 0.0};
    }
    case PatternKind::measured_grid:
      return eval_measured(p, o, direction, f);
  }
  return {1.0, 0.0};
}

DirectivityPattern wall_mount(const Vec3& pattern_look) {
  if (std::abs(pattern_look.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("wall_mount: look vector must be unit norm");
  return DirectivityPattern::make_half_sphere();
}

namespace {

[[noreturn]] void format_error(const std::string& path, int line,
                               const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line << ": " << what;
  throw std::runtime_error(os.str());
}

std::vector<double> parse_axis(std::istringstream& is, const std::string& name,
                               const std::string& path, int line) {
  std::size_t n = 0;
  if (!(is >> n) || n == 0) format_error(path, line, "bad " + name + " count");
  std::vector<double> v(n);
  for (auto& x : v)
    if (!(is >> x)) format_error(path, line, "truncated " + name + " list");
  return v;
}

}  // namespace

DirectivityPattern load_pattern(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_pattern: cannot open " + path);

  std::string line;
  int line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      auto pos = line.find('#');
      if (pos != std::string::npos) line.erase(pos);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line() || line.substr(0, 11) != "ISMF-DIR v1")
    format_error(path, line_no, "missing ISMF-DIR v1 magic");

  DirectivityPattern p;
  p.kind = PatternKind::measured_grid;
  for (int axis = 0; axis < 3; ++axis) {
    if (!next_line()) format_error(path, line_no, "truncated header");
    std::istringstream is(line);
    std::string key;
    is >> key;
    if (key == "freqs")
      p.freqs_hz = parse_axis(is, "frequency", path, line_no);
    else if (key == "azimuths")
      p.azimuths_deg = parse_axis(is, "azimuth", path, line_no);
    else if (key == "elevations")
      p.elevations_deg = parse_axis(is, "elevation", path, line_no);
    else
      format_error(path, line_no, "unknown header key '" + key + "'");
  }
  if (p.freqs_hz.empty() || p.azimuths_deg.empty() || p.elevations_deg.empty())
    format_error(path, line_no, "incomplete header");
  for (std::size_t i = 1; i < p.freqs_hz.size(); ++i)
    if (p.freqs_hz[i] <= p.freqs_hz[i - 1])
      format_error(path, line_no, "frequency axis not strictly increasing");
  std::size_t n_dir = p.azimuths_deg.size() * p.elevations_deg.size();
  if (n_dir < 4) format_error(path, line_no, "fewer than 4 direction samples");

  p.gains.resize(n_dir * p.freqs_hz.size());
  for (std::size_t ia = 0; ia < p.azimuths_deg.size(); ++ia) {
    for (std::size_t ie = 0; ie < p.elevations_deg.size(); ++ie) {
      for (std::size_t ifr = 0; ifr < p.freqs_hz.size(); ++ifr) {
        if (!next_line()) format_error(path, line_no, "truncated gain table");
        std::istringstream is(line);
        double az, el, f, re, im;
        if (!(is >> az >> el >> f >> re >> im))
          format_error(path, line_no, "malformed gain row");
        if (std::abs(az - p.azimuths_deg[ia]) > 1e-9 ||
            std::abs(el - p.elevations_deg[ie]) > 1e-9 ||
            std::abs(f - p.freqs_hz[ifr]) > 1e-9)
          format_error(path, line_no, "gain row out of direction-major order");
        if (!std::isfinite(re) || !std::isfinite(im))
          format_error(path, line_no, "non-finite gain");
        p.gains[(ia * p.elevations_deg.size() + ie) * p.freqs_hz.size() + ifr] = {re, im};
      }
    }
  }
  return p;
}

void save_pattern(const DirectivityPattern& p, const std::string& path) {
  if (p.kind != PatternKind::measured_grid)
    throw std::invalid_argument("save_pattern: only measured grids are serializable");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_pattern: cannot open " + path);
  out << "ISMF-DIR v1\n";
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, " %.17g", v);
    out << buf;
  };
  out << "freqs " << p.freqs_hz.size();
  for (double f : p.freqs_hz) put(f);
  out << "\nazimuths " << p.azimuths_deg.size();
  for (double a : p.azimuths_deg) put(a);
  out << "\nelevations " << p.elevations_deg.size();
  for (double e : p.elevations_deg) put(e);
  out << "\n";
  for (std::size_t ia = 0; ia < p.azimuths_deg.size(); ++ia)
    for (std::size_t ie = 0; ie < p.elevations_deg.size(); ++ie)
      for (std::size_t ifr = 0; ifr < p.freqs_hz.size(); ++ifr) {
        const auto& g =
            p.gains[(ia * p.elevations_deg.size() + ie) * p.freqs_hz.size() + ifr];
        std::snprintf(buf, sizeof buf, "%.17g", p.azimuths_deg[ia]);
        out << buf;
        put(p.elevations_deg[ie]);
        put(p.freqs_hz[ifr]);
        put(g.real());
        put(g.imag());
        out << "\n";
      }
  if (!out) throw std::runtime_error("save_pattern: write failed for " + path);
}

}  // namespace ismf
