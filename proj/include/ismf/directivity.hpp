// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_DIRECTIVITY_HPP_
#define ISMF_DIRECTIVITY_HPP_

#include <complex>
#include <string>
#include <vector>

#include "ismf/geometry.hpp"

namespace ismf {

/// Right-handed local frame: x' = look, z' = up, y' = up x look.
/// Azimuth is measured from look toward y' in [0, 360) deg, elevation from
/// the horizontal plane toward up in [-90, 90] deg.
struct Orientation {
  Vec3 look{1.0, 0.0, 0.0};
  Vec3 up{0.0, 0.0, 1.0};

  /// Frame from a look direction alone, picking a stable up vector.
  static Orientation from_look(const Vec3& look);

  bool orthonormal(double tol = 1e-9) const;
  /// World coordinates of a vector given in the local frame.
  Vec3 to_world(const Vec3& local) const;
  /// Local coordinates of a world vector.
  Vec3 to_local(const Vec3& world) const;
};

enum class PatternKind { omni, cardioid_family, half_sphere, measured_grid };

/// Source/receiver directional response. Analytic kinds are frequency-flat;
/// measured grids carry a direction x frequency complex gain table sampled on
/// an azimuth x elevation product grid.
struct DirectivityPattern {
  PatternKind kind = PatternKind::omni;

  // cardioid_family: gain = (a + (1-a) * cos(angle to look))^p.
  // Non-integer p needs a >= 0.5 so the base stays non-negative.
  double cardioid_a = 0.5;
  double cardioid_p = 1.0;

  // measured_grid
  std::vector<double> azimuths_deg;    // ascending, [0, 360)
  std::vector<double> elevations_deg;  // ascending, [-90, 90]
  std::vector<double> freqs_hz;        // ascending
  // gain[(ia * n_el + ie) * n_freq + if], direction-major / frequency-minor
  std::vector<std::complex<double>> gains;

  static DirectivityPattern make_omni() { return {}; }
  static DirectivityPattern make_cardioid(double a, double p) {
    DirectivityPattern d;
    d.kind = PatternKind::cardioid_family;
    d.cardioid_a = a;
    d.cardioid_p = p;
    return d;
  }
  static DirectivityPattern make_half_sphere() {
    DirectivityPattern d;
    d.kind = PatternKind::half_sphere;
    return d;
  }
};

/// Response toward a unit direction at frequency f. Direction must be unit
/// norm within 1e-6. omni is exactly 1; half_sphere is 1 when
/// direction . look >= 0 and 0 otherwise; measured grids use the nearest
/// direction sample and linear interpolation between bracketing frequencies
/// (flat extrapolation outside the measured range).
std::complex<double> eval_pattern(const DirectivityPattern& p,
                                  const Orientation& o, const Vec3& direction,
                                  double f);

/// Parse a measured-pattern file (format below). Malformed input throws
/// std::runtime_error naming the offending line.
DirectivityPattern load_pattern(const std::string& path);
void save_pattern(const DirectivityPattern& p, const std::string& path);

// Measured-pattern file grammar (decimal ASCII, '#' comments allowed):
//   ISMF-DIR v1
//   freqs <n> <f_1> ... <f_n>            (Hz, strictly increasing)
//   azimuths <n> <az_1> ... <az_n>       (deg)
//   elevations <n> <el_1> ... <el_n>     (deg)
//   <az> <el> <f> <re> <im>              one row per (direction, frequency),
//                                        direction-major, frequency-minor
// Directions form the azimuth x elevation product grid; at least 4 direction
// samples and 1 frequency are required.

/// Half-sphere receiver pattern for an array mounted on a wall, looking along
/// the inward normal.
DirectivityPattern wall_mount(const Vec3& pattern_look);

/// Microphone array: positions and patterns relative to the array frame.
struct ArrayMic {
  Vec3 position;  // meters, in the array frame
  DirectivityPattern pattern;
  Orientation orientation;  // in the array frame
};

enum class ReceiverMode { array_centered, per_microphone };

struct ArrayGeometry {
  std::vector<ArrayMic> mics;
  ReceiverMode mode = ReceiverMode::per_microphone;
};

}  // namespace ismf

#endif  // ISMF_DIRECTIVITY_HPP_
