// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_MATH_UTIL_HPP_
#define ISMF_MATH_UTIL_HPP_

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace ismf {

inline constexpr double kSpeedOfSound = 343.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// exp(x) accurate to ~2e-14 relative for |x| <= 500. Branch-free core
/// (magic-constant rounding, integer exponent assembly) so the compiler can
/// vectorize loops over arrays of exponents; used in the per-bin
/// air-attenuation kernel where std::exp is too slow.
inline double fast_exp(double x) {
  constexpr double inv_ln2 = 1.4426950408889634074;
  constexpr double ln2_hi = 6.93147180369123816490e-01;
  constexpr double ln2_lo = 1.90821492927058770002e-10;
  constexpr double round_magic = 0x1.8p52;  // 2^52 + 2^51
  double y = x * inv_ln2;
  double big = y + round_magic;
  double n = big - round_magic;  // nearest integer to y, as a double
  // the rounded integer sits in the low mantissa bits of `big`
  std::int64_t ni =
      (std::bit_cast<std::int64_t>(big) & 0xFFFFFFFFFFFFFLL) - 0x8000000000000LL;
  double scale = std::bit_cast<double>((ni + 1023) << 52);
  double r = (x - n * ln2_hi) - n * ln2_lo;  // |r| <= ln2/2
  // degree-11 Taylor of e^r; max term r^12/12! ~ 2e-15 at |r| = 0.347
  double p = 1.0 / 39916800.0;
  p = p * r + 1.0 / 3628800.0;
  p = p * r + 1.0 / 362880.0;
  p = p * r + 1.0 / 40320.0;
  p = p * r + 1.0 / 5040.0;
  p = p * r + 1.0 / 720.0;
  p = p * r + 1.0 / 120.0;
  p = p * r + 1.0 / 24.0;
  p = p * r + 1.0 / 6.0;
  p = p * r + 0.5;
  p = p * r + 1.0;
  p = p * r + 1.0;
  return p * scale;
}

inline double sinc_pi(double x) {
  if (x == 0.0) return 1.0;
  return std::sin(kPi * x) / (kPi * x);
}

/// Modified Bessel function of the first kind, order zero (power series).
inline double bessel_i0(double x) {
  double sum = 1.0, term = 1.0;
  double half_x2 = 0.25 * x * x;
  for (int k = 1; k < 64; ++k) {
    term *= half_x2 / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Seeded random stream with distributions implemented on top of the
/// standard-defined mt19937_64 output sequence, so draws are bit-identical
/// across platforms and library versions (std::*_distribution is not).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  /// Derive a child stream; independent draws per (seed, tag...) tuple.
  static RandomStream derive(std::uint64_t master, std::uint64_t a,
                             std::uint64_t b = 0) {
    return RandomStream(splitmix64(splitmix64(master ^ a * 0x9e3779b97f4a7c15ULL) + b));
  }

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] via rejection-free Lemire-style reduction.
  std::uint64_t uniform_index(std::uint64_t n) {
    // 64-bit multiply-shift; bias < 2^-64, irrelevant at our scales
    unsigned __int128 m = static_cast<unsigned __int128>(eng_()) * n;
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal via Box-Muller (cosine branch; one draw per call).
  double normal() {
    double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  /// Normal truncated to [lo, hi] by rejection.
  double truncated_normal(double mean, double sd, double lo, double hi) {
    for (;;) {
      double x = normal(mean, sd);
      if (x >= lo && x <= hi) return x;
    }
  }

 private:
  std::mt19937_64 eng_;
};

}  // namespace ismf

#endif  // ISMF_MATH_UTIL_HPP_
