// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/materials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ismf/fft.hpp"

namespace ismf {

namespace {
constexpr double kMagnitudeFloor = 1e-6;
}

SurfaceSet SurfaceSet::flat(double alpha) {
  SurfaceSet set;
  for (auto& s : set.surfaces) s.alphas.fill(alpha);
  return set;
}

double interp_band_value(const std::array<double, kNumBands>& values,
                         const std::array<double, kNumBands>& centers, double f) {
  if (f <= centers.front()) return values.front();
  if (f >= centers.back()) return values.back();
  int b = 0;
  while (f > centers[b + 1]) ++b;
  double x = std::log(f / centers[b]) / std::log(centers[b + 1] / centers[b]);
  double w = 0.5 * (1.0 + std::cos(kPi * x));
  return w * values[b] + (1.0 - w) * values[b + 1];
}

std::vector<double> interp_bands_to_bins(const std::array<double, kNumBands>& values,
                                         const std::array<double, kNumBands>& centers,
                                         std::size_t n_fft, double fs) {
  for (int b = 0; b + 1 < kNumBands; ++b)
    if (centers[b + 1] <= centers[b])
      throw std::invalid_argument("band centers must be strictly increasing");
  std::size_t bins = n_fft / 2 + 1;
  std::vector<double> out(bins);
  for (std::size_t i = 0; i < bins; ++i)
    out[i] = interp_band_value(values, centers, static_cast<double>(i) * fs / n_fft);
  return out;
}

double naive_alpha_for_t60(double target_t60, const Shoebox& room) {
  if (target_t60 <= 0.0)
    throw std::invalid_argument("naive absorption: target T60 must be positive");
  double v = room.volume();
  double s = room.surface_area();
  double alpha = 1.0 - std::exp(-0.161 * v / (s * target_t60));
  if (alpha > kMaxFlatAlpha)
    throw std::invalid_argument("naive absorption: target T60 below the achievable range");
  return alpha;
}

double min_naive_t60(const Shoebox& room) {
  return 0.161 * room.volume() /
         (-room.surface_area() * std::log(1.0 - kMaxFlatAlpha));
}

SurfaceSet sample_naive_absorption(double target_t60, const Shoebox& room) {
  return SurfaceSet::flat(naive_alpha_for_t60(target_t60, room));
}

const AdvancedMixture& default_advanced_mixture() {
  static const AdvancedMixture mix = [] {
    AdvancedMixture m;
    m.wall.reflective = {0.05, 0.15, 0.03};
    m.wall.absorptive = {0.25, 0.70, 0.10};
    m.wall.p_reflective = 0.7;
    m.floor.reflective = {0.05, 0.15, 0.03};
    m.floor.absorptive = {0.10, 0.45, 0.10};
    m.floor.p_reflective = 0.5;
    m.ceiling.reflective = {0.05, 0.15, 0.03};
    m.ceiling.absorptive = {0.30, 0.80, 0.10};
    m.ceiling.p_reflective = 0.5;
    return m;
  }();
  return mix;
}

SurfaceSet sample_advanced_absorption(RandomStream& rng,
                                      const AdvancedMixture& mix) {
  auto draw_surface = [&](const SurfaceMixture& sm) {
    AbsorptionProfile p;
    const MaterialCategory& cat =
        rng.uniform() < sm.p_reflective ? sm.reflective : sm.absorptive;
    for (int b = 0; b < kNumBands; ++b) {
      double mean = cat.ramp_lo + (cat.ramp_hi - cat.ramp_lo) * b / (kNumBands - 1.0);
      p.alphas[b] = rng.truncated_normal(mean, cat.sd, mix.clip_lo, mix.clip_hi);
    }
    return p;
  };
  SurfaceSet set;
  for (int s = 0; s < 4; ++s) set.surfaces[s] = draw_surface(mix.wall);
  set.surfaces[4] = draw_surface(mix.floor);
  set.surfaces[5] = draw_surface(mix.ceiling);
  return set;
}

std::vector<double> band_to_dft(const AbsorptionProfile& profile,
                                std::size_t n_fft, double fs) {
  if (n_fft == 0 || (n_fft & (n_fft - 1)) != 0)
    throw std::invalid_argument("band_to_dft: n_fft must be a power of two");
  if (fs <= 2.0 * profile.band_centers.back())
    throw std::invalid_argument("band_to_dft: fs must exceed twice the top band center");
  std::array<double, kNumBands> mags;
  for (int b = 0; b < kNumBands; ++b) {
    double a = profile.alphas[b];
    if (a <= 0.0 || a > 1.0)
      throw std::invalid_argument("band_to_dft: alpha out of (0, 1]");
    mags[b] = std::sqrt(1.0 - a);
  }
  return interp_bands_to_bins(mags, profile.band_centers, n_fft, fs);
}

ReflectionSpectrum minimum_phase(const std::vector<double>& magnitude) {
  std::size_t bins = magnitude.size();
  if (bins < 2) throw std::invalid_argument("minimum_phase: too few bins");
  std::size_t n = (bins - 1) * 2;
  if ((n & (n - 1)) != 0)
    throw std::invalid_argument("minimum_phase: bins must be n_fft/2+1 for power-of-two n_fft");

  std::vector<double> floored(bins);
  for (std::size_t i = 0; i < bins; ++i)
    floored[i] = std::max(magnitude[i], kMagnitudeFloor);

  // real cepstrum of the (even, real) log-magnitude spectrum
  std::vector<std::complex<double>> log_spec(bins);
  for (std::size_t i = 0; i < bins; ++i) log_spec[i] = {std::log(floored[i]), 0.0};
  std::vector<double> cepstrum(n);
  fft::irfft(log_spec, cepstrum);

  // fold the anti-causal half onto the causal half
  std::vector<double> folded(n, 0.0);
  folded[0] = cepstrum[0];
  for (std::size_t i = 1; i < n / 2; ++i) folded[i] = 2.0 * cepstrum[i];
  folded[n / 2] = cepstrum[n / 2];

  std::vector<std::complex<double>> log_min(bins);
  fft::rfft(folded, log_min);

  // keep the exact input magnitude; only the phase comes from the cepstrum
  ReflectionSpectrum out;
  out.gains.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    double phase = log_min[i].imag();
    out.gains[i] = std::polar(floored[i], phase);
  }
  return out;
}

ReflectionSpectrum compound_reflection(const ImageSource& image,
                                       const SurfaceSet& surfaces,
                                       std::size_t n_fft, double fs) {
  int total = 0;
  for (int c : image.reflection_counts) total += c;
  if (total != image.order)
    throw std::invalid_argument("compound_reflection: counts inconsistent with order");

  std::size_t bins = n_fft / 2 + 1;
  ReflectionSpectrum out;
  out.gains.assign(bins, {1.0, 0.0});
  for (int s = 0; s < kNumSurfaces; ++s) {
    int c = image.reflection_counts[s];
    if (c == 0) continue;
    ReflectionSpectrum r = minimum_phase(band_to_dft(surfaces.surfaces[s], n_fft, fs));
    for (int k = 0; k < c; ++k)
      for (std::size_t i = 0; i < bins; ++i) out.gains[i] *= r.gains[i];
  }
  return out;
}

double air_attenuation(double r, double f) {
  if (r < 0.0) throw std::invalid_argument("air_attenuation: r must be >= 0");
  if (r == 0.0) return 1.0;
  double a = interp_band_value(kAirAttenuation, kBandCenters, f);
  return std::exp(-a * r / 2.0);
}

std::vector<double> air_half_exponent_bins(std::size_t n_fft, double fs) {
  std::array<double, kNumBands> half;
  for (int b = 0; b < kNumBands; ++b) half[b] = kAirAttenuation[b] / 2.0;
  return interp_bands_to_bins(half, kBandCenters, n_fft, fs);
}

std::array<double, kNumBands> eyring_t60(const Shoebox& room,
                                         const SurfaceSet& surfaces) {
  const Vec3& d = room.dims;
  std::array<double, kNumSurfaces> areas = {d.y * d.z, d.y * d.z, d.x * d.z,
                                            d.x * d.z, d.x * d.y, d.x * d.y};
  double s_total = room.surface_area();
  double v = room.volume();
  std::array<double, kNumBands> t60;
  bool any_positive = false;
  for (int b = 0; b < kNumBands; ++b) {
    double mean_alpha = 0.0;
    for (int s = 0; s < kNumSurfaces; ++s)
      mean_alpha += areas[s] * surfaces.surfaces[s].alphas[b];
    mean_alpha /= s_total;
    if (mean_alpha > 0.0) any_positive = true;
    if (mean_alpha >= 1.0) {
      t60[b] = 0.0;  // limiting case: -ln(0) -> infinity
    } else if (mean_alpha <= 0.0) {
      t60[b] = std::numeric_limits<double>::infinity();
    } else {
      t60[b] = 0.161 * v / (-s_total * std::log(1.0 - mean_alpha));
    }
  }
  if (!any_positive)
    throw std::invalid_argument("eyring_t60: all absorption coefficients are zero");
  return t60;
}

}  // namespace ismf
