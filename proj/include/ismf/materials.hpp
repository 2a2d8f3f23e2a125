// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_MATERIALS_HPP_
#define ISMF_MATERIALS_HPP_

#include <array>
#include <complex>
#include <vector>

#include "ismf/geometry.hpp"
#include "ismf/math_util.hpp"

namespace ismf {

inline constexpr int kNumBands = 6;
/// Standard octave-band ladder.
inline constexpr std::array<double, kNumBands> kBandCenters = {
    125.0, 250.0, 500.0, 1000.0, 2000.0, 4000.0};

/// Per-meter energy attenuation of air per octave band (20 C, 50 %RH class
/// values); pressure gain over distance r is exp(-a*r/2).
inline constexpr std::array<double, kNumBands> kAirAttenuation = {
    0.0002, 0.0004, 0.0008, 0.0016, 0.004, 0.012};

struct AbsorptionProfile {
  std::array<double, kNumBands> band_centers = kBandCenters;
  std::array<double, kNumBands> alphas{};  // energy absorption, (0, 1]
};

/// One profile per room surface, indexed like ImageSource::reflection_counts
/// (x=0, x=Lx, y=0, y=Ly, floor z=0, ceiling z=Lz).
struct SurfaceSet {
  std::array<AbsorptionProfile, kNumSurfaces> surfaces;

  static SurfaceSet flat(double alpha);
  const AbsorptionProfile& floor() const { return surfaces[4]; }
  const AbsorptionProfile& ceiling() const { return surfaces[5]; }
};

/// Complex reflection response on an n_fft/2+1 real-frequency grid.
struct ReflectionSpectrum {
  std::vector<std::complex<double>> gains;
  std::size_t n_bins() const { return gains.size(); }
};

/// Half-cosine (raised-cosine on a log-frequency axis) interpolation of
/// per-band values onto the DFT bin grid, flat outside the band range.
std::vector<double> interp_bands_to_bins(const std::array<double, kNumBands>& values,
                                         const std::array<double, kNumBands>& centers,
                                         std::size_t n_fft, double fs);

/// Same interpolation evaluated at a single frequency.
double interp_band_value(const std::array<double, kNumBands>& values,
                         const std::array<double, kNumBands>& centers, double f);

/// Flat, frequency-independent absorption on all six surfaces such that the
/// Eyring-predicted T60 equals target_t60. Throws std::invalid_argument when
/// the target would need alpha outside (0, kMaxFlatAlpha].
SurfaceSet sample_naive_absorption(double target_t60, const Shoebox& room);

inline constexpr double kMaxFlatAlpha = 0.999;

/// Flat coefficient produced by the Eyring inversion for a target T60.
double naive_alpha_for_t60(double target_t60, const Shoebox& room);
/// Shortest T60 reachable by sample_naive_absorption for this room.
double min_naive_t60(const Shoebox& room);

// Advanced-mode material model: every surface draws a reflective/absorptive
// category, then per-band coefficients from a truncated normal whose mean
// ramps linearly (in band index) from ramp_lo at 125 Hz to ramp_hi at 4 kHz.
struct MaterialCategory {
  double ramp_lo, ramp_hi, sd;
};
struct SurfaceMixture {
  MaterialCategory reflective, absorptive;
  double p_reflective;
};
struct AdvancedMixture {
  SurfaceMixture wall, floor, ceiling;
  double clip_lo = 0.01, clip_hi = 0.99;
};

/// Default mixture, tuned so the advanced T60 population overlaps the naive
/// one (uniform targets in [0.2, 1.0] s over the standard room distribution).
const AdvancedMixture& default_advanced_mixture();

/// Per-surface, per-band absorption draw from the category mixtures.
/// Deterministic given the stream state.
SurfaceSet sample_advanced_absorption(RandomStream& rng,
                                      const AdvancedMixture& mix = default_advanced_mixture());

/// Reflection magnitude sqrt(1 - alpha) interpolated onto the bin grid.
std::vector<double> band_to_dft(const AbsorptionProfile& profile,
                                std::size_t n_fft, double fs);

/// Minimum-phase spectrum with exactly the given magnitude (floored at 1e-6);
/// the phase comes from the real-cepstrum reconstruction.
ReflectionSpectrum minimum_phase(const std::vector<double>& magnitude);

/// Product over surfaces of that surface's reflection spectrum raised to its
/// reflection count. Order-0 images give a unity spectrum.
ReflectionSpectrum compound_reflection(const ImageSource& image,
                                       const SurfaceSet& surfaces,
                                       std::size_t n_fft, double fs);

/// Air attenuation pressure gain exp(-a(f)*r/2), a(f) interpolated from
/// kAirAttenuation. r = 0 gives exactly 1.
double air_attenuation(double r, double f);

/// Half energy-attenuation exponent a(f_i)/2 per DFT bin; the engine applies
/// gain = exp(-exponent * r) per image.
std::vector<double> air_half_exponent_bins(std::size_t n_fft, double fs);

/// Eyring reverberation time per octave band:
/// T60 = 0.161 V / (-S ln(1 - mean_alpha)), area-weighted mean absorption.
/// Throws std::invalid_argument when every coefficient is zero.
std::array<double, kNumBands> eyring_t60(const Shoebox& room,
                                         const SurfaceSet& surfaces);

}  // namespace ismf

#endif  // ISMF_MATERIALS_HPP_
