// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_DOA_HPP_
#define ISMF_DOA_HPP_

#include <complex>
#include <string>
#include <vector>

#include "ismf/manifest.hpp"

namespace ismf {

// Analysis framing: 42.7 ms symmetric Hann windows (683 samples at 16 kHz)
// with 50 % overlap and 1024-point zero-padded FFTs.
inline constexpr int kStftWindow = 683;
inline constexpr int kStftHop = 341;
inline constexpr int kStftFft = 1024;
inline constexpr double kDoaFs = 16000.0;

struct StftFrames {
  // per channel: frames x bins, row-major
  std::vector<std::vector<std::complex<double>>> spectra;
  std::size_t n_frames = 0;
  std::size_t n_bins = 0;  // kStftFft / 2 + 1
  double fs = kDoaFs;

  const std::complex<double>* frame(std::size_t channel, std::size_t t) const {
    return &spectra[channel][t * n_bins];
  }
};

/// Hann-windowed STFT of multichannel audio at 16 kHz. Input must hold at
/// least one full window.
StftFrames stft(const std::vector<std::vector<double>>& audio, double fs);

/// The symmetric Hann analysis window (exact COLA at 50 % overlap).
std::vector<double> stft_window();

struct DoaGrid {
  double step_deg = 1.0;  // must divide 180
  std::vector<double> angles_deg() const;
};

struct SrpResult {
  double doa_deg = 0.0;
  std::vector<double> pseudo_spectrum;  // per grid angle
};

/// SRP-PHAT over a two-channel STFT with the far-field pair model
/// tdoa(theta) = aperture * cos(theta) / c. Scores sum
/// Re{ phat(X1 X2*) exp(j 2 pi f tdoa) } over frames and band bins;
/// bins with |X1 X2*| < 1e-12 are skipped. Ties break toward 90 degrees.
/// Throws std::runtime_error when the input is all zero.
SrpResult srp_phat(const StftFrames& frames, double aperture_m,
                   const DoaGrid& grid = {}, double band_lo_hz = 100.0,
                   double band_hi_hz = 7600.0);

struct EstimatorConfig {
  double aperture_m = 0.0;  // 0 = take from the manifest header
  DoaGrid grid;
  double band_lo_hz = 100.0;
  double band_hi_hz = 7600.0;
  int workers = 1;

  KvMap provenance() const;
};

/// Run the estimator over every manifest entry; per-sample failures are
/// recorded in the row status and the run continues. Row order matches the
/// manifest and is independent of the worker count.
std::vector<ResultRow> evaluate_dataset(const Manifest& manifest,
                                        const EstimatorConfig& config);

}  // namespace ismf

#endif  // ISMF_DOA_HPP_
