// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/doa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ismf/fft.hpp"
#include "ismf/math_util.hpp"
#include "ismf/parallel.hpp"
#include "ismf/wav.hpp"

namespace ismf {

std::vector<double> stft_window() {
  // sin^2(pi n / (L-1)): adjacent 50 %-overlap copies sum to exactly 1
  std::vector<double> w(kStftWindow);
  for (int n = 0; n < kStftWindow; ++n) {
    double s = std::sin(kPi * n / (kStftWindow - 1.0));
    w[n] = s * s;
  }
  return w;
}

StftFrames stft(const std::vector<std::vector<double>>& audio, double fs) {
  if (fs != kDoaFs)
    throw std::invalid_argument("stft: expected 16 kHz input");
  if (audio.empty() || audio[0].size() < kStftWindow)
    throw std::invalid_argument("stft: input shorter than one window");

  std::size_t len = audio[0].size();
  std::size_t n_frames = (len - kStftWindow) / kStftHop + 1;
  std::size_t n_bins = kStftFft / 2 + 1;
  std::vector<double> window = stft_window();

  StftFrames out;
  out.fs = fs;
  out.n_frames = n_frames;
  out.n_bins = n_bins;
  out.spectra.resize(audio.size());
  std::vector<double> buf(kStftFft, 0.0);
  for (std::size_t ch = 0; ch < audio.size(); ++ch) {
    if (audio[ch].size() != len)
      throw std::invalid_argument("stft: ragged channels");
    out.spectra[ch].resize(n_frames * n_bins);
    for (std::size_t t = 0; t < n_frames; ++t) {
      const double* x = audio[ch].data() + t * kStftHop;
      for (int n = 0; n < kStftWindow; ++n) buf[n] = x[n] * window[n];
      std::fill(buf.begin() + kStftWindow, buf.end(), 0.0);
      fft::rfft(buf, {&out.spectra[ch][t * n_bins], n_bins});
    }
  }
  return out;
}

std::vector<double> DoaGrid::angles_deg() const {
  if (step_deg <= 0.0 || std::abs(180.0 / step_deg - std::round(180.0 / step_deg)) > 1e-9)
    throw std::invalid_argument("DoaGrid: step must divide 180");
  auto n = static_cast<std::size_t>(std::round(180.0 / step_deg)) + 1;
  std::vector<double> angles(n);
  for (std::size_t i = 0; i < n; ++i) angles[i] = i * step_deg;
  return angles;
}

SrpResult srp_phat(const StftFrames& frames, double aperture_m,
                   const DoaGrid& grid, double band_lo_hz, double band_hi_hz) {
  if (frames.spectra.size() != 2)
    throw std::invalid_argument("srp_phat: needs exactly two channels");
  if (aperture_m <= 0.0)
    throw std::invalid_argument("srp_phat: aperture must be positive");
  if (band_lo_hz < 0.0 || band_hi_hz > frames.fs / 2.0 || band_hi_hz <= band_lo_hz)
    throw std::invalid_argument("srp_phat: band outside [0, fs/2]");

  std::size_t n_bins = frames.n_bins;
  double bin_hz = frames.fs / kStftFft;
  auto bin_lo = static_cast<std::size_t>(std::ceil(band_lo_hz / bin_hz));
  auto bin_hi = static_cast<std::size_t>(std::floor(band_hi_hz / bin_hz));
  bin_hi = std::min(bin_hi, n_bins - 1);

  // PHAT-normalized cross spectra accumulated over frames; the per-angle sum
  // distributes over this, so one pass per bin suffices
  std::vector<std::complex<double>> cross(n_bins, {0.0, 0.0});
  bool any = false;
  for (std::size_t t = 0; t < frames.n_frames; ++t) {
    const std::complex<double>* x1 = frames.frame(0, t);
    const std::complex<double>* x2 = frames.frame(1, t);
    for (std::size_t i = bin_lo; i <= bin_hi; ++i) {
      std::complex<double> c = x1[i] * std::conj(x2[i]);
      double mag = std::abs(c);
      if (mag < 1e-12) continue;  // PHAT division guard
      cross[i] += c / mag;
      any = true;
    }
  }
  if (!any) throw std::runtime_error("srp_phat: all-zero input, no estimate");

  std::vector<double> angles = grid.angles_deg();
  SrpResult result;
  result.pseudo_spectrum.resize(angles.size());
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t a = 0; a < angles.size(); ++a) {
    double tdoa = aperture_m * std::cos(angles[a] * kPi / 180.0) / kSpeedOfSound;
    double score = 0.0;
    for (std::size_t i = bin_lo; i <= bin_hi; ++i) {
      if (cross[i] == std::complex<double>{0.0, 0.0}) continue;
      double phase = 2.0 * kPi * (static_cast<double>(i) * bin_hz) * tdoa;
      score += cross[i].real() * std::cos(phase) - cross[i].imag() * std::sin(phase);
    }
    result.pseudo_spectrum[a] = score;
    bool better = score > best;
    if (score == best) {  // tie-break toward 90 degrees, then the smaller angle
      double cur = std::abs(angles[a] - 90.0), prev = std::abs(angles[best_i] - 90.0);
      better = cur < prev;
    }
    if (better) {
      best = score;
      best_i = a;
    }
  }
  result.doa_deg = angles[best_i];
  return result;
}

KvMap EstimatorConfig::provenance() const {
  KvMap kv;
  kv.set_double("aperture_m", aperture_m);
  kv.set_double("grid_step_deg", grid.step_deg);
  kv.set_double("band_lo_hz", band_lo_hz);
  kv.set_double("band_hi_hz", band_hi_hz);
  kv.set_int("stft_window", kStftWindow);
  kv.set_int("stft_hop", kStftHop);
  kv.set_int("stft_fft", kStftFft);
  return kv;
}

std::vector<ResultRow> evaluate_dataset(const Manifest& manifest,
                                        const EstimatorConfig& config) {
  double aperture = config.aperture_m;
  if (aperture <= 0.0) {
    if (!manifest.header.has("aperture_m"))
      throw ConfigError("evaluate_dataset: aperture not given and absent from manifest");
    aperture = manifest.header.get_double("aperture_m");
  }

  std::vector<ResultRow> rows(manifest.entries.size());
  parallel_for(manifest.entries.size(), std::max(1, config.workers),
               [&](std::size_t i) {
                 const ManifestEntry& e = manifest.entries[i];
                 ResultRow row;
                 row.id = e.id;
                 row.doa_true_deg = e.doa_true_deg;
                 try {
                   Wav wav = read_wav(manifest.resolve_wav(e));
                   if (wav.channels.size() != 2)
                     throw std::runtime_error("expected 2 channels");
                   StftFrames frames = stft(wav.channels, wav.sample_rate);
                   SrpResult srp = srp_phat(frames, aperture, config.grid,
                                            config.band_lo_hz, config.band_hi_hz);
                   row.doa_hat_deg = srp.doa_deg;
                   row.error_deg = std::abs(srp.doa_deg - e.doa_true_deg);
                   row.status = "ok";
                 } catch (const std::exception& ex) {
                   row.doa_hat_deg = std::numeric_limits<double>::quiet_NaN();
                   row.error_deg = std::numeric_limits<double>::quiet_NaN();
                   std::string what = ex.what();
                   std::replace(what.begin(), what.end(), '\t', ' ');
                   std::replace(what.begin(), what.end(), ' ', '_');
                   row.status = "error:" + what;
                 }
                 rows[i] = std::move(row);
               });
  return rows;
}

}  // namespace ismf
