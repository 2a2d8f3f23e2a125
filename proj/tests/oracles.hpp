// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)
//
// Independent reference implementations used only by tests. Everything here
// is written as plain scalar loops against the textbook formulas so it shares
// no code path with the library implementations it checks.

#ifndef ISMF_TESTS_ORACLES_HPP_
#define ISMF_TESTS_ORACLES_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <tuple>
#include <vector>

#include "ismf/directivity.hpp"
#include "ismf/geometry.hpp"
#include "ismf/ism_engine.hpp"
#include "ismf/materials.hpp"

namespace oracles {

// ---- geometry: brute-force mirror lattice ----------------------------------

struct LatticeImage {
  ismf::Vec3 position;
  int order;
  std::array<int, 6> counts;
};

// Enumerate (n, q) per axis over a generous range and filter by order.
inline std::vector<LatticeImage> brute_force_images(const ismf::Shoebox& room,
                                                    const ismf::Vec3& src,
                                                    int max_order) {
  std::vector<LatticeImage> out;
  int span = max_order + 2;
  for (int nx = -span; nx <= span; ++nx)
    for (int qx = 0; qx <= 1; ++qx)
      for (int ny = -span; ny <= span; ++ny)
        for (int qy = 0; qy <= 1; ++qy)
          for (int nz = -span; nz <= span; ++nz)
            for (int qz = 0; qz <= 1; ++qz) {
              std::array<int, 6> c = {std::abs(nx - qx), std::abs(nx),
                                      std::abs(ny - qy), std::abs(ny),
                                      std::abs(nz - qz), std::abs(nz)};
              int order = c[0] + c[1] + c[2] + c[3] + c[4] + c[5];
              if (order > max_order) continue;
              LatticeImage img;
              img.position = {(1 - 2 * qx) * src.x + 2.0 * nx * room.dims.x,
                              (1 - 2 * qy) * src.y + 2.0 * ny * room.dims.y,
                              (1 - 2 * qz) * src.z + 2.0 * nz * room.dims.z};
              img.order = order;
              img.counts = c;
              out.push_back(img);
            }
  return out;
}

// Reflect an image back through the walls until it lands inside the room,
// counting reflections per surface along the way.
inline std::pair<ismf::Vec3, std::array<int, 6>> unfold_to_source(
    const ismf::Shoebox& room, ismf::Vec3 p) {
  std::array<int, 6> counts{};
  const double l[3] = {room.dims.x, room.dims.y, room.dims.z};
  double* coord[3] = {&p.x, &p.y, &p.z};
  for (int axis = 0; axis < 3; ++axis) {
    for (int guard = 0; guard < 10000; ++guard) {
      if (*coord[axis] < 0.0) {
        *coord[axis] = -*coord[axis];
        ++counts[2 * axis];
      } else if (*coord[axis] > l[axis]) {
        *coord[axis] = 2.0 * l[axis] - *coord[axis];
        ++counts[2 * axis + 1];
      } else {
        break;
      }
    }
  }
  return {p, counts};
}

// ---- engine: scalar per-bin / per-image transfer-function oracle -----------

// Straight loop over bins and images with std::exp / std::polar; directivity
// and compound reflection go through the public module operations.
inline std::vector<std::vector<std::complex<double>>> scalar_transfer_oracle(
    const ismf::RirRequest& req, std::size_t n_fft) {
  using namespace ismf;
  std::size_t bins = n_fft / 2 + 1;
  auto images = enumerate_images(req.room, req.source.position, req.max_order);
  bool advanced = req.mode == SimMode::advanced;
  bool per_mic = req.receiver.array.mode == ReceiverMode::per_microphone;

  // naive-mode flat coefficient: area-weighted, band-averaged mean absorption
  double naive_d = 0.0;
  if (!advanced) {
    const Vec3& d = req.room.dims;
    double areas[6] = {d.y * d.z, d.y * d.z, d.x * d.z,
                       d.x * d.z, d.x * d.y, d.x * d.y};
    double mean = 0.0, total = 0.0;
    for (int s = 0; s < 6; ++s) {
      for (int b = 0; b < kNumBands; ++b)
        mean += areas[s] * req.surfaces.surfaces[s].alphas[b];
      total += areas[s] * kNumBands;
    }
    naive_d = std::sqrt(1.0 - mean / total);
  }

  DirectivityPattern omni = DirectivityPattern::make_omni();
  std::size_t n_ch = req.receiver.array.mics.size();
  std::vector<std::vector<std::complex<double>>> out(
      n_ch, std::vector<std::complex<double>>(bins, {0.0, 0.0}));

  for (std::size_t m = 0; m < n_ch; ++m) {
    const ArrayMic& mic = req.receiver.array.mics[m];
    Vec3 mic_world = req.receiver.center + req.receiver.orientation.to_world(mic.position);
    Orientation mic_orient;
    mic_orient.look = req.receiver.orientation.to_world(mic.orientation.look);
    mic_orient.up = req.receiver.orientation.to_world(mic.orientation.up);
    Vec3 ref = per_mic ? mic_world : req.receiver.center;

    for (const auto& img : images) {
      auto [r, dir] = image_geometry(img, ref);
      ReflectionSpectrum comp;
      if (advanced) comp = compound_reflection(img, req.surfaces, n_fft, req.fs);
      const DirectivityPattern& src_pat = advanced ? req.source.pattern : omni;
      const DirectivityPattern& mic_pat = advanced ? mic.pattern : omni;
      for (std::size_t i = 0; i < bins; ++i) {
        double f = static_cast<double>(i) * req.fs / n_fft;
        std::complex<double> term =
            std::polar(1.0, -2.0 * kPi * f * r / kSpeedOfSound) / r;
        if (req.air_enabled) term *= air_attenuation(r, f);
        if (advanced)
          term *= comp.gains[i];
        else
          term *= std::pow(naive_d, img.order);
        term *= eval_pattern(src_pat, req.source.orientation, dir * -1.0, f);
        term *= eval_pattern(mic_pat, mic_orient, dir, f);
        out[m][i] += term;
      }
    }
    out[m][0] = {out[m][0].real(), 0.0};
    out[m][bins - 1] = {out[m][bins - 1].real(), 0.0};
  }
  return out;
}

// ---- time-domain delay kernel ----------------------------------------------

// Inverse real DFT of a pure delay with real-forced DC/Nyquist bins, in
// closed form: the periodic-sinc spread of a fractional delay.
// Dirichlet-kernel value 1 + 2 sum_{i=1}^{N/2-1} cos(i phi) at
// phi = 2 pi (n - d) / N.
inline double dirichlet_delay(double n_minus_d, std::size_t n_fft) {
  double phi = 2.0 * ismf::kPi * n_minus_d / static_cast<double>(n_fft);
  double s = std::sin(phi / 2.0);
  if (std::abs(s) < 1e-12) return static_cast<double>(n_fft) - 1.0;
  return std::sin((static_cast<double>(n_fft) - 1.0) * phi / 2.0) / s;
}

// h[n] for a unit-amplitude delay of d samples (possibly fractional).
inline std::vector<double> delay_kernel_oracle(double delay_samples,
                                               std::size_t n_fft) {
  std::vector<double> h(n_fft);
  double nyq = std::cos(ismf::kPi * delay_samples);  // real-forced Nyquist bin
  for (std::size_t n = 0; n < n_fft; ++n) {
    double core = dirichlet_delay(static_cast<double>(n) - delay_samples, n_fft);
    double sign = (n % 2 == 0) ? 1.0 : -1.0;
    h[n] = (core + sign * nyq) / static_cast<double>(n_fft);
  }
  return h;
}

// Time-domain anechoic RIR oracle: sum of per-image periodic-sinc kernels.
inline std::vector<double> sinc_delay_rir_oracle(
    const std::vector<std::pair<double, double>>& amp_delay, std::size_t n_fft) {
  std::vector<double> h(n_fft, 0.0);
  for (const auto& [amp, delay] : amp_delay) {
    auto k = delay_kernel_oracle(delay, n_fft);
    for (std::size_t n = 0; n < n_fft; ++n) h[n] += amp * k[n];
  }
  return h;
}

// ---- Schroeder backward integration ----------------------------------------

// T60 from the -5..-25 dB linear fit of the backward-integrated energy decay.
inline double schroeder_t60(const std::vector<double>& h, double fs) {
  std::vector<double> edc(h.size());
  double acc = 0.0;
  for (std::size_t i = h.size(); i-- > 0;) {
    acc += h[i] * h[i];
    edc[i] = acc;
  }
  double total = edc[0];
  std::vector<double> t, y;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (edc[i] <= 0.0) break;
    double db = 10.0 * std::log10(edc[i] / total);
    if (db > -5.0) continue;
    if (db < -25.0) break;
    t.push_back(static_cast<double>(i) / fs);
    y.push_back(db);
  }
  if (t.size() < 8) return 0.0;
  double n = static_cast<double>(t.size());
  double st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sy += y[i];
    stt += t[i] * t[i];
    sty += t[i] * y[i];
  }
  double slope = (n * sty - st * sy) / (n * stt - st * st);  // dB per second
  return slope < 0.0 ? -60.0 / slope : 0.0;
}

// ---- statistics helpers ------------------------------------------------------

inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    double fa = static_cast<double>(i) / a.size();
    double fb = static_cast<double>(j) / b.size();
    d = std::max(d, std::abs(fa - fb));
  }
  return d;
}

inline double norm_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * ismf::kPi);
}
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// mean of a normal(mu, sd) truncated to [lo, hi]
inline double truncated_normal_mean(double mu, double sd, double lo, double hi) {
  double a = (lo - mu) / sd, b = (hi - mu) / sd;
  double z = norm_cdf(b) - norm_cdf(a);
  return mu + sd * (norm_pdf(a) - norm_pdf(b)) / z;
}

inline double truncated_normal_var(double mu, double sd, double lo, double hi) {
  double a = (lo - mu) / sd, b = (hi - mu) / sd;
  double z = norm_cdf(b) - norm_cdf(a);
  double m1 = (norm_pdf(a) - norm_pdf(b)) / z;
  double m2 = 1.0 + (a * norm_pdf(a) - b * norm_pdf(b)) / z - m1 * m1;
  return sd * sd * m2;
}

// deterministic quasi-uniform points on the unit sphere
inline std::vector<ismf::Vec3> fibonacci_sphere(int n) {
  std::vector<ismf::Vec3> pts(n);
  double golden = ismf::kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * i;
    pts[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return pts;
}

}  // namespace oracles

#endif  // ISMF_TESTS_ORACLES_HPP_
