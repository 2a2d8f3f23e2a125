// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/resample.hpp"

#include <cmath>
#include <stdexcept>

#include "ismf/math_util.hpp"

namespace ismf {

std::vector<double> resample_sinc(const std::vector<double>& input,
                                  double in_rate, double out_rate) {
  if (in_rate <= 0 || out_rate <= 0)
    throw std::invalid_argument("resample: rates must be positive");
  if (in_rate == out_rate) return input;
  if (input.empty()) return {};

  constexpr double beta = 9.0;
  constexpr int half_width = 32;   // sinc zero crossings covered per side
  constexpr int table_per_zc = 512;
  const double i0_beta = bessel_i0(beta);

  // cutoff in cycles per input sample; anti-aliases when downsampling
  double ratio = in_rate / out_rate;
  double fc = 0.5 * std::min(1.0, out_rate / in_rate);
  double width = half_width * std::max(1.0, ratio);  // kernel half-span, input samples

  // tabulated one-sided kernel, linearly interpolated at lookup
  int table_n = half_width * table_per_zc + 1;
  std::vector<double> table(table_n + 1);
  for (int i = 0; i < table_n; ++i) {
    double tau = width * i / (table_n - 1);
    double x = tau / width;
    double win = bessel_i0(beta * std::sqrt(std::max(0.0, 1.0 - x * x))) / i0_beta;
    table[i] = 2.0 * fc * sinc_pi(2.0 * fc * tau) * win;
  }
  table[table_n] = 0.0;
  double table_scale = (table_n - 1) / width;

  std::size_t out_len = static_cast<std::size_t>(
      std::floor(static_cast<double>(input.size() - 1) / ratio)) + 1;
  std::vector<double> out(out_len);
  auto n_in = static_cast<long long>(input.size());
  for (std::size_t m = 0; m < out_len; ++m) {
    double t = static_cast<double>(m) * ratio;
    auto lo = std::max(0LL, static_cast<long long>(std::ceil(t - width)));
    auto hi = std::min(n_in - 1, static_cast<long long>(std::floor(t + width)));
    double acc = 0.0;
    for (long long n = lo; n <= hi; ++n) {
      double pos = std::abs(static_cast<double>(n) - t) * table_scale;
      auto i = static_cast<std::size_t>(pos);
      double frac = pos - static_cast<double>(i);
      acc += input[static_cast<std::size_t>(n)] *
             (table[i] + frac * (table[i + 1] - table[i]));
    }
    out[m] = acc;
  }
  return out;
}

}  // namespace ismf
