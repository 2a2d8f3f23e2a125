// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ismf {

namespace {

// 1.96 * sd / sqrt(n), sample sd; zero for fewer than two values
double ci95_half_width(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  double sd = std::sqrt(ss / (static_cast<double>(v.size()) - 1.0));
  return 1.96 * sd / std::sqrt(static_cast<double>(v.size()));
}

double log_binom(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

EvalSummary summarize(const std::vector<double>& errors_deg, double threshold_deg) {
  if (errors_deg.empty()) throw std::invalid_argument("summarize: empty error list");
  EvalSummary s;
  s.n = errors_deg.size();
  std::size_t hits = 0;
  double sum = 0.0;
  for (double e : errors_deg) {
    if (e < 0.0 || e > 180.0 || !std::isfinite(e))
      throw std::invalid_argument("summarize: error outside [0, 180]");
    if (e < threshold_deg) ++hits;  // strict, per the Recall definition
    sum += e;
  }
  s.recall = static_cast<double>(hits) / static_cast<double>(s.n);
  s.mae_deg = sum / static_cast<double>(s.n);
  s.mae_ci95_deg = ci95_half_width(errors_deg, s.mae_deg);
  return s;
}

double mcnemar(const std::vector<bool>& hits_a, const std::vector<bool>& hits_b) {
  if (hits_a.size() != hits_b.size())
    throw std::invalid_argument("mcnemar: paired vectors must match in length");
  int b = 0, c = 0;
  for (std::size_t i = 0; i < hits_a.size(); ++i) {
    if (hits_a[i] && !hits_b[i]) ++b;
    if (!hits_a[i] && hits_b[i]) ++c;
  }
  int n = b + c;
  if (n == 0) return 1.0;
  int lo = std::min(b, c), hi = std::max(b, c);
  double log_half_n = n * std::log(0.5);
  double p = 0.0;
  for (int k = 0; k <= lo; ++k) p += std::exp(log_binom(n, k) + log_half_n);
  for (int k = hi; k <= n; ++k) p += std::exp(log_binom(n, k) + log_half_n);
  return std::min(1.0, p);
}

PairedDiff paired_mae_ci(const std::vector<double>& errors_a,
                         const std::vector<double>& errors_b) {
  if (errors_a.size() != errors_b.size())
    throw std::invalid_argument("paired_mae_ci: paired vectors must match in length");
  if (errors_a.empty()) throw std::invalid_argument("paired_mae_ci: empty input");
  std::vector<double> diff(errors_a.size());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = errors_a[i] - errors_b[i];
  PairedDiff out;
  double sum = 0.0;
  for (double d : diff) sum += d;
  out.mean = sum / static_cast<double>(diff.size());
  out.ci95 = ci95_half_width(diff, out.mean);
  return out;
}

}  // namespace ismf
