// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_METRICS_HPP_
#define ISMF_METRICS_HPP_

#include <vector>

namespace ismf {

inline constexpr double kRecallThresholdDeg = 10.0;

struct EvalSummary {
  double recall = 0.0;      // fraction with error strictly below the threshold
  double mae_deg = 0.0;     // mean angular error
  double mae_ci95_deg = 0.0;  // 1.96 * sd / sqrt(n) half-width
  std::size_t n = 0;
};

/// Aggregate per-sample angular errors (degrees, each in [0, 180]). Ties at
/// exactly the threshold count as misses. Throws on an empty list.
EvalSummary summarize(const std::vector<double>& errors_deg,
                      double threshold_deg = kRecallThresholdDeg);

/// Exact binomial McNemar on paired hit vectors: with b = A-only hits and
/// c = B-only hits, two-sided p = P(X <= min(b,c)) + P(X >= max(b,c)) for
/// X ~ Binomial(b+c, 1/2), capped at 1; p = 1 when b + c == 0.
double mcnemar(const std::vector<bool>& hits_a, const std::vector<bool>& hits_b);

struct PairedDiff {
  double mean = 0.0;   // mean of (a - b)
  double ci95 = 0.0;   // 1.96 * sd / sqrt(n) half-width
  bool significant() const {
    return mean - ci95 > 0.0 || mean + ci95 < 0.0;
  }
};

/// Mean per-sample difference a[i] - b[i] with its normal-approximation 95 %
/// confidence half-width.
PairedDiff paired_mae_ci(const std::vector<double>& errors_a,
                         const std::vector<double>& errors_b);

}  // namespace ismf

#endif  // ISMF_METRICS_HPP_
