// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_RESAMPLE_HPP_
#define ISMF_RESAMPLE_HPP_

#include <vector>

namespace ismf {

/// Windowed-sinc (Kaiser beta 9, >= 80 dB stopband) sample-rate conversion.
/// Identity when the rates match.
std::vector<double> resample_sinc(const std::vector<double>& input,
                                  double in_rate, double out_rate);

}  // namespace ismf

#endif  // ISMF_RESAMPLE_HPP_
