// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_FFT_HPP_
#define ISMF_FFT_HPP_

#include <complex>
#include <span>
#include <vector>

namespace ismf::fft {

// Thin wrapper over FFTW3 with a process-wide plan cache. Plans are created
// with FFTW_ESTIMATE so results are reproducible run to run; execution on
// cached plans is thread-safe.

/// Real-to-complex DFT. in.size() == n (power of two), out.size() == n/2+1.
void rfft(std::span<const double> in, std::span<std::complex<double>> out);

/// Complex-to-real inverse DFT, scaled by 1/n. out.size() == n,
/// in.size() == n/2+1. The input is left untouched.
void irfft(std::span<const std::complex<double>> in, std::span<double> out);

/// Linear convolution via zero-padded FFTs; result size a+b-1.
std::vector<double> convolve(std::span<const double> a,
                             std::span<const double> b);

}  // namespace ismf::fft

#endif  // ISMF_FFT_HPP_
