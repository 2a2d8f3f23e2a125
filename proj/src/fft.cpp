// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

#include "ismf/math_util.hpp"

namespace ismf::fft {

namespace {

// Plans are created once per size against scratch buffers and executed on
// caller arrays via the new-array interface. FFTW_UNALIGNED makes that legal
// for any allocation.
struct PlanEntry {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  double* real_buf = nullptr;
  fftw_complex* cplx_buf = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::size_t, PlanEntry>& plan_cache() {
  static std::map<std::size_t, PlanEntry> cache;
  return cache;
}

const PlanEntry& plans_for(std::size_t n) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  auto& cache = plan_cache();
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  PlanEntry e;
  e.real_buf = fftw_alloc_real(n);
  e.cplx_buf = fftw_alloc_complex(n / 2 + 1);
  unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  e.r2c = fftw_plan_dft_r2c_1d(static_cast<int>(n), e.real_buf, e.cplx_buf, flags);
  e.c2r = fftw_plan_dft_c2r_1d(static_cast<int>(n), e.cplx_buf, e.real_buf, flags);
  if (!e.r2c || !e.c2r) throw std::runtime_error("fft: planner failed");
  return cache.emplace(n, e).first->second;
}

void check_pow2(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("fft: size must be a power of two");
}

}  // namespace

void rfft(std::span<const double> in, std::span<std::complex<double>> out) {
  std::size_t n = in.size();
  check_pow2(n);
  if (out.size() != n / 2 + 1) throw std::invalid_argument("fft: bad output size");
  const PlanEntry& e = plans_for(n);
  fftw_execute_dft_r2c(e.r2c, const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void irfft(std::span<const std::complex<double>> in, std::span<double> out) {
  std::size_t n = out.size();
  check_pow2(n);
  if (in.size() != n / 2 + 1) throw std::invalid_argument("fft: bad input size");
  const PlanEntry& e = plans_for(n);
  // c2r destroys its input, so run from a scratch copy
  std::vector<std::complex<double>> tmp(in.begin(), in.end());
  fftw_execute_dft_c2r(e.c2r, reinterpret_cast<fftw_complex*>(tmp.data()),
                       out.data());
  double scale = 1.0 / static_cast<double>(n);
  for (auto& v : out) v *= scale;
}

std::vector<double> convolve(std::span<const double> a,
                             std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  std::size_t out_len = a.size() + b.size() - 1;
  std::size_t n = next_pow2(out_len);
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<double>> fa(n / 2 + 1), fb(n / 2 + 1);
  rfft(pa, fa);
  rfft(pb, fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= fb[i];
  std::vector<double> full(n);
  irfft(fa, full);
  full.resize(out_len);
  return full;
}

}  // namespace ismf::fft
