// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "ismf/ism_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "ismf/fft.hpp"
#include "ismf/math_util.hpp"
#include "ismf/parallel.hpp"

namespace ismf {

namespace {

constexpr double kGuardSeconds = 0.05;
constexpr std::size_t kBinBlock = 4096;

struct Soa {
  std::vector<double> re, im;
  void assign_ones(std::size_t n) {
    re.assign(n, 1.0);
    im.assign(n, 0.0);
  }
};

// ---- precomputed per-request state ----------------------------------------

struct FreqInterp {
  // per-bin bracketing index and weight into a measured pattern's freq axis
  std::vector<std::uint32_t> idx;
  std::vector<double> w;
};

FreqInterp make_freq_interp(const DirectivityPattern& p, std::size_t bins,
                            std::size_t n_fft, double fs) {
  FreqInterp fi;
  fi.idx.resize(bins);
  fi.w.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    double f = static_cast<double>(i) * fs / n_fft;
    if (f <= p.freqs_hz.front()) {
      fi.idx[i] = 0;
      fi.w[i] = 0.0;
    } else if (f >= p.freqs_hz.back()) {
      fi.idx[i] = static_cast<std::uint32_t>(p.freqs_hz.size() - 1);
      fi.w[i] = 0.0;
    } else {
      std::size_t hi = 1;
      while (p.freqs_hz[hi] < f) ++hi;
      fi.idx[i] = static_cast<std::uint32_t>(hi - 1);
      fi.w[i] = (f - p.freqs_hz[hi - 1]) / (p.freqs_hz[hi] - p.freqs_hz[hi - 1]);
    }
  }
  return fi;
}

struct MicWorld {
  Vec3 position;
  Orientation orientation;
  const DirectivityPattern* pattern;
  const FreqInterp* freq_interp;  // only for measured grids
};

// One transfer-function term: scalar factors of an (image, channel) pair.
struct Term {
  double r = 0.0;
  double delta = 0.0;  // phase per bin, exp(-j delta i)
  double s_re = 0.0, s_im = 0.0;  // frequency-flat gain incl. 1/r
  const std::complex<double>* src_row = nullptr;  // measured source gains
  const FreqInterp* src_fi = nullptr;
  const std::complex<double>* mic_row = nullptr;  // measured mic gains
  const FreqInterp* mic_fi = nullptr;
  const Soa* axis[3] = {nullptr, nullptr, nullptr};
};

struct Setup {
  std::size_t n_fft = 0, bins = 0;
  double fs = 0.0;
  bool advanced = false;
  std::vector<ImageSource> images;
  std::vector<double> air_half;  // empty when air is disabled
  std::vector<MicWorld> mics;
  // advanced: per-axis cache of S_lo^c_lo * S_hi^c_hi keyed by (c_lo, c_hi)
  std::array<std::vector<std::unique_ptr<Soa>>, 3> axis_cache;
  std::vector<FreqInterp> freq_interps;  // storage for measured patterns
  std::vector<Term> terms;               // images x channels, image-major
};

const std::complex<double>* measured_row(const DirectivityPattern& p,
                                         const Orientation& o, const Vec3& dir) {
  // nearest direction sample; the row then only needs per-bin freq interp
  Vec3 local = o.to_local(dir);
  double az = std::atan2(local.y, local.x) * 180.0 / kPi;
  if (az < 0) az += 360.0;
  double el = std::asin(std::clamp(local.z, -1.0, 1.0)) * 180.0 / kPi;
  std::size_t best_a = 0, best_e = 0;
  double best = 1e300;
  for (std::size_t i = 0; i < p.azimuths_deg.size(); ++i) {
    double d = std::abs(az - p.azimuths_deg[i]);
    d = std::min(d, 360.0 - d);
    if (d < best) {
      best = d;
      best_a = i;
    }
  }
  best = 1e300;
  for (std::size_t i = 0; i < p.elevations_deg.size(); ++i) {
    double d = std::abs(el - p.elevations_deg[i]);
    if (d < best) {
      best = d;
      best_e = i;
    }
  }
  return &p.gains[(best_a * p.elevations_deg.size() + best_e) * p.freqs_hz.size()];
}

// Flat reflection coefficient for naive mode: area-weighted, band-averaged
// mean absorption (equals the set alpha for flat-equal surface sets).
double naive_reflection_coeff(const RirRequest& req) {
  const Vec3& d = req.room.dims;
  std::array<double, kNumSurfaces> areas = {d.y * d.z, d.y * d.z, d.x * d.z,
                                            d.x * d.z, d.x * d.y, d.x * d.y};
  double mean = 0.0, total = 0.0;
  for (int s = 0; s < kNumSurfaces; ++s) {
    for (int b = 0; b < kNumBands; ++b)
      mean += areas[s] * req.surfaces.surfaces[s].alphas[b];
    total += areas[s] * kNumBands;
  }
  return std::sqrt(std::max(0.0, 1.0 - mean / total));
}

void build_axis_cache(Setup& s, const RirRequest& req) {
  std::size_t side = static_cast<std::size_t>(req.max_order) + 2;
  // per-surface minimum-phase reflection spectra
  std::array<Soa, kNumSurfaces> refl;
  for (int k = 0; k < kNumSurfaces; ++k) {
    ReflectionSpectrum r =
        minimum_phase(band_to_dft(req.surfaces.surfaces[k], s.n_fft, s.fs));
    refl[k].re.resize(s.bins);
    refl[k].im.resize(s.bins);
    for (std::size_t i = 0; i < s.bins; ++i) {
      refl[k].re[i] = r.gains[i].real();
      refl[k].im[i] = r.gains[i].imag();
    }
  }
  auto multiply_into = [&](Soa& acc, const Soa& f) {
    for (std::size_t i = 0; i < s.bins; ++i) {
      double re = acc.re[i] * f.re[i] - acc.im[i] * f.im[i];
      acc.im[i] = acc.re[i] * f.im[i] + acc.im[i] * f.re[i];
      acc.re[i] = re;
    }
  };
  for (int axis = 0; axis < 3; ++axis) {
    s.axis_cache[axis].resize(side * side);
    // powers of the two surfaces of this axis, built incrementally
    int max_lo = 0, max_hi = 0;
    for (const auto& img : s.images) {
      max_lo = std::max(max_lo, img.reflection_counts[2 * axis]);
      max_hi = std::max(max_hi, img.reflection_counts[2 * axis + 1]);
    }
    std::vector<Soa> pow_lo(max_lo + 1), pow_hi(max_hi + 1);
    pow_lo[0].assign_ones(s.bins);
    for (int c = 1; c <= max_lo; ++c) {
      pow_lo[c] = pow_lo[c - 1];
      multiply_into(pow_lo[c], refl[2 * axis]);
    }
    pow_hi[0].assign_ones(s.bins);
    for (int c = 1; c <= max_hi; ++c) {
      pow_hi[c] = pow_hi[c - 1];
      multiply_into(pow_hi[c], refl[2 * axis + 1]);
    }
    for (const auto& img : s.images) {
      int lo = img.reflection_counts[2 * axis];
      int hi = img.reflection_counts[2 * axis + 1];
      if (lo == 0 && hi == 0) continue;  // identity, kept null
      auto& slot = s.axis_cache[axis][lo * side + hi];
      if (slot) continue;
      auto entry = std::make_unique<Soa>();
      *entry = pow_lo[lo];
      multiply_into(*entry, pow_hi[hi]);
      slot = std::move(entry);
    }
  }
}

Setup build_setup(const RirRequest& req, std::size_t n_fft) {
  req.validate();
  Setup s;
  s.n_fft = n_fft;
  s.bins = n_fft / 2 + 1;
  s.fs = req.fs;
  s.advanced = req.mode == SimMode::advanced;
  s.images = enumerate_images(req.room, req.source.position, req.max_order);
  if (req.air_enabled) s.air_half = air_half_exponent_bins(n_fft, req.fs);

  // world-frame microphones; patterns forced omni in naive mode
  static const DirectivityPattern omni = DirectivityPattern::make_omni();
  s.freq_interps.reserve(req.receiver.array.mics.size() + 1);
  for (const auto& mic : req.receiver.array.mics) {
    MicWorld mw;
    mw.position = req.receiver.center + req.receiver.orientation.to_world(mic.position);
    mw.orientation.look = req.receiver.orientation.to_world(mic.orientation.look);
    mw.orientation.up = req.receiver.orientation.to_world(mic.orientation.up);
    mw.pattern = s.advanced ? &mic.pattern : &omni;
    mw.freq_interp = nullptr;
    if (mw.pattern->kind == PatternKind::measured_grid) {
      s.freq_interps.push_back(make_freq_interp(*mw.pattern, s.bins, n_fft, req.fs));
      mw.freq_interp = &s.freq_interps.back();
    }
    s.mics.push_back(mw);
  }
  const DirectivityPattern* src_pattern = s.advanced ? &req.source.pattern : &omni;
  const FreqInterp* src_fi = nullptr;
  if (src_pattern->kind == PatternKind::measured_grid) {
    s.freq_interps.push_back(make_freq_interp(*src_pattern, s.bins, n_fft, req.fs));
    src_fi = &s.freq_interps.back();
  }

  if (s.advanced) build_axis_cache(s, req);
  double naive_d = s.advanced ? 0.0 : naive_reflection_coeff(req);
  std::size_t side = static_cast<std::size_t>(req.max_order) + 2;

  bool per_mic = req.receiver.array.mode == ReceiverMode::per_microphone;
  std::size_t n_ch = s.mics.size();
  s.terms.resize(s.images.size() * n_ch);
  for (std::size_t k = 0; k < s.images.size(); ++k) {
    const ImageSource& img = s.images[k];
    for (std::size_t m = 0; m < n_ch; ++m) {
      Term& t = s.terms[k * n_ch + m];
      Vec3 ref = per_mic ? s.mics[m].position : req.receiver.center;
      auto [r, dir] = image_geometry(img, ref);
      t.r = r;
      t.delta = 2.0 * kPi * (req.fs / n_fft) * (r / kSpeedOfSound);

      std::complex<double> gain{1.0, 0.0};
      if (src_pattern->kind == PatternKind::measured_grid) {
        t.src_row = measured_row(*src_pattern, req.source.orientation, dir * -1.0);
        t.src_fi = src_fi;
      } else {
        gain *= eval_pattern(*src_pattern, req.source.orientation, dir * -1.0, 0.0);
      }
      const MicWorld& mw = s.mics[m];
      if (mw.pattern->kind == PatternKind::measured_grid) {
        t.mic_row = measured_row(*mw.pattern, mw.orientation, dir);
        t.mic_fi = mw.freq_interp;
      } else {
        gain *= eval_pattern(*mw.pattern, mw.orientation, dir, 0.0);
      }
      if (!s.advanced) gain *= std::pow(naive_d, img.order);
      gain /= r;
      t.s_re = gain.real();
      t.s_im = gain.imag();

      if (s.advanced) {
        for (int axis = 0; axis < 3; ++axis) {
          int lo = img.reflection_counts[2 * axis];
          int hi = img.reflection_counts[2 * axis + 1];
          t.axis[axis] =
              (lo == 0 && hi == 0) ? nullptr : s.axis_cache[axis][lo * side + hi].get();
        }
      }
    }
  }
  return s;
}

// ---- per-block kernels -----------------------------------------------------

// z_i = exp(-j delta (b0 + i)) for i in [0, count): 8 interleaved rotation
// lanes, resynced with exact sincos every block so drift stays ~1e-13.
void fill_phase(double* pr, double* pi_, std::size_t b0, std::size_t count,
                double delta) {
  std::size_t done = 0;
  while (done < count) {
    std::size_t blk = std::min<std::size_t>(1024, count - done);
    double e1r = std::cos(delta), e1i = -std::sin(delta);
    double start = -delta * static_cast<double>(b0 + done);
    double zr[8], zi[8];
    zr[0] = std::cos(start);
    zi[0] = std::sin(start);
    for (int l = 1; l < 8; ++l) {
      zr[l] = zr[l - 1] * e1r - zi[l - 1] * e1i;
      zi[l] = zr[l - 1] * e1i + zi[l - 1] * e1r;
    }
    double w2r = e1r * e1r - e1i * e1i, w2i = 2 * e1r * e1i;
    double w4r = w2r * w2r - w2i * w2i, w4i = 2 * w2r * w2i;
    double w8r = w4r * w4r - w4i * w4i, w8i = 2 * w4r * w4i;
    std::size_t full = blk / 8 * 8;
    for (std::size_t i = 0; i < full; i += 8) {
      for (int l = 0; l < 8; ++l) {
        pr[done + i + l] = zr[l];
        pi_[done + i + l] = zi[l];
      }
      for (int l = 0; l < 8; ++l) {
        double nr = zr[l] * w8r - zi[l] * w8i;
        zi[l] = zr[l] * w8i + zi[l] * w8r;
        zr[l] = nr;
      }
    }
    for (std::size_t i = full; i < blk; ++i) {
      double ang = -delta * static_cast<double>(b0 + done + i);
      pr[done + i] = std::cos(ang);
      pi_[done + i] = std::sin(ang);
    }
    done += blk;
  }
}

template <bool HasAir, bool HasComp>
void accumulate_block(double* __restrict ar, double* __restrict ai,
                      const double* __restrict pr, const double* __restrict pi_,
                      const double* __restrict air, const double* __restrict cr,
                      const double* __restrict ci, double sr, double si,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double tr, ti;
    if constexpr (HasComp) {
      tr = cr[i] * pr[i] - ci[i] * pi_[i];
      ti = cr[i] * pi_[i] + ci[i] * pr[i];
    } else {
      tr = pr[i];
      ti = pi_[i];
    }
    double w = HasAir ? air[i] : 1.0;
    ar[i] += w * (sr * tr - si * ti);
    ai[i] += w * (sr * ti + si * tr);
  }
}

struct Scratch {
  std::vector<double> ph_re, ph_im, air, comp_re, comp_im, mix_re, mix_im;
  void ensure(std::size_t n) {
    if (ph_re.size() < n) {
      ph_re.resize(n);
      ph_im.resize(n);
      air.resize(n);
      comp_re.resize(n);
      comp_im.resize(n);
      mix_re.resize(n);
      mix_im.resize(n);
    }
  }
};

// Accumulate every term into the per-channel spectra, one bin block at a
// time so accumulators and scratch stay cache-resident across images.
void run_terms(const Setup& s, std::vector<Soa>& acc) {
  std::size_t n_ch = s.mics.size();
  thread_local Scratch scratch;
  scratch.ensure(kBinBlock);
  Scratch& sc = scratch;

  for (std::size_t b0 = 0; b0 < s.bins; b0 += kBinBlock) {
    std::size_t n = std::min(kBinBlock, s.bins - b0);
    for (std::size_t k = 0; k < s.images.size(); ++k) {
      // merge the axis compound slices once per image
      const Term& first = s.terms[k * n_ch];
      int n_axes = 0;
      const Soa* axes[3];
      for (int a = 0; a < 3; ++a)
        if (first.axis[a]) axes[n_axes++] = first.axis[a];
      bool has_comp = n_axes > 0;
      if (has_comp) {
        const double* xr = axes[0]->re.data() + b0;
        const double* xi = axes[0]->im.data() + b0;
        if (n_axes == 1) {
          std::copy(xr, xr + n, sc.comp_re.data());
          std::copy(xi, xi + n, sc.comp_im.data());
        } else {
          const double* yr = axes[1]->re.data() + b0;
          const double* yi = axes[1]->im.data() + b0;
          for (std::size_t i = 0; i < n; ++i) {
            sc.comp_re[i] = xr[i] * yr[i] - xi[i] * yi[i];
            sc.comp_im[i] = xr[i] * yi[i] + xi[i] * yr[i];
          }
          if (n_axes == 3) {
            const double* zr = axes[2]->re.data() + b0;
            const double* zi = axes[2]->im.data() + b0;
            for (std::size_t i = 0; i < n; ++i) {
              double re = sc.comp_re[i] * zr[i] - sc.comp_im[i] * zi[i];
              sc.comp_im[i] = sc.comp_re[i] * zi[i] + sc.comp_im[i] * zr[i];
              sc.comp_re[i] = re;
            }
          }
        }
      }

      for (std::size_t m = 0; m < n_ch; ++m) {
        const Term& t = s.terms[k * n_ch + m];
        fill_phase(sc.ph_re.data(), sc.ph_im.data(), b0, n, t.delta);
        bool has_air = !s.air_half.empty();
        if (has_air) {
          const double* ah = s.air_half.data() + b0;
          double r = t.r;
          for (std::size_t i = 0; i < n; ++i) sc.air[i] = fast_exp(-ah[i] * r);
        }

        const double* cr = sc.comp_re.data();
        const double* ci = sc.comp_im.data();
        bool comp_here = has_comp;
        if (t.src_row || t.mic_row) {
          // fold measured-grid gains into the compound slice
          double* mr = sc.mix_re.data();
          double* mi = sc.mix_im.data();
          if (comp_here) {
            std::copy(cr, cr + n, mr);
            std::copy(ci, ci + n, mi);
          } else {
            std::fill(mr, mr + n, 1.0);
            std::fill(mi, mi + n, 0.0);
          }
          auto fold = [&](const std::complex<double>* row, const FreqInterp* fi) {
            for (std::size_t i = 0; i < n; ++i) {
              std::size_t bi = b0 + i;
              std::uint32_t ix = fi->idx[bi];
              double w = fi->w[bi];
              std::complex<double> g = row[ix] * (1.0 - w);
              if (w > 0.0) g += row[ix + 1] * w;
              double re = mr[i] * g.real() - mi[i] * g.imag();
              mi[i] = mr[i] * g.imag() + mi[i] * g.real();
              mr[i] = re;
            }
          };
          if (t.src_row) fold(t.src_row, t.src_fi);
          if (t.mic_row) fold(t.mic_row, t.mic_fi);
          cr = mr;
          ci = mi;
          comp_here = true;
        }

        double* ar = acc[m].re.data() + b0;
        double* ai = acc[m].im.data() + b0;
        if (has_air && comp_here)
          accumulate_block<true, true>(ar, ai, sc.ph_re.data(), sc.ph_im.data(),
                                       sc.air.data(), cr, ci, t.s_re, t.s_im, n);
        else if (has_air)
          accumulate_block<true, false>(ar, ai, sc.ph_re.data(), sc.ph_im.data(),
                                        sc.air.data(), nullptr, nullptr, t.s_re,
                                        t.s_im, n);
        else if (comp_here)
          accumulate_block<false, true>(ar, ai, sc.ph_re.data(), sc.ph_im.data(),
                                        nullptr, cr, ci, t.s_re, t.s_im, n);
        else
          accumulate_block<false, false>(ar, ai, sc.ph_re.data(), sc.ph_im.data(),
                                         nullptr, nullptr, nullptr, t.s_re,
                                         t.s_im, n);
      }
    }
  }
}

std::vector<std::vector<std::complex<double>>> pack_spectra(
    const std::vector<Soa>& acc, std::size_t bins) {
  std::vector<std::vector<std::complex<double>>> out(acc.size());
  for (std::size_t m = 0; m < acc.size(); ++m) {
    out[m].resize(bins);
    for (std::size_t i = 0; i < bins; ++i)
      out[m][i] = {acc[m].re[i], acc[m].im[i]};
    out[m][0] = {out[m][0].real(), 0.0};  // force DC and Nyquist real
    out[m][bins - 1] = {out[m][bins - 1].real(), 0.0};
  }
  return out;
}

}  // namespace

void RirRequest::validate() const {
  if (room.dims.x <= 0 || room.dims.y <= 0 || room.dims.z <= 0)
    throw std::invalid_argument("RirRequest: room dimensions must be positive");
  if (!room.strictly_inside(source.position))
    throw std::invalid_argument("RirRequest: source must be strictly inside the room");
  if (receiver.array.mics.empty())
    throw std::invalid_argument("RirRequest: array needs at least one microphone");
  for (const auto& mic : receiver.array.mics) {
    Vec3 world = receiver.center + receiver.orientation.to_world(mic.position);
    if (!room.strictly_inside(world))
      throw std::invalid_argument("RirRequest: microphone outside the room");
  }
  if (fs <= 0) throw std::invalid_argument("RirRequest: fs must be positive");
  if (max_order < 0) throw std::invalid_argument("RirRequest: max_order must be >= 0");
}

std::string RirRequest::canonical_text() const {
  std::ostringstream os;
  char buf[64];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g ", v);
    os << buf;
  };
  auto put_vec = [&](const Vec3& v) {
    put(v.x);
    put(v.y);
    put(v.z);
  };
  auto put_pattern = [&](const DirectivityPattern& p) {
    os << static_cast<int>(p.kind) << ' ';
    if (p.kind == PatternKind::cardioid_family) {
      put(p.cardioid_a);
      put(p.cardioid_p);
    } else if (p.kind == PatternKind::measured_grid) {
      std::uint64_t h = 0xcbf29ce484222325ULL;
      auto mix = [&](double v) {
        auto bits = std::bit_cast<std::uint64_t>(v);
        h = (h ^ bits) * 0x100000001b3ULL;
      };
      for (double v : p.azimuths_deg) mix(v);
      for (double v : p.elevations_deg) mix(v);
      for (double v : p.freqs_hz) mix(v);
      for (const auto& g : p.gains) {
        mix(g.real());
        mix(g.imag());
      }
      os << h << ' ';
    }
  };
  os << "room ";
  put_vec(room.dims);
  os << "surfaces ";
  for (const auto& s : surfaces.surfaces)
    for (double a : s.alphas) put(a);
  os << "source ";
  put_vec(source.position);
  put_vec(source.orientation.look);
  put_vec(source.orientation.up);
  put_pattern(source.pattern);
  os << "receiver ";
  put_vec(receiver.center);
  put_vec(receiver.orientation.look);
  put_vec(receiver.orientation.up);
  os << (receiver.array.mode == ReceiverMode::per_microphone ? "per_mic " : "centered ");
  for (const auto& mic : receiver.array.mics) {
    put_vec(mic.position);
    put_vec(mic.orientation.look);
    put_vec(mic.orientation.up);
    put_pattern(mic.pattern);
  }
  put(fs);
  os << max_order << ' ' << (mode == SimMode::naive ? "naive" : "advanced") << ' '
     << (air_enabled ? 1 : 0);
  return os.str();
}

std::uint64_t RirRequest::digest() const { return fnv1a64(canonical_text()); }

std::size_t rir_length_for(const RirRequest& req) {
  req.validate();
  auto images = enumerate_images(req.room, req.source.position, req.max_order);
  double max_r = 0.0;
  for (const auto& img : images)
    max_r = std::max(max_r, (img.position - req.receiver.center).norm());
  double mic_radius = 0.0;
  for (const auto& mic : req.receiver.array.mics)
    mic_radius = std::max(mic_radius, mic.position.norm());
  double tail = 0.0;
  for (double t : eyring_t60(req.room, req.surfaces))
    if (std::isfinite(t)) tail = std::max(tail, t);
  double seconds = (max_r + mic_radius) / kSpeedOfSound + tail + kGuardSeconds;
  std::size_t n = next_pow2(
      static_cast<std::size_t>(std::ceil(seconds * req.fs)));
  n = std::max<std::size_t>(n, 64);
  if (n > req.max_samples) {
    std::ostringstream os;
    os << "rir request too long: needs " << n << " samples, cap is "
       << req.max_samples;
    throw std::runtime_error(os.str());
  }
  return n;
}

std::vector<std::vector<std::complex<double>>> transfer_function(
    const RirRequest& req, std::size_t n_fft) {
  if (n_fft == 0 || (n_fft & (n_fft - 1)) != 0)
    throw std::invalid_argument("transfer_function: n_fft must be a power of two");
  Setup s = build_setup(req, n_fft);
  std::vector<Soa> acc(s.mics.size());
  for (auto& a : acc) {
    a.re.assign(s.bins, 0.0);
    a.im.assign(s.bins, 0.0);
  }
  run_terms(s, acc);
  return pack_spectra(acc, s.bins);
}

Rir synthesize_rir(const RirRequest& req) {
  std::size_t n = rir_length_for(req);
  auto spectra = transfer_function(req, n);
  Rir rir;
  rir.fs = req.fs;
  rir.request_digest = req.digest();
  rir.seed = req.seed;
  rir.channels.resize(spectra.size());
  for (std::size_t m = 0; m < spectra.size(); ++m) {
    rir.channels[m].resize(n);
    fft::irfft(spectra[m], rir.channels[m]);
  }
  return rir;
}

std::vector<RirResult> batch_rirs(const std::vector<RirRequest>& requests,
                                  int workers) {
  if (workers < 1) throw std::invalid_argument("batch_rirs: workers must be >= 1");
  std::vector<RirResult> out(requests.size());
  parallel_for(requests.size(), workers, [&](std::size_t i) {
    try {
      out[i].rir = synthesize_rir(requests[i]);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  });
  return out;
}

std::vector<ImageContribution> image_table(const RirRequest& req) {
  req.validate();
  auto images = enumerate_images(req.room, req.source.position, req.max_order);
  bool naive = req.mode == SimMode::naive;
  double d = naive ? naive_reflection_coeff(req) : 0.0;
  std::vector<ImageContribution> rows;
  rows.reserve(images.size());
  for (const auto& img : images) {
    ImageContribution row;
    row.image = img;
    auto [r, dir] = image_geometry(img, req.receiver.center);
    row.distance = r;
    row.direction = dir;
    for (int b = 0; b < kNumBands; ++b) {
      if (naive) {
        row.reflection_mag[b] = std::pow(d, img.order);
      } else {
        double mag = 1.0;
        for (int sf = 0; sf < kNumSurfaces; ++sf) {
          int c = img.reflection_counts[sf];
          if (c == 0) continue;
          mag *= std::pow(
              std::sqrt(1.0 - req.surfaces.surfaces[sf].alphas[b]), c);
        }
        row.reflection_mag[b] = mag;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<std::vector<std::vector<std::complex<double>>>> transfer_terms(
    const RirRequest& req, std::size_t n_fft) {
  Setup s = build_setup(req, n_fft);
  std::size_t n_ch = s.mics.size();
  std::vector<std::vector<std::vector<std::complex<double>>>> out(s.images.size());

  // re-run the block kernel once per image by masking the term list
  Setup one = std::move(s);
  std::vector<Term> all_terms = std::move(one.terms);
  std::vector<ImageSource> all_images = std::move(one.images);
  for (std::size_t k = 0; k < all_images.size(); ++k) {
    one.images.assign(1, all_images[k]);
    one.terms.assign(all_terms.begin() + k * n_ch,
                     all_terms.begin() + (k + 1) * n_ch);
    std::vector<Soa> acc(n_ch);
    for (auto& a : acc) {
      a.re.assign(one.bins, 0.0);
      a.im.assign(one.bins, 0.0);
    }
    run_terms(one, acc);
    out[k] = pack_spectra(acc, one.bins);
  }
  return out;
}

}  // namespace ismf
