// Copyright 2026 ISMF Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef ISMF_ISM_ENGINE_HPP_
#define ISMF_ISM_ENGINE_HPP_

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ismf/directivity.hpp"
#include "ismf/geometry.hpp"
#include "ismf/materials.hpp"

namespace ismf {

enum class SimMode { naive, advanced };

struct SourceSpec {
  Vec3 position;
  DirectivityPattern pattern;
  Orientation orientation;
};

struct ReceiverSpec {
  ArrayGeometry array;
  Vec3 center;
  Orientation orientation;  // array frame in world coordinates
};

/// Everything needed to synthesize one multichannel RIR.
///
/// The transfer function realized per channel is the sum over image sources
/// of  exp(-j 2 pi f r_k / c) / r_k * d_air(r_k, f) * d_k(f)
///     * g_src(-dir_k, f) * g_mic(dir_k, f),
/// with f the physical bin frequency (the delay is r_k / c seconds) and
/// dir_k the unit vector toward the image. Naive mode forces omnidirectional
/// responses and a flat reflection coefficient d^order, with d derived from
/// the area-weighted mean absorption; the air model is shared by both modes.
struct RirRequest {
  Shoebox room;
  SurfaceSet surfaces;
  SourceSpec source;
  ReceiverSpec receiver;
  double fs = 16000.0;
  int max_order = 20;
  SimMode mode = SimMode::advanced;
  bool air_enabled = true;
  std::size_t max_samples = std::size_t{1} << 22;
  std::uint64_t seed = 0;  // metadata only, recorded in the Rir

  void validate() const;  // throws std::invalid_argument on violations
  std::string canonical_text() const;
  std::uint64_t digest() const;
};

struct Rir {
  std::vector<std::vector<double>> channels;  // M x T
  double fs = 0.0;
  std::uint64_t request_digest = 0;
  std::uint64_t seed = 0;

  std::size_t length() const { return channels.empty() ? 0 : channels[0].size(); }
};

/// RIR length rule: next power of two >= fs * (max image delay + Eyring T60
/// + 50 ms guard). Throws when that exceeds req.max_samples.
std::size_t rir_length_for(const RirRequest& req);

/// Per-channel complex spectra on n_fft/2+1 bins. DC and Nyquist bins are
/// forced real. The caller picks n_fft; rir_length_for() gives the value
/// that fits the full decay.
std::vector<std::vector<std::complex<double>>> transfer_function(
    const RirRequest& req, std::size_t n_fft);

/// Inverse real DFT of the transfer function at the rir_length_for() size.
Rir synthesize_rir(const RirRequest& req);

struct RirResult {
  std::optional<Rir> rir;
  std::string error;  // empty on success
  bool ok() const { return rir.has_value(); }
};

/// Batch synthesis, parallel across requests. Output order matches input
/// order and bytes are identical for any worker count; per-request failures
/// are reported in place without aborting the batch.
std::vector<RirResult> batch_rirs(const std::vector<RirRequest>& requests,
                                  int workers);

/// Per-image rows for inspection dumps: geometry to the array center plus the
/// compound reflection magnitude at the octave band centers.
struct ImageContribution {
  ImageSource image;
  double distance = 0.0;
  Vec3 direction;
  std::array<double, kNumBands> reflection_mag{};
};
std::vector<ImageContribution> image_table(const RirRequest& req);

/// Per-image transfer-function terms, indexed [image][channel][bin]. The
/// terms sum to transfer_function(); memory scales with images x bins, so
/// this is meant for small inspection scenes.
std::vector<std::vector<std::vector<std::complex<double>>>> transfer_terms(
    const RirRequest& req, std::size_t n_fft);

}  // namespace ismf

#endif  // ISMF_ISM_ENGINE_HPP_
