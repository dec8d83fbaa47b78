#pragma once

#include <cstdint>

#include "jcr/channel.hpp"
#include "jcr/types.hpp"
#include "jcr/waveform.hpp"

namespace jcr {

// How the additive noise level is chosen.
struct NoiseSpec {
  enum class Kind { kSnrDb, kVariance, kNone };
  Kind kind = Kind::kNone;
  double value = 0.0;

  // snr_db = +inf is the same as none().
  static NoiseSpec snr_db(double db);
  static NoiseSpec variance(double sigma2);
  static NoiseSpec none() { return {}; }
};

struct ReceivedBlock {
  CMatrix samples;              // M x N
  double noise_variance = 0.0;  // per complex sample, after repetition averaging
  double snr_db = kInf;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

// Z = A_M X D, the noiseless received block.
CMatrix noiseless_block(const CMatrix& channel, const MeasurementMatrix& d);

// Y = A_M X D + W with i.i.d. circular Gaussian W. In SNR mode the noise
// variance is ||Z||^2 / (M N snr); `repetitions` coherent averages divide the
// added variance by R. Throws std::invalid_argument when an SNR is requested
// for an all-zero channel or shapes are inconsistent.
ReceivedBlock synthesize_received(const CMatrix& channel, const MeasurementMatrix& d,
                                  const NoiseSpec& noise, std::uint64_t seed,
                                  std::uint64_t stream = 2, std::size_t repetitions = 1);

// Rounds each component to IEEE single precision, the resolution of the
// captured I/Q files.
void round_to_capture_precision(CMatrix& block);

}  // namespace jcr
