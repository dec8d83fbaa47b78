#include "jcr/frontend.hpp"

#include <cmath>
#include <stdexcept>

#include "jcr/measurement_operator.hpp"
#include "jcr/rng.hpp"

namespace jcr {

NoiseSpec NoiseSpec::snr_db(double db) {
  if (std::isinf(db) && db > 0) return none();
  if (std::isnan(db) || std::isinf(db)) throw std::invalid_argument("SNR must be finite or +inf");
  return {Kind::kSnrDb, db};
}

NoiseSpec NoiseSpec::variance(double sigma2) {
  if (!(sigma2 >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
  return {Kind::kVariance, sigma2};
}

CMatrix noiseless_block(const CMatrix& channel, const MeasurementMatrix& d) {
  if (channel.cols() != static_cast<Eigen::Index>(d.range_bins)) {
    throw std::invalid_argument("channel has " + std::to_string(channel.cols()) +
                                " range bins, measurement matrix has " + std::to_string(d.range_bins));
  }
  return MeasurementOperator(static_cast<std::size_t>(channel.rows()), d).apply(channel);
}

ReceivedBlock synthesize_received(const CMatrix& channel, const MeasurementMatrix& d,
                                  const NoiseSpec& noise, std::uint64_t seed, std::uint64_t stream,
                                  std::size_t repetitions) {
  if (repetitions == 0) throw std::invalid_argument("repetitions must be at least 1");
  ReceivedBlock out;
  out.samples = noiseless_block(channel, d);
  out.seed = seed;
  out.stream = stream;

  const double signal = out.samples.squaredNorm();
  double sigma2 = 0.0;
  switch (noise.kind) {
    case NoiseSpec::Kind::kNone:
      out.snr_db = kInf;
      return out;
    case NoiseSpec::Kind::kVariance:
      sigma2 = noise.value;
      out.snr_db = signal > 0.0 && sigma2 > 0.0
                       ? linear_to_db(signal / (sigma2 * static_cast<double>(out.samples.size())))
                       : kInf;
      break;
    case NoiseSpec::Kind::kSnrDb:
      if (!(signal > 0.0))
        throw std::invalid_argument("SNR is undefined for an all-zero channel; give a noise variance");
      sigma2 = signal / (static_cast<double>(out.samples.size()) * db_to_linear(noise.value));
      out.snr_db = noise.value;
      break;
  }
  sigma2 /= static_cast<double>(repetitions);
  out.noise_variance = sigma2;
  if (sigma2 == 0.0) return out;

  RandomStream rng(seed, stream);
  for (Eigen::Index n = 0; n < out.samples.cols(); ++n)
    for (Eigen::Index m = 0; m < out.samples.rows(); ++m) out.samples(m, n) += rng.complex_normal(sigma2);
  return out;
}

void round_to_capture_precision(CMatrix& block) {
  // Walk the interleaved doubles directly; g++ 11 drops the tail element of
  // odd-length blocks when vectorizing the per-complex form of this loop.
  double* p = reinterpret_cast<double*>(block.data());
  const Eigen::Index n = 2 * block.size();
  for (Eigen::Index i = 0; i < n; ++i) p[i] = static_cast<double>(static_cast<float>(p[i]));
}

}  // namespace jcr
