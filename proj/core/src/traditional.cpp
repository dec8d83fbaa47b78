#include <cmath>
#include <stdexcept>

#include "jcr/estimation.hpp"
#include "jcr/fft.hpp"

namespace jcr {

std::string to_string(EstimationMethod m) {
  switch (m) {
    case EstimationMethod::kTraditional:
      return "traditional";
    case EstimationMethod::kGamp:
      return "gamp";
  }
  return "unknown";
}

std::vector<Complex> mmse_equalize(std::span<const Complex> spectrum, std::span<const Complex> hardware_response,
                                   double snr_linear) {
  if (hardware_response.empty()) throw std::invalid_argument("hardware response is empty");
  if (spectrum.size() != hardware_response.size())
    throw std::invalid_argument("spectrum and hardware response differ in length");
  if (!(snr_linear > 0.0)) throw std::invalid_argument("equalizer SNR must be positive");
  const double reg = std::isinf(snr_linear) ? 0.0 : 1.0 / snr_linear;
  std::vector<Complex> out(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    const Complex h = hardware_response[i];
    const double denom = std::norm(h) + reg;
    out[i] = denom > 0.0 ? spectrum[i] * std::conj(h) / denom : Complex{};
  }
  return out;
}

ChannelEstimate traditional_estimate(const CMatrix& block, const MeasurementMatrix& d,
                                     const TraditionalOptions& options) {
  if (block.cols() != static_cast<Eigen::Index>(d.length)) {
    throw std::invalid_argument("block has " + std::to_string(block.cols()) + " samples per antenna, sequence has " +
                                std::to_string(d.length));
  }
  const CMatrix* input = &block;
  CMatrix equalized;
  if (options.hardware_response) {
    const auto& hw = *options.hardware_response;
    if (hw.size() != d.length) throw std::invalid_argument("hardware response must have N bins");
    equalized.resize(block.rows(), block.cols());
    std::vector<Complex> row(d.length);
    const double inv_n = 1.0 / static_cast<double>(d.length);
    for (Eigen::Index m = 0; m < block.rows(); ++m) {
      for (Eigen::Index n = 0; n < block.cols(); ++n) row[static_cast<std::size_t>(n)] = block(m, n);
      fft::forward(row);
      row = mmse_equalize(row, hw, options.equalizer_snr_linear);
      fft::inverse(row);
      for (Eigen::Index n = 0; n < block.cols(); ++n) equalized(m, n) = row[static_cast<std::size_t>(n)] * inv_n;
    }
    input = &equalized;
  }
  // A_M^H Y D^H / (N E_s) is the adjoint of the measurement operator scaled by
  // the row energy: matched filtering per antenna, then the angle transform.
  const MeasurementOperator op(static_cast<std::size_t>(block.rows()), d);
  ChannelEstimate est;
  est.method = EstimationMethod::kTraditional;
  est.grid = op.apply_adjoint(*input) / op.row_energy();
  est.diagnostics.iterations = 0;
  return est;
}

}  // namespace jcr
