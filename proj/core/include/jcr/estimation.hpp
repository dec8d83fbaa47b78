#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jcr/denoisers.hpp"
#include "jcr/measurement_operator.hpp"
#include "jcr/quantizer.hpp"
#include "jcr/types.hpp"

namespace jcr {

enum class EstimationMethod { kTraditional, kGamp };
std::string to_string(EstimationMethod m);

struct EstimateDiagnostics {
  int iterations = 0;
  double final_relative_change = 0.0;
  bool converged = true;
  bool diverged = false;
  std::optional<PriorParams> learned_prior;
  double noise_variance = 0.0;
};

struct ChannelEstimate {
  CMatrix grid;  // M x K
  EstimationMethod method = EstimationMethod::kTraditional;
  EstimateDiagnostics diagnostics;
};

// Per-bin Y H* / (|H|^2 + 1 / snr). snr = +inf is zero-forcing. Throws
// std::invalid_argument for snr <= 0 or mismatched lengths.
std::vector<Complex> mmse_equalize(std::span<const Complex> spectrum, std::span<const Complex> hardware_response,
                                   double snr_linear);

struct TraditionalOptions {
  // Measured hardware frequency response (N bins, FFT order); when set each
  // antenna row is MMSE-equalized before range processing.
  std::optional<std::vector<Complex>> hardware_response;
  double equalizer_snr_linear = kInf;
};

// Range processing per antenna (matched filter against the sequence for
// circulant D, FFT for DFT D), normalized by the row energy N E_s, followed
// by a unitary M-point transform across antennas per range bin.
ChannelEstimate traditional_estimate(const CMatrix& block, const MeasurementMatrix& d,
                                     const TraditionalOptions& options = {});

enum class PriorFamily { kBernoulliGaussian, kGaussianMixture };
enum class ObservationMode {
  kFullBlock,       // quantized M x N block through B = D^T (x) A_M
  kMatchedFiltered  // matched-filter output treated as A_M X + Gaussian noise
};

struct GampConfig {
  int max_iterations = 200;
  double tolerance = 1e-6;
  double damping = 0.7;
  PriorFamily prior = PriorFamily::kBernoulliGaussian;
  std::size_t components = 3;  // mixture order for kGaussianMixture
  bool em_enabled = true;
  bool learn_noise_variance = false;
  // Floor for every variance/curvature, relative to the signal scale.
  double variance_floor = 1e-12;
  double initial_nonzero_prob = 0.1;
  // Overrides the energy-based initialization (in the caller's units).
  std::optional<PriorParams> initial_prior;
  ObservationMode observation = ObservationMode::kFullBlock;

  void validate() const;
};

// Iterate state. Naming follows the sum-product GAMP recursion:
//   x_hat, x_var  posterior moments of the range-angle coefficients
//   p_var         output-side curvature psi = |B|^2 x_var
//   s_hat, s_var  scaled residual z and its curvature g'
//   r_hat, r_var  input pseudo-observation; xi = 1 / r_var, v = r_hat / r_var
struct GampState {
  CMatrix x_hat;
  RMatrix x_var;
  RMatrix p_var;
  CMatrix s_hat;
  RMatrix s_var;
  CMatrix r_hat;
  RMatrix r_var;
  int iteration = 0;
};

struct EmOptions {
  bool enabled = true;
  bool learn_means = false;  // Bernoulli-Gaussian keeps a zero mean
  double floor = 1e-12;
};

// Closed-form EM refresh of the prior from the branch posteriors of every
// coefficient given (r_hat, r_var). Weights stay on the simplex with the zero
// weight clamped to [floor, 1 - floor]; variances are floored. Components
// with no responsibility keep their previous mean and variance. Returns the
// prior unchanged when disabled.
PriorParams em_update(const GampState& state, const PriorParams& prior, const EmOptions& options);

// Sparse recovery of X from a (quantized) block. `noise_variance` is the
// complex noise variance of the unquantized samples.
ChannelEstimate gamp_estimate(const QuantizedBlock& block, const MeasurementOperator& op, double noise_variance,
                              const GampConfig& config);

}  // namespace jcr
