#pragma once

#include <vector>

#include "jcr/types.hpp"

namespace jcr {

struct MixtureComponent {
  double weight = 0.0;
  Complex mean{};
  double variance = 1.0;
};

// Sparse coefficient prior: zero_weight * delta(x) + sum_i w_i N(x; mu_i, nu_i).
// Weights (including zero_weight) sum to one. Complex coefficients use
// circular Gaussians, real coefficients use the real part of the means.
struct PriorParams {
  double zero_weight = 0.9;
  std::vector<MixtureComponent> components{{0.1, {}, 1.0}};

  static PriorParams bernoulli_gaussian(double nonzero_prob, double variance);
  // `count` zero-mean components sharing `nonzero_prob` equally, with
  // variances spread geometrically around `variance`.
  static PriorParams gaussian_mixture(double nonzero_prob, double variance, std::size_t count);

  double nonzero_probability() const { return 1.0 - zero_weight; }
  // E|x|^2 under the prior.
  double second_moment() const;
  // Throws std::invalid_argument for negative weights, weights not summing
  // to one (1e-9), non-positive variances, or no components.
  void validate() const;
};

template <class T>
struct ScalarPosterior {
  T mean{};
  double variance = 0.0;
};

// MMSE input denoisers in the curvature parameterization: the pseudo
// observation v relates to x through v | x ~ N(xi x, xi), i.e. r = v / xi is
// x observed in noise of variance 1 / xi. `variance` is Var[x | v], which
// equals the derivative d E[x|v] / dv (the Wirtinger derivative for complex
// inputs).
ScalarPosterior<double> bg_denoiser(double v, double xi, const PriorParams& prior);
ScalarPosterior<Complex> bg_denoiser(Complex v, double xi, const PriorParams& prior);
ScalarPosterior<double> gm_denoiser(double v, double xi, const PriorParams& prior);
ScalarPosterior<Complex> gm_denoiser(Complex v, double xi, const PriorParams& prior);

// Posterior weight/mean/variance of each prior branch for a complex
// observation r with noise variance r_var. Index 0 is the point mass at zero;
// index i >= 1 is components[i - 1].
struct BranchPosterior {
  double responsibility = 0.0;
  Complex mean{};
  double variance = 0.0;
};
void branch_posteriors(Complex r, double r_var, const PriorParams& prior,
                       std::vector<BranchPosterior>& out);

// Same branch decomposition in (r, r_var) form, collapsed to mean/variance.
ScalarPosterior<Complex> denoise(Complex r, double r_var, const PriorParams& prior);

}  // namespace jcr
