#pragma once

#include "jcr/quantizer.hpp"
#include "jcr/types.hpp"

namespace jcr {

// Posterior of one real component z ~ N(mean, prior_var) observed through
// y = z + w, w ~ N(0, noise_var), with y known to lie in the cell (lo, up].
// Infinite bounds give half-open cells; lo == up selects the unquantized
// (AWGN) observation y = lo.
struct ComponentPosterior {
  double mean = 0.0;
  double variance = 0.0;
};
ComponentPosterior quantized_component_posterior(double prior_mean, double prior_var, double noise_var,
                                                 double lo, double up);

// GAMP output step for one complex observation.
//   u         pseudo-prior mean of z = (B x)_i
//   q         observed sample (quantizer output, or raw sample for infinite bits)
//   psi       pseudo-prior variance of z (complex, so psi / 2 per component)
//   noise_var complex noise variance sigma_w^2
// Returns the scaled residual g = (E[z|q] - u) / psi and its negative
// Wirtinger derivative g' = -dg/du = (1 - Var[z|q] / psi) / psi, together
// with the posterior moments of z.
struct OutputResult {
  Complex g{};
  double g_prime = 0.0;
  Complex z_mean{};
  double z_variance = 0.0;
};

struct CellBounds {
  double re_lo, re_up, im_lo, im_up;
};

// Bounds of the quantizer cell holding q. Throws std::invalid_argument when
// either component is not an output level.
CellBounds cell_bounds(Complex q, AdcBits bits, double step_re, double step_im);

OutputResult quantized_output_fn(Complex u, const CellBounds& cell, double psi, double noise_var);
OutputResult quantized_output_fn(Complex u, Complex q, double psi, double noise_var, AdcBits bits,
                                 double step_re, double step_im);

// log of the standard normal upper tail, accurate far into both tails.
double log_normal_tail(double x);

}  // namespace jcr
