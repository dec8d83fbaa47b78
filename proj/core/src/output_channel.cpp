#include "jcr/output_channel.hpp"

#include <cmath>
#include <stdexcept>

namespace jcr {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double log_normal_pdf(double x) { return -0.5 * x * x - kLogSqrt2Pi; }

// log(1 - exp(a)) for a < 0.
double log1mexp(double a) {
  return a > -0.6931471805599453 ? std::log(-std::expm1(a)) : std::log1p(-std::exp(a));
}

struct CellMass {
  double log_mass;  // log P(alpha_lo < Z <= alpha_up)
  double r_lo;      // phi(alpha_lo) / mass, 0 for an infinite bound
  double r_up;      // phi(alpha_up) / mass
};

CellMass cell_mass(double a_lo, double a_up) {
  double log_mass;
  if (std::isinf(a_up) && std::isinf(a_lo)) {
    log_mass = 0.0;
  } else if (std::isinf(a_up)) {
    log_mass = log_normal_tail(a_lo);
  } else if (std::isinf(a_lo)) {
    log_mass = log_normal_tail(-a_up);
  } else if (a_lo >= 0.0) {
    const double t_lo = log_normal_tail(a_lo);
    log_mass = t_lo + log1mexp(log_normal_tail(a_up) - t_lo);
  } else if (a_up <= 0.0) {
    const double t_up = log_normal_tail(-a_up);
    log_mass = t_up + log1mexp(log_normal_tail(-a_lo) - t_up);
  } else {
    log_mass = std::log(1.0 - 0.5 * std::erfc(a_up / std::sqrt(2.0)) - 0.5 * std::erfc(-a_lo / std::sqrt(2.0)));
  }
  CellMass m;
  m.log_mass = log_mass;
  m.r_lo = std::isinf(a_lo) ? 0.0 : std::exp(log_normal_pdf(a_lo) - log_mass);
  m.r_up = std::isinf(a_up) ? 0.0 : std::exp(log_normal_pdf(a_up) - log_mass);
  return m;
}

}  // namespace

double log_normal_tail(double x) {
  if (x < 30.0) return std::log(0.5 * std::erfc(x / std::sqrt(2.0)));
  // Asymptotic series of the Mills ratio.
  const double x2 = x * x;
  return log_normal_pdf(x) - std::log(x) + std::log1p(-1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2));
}

ComponentPosterior quantized_component_posterior(double prior_mean, double prior_var, double noise_var,
                                                 double lo, double up) {
  ComponentPosterior out;
  const double total = prior_var + noise_var;
  if (lo == up) {
    // Unquantized observation.
    const double gain = prior_var / total;
    out.mean = prior_mean + gain * (lo - prior_mean);
    out.variance = prior_var * noise_var / total;
    return out;
  }
  const double sd = std::sqrt(total);
  const double a_lo = (lo - prior_mean) / sd;
  const double a_up = (up - prior_mean) / sd;
  const CellMass m = cell_mass(a_lo, a_up);
  const double ratio = m.r_lo - m.r_up;
  const double edge = (std::isinf(a_up) ? 0.0 : a_up * m.r_up) - (std::isinf(a_lo) ? 0.0 : a_lo * m.r_lo);
  out.mean = prior_mean + prior_var / sd * ratio;
  const double shrink = (prior_var * prior_var / total) * (edge + ratio * ratio);
  out.variance = std::clamp(prior_var - shrink, prior_var * 1e-14, prior_var);
  return out;
}

CellBounds cell_bounds(Complex q, AdcBits bits, double step_re, double step_im) {
  const auto [re_lo, re_up] = quantizer_cell(q.real(), step_re, bits);
  const auto [im_lo, im_up] = quantizer_cell(q.imag(), step_im, bits);
  return {re_lo, re_up, im_lo, im_up};
}

OutputResult quantized_output_fn(Complex u, const CellBounds& cell, double psi, double noise_var) {
  if (!(psi > 0.0)) throw std::invalid_argument("output curvature psi must be positive");
  const double half_psi = psi / 2.0;
  const double half_noise = noise_var / 2.0;
  const auto re = quantized_component_posterior(u.real(), half_psi, half_noise, cell.re_lo, cell.re_up);
  const auto im = quantized_component_posterior(u.imag(), half_psi, half_noise, cell.im_lo, cell.im_up);
  OutputResult out;
  out.z_mean = {re.mean, im.mean};
  out.z_variance = re.variance + im.variance;
  out.g = (out.z_mean - u) / psi;
  out.g_prime = (1.0 - out.z_variance / psi) / psi;
  return out;
}

OutputResult quantized_output_fn(Complex u, Complex q, double psi, double noise_var, AdcBits bits,
                                 double step_re, double step_im) {
  return quantized_output_fn(u, cell_bounds(q, bits, step_re, step_im), psi, noise_var);
}

}  // namespace jcr
