#include "jcr/denoisers.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace jcr {

PriorParams PriorParams::bernoulli_gaussian(double nonzero_prob, double variance) {
  PriorParams p;
  p.zero_weight = 1.0 - nonzero_prob;
  p.components = {{nonzero_prob, {}, variance}};
  p.validate();
  return p;
}

PriorParams PriorParams::gaussian_mixture(double nonzero_prob, double variance, std::size_t count) {
  if (count == 0) throw std::invalid_argument("mixture needs at least one component");
  PriorParams p;
  p.zero_weight = 1.0 - nonzero_prob;
  p.components.clear();
  // Geometric spread in variance, renormalized so the mixture second moment
  // equals `variance`.
  std::vector<double> factors(count);
  for (std::size_t i = 0; i < count; ++i)
    factors[i] = std::pow(4.0, static_cast<double>(i) - static_cast<double>(count - 1) / 2.0);
  const double mean_factor = std::accumulate(factors.begin(), factors.end(), 0.0) / static_cast<double>(count);
  for (std::size_t i = 0; i < count; ++i)
    p.components.push_back({nonzero_prob / static_cast<double>(count), {}, variance * factors[i] / mean_factor});
  p.validate();
  return p;
}

double PriorParams::second_moment() const {
  double m = 0.0;
  for (const auto& c : components) m += c.weight * (c.variance + std::norm(c.mean));
  return m;
}

void PriorParams::validate() const {
  if (components.empty()) throw std::invalid_argument("prior needs at least one Gaussian component");
  if (!(zero_weight >= 0.0)) throw std::invalid_argument("prior zero weight must be non-negative");
  double total = zero_weight;
  for (const auto& c : components) {
    if (!(c.weight >= 0.0)) throw std::invalid_argument("prior weights must be non-negative");
    if (!(c.variance > 0.0)) throw std::invalid_argument("prior variances must be positive");
    total += c.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("prior weights must sum to one");
}

namespace {

// log N(x; mu, s) for real or circular complex Gaussians.
double log_density(double x, double mu, double s) {
  return -0.5 * (x - mu) * (x - mu) / s - 0.5 * std::log(2.0 * kPi * s);
}
double log_density(Complex x, Complex mu, double s) { return -std::norm(x - mu) / s - std::log(kPi * s); }

double mean_of(const MixtureComponent& c, double) { return c.mean.real(); }
Complex mean_of(const MixtureComponent& c, Complex) { return c.mean; }

double magnitude_sq(double x) { return x * x; }
double magnitude_sq(Complex x) { return std::norm(x); }

// Posterior of x given r = x + noise(r_var) under the mixture prior.
template <class T>
ScalarPosterior<T> mixture_posterior(T r, double r_var, const PriorParams& prior) {
  const std::size_t n = prior.components.size() + 1;
  double log_w[32];
  std::vector<double> heap;
  double* lw = log_w;
  if (n > 32) {
    heap.resize(n);
    lw = heap.data();
  }
  lw[0] = prior.zero_weight > 0.0 ? std::log(prior.zero_weight) + log_density(r, T{}, r_var) : -kInf;
  for (std::size_t i = 0; i < prior.components.size(); ++i) {
    const auto& c = prior.components[i];
    lw[i + 1] = c.weight > 0.0 ? std::log(c.weight) + log_density(r, mean_of(c, T{}), c.variance + r_var) : -kInf;
  }
  const double peak = *std::max_element(lw, lw + n);
  double norm = 0.0;
  for (std::size_t i = 0; i < n; ++i) norm += std::exp(lw[i] - peak);

  T mean{};
  double second = 0.0;
  for (std::size_t i = 0; i < prior.components.size(); ++i) {
    const auto& c = prior.components[i];
    const double beta = std::exp(lw[i + 1] - peak) / norm;
    if (beta == 0.0) continue;
    const T m = (c.variance * r + r_var * mean_of(c, T{})) / (c.variance + r_var);
    const double v = c.variance * r_var / (c.variance + r_var);
    mean += beta * m;
    second += beta * (v + magnitude_sq(m));
  }
  ScalarPosterior<T> out;
  out.mean = mean;
  out.variance = std::max(0.0, second - magnitude_sq(mean));
  return out;
}

void require_positive(double xi) {
  if (!(xi > 0.0)) throw std::invalid_argument("denoiser curvature xi must be positive");
}

}  // namespace

ScalarPosterior<double> gm_denoiser(double v, double xi, const PriorParams& prior) {
  require_positive(xi);
  return mixture_posterior<double>(v / xi, 1.0 / xi, prior);
}

ScalarPosterior<Complex> gm_denoiser(Complex v, double xi, const PriorParams& prior) {
  require_positive(xi);
  return mixture_posterior<Complex>(v / xi, 1.0 / xi, prior);
}

ScalarPosterior<double> bg_denoiser(double v, double xi, const PriorParams& prior) {
  if (prior.components.size() != 1) throw std::invalid_argument("Bernoulli-Gaussian prior has one component");
  return gm_denoiser(v, xi, prior);
}

ScalarPosterior<Complex> bg_denoiser(Complex v, double xi, const PriorParams& prior) {
  if (prior.components.size() != 1) throw std::invalid_argument("Bernoulli-Gaussian prior has one component");
  return gm_denoiser(v, xi, prior);
}

ScalarPosterior<Complex> denoise(Complex r, double r_var, const PriorParams& prior) {
  return mixture_posterior<Complex>(r, r_var, prior);
}

void branch_posteriors(Complex r, double r_var, const PriorParams& prior, std::vector<BranchPosterior>& out) {
  const std::size_t n = prior.components.size() + 1;
  out.resize(n);
  out[0].responsibility = prior.zero_weight > 0.0 ? std::log(prior.zero_weight) + log_density(r, Complex{}, r_var) : -kInf;
  out[0].mean = {};
  out[0].variance = 0.0;
  for (std::size_t i = 0; i < prior.components.size(); ++i) {
    const auto& c = prior.components[i];
    auto& b = out[i + 1];
    b.responsibility = c.weight > 0.0 ? std::log(c.weight) + log_density(r, c.mean, c.variance + r_var) : -kInf;
    b.mean = (c.variance * r + r_var * c.mean) / (c.variance + r_var);
    b.variance = c.variance * r_var / (c.variance + r_var);
  }
  double peak = -kInf;
  for (const auto& b : out) peak = std::max(peak, b.responsibility);
  double norm = 0.0;
  for (auto& b : out) {
    b.responsibility = std::exp(b.responsibility - peak);
    norm += b.responsibility;
  }
  for (auto& b : out) b.responsibility /= norm;
}

}  // namespace jcr
