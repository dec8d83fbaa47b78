#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jcr/estimation.hpp"
#include "jcr/output_channel.hpp"

namespace jcr {

void GampConfig::validate() const {
  if (max_iterations < 1) throw std::invalid_argument("GAMP needs at least one iteration");
  if (!(tolerance > 0.0)) throw std::invalid_argument("GAMP tolerance must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) throw std::invalid_argument("GAMP damping must lie in (0, 1]");
  if (prior == PriorFamily::kGaussianMixture && components < 1)
    throw std::invalid_argument("mixture order must be at least 1");
  if (!(variance_floor > 0.0)) throw std::invalid_argument("variance floor must be positive");
  if (!(initial_nonzero_prob > 0.0 && initial_nonzero_prob <= 1.0))
    throw std::invalid_argument("initial sparsity must lie in (0, 1]");
  if (initial_prior) initial_prior->validate();
}

PriorParams em_update(const GampState& state, const PriorParams& prior, const EmOptions& options) {
  if (!options.enabled) return prior;
  const std::size_t branches = prior.components.size() + 1;
  std::vector<double> weight(branches, 0.0);
  std::vector<Complex> mean_acc(branches, Complex{});
  std::vector<BranchPosterior> post;

  const Eigen::Index count = state.r_hat.size();
  if (count == 0) return prior;
  for (Eigen::Index i = 0; i < count; ++i) {
    branch_posteriors(state.r_hat.data()[i], state.r_var.data()[i], prior, post);
    for (std::size_t b = 0; b < branches; ++b) {
      weight[b] += post[b].responsibility;
      mean_acc[b] += post[b].responsibility * post[b].mean;
    }
  }

  PriorParams next = prior;
  std::vector<Complex> new_mean(branches);
  for (std::size_t b = 1; b < branches; ++b) {
    const auto& c = prior.components[b - 1];
    new_mean[b] = (options.learn_means && weight[b] > 0.0) ? mean_acc[b] / weight[b] : c.mean;
  }
  // Second pass for the variances around the refreshed means.
  std::vector<double> var_acc(branches, 0.0);
  for (Eigen::Index i = 0; i < count; ++i) {
    branch_posteriors(state.r_hat.data()[i], state.r_var.data()[i], prior, post);
    for (std::size_t b = 1; b < branches; ++b)
      var_acc[b] += post[b].responsibility * (std::norm(post[b].mean - new_mean[b]) + post[b].variance);
  }

  const double n = static_cast<double>(count);
  const double eps = options.floor;
  double zero = std::clamp(weight[0] / n, eps, 1.0 - eps);
  double active_total = 0.0;
  for (std::size_t b = 1; b < branches; ++b) active_total += weight[b];
  for (std::size_t b = 1; b < branches; ++b) {
    auto& c = next.components[b - 1];
    // Share of the nonzero mass; uniform when nothing is active.
    const double share = active_total > 0.0 ? weight[b] / active_total : 1.0 / static_cast<double>(branches - 1);
    c.weight = (1.0 - zero) * share;
    c.mean = new_mean[b];
    if (weight[b] > 1e-300) c.variance = std::max(var_acc[b] / weight[b], eps);
  }
  next.zero_weight = zero;
  return next;
}

namespace {

PriorParams scale_prior(PriorParams p, double amplitude) {
  for (auto& c : p.components) {
    c.mean *= amplitude;
    c.variance *= amplitude * amplitude;
  }
  return p;
}

bool all_finite(const CMatrix& m) { return m.allFinite(); }
bool all_finite(const RMatrix& m) { return m.allFinite(); }

}  // namespace

ChannelEstimate gamp_estimate(const QuantizedBlock& block, const MeasurementOperator& full_op, double noise_variance,
                              const GampConfig& config) {
  config.validate();
  if (!(noise_variance >= 0.0)) throw std::invalid_argument("noise variance must be non-negative");
  const Eigen::Index M = full_op.elements();
  if (block.values.rows() != M || block.values.cols() != full_op.length())
    throw std::invalid_argument("block shape does not match the measurement operator");

  // Observation model actually iterated on.
  const bool matched = config.observation == ObservationMode::kMatchedFiltered;
  std::optional<MeasurementOperator> mf_op;
  CMatrix obs;
  double sigma2 = noise_variance;
  AdcBits obs_bits = block.bits;
  if (matched) {
    MeasurementMatrix ident;
    ident.mode = MatrixMode::kIdentity;
    ident.range_bins = ident.length = static_cast<std::size_t>(full_op.range_bins());
    mf_op.emplace(static_cast<std::size_t>(M), ident);
    // Back to the antenna domain: Y D^H / (N E_s) = A_M X + noise.
    obs = mf_op->apply(full_op.apply_adjoint(block.values) / full_op.row_energy());
    double distortion = 0.0;
    if (!block.bits.is_infinite()) {
      const double mse = gaussian_quantizer_mse(block.step_scale, block.bits.value());
      double power = 0.0;
      for (Eigen::Index m = 0; m < M; ++m)
        power += (block.step_re[m] * block.step_re[m] + block.step_im[m] * block.step_im[m]) /
                 (block.step_scale * block.step_scale);
      distortion = mse * power / static_cast<double>(M);
    }
    sigma2 = (noise_variance + distortion) / full_op.row_energy();
    obs_bits = AdcBits::infinite();
  } else {
    obs = block.values;
  }
  const MeasurementOperator& op = matched ? *mf_op : full_op;
  const Eigen::Index K = op.range_bins();
  const Eigen::Index N = op.length();

  // Energy of the unquantized observation, used for normalization and the
  // prior initialization. Quantized blocks carry their component RMS in the
  // steps (step = rms * step_scale).
  double energy = 0.0;
  if (!matched && !block.bits.is_infinite()) {
    for (Eigen::Index m = 0; m < M; ++m)
      energy += static_cast<double>(N) * (block.step_re[m] * block.step_re[m] + block.step_im[m] * block.step_im[m]) /
                (block.step_scale * block.step_scale);
  } else {
    energy = obs.squaredNorm();
  }
  const double rms = std::sqrt(energy / static_cast<double>(M * N));
  const double scale = rms > 0.0 ? rms : 1.0;
  const double inv_scale = 1.0 / scale;

  // Cell bounds in normalized units.
  const Eigen::Index count_out = M * N;
  std::vector<CellBounds> cells(static_cast<std::size_t>(count_out));
  for (Eigen::Index n = 0; n < N; ++n)
    for (Eigen::Index m = 0; m < M; ++m) {
      const Complex q = obs(m, n);
      CellBounds c;
      if (obs_bits.is_infinite()) {
        c = {q.real(), q.real(), q.imag(), q.imag()};
      } else {
        c = cell_bounds(q, obs_bits, block.step_re[m], block.step_im[m]);
      }
      c.re_lo *= inv_scale;
      c.re_up *= inv_scale;
      c.im_lo *= inv_scale;
      c.im_up *= inv_scale;
      cells[static_cast<std::size_t>(n * M + m)] = c;
    }
  double sigma2_n = sigma2 * inv_scale * inv_scale;

  // Prior in normalized units.
  PriorParams prior;
  if (config.initial_prior) {
    prior = scale_prior(*config.initial_prior, inv_scale);
  } else {
    const double eta = config.initial_nonzero_prob;
    const double signal = std::max(energy * inv_scale * inv_scale - static_cast<double>(count_out) * sigma2_n,
                                   0.01 * energy * inv_scale * inv_scale);
    const double nu = signal / (eta * op.frobenius_squared());
    prior = config.prior == PriorFamily::kBernoulliGaussian
                ? PriorParams::bernoulli_gaussian(eta, nu)
                : PriorParams::gaussian_mixture(eta, nu, config.components);
  }
  const double floor = config.variance_floor;
  EmOptions em{config.em_enabled, config.prior == PriorFamily::kGaussianMixture, floor};

  GampState st;
  st.x_hat = CMatrix::Zero(M, K);
  st.x_var = RMatrix::Constant(M, K, std::max(prior.second_moment(), floor));
  st.s_hat = CMatrix::Zero(M, N);
  st.s_var = RMatrix::Zero(M, N);
  st.p_var = RMatrix::Zero(M, N);
  st.r_hat = CMatrix::Zero(M, K);
  st.r_var = RMatrix::Constant(M, K, 1.0);

  GampState stable = st;
  PriorParams stable_prior = prior;
  ChannelEstimate est;
  est.method = EstimationMethod::kGamp;
  EstimateDiagnostics& diag = est.diagnostics;
  diag.converged = false;

  const double beta = config.damping;
  double rel_change = kInf;
  for (int it = 1; it <= config.max_iterations; ++it) {
    // Output step.
    RMatrix p_var = op.apply_squared(st.x_var).cwiseMax(floor);
    CMatrix p_hat = op.apply(st.x_hat) - (p_var.array() * st.s_hat.array()).matrix();
    CMatrix s_new(M, N);
    RMatrix s_var_new(M, N);
    for (Eigen::Index n = 0; n < N; ++n)
      for (Eigen::Index m = 0; m < M; ++m) {
        const auto r = quantized_output_fn(p_hat(m, n), cells[static_cast<std::size_t>(n * M + m)], p_var(m, n),
                                           sigma2_n);
        s_new(m, n) = r.g;
        s_var_new(m, n) = std::max(r.g_prime, floor);
      }
    if (it == 1) {
      st.s_hat = s_new;
      st.s_var = s_var_new;
    } else {
      st.s_hat = beta * s_new + (1.0 - beta) * st.s_hat;
      st.s_var = beta * s_var_new + (1.0 - beta) * st.s_var;
    }
    st.p_var = p_var;

    // Input step.
    RMatrix r_var = op.apply_squared_adjoint(st.s_var).cwiseMax(floor).cwiseInverse();
    CMatrix r_hat = st.x_hat + (r_var.array() * op.apply_adjoint(st.s_hat).array()).matrix();
    CMatrix x_new(M, K);
    RMatrix x_var_new(M, K);
    for (Eigen::Index i = 0; i < M * K; ++i) {
      const auto post = denoise(r_hat.data()[i], r_var.data()[i], prior);
      x_new.data()[i] = post.mean;
      x_var_new.data()[i] = std::max(post.variance, floor);
    }
    st.r_hat = r_hat;
    st.r_var = r_var;

    const CMatrix x_prev = st.x_hat;
    st.x_hat = beta * x_new + (1.0 - beta) * st.x_hat;
    st.x_var = beta * x_var_new + (1.0 - beta) * st.x_var;
    st.iteration = it;

    if (!all_finite(st.x_hat) || !all_finite(st.x_var) || !all_finite(st.s_hat) || !all_finite(st.s_var)) {
      diag.diverged = true;
      st = stable;
      prior = stable_prior;
      break;
    }

    if (config.em_enabled) prior = em_update(st, prior, em);
    if (config.learn_noise_variance) {
      // Refresh sigma_w^2 from the output posterior of the noise term.
      double acc = 0.0;
      RMatrix pv = op.apply_squared(st.x_var).cwiseMax(floor);
      CMatrix ph = op.apply(st.x_hat) - (pv.array() * st.s_hat.array()).matrix();
      for (Eigen::Index n = 0; n < N; ++n)
        for (Eigen::Index m = 0; m < M; ++m) {
          const auto& c = cells[static_cast<std::size_t>(n * M + m)];
          const auto z = quantized_output_fn(ph(m, n), c, pv(m, n), sigma2_n);
          if (c.re_lo == c.re_up) {
            acc += std::norm(Complex{c.re_lo, c.im_lo} - z.z_mean) + z.z_variance;
          } else {
            // E[|y - z|^2 | cell]: posterior of y from the same Gaussian pair.
            const double half = pv(m, n) / 2.0, hn = sigma2_n / 2.0, tot = half + hn;
            for (int part = 0; part < 2; ++part) {
              const double u = part == 0 ? ph(m, n).real() : ph(m, n).imag();
              const double lo = part == 0 ? c.re_lo : c.im_lo;
              const double up = part == 0 ? c.re_up : c.im_up;
              // y ~ N(u, tot) truncated to the cell, w | y linear in y.
              const auto y = quantized_component_posterior(u, tot, 0.0, lo, up);
              const double g = hn / tot;
              acc += g * g * (std::pow(y.mean - u, 2) + y.variance) + half * hn / tot;
            }
          }
        }
      sigma2_n = std::max(acc / static_cast<double>(count_out), floor);
    }

    const double prev_norm = x_prev.norm();
    rel_change = prev_norm > 0.0 ? (st.x_hat - x_prev).norm() / prev_norm : (st.x_hat.norm() > 0.0 ? kInf : 0.0);
    stable = st;
    stable_prior = prior;
    if (rel_change < config.tolerance) {
      diag.converged = true;
      break;
    }
  }

  diag.iterations = st.iteration;
  diag.final_relative_change = rel_change;
  diag.learned_prior = scale_prior(prior, scale);
  diag.noise_variance = sigma2_n * scale * scale;
  est.grid = st.x_hat * scale;
  return est;
}

}  // namespace jcr
