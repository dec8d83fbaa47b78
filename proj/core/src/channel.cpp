#include "jcr/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "jcr/rng.hpp"

namespace jcr {

void ArrayGeometry::validate() const {
  if (elements == 0) throw std::invalid_argument("array needs at least one element");
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be positive");
  if (!(spacing_m > 0.0)) throw std::invalid_argument("element spacing must be positive");
  if (spacing_m > wavelength_m / 2.0 * (1.0 + 1e-12))
    throw std::invalid_argument("element spacing exceeds half a wavelength");
}

double ArrayGeometry::spatial_angle(double physical_aoa_rad) const {
  return spacing_m / wavelength_m * std::sin(physical_aoa_rad);
}

double ArrayGeometry::physical_angle(double spatial) const {
  const double s = spatial * wavelength_m / spacing_m;
  if (std::abs(s) > 1.0) return std::nan("");
  return std::asin(s);
}

void PathLossParams::validate() const {
  if (!(exponent > 0.0)) throw std::invalid_argument("path-loss exponent must be positive");
  if (!(loss_factor >= 1.0)) throw std::invalid_argument("loss factor must be >= 1");
  if (!rx_gain) throw std::invalid_argument("rx gain pattern is not set");
}

double comm_path_power(const PathLossParams& params, double wavelength_m, double distance_m,
                       double aoa_rad) {
  params.validate();
  if (!(distance_m > 0.0)) throw std::invalid_argument("path power needs a positive distance");
  const double lambda2 = wavelength_m * wavelength_m;
  const double four_pi = 4.0 * kPi;
  return lambda2 * params.rx_gain(aoa_rad) /
         (four_pi * four_pi * std::pow(distance_m, params.exponent) * params.loss_factor);
}

double radar_path_power(const PathLossParams& params, double wavelength_m, double distance_m,
                        double aoa_rad, double rcs_linear) {
  params.validate();
  if (!(distance_m > 0.0)) throw std::invalid_argument("path power needs a positive distance");
  const double u = params.two_way_convention ? 2.0 * params.exponent : params.exponent;
  const double lambda2 = wavelength_m * wavelength_m;
  return lambda2 * params.rx_gain(aoa_rad) * rcs_linear /
         (64.0 * kPi * kPi * kPi * std::pow(distance_m, u) * params.loss_factor);
}

double wrap_spatial_angle(double theta) {
  double w = theta - std::floor(theta + 0.5);
  if (w >= 0.5) w -= 1.0;
  return w;
}

CVector array_response(std::size_t elements, double spatial_angle) {
  const double theta = wrap_spatial_angle(spatial_angle);
  const auto M = static_cast<Eigen::Index>(elements);
  const double scale = 1.0 / std::sqrt(static_cast<double>(elements));
  CVector a(M);
  for (Eigen::Index m = 0; m < M; ++m)
    a[m] = std::polar(scale, -2.0 * kPi * static_cast<double>(m) * theta);
  return a;
}

CVector array_response(const ArrayGeometry& geometry, double spatial_angle) {
  geometry.validate();
  return array_response(geometry.elements, spatial_angle);
}

CMatrix angle_dictionary(std::size_t elements) {
  const auto M = static_cast<Eigen::Index>(elements);
  const double scale = 1.0 / std::sqrt(static_cast<double>(elements));
  CMatrix A(M, M);
  for (Eigen::Index col = 0; col < M; ++col)
    for (Eigen::Index row = 0; row < M; ++row) {
      const auto idx = (row * col) % M;
      A(row, col) = std::polar(scale, -2.0 * kPi * static_cast<double>(idx) / static_cast<double>(M));
    }
  return A;
}

double PulseShape::value(double t) const {
  const auto sinc = [](double x) {
    if (std::abs(x) < 1e-12) return 1.0;
    return std::sin(kPi * x) / (kPi * x);
  };
  switch (kind) {
    case PulseKind::kSinc:
      return sinc(t);
    case PulseKind::kRaisedCosine: {
      if (rolloff <= 0.0) return sinc(t);
      const double denom = 1.0 - (2.0 * rolloff * t) * (2.0 * rolloff * t);
      if (std::abs(denom) < 1e-10) return kPi / 4.0 * sinc(1.0 / (2.0 * rolloff));
      return sinc(t) * std::cos(kPi * rolloff * t) / denom;
    }
  }
  return 0.0;
}

std::pair<long, std::vector<double>> PulseShape::sampled(double offset) const {
  if (span_symbols < 1) throw std::invalid_argument("pulse span must be at least one symbol");
  const double span = static_cast<double>(span_symbols);
  const long first = static_cast<long>(std::ceil(offset - span));
  const long last = static_cast<long>(std::floor(offset + span));
  std::vector<double> taps;
  taps.reserve(static_cast<std::size_t>(last - first + 1));
  for (long k = first; k <= last; ++k) taps.push_back(value(static_cast<double>(k) - offset));
  const double energy = std::inner_product(taps.begin(), taps.end(), taps.begin(), 0.0);
  const double norm = 1.0 / std::sqrt(energy);
  for (double& v : taps) v *= norm;
  return {first, std::move(taps)};
}

double ChannelModel::max_delay() const {
  if (max_delay_s) return *max_delay_s;
  return static_cast<double>(range_bins - 1) / frame.bandwidth_hz;
}

double scatterer_delay(const Scatterer& s) {
  const double path = (s.kind == ScattererKind::kTarget) ? 2.0 * s.distance_m : s.distance_m;
  return path / kSpeedOfLight;
}

double scatterer_power(const Scatterer& s, const ChannelModel& model) {
  if (s.power_linear) return *s.power_linear;
  const double lambda = model.geometry.wavelength_m;
  switch (s.kind) {
    case ScattererKind::kTarget:
      return radar_path_power(model.radar_pathloss, lambda, s.distance_m, s.physical_aoa_rad,
                              db_to_linear(s.rcs_dbsm));
    case ScattererKind::kCommPath:
      return comm_path_power(model.comm_pathloss, lambda, s.distance_m, s.physical_aoa_rad);
    case ScattererKind::kSelfInterference:
      break;
  }
  throw std::invalid_argument("self-interference scatterers need an explicit power");
}

RangeAngleChannel discretize_scene(const Scene& scene, const ChannelModel& model,
                                   std::uint64_t phase_seed, std::uint64_t phase_stream) {
  model.geometry.validate();
  model.frame.validate();
  if (model.range_bins == 0) throw std::invalid_argument("range bin count must be positive");

  const auto M = static_cast<Eigen::Index>(model.geometry.elements);
  const auto K = static_cast<long>(model.range_bins);
  const double W = model.frame.bandwidth_hz;
  const double tau_max = model.max_delay();

  RangeAngleChannel out;
  out.grid = CMatrix::Zero(M, K);
  out.delay_resolution_s = 1.0 / W;

  // Self-interference without an explicit power sits 20 dB above the
  // strongest other path.
  double strongest = 0.0;
  bool needs_si_default = false;
  for (const auto& s : scene.scatterers) {
    if (s.kind == ScattererKind::kSelfInterference && !s.power_linear)
      needs_si_default = true;
    else if (s.kind != ScattererKind::kSelfInterference || s.power_linear)
      strongest = std::max(strongest, scatterer_power(s, model));
  }
  if (needs_si_default && !(strongest > 0.0))
    throw std::invalid_argument("self-interference power cannot default without another path in the scene");
  const double si_default_power = db_to_linear(20.0) * strongest;

  RandomStream phases(phase_seed, phase_stream);
  const CMatrix dictionary_h = angle_dictionary(model.geometry.elements).adjoint();

  for (std::size_t i = 0; i < scene.scatterers.size(); ++i) {
    const Scatterer& s = scene.scatterers[i];
    // Consume one draw per scatterer so pinned phases do not shift the rest.
    const double drawn_phase = 2.0 * kPi * phases.uniform();
    if (!(s.distance_m >= 0.0))
      throw std::invalid_argument("scatterer " + std::to_string(i) + ": negative distance");
    if (std::abs(s.physical_aoa_rad) > kPi / 2.0 + 1e-12)
      throw std::invalid_argument("scatterer " + std::to_string(i) + ": AoA outside [-pi/2, pi/2]");
    const double tau = scatterer_delay(s);
    if (tau > tau_max * (1.0 + 1e-12)) {
      throw std::invalid_argument("scatterer " + std::to_string(i) + " delay " + std::to_string(tau) +
                                  " s exceeds max delay " + std::to_string(tau_max) + " s");
    }
    const double power = (s.kind == ScattererKind::kSelfInterference && !s.power_linear)
                             ? si_default_power
                             : scatterer_power(s, model);
    if (!(power >= 0.0))
      throw std::invalid_argument("scatterer " + std::to_string(i) + ": negative power");

    const Complex gain = std::polar(std::sqrt(power), s.phase_rad.value_or(drawn_phase));
    const double theta = model.geometry.spatial_angle(s.physical_aoa_rad);
    const CVector angle_coeffs = dictionary_h * array_response(model.geometry.elements, theta);

    const auto [first, taps] = model.pulse.sampled(tau * W);
    for (std::size_t j = 0; j < taps.size(); ++j) {
      const long k = first + static_cast<long>(j);
      if (k < 0 || k >= K) continue;
      out.grid.col(k) += (gain * taps[j]) * angle_coeffs;
    }
  }
  return out;
}

PathLossFit fit_path_loss_exponent(const std::vector<std::pair<double, double>>& measurements,
                                   bool two_way) {
  if (measurements.size() < 2) throw std::invalid_argument("path-loss fit needs at least two points");
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& [d, p] : measurements) {
    if (!(d > 0.0)) throw std::invalid_argument("path-loss fit needs positive distances");
    mean_x += std::log10(d);
    mean_y += p;
  }
  const double n = static_cast<double>(measurements.size());
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [d, p] : measurements) {
    const double dx = std::log10(d) - mean_x;
    sxx += dx * dx;
    sxy += dx * (p - mean_y);
  }
  if (sxx <= 1e-300) throw std::invalid_argument("path-loss fit needs at least two distinct distances");
  const double slope = sxy / sxx;
  PathLossFit fit;
  fit.two_way = two_way;
  fit.exponent = -slope / (two_way ? 20.0 : 10.0);
  fit.intercept_db = mean_y - slope * mean_x;
  return fit;
}

}  // namespace jcr
