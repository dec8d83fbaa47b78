#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jcr/types.hpp"
#include "jcr/waveform.hpp"

namespace jcr {

enum class ScattererKind { kTarget, kSelfInterference, kCommPath };

struct Scatterer {
  double distance_m = 0.0;
  double physical_aoa_rad = 0.0;  // relative to broadside, in [-pi/2, pi/2]
  double rcs_dbsm = 0.0;          // radar targets only
  std::optional<double> power_linear;  // bypasses the path-loss formulas
  std::optional<double> phase_rad;     // drawn uniformly per seed when absent
  ScattererKind kind = ScattererKind::kTarget;
  std::string tag;
};

struct Scene {
  std::string id;
  std::vector<Scatterer> scatterers;
  // Stored for provenance only; no model equation consumes them.
  std::optional<double> tx_rx_separation_m;
  std::optional<double> comm_distance_m;
};

struct ArrayGeometry {
  std::size_t elements = 1;  // M
  double spacing_m = 0.0;    // d0
  double wavelength_m = 0.0;

  void validate() const;
  // d0 / lambda * sin(phi)
  double spatial_angle(double physical_aoa_rad) const;
  // Inverse of spatial_angle; NaN outside the visible region.
  double physical_angle(double spatial_angle) const;
};

struct PathLossParams {
  double exponent = 2.0;     // u
  double loss_factor = 1.0;  // L >= 1
  // Receive element gain versus physical AoA (radians).
  std::function<double(double)> rx_gain = [](double) { return 1.0; };
  // When set, the radar distance term is d^(2u), treating u as a one-way
  // exponent applied to both legs. Otherwise d^u exactly as in the
  // single-exponent radar equation.
  bool two_way_convention = false;

  void validate() const;
};

// lambda^2 G(theta) / ((4 pi)^2 d^u L)
double comm_path_power(const PathLossParams& params, double wavelength_m, double distance_m,
                       double aoa_rad);
// lambda^2 G(theta) sigma / (64 pi^3 d^u L); see PathLossParams::two_way_convention.
double radar_path_power(const PathLossParams& params, double wavelength_m, double distance_m,
                        double aoa_rad, double rcs_linear);

// (1/sqrt(M)) exp(-j 2 pi m theta), theta wrapped into [-0.5, 0.5).
CVector array_response(const ArrayGeometry& geometry, double spatial_angle);
CVector array_response(std::size_t elements, double spatial_angle);
double wrap_spatial_angle(double theta);

// Angle dictionary A_M whose column m is array_response(m / M). Unitary.
CMatrix angle_dictionary(std::size_t elements);

enum class PulseKind { kRaisedCosine, kSinc };

struct PulseShape {
  PulseKind kind = PulseKind::kRaisedCosine;
  double rolloff = 0.25;
  int span_symbols = 8;

  // Continuous pulse value at t (in symbol periods); unit peak.
  double value(double t_symbols) const;
  // Symbol-rate taps g[k] = p(k - offset) for all integers with
  // |k - offset| <= span, scaled to unit energy. Returned as (first_k, taps).
  std::pair<long, std::vector<double>> sampled(double offset_symbols) const;
};

struct RangeAngleChannel {
  CMatrix grid;  // M x K, angle bin x range bin
  double delay_resolution_s = 0.0;  // 1 / W
  std::size_t elements() const { return static_cast<std::size_t>(grid.rows()); }
  std::size_t range_bins() const { return static_cast<std::size_t>(grid.cols()); }
  double angle_resolution() const { return 1.0 / static_cast<double>(grid.rows()); }
};

// Everything discretize_scene needs besides the scene itself.
struct ChannelModel {
  ArrayGeometry geometry;
  FrameConfig frame;
  PathLossParams radar_pathloss;
  PathLossParams comm_pathloss;
  PulseShape pulse;
  std::size_t range_bins = 0;  // K
  // Defaults to (K - 1) / W when unset.
  std::optional<double> max_delay_s;

  double max_delay() const;
};

// Delay of a scatterer: two-way 2d/c for radar targets, one-way d/c for
// communication paths and direct TX->RX leakage.
double scatterer_delay(const Scatterer& s);
// Linear channel power G of a scatterer under the model. Throws for
// self-interference without an explicit power; discretize_scene supplies
// the scene-relative default.
double scatterer_power(const Scatterer& s, const ChannelModel& model);

// Projects every scatterer onto the K range bins (through the sampled RX
// pulse) and onto the M angle bins (X column = A_M^H h_d[k]). Phases that
// are not pinned come from RandomStream(phase_seed, stream). Throws
// std::invalid_argument naming the offending index when a delay exceeds
// the model's max delay.
RangeAngleChannel discretize_scene(const Scene& scene, const ChannelModel& model,
                                   std::uint64_t phase_seed, std::uint64_t phase_stream = 1);

struct PathLossFit {
  double exponent = 0.0;
  double intercept_db = 0.0;  // received power at 1 m
  bool two_way = false;
};

// Least-squares line through (log10 d, P_dB). exponent = -slope / 10, or
// -slope / 20 when two_way is set (distances are target ranges and the
// propagation covers both legs).
PathLossFit fit_path_loss_exponent(const std::vector<std::pair<double, double>>& measurements,
                                   bool two_way = false);

}  // namespace jcr
