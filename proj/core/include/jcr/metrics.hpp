#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "jcr/quantizer.hpp"
#include "jcr/types.hpp"

namespace jcr {

struct NmseResult {
  double nmse_linear = 0.0;
  double nmse_db = 0.0;
  std::string reference_id = "ground-truth";
  std::string method;
  AdcBits bits = AdcBits::infinite();
  double snr_db = kInf;
  std::size_t seed_count = 1;
};

// ||ref - est||^2 / ||ref||^2. Throws std::invalid_argument on shape
// mismatch or an all-zero reference.
double nmse_linear(const CMatrix& estimate, const CMatrix& reference);
NmseResult nmse(const CMatrix& estimate, const CMatrix& reference, std::string reference_id = "ground-truth");

// Physical interpretation of grid indices.
struct GridPhysics {
  double bandwidth_hz = 1.0;
  double wavelength_m = 1.0;
  double spacing_m = 0.5;
  bool two_way = true;  // radar (round trip) vs one-way range
};

struct PeakBin {
  Eigen::Index m = 0;  // angle bin
  Eigen::Index k = 0;  // range bin
  double magnitude = 0.0;
  double range_m = 0.0;
  double angle_rad = 0.0;  // NaN outside the visible region
};

double bin_to_range(Eigen::Index k, const GridPhysics& phys);
// Signed wrapped index: m >= M/2 maps to m - M.
double bin_to_angle(Eigen::Index m, Eigen::Index elements, const GridPhysics& phys);

// Up to `count` strict local maxima of |x| (8-neighbourhood, wrapping in
// angle, not in range), strongest first; equal magnitudes ordered by (k, m).
// Throws std::invalid_argument when count is 0 or exceeds the grid size.
std::vector<PeakBin> peak_bins(const CMatrix& grid, std::size_t count, const GridPhysics& phys = {});

// Mean power outside the guard window around each listed (m, k), relative to
// the strongest bin, in dB.
double sidelobe_floor_db(const CMatrix& grid, const std::vector<std::pair<Eigen::Index, Eigen::Index>>& peaks,
                         Eigen::Index guard = 1);

// 20 log10(|x| / max |x|), clipped below at floor_db. Throws
// std::invalid_argument for an all-zero grid or a non-negative floor.
RMatrix magnitude_db(const CMatrix& grid, double floor_db = -60.0);

// One row of the long-format results table.
struct SweepRecord {
  std::string scene_id;
  std::string method;
  AdcBits bits = AdcBits::infinite();
  double snr_db = 0.0;
  std::size_t seed = 0;
  double nmse_linear = 0.0;
  int iterations = 0;
  double wall_ms = 0.0;
  std::string error;  // empty on success

  double nmse_db() const { return linear_to_db(nmse_linear); }
};

inline constexpr const char* kResultsHeader =
    "scene_id,method,bits,snr_db,seed,nmse_linear,nmse_db,iterations,wall_ms";

// Writes the results table. wall_ms is left empty unless `with_timing`, so
// identical runs produce identical files.
void write_results_csv(std::ostream& out, const std::vector<SweepRecord>& records, bool with_timing);
// Throws ConfigError naming any missing column.
std::vector<SweepRecord> read_results_csv(std::istream& in);

// Mean linear NMSE per (method, bits, snr_db), sorted by those keys.
// Records with errors are skipped.
std::vector<NmseResult> summarize(const std::vector<SweepRecord>& records, const std::string& reference_id);

}  // namespace jcr
