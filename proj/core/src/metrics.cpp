#include "jcr/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace jcr {

double nmse_linear(const CMatrix& estimate, const CMatrix& reference) {
  if (estimate.rows() != reference.rows() || estimate.cols() != reference.cols())
    throw std::invalid_argument("NMSE: estimate and reference differ in shape");
  const double ref = reference.squaredNorm();
  if (!(ref > 0.0)) throw std::invalid_argument("NMSE: reference has zero energy");
  return (reference - estimate).squaredNorm() / ref;
}

NmseResult nmse(const CMatrix& estimate, const CMatrix& reference, std::string reference_id) {
  NmseResult r;
  r.nmse_linear = nmse_linear(estimate, reference);
  r.nmse_db = linear_to_db(r.nmse_linear);
  r.reference_id = std::move(reference_id);
  return r;
}

double bin_to_range(Eigen::Index k, const GridPhysics& phys) {
  const double per_bin = kSpeedOfLight / phys.bandwidth_hz;
  return static_cast<double>(k) * (phys.two_way ? per_bin / 2.0 : per_bin);
}

double bin_to_angle(Eigen::Index m, Eigen::Index elements, const GridPhysics& phys) {
  const double signed_m = (2 * m >= elements) ? static_cast<double>(m - elements) : static_cast<double>(m);
  const double s = phys.wavelength_m * signed_m / (static_cast<double>(elements) * phys.spacing_m);
  if (std::abs(s) > 1.0) return std::nan("");
  return std::asin(s);
}

std::vector<PeakBin> peak_bins(const CMatrix& grid, std::size_t count, const GridPhysics& phys) {
  const Eigen::Index M = grid.rows();
  const Eigen::Index K = grid.cols();
  if (count == 0) throw std::invalid_argument("peak count must be at least 1");
  if (count > static_cast<std::size_t>(M * K))
    throw std::invalid_argument("peak count " + std::to_string(count) + " exceeds the grid size");
  const RMatrix mag = grid.cwiseAbs();
  std::vector<PeakBin> peaks;
  for (Eigen::Index k = 0; k < K; ++k)
    for (Eigen::Index m = 0; m < M; ++m) {
      const double v = mag(m, k);
      if (!(v > 0.0)) continue;
      bool is_max = true;
      for (Eigen::Index dk = -1; dk <= 1 && is_max; ++dk) {
        const Eigen::Index kk = k + dk;
        if (kk < 0 || kk >= K) continue;
        for (Eigen::Index dm = -1; dm <= 1; ++dm) {
          if (dk == 0 && dm == 0) continue;
          const Eigen::Index mm = ((m + dm) % M + M) % M;
          if (mm == m && dk == 0) continue;  // M == 1 wraps onto itself
          if (mag(mm, kk) >= v) {
            is_max = false;
            break;
          }
        }
      }
      if (is_max) peaks.push_back({m, k, v, bin_to_range(k, phys), bin_to_angle(m, M, phys)});
    }
  std::sort(peaks.begin(), peaks.end(), [](const PeakBin& a, const PeakBin& b) {
    if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
    return std::tie(a.k, a.m) < std::tie(b.k, b.m);
  });
  if (peaks.size() > count) peaks.resize(count);
  return peaks;
}

double sidelobe_floor_db(const CMatrix& grid, const std::vector<std::pair<Eigen::Index, Eigen::Index>>& peaks,
                         Eigen::Index guard) {
  const Eigen::Index M = grid.rows();
  const Eigen::Index K = grid.cols();
  const double peak_power = grid.cwiseAbs2().maxCoeff();
  if (!(peak_power > 0.0)) throw std::invalid_argument("sidelobe floor of an all-zero grid");
  double acc = 0.0;
  std::size_t n = 0;
  for (Eigen::Index k = 0; k < K; ++k)
    for (Eigen::Index m = 0; m < M; ++m) {
      bool excluded = false;
      for (const auto& [pm, pk] : peaks) {
        const Eigen::Index dm = std::min(((m - pm) % M + M) % M, ((pm - m) % M + M) % M);
        if (std::abs(k - pk) <= guard && dm <= guard) excluded = true;
      }
      if (excluded) continue;
      acc += std::norm(grid(m, k));
      ++n;
    }
  if (n == 0) throw std::invalid_argument("guard windows cover the whole grid");
  const double mean = acc / static_cast<double>(n);
  return mean > 0.0 ? linear_to_db(mean / peak_power) : -kInf;
}

RMatrix magnitude_db(const CMatrix& grid, double floor_db) {
  if (!(floor_db < 0.0)) throw std::invalid_argument("heatmap floor must be negative");
  const double peak = grid.cwiseAbs().maxCoeff();
  if (!(peak > 0.0)) throw std::invalid_argument("heatmap of an all-zero grid");
  RMatrix out(grid.rows(), grid.cols());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double a = std::abs(grid.data()[i]) / peak;
    out.data()[i] = a > 0.0 ? std::max(20.0 * std::log10(a), floor_db) : floor_db;
  }
  return out;
}

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ConfigError("cannot parse number '" + s + "' in results table");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<SweepRecord>& records, bool with_timing) {
  out << kResultsHeader << '\n';
  for (const auto& r : records) {
    out << r.scene_id << ',' << r.method << ',' << r.bits.to_string() << ',' << format_double(r.snr_db) << ','
        << r.seed << ',';
    if (r.error.empty())
      out << format_double(r.nmse_linear) << ',' << format_double(r.nmse_db());
    else
      out << "nan,nan";
    out << ',' << r.iterations << ',';
    if (with_timing) out << format_double(r.wall_ms);
    out << '\n';
  }
}

std::vector<SweepRecord> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("results table is empty");
  const auto header = split(line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
  const std::vector<std::string> required = {"scene_id", "method", "bits", "snr_db", "seed", "nmse_linear"};
  for (const auto& name : required)
    if (!col.count(name)) throw ConfigError("results table is missing column '" + name + "'");

  std::vector<SweepRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() < header.size()) throw ConfigError("short row in results table: '" + line + "'");
    SweepRecord r;
    r.scene_id = cells[col["scene_id"]];
    r.method = cells[col["method"]];
    try {
      r.bits = AdcBits::parse(cells[col["bits"]]);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    r.snr_db = parse_double(cells[col["snr_db"]]);
    r.seed = static_cast<std::size_t>(parse_double(cells[col["seed"]]));
    r.nmse_linear = parse_double(cells[col["nmse_linear"]]);
    if (std::isnan(r.nmse_linear)) r.error = "failed";
    if (col.count("iterations")) r.iterations = static_cast<int>(parse_double(cells[col["iterations"]]));
    if (col.count("wall_ms") && !cells[col["wall_ms"]].empty()) r.wall_ms = parse_double(cells[col["wall_ms"]]);
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<NmseResult> summarize(const std::vector<SweepRecord>& records, const std::string& reference_id) {
  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
  };
  std::map<std::tuple<std::string, AdcBits, double>, Acc> groups;
  for (const auto& r : records) {
    if (!r.error.empty()) continue;
    auto& acc = groups[{r.method, r.bits, r.snr_db}];
    acc.sum += r.nmse_linear;
    ++acc.n;
  }
  std::vector<NmseResult> out;
  for (const auto& [key, acc] : groups) {
    NmseResult res;
    res.method = std::get<0>(key);
    res.bits = std::get<1>(key);
    res.snr_db = std::get<2>(key);
    res.seed_count = acc.n;
    res.nmse_linear = acc.sum / static_cast<double>(acc.n);
    res.nmse_db = linear_to_db(res.nmse_linear);
    res.reference_id = reference_id;
    out.push_back(res);
  }
  return out;
}

}  // namespace jcr
