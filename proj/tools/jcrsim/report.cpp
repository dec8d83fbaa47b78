#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

#include "commands.hpp"
#include "jcr/block_io.hpp"

namespace jcrsim {

namespace fs = std::filesystem;

namespace {

std::vector<jcr::SweepRecord> load_records(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open results file " + path.string());
  return jcr::read_results_csv(f);
}

std::string reference_near(const fs::path& results) {
  const fs::path scenario = results.parent_path() / "scenario.json";
  if (!fs::exists(scenario)) return "unspecified";
  try {
    return jcr::load_scenario(scenario).experiment.reference.id();
  } catch (const std::exception&) {
    return "unspecified";
  }
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p, std::ios::trunc | std::ios::binary);
  if (!f) throw UsageError("cannot write " + p.string());
  return f;
}

void write_heatmap(const fs::path& estimate, const fs::path& target, double floor_db,
                   const std::optional<jcr::GridPhysics>& phys) {
  const auto grid = jcr::read_grid(estimate);
  const jcr::RMatrix db = jcr::magnitude_db(grid.data, floor_db);
  auto f = open_out(target);
  f << "m,k,range_m,angle_deg,magnitude_db\n";
  const auto M = grid.data.rows();
  for (Eigen::Index k = 0; k < grid.data.cols(); ++k)
    for (Eigen::Index m = 0; m < M; ++m) {
      std::string range = "", angle = "";
      if (phys) {
        range = format_number(jcr::bin_to_range(k, *phys));
        const double a = jcr::bin_to_angle(m, M, *phys);
        angle = std::isnan(a) ? "" : format_number(a * 180.0 / jcr::kPi);
      }
      f << m << ',' << k << ',' << range << ',' << angle << ',' << format_number(db(m, k)) << '\n';
    }
}

}  // namespace

int run_report(const ReportArgs& args) {
  if (!(args.floor_db < 0.0)) throw jcr::ConfigError("--floor-db must be negative");
  const fs::path results(args.results);
  const auto records = load_records(results);
  const fs::path out = args.out ? fs::path(*args.out) : results.parent_path() / "report";
  ensure_writable(out);

  const std::string reference = reference_near(results);
  auto rows = jcr::summarize(records, reference);
  const std::string scene = records.empty() ? "" : records.front().scene_id;
  const char* header = "scene_id,method,snr_db,bits,nmse_linear,nmse_db,seed_count,reference_id\n";
  const auto write_row = [&](std::ostream& f, const jcr::NmseResult& r) {
    f << scene << ',' << r.method << ',' << format_number(r.snr_db) << ',' << r.bits.to_string() << ','
      << format_number(r.nmse_linear) << ',' << format_number(r.nmse_db) << ',' << r.seed_count << ','
      << r.reference_id << '\n';
  };

  // summarize orders by (method, bits, snr): one series per bit depth, SNR ascending.
  {
    auto f = open_out(out / "nmse_vs_snr.csv");
    f << header;
    for (const auto& r : rows) write_row(f, r);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const jcr::NmseResult& a, const jcr::NmseResult& b) {
    return std::tie(a.method, a.snr_db, a.bits) < std::tie(b.method, b.snr_db, b.bits);
  });
  {
    auto f = open_out(out / "nmse_vs_bits.csv");
    f << header;
    for (const auto& r : rows) write_row(f, r);
  }
  std::size_t written = 2;

  std::optional<jcr::GridPhysics> phys;
  const fs::path scenario = results.parent_path() / "scenario.json";
  if (fs::exists(scenario)) {
    try {
      phys = jcr::load_scenario(scenario).physics();
    } catch (const std::exception&) {
    }
  }

  std::vector<std::pair<fs::path, std::string>> maps;
  for (const auto& h : args.heatmaps) maps.emplace_back(h, fs::path(h).stem().string());
  if (args.heatmaps.empty() && fs::is_directory(results.parent_path() / "estimates")) {
    // Per method: the cell at the highest SNR and resolution, first seed.
    std::map<std::string, const jcr::SweepRecord*> best;
    for (const auto& r : records) {
      if (!r.error.empty() || r.seed != 0) continue;
      auto& slot = best[r.method];
      if (!slot || std::tie(r.snr_db, r.bits) > std::tie(slot->snr_db, slot->bits)) slot = &r;
    }
    for (const auto& [method, r] : best) {
      const fs::path p =
          results.parent_path() / "estimates" / (method + "_" + cell_stem(r->snr_db, r->bits, r->seed) + ".est");
      if (fs::exists(p)) maps.emplace_back(p, method + "_" + cell_stem(r->snr_db, r->bits, r->seed));
    }
  }
  for (const auto& [src, name] : maps) {
    write_heatmap(src, out / ("heatmap_" + name + ".csv"), args.floor_db, phys);
    ++written;
  }
  std::cout << "wrote " << written << " file(s) to " << out.string() << "\n";
  return kOk;
}

}  // namespace jcrsim
