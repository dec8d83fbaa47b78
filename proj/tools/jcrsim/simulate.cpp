#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>

#include <json.hpp>

#include "commands.hpp"
#include "jcr/block_io.hpp"
#include "jcr/digest.hpp"

namespace jcrsim {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Files written during one run, relative to the output directory.
class ArtifactList {
 public:
  void add(const std::string& rel) {
    std::lock_guard lock(mutex_);
    items_.push_back(rel);
  }
  std::vector<std::string> sorted() const {
    std::vector<std::string> v = items_;
    std::sort(v.begin(), v.end());
    return v;
  }

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> items_;
};

json prior_json(const jcr::PriorParams& p) {
  json comps = json::array();
  for (const auto& c : p.components)
    comps.push_back({{"weight", c.weight}, {"mean_re", c.mean.real()}, {"mean_im", c.mean.imag()}, {"variance", c.variance}});
  return {{"zero_weight", p.zero_weight}, {"components", comps}};
}

void print_summary(std::ostream& os, const std::vector<jcr::SweepRecord>& records, const std::string& reference) {
  const auto rows = jcr::summarize(records, reference);
  os << "mean NMSE [dB] vs " << reference << "\n";
  os << std::left << std::setw(14) << "method" << std::setw(8) << "snr_db" << std::setw(6) << "bits" << std::right
     << std::setw(10) << "nmse_db" << std::setw(7) << "seeds" << "\n";
  for (const auto& r : rows) {
    os << std::left << std::setw(14) << r.method << std::setw(8) << format_number(r.snr_db) << std::setw(6)
       << r.bits.to_string() << std::right << std::setw(10) << std::fixed << std::setprecision(2) << r.nmse_db
       << std::setw(7) << r.seed_count << "\n";
    os.unsetf(std::ios::floatfield);
  }
}

}  // namespace

int run_simulate(const SimulateArgs& args) {
  const std::string started = utc_timestamp();
  jcr::Scenario sc = resolve_scenario(args.scenario);
  if (args.seed) sc.experiment.root_seed = *args.seed;
  if (!args.snr_db.empty()) sc.sweep.snr_db = args.snr_db;
  if (!args.bits.empty()) sc.sweep.bits = parse_bits(args.bits);
  if (args.seeds_per_point) sc.sweep.seeds_per_point = *args.seeds_per_point;
  if (args.method.method) sc.methods = {method_from_flags(args.method, sc.methods)};
  sc.sweep.validate();
  if (args.jobs < 1) throw jcr::ConfigError("--jobs must be at least 1");

  const fs::path out = resolve_output_dir(args.out, sc);
  ensure_writable(out);
  sc.output_dir.clear();
  if (args.write_grids) {
    fs::create_directories(out / "dumps");
    fs::create_directories(out / "estimates");
  }

  ArtifactList artifacts;
  const std::string canonical = jcr::scenario_to_json(sc, true);
  const json scenario_obj = json::parse(canonical);
  const std::string hash = jcr::config_hash(sc);
  {
    std::ofstream f(out / "scenario.json", std::ios::trunc);
    f << canonical << '\n';
    if (!f) throw std::runtime_error("cannot write scenario.json");
    artifacts.add("scenario.json");
  }

  std::vector<std::string> io_errors;
  jcr::SweepOptions options;
  options.jobs = args.jobs;
  std::size_t done = 0;
  const std::size_t total = sc.sweep.cell_count(sc.methods.size());
  options.on_cell = [&](const jcr::CellArtifacts& c) {
    ++done;
    if (!args.quiet && (done % 25 == 0 || done == total))
      std::cerr << "\r" << done << "/" << total << " cells" << (done == total ? "\n" : "") << std::flush;
    if (!args.write_grids || !c.captured) return;
    const std::string stem = cell_stem(c.snr_db, c.bits, c.seed);
    try {
      if (c.method == &sc.methods.front()) {
        jcr::GridHeader h;
        h.kind = "iq";
        h.seed = c.seed;
        h.snr_db = c.snr_db;
        h.bits = c.bits.to_string();
        h.noise_variance = c.captured->noise_variance;
        h.metadata_json = json{{"scene_id", sc.scene_id},
                               {"seed_index", c.seed},
                               {"root_seed", sc.experiment.root_seed},
                               {"config_hash", hash},
                               {"scenario", scenario_obj}}
                              .dump();
        const std::string rel = "dumps/" + stem + ".iq";
        jcr::write_grid(out / rel, c.captured->samples, h);
        artifacts.add(rel);
        artifacts.add(rel + ".json");
      }
      if (c.estimate) {
        const auto& d = c.estimate->diagnostics;
        json meta = {{"scene_id", sc.scene_id},
                     {"method", c.method->label},
                     {"seed_index", c.seed},
                     {"config_hash", hash},
                     {"iterations", d.iterations},
                     {"converged", d.converged},
                     {"diverged", d.diverged},
                     {"reference", sc.experiment.reference.id()},
                     {"nmse_linear", c.record->nmse_linear},
                     {"dump", "dumps/" + stem + ".iq"}};
        if (d.learned_prior) meta["learned_prior"] = prior_json(*d.learned_prior);
        jcr::GridHeader h;
        h.kind = "estimate";
        h.seed = c.seed;
        h.snr_db = c.snr_db;
        h.bits = c.bits.to_string();
        h.noise_variance = c.captured->noise_variance;
        h.metadata_json = meta.dump();
        const std::string rel = "estimates/" + c.method->label + "_" + stem + ".est";
        jcr::write_grid(out / rel, c.estimate->grid, h);
        artifacts.add(rel);
        artifacts.add(rel + ".json");
      }
    } catch (const std::exception& e) {
      io_errors.push_back(stem + ": " + e.what());
    }
  };

  const auto records = jcr::run_sweep(sc.experiment, sc.scene_id, sc.sweep, sc.methods, options);

  {
    std::ofstream f(out / "results.csv", std::ios::trunc | std::ios::binary);
    jcr::write_results_csv(f, records, args.timing);
    if (!f) throw std::runtime_error("cannot write results.csv");
    artifacts.add("results.csv");
  }

  std::size_t failed = 0;
  for (const auto& r : records) failed += r.error.empty() ? 0 : 1;
  if (failed > 0 || !io_errors.empty()) {
    std::ofstream f(out / "errors.csv", std::ios::trunc | std::ios::binary);
    f << "scene_id,method,bits,snr_db,seed,error\n";
    for (const auto& r : records) {
      if (r.error.empty()) continue;
      std::string msg = r.error;
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      std::replace(msg.begin(), msg.end(), ',', ';');
      f << r.scene_id << ',' << r.method << ',' << r.bits.to_string() << ',' << format_number(r.snr_db) << ','
        << r.seed << ',' << msg << '\n';
    }
    for (auto msg : io_errors) {
      std::replace(msg.begin(), msg.end(), ',', ';');
      f << sc.scene_id << ",io,,,," << msg << '\n';
    }
    artifacts.add("errors.csv");
  }

  json files = json::array();
  for (const auto& rel : artifacts.sorted())
    files.push_back({{"path", rel}, {"bytes", fs::file_size(out / rel)}, {"sha256", jcr::sha256_file(out / rel)}});
  const json manifest = {{"tool", "jcrsim"},
                         {"tool_version", JCRSIM_VERSION},
                         {"scene_id", sc.scene_id},
                         {"config_hash", hash},
                         {"root_seed", sc.experiment.root_seed},
                         {"reference", sc.experiment.reference.id()},
                         {"cells", records.size()},
                         {"failed_cells", failed},
                         {"started_utc", started},
                         {"finished_utc", utc_timestamp()},
                         {"artifacts", files}};
  {
    std::ofstream f(out / "manifest.json", std::ios::trunc);
    f << manifest.dump(2) << '\n';
    if (!f) throw std::runtime_error("cannot write manifest.json");
  }

  if (!args.quiet) print_summary(std::cout, records, sc.experiment.reference.id());
  std::cout << "wrote " << (out / "results.csv").string() << " (" << records.size() << " cells, " << failed
            << " failed)\n";
  for (const auto& e : io_errors) std::cerr << "error: " << e << "\n";
  if (failed > 0) std::cerr << "error: " << failed << " cell(s) failed; see " << (out / "errors.csv").string() << "\n";
  return (failed > 0 || !io_errors.empty()) ? kComputeError : kOk;
}

}  // namespace jcrsim
