#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "jcr/block_io.hpp"

namespace {

void add_method_flags(CLI::App* cmd, jcrsim::MethodFlags& m) {
  cmd->add_option("--method", m.method, "Estimator: traditional or gamp")
      ->check(CLI::IsMember({"traditional", "gamp"}));
  cmd->add_option("--prior", m.prior, "GAMP prior: bg or gm")->check(CLI::IsMember({"bg", "gm"}));
  cmd->add_option("--V", m.components, "Gaussian-mixture order for --prior gm")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized mmWave joint communication-radar channel estimation simulator"};
  app.set_version_flag("--version", std::string("jcrsim ") + JCRSIM_VERSION);
  app.require_subcommand(1);

  jcrsim::SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a sweep and write dumps, estimates, results and a manifest");
  simulate->add_option("--scenario", sim.scenario, "Scenario file or preset name")->required();
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_option("--seed", sim.seed, "Root seed override");
  simulate->add_option("--snr-db", sim.snr_db, "SNR points in dB (replaces the scenario's list)");
  simulate->add_option("--bits", sim.bits, "ADC resolutions, 1-12 or inf (replaces the scenario's list)");
  simulate->add_option("--seeds", sim.seeds_per_point, "Seeds per point override")->check(CLI::PositiveNumber);
  simulate->add_option("--jobs", sim.jobs, "Worker threads")->check(CLI::PositiveNumber);
  simulate->add_flag("--timing", sim.timing, "Record wall_ms per cell (results are then not reproducible byte for byte)");
  simulate->add_flag("!--no-grids", sim.write_grids, "Skip I/Q dumps and estimate files");
  simulate->add_flag("-q,--quiet", sim.quiet, "Suppress progress and the summary table");
  add_method_flags(simulate, sim.method);

  jcrsim::EstimateArgs est;
  auto* estimate = app.add_subcommand("estimate", "Estimate the channel from a stored I/Q dump");
  estimate->add_option("--dump", est.dump, "I/Q dump written by simulate")->required();
  estimate->add_option("--out", est.out, "Estimate file to write");
  estimate->add_option("--bits", est.bits, "Quantize at this resolution instead of the dump's");
  estimate->add_option("--peaks", est.peaks, "Number of peaks to report")->check(CLI::PositiveNumber);
  add_method_flags(estimate, est.method);

  jcrsim::ReportArgs rep;
  auto* report = app.add_subcommand("report", "Reshape a results table into plot-ready files");
  report->add_option("--results", rep.results, "results.csv written by simulate")->required();
  report->add_option("--out", rep.out, "Directory for the report files");
  report->add_option("--heatmap", rep.heatmaps, "Estimate files to export as range-angle heatmaps");
  report->add_option("--floor-db", rep.floor_db, "Heatmap floor relative to the peak");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : jcrsim::kConfigError;
  }

  try {
    if (*simulate) return jcrsim::run_simulate(sim);
    if (*estimate) return jcrsim::run_estimate(est);
    if (*report) return jcrsim::run_report(rep);
  } catch (const jcr::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return jcrsim::kConfigError;
  } catch (const jcr::FormatError& e) {
    std::cerr << "input error: " << e.what() << " (byte offset " << e.byte_offset() << ")\n";
    return jcrsim::kConfigError;
  } catch (const jcrsim::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return jcrsim::kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return jcrsim::kComputeError;
  }
  return jcrsim::kConfigError;
}
