#include <cmath>
#include <iomanip>
#include <iostream>

#include <json.hpp>

#include "commands.hpp"
#include "jcr/block_io.hpp"

namespace jcrsim {

namespace fs = std::filesystem;
using nlohmann::json;

int run_estimate(const EstimateArgs& args) {
  const jcr::GridFile dump = jcr::read_grid(args.dump);
  if (dump.header.kind != "iq")
    throw jcr::FormatError("expected an iq dump, found kind '" + dump.header.kind + "'", 0);

  json meta;
  try {
    meta = json::parse(dump.header.metadata_json);
  } catch (const json::exception& e) {
    throw jcr::FormatError(std::string("dump metadata: ") + e.what(), 0);
  }
  if (!meta.contains("scenario"))
    throw jcr::FormatError("dump metadata carries no scenario; cannot rebuild the measurement model", 0);
  const jcr::Scenario sc = jcr::parse_scenario(meta["scenario"].dump());
  const jcr::MeasurementMatrix d = sc.experiment.measurement();
  const auto M = static_cast<Eigen::Index>(sc.experiment.model.geometry.elements);
  if (dump.data.rows() != M || dump.data.cols() != static_cast<Eigen::Index>(d.length))
    throw jcr::FormatError("dump is " + std::to_string(dump.data.rows()) + " x " + std::to_string(dump.data.cols()) +
                               " but its scenario expects " + std::to_string(M) + " x " + std::to_string(d.length),
                           0);

  jcr::AdcBits bits;
  try {
    bits = jcr::AdcBits::parse(args.bits.value_or(dump.header.bits));
  } catch (const std::invalid_argument& e) {
    throw jcr::ConfigError(std::string("--bits: ") + e.what());
  }
  const jcr::MethodSpec method = method_from_flags(args.method, sc.methods);
  if (args.peaks < 1) throw jcr::ConfigError("--peaks must be at least 1");

  const fs::path out = args.out ? fs::path(*args.out)
                                : fs::path(args.dump).replace_extension("." + method.label + "_b" + bits.to_string() + ".est");
  if (out.has_parent_path()) ensure_writable(out.parent_path());

  jcr::ChannelEstimate result;
  try {
    result = jcr::estimate_block(dump.data, dump.header.noise_variance, bits, sc.experiment.quantizer, d, method);
  } catch (const std::exception& e) {
    std::cerr << "error: estimation failed: " << e.what() << "\n";
    return kComputeError;
  }

  const auto& diag = result.diagnostics;
  json summary = {{"scene_id", sc.scene_id},
                  {"method", method.label},
                  {"source_dump", fs::path(args.dump).filename().string()},
                  {"seed_index", meta.value("seed_index", 0)},
                  {"iterations", diag.iterations},
                  {"converged", diag.converged},
                  {"diverged", diag.diverged}};
  if (diag.learned_prior) {
    json comps = json::array();
    for (const auto& c : diag.learned_prior->components)
      comps.push_back({{"weight", c.weight}, {"mean_re", c.mean.real()}, {"mean_im", c.mean.imag()}, {"variance", c.variance}});
    summary["learned_prior"] = {{"zero_weight", diag.learned_prior->zero_weight}, {"components", comps}};
  }
  jcr::GridHeader h = dump.header;
  h.kind = "estimate";
  h.bits = bits.to_string();
  h.metadata_json = summary.dump();
  jcr::write_grid(out, result.grid, h);

  std::cout << "dump: " << args.dump << " (" << dump.data.rows() << " x " << dump.data.cols()
            << ", snr " << format_number(dump.header.snr_db) << " dB, seed " << dump.header.seed << ")\n";
  std::cout << "method: " << method.label << "  bits: " << bits.to_string();
  if (method.method == jcr::EstimationMethod::kGamp)
    std::cout << "  iterations: " << diag.iterations << "  converged: " << (diag.converged ? "yes" : "no")
              << (diag.diverged ? "  diverged" : "");
  std::cout << "\n";
  if (diag.learned_prior) {
    const auto& p = *diag.learned_prior;
    std::cout << "learned prior: zero weight " << p.zero_weight << "\n";
    for (std::size_t i = 0; i < p.components.size(); ++i) {
      const auto& c = p.components[i];
      std::cout << "  component " << i << ": weight " << c.weight << ", mean " << c.mean.real()
                << (c.mean.imag() < 0 ? " - " : " + ") << std::abs(c.mean.imag()) << "j, variance " << c.variance
                << "\n";
    }
  }
  const std::size_t count = std::min<std::size_t>(args.peaks, static_cast<std::size_t>(result.grid.size()));
  const auto peaks = jcr::peak_bins(result.grid, count, sc.physics());
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const auto& p = peaks[i];
    std::cout << "peak " << i + 1 << ": m=" << p.m << " k=" << p.k << " |x|=" << p.magnitude << " range="
              << std::fixed << std::setprecision(3) << p.range_m << " m angle=";
    if (std::isnan(p.angle_rad))
      std::cout << "invisible";
    else
      std::cout << std::setprecision(2) << p.angle_rad * 180.0 / jcr::kPi << " deg";
    std::cout.unsetf(std::ios::floatfield);
    std::cout << std::setprecision(6) << "\n";
  }
  std::cout << "wrote " << out.string() << "\n";
  return kOk;
}

}  // namespace jcrsim
