#pragma once

#include <optional>
#include <string>
#include <vector>

#include "common.hpp"

namespace jcrsim {

struct SimulateArgs {
  std::string scenario;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  std::vector<double> snr_db;
  std::vector<std::string> bits;
  std::optional<std::size_t> seeds_per_point;
  MethodFlags method;
  std::size_t jobs = 1;
  bool timing = false;
  bool write_grids = true;
  bool quiet = false;
};

struct EstimateArgs {
  std::string dump;
  std::optional<std::string> out;
  std::optional<std::string> bits;
  MethodFlags method;
  std::size_t peaks = 3;
};

struct ReportArgs {
  std::string results;
  std::optional<std::string> out;
  std::vector<std::string> heatmaps;
  double floor_db = -60.0;
};

int run_simulate(const SimulateArgs& args);
int run_estimate(const EstimateArgs& args);
int run_report(const ReportArgs& args);

}  // namespace jcrsim
