#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "jcr/metrics.hpp"
#include "jcr/sweep.hpp"

namespace jcr {

// A complete experiment description as loaded from a scenario file.
struct Scenario {
  std::string scene_id;
  Experiment experiment;
  SweepGrid sweep;
  std::vector<MethodSpec> methods;
  std::string output_dir;  // empty: caller chooses

  GridPhysics physics() const;
};

// Strict JSON scenario parsing. Unknown keys, wrong types and invalid values
// raise ConfigError with the dotted path of the offending field.
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

// Canonical serialization: every field explicit, keys sorted, no whitespace.
// Parsing it yields an equivalent scenario.
std::string scenario_to_json(const Scenario& scenario, bool pretty = false);
// SHA-256 of the canonical serialization.
std::string config_hash(const Scenario& scenario);

std::vector<std::string> preset_names();
// Throws ConfigError for an unknown name.
std::string preset_json(std::string_view name);

}  // namespace jcr
