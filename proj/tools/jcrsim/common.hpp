#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jcr/scenario.hpp"

namespace jcrsim {

enum ExitCode : int { kOk = 0, kComputeError = 1, kConfigError = 2 };

// Input problems the user can fix: bad flags, unreadable or unwritable paths.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MethodFlags {
  std::optional<std::string> method;  // traditional | gamp
  std::string prior = "bg";           // bg | gm
  std::size_t components = 3;
};

// A path to a scenario file, or the name of a built-in preset.
jcr::Scenario resolve_scenario(const std::string& arg);

// Preference: explicit flag, scenario output_dir, $JCRSIM_OUTPUT_ROOT/<scene>,
// ./jcrsim-out/<scene>.
std::filesystem::path resolve_output_dir(const std::optional<std::string>& flag, const jcr::Scenario& sc);

// Creates the directory and proves a file can be written there.
void ensure_writable(const std::filesystem::path& dir);

std::vector<jcr::AdcBits> parse_bits(const std::vector<std::string>& items);

// Builds the estimator for the flags, reusing a matching estimator from the
// scenario (same method, prior and order) so settings carry over.
jcr::MethodSpec method_from_flags(const MethodFlags& flags, const std::vector<jcr::MethodSpec>& from_scenario);

std::string utc_timestamp();
std::string format_number(double v);
// Filesystem-safe cell stem, e.g. "snr-5_b2_s0".
std::string cell_stem(double snr_db, jcr::AdcBits bits, std::size_t seed);

}  // namespace jcrsim
