#include "common.hpp"

#include <algorithm>
#include <cmath>

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>

namespace jcrsim {

namespace fs = std::filesystem;

jcr::Scenario resolve_scenario(const std::string& arg) {
  if (fs::exists(arg)) return jcr::load_scenario(arg);
  const auto names = jcr::preset_names();
  if (std::find(names.begin(), names.end(), arg) != names.end()) return jcr::parse_scenario(jcr::preset_json(arg));
  std::string list;
  for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
  throw jcr::ConfigError("scenario '" + arg + "' is neither a file nor a preset (" + list + ")");
}

fs::path resolve_output_dir(const std::optional<std::string>& flag, const jcr::Scenario& sc) {
  if (flag) return *flag;
  if (!sc.output_dir.empty()) return sc.output_dir;
  if (const char* root = std::getenv("JCRSIM_OUTPUT_ROOT"); root && *root) return fs::path(root) / sc.scene_id;
  return fs::path("jcrsim-out") / sc.scene_id;
}

void ensure_writable(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory " + dir.string() + ": " + ec.message());
  const fs::path probe = dir / ".jcrsim-write-probe";
  {
    std::ofstream f(probe);
    if (!f || !(f << "ok") || !f.flush()) throw UsageError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

std::vector<jcr::AdcBits> parse_bits(const std::vector<std::string>& items) {
  std::vector<jcr::AdcBits> out;
  for (const auto& s : items) {
    try {
      out.push_back(jcr::AdcBits::parse(s));
    } catch (const std::invalid_argument& e) {
      throw jcr::ConfigError(std::string("--bits: ") + e.what());
    }
  }
  return out;
}

jcr::MethodSpec method_from_flags(const MethodFlags& flags, const std::vector<jcr::MethodSpec>& from_scenario) {
  const std::string method = flags.method.value_or("traditional");
  if (method == "traditional") {
    for (const auto& m : from_scenario)
      if (m.method == jcr::EstimationMethod::kTraditional) return m;
    return jcr::MethodSpec::traditional_fft();
  }
  if (method != "gamp") throw jcr::ConfigError("--method must be traditional or gamp, got '" + method + "'");
  if (flags.prior != "bg" && flags.prior != "gm")
    throw jcr::ConfigError("--prior must be bg or gm, got '" + flags.prior + "'");
  if (flags.components < 1) throw jcr::ConfigError("--V must be at least 1");
  const auto family =
      flags.prior == "bg" ? jcr::PriorFamily::kBernoulliGaussian : jcr::PriorFamily::kGaussianMixture;
  for (const auto& m : from_scenario) {
    if (m.method != jcr::EstimationMethod::kGamp || m.gamp.prior != family) continue;
    if (family == jcr::PriorFamily::kGaussianMixture && m.gamp.components != flags.components) continue;
    return m;
  }
  return family == jcr::PriorFamily::kBernoulliGaussian ? jcr::MethodSpec::em_bg_gamp()
                                                        : jcr::MethodSpec::em_gm_gamp(flags.components);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string cell_stem(double snr_db, jcr::AdcBits bits, std::size_t seed) {
  return "snr" + format_number(snr_db) + "_b" + bits.to_string() + "_s" + std::to_string(seed);
}

}  // namespace jcrsim
