#include "jcr/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "jcr/digest.hpp"
#include "json.hpp"

namespace jcr {

using nlohmann::json;

namespace {

constexpr double kDeg = kPi / 180.0;

// Reads one JSON object, tracking which keys were consumed so leftovers can
// be reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "scenario must be a JSON object" : "must be an object");
  }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError(where() + msg); }
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const {
    throw ConfigError(field(key) + ": " + msg);
  }
  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) fail(key, "is required");
    return j_.at(key);
  }

  Reader object(const std::string& key) { return Reader(raw(key), field(key)); }
  std::optional<Reader> optional_object(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return Reader(j_.at(key), field(key));
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) fail(key, "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : (seen_.insert(key), fallback); }
  std::optional<double> optional_number(const std::string& key) {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return number(key);
  }
  double positive(const std::string& key) {
    const double v = number(key);
    if (!(v > 0.0)) fail(key, "must be positive");
    return v;
  }
  double positive(const std::string& key, double fallback) { return has(key) ? positive(key) : (seen_.insert(key), fallback); }

  std::uint64_t count(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) fail(key, "must be a non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::uint64_t count(const std::string& key, std::uint64_t fallback) { return has(key) ? count(key) : (seen_.insert(key), fallback); }

  bool boolean(const std::string& key, bool fallback) {
    seen_.insert(key);
    if (!has(key)) return fallback;
    if (!j_.at(key).is_boolean()) fail(key, "must be true or false");
    return j_.at(key).get<bool>();
  }

  std::string string(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_string()) fail(key, "must be a string");
    return v.get<std::string>();
  }
  std::string string(const std::string& key, const std::string& fallback) { return has(key) ? string(key) : (seen_.insert(key), fallback); }

  std::string choice(const std::string& key, std::initializer_list<const char*> options, const std::string& fallback) {
    const std::string v = string(key, fallback);
    for (const char* o : options)
      if (v == o) return v;
    std::string list;
    for (const char* o : options) list += (list.empty() ? "" : ", ") + std::string(o);
    fail(key, "'" + v + "' is not one of: " + list);
  }

  const json& array(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_array()) fail(key, "must be an array");
    return v;
  }

  void finish() const {
    for (const auto& [k, v] : j_.items())
      if (!seen_.count(k)) throw ConfigError(field(k) + ": unknown key");
  }

 private:
  std::string where() const { return path_.empty() ? "" : path_ + ": "; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

// Converts invalid_argument from module validation into a field diagnostic.
template <class F>
void check(const std::string& path, F&& f) {
  try {
    f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

AdcBits parse_bits(const json& v, const std::string& path) {
  try {
    if (v.is_number_integer()) return AdcBits(v.get<int>());
    if (v.is_string()) return AdcBits::parse(v.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  throw ConfigError(path + ": must be an integer bit depth or \"inf\"");
}

json bits_json(AdcBits b) { return b.is_infinite() ? json("inf") : json(b.value()); }

PathLossParams parse_pathloss(std::optional<Reader> r, const std::string& path) {
  PathLossParams p;
  if (!r) return p;
  p.exponent = r->positive("exponent", 2.0);
  p.loss_factor = r->number("loss_factor", 1.0);
  p.two_way_convention = r->boolean("two_way_convention", false);
  r->finish();
  check(path, [&] { p.validate(); });
  return p;
}

json pathloss_json(const PathLossParams& p) {
  return {{"exponent", p.exponent}, {"loss_factor", p.loss_factor}, {"two_way_convention", p.two_way_convention}};
}

const char* kind_name(ScattererKind k) {
  switch (k) {
    case ScattererKind::kTarget: return "target";
    case ScattererKind::kSelfInterference: return "self-interference";
    case ScattererKind::kCommPath: return "comm-path";
  }
  return "target";
}

const char* mode_name(MatrixMode m) {
  switch (m) {
    case MatrixMode::kCirculant: return "circulant";
    case MatrixMode::kDft: return "dft";
    case MatrixMode::kIdentity: return "identity";
  }
  return "circulant";
}

MethodSpec parse_method(Reader r, std::size_t index) {
  const std::string method = r.choice("method", {"traditional", "gamp"}, "");
  MethodSpec m;
  if (method == "traditional") {
    m = MethodSpec::traditional_fft();
  } else {
    const std::string prior = r.choice("prior", {"bg", "gm"}, "bg");
    m = prior == "bg" ? MethodSpec::em_bg_gamp() : MethodSpec::em_gm_gamp();
    GampConfig& g = m.gamp;
    g.components = r.count("components", g.components);
    g.max_iterations = static_cast<int>(r.count("max_iterations", static_cast<std::uint64_t>(g.max_iterations)));
    g.tolerance = r.positive("tolerance", g.tolerance);
    g.damping = r.positive("damping", g.damping);
    g.em_enabled = r.boolean("em", g.em_enabled);
    g.learn_noise_variance = r.boolean("learn_noise_variance", g.learn_noise_variance);
    g.initial_nonzero_prob = r.positive("initial_nonzero_prob", g.initial_nonzero_prob);
    g.observation = r.choice("observation", {"full-block", "matched-filtered"}, "full-block") == "full-block"
                        ? ObservationMode::kFullBlock
                        : ObservationMode::kMatchedFiltered;
    check("estimators[" + std::to_string(index) + "]", [&] { g.validate(); });
  }
  m.label = r.string("label", m.label);
  if (m.label.empty() || m.label.find(',') != std::string::npos)
    r.fail("label", "must be non-empty and contain no commas");
  r.finish();
  return m;
}

json method_json(const MethodSpec& m) {
  if (m.method == EstimationMethod::kTraditional) return {{"method", "traditional"}, {"label", m.label}};
  const GampConfig& g = m.gamp;
  return {{"method", "gamp"},
          {"label", m.label},
          {"prior", g.prior == PriorFamily::kBernoulliGaussian ? "bg" : "gm"},
          {"components", g.components},
          {"max_iterations", g.max_iterations},
          {"tolerance", g.tolerance},
          {"damping", g.damping},
          {"em", g.em_enabled},
          {"learn_noise_variance", g.learn_noise_variance},
          {"initial_nonzero_prob", g.initial_nonzero_prob},
          {"observation", g.observation == ObservationMode::kFullBlock ? "full-block" : "matched-filtered"}};
}

}  // namespace

GridPhysics Scenario::physics() const {
  GridPhysics p;
  p.bandwidth_hz = experiment.model.frame.bandwidth_hz;
  p.wavelength_m = experiment.model.geometry.wavelength_m;
  p.spacing_m = experiment.model.geometry.spacing_m;
  p.two_way = true;
  for (const auto& s : experiment.scene.scatterers)
    if (s.kind != ScattererKind::kTarget) p.two_way = false;
  return p;
}

Scenario parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }
  Reader top(root, "");
  Scenario sc;
  Experiment& ex = sc.experiment;
  ChannelModel& model = ex.model;

  sc.scene_id = top.string("scene_id");
  if (sc.scene_id.empty() || sc.scene_id.find_first_of(",/\\") != std::string::npos)
    top.fail("scene_id", "must be non-empty and contain no commas or slashes");
  ex.root_seed = top.count("root_seed");
  sc.output_dir = top.string("output_dir", "");

  {
    Reader f = top.object("frame");
    const std::size_t n = f.count("sequence_length");
    if (n == 0) f.fail("sequence_length", "must be at least 1");
    const auto root_index = static_cast<std::uint32_t>(f.count("zc_root", 1));
    model.frame.bandwidth_hz = f.positive("bandwidth_hz");
    model.frame.wavelength_m = f.positive("wavelength_m");
    model.frame.repetitions = f.count("repetitions", 1);
    model.frame.preamble_fraction = f.positive("preamble_fraction", 1.0);
    model.frame.coherent_interval_s = f.positive("coherent_interval_s", 1e-3);
    const double ts = f.positive("symbol_period_s", 1.0 / model.frame.bandwidth_hz);
    const std::string mode = f.choice("matrix_mode", {"circulant", "dft", "identity"}, "circulant");
    ex.matrix_mode = mode == "circulant" ? MatrixMode::kCirculant
                     : mode == "dft"     ? MatrixMode::kDft
                                         : MatrixMode::kIdentity;
    check("frame.zc_root", [&] { ex.sequence = generate_zc(n, root_index); });
    ex.sequence.symbol_period_s = ts;
    f.finish();
    check("frame", [&] { model.frame.validate(); });
  }
  {
    Reader g = top.object("geometry");
    model.geometry.elements = g.count("elements");
    model.geometry.wavelength_m = model.frame.wavelength_m;
    model.geometry.spacing_m = g.positive("spacing_m", model.frame.wavelength_m / 2.0);
    g.finish();
    check("geometry", [&] { model.geometry.validate(); });
  }
  {
    Reader g = top.object("grid");
    const auto tau = g.optional_number("max_delay_s");
    if (tau && !(*tau >= 0.0)) g.fail("max_delay_s", "must be non-negative");
    if (g.has("range_bins")) {
      model.range_bins = g.count("range_bins");
    } else {
      g.count("range_bins", 0);
      if (!tau) g.fail("one of range_bins or max_delay_s is required");
      model.range_bins = default_range_bins(model.frame.bandwidth_hz, *tau);
    }
    if (model.range_bins == 0) g.fail("range_bins", "must be at least 1");
    if (model.range_bins > ex.sequence.length())
      g.fail("range_bins", "exceeds frame.sequence_length (" + std::to_string(ex.sequence.length()) + ")");
    model.max_delay_s = tau;
    g.finish();
  }
  if (auto p = top.optional_object("pulse")) {
    model.pulse.kind = p->choice("shape", {"raised-cosine", "sinc"}, "raised-cosine") == "sinc"
                           ? PulseKind::kSinc
                           : PulseKind::kRaisedCosine;
    model.pulse.rolloff = p->number("rolloff", model.pulse.rolloff);
    if (model.pulse.rolloff < 0.0 || model.pulse.rolloff > 1.0) p->fail("rolloff", "must lie in [0, 1]");
    model.pulse.span_symbols = static_cast<int>(p->count("span_symbols", model.pulse.span_symbols));
    if (model.pulse.span_symbols < 1) p->fail("span_symbols", "must be at least 1");
    p->finish();
  }
  if (auto pl = top.optional_object("path_loss")) {
    model.radar_pathloss = parse_pathloss(pl->optional_object("radar"), "path_loss.radar");
    model.comm_pathloss = parse_pathloss(pl->optional_object("comm"), "path_loss.comm");
    pl->finish();
  }
  if (auto q = top.optional_object("quantizer")) {
    ex.quantizer.step_scale = q->optional_number("step_scale");
    if (ex.quantizer.step_scale && !(*ex.quantizer.step_scale > 0.0)) q->fail("step_scale", "must be positive");
    ex.quantizer.per_antenna = q->boolean("per_antenna", false);
    const std::string src = q->choice("scale_source", {"empirical", "configured"}, "empirical");
    ex.quantizer.scale_source = src == "empirical" ? ScaleSource::kEmpiricalMoment : ScaleSource::kConfiguredVariance;
    ex.quantizer.configured_component_variance = q->number("configured_component_variance", 0.0);
    if (src == "configured" && !(ex.quantizer.configured_component_variance > 0.0))
      q->fail("configured_component_variance", "must be positive when scale_source is configured");
    q->finish();
  }
  if (auto r = top.optional_object("reference")) {
    const std::string kind = r->choice("kind", {"ground-truth", "high-resolution-traditional"}, "ground-truth");
    ex.reference.kind =
        kind == "ground-truth" ? ReferenceKind::kGroundTruth : ReferenceKind::kHighResolutionTraditional;
    ex.reference.snr_db = r->number("snr_db", ex.reference.snr_db);
    if (r->has("bits")) ex.reference.bits = parse_bits(r->raw("bits"), r->field("bits"));
    r->finish();
  }
  {
    Reader s = top.object("scene");
    ex.scene.id = sc.scene_id;
    ex.scene.tx_rx_separation_m = s.optional_number("tx_rx_separation_m");
    ex.scene.comm_distance_m = s.optional_number("comm_distance_m");
    const json& list = s.array("scatterers");
    if (list.empty()) s.fail("scatterers", "must not be empty");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Reader r(list[i], "scene.scatterers[" + std::to_string(i) + "]");
      Scatterer sc_;
      const std::string kind = r.choice("kind", {"target", "self-interference", "comm-path"}, "target");
      sc_.kind = kind == "target"              ? ScattererKind::kTarget
                 : kind == "self-interference" ? ScattererKind::kSelfInterference
                                               : ScattererKind::kCommPath;
      sc_.distance_m = r.positive("distance_m");
      const double aoa = r.number("aoa_deg", 0.0);
      if (std::abs(aoa) > 90.0) r.fail("aoa_deg", "must lie in [-90, 90]");
      sc_.physical_aoa_rad = aoa * kDeg;
      sc_.rcs_dbsm = r.number("rcs_dbsm", 0.0);
      sc_.power_linear = r.optional_number("power_linear");
      if (sc_.power_linear && !(*sc_.power_linear > 0.0)) r.fail("power_linear", "must be positive");
      sc_.phase_rad = r.optional_number("phase_rad");
      sc_.tag = r.string("tag", "");
      r.finish();
      const double tau = scatterer_delay(sc_);
      if (tau > model.max_delay() * (1.0 + 1e-12))
        throw ConfigError("scene.scatterers[" + std::to_string(i) + "].distance_m: scatterer " + std::to_string(i) +
                          " delay " + std::to_string(tau * 1e9) + " ns exceeds the grid's maximum delay " +
                          std::to_string(model.max_delay() * 1e9) + " ns");
      ex.scene.scatterers.push_back(sc_);
    }
    s.finish();
  }
  {
    Reader w = top.object("sweep");
    const json& snr = w.array("snr_db");
    for (std::size_t i = 0; i < snr.size(); ++i) {
      if (!snr[i].is_number()) throw ConfigError("sweep.snr_db[" + std::to_string(i) + "]: must be a number");
      sc.sweep.snr_db.push_back(snr[i].get<double>());
    }
    const json& bits = w.array("bits");
    for (std::size_t i = 0; i < bits.size(); ++i)
      sc.sweep.bits.push_back(parse_bits(bits[i], "sweep.bits[" + std::to_string(i) + "]"));
    sc.sweep.seeds_per_point = w.count("seeds_per_point", 1);
    w.finish();
    sc.sweep.validate();
  }
  {
    const json& list = top.array("estimators");
    if (list.empty()) top.fail("estimators", "must not be empty");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < list.size(); ++i) {
      sc.methods.push_back(parse_method(Reader(list[i], "estimators[" + std::to_string(i) + "]"), i));
      if (!labels.insert(sc.methods.back().label).second)
        throw ConfigError("estimators[" + std::to_string(i) + "].label: duplicate label '" +
                          sc.methods.back().label + "'");
    }
  }
  top.finish();
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read scenario file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

std::string scenario_to_json(const Scenario& sc, bool pretty) {
  const Experiment& ex = sc.experiment;
  const ChannelModel& m = ex.model;
  json j;
  j["scene_id"] = sc.scene_id;
  j["root_seed"] = ex.root_seed;
  j["output_dir"] = sc.output_dir;
  j["frame"] = {{"sequence_length", ex.sequence.length()},
                {"zc_root", ex.sequence.root},
                {"bandwidth_hz", m.frame.bandwidth_hz},
                {"wavelength_m", m.frame.wavelength_m},
                {"repetitions", m.frame.repetitions},
                {"preamble_fraction", m.frame.preamble_fraction},
                {"coherent_interval_s", m.frame.coherent_interval_s},
                {"symbol_period_s", ex.sequence.symbol_period_s},
                {"matrix_mode", mode_name(ex.matrix_mode)}};
  j["geometry"] = {{"elements", m.geometry.elements}, {"spacing_m", m.geometry.spacing_m}};
  j["grid"] = {{"range_bins", m.range_bins}};
  if (m.max_delay_s) j["grid"]["max_delay_s"] = *m.max_delay_s;
  j["pulse"] = {{"shape", m.pulse.kind == PulseKind::kSinc ? "sinc" : "raised-cosine"},
                {"rolloff", m.pulse.rolloff},
                {"span_symbols", m.pulse.span_symbols}};
  j["path_loss"] = {{"radar", pathloss_json(m.radar_pathloss)}, {"comm", pathloss_json(m.comm_pathloss)}};
  j["quantizer"] = {{"per_antenna", ex.quantizer.per_antenna},
                    {"scale_source",
                     ex.quantizer.scale_source == ScaleSource::kEmpiricalMoment ? "empirical" : "configured"},
                    {"configured_component_variance", ex.quantizer.configured_component_variance}};
  if (ex.quantizer.step_scale) j["quantizer"]["step_scale"] = *ex.quantizer.step_scale;
  j["reference"] = {
      {"kind", ex.reference.kind == ReferenceKind::kGroundTruth ? "ground-truth" : "high-resolution-traditional"},
      {"snr_db", ex.reference.snr_db},
      {"bits", bits_json(ex.reference.bits)}};
  json scat = json::array();
  for (const auto& s : ex.scene.scatterers) {
    json o = {{"kind", kind_name(s.kind)},
              {"distance_m", s.distance_m},
              {"aoa_deg", s.physical_aoa_rad / kDeg},
              {"rcs_dbsm", s.rcs_dbsm},
              {"tag", s.tag}};
    if (s.power_linear) o["power_linear"] = *s.power_linear;
    if (s.phase_rad) o["phase_rad"] = *s.phase_rad;
    scat.push_back(o);
  }
  j["scene"] = {{"scatterers", scat}};
  if (ex.scene.tx_rx_separation_m) j["scene"]["tx_rx_separation_m"] = *ex.scene.tx_rx_separation_m;
  if (ex.scene.comm_distance_m) j["scene"]["comm_distance_m"] = *ex.scene.comm_distance_m;
  json bits = json::array();
  for (AdcBits b : sc.sweep.bits) bits.push_back(bits_json(b));
  j["sweep"] = {{"snr_db", sc.sweep.snr_db}, {"bits", bits}, {"seeds_per_point", sc.sweep.seeds_per_point}};
  json methods = json::array();
  for (const auto& mth : sc.methods) methods.push_back(method_json(mth));
  j["estimators"] = methods;
  return pretty ? j.dump(2) : j.dump();
}

std::string config_hash(const Scenario& sc) {
  Scenario copy = sc;
  copy.output_dir.clear();  // where results go is not part of the experiment
  return sha256_hex(scenario_to_json(copy));
}

std::vector<std::string> preset_names() {
  return {"single-target", "two-target", "extended-bike", "jcr-indoor", "paper-scale"};
}

namespace {

json base_preset(const std::string& id, std::size_t n, std::size_t m, std::size_t k) {
  const double wavelength = kSpeedOfLight / 73e9;
  json j;
  j["scene_id"] = id;
  j["root_seed"] = 2021;
  j["frame"] = {{"sequence_length", n}, {"zc_root", 1}, {"bandwidth_hz", 1.536e9}, {"wavelength_m", wavelength}};
  j["geometry"] = {{"elements", m}, {"spacing_m", wavelength / 2.0}};
  j["grid"] = {{"range_bins", k}};
  j["sweep"] = {{"snr_db", {-15.0, -10.0, -5.0, 0.0, 5.0}},
                {"bits", {1, 2, 3, 4, 5, 6, 7, 8, 12, "inf"}},
                {"seeds_per_point", 4}};
  j["estimators"] = json::array({{{"method", "traditional"}},
                                 {{"method", "gamp"}, {"prior", "bg"}},
                                 {{"method", "gamp"}, {"prior", "gm"}, {"components", 3}}});
  return j;
}

json target(double distance_m, double aoa_deg, double rcs_dbsm, const std::string& tag) {
  return {{"kind", "target"}, {"distance_m", distance_m}, {"aoa_deg", aoa_deg}, {"rcs_dbsm", rcs_dbsm}, {"tag", tag}};
}

}  // namespace

std::string preset_json(std::string_view name) {
  // Trihedral reflector with 0.1 m edge at 73 GHz: 4*pi*a^4 / (3*lambda^2).
  const double lambda = kSpeedOfLight / 73e9;
  const double corner_dbsm = 10.0 * std::log10(4.0 * kPi * 1e-4 / (3.0 * lambda * lambda));
  json j;
  if (name == "single-target") {
    j = base_preset("single-target", 256, 16, 48);
    j["scene"] = {{"scatterers", {target(3.21, 0.0, corner_dbsm, "corner")}}};
  } else if (name == "two-target") {
    j = base_preset("two-target", 256, 30, 64);
    j["scene"] = {{"scatterers", {target(3.2, -10.0, corner_dbsm, "corner-a"),
                                  target(4.1, 15.0, corner_dbsm, "corner-b")}}};
  } else if (name == "extended-bike") {
    // Scatterer cluster along a 1.7 m frame at about 3.5 m, wheels brightest.
    j = base_preset("extended-bike", 256, 50, 64);
    json list = json::array();
    const int parts = 12;
    for (int i = 0; i < parts; ++i) {
      const double u = static_cast<double>(i) / (parts - 1);
      const bool wheel = i == 0 || i == 1 || i == parts - 2 || i == parts - 1;
      list.push_back(target(3.1 + 0.8 * u, -8.0 + 16.0 * u + 1.5 * std::sin(7.0 * u), wheel ? 5.0 : -3.0 + 2.0 * std::cos(5.0 * u),
                            wheel ? "wheel" : "frame"));
    }
    j["scene"] = {{"scatterers", list}};
  } else if (name == "jcr-indoor") {
    j = base_preset("jcr-indoor", 256, 16, 64);
    j["scene"] = {{"tx_rx_separation_m", 0.3},
                  {"comm_distance_m", 5.0},
                  {"scatterers",
                   {target(2.4, 20.0, corner_dbsm, "corner"), target(3.6, -25.0, 0.0, "wall-clutter"),
                    {{"kind", "self-interference"}, {"distance_m", 0.3}, {"aoa_deg", 90.0}, {"power_linear", 1e-8},
                     {"tag", "leakage"}},
                    {{"kind", "comm-path"}, {"distance_m", 5.0}, {"aoa_deg", 5.0}, {"tag", "los"}},
                    {{"kind", "comm-path"}, {"distance_m", 7.5}, {"aoa_deg", -35.0}, {"tag", "wall-bounce"}}}}};
    j["sweep"]["snr_db"] = {-15.0, -5.0, 5.0};
  } else if (name == "paper-scale") {
    j = base_preset("paper-scale", 2048, 86, 0);
    j["grid"] = {{"max_delay_s", 40e-9}};
    j["scene"] = {{"scatterers", {target(3.21, 0.0, corner_dbsm, "corner")}}};
    j["sweep"] = {{"snr_db", {-5.0}}, {"bits", {1, 2, 3, 4, 5, 6, 7, 8, 12}}, {"seeds_per_point", 1}};
    j["estimators"] = json::array({{{"method", "traditional"}}, {{"method", "gamp"}, {"prior", "bg"}}});
  } else {
    std::string list;
    for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + std::string(name) + "' (available: " + list + ")");
  }
  return j.dump(2);
}

}  // namespace jcr
