#include <atomic>
#include <cmath>

#include <json.hpp>

#include "doctest.h"
#include "jcr/scenario.hpp"
#include "jcr/sweep.hpp"

using namespace jcr;

namespace {

Scenario small_scenario() {
  auto j = nlohmann::json::parse(preset_json("single-target"));
  j["frame"]["sequence_length"] = 64;
  j["geometry"]["elements"] = 8;
  j["grid"]["range_bins"] = 16;
  j["scene"]["scatterers"][0]["distance_m"] = 1.0;
  j["scene"]["scatterers"][0]["aoa_deg"] = 12.0;
  j["sweep"] = {{"snr_db", {-5.0, 5.0}}, {"bits", {1, 3, "inf"}}, {"seeds_per_point", 2}};
  return parse_scenario(j.dump());
}

}  // namespace

TEST_CASE("a sweep cell matches a direct computation") {
  const Scenario sc = small_scenario();
  SweepGrid grid{{0.0}, {AdcBits::infinite()}, 1};
  const auto recs = run_sweep(sc.experiment, "s", grid, {MethodSpec::traditional_fft()});
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].error.empty());
  CHECK(recs[0].method == "traditional");

  const CMatrix x = simulate_channel(sc.experiment, 0);
  const auto rx = simulate_capture(sc.experiment, x, 0.0, 0);
  const auto est = traditional_estimate(rx.samples, sc.experiment.measurement());
  CHECK(recs[0].nmse_linear == nmse_linear(est.grid, x));
  const CMatrix z = noiseless_block(x, sc.experiment.measurement());
  CHECK(std::abs(10 * std::log10(z.squaredNorm() / (rx.noise_variance * 8 * 64))) < 1e-9);
}

TEST_CASE("captures are rounded to single precision") {
  const Scenario sc = small_scenario();
  const CMatrix x = simulate_channel(sc.experiment, 1);
  const auto rx = simulate_capture(sc.experiment, x, 5.0, 1);
  for (Eigen::Index i = 0; i < rx.samples.size(); ++i) {
    const Complex v = rx.samples.data()[i];
    CHECK(v.real() == static_cast<double>(static_cast<float>(v.real())));
    CHECK(v.imag() == static_cast<double>(static_cast<float>(v.imag())));
  }
}

TEST_CASE("seed splitting gives distinct and reproducible realizations") {
  const Scenario sc = small_scenario();
  const CMatrix a = simulate_channel(sc.experiment, 0);
  CHECK(a == simulate_channel(sc.experiment, 0));
  CHECK_FALSE(a == simulate_channel(sc.experiment, 1));
  const auto r0 = simulate_capture(sc.experiment, a, 0.0, 0);
  CHECK(r0.samples == simulate_capture(sc.experiment, a, 0.0, 0).samples);
  CHECK_FALSE(r0.samples == simulate_capture(sc.experiment, a, 0.0, 1).samples);
}

TEST_CASE("sweep results do not depend on the job count") {
  const Scenario sc = small_scenario();
  const std::vector<MethodSpec> methods = {MethodSpec::traditional_fft(), MethodSpec::em_bg_gamp()};
  const auto one = run_sweep(sc.experiment, "s", sc.sweep, methods, {1, {}});
  const auto three = run_sweep(sc.experiment, "s", sc.sweep, methods, {3, {}});
  REQUIRE(one.size() == sc.sweep.cell_count(methods.size()));
  REQUIRE(one.size() == three.size());
  for (std::size_t i = 0; i < one.size(); ++i) {
    CHECK(one[i].method == three[i].method);
    CHECK(one[i].bits == three[i].bits);
    CHECK(one[i].seed == three[i].seed);
    CHECK(one[i].nmse_linear == three[i].nmse_linear);
    CHECK(one[i].iterations == three[i].iterations);
  }
  // Grid order: snr, bits, method, seed.
  CHECK(one[0].snr_db == -5.0);
  CHECK(one[0].bits == AdcBits(1));
  CHECK(one[0].method == "traditional");
  CHECK(one[1].seed == 1);
  CHECK(one[2].method == "em-bg-gamp");
  CHECK(one.back().snr_db == 5.0);
  CHECK(one.back().bits.is_infinite());
}

TEST_CASE("cell callback sees every cell") {
  const Scenario sc = small_scenario();
  std::atomic<int> calls{0};
  int with_estimate = 0;
  SweepOptions opt;
  opt.jobs = 2;
  opt.on_cell = [&](const CellArtifacts& c) {
    ++calls;
    if (c.estimate && c.captured && c.record && c.method) ++with_estimate;
  };
  run_sweep(sc.experiment, "s", sc.sweep, {MethodSpec::traditional_fft()}, opt);
  CHECK(calls == static_cast<int>(sc.sweep.cell_count(1)));
  CHECK(with_estimate == calls);
}

TEST_CASE("failing cells are recorded, not fatal") {
  const Scenario sc = small_scenario();
  MethodSpec bad = MethodSpec::em_bg_gamp();
  bad.label = "bad";
  bad.gamp.damping = -1.0;
  const auto recs = run_sweep(sc.experiment, "s", SweepGrid{{0.0}, {AdcBits(2)}, 2},
                              {MethodSpec::traditional_fft(), bad});
  REQUIRE(recs.size() == 4);
  CHECK(recs[0].error.empty());
  CHECK_FALSE(recs[2].error.empty());
  CHECK(std::isnan(recs[2].nmse_linear));
}

TEST_CASE("reference identifiers") {
  CHECK(ReferenceSpec{}.id() == "ground-truth");
  ReferenceSpec r{ReferenceKind::kHighResolutionTraditional, 30.0, AdcBits(12)};
  CHECK(r.id() == "traditional-12bit-30dB");

  Scenario sc = small_scenario();
  sc.experiment.reference = r;
  const CMatrix x = simulate_channel(sc.experiment, 0);
  const CMatrix ref = reference_grid(sc.experiment, x, 0);
  CHECK(ref == reference_grid(sc.experiment, x, 0));
  CHECK(nmse_linear(ref, x) < 0.05);
  sc.experiment.reference = ReferenceSpec{};
  CHECK(reference_grid(sc.experiment, x, 0) == x);
}

TEST_CASE("sweep grid validation") {
  CHECK_THROWS_AS(SweepGrid({}, {AdcBits(1)}, 1).validate(), ConfigError);
  CHECK_THROWS_AS(SweepGrid({0.0}, {}, 1).validate(), ConfigError);
  CHECK_THROWS_AS(SweepGrid({0.0}, {AdcBits(1)}, 0).validate(), ConfigError);
  CHECK_NOTHROW(SweepGrid({0.0}, {AdcBits(1)}, 1).validate());
}

TEST_CASE("gamp error shrinks with resolution in a small sweep") {
  const Scenario sc = small_scenario();
  const auto recs = run_sweep(sc.experiment, "s", SweepGrid{{5.0}, {AdcBits(1), AdcBits::infinite()}, 4},
                              {MethodSpec::em_bg_gamp()});
  double one = 0, inf = 0;
  for (const auto& r : recs) (r.bits.is_infinite() ? inf : one) += r.nmse_linear;
  CHECK(inf < one);
}
