#include <benchmark/benchmark.h>

#include "jcr/estimation.hpp"
#include "jcr/frontend.hpp"
#include "jcr/rng.hpp"

namespace {

struct Problem {
  jcr::MeasurementMatrix d;
  jcr::CMatrix x;
  jcr::ReceivedBlock rx;
};

// Sparse grid with a handful of taps, observed at -5 dB.
Problem make_problem(std::size_t M, std::size_t N, std::size_t K) {
  Problem p;
  p.d = jcr::build_measurement_matrix(jcr::generate_zc(N), K, jcr::MatrixMode::kCirculant);
  jcr::RandomStream r(11, 1);
  p.x = jcr::CMatrix::Zero(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(K));
  for (int i = 0; i < 4; ++i)
    p.x(static_cast<Eigen::Index>(r.next_u32() % M), static_cast<Eigen::Index>(r.next_u32() % K)) =
        r.complex_normal(1.0);
  p.rx = jcr::synthesize_received(p.x, p.d, jcr::NoiseSpec::snr_db(-5.0), 3);
  return p;
}

void BM_Traditional(benchmark::State& state) {
  const auto p = make_problem(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)),
                              static_cast<std::size_t>(state.range(2)));
  for (auto _ : state) benchmark::DoNotOptimize(jcr::traditional_estimate(p.rx.samples, p.d));
}

void BM_Gamp(benchmark::State& state) {
  const auto p = make_problem(16, 256, 32);
  const jcr::MeasurementOperator op(16, p.d);
  const auto q = jcr::quantize(p.rx.samples, {jcr::AdcBits(static_cast<int>(state.range(0)))});
  jcr::GampConfig cfg;
  cfg.prior = state.range(1) ? jcr::PriorFamily::kGaussianMixture : jcr::PriorFamily::kBernoulliGaussian;
  int iterations = 0;
  for (auto _ : state) {
    const auto est = jcr::gamp_estimate(q, op, p.rx.noise_variance, cfg);
    iterations = est.diagnostics.iterations;
    benchmark::DoNotOptimize(est.grid.data());
  }
  state.counters["iterations"] = iterations;
}

}  // namespace

BENCHMARK(BM_Traditional)->Args({16, 256, 48})->Args({86, 2048, 63})->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_Gamp)->ArgsProduct({{1, 3, 12}, {0, 1}})->Unit(benchmark::kMillisecond);
