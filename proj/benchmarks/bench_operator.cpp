#include <benchmark/benchmark.h>

#include "jcr/measurement_operator.hpp"
#include "jcr/quantizer.hpp"
#include "jcr/rng.hpp"

namespace {

jcr::CMatrix random_matrix(Eigen::Index rows, Eigen::Index cols) {
  jcr::RandomStream r(7, 1);
  jcr::CMatrix x(rows, cols);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = r.complex_normal(1.0);
  return x;
}

// Args: M, N, K.
void BM_Apply(benchmark::State& state) {
  const auto M = static_cast<std::size_t>(state.range(0));
  const auto N = static_cast<std::size_t>(state.range(1));
  const auto K = static_cast<std::size_t>(state.range(2));
  const jcr::MeasurementOperator op(M, jcr::build_measurement_matrix(jcr::generate_zc(N), K, jcr::MatrixMode::kCirculant));
  const jcr::CMatrix x = random_matrix(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(K));
  for (auto _ : state) benchmark::DoNotOptimize(op.apply(x));
}

void BM_Adjoint(benchmark::State& state) {
  const auto M = static_cast<std::size_t>(state.range(0));
  const auto N = static_cast<std::size_t>(state.range(1));
  const auto K = static_cast<std::size_t>(state.range(2));
  const jcr::MeasurementOperator op(M, jcr::build_measurement_matrix(jcr::generate_zc(N), K, jcr::MatrixMode::kCirculant));
  const jcr::CMatrix w = random_matrix(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(N));
  for (auto _ : state) benchmark::DoNotOptimize(op.apply_adjoint(w));
}

void BM_Quantize(benchmark::State& state) {
  const jcr::CMatrix y = random_matrix(16, state.range(0));
  const jcr::QuantizerSpec spec{jcr::AdcBits(3)};
  for (auto _ : state) benchmark::DoNotOptimize(jcr::quantize(y, spec));
  state.SetItemsProcessed(state.iterations() * y.size());
}

}  // namespace

BENCHMARK(BM_Apply)->Args({16, 256, 48})->Args({86, 2048, 63});
BENCHMARK(BM_Adjoint)->Args({16, 256, 48})->Args({86, 2048, 63});
BENCHMARK(BM_Quantize)->Arg(256)->Arg(2048);
