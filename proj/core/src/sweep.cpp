#include "jcr/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <chrono>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "jcr/rng.hpp"

namespace jcr {

void SweepGrid::validate() const {
  if (snr_db.empty()) throw ConfigError("sweep.snr_db must not be empty");
  if (bits.empty()) throw ConfigError("sweep.bits must not be empty");
  if (seeds_per_point == 0) throw ConfigError("sweep.seeds_per_point must be at least 1");
  for (double s : snr_db)
    if (std::isnan(s)) throw ConfigError("sweep.snr_db contains NaN");
}

MethodSpec MethodSpec::traditional_fft() {
  MethodSpec m;
  m.label = "traditional";
  m.method = EstimationMethod::kTraditional;
  return m;
}

MethodSpec MethodSpec::em_bg_gamp() {
  MethodSpec m;
  m.label = "em-bg-gamp";
  m.method = EstimationMethod::kGamp;
  m.gamp.prior = PriorFamily::kBernoulliGaussian;
  return m;
}

MethodSpec MethodSpec::em_gm_gamp(std::size_t components) {
  MethodSpec m;
  m.label = "em-gm-gamp";
  m.method = EstimationMethod::kGamp;
  m.gamp.prior = PriorFamily::kGaussianMixture;
  m.gamp.components = components;
  return m;
}

std::string ReferenceSpec::id() const {
  if (kind == ReferenceKind::kGroundTruth) return "ground-truth";
  std::string s = "traditional-" + bits.to_string() + "bit-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%gdB", snr_db);
  return s + buf;
}

MeasurementMatrix Experiment::measurement() const {
  return build_measurement_matrix(sequence, model.range_bins, matrix_mode);
}

void Experiment::validate() const {
  model.geometry.validate();
  model.frame.validate();
  model.radar_pathloss.validate();
  model.comm_pathloss.validate();
  if (model.range_bins == 0) throw ConfigError("grid.range_bins must be at least 1");
  if (sequence.length() == 0) throw ConfigError("frame.sequence_length must be at least 1");
  if (model.range_bins > sequence.length())
    throw ConfigError("grid.range_bins exceeds frame.sequence_length");
  if (scene.scatterers.empty()) throw ConfigError("scene.scatterers must not be empty");
}

CMatrix simulate_channel(const Experiment& exp, std::size_t seed_index) {
  return discretize_scene(exp.scene, exp.model, exp.root_seed, stream_id(seed_index, StreamPurpose::kScenePhase)).grid;
}

ReceivedBlock simulate_capture(const Experiment& exp, const CMatrix& channel, double snr_db, std::size_t seed_index) {
  ReceivedBlock rx = synthesize_received(channel, exp.measurement(), NoiseSpec::snr_db(snr_db), exp.root_seed,
                                         stream_id(seed_index, StreamPurpose::kNoise), exp.model.frame.repetitions);
  round_to_capture_precision(rx.samples);
  return rx;
}

CMatrix reference_grid(const Experiment& exp, const CMatrix& channel, std::size_t seed_index) {
  if (exp.reference.kind == ReferenceKind::kGroundTruth) return channel;
  const MeasurementMatrix d = exp.measurement();
  ReceivedBlock rx = synthesize_received(channel, d, NoiseSpec::snr_db(exp.reference.snr_db), exp.root_seed,
                                         stream_id(seed_index, StreamPurpose::kAux), exp.model.frame.repetitions);
  round_to_capture_precision(rx.samples);
  return estimate_block(rx.samples, rx.noise_variance, exp.reference.bits, exp.quantizer, d,
                        MethodSpec::traditional_fft())
      .grid;
}

ChannelEstimate estimate_block(const CMatrix& captured, double noise_variance, AdcBits bits,
                               const QuantizerSpec& quantizer, const MeasurementMatrix& d, const MethodSpec& method) {
  QuantizerSpec spec = quantizer;
  spec.bits = bits;
  const QuantizedBlock q = quantize(captured, spec);
  if (method.method == EstimationMethod::kTraditional) return traditional_estimate(q.values, d, method.traditional);
  const MeasurementOperator op(static_cast<std::size_t>(captured.rows()), d);
  return gamp_estimate(q, op, noise_variance, method.gamp);
}

std::vector<SweepRecord> run_sweep(const Experiment& exp, const std::string& scene_id, const SweepGrid& grid,
                                   const std::vector<MethodSpec>& methods, const SweepOptions& options) {
  grid.validate();
  exp.validate();
  if (methods.empty()) throw ConfigError("at least one estimator is required");

  const std::size_t n_snr = grid.snr_db.size();
  const std::size_t n_bits = grid.bits.size();
  const std::size_t n_methods = methods.size();
  const std::size_t n_seeds = grid.seeds_per_point;
  const MeasurementMatrix d = exp.measurement();

  std::vector<SweepRecord> records(grid.cell_count(n_methods));
  auto slot = [&](std::size_t si, std::size_t bi, std::size_t mi, std::size_t seed) -> SweepRecord& {
    return records[((si * n_bits + bi) * n_methods + mi) * n_seeds + seed];
  };

  std::mutex collector;

  // One work unit per (snr, seed): the capture is shared by every bit depth
  // and method so comparisons are paired.
  auto run_unit = [&](std::size_t unit) {
    const std::size_t si = unit / n_seeds;
    const std::size_t seed = unit % n_seeds;
    const double snr = grid.snr_db[si];

    std::string unit_error;
    CMatrix reference;
    ReceivedBlock rx;
    try {
      const CMatrix truth = simulate_channel(exp, seed);
      reference = reference_grid(exp, truth, seed);
      rx = simulate_capture(exp, truth, snr, seed);
    } catch (const std::exception& e) {
      unit_error = e.what();
    }

    for (std::size_t bi = 0; bi < n_bits; ++bi)
      for (std::size_t mi = 0; mi < n_methods; ++mi) {
        SweepRecord& rec = slot(si, bi, mi, seed);
        rec.scene_id = scene_id;
        rec.method = methods[mi].label;
        rec.bits = grid.bits[bi];
        rec.snr_db = snr;
        rec.seed = seed;
        rec.error = unit_error;
        rec.nmse_linear = std::numeric_limits<double>::quiet_NaN();
        ChannelEstimate est;
        bool ok = unit_error.empty();
        if (ok) {
          const auto t0 = std::chrono::steady_clock::now();
          try {
            est = estimate_block(rx.samples, rx.noise_variance, grid.bits[bi], exp.quantizer, d, methods[mi]);
            rec.iterations = est.diagnostics.iterations;
            rec.nmse_linear = nmse_linear(est.grid, reference);
          } catch (const std::exception& e) {
            rec.error = e.what();
            ok = false;
          }
          rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        }
        if (options.on_cell) {
          std::lock_guard lock(collector);
          options.on_cell({seed, snr, grid.bits[bi], &methods[mi], unit_error.empty() ? &rx : nullptr,
                           ok ? &est : nullptr, &rec});
        }
      }
  };

  const std::size_t units = n_snr * n_seeds;
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, units));
  if (jobs == 1) {
    for (std::size_t u = 0; u < units; ++u) run_unit(u);
    return records;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t j = 0; j < jobs; ++j)
    pool.emplace_back([&] {
      for (std::size_t u = next++; u < units; u = next++) run_unit(u);
    });
  for (auto& t : pool) t.join();
  return records;
}

}  // namespace jcr
