#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "jcr/channel.hpp"
#include "jcr/estimation.hpp"
#include "jcr/frontend.hpp"
#include "jcr/metrics.hpp"
#include "jcr/quantizer.hpp"
#include "jcr/waveform.hpp"

namespace jcr {

struct SweepGrid {
  std::vector<double> snr_db;
  std::vector<AdcBits> bits;
  std::size_t seeds_per_point = 1;

  void validate() const;  // throws ConfigError
  std::size_t cell_count(std::size_t methods) const {
    return snr_db.size() * bits.size() * methods * seeds_per_point;
  }
};

struct MethodSpec {
  std::string label;
  EstimationMethod method = EstimationMethod::kTraditional;
  GampConfig gamp;
  TraditionalOptions traditional;

  static MethodSpec traditional_fft();
  static MethodSpec em_bg_gamp();
  static MethodSpec em_gm_gamp(std::size_t components = 3);
};

enum class ReferenceKind {
  kGroundTruth,
  kHighResolutionTraditional,  // traditional estimate of a separate high-SNR, 12-bit capture
};

struct ReferenceSpec {
  ReferenceKind kind = ReferenceKind::kGroundTruth;
  double snr_db = 30.0;
  AdcBits bits = AdcBits(12);

  std::string id() const;
};

// Everything needed to synthesize and score one scene.
struct Experiment {
  Scene scene;
  ChannelModel model;
  TrainingSequence sequence;
  MatrixMode matrix_mode = MatrixMode::kCirculant;
  QuantizerSpec quantizer;  // bits are overridden per cell
  ReferenceSpec reference;
  std::uint64_t root_seed = 1;

  MeasurementMatrix measurement() const;
  void validate() const;
};

// Seed splitting: seed index s draws scene phases from stream
// stream_id(s, kScenePhase), noise from stream_id(s, kNoise) and the
// reference capture from stream_id(s, kAux), all keyed by root_seed.
CMatrix simulate_channel(const Experiment& exp, std::size_t seed_index);
ReceivedBlock simulate_capture(const Experiment& exp, const CMatrix& channel, double snr_db, std::size_t seed_index);
CMatrix reference_grid(const Experiment& exp, const CMatrix& channel, std::size_t seed_index);

// Quantize a captured block at `bits` and run one estimator. Shared by the
// sweep and by estimation from stored dumps.
ChannelEstimate estimate_block(const CMatrix& captured, double noise_variance, AdcBits bits,
                               const QuantizerSpec& quantizer, const MeasurementMatrix& d, const MethodSpec& method);

struct CellArtifacts {
  std::size_t seed = 0;
  double snr_db = 0.0;
  AdcBits bits;
  const MethodSpec* method = nullptr;
  const ReceivedBlock* captured = nullptr;
  const ChannelEstimate* estimate = nullptr;  // null when the solve failed
  const SweepRecord* record = nullptr;
};

struct SweepOptions {
  std::size_t jobs = 1;
  // Called once per cell from a single collector; calls are serialized but
  // their order depends on scheduling.
  std::function<void(const CellArtifacts&)> on_cell;
};

// Records are ordered by (snr, bits, method, seed) in grid order regardless
// of the job count.
std::vector<SweepRecord> run_sweep(const Experiment& exp, const std::string& scene_id, const SweepGrid& grid,
                                   const std::vector<MethodSpec>& methods, const SweepOptions& options = {});

}  // namespace jcr
