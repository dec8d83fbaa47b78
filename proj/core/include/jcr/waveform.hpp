#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "jcr/types.hpp"

namespace jcr {

// Preamble used for sounding. `samples` are unit-modulus; the transmitted
// sequence is sqrt(energy_per_symbol) * samples.
struct TrainingSequence {
  std::vector<Complex> samples;
  std::uint32_t root = 1;
  double symbol_period_s = 1.0;
  double energy_per_symbol = 1.0;

  std::size_t length() const { return samples.size(); }
  // sqrt(E_s) * samples, as transmitted.
  CVector transmitted() const;

  // Wraps an arbitrary unit-modulus sequence (root is recorded as 0).
  static TrainingSequence from_samples(std::vector<Complex> samples,
                                       double energy_per_symbol = 1.0);
};

// Zadoff-Chu sequence of length n. Even n: exp(-j pi r k^2 / n);
// odd n: exp(-j pi r k (k+1) / n). Throws std::invalid_argument unless
// gcd(root, n) == 1.
TrainingSequence generate_zc(std::size_t n, std::uint32_t root = 1);

enum class MatrixMode {
  kCirculant,  // row k is the training sequence circularly shifted right by k
  kDft,        // first K rows of the N-point DFT matrix (deramped FMCW model)
  kIdentity,   // D = I (K == N); observation is the delay profile itself
};

struct MeasurementMatrix {
  MatrixMode mode = MatrixMode::kCirculant;
  std::size_t range_bins = 0;  // K
  std::size_t length = 0;      // N
  // Transmitted sequence backing a circulant D (empty for the other modes).
  CVector sequence;

  // Materialized K x N matrix. Intended for tests and small problems; the
  // estimators work through MeasurementOperator instead.
  CMatrix dense() const;
  // Squared row norm, identical for every row.
  double row_energy() const;
};

// Throws std::invalid_argument when K > N, K == 0, or (identity mode) K != N.
MeasurementMatrix build_measurement_matrix(const TrainingSequence& t, std::size_t range_bins,
                                           MatrixMode mode);

struct FrameConfig {
  double preamble_fraction = 1.0;  // delta in (0, 1]
  double coherent_interval_s = 1e-3;
  double bandwidth_hz = 1.536e9;
  double wavelength_m = kSpeedOfLight / 73e9;
  // Coherently averaged repetitions of the preamble per scan.
  std::size_t repetitions = 1;

  void validate() const;
};

// K = ceil(W * tau_max + 1).
std::size_t default_range_bins(double bandwidth_hz, double max_delay_s);

// Circular cross-correlation r[l] = sum_n a[n + l] conj(b[n]) for l in [0, N).
CVector circular_xcorr(const CVector& a, const CVector& b);

}  // namespace jcr
