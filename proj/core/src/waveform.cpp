#include "jcr/waveform.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "jcr/fft.hpp"

namespace jcr {

CVector TrainingSequence::transmitted() const {
  const double amp = std::sqrt(energy_per_symbol);
  CVector out(static_cast<Eigen::Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) out[static_cast<Eigen::Index>(i)] = amp * samples[i];
  return out;
}

TrainingSequence TrainingSequence::from_samples(std::vector<Complex> samples,
                                                double energy_per_symbol) {
  if (samples.empty()) throw std::invalid_argument("training sequence must not be empty");
  for (const auto& s : samples) {
    if (std::abs(std::abs(s) - 1.0) > 1e-12)
      throw std::invalid_argument("training sequence samples must be unit-modulus");
  }
  if (!(energy_per_symbol > 0.0)) throw std::invalid_argument("energy_per_symbol must be positive");
  TrainingSequence t;
  t.samples = std::move(samples);
  t.root = 0;
  t.energy_per_symbol = energy_per_symbol;
  return t;
}

TrainingSequence generate_zc(std::size_t n, std::uint32_t root) {
  if (n == 0) throw std::invalid_argument("Zadoff-Chu length must be positive");
  if (root == 0 || std::gcd(static_cast<std::size_t>(root), n) != 1) {
    throw std::invalid_argument("Zadoff-Chu root " + std::to_string(root) +
                                " is not coprime with length " + std::to_string(n));
  }
  TrainingSequence t;
  t.root = root;
  t.samples.resize(n);
  const bool even = (n % 2 == 0);
  // Reduce the phase index modulo 2n in integers to keep the argument small.
  const std::uint64_t period = 2 * static_cast<std::uint64_t>(n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::uint64_t kk = k;
    const std::uint64_t quad = even ? (kk * kk) % period : (kk * (kk + 1)) % period;
    const std::uint64_t idx = (static_cast<std::uint64_t>(root) % period) * quad % period;
    const double phase = -kPi * static_cast<double>(idx) / static_cast<double>(n);
    t.samples[k] = std::polar(1.0, phase);
  }
  return t;
}

CMatrix MeasurementMatrix::dense() const {
  const auto K = static_cast<Eigen::Index>(range_bins);
  const auto N = static_cast<Eigen::Index>(length);
  CMatrix D(K, N);
  switch (mode) {
    case MatrixMode::kCirculant:
      for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index n = 0; n < N; ++n) D(k, n) = sequence[((n - k) % N + N) % N];
      break;
    case MatrixMode::kDft:
      for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index n = 0; n < N; ++n) {
          const auto idx = (k * n) % N;
          D(k, n) = std::polar(1.0, -2.0 * kPi * static_cast<double>(idx) / static_cast<double>(N));
        }
      break;
    case MatrixMode::kIdentity:
      D.setIdentity();
      break;
  }
  return D;
}

double MeasurementMatrix::row_energy() const {
  switch (mode) {
    case MatrixMode::kCirculant:
      return sequence.squaredNorm();
    case MatrixMode::kDft:
      return static_cast<double>(length);
    case MatrixMode::kIdentity:
      return 1.0;
  }
  return 0.0;
}

MeasurementMatrix build_measurement_matrix(const TrainingSequence& t, std::size_t range_bins,
                                           MatrixMode mode) {
  const std::size_t n = t.length();
  if (range_bins == 0) throw std::invalid_argument("range bin count must be positive");
  if (range_bins > n) {
    throw std::invalid_argument("range bins K=" + std::to_string(range_bins) +
                                " exceed sequence length N=" + std::to_string(n));
  }
  if (mode == MatrixMode::kIdentity && range_bins != n)
    throw std::invalid_argument("identity measurement requires K == N");
  MeasurementMatrix d;
  d.mode = mode;
  d.range_bins = range_bins;
  d.length = n;
  if (mode == MatrixMode::kCirculant) d.sequence = t.transmitted();
  return d;
}

void FrameConfig::validate() const {
  if (!(preamble_fraction > 0.0 && preamble_fraction <= 1.0))
    throw std::invalid_argument("preamble_fraction must lie in (0, 1]");
  if (!(bandwidth_hz > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (!(wavelength_m > 0.0)) throw std::invalid_argument("wavelength must be positive");
  if (!(coherent_interval_s > 0.0)) throw std::invalid_argument("coherent interval must be positive");
  if (repetitions == 0) throw std::invalid_argument("repetitions must be at least 1");
}

std::size_t default_range_bins(double bandwidth_hz, double max_delay_s) {
  if (!(bandwidth_hz > 0.0) || !(max_delay_s >= 0.0))
    throw std::invalid_argument("bandwidth must be positive and max delay non-negative");
  return static_cast<std::size_t>(std::ceil(bandwidth_hz * max_delay_s + 1.0));
}

CVector circular_xcorr(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("circular_xcorr: length mismatch");
  std::vector<Complex> fa(a.data(), a.data() + a.size());
  std::vector<Complex> fb(b.data(), b.data() + b.size());
  fft::forward(fa);
  fft::forward(fb);
  for (std::size_t i = 0; i < fa.size(); ++i) fa[i] *= std::conj(fb[i]);
  fft::inverse(fa);
  CVector out(a.size());
  const double scale = 1.0 / static_cast<double>(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out[i] = fa[static_cast<std::size_t>(i)] * scale;
  return out;
}

}  // namespace jcr
