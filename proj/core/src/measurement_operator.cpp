#include "jcr/measurement_operator.hpp"

#include <cmath>
#include <stdexcept>

#include "jcr/channel.hpp"
#include "jcr/fft.hpp"

namespace jcr {

namespace {

// Unitary M-point transforms along the angle axis, column by column.
// forward: A_M x (sign -1); adjoint: A_M^H x (sign +1).
void angle_transform(CMatrix& x, bool adjoint) {
  const Eigen::Index M = x.rows();
  if (M == 1) return;
  const double norm = 1.0 / std::sqrt(static_cast<double>(M));
  std::vector<Complex> buf(static_cast<std::size_t>(M));
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (Eigen::Index m = 0; m < M; ++m) buf[static_cast<std::size_t>(m)] = x(m, c);
    if (adjoint)
      fft::inverse(buf);
    else
      fft::forward(buf);
    for (Eigen::Index m = 0; m < M; ++m) x(m, c) = buf[static_cast<std::size_t>(m)] * norm;
  }
}

}  // namespace

MeasurementOperator::MeasurementOperator(std::size_t elements, const MeasurementMatrix& d)
    : M_(static_cast<Eigen::Index>(elements)),
      K_(static_cast<Eigen::Index>(d.range_bins)),
      N_(static_cast<Eigen::Index>(d.length)),
      mode_(d.mode),
      row_energy_(d.row_energy()),
      d_(d) {
  if (elements == 0) throw std::invalid_argument("operator needs at least one antenna");
  if (K_ == 0 || K_ > N_) throw std::invalid_argument("operator needs 0 < K <= N");
  if (mode_ == MatrixMode::kCirculant) {
    if (d.sequence.size() != N_) throw std::invalid_argument("circulant operator: sequence length mismatch");
    seq_spectrum_.assign(d.sequence.data(), d.sequence.data() + N_);
    fft::forward(seq_spectrum_);
    energy_spectrum_.resize(static_cast<std::size_t>(N_));
    for (Eigen::Index n = 0; n < N_; ++n) energy_spectrum_[static_cast<std::size_t>(n)] = std::norm(d.sequence[n]);
    fft::forward(energy_spectrum_);
  }
}

double MeasurementOperator::frobenius_squared() const {
  // Every one of the M*K columns of B has squared norm row_energy (A_M has
  // unit-norm columns).
  return static_cast<double>(M_ * K_) * row_energy_;
}

CMatrix MeasurementOperator::apply(const CMatrix& x) const {
  if (x.rows() != M_ || x.cols() != K_) throw std::invalid_argument("operator apply: input must be M x K");
  CMatrix h = x;
  angle_transform(h, false);
  if (mode_ == MatrixMode::kIdentity) return h;

  CMatrix y(M_, N_);
  std::vector<Complex> row(static_cast<std::size_t>(N_));
  const double inv_n = 1.0 / static_cast<double>(N_);
  for (Eigen::Index m = 0; m < M_; ++m) {
    std::fill(row.begin(), row.end(), Complex{});
    for (Eigen::Index k = 0; k < K_; ++k) row[static_cast<std::size_t>(k)] = h(m, k);
    fft::forward(row);
    if (mode_ == MatrixMode::kCirculant) {
      for (std::size_t i = 0; i < row.size(); ++i) row[i] *= seq_spectrum_[i] * inv_n;
      fft::inverse(row);
    }
    for (Eigen::Index n = 0; n < N_; ++n) y(m, n) = row[static_cast<std::size_t>(n)];
  }
  return y;
}

CMatrix MeasurementOperator::apply_adjoint(const CMatrix& w) const {
  if (w.rows() != M_ || w.cols() != N_) throw std::invalid_argument("operator adjoint: input must be M x N");
  CMatrix h(M_, K_);
  if (mode_ == MatrixMode::kIdentity) {
    h = w;
  } else {
    std::vector<Complex> row(static_cast<std::size_t>(N_));
    const double inv_n = 1.0 / static_cast<double>(N_);
    for (Eigen::Index m = 0; m < M_; ++m) {
      for (Eigen::Index n = 0; n < N_; ++n) row[static_cast<std::size_t>(n)] = w(m, n);
      if (mode_ == MatrixMode::kCirculant) {
        // sum_n w[n] conj(t[n - k]): circular cross-correlation.
        fft::forward(row);
        for (std::size_t i = 0; i < row.size(); ++i) row[i] *= std::conj(seq_spectrum_[i]) * inv_n;
        fft::inverse(row);
      } else {
        // sum_n w[n] exp(+j 2 pi k n / N)
        fft::inverse(row);
      }
      for (Eigen::Index k = 0; k < K_; ++k) h(m, k) = row[static_cast<std::size_t>(k)];
    }
  }
  angle_transform(h, true);
  return h;
}

RMatrix MeasurementOperator::apply_squared(const RMatrix& v) const {
  if (v.rows() != M_ || v.cols() != K_) throw std::invalid_argument("squared apply: input must be M x K");
  // |A_M|^2 is constant 1/M, so only the per-range-bin column sums matter.
  const RVector col_sums = v.colwise().sum().transpose() / static_cast<double>(M_);
  RVector per_symbol(N_);
  switch (mode_) {
    case MatrixMode::kIdentity:
      per_symbol = col_sums;
      break;
    case MatrixMode::kDft:
      per_symbol.setConstant(col_sums.sum());
      break;
    case MatrixMode::kCirculant: {
      std::vector<Complex> buf(static_cast<std::size_t>(N_), Complex{});
      for (Eigen::Index k = 0; k < K_; ++k) buf[static_cast<std::size_t>(k)] = col_sums[k];
      fft::forward(buf);
      for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= energy_spectrum_[i];
      fft::inverse(buf);
      const double inv_n = 1.0 / static_cast<double>(N_);
      for (Eigen::Index n = 0; n < N_; ++n) per_symbol[n] = std::max(0.0, buf[static_cast<std::size_t>(n)].real() * inv_n);
      break;
    }
  }
  RMatrix out(M_, N_);
  for (Eigen::Index n = 0; n < N_; ++n) out.col(n).setConstant(per_symbol[n]);
  return out;
}

RMatrix MeasurementOperator::apply_squared_adjoint(const RMatrix& u) const {
  if (u.rows() != M_ || u.cols() != N_) throw std::invalid_argument("squared adjoint: input must be M x N");
  const RVector col_sums = u.colwise().sum().transpose() / static_cast<double>(M_);
  RVector per_bin(K_);
  switch (mode_) {
    case MatrixMode::kIdentity:
      per_bin = col_sums;
      break;
    case MatrixMode::kDft:
      per_bin.setConstant(col_sums.sum());
      break;
    case MatrixMode::kCirculant: {
      std::vector<Complex> buf(static_cast<std::size_t>(N_));
      for (Eigen::Index n = 0; n < N_; ++n) buf[static_cast<std::size_t>(n)] = col_sums[n];
      fft::forward(buf);
      for (std::size_t i = 0; i < buf.size(); ++i) buf[i] *= std::conj(energy_spectrum_[i]);
      fft::inverse(buf);
      const double inv_n = 1.0 / static_cast<double>(N_);
      for (Eigen::Index k = 0; k < K_; ++k) per_bin[k] = std::max(0.0, buf[static_cast<std::size_t>(k)].real() * inv_n);
      break;
    }
  }
  RMatrix out(M_, K_);
  for (Eigen::Index k = 0; k < K_; ++k) out.col(k).setConstant(per_bin[k]);
  return out;
}

CMatrix MeasurementOperator::dense() const {
  const CMatrix D = d_.dense();
  const CMatrix A = angle_dictionary(static_cast<std::size_t>(M_));
  CMatrix B(M_ * N_, M_ * K_);
  for (Eigen::Index k = 0; k < K_; ++k)
    for (Eigen::Index n = 0; n < N_; ++n) B.block(n * M_, k * M_, M_, M_) = D(k, n) * A;
  return B;
}

}  // namespace jcr
