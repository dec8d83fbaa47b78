#pragma once

#include <vector>

#include "jcr/types.hpp"
#include "jcr/waveform.hpp"

namespace jcr {

// The linear map B = D^T (x) A_M between an M x K range-angle grid X and
// an M x N received block, Y = A_M X D. B is never materialized: the angle
// axis goes through a unitary M-point FFT and the range axis through an
// N-point FFT (circular convolution with the sequence, or a DFT).
class MeasurementOperator {
 public:
  MeasurementOperator(std::size_t elements, const MeasurementMatrix& d);

  Eigen::Index elements() const { return M_; }
  Eigen::Index range_bins() const { return K_; }
  Eigen::Index length() const { return N_; }
  MatrixMode mode() const { return mode_; }
  // Squared norm of every row of D.
  double row_energy() const { return row_energy_; }
  // ||B||_F^2 = M K row_energy.
  double frobenius_squared() const;

  // B x: M x K -> M x N.
  CMatrix apply(const CMatrix& x) const;
  // B^H w: M x N -> M x K.
  CMatrix apply_adjoint(const CMatrix& w) const;
  // (B o B*) v: elementwise squared magnitudes, M x K -> M x N.
  RMatrix apply_squared(const RMatrix& v) const;
  // (B o B*)^T u: M x N -> M x K.
  RMatrix apply_squared_adjoint(const RMatrix& u) const;

  // Dense MN x MK matrix in vec() (column-major) ordering. Small sizes only.
  CMatrix dense() const;

 private:
  Eigen::Index M_, K_, N_;
  MatrixMode mode_;
  double row_energy_;
  MeasurementMatrix d_;
  std::vector<Complex> seq_spectrum_;     // FFT of the circulant sequence
  std::vector<Complex> energy_spectrum_;  // FFT of |sequence|^2
};

}  // namespace jcr
