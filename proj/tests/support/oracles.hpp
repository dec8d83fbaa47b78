#pragma once

// Brute-force reference computations built from first principles. They
// deliberately avoid the library's FFT and operator code paths.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kPi = 3.14159265358979323846;

inline std::vector<Complex> zadoff_chu(std::size_t n, unsigned root) {
  std::vector<Complex> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = static_cast<double>(i);
    const double arg = (n % 2 == 0) ? k * k : k * (k + 1.0);
    t[i] = std::polar(1.0, -kPi * root * arg / static_cast<double>(n));
  }
  return t;
}

inline CMatrix circulant_rows(const std::vector<Complex>& t, std::size_t k_rows) {
  const std::size_t n = t.size();
  CMatrix d(k_rows, n);
  for (std::size_t k = 0; k < k_rows; ++k)
    for (std::size_t j = 0; j < n; ++j) d(k, j) = t[(j + n - k) % n];
  return d;
}

inline CMatrix dft_rows(std::size_t k_rows, std::size_t n) {
  CMatrix d(k_rows, n);
  for (std::size_t k = 0; k < k_rows; ++k)
    for (std::size_t j = 0; j < n; ++j)
      d(k, j) = std::polar(1.0, -2.0 * kPi * static_cast<double>((k * j) % n) / static_cast<double>(n));
  return d;
}

inline CMatrix angle_matrix(std::size_t m) {
  CMatrix a(m, m);
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t c = 0; c < m; ++c)
      a(r, c) = std::polar(1.0 / std::sqrt(static_cast<double>(m)),
                           -2.0 * kPi * static_cast<double>((r * c) % m) / static_cast<double>(m));
  return a;
}

// Kronecker product D^T (x) A in column-major vec ordering.
inline CMatrix kron_operator(const CMatrix& d, const CMatrix& a) {
  const CMatrix dt = d.transpose();
  CMatrix b(dt.rows() * a.rows(), dt.cols() * a.cols());
  for (Eigen::Index i = 0; i < dt.rows(); ++i)
    for (Eigen::Index j = 0; j < dt.cols(); ++j) b.block(i * a.rows(), j * a.cols(), a.rows(), a.cols()) = dt(i, j) * a;
  return b;
}

inline CVector vec(const CMatrix& x) { return Eigen::Map<const CVector>(x.data(), x.size()); }

inline double std_normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }
inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// E[(x - Q(x))^2] for x ~ N(0, 1) and the b-bit mid-rise quantizer with
// step delta, in closed form per cell.
inline double gaussian_mse_closed_form(double delta, int bits) {
  const long half = 1L << (bits - 1);
  double total = 0.0;
  for (long i = 1; i <= half; ++i) {
    const double lo = static_cast<double>(i - 1) * delta;
    const double up = (i == half) ? INFINITY : static_cast<double>(i) * delta;
    const double c = (static_cast<double>(i) - 0.5) * delta;
    const double phi_lo = std_normal_pdf(lo), phi_up = std::isinf(up) ? 0.0 : std_normal_pdf(up);
    const double cdf_lo = std_normal_cdf(lo), cdf_up = std::isinf(up) ? 1.0 : std_normal_cdf(up);
    const double xphi_up = std::isinf(up) ? 0.0 : up * phi_up;
    // integral of (x - c)^2 phi(x) over [lo, up]
    total += (1.0 + c * c) * (cdf_up - cdf_lo) - (xphi_up - lo * phi_lo) + 2.0 * c * (phi_up - phi_lo);
  }
  return 2.0 * total;
}

// Golden-section minimum of a unimodal function on [a, b].
inline double golden_min(const std::function<double(double)>& f, double a, double b, double tol = 1e-10) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  while (b - a > tol) {
    if (f(c) < f(d)) b = d;
    else a = c;
    c = b - g * (b - a);
    d = a + g * (b - a);
  }
  return 0.5 * (a + b);
}

// Posterior mean/variance of z ~ N(m, v) given z + w in (lo, up], w ~ N(0, s),
// by trapezoidal integration over z.
struct Moments {
  double mean, variance;
};
inline Moments cell_posterior_quadrature(double m, double v, double s, double lo, double up, int points = 200001) {
  const double sd = std::sqrt(v);
  const double a = m - 12.0 * sd, b = m + 12.0 * sd;
  const double h = (b - a) / (points - 1);
  double z0 = 0, z1 = 0, z2 = 0;
  for (int i = 0; i < points; ++i) {
    const double z = a + h * i;
    const double like = std_normal_cdf((up - z) / std::sqrt(s)) - std_normal_cdf((lo - z) / std::sqrt(s));
    const double w = std::exp(-0.5 * (z - m) * (z - m) / v) * like * ((i == 0 || i == points - 1) ? 0.5 : 1.0);
    z0 += w;
    z1 += w * z;
    z2 += w * z * z;
  }
  const double mean = z1 / z0;
  return {mean, z2 / z0 - mean * mean};
}

inline double nmse(const CMatrix& est, const CMatrix& ref) { return (est - ref).squaredNorm() / ref.squaredNorm(); }

}  // namespace oracle
