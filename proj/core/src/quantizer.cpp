#include "jcr/quantizer.hpp"

#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/minima.hpp>

namespace jcr {

AdcBits::AdcBits(int bits) : bits_(bits) {
  if (bits < 1 || bits > kMaxBits)
    throw std::invalid_argument("ADC resolution " + std::to_string(bits) + " outside 1.." +
                                std::to_string(kMaxBits));
}

int AdcBits::value() const {
  if (is_infinite()) throw std::logic_error("infinite resolution has no bit count");
  return bits_;
}

long AdcBits::levels_per_side() const { return 1L << (value() - 1); }

std::string AdcBits::to_string() const { return is_infinite() ? "inf" : std::to_string(bits_); }

AdcBits AdcBits::parse(const std::string& text) {
  if (text == "inf" || text == "infinite" || text == "Inf") return infinite();
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse ADC resolution '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("cannot parse ADC resolution '" + text + "'");
  return AdcBits(v);
}

namespace {

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi); }

// Integral of (x - c)^2 phi(x) over [a, b], 20-point Gauss-Legendre panels
// of width at most 1.
double cell_error(double a, double b, double c) {
  using Rule = boost::math::quadrature::gauss<double, 20>;
  double total = 0.0;
  const int panels = std::max(1, static_cast<int>(std::ceil(b - a)));
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * width;
    total += Rule::integrate([c](double x) { return (x - c) * (x - c) * normal_pdf(x); }, lo,
                             lo + width);
  }
  return total;
}

constexpr double kTailCutoff = 14.0;  // phi(14) ~ 1e-43

}  // namespace

double gaussian_quantizer_mse(double step, int bits) {
  const AdcBits b(bits);
  if (!(step > 0.0)) throw std::invalid_argument("quantizer step must be positive");
  const long L = b.levels_per_side();
  double half = 0.0;
  for (long k = 1; k <= L; ++k) {
    const double lo = static_cast<double>(k - 1) * step;
    if (lo >= kTailCutoff) break;
    const double up = (k == L) ? kTailCutoff : std::min(static_cast<double>(k) * step, kTailCutoff);
    half += cell_error(lo, up, (static_cast<double>(k) - 0.5) * step);
  }
  return 2.0 * half;
}

double optimal_step(int bits) {
  const AdcBits b(bits);
  static std::mutex mutex;
  static std::map<int, double> cache;
  std::lock_guard<std::mutex> lock(mutex);
  if (auto it = cache.find(bits); it != cache.end()) return it->second;

  // Coarse log-spaced scan to bracket the minimum, then Brent on log(step).
  const auto objective = [bits](double log_step) {
    return gaussian_quantizer_mse(std::exp(log_step), bits);
  };
  const double lo = std::log(1e-4), hi = std::log(4.0);
  constexpr int kScan = 160;
  int best = 0;
  double best_val = kInf;
  for (int i = 0; i <= kScan; ++i) {
    const double v = objective(lo + (hi - lo) * i / kScan);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double a = lo + (hi - lo) * std::max(0, best - 1) / kScan;
  const double c = lo + (hi - lo) * std::min(kScan, best + 1) / kScan;
  const auto [log_opt, mse] = boost::math::tools::brent_find_minima(objective, a, c, 52);
  (void)mse;
  const double step = std::exp(log_opt);
  cache.emplace(bits, step);
  (void)b;
  return step;
}

double quantize_component(double x, double step, AdcBits bits) {
  if (bits.is_infinite()) return x;
  const double L = static_cast<double>(bits.levels_per_side());
  const double mag = std::abs(x);
  double cell = std::ceil(mag / step);
  if (cell < 1.0) cell = 1.0;
  if (cell > L) cell = L;
  const double level = (cell - 0.5) * step;
  return std::signbit(x) && mag > 0.0 ? -level : level;
}

std::pair<double, double> quantizer_cell(double q, double step, AdcBits bits) {
  if (bits.is_infinite()) return {q, q};
  const double L = static_cast<double>(bits.levels_per_side());
  const double idx = std::abs(q) / step + 0.5;  // 1..L for valid levels
  const double k = std::round(idx);
  if (!(step > 0.0) || k < 1.0 || k > L || std::abs(idx - k) > 1e-6 * std::max(1.0, k)) {
    throw std::invalid_argument("value " + std::to_string(q) + " is not a " + bits.to_string() +
                                "-bit quantizer level for step " + std::to_string(step));
  }
  const double inner = (k - 1.0) * step;
  const double outer = (k == L) ? kInf : k * step;
  if (q > 0.0) return {inner, outer};
  return {-outer, -inner};
}

double QuantizerSpec::resolved_step_scale() const {
  if (bits.is_infinite()) return 0.0;
  const double s = step_scale.value_or(optimal_step(bits.value()));
  if (!(s > 0.0)) throw std::invalid_argument("quantizer step scale must be positive");
  return s;
}

QuantizedBlock quantize(const CMatrix& y, const QuantizerSpec& spec) {
  QuantizedBlock out;
  out.bits = spec.bits;
  const Eigen::Index rows = y.rows();
  const Eigen::Index cols = y.cols();
  out.step_re = RVector::Zero(rows);
  out.step_im = RVector::Zero(rows);
  if (spec.bits.is_infinite()) {
    out.values = y;
    return out;
  }
  if (y.size() == 0) throw std::invalid_argument("cannot quantize an empty block");
  const double scale = spec.resolved_step_scale();
  out.step_scale = scale;

  if (spec.scale_source == ScaleSource::kConfiguredVariance) {
    if (!(spec.configured_component_variance > 0.0))
      throw std::invalid_argument("configured component variance must be positive");
    const double step = std::sqrt(spec.configured_component_variance) * scale;
    out.step_re.setConstant(step);
    out.step_im.setConstant(step);
  } else if (spec.per_antenna) {
    for (Eigen::Index m = 0; m < rows; ++m) {
      const double re2 = y.row(m).real().squaredNorm() / static_cast<double>(cols);
      const double im2 = y.row(m).imag().squaredNorm() / static_cast<double>(cols);
      out.step_re[m] = std::sqrt(re2) * scale;
      out.step_im[m] = std::sqrt(im2) * scale;
    }
  } else {
    const double n = static_cast<double>(y.size());
    const double re2 = y.real().squaredNorm() / n;
    const double im2 = y.imag().squaredNorm() / n;
    out.step_re.setConstant(std::sqrt(re2) * scale);
    out.step_im.setConstant(std::sqrt(im2) * scale);
  }
  for (Eigen::Index m = 0; m < rows; ++m) {
    if (!(out.step_re[m] > 0.0) || !(out.step_im[m] > 0.0))
      throw std::invalid_argument("quantizer step is zero: block component has no energy");
  }

  out.values.resize(rows, cols);
  for (Eigen::Index n = 0; n < cols; ++n)
    for (Eigen::Index m = 0; m < rows; ++m) {
      const Complex v = y(m, n);
      out.values(m, n) = {quantize_component(v.real(), out.step_re[m], spec.bits),
                          quantize_component(v.imag(), out.step_im[m], spec.bits)};
    }
  return out;
}

double quantization_distortion(const CMatrix& x, const CMatrix& q) {
  if (x.rows() != q.rows() || x.cols() != q.cols())
    throw std::invalid_argument("distortion: shape mismatch");
  return (x - q).squaredNorm() / x.squaredNorm();
}

}  // namespace jcr
