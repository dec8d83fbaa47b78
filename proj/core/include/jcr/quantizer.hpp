#pragma once

#include <optional>
#include <utility>

#include "jcr/types.hpp"

namespace jcr {

// ADC resolution per real/imaginary component. Infinite means no
// quantization at all.
class AdcBits {
 public:
  static constexpr int kMaxBits = 12;

  constexpr AdcBits() = default;
  // Throws std::invalid_argument outside 1..kMaxBits.
  explicit AdcBits(int bits);
  static constexpr AdcBits infinite() { return AdcBits(Tag{}); }

  bool is_infinite() const { return bits_ == 0; }
  int value() const;  // throws for infinite
  // Output levels per component on one side of zero: 2^(b-1).
  long levels_per_side() const;
  // "1".."12" or "inf".
  std::string to_string() const;
  static AdcBits parse(const std::string& text);

  friend bool operator==(AdcBits a, AdcBits b) { return a.bits_ == b.bits_; }
  // Infinite compares greater than every finite resolution.
  friend bool operator<(AdcBits a, AdcBits b) {
    const int ka = a.is_infinite() ? 1 << 20 : a.bits_;
    const int kb = b.is_infinite() ? 1 << 20 : b.bits_;
    return ka < kb;
  }

 private:
  struct Tag {};
  explicit constexpr AdcBits(Tag) : bits_(0) {}
  int bits_ = 0;
};

// Step (in units of the component standard deviation) minimizing the mean
// square error of a b-bit uniform mid-rise quantizer on a standard normal
// input. Computed once per b and cached. Throws outside 1..12.
double optimal_step(int bits);

// E[(x - Q(x))^2] for x ~ N(0, 1) with step `step`, by panel-wise
// Gauss-Legendre quadrature over the quantizer cells.
double gaussian_quantizer_mse(double step, int bits);

// Uniform mid-rise quantization of one real value with step `step`:
// q = sign(x) (min(ceil(|x| / step), L) - 1/2) step, L = 2^(b-1).
// Ties at cell boundaries go to the lower cell; zero maps to +step/2.
double quantize_component(double x, double step, AdcBits bits);

// Cell [lo, up] of quantizer output `q`. Outermost cells extend to
// +/-infinity. Throws std::invalid_argument when q is not an output level
// (relative tolerance 1e-6 on the level index).
std::pair<double, double> quantizer_cell(double q, double step, AdcBits bits);

enum class ScaleSource {
  kEmpiricalMoment,     // component RMS of the block being quantized
  kConfiguredVariance,  // component variance supplied by the caller
};

struct QuantizerSpec {
  AdcBits bits = AdcBits::infinite();
  // Step per component standard deviation. Defaults to optimal_step(bits).
  std::optional<double> step_scale;
  ScaleSource scale_source = ScaleSource::kEmpiricalMoment;
  // Per-component variance E[Re(x)^2] (= E[Im(x)^2]) for kConfiguredVariance.
  double configured_component_variance = 0.0;
  // Estimate the moments per antenna row instead of over the whole block.
  bool per_antenna = false;

  double resolved_step_scale() const;
};

struct QuantizedBlock {
  CMatrix values;   // M x N
  AdcBits bits;
  RVector step_re;  // per antenna row; all equal in per-block mode
  RVector step_im;
  double step_scale = 0.0;  // steps divided by the component RMS
};

// Applies the quantizer component-wise. Infinite bits returns the input
// unchanged (steps reported as zero).
QuantizedBlock quantize(const CMatrix& y, const QuantizerSpec& spec);

// Sample mean of |x - q|^2 / |x|^2 over the block.
double quantization_distortion(const CMatrix& x, const CMatrix& q);

}  // namespace jcr
