#pragma once

// Software model of the hybrid number system used by the haptic hardware
// modules: signed Q-format fixed point, the float <-> fixed converters that
// sit at the boundary of the trigonometric function block (TFB), the CORDIC
// kernels inside it, and the single-precision square-root sub-circuit.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tactile/errors.hpp"

namespace tactile::numerics {

/// Signed fixed-point format `[sV.N]`: V total bits, N of them fractional.
class QFormat {
 public:
  /// Throws std::invalid_argument unless 2 <= V <= 64 and 0 <= N <= V-1.
  QFormat(int total_bits, int frac_bits);

  /// Parses the literal form used in config files, e.g. "s16.13".
  static QFormat parse(std::string_view text);
  static QFormat s16_13() { return QFormat(16, 13); }

  int total_bits() const { return total_bits_; }
  int frac_bits() const { return frac_bits_; }
  bool is_signed() const { return true; }

  std::int64_t raw_min() const;
  std::int64_t raw_max() const;
  double lsb() const;
  double min_value() const;
  double max_value() const;

  std::string to_string() const;

  friend bool operator==(const QFormat&, const QFormat&) = default;

 private:
  int total_bits_;
  int frac_bits_;
};

struct FixedValue {
  std::int64_t raw = 0;
  QFormat format = QFormat::s16_13();

  /// raw / 2^N, exact in double for every format up to 53 significant bits.
  double real() const;
};

enum class Rounding {
  kNearestEven,  // default F2FP behaviour
  kTruncate,     // toward negative infinity, for sensitivity studies
};

/// F2FP: quantize then saturate. NaN maps to zero.
FixedValue float_to_fixed(double x, QFormat fmt,
                          Rounding mode = Rounding::kNearestEven);

/// FP2F: raw / 2^N rounded to binary32 (exact for formats with V <= 25).
float fixed_to_float(const FixedValue& v);

/// Circular CORDIC parameters. The internal datapath carries
/// `format.frac_bits() + guard_bits` fractional bits in 64-bit registers and
/// rounds back to `format` at the output.
class CordicConfig {
 public:
  CordicConfig(int iterations, QFormat format, int guard_bits);

  /// 16 iterations, [s16.13], 4 guard bits.
  static CordicConfig defaults();

  int iterations() const { return iterations_; }
  const QFormat& format() const { return format_; }
  int guard_bits() const { return guard_bits_; }
  int working_frac_bits() const { return format_.frac_bits() + guard_bits_; }

  /// Gain compensation K = prod_{i<iterations} 1/sqrt(1 + 2^-2i).
  double gain() const { return gain_; }

  // Working-precision constants, scaled by 2^working_frac_bits().
  const std::vector<std::int64_t>& angle_table() const { return angle_table_; }
  std::int64_t gain_raw() const { return gain_raw_; }
  std::int64_t pi_raw() const { return pi_raw_; }
  std::int64_t half_pi_raw() const { return half_pi_raw_; }

  friend bool operator==(const CordicConfig& a, const CordicConfig& b) {
    return a.iterations_ == b.iterations_ && a.format_ == b.format_ &&
           a.guard_bits_ == b.guard_bits_;
  }

 private:
  int iterations_;
  QFormat format_;
  int guard_bits_;
  double gain_;
  std::vector<std::int64_t> angle_table_;
  std::int64_t gain_raw_;
  std::int64_t pi_raw_;
  std::int64_t half_pi_raw_;
};

struct SinCos {
  FixedValue sin;
  FixedValue cos;
};

/// Rotation-mode CORDIC. Any representable angle is accepted; it is wrapped
/// into [-pi, pi] and folded into the first quadrant internally, so
/// sin(-a) == -sin(a) and cos(-a) == cos(a) hold bit-exactly.
SinCos cordic_sincos(const FixedValue& angle, const CordicConfig& cfg);

/// Vectoring-mode CORDIC. Result in (-pi, pi]; atan2(0, 0) is defined as 0.
FixedValue cordic_atan2(const FixedValue& y, const FixedValue& x,
                        const CordicConfig& cfg);

/// acos(t) as atan2(sqrt(1 - t^2), t); t is clamped to [-1, 1] first.
/// Accuracy degrades near |t| = 1 where the sqrt argument cancels.
FixedValue cordic_acos(const FixedValue& t, const CordicConfig& cfg);

/// Correctly rounded binary32 square root computed with a digit-recurrence
/// on the significand. Throws NegativeRadicand for x < 0 (but not -0).
float sqrt32(float x);

// TFB entry points: binary32 in, F2FP, CORDIC, FP2F, binary32 out.

std::pair<float, float> tfb_sincos(float angle, const CordicConfig& cfg);

/// Both operands are scaled by a common power of two so the larger magnitude
/// lies in [1, 2) before conversion; atan2 is scale-invariant and the scaling
/// is exact in binary32.
float tfb_atan2(float y, float x, const CordicConfig& cfg);

float tfb_acos(float t, const CordicConfig& cfg);

}  // namespace tactile::numerics
