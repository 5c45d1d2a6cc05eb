#include "tactile/numerics.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace tactile::numerics {
namespace {

// Symmetric round-half-away shift, so magnitudes and their negations round
// identically.
std::int64_t round_shift(std::int64_t v, int shift) {
  if (shift <= 0) return v << -shift;
  const std::int64_t half = std::int64_t{1} << (shift - 1);
  return v >= 0 ? (v + half) >> shift : -((-v + half) >> shift);
}

std::int64_t saturate(std::int64_t raw, const QFormat& fmt) {
  if (raw > fmt.raw_max()) return fmt.raw_max();
  if (raw < fmt.raw_min()) return fmt.raw_min();
  return raw;
}

// Re-express `v` with `frac` fractional bits.
std::int64_t to_working(const FixedValue& v, int frac) {
  return round_shift(v.raw, v.format.frac_bits() - frac);
}

FixedValue from_working(std::int64_t w, const CordicConfig& cfg) {
  return {saturate(round_shift(w, cfg.guard_bits()), cfg.format()),
          cfg.format()};
}

std::int64_t scaled_constant(double value, int frac) {
  return std::llround(std::ldexp(value, frac));
}

}  // namespace

// ---------------------------------------------------------------------------
// QFormat

QFormat::QFormat(int total_bits, int frac_bits)
    : total_bits_(total_bits), frac_bits_(frac_bits) {
  if (total_bits < 2 || total_bits > 64) {
    throw std::invalid_argument("QFormat: total bits must be in [2, 64], got " +
                                std::to_string(total_bits));
  }
  if (frac_bits < 0 || frac_bits > total_bits - 1) {
    throw std::invalid_argument(
        "QFormat: fractional bits must be in [0, V-1], got " +
        std::to_string(frac_bits));
  }
}

QFormat QFormat::parse(std::string_view text) {
  auto fail = [&]() -> QFormat {
    throw std::invalid_argument("QFormat: expected \"sV.N\", got \"" +
                                std::string(text) + "\"");
  };
  if (text.size() < 4 || text.front() != 's') return fail();
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) return fail();
  int v = 0;
  int n = 0;
  const auto vs = text.substr(1, dot - 1);
  const auto ns = text.substr(dot + 1);
  auto [p1, e1] = std::from_chars(vs.data(), vs.data() + vs.size(), v);
  auto [p2, e2] = std::from_chars(ns.data(), ns.data() + ns.size(), n);
  if (e1 != std::errc{} || e2 != std::errc{} || p1 != vs.data() + vs.size() ||
      p2 != ns.data() + ns.size() || vs.empty() || ns.empty()) {
    return fail();
  }
  return QFormat(v, n);
}

std::int64_t QFormat::raw_max() const {
  if (total_bits_ == 64) return std::numeric_limits<std::int64_t>::max();
  return (std::int64_t{1} << (total_bits_ - 1)) - 1;
}

std::int64_t QFormat::raw_min() const {
  if (total_bits_ == 64) return std::numeric_limits<std::int64_t>::min();
  return -(std::int64_t{1} << (total_bits_ - 1));
}

double QFormat::lsb() const { return std::ldexp(1.0, -frac_bits_); }

double QFormat::min_value() const {
  return std::ldexp(static_cast<double>(raw_min()), -frac_bits_);
}

double QFormat::max_value() const {
  return std::ldexp(static_cast<double>(raw_max()), -frac_bits_);
}

std::string QFormat::to_string() const {
  return "s" + std::to_string(total_bits_) + "." + std::to_string(frac_bits_);
}

double FixedValue::real() const {
  return std::ldexp(static_cast<double>(raw), -format.frac_bits());
}

// ---------------------------------------------------------------------------
// Converters

FixedValue float_to_fixed(double x, QFormat fmt, Rounding mode) {
  if (std::isnan(x)) return {0, fmt};
  const double scaled = std::ldexp(x, fmt.frac_bits());
  const double q = mode == Rounding::kNearestEven ? std::nearbyint(scaled)
                                                  : std::floor(scaled);
  // q is integral, so it fits iff -2^(V-1) <= q < 2^(V-1).
  const double limit = std::ldexp(1.0, fmt.total_bits() - 1);
  if (q >= limit) return {fmt.raw_max(), fmt};
  if (q < -limit) return {fmt.raw_min(), fmt};
  return {static_cast<std::int64_t>(q), fmt};
}

float fixed_to_float(const FixedValue& v) {
  return static_cast<float>(v.real());
}

// ---------------------------------------------------------------------------
// CORDIC

CordicConfig::CordicConfig(int iterations, QFormat format, int guard_bits)
    : iterations_(iterations), format_(format), guard_bits_(guard_bits) {
  if (iterations < 1 || iterations > 62) {
    throw std::invalid_argument("CordicConfig: iterations must be in [1, 62]");
  }
  if (guard_bits < 0 || format.total_bits() + guard_bits > 48) {
    throw std::invalid_argument(
        "CordicConfig: need guard_bits >= 0 and V + guard_bits <= 48");
  }
  const int w = working_frac_bits();
  gain_ = 1.0;
  angle_table_.reserve(static_cast<std::size_t>(iterations));
  for (int i = 0; i < iterations; ++i) {
    gain_ /= std::sqrt(1.0 + std::ldexp(1.0, -2 * i));
    angle_table_.push_back(scaled_constant(std::atan(std::ldexp(1.0, -i)), w));
  }
  gain_raw_ = scaled_constant(gain_, w);
  pi_raw_ = scaled_constant(std::numbers::pi, w);
  half_pi_raw_ = scaled_constant(std::numbers::pi / 2, w);
}

CordicConfig CordicConfig::defaults() {
  return CordicConfig(16, QFormat::s16_13(), 4);
}

SinCos cordic_sincos(const FixedValue& angle, const CordicConfig& cfg) {
  const std::int64_t pi = cfg.pi_raw();
  const std::int64_t two_pi = 2 * pi;

  std::int64_t z = to_working(angle, cfg.working_frac_bits());
  bool negate_sin = z < 0;
  bool negate_cos = false;
  z = z < 0 ? -z : z;

  // Wrap |a| into [0, pi], then fold into [0, pi/2].
  z %= two_pi;
  if (z > pi) {
    z = two_pi - z;
    negate_sin = !negate_sin;
  }
  if (z > cfg.half_pi_raw()) {
    z = pi - z;
    negate_cos = true;
  }

  std::int64_t x = cfg.gain_raw();
  std::int64_t y = 0;
  const auto& table = cfg.angle_table();
  for (int i = 0; i < cfg.iterations(); ++i) {
    const std::int64_t dx = y >> i;
    const std::int64_t dy = x >> i;
    if (z >= 0) {
      x -= dx;
      y += dy;
      z -= table[static_cast<std::size_t>(i)];
    } else {
      x += dx;
      y -= dy;
      z += table[static_cast<std::size_t>(i)];
    }
  }

  SinCos out{from_working(y, cfg), from_working(x, cfg)};
  if (negate_sin) out.sin.raw = saturate(-out.sin.raw, cfg.format());
  if (negate_cos) out.cos.raw = saturate(-out.cos.raw, cfg.format());
  return out;
}

FixedValue cordic_atan2(const FixedValue& y, const FixedValue& x,
                        const CordicConfig& cfg) {
  const int w = cfg.working_frac_bits();
  std::int64_t xw = to_working(x, w);
  std::int64_t yw = to_working(y, w);
  if (xw == 0 && yw == 0) return {0, cfg.format()};

  const bool x_negative = xw < 0;
  const bool y_negative = yw < 0;
  xw = x_negative ? -xw : xw;
  yw = y_negative ? -yw : yw;

  std::int64_t theta = 0;
  if (yw == 0) {
    theta = 0;
  } else if (xw == 0) {
    theta = cfg.half_pi_raw();
  } else {
    const auto& table = cfg.angle_table();
    for (int i = 0; i < cfg.iterations(); ++i) {
      const std::int64_t dx = yw >> i;
      const std::int64_t dy = xw >> i;
      if (yw > 0) {
        xw += dx;
        yw -= dy;
        theta += table[static_cast<std::size_t>(i)];
      } else {
        xw -= dx;
        yw += dy;
        theta -= table[static_cast<std::size_t>(i)];
      }
    }
  }

  if (x_negative) theta = cfg.pi_raw() - theta;
  if (y_negative) theta = -theta;
  return from_working(theta, cfg);
}

FixedValue cordic_acos(const FixedValue& t, const CordicConfig& cfg) {
  const float tf = std::clamp(fixed_to_float(t), -1.0f, 1.0f);
  const float s = sqrt32((1.0f - tf) * (1.0f + tf));
  return cordic_atan2(float_to_fixed(s, cfg.format()),
                      float_to_fixed(tf, cfg.format()), cfg);
}

// ---------------------------------------------------------------------------
// Square root

float sqrt32(float x) {
  if (std::isnan(x) || x == 0.0f) return x;
  if (x < 0.0f) throw NegativeRadicand(x);
  if (std::isinf(x)) return x;

  const auto bits = std::bit_cast<std::uint32_t>(x);
  const int biased = static_cast<int>((bits >> 23) & 0xFF);
  std::uint64_t m = bits & 0x7FFFFF;
  int e = 0;  // x == m * 2^e
  if (biased == 0) {
    // Normalize subnormals so the root below keeps a full significand.
    e = -149;
    while (m < 0x800000) {
      m <<= 1;
      --e;
    }
  } else {
    m |= 0x800000;
    e = biased - 150;
  }
  if (e & 1) {
    m <<= 1;
    e -= 1;
  }

  // sqrt(m << 26) carries at least 25 significant bits plus a remainder.
  std::uint64_t radicand = m << 26;
  e -= 26;
  std::uint64_t root = 0;
  std::uint64_t bit = std::uint64_t{1} << 62;
  while (bit > radicand) bit >>= 2;
  while (bit != 0) {
    if (radicand >= root + bit) {
      radicand -= root + bit;
      root = (root >> 1) + bit;
    } else {
      root >>= 1;
    }
    bit >>= 2;
  }
  const bool sticky = radicand != 0;

  int exp = e / 2;
  // m in [2^23, 2^25) puts the root in [2^24, 2^26): one or two bits to drop.
  const int extra = std::bit_width(root) - 24;
  const std::uint64_t low = root & ((std::uint64_t{1} << extra) - 1);
  const std::uint64_t half = std::uint64_t{1} << (extra - 1);
  root >>= extra;
  exp += extra;
  if (low > half || (low == half && (sticky || (root & 1)))) ++root;
  return std::ldexp(static_cast<float>(root), exp);
}

// ---------------------------------------------------------------------------
// TFB

std::pair<float, float> tfb_sincos(float angle, const CordicConfig& cfg) {
  const auto sc = cordic_sincos(float_to_fixed(angle, cfg.format()), cfg);
  return {fixed_to_float(sc.sin), fixed_to_float(sc.cos)};
}

float tfb_atan2(float y, float x, const CordicConfig& cfg) {
  const float m = std::max(std::fabs(y), std::fabs(x));
  if (m == 0.0f) return 0.0f;
  int e = 0;
  std::frexp(m, &e);
  const float ys = std::ldexp(y, 1 - e);
  const float xs = std::ldexp(x, 1 - e);
  return fixed_to_float(cordic_atan2(float_to_fixed(ys, cfg.format()),
                                     float_to_fixed(xs, cfg.format()), cfg));
}

float tfb_acos(float t, const CordicConfig& cfg) {
  const float tc = std::clamp(t, -1.0f, 1.0f);
  const float s = sqrt32((1.0f - tc) * (1.0f + tc));
  return tfb_atan2(s, tc, cfg);
}

}  // namespace tactile::numerics
