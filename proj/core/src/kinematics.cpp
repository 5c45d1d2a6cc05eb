#include "tactile/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "joint_trig.hpp"

namespace tactile {
namespace {

using detail::Links;

template <typename T>
T checked_acos_argument(T arg, const char* which) {
  // Written so that NaN (r == 0) also fails.
  if (!(std::abs(arg) <= T(1) + static_cast<T>(kReachTolerance))) {
    std::ostringstream os;
    os << which << " argument " << arg << " outside [-1, 1]";
    throw Unreachable(os.str());
  }
  return std::clamp(arg, T(-1), T(1));
}

CartesianPosition oracle_fk(const JointAngles& q, const DeviceGeometry& g) {
  const auto t = detail::oracle_trig(q);
  return {-t.s1 * (g.l2 * t.s3 + g.l1 * t.c2),
          -g.l2 * t.c3 + g.l1 * t.s2 + g.l3,
          g.l2 * t.c1 * t.s3 + g.l1 * t.c1 * t.c2 - g.l4};
}

CartesianPosition hybrid_fk(const JointAngles& q, const DeviceGeometry& g,
                            const numerics::CordicConfig& cfg) {
  const auto t = detail::hybrid_trig(q, cfg);
  const Links<float> k(g);

  // x: three multipliers, one adder, one inverter.
  const float reach = k.l2 * t.s3 + k.l1 * t.c2;
  const float x = -(t.s1 * reach);

  // y: two multipliers, two adders, one inverter.
  const float y = (-(k.l2 * t.c3) + k.l1 * t.s2) + k.l3;

  // z: four multipliers, two adders, one inverter (on L4).
  const float a = (k.l2 * t.c1) * t.s3;
  const float b = (k.l1 * t.c1) * t.c2;
  const float z = (a + b) + (-k.l4);

  return {x, y, z};
}

IkIntermediates oracle_intermediates(const CartesianPosition& p,
                                     const DeviceGeometry& g) {
  const double zz = p.z + g.l4;
  const double yy = p.y - g.l3;
  IkIntermediates m;
  m.big_r = std::sqrt(p.x * p.x + zz * zz);
  m.r = std::sqrt(p.x * p.x + zz * zz + yy * yy);
  m.gamma = std::acos(checked_acos_argument(
      (g.l1 * g.l1 - g.l2 * g.l2 + m.r * m.r) / (2.0 * g.l1 * m.r), "gamma"));
  m.beta = std::atan2(yy, m.big_r);
  m.alpha = std::acos(checked_acos_argument(
      (g.l1 * g.l1 + g.l2 * g.l2 - m.r * m.r) / (2.0 * g.l1 * g.l2), "alpha"));
  return m;
}

// Stage 1 of the IK circuit: R and r (theta1 runs alongside).
struct HybridRadii {
  float big_r;
  float r;
};

HybridRadii hybrid_radii(float x, float y, float z, const Links<float>& k) {
  const float zz = z + k.l4;
  const float big_r = numerics::sqrt32(x * x + zz * zz);
  const float yy = y + (-k.l3);
  const float r = numerics::sqrt32((x * x + zz * zz) + yy * yy);
  return {big_r, r};
}

// Stage 2: gamma, beta, alpha.
IkIntermediates hybrid_angles(float y, HybridRadii radii, const Links<float>& k,
                              const numerics::CordicConfig& cfg) {
  const float r = radii.r;
  const float l1_sq = k.l1 * k.l1;
  const float l2_sq = k.l2 * k.l2;
  const float r_sq = r * r;

  const float gamma_arg = (l1_sq - l2_sq + r_sq) / ((2.0f * k.l1) * r);
  const float alpha_arg = (l1_sq + l2_sq + (-r_sq)) / ((2.0f * k.l1) * k.l2);

  IkIntermediates m;
  m.big_r = radii.big_r;
  m.r = r;
  m.gamma = numerics::tfb_acos(checked_acos_argument(gamma_arg, "gamma"), cfg);
  m.beta = numerics::tfb_atan2(y + (-k.l3), radii.big_r, cfg);
  m.alpha = numerics::tfb_acos(checked_acos_argument(alpha_arg, "alpha"), cfg);
  return m;
}

}  // namespace

void DeviceGeometry::validate() const {
  auto check = [](double v, const char* name) {
    if (!(std::isfinite(v) && v > 0.0)) {
      throw ConfigError(std::string("geometry.") + name,
                        "link length must be finite and positive");
    }
  };
  check(l1, "l1");
  check(l2, "l2");
  check(l3, "l3");
  check(l4, "l4");
}

CartesianPosition forward_kinematics(const JointAngles& q,
                                     const DeviceGeometry& g,
                                     const Backend& b) {
  return b.is_hybrid() ? hybrid_fk(q, g, b.cordic()) : oracle_fk(q, g);
}

IkIntermediates ik_intermediates(const CartesianPosition& p,
                                 const DeviceGeometry& g, const Backend& b) {
  if (!b.is_hybrid()) return oracle_intermediates(p, g);
  const Links<float> k(g);
  const auto x = static_cast<float>(p.x);
  const auto y = static_cast<float>(p.y);
  const auto z = static_cast<float>(p.z);
  return hybrid_angles(y, hybrid_radii(x, y, z, k), k, b.cordic());
}

JointAngles inverse_kinematics(const CartesianPosition& p,
                               const DeviceGeometry& g, const Backend& b) {
  if (!b.is_hybrid()) {
    const auto m = oracle_intermediates(p, g);
    const double theta1 = -std::atan2(p.x, p.z + g.l4);
    const double theta2 = m.gamma + m.beta;
    return {theta1, theta2, theta2 + m.alpha - std::numbers::pi / 2};
  }

  const Links<float> k(g);
  const auto& cfg = b.cordic();
  const auto x = static_cast<float>(p.x);
  const auto y = static_cast<float>(p.y);
  const auto z = static_cast<float>(p.z);

  const float theta1 = -numerics::tfb_atan2(x, z + k.l4, cfg);
  const auto radii = hybrid_radii(x, y, z, k);
  const auto m = hybrid_angles(y, radii, k, cfg);

  const float theta2 = static_cast<float>(m.gamma) + static_cast<float>(m.beta);
  const float theta3 = (theta2 + static_cast<float>(m.alpha)) +
                       (-std::numbers::pi_v<float> / 2.0f);
  return {theta1, theta2, theta3};
}

}  // namespace tactile
