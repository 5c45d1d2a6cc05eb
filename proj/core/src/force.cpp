#include "tactile/force.hpp"

#include <cmath>
#include <string>

#include "joint_trig.hpp"

namespace tactile {
namespace {

JacobianMatrix oracle_jacobian(const JointAngles& q, const DeviceGeometry& g) {
  const auto t = detail::oracle_trig(q);
  JacobianMatrix m;
  m.j[0] = {-t.c1 * (g.l2 * t.s3 + g.l1 * t.c2), g.l1 * t.s1 * t.s2,
            -g.l2 * t.s1 * t.c3};
  m.j[1] = {0.0, g.l1 * t.c2, g.l2 * t.s3};
  m.j[2] = {-g.l1 * t.c2 * t.s1 - g.l2 * t.s3 * t.s1, -g.l1 * t.s2 * t.c1,
            g.l2 * t.c3 * t.c1};
  return m;
}

// Float entries in the circuit's operation order.
std::array<std::array<float, 3>, 3> hybrid_entries(
    const JointAngles& q, const DeviceGeometry& g,
    const numerics::CordicConfig& cfg) {
  const auto t = detail::hybrid_trig(q, cfg);
  const detail::Links<float> k(g);
  std::array<std::array<float, 3>, 3> e{};
  e[0][0] = -(t.c1 * (k.l2 * t.s3 + k.l1 * t.c2));
  e[0][1] = (k.l1 * t.s1) * t.s2;
  e[0][2] = -((k.l2 * t.s1) * t.c3);
  e[1][0] = 0.0f;
  e[1][1] = k.l1 * t.c2;
  e[1][2] = k.l2 * t.s3;
  e[2][0] = -((k.l1 * t.c2) * t.s1) + -((k.l2 * t.s3) * t.s1);
  e[2][1] = -((k.l1 * t.s2) * t.c1);
  e[2][2] = (k.l2 * t.c3) * t.c1;
  return e;
}

}  // namespace

void Elasticity::validate() const {
  auto check = [](double v, const char* name) {
    if (!(std::isfinite(v) && v >= 0.0)) {
      throw ConfigError(std::string("elasticity.") + name,
                        "coefficient must be finite and nonnegative");
    }
  };
  check(hx, "hx");
  check(hy, "hy");
  check(hz, "hz");
}

JacobianMatrix jacobian(const JointAngles& q, const DeviceGeometry& g,
                        const Backend& b) {
  if (!b.is_hybrid()) return oracle_jacobian(q, g);
  const auto e = hybrid_entries(q, g, b.cordic());
  JacobianMatrix m;
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m.j[r][c] = e[r][c];
  }
  return m;
}

TorqueVector kinesthetic_feedback(const JointAngles& q, const ForceVector& f,
                                  const DeviceGeometry& g, const Backend& b) {
  if (!b.is_hybrid()) {
    const auto m = oracle_jacobian(q, g);
    return {m.j[0][0] * f.fx + m.j[2][0] * f.fz,
            m.j[0][1] * f.fx + m.j[1][1] * f.fy + m.j[2][1] * f.fz,
            m.j[0][2] * f.fx + m.j[1][2] * f.fy + m.j[2][2] * f.fz};
  }
  const auto e = hybrid_entries(q, g, b.cordic());
  const auto fx = static_cast<float>(f.fx);
  const auto fy = static_cast<float>(f.fy);
  const auto fz = static_cast<float>(f.fz);
  // J21 has no circuit, so tau1 is a two-term sum.
  const float tau1 = e[0][0] * fx + e[2][0] * fz;
  const float tau2 = (e[0][1] * fx + e[1][1] * fy) + e[2][1] * fz;
  const float tau3 = (e[0][2] * fx + e[1][2] * fy) + e[2][2] * fz;
  return {tau1, tau2, tau3};
}

ForceVector feedback_force(const CartesianPosition& obj,
                           const CartesianPosition& env, const Elasticity& h) {
  return {h.hx * (obj.x - env.x), h.hy * (obj.y - env.y),
          h.hz * (obj.z - env.z)};
}

ForceVector feedback_force(const CartesianPosition& obj,
                           const CartesianPosition& env, const Elasticity& h,
                           const Backend& b) {
  if (!b.is_hybrid()) return feedback_force(obj, env, h);
  auto axis = [](double hi, double o, double e) {
    return static_cast<float>(hi) *
           (static_cast<float>(o) - static_cast<float>(e));
  };
  return {axis(h.hx, obj.x, env.x), axis(h.hy, obj.y, env.y),
          axis(h.hz, obj.z, env.z)};
}

}  // namespace tactile
