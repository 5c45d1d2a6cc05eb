#pragma once

#include <cmath>

#include "tactile/kinematics.hpp"

namespace tactile::detail {

// Sines and cosines of the three joint angles. The hybrid flavour gets each
// pair from one TFB evaluation; the circuits instantiate separate TFBs per
// term but they are deterministic, so sharing them changes nothing.
template <typename T>
struct JointTrig {
  T s1, c1, s2, c2, s3, c3;
};

inline JointTrig<double> oracle_trig(const JointAngles& q) {
  return {std::sin(q.theta1), std::cos(q.theta1), std::sin(q.theta2),
          std::cos(q.theta2), std::sin(q.theta3), std::cos(q.theta3)};
}

inline JointTrig<float> hybrid_trig(const JointAngles& q,
                                    const numerics::CordicConfig& cfg) {
  const auto [s1, c1] = numerics::tfb_sincos(static_cast<float>(q.theta1), cfg);
  const auto [s2, c2] = numerics::tfb_sincos(static_cast<float>(q.theta2), cfg);
  const auto [s3, c3] = numerics::tfb_sincos(static_cast<float>(q.theta3), cfg);
  return {s1, c1, s2, c2, s3, c3};
}

// Link constants in the datapath's precision.
template <typename T>
struct Links {
  T l1, l2, l3, l4;
  explicit Links(const DeviceGeometry& g)
      : l1(static_cast<T>(g.l1)),
        l2(static_cast<T>(g.l2)),
        l3(static_cast<T>(g.l3)),
        l4(static_cast<T>(g.l4)) {}
};

}  // namespace tactile::detail
