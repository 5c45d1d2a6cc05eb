#pragma once

// Closed-form kinematics of the 3-DoF PHANToM Omni.
//
// Two interchangeable backends evaluate the same equations:
//   * Oracle: IEEE double throughout, libm trigonometry.
//   * Hybrid: binary32 datapath with every trigonometric term produced by
//     the fixed-point CORDIC TFB, operations ordered like the hardware
//     circuits (one float op per adder/multiplier/inverter in the figure).

#include <utility>

#include "tactile/numerics.hpp"

namespace tactile {

/// Link lengths in meters.
struct DeviceGeometry {
  double l1 = 0.135;
  double l2 = 0.135;
  double l3 = 0.025;
  double l4 = 0.135 + 0.035;

  /// Throws ConfigError unless all lengths are finite and positive.
  void validate() const;
};

struct JointAngles {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;

  friend bool operator==(const JointAngles&, const JointAngles&) = default;
};

struct CartesianPosition {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const CartesianPosition&,
                         const CartesianPosition&) = default;
};

struct IkIntermediates {
  double big_r = 0.0;  // distance from the first-joint axis, sqrt(x^2 + (z+L4)^2)
  double r = 0.0;      // shoulder-to-tool distance
  double gamma = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
};

enum class BackendKind { kOracle, kHybrid };

class Backend {
 public:
  static Backend oracle() {
    return Backend(BackendKind::kOracle, numerics::CordicConfig::defaults());
  }
  static Backend hybrid(
      numerics::CordicConfig cfg = numerics::CordicConfig::defaults()) {
    return Backend(BackendKind::kHybrid, std::move(cfg));
  }

  BackendKind kind() const { return kind_; }
  bool is_hybrid() const { return kind_ == BackendKind::kHybrid; }
  /// Meaningful only for the hybrid backend.
  const numerics::CordicConfig& cordic() const { return cordic_; }
  const char* name() const { return is_hybrid() ? "hybrid" : "oracle"; }

 private:
  Backend(BackendKind kind, numerics::CordicConfig cfg)
      : kind_(kind), cordic_(std::move(cfg)) {}

  BackendKind kind_;
  numerics::CordicConfig cordic_;
};

/// Tolerance on acos arguments: |arg| <= 1 + kReachTolerance is clamped,
/// anything beyond raises Unreachable.
inline constexpr double kReachTolerance = 1e-6;

CartesianPosition forward_kinematics(const JointAngles& q,
                                     const DeviceGeometry& g, const Backend& b);

IkIntermediates ik_intermediates(const CartesianPosition& p,
                                 const DeviceGeometry& g, const Backend& b);

/// theta1 = -atan2(x, z + L4), theta2 = gamma + beta,
/// theta3 = theta2 + alpha - pi/2. Throws Unreachable outside the workspace.
JointAngles inverse_kinematics(const CartesianPosition& p,
                               const DeviceGeometry& g, const Backend& b);

}  // namespace tactile
