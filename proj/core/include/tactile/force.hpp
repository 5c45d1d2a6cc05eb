#pragma once

// Jacobian, kinesthetic feedback torque tau = J^T F and the spring contact
// force used by the slave side.

#include <array>

#include "tactile/kinematics.hpp"

namespace tactile {

struct ForceVector {
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;

  friend bool operator==(const ForceVector&, const ForceVector&) = default;
};

struct TorqueVector {
  double tau1 = 0.0;
  double tau2 = 0.0;
  double tau3 = 0.0;

  friend bool operator==(const TorqueVector&, const TorqueVector&) = default;
};

/// Row = Cartesian coordinate (x, y, z), column = joint.
struct JacobianMatrix {
  std::array<std::array<double, 3>, 3> j{};

  double operator()(int row, int col) const { return j[row][col]; }
};

/// Spring coefficients in N/m, nonnegative.
struct Elasticity {
  double hx = 0.0;
  double hy = 0.0;
  double hz = 0.0;

  /// Throws ConfigError on negative or non-finite coefficients.
  void validate() const;

  friend bool operator==(const Elasticity&, const Elasticity&) = default;
};

/// J21 is identically zero and never computed.
JacobianMatrix jacobian(const JointAngles& q, const DeviceGeometry& g,
                        const Backend& b);

/// tau = J^T F. The hybrid backend evaluates the nine entries first and then
/// the three dot products, accumulating in a fixed order (J1j*Fx first).
TorqueVector kinesthetic_feedback(const JointAngles& q, const ForceVector& f,
                                  const DeviceGeometry& g, const Backend& b);

/// F_i = h_i * (obj_i - env_i), in double.
ForceVector feedback_force(const CartesianPosition& obj,
                           const CartesianPosition& env, const Elasticity& h);

/// Same law evaluated in binary32 for the hybrid backend: one subtractor and
/// one multiplier per axis.
ForceVector feedback_force(const CartesianPosition& obj,
                           const CartesianPosition& env, const Elasticity& h,
                           const Backend& b);

}  // namespace tactile
