#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tactile/kinematics.hpp"
#include "tactile/pipeline.hpp"

using namespace tactile;

namespace {

constexpr double kPi = std::numbers::pi;
const DeviceGeometry kGeom;

// Interior of the workspace: elbow angle at least 0.1 rad from the folded and
// fully extended configurations (acos is ill-conditioned there), and the tool
// at least 2 cm in front of the base axis (behind it, IK returns the other
// base-angle branch).
JointAngles random_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u1(-kPi / 2 + 0.05, kPi / 2 - 0.05);
  std::uniform_real_distribution<double> u2(-0.3, kPi / 2 - 0.05);
  std::uniform_real_distribution<double> ud(-kPi / 2 + 0.1, kPi / 2 - 0.1);
  for (;;) {
    JointAngles q;
    q.theta1 = u1(rng);
    q.theta2 = u2(rng);
    q.theta3 = q.theta2 + ud(rng);
    const double reach =
        0.135 * std::cos(q.theta2) + 0.135 * std::sin(q.theta3);
    if (reach >= 0.02) return q;
  }
}

double max_abs(const JointAngles& a, const JointAngles& b) {
  return std::max({std::abs(a.theta1 - b.theta1),
                   std::abs(a.theta2 - b.theta2),
                   std::abs(a.theta3 - b.theta3)});
}

double dist(const CartesianPosition& a, const CartesianPosition& b) {
  return std::hypot(a.x - b.x, a.y - b.y, a.z - b.z);
}

}  // namespace

TEST(Geometry, Validation) {
  EXPECT_NO_THROW(kGeom.validate());
  DeviceGeometry g;
  g.l2 = -0.1;
  EXPECT_THROW(g.validate(), ConfigError);
  g = DeviceGeometry{};
  g.l4 = std::nan("");
  EXPECT_THROW(g.validate(), ConfigError);
}

TEST(ForwardKinematics, HomePose) {
  const auto p = forward_kinematics({0, 0, 0}, kGeom, Backend::oracle());
  EXPECT_NEAR(p.x, 0.0, 1e-15);
  EXPECT_NEAR(p.y, -0.110, 1e-15);
  EXPECT_NEAR(p.z, -0.035, 1e-15);
}

TEST(ForwardKinematics, FirstJointQuarterTurn) {
  const auto p =
      forward_kinematics({kPi / 2, 0, 0}, kGeom, Backend::oracle());
  EXPECT_NEAR(p.x, -0.135, 1e-15);
  EXPECT_NEAR(p.y, -0.110, 1e-15);
  EXPECT_NEAR(p.z, -0.170, 1e-15);
}

TEST(ForwardKinematics, ZeroBaseAngleGivesZeroX) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    auto q = random_pose(rng);
    q.theta1 = 0.0;
    EXPECT_EQ(forward_kinematics(q, kGeom, Backend::oracle()).x, 0.0);
    EXPECT_EQ(forward_kinematics(q, kGeom, Backend::hybrid()).x, 0.0);
  }
}

// Geometric oracle: the shoulder-to-tool distance follows from the law of
// cosines on the elbow angle, and the base angle from the projection onto
// the x-z plane.
TEST(ForwardKinematics, SatisfiesArmGeometry) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 1000; ++i) {
    const auto q = random_pose(rng);
    const auto p = forward_kinematics(q, kGeom, Backend::oracle());
    const double elbow = q.theta3 - q.theta2 + kPi / 2;
    const double r2 = kGeom.l1 * kGeom.l1 + kGeom.l2 * kGeom.l2 -
                      2 * kGeom.l1 * kGeom.l2 * std::cos(elbow);
    const double dy = p.y - kGeom.l3;
    const double dz = p.z + kGeom.l4;
    EXPECT_NEAR(p.x * p.x + dy * dy + dz * dz, r2, 1e-14);
    EXPECT_NEAR(std::atan2(-p.x, dz), q.theta1, 1e-12);
  }
}

TEST(IkIntermediates, HomePose) {
  const auto m =
      ik_intermediates({0, -0.110, -0.035}, kGeom, Backend::oracle());
  EXPECT_NEAR(m.big_r, 0.135, 1e-12);
  EXPECT_NEAR(m.r, std::sqrt(0.03645), 1e-12);
  EXPECT_NEAR(m.r, 0.190919, 1e-6);
  EXPECT_NEAR(m.gamma, kPi / 4, 1e-12);
  EXPECT_NEAR(m.beta, -kPi / 4, 1e-12);
  EXPECT_NEAR(m.alpha, kPi / 2, 1e-12);
}

TEST(IkIntermediates, DegenerateRadius) {
  for (double dy : {0.2, -0.2}) {
    const CartesianPosition p{0.0, kGeom.l3 + dy, -kGeom.l4};
    for (const auto& b : {Backend::oracle(), Backend::hybrid()}) {
      const auto m = ik_intermediates(p, kGeom, b);
      EXPECT_NEAR(m.big_r, 0.0, 1e-12);
      EXPECT_NEAR(std::abs(m.beta), kPi / 2, 1e-3) << b.name();
      EXPECT_GT(m.beta * dy, 0.0);
    }
  }
}

TEST(IkIntermediates, FullExtension) {
  const CartesianPosition p{0.0, kGeom.l3, kGeom.l1 + kGeom.l2 - kGeom.l4};
  const auto m = ik_intermediates(p, kGeom, Backend::oracle());
  EXPECT_NEAR(m.r, kGeom.l1 + kGeom.l2, 1e-12);
  EXPECT_NEAR(m.alpha, kPi, 1e-6);
  EXPECT_NEAR(m.gamma, 0.0, 1e-6);
}

TEST(InverseKinematics, HomePose) {
  for (const auto& b : {Backend::oracle(), Backend::hybrid()}) {
    const auto q = inverse_kinematics({0, -0.110, -0.035}, kGeom, b);
    const double tol = b.is_hybrid() ? 2e-3 : 1e-12;
    EXPECT_NEAR(q.theta1, 0.0, tol) << b.name();
    EXPECT_NEAR(q.theta2, 0.0, tol) << b.name();
    EXPECT_NEAR(q.theta3, 0.0, tol) << b.name();
  }
}

TEST(InverseKinematics, ZeroXGivesZeroBaseAngle) {
  for (double y : {-0.15, -0.05, 0.1}) {
    for (double z : {-0.10, -0.05, 0.0}) {
      const CartesianPosition p{0.0, y, z};
      EXPECT_EQ(inverse_kinematics(p, kGeom, Backend::oracle()).theta1, 0.0);
      EXPECT_EQ(inverse_kinematics(p, kGeom, Backend::hybrid()).theta1, 0.0);
    }
  }
}

TEST(InverseKinematics, RoundTripExample) {
  const JointAngles q{0.3, 0.2, 0.5};
  const auto p = forward_kinematics(q, kGeom, Backend::oracle());
  const auto back = inverse_kinematics(p, kGeom, Backend::oracle());
  EXPECT_LE(max_abs(back, q), 1e-9);
}

TEST(InverseKinematics, BaseAngleIndependentOfHeight) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-0.05, 0.05);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    const double z = -0.05 + u(rng);
    for (const auto& b : {Backend::oracle(), Backend::hybrid()}) {
      const double t1 = inverse_kinematics({x, -0.10, z}, kGeom, b).theta1;
      const double t2 = inverse_kinematics({x, 0.02, z}, kGeom, b).theta1;
      EXPECT_EQ(t1, t2) << b.name();
    }
  }
}

TEST(InverseKinematics, UnreachableBeyondReach) {
  const CartesianPosition far{0.0, kGeom.l3, 0.30 - kGeom.l4};
  EXPECT_THROW(inverse_kinematics(far, kGeom, Backend::oracle()), Unreachable);
  EXPECT_THROW(inverse_kinematics(far, kGeom, Backend::hybrid()), Unreachable);
  try {
    inverse_kinematics(far, kGeom, Backend::oracle());
  } catch (const Unreachable& e) {
    EXPECT_FALSE(e.sample().has_value());
  }
}

TEST(InverseKinematics, RoundTripProperty) {
  std::mt19937_64 rng(5);
  double worst_oracle = 0.0;
  double worst_hybrid = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto q = random_pose(rng);
    const auto po = forward_kinematics(q, kGeom, Backend::oracle());
    worst_oracle = std::max(
        worst_oracle,
        max_abs(inverse_kinematics(po, kGeom, Backend::oracle()), q));
    const auto ph = forward_kinematics(q, kGeom, Backend::hybrid());
    worst_hybrid = std::max(
        worst_hybrid,
        max_abs(inverse_kinematics(ph, kGeom, Backend::hybrid()), q));
  }
  EXPECT_LE(worst_oracle, 1e-9);
  EXPECT_LE(worst_hybrid, 5e-3);
}

TEST(Backends, AgreeAlongStandardTrajectory) {
  const auto traj = generate_trajectory(TrajectorySpec::standard());
  for (const auto& q : traj) {
    const auto po = forward_kinematics(q, kGeom, Backend::oracle());
    const auto ph = forward_kinematics(q, kGeom, Backend::hybrid());
    ASSERT_LE(dist(po, ph), 1e-3);
  }
}

// |dp| <= 2 (L1 + L2) sqrt(3) |dq|_inf: each Jacobian column is at most
// 2 (L1 + L2) long.
TEST(ForwardKinematics, Lipschitz) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> du(-1e-3, 1e-3);
  const double bound = 2 * (kGeom.l1 + kGeom.l2) * std::sqrt(3.0);
  for (int i = 0; i < 1000; ++i) {
    const auto q = random_pose(rng);
    JointAngles q2{q.theta1 + du(rng), q.theta2 + du(rng), q.theta3 + du(rng)};
    const double dq = max_abs(q, q2);
    const auto b = Backend::oracle();
    EXPECT_LE(dist(forward_kinematics(q, kGeom, b),
                   forward_kinematics(q2, kGeom, b)),
              bound * dq + 1e-15);
  }
}

TEST(Backend, Names) {
  EXPECT_STREQ(Backend::oracle().name(), "oracle");
  EXPECT_STREQ(Backend::hybrid().name(), "hybrid");
  EXPECT_TRUE(Backend::hybrid().is_hybrid());
  EXPECT_FALSE(Backend::oracle().is_hybrid());
}
