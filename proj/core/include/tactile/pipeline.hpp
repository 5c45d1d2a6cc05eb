#pragma once

// Discrete tactile-internet loop: operator trajectory, master hardware
// (FK + KFF), forward/backward channels, slave hardware (IK + FK + FBF),
// slave tracking and the environment scene. Also the MSE and latency-budget
// arithmetic used to compare backends.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "tactile/channel.hpp"
#include "tactile/force.hpp"
#include "tactile/kinematics.hpp"

namespace tactile {

struct TrajectorySegment {
  int joint = 1;  // 1..3
  double start = 0.0;
  double end = 0.0;
  std::int64_t samples = 0;
};

/// Piecewise-linear joint ramps run back to back from the zero pose. Joints
/// outside the active segment hold their last value. Each ramp includes both
/// endpoints: sample m of a d-sample segment is start + (end-start)*m/(d-1).
struct TrajectorySpec {
  std::vector<TrajectorySegment> segments;
  double sample_period = 0.01;  // seconds

  /// theta1 0->pi/2, theta2 0->pi/4, theta3 0->pi/4, 400 samples each.
  static TrajectorySpec standard();

  std::int64_t total_samples() const;
  void validate() const;
};

std::vector<JointAngles> generate_trajectory(const TrajectorySpec& spec);

/// Piecewise-constant elasticity; breakpoint k applies from its start sample
/// until the next one.
class ElasticitySchedule {
 public:
  struct Breakpoint {
    std::int64_t start = 0;
    Elasticity h;
  };

  ElasticitySchedule() = default;
  explicit ElasticitySchedule(Elasticity constant);
  /// First breakpoint must start at 0; starts strictly increasing.
  explicit ElasticitySchedule(std::vector<Breakpoint> breakpoints);

  Elasticity at(std::int64_t n) const;
  const std::vector<Breakpoint>& breakpoints() const { return points_; }

 private:
  std::vector<Breakpoint> points_{{0, Elasticity{}}};
};

/// Supplies the nearest-object position s^OBJ(n).
class Scene {
 public:
  enum class Kind {
    kNone,   // no object: s^OBJ tracks the tool, zero force
    kPlane,  // rigid half-space {p : normal.p > offset} is inside the object
    kTable,  // explicit per-sample positions
  };

  static Scene none(ElasticitySchedule h = {});
  /// `normal` need not be unit length; it is normalized here.
  static Scene plane(std::array<double, 3> normal, double offset,
                     ElasticitySchedule h);
  static Scene table(std::vector<CartesianPosition> positions,
                     ElasticitySchedule h);

  /// Plane (-1, 1, 1)/sqrt(3) at offset -0.05 m, 200 N/m per axis: the
  /// standard trajectory touches it only in its final segment.
  static Scene standard();

  Kind kind() const { return kind_; }
  const std::array<double, 3>& normal() const { return normal_; }
  double offset() const { return offset_; }
  const ElasticitySchedule& elasticity() const { return elasticity_; }

  /// For the plane, a penetrating tool is projected back onto the surface;
  /// otherwise the tool position itself is returned.
  CartesianPosition object_surface(std::int64_t n,
                                   const CartesianPosition& tool) const;

 private:
  Kind kind_ = Kind::kNone;
  std::array<double, 3> normal_{0.0, 0.0, 1.0};
  double offset_ = 0.0;
  std::vector<CartesianPosition> table_;
  ElasticitySchedule elasticity_;
};

/// Slave tracking: theta_sd(n) = pole*theta_sd(n-1) + (1-pole)*theta_hsd(n).
/// pole = 0 is ideal tracking.
struct TrackingModel {
  double pole = 0.0;
  void validate() const;
};

/// Prediction/detection stages on the slave side. Identity by default.
struct PredictionHooks {
  std::function<CartesianPosition(const CartesianPosition&, std::int64_t)>
      cartesian;
  std::function<JointAngles(const JointAngles&, std::int64_t)> joint;
};

struct PipelineConfig {
  TrajectorySpec trajectory = TrajectorySpec::standard();
  DeviceGeometry geometry;
  Scene scene = Scene::standard();
  ChannelConfig fc = ChannelConfig::transparent();
  ChannelConfig bc = ChannelConfig::transparent();
  TrackingModel tracking;
  PredictionHooks hooks;

  void validate() const;
};

struct TraceRecord {
  std::int64_t n = 0;
  double t = 0.0;
  JointAngles b;           // master encoders
  CartesianPosition c;     // master tool position
  CartesianPosition v;     // position received by the slave
  JointAngles theta_hsd;   // slave joint command
  JointAngles theta_sd;    // slave joint position
  CartesianPosition l;     // slave tool position
  CartesianPosition s_obj; // nearest object surface
  ForceVector h;           // contact force at the slave
  ForceVector q;           // force received by the master
  TorqueVector p;          // master joint torques
};

struct SimulationTrace {
  std::string backend;
  std::vector<TraceRecord> records;
};

/// Throws Unreachable carrying the sample index when IK fails.
SimulationTrace run_pipeline(const PipelineConfig& cfg, const Backend& b);

/// Evaluates each hardware module of `b` on the inputs that module saw in
/// `reference`: FK-HMD on b, KFF-HMD on (b, q), FK-HSD on theta_sd, IK-HSD on
/// v and FBF-HSD on (s_obj, l). Signals that are not module outputs are copied
/// from the reference.
SimulationTrace run_modules_isolated(const SimulationTrace& reference,
                                     const PipelineConfig& cfg,
                                     const Backend& b);

/// (1/Q) * sum (a(n) - b(n))^2. Throws SeriesLengthMismatch; Q must be >= 1.
double compute_mse(std::span<const double> a, std::span<const double> b);

struct MseEntry {
  std::string module;    // FK-HMD, FK-HSD, IK-HSD, KFF-HMD, FBF-HSD
  std::string variable;  // trace column name
  double mse = 0.0;
};

/// 15 entries: five modules x three components.
std::vector<MseEntry> module_mse_table(const SimulationTrace& reference,
                                       const SimulationTrace& test);

struct LatencyBudget {
  double t_md = 0.0;
  double t_hmd = 0.0;
  double t_nw = 0.0;
  double t_hsd = 0.0;
  double t_sd = 0.0;

  /// 2 * (t_md + t_hmd + t_nw + t_hsd + t_sd)
  double t_latency() const;
};

/// 0.3 * t_latency / 8: the hardware share of one of the eight equal
/// divisions of the round trip.
double hardware_time_limit(double t_latency);

struct SpeedupRow {
  double t_latency = 0.0;
  double time_limit = 0.0;
  double ratio = 0.0;
  /// Whole-number speedup, truncated.
  std::int64_t speedup = 0;
};

std::vector<SpeedupRow> speedup_report(double t_hardware,
                                       const std::vector<double>& limits);

}  // namespace tactile
