#include "tactile/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace tactile {

// ---------------------------------------------------------------------------
// Trajectory

TrajectorySpec TrajectorySpec::standard() {
  constexpr double pi = std::numbers::pi;
  TrajectorySpec spec;
  spec.segments = {{1, 0.0, pi / 2, 400}, {2, 0.0, pi / 4, 400},
                   {3, 0.0, pi / 4, 400}};
  spec.sample_period = 0.01;
  return spec;
}

std::int64_t TrajectorySpec::total_samples() const {
  std::int64_t q = 0;
  for (const auto& s : segments) q += s.samples;
  return q;
}

void TrajectorySpec::validate() const {
  if (segments.empty()) {
    throw ConfigError("trajectory.segments", "at least one segment required");
  }
  if (!(std::isfinite(sample_period) && sample_period > 0.0)) {
    throw ConfigError("trajectory.sample_period", "must be finite and > 0");
  }
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    const std::string field = "trajectory.segments[" + std::to_string(i) + "]";
    if (s.joint < 1 || s.joint > 3) {
      throw ConfigError(field + ".joint", "joint must be 1, 2 or 3");
    }
    if (s.samples < 1) {
      throw ConfigError(field + ".samples", "must be a positive integer");
    }
    if (!std::isfinite(s.start) || !std::isfinite(s.end)) {
      throw ConfigError(field, "angles must be finite");
    }
  }
}

std::vector<JointAngles> generate_trajectory(const TrajectorySpec& spec) {
  spec.validate();
  std::vector<JointAngles> out;
  out.reserve(static_cast<std::size_t>(spec.total_samples()));
  std::array<double, 3> pose{};
  for (const auto& s : spec.segments) {
    auto& angle = pose[static_cast<std::size_t>(s.joint - 1)];
    for (std::int64_t m = 0; m < s.samples; ++m) {
      angle = s.samples == 1
                  ? s.end
                  : s.start + (s.end - s.start) * static_cast<double>(m) /
                                  static_cast<double>(s.samples - 1);
      out.push_back({pose[0], pose[1], pose[2]});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Scene

ElasticitySchedule::ElasticitySchedule(Elasticity constant)
    : points_{{0, constant}} {
  constant.validate();
}

ElasticitySchedule::ElasticitySchedule(std::vector<Breakpoint> breakpoints)
    : points_(std::move(breakpoints)) {
  if (points_.empty() || points_.front().start != 0) {
    throw ConfigError("scene.elasticity", "first breakpoint must start at 0");
  }
  for (std::size_t i = 0; i < points_.size(); ++i) {
    points_[i].h.validate();
    if (i > 0 && points_[i].start <= points_[i - 1].start) {
      throw ConfigError("scene.elasticity",
                        "breakpoint starts must be strictly increasing");
    }
  }
}

Elasticity ElasticitySchedule::at(std::int64_t n) const {
  auto it = std::upper_bound(
      points_.begin(), points_.end(), n,
      [](std::int64_t v, const Breakpoint& bp) { return v < bp.start; });
  return it == points_.begin() ? points_.front().h : std::prev(it)->h;
}

Scene Scene::none(ElasticitySchedule h) {
  Scene s;
  s.elasticity_ = std::move(h);
  return s;
}

Scene Scene::plane(std::array<double, 3> normal, double offset,
                   ElasticitySchedule h) {
  const double norm = std::hypot(normal[0], normal[1], normal[2]);
  if (!(std::isfinite(norm) && norm > 0.0)) {
    throw ConfigError("scene.plane.normal", "normal must be finite and nonzero");
  }
  if (!std::isfinite(offset)) {
    throw ConfigError("scene.plane.offset", "offset must be finite");
  }
  Scene s;
  s.kind_ = Kind::kPlane;
  s.normal_ = {normal[0] / norm, normal[1] / norm, normal[2] / norm};
  s.offset_ = offset;
  s.elasticity_ = std::move(h);
  return s;
}

Scene Scene::table(std::vector<CartesianPosition> positions,
                   ElasticitySchedule h) {
  for (const auto& p : positions) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y) || !std::isfinite(p.z)) {
      throw ConfigError("scene.table", "positions must be finite");
    }
  }
  Scene s;
  s.kind_ = Kind::kTable;
  s.table_ = std::move(positions);
  s.elasticity_ = std::move(h);
  return s;
}

Scene Scene::standard() {
  return plane({-1.0, 1.0, 1.0}, -0.05,
               ElasticitySchedule(Elasticity{200.0, 200.0, 200.0}));
}

CartesianPosition Scene::object_surface(std::int64_t n,
                                        const CartesianPosition& tool) const {
  switch (kind_) {
    case Kind::kNone:
      return tool;
    case Kind::kPlane: {
      const double depth = normal_[0] * tool.x + normal_[1] * tool.y +
                           normal_[2] * tool.z - offset_;
      if (depth <= 0.0) return tool;
      return {tool.x - depth * normal_[0], tool.y - depth * normal_[1],
              tool.z - depth * normal_[2]};
    }
    case Kind::kTable:
      if (n < 0 || static_cast<std::size_t>(n) >= table_.size()) {
        throw ConfigError("scene.table",
                          "no object position for sample " + std::to_string(n));
      }
      return table_[static_cast<std::size_t>(n)];
  }
  return tool;
}

// ---------------------------------------------------------------------------
// Loop

void TrackingModel::validate() const {
  if (!(pole >= 0.0 && pole < 1.0)) {
    throw ConfigError("tracking.pole", "pole must lie in [0, 1)");
  }
}

void PipelineConfig::validate() const {
  trajectory.validate();
  geometry.validate();
  fc.validate();
  bc.validate();
  tracking.validate();
}

namespace {

Sample3 to_sample(const CartesianPosition& p) { return {p.x, p.y, p.z}; }
Sample3 to_sample(const ForceVector& f) { return {f.fx, f.fy, f.fz}; }

}  // namespace

SimulationTrace run_pipeline(const PipelineConfig& cfg, const Backend& b) {
  cfg.validate();
  const auto traj = generate_trajectory(cfg.trajectory);
  const auto& g = cfg.geometry;

  ChannelConfig fc_cfg = cfg.fc;
  ChannelConfig bc_cfg = cfg.bc;
  // Keep the two channels' noise independent when they share a seed.
  fc_cfg.stream = 0;
  bc_cfg.stream = 1;
  Channel fc(fc_cfg);
  Channel bc(bc_cfg);

  SimulationTrace trace;
  trace.backend = b.name();
  trace.records.reserve(traj.size());

  JointAngles theta_sd_prev;
  const double pole = cfg.tracking.pole;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const auto n = static_cast<std::int64_t>(i);
    TraceRecord r;
    r.n = n;
    r.t = static_cast<double>(n) * cfg.trajectory.sample_period;
    r.b = traj[i];
    r.c = forward_kinematics(r.b, g, b);

    const auto v = fc.step(to_sample(r.c), n);
    r.v = {v[0], v[1], v[2]};
    CartesianPosition v_pred =
        cfg.hooks.cartesian ? cfg.hooks.cartesian(r.v, n) : r.v;

    try {
      r.theta_hsd = inverse_kinematics(v_pred, g, b);
    } catch (const Unreachable& e) {
      throw e.at_sample(n);
    }
    if (cfg.hooks.joint) r.theta_hsd = cfg.hooks.joint(r.theta_hsd, n);

    if (pole == 0.0 || n == 0) {
      r.theta_sd = r.theta_hsd;
    } else {
      auto lag = [pole](double prev, double cmd) {
        return pole * prev + (1.0 - pole) * cmd;
      };
      r.theta_sd = {lag(theta_sd_prev.theta1, r.theta_hsd.theta1),
                    lag(theta_sd_prev.theta2, r.theta_hsd.theta2),
                    lag(theta_sd_prev.theta3, r.theta_hsd.theta3)};
    }
    theta_sd_prev = r.theta_sd;

    r.l = forward_kinematics(r.theta_sd, g, b);
    r.s_obj = cfg.scene.object_surface(n, r.l);
    r.h = feedback_force(r.s_obj, r.l, cfg.scene.elasticity().at(n), b);

    const auto q = bc.step(to_sample(r.h), n);
    r.q = {q[0], q[1], q[2]};
    r.p = kinesthetic_feedback(r.b, r.q, g, b);
    trace.records.push_back(r);
  }
  return trace;
}

SimulationTrace run_modules_isolated(const SimulationTrace& reference,
                                     const PipelineConfig& cfg,
                                     const Backend& b) {
  const auto& g = cfg.geometry;
  SimulationTrace out;
  out.backend = b.name();
  out.records = reference.records;
  for (auto& r : out.records) {
    // FBF reads the reference l, so it runs before FK-HSD overwrites it.
    r.h = feedback_force(r.s_obj, r.l, cfg.scene.elasticity().at(r.n), b);
    r.c = forward_kinematics(r.b, g, b);
    r.p = kinesthetic_feedback(r.b, r.q, g, b);
    r.l = forward_kinematics(r.theta_sd, g, b);
    try {
      r.theta_hsd = inverse_kinematics(r.v, g, b);
    } catch (const Unreachable& e) {
      throw e.at_sample(r.n);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// MSE

double compute_mse(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw SeriesLengthMismatch(a.size(), b.size());
  if (a.empty()) throw SeriesLengthMismatch(0, 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum / static_cast<double>(a.size());
}

namespace {

template <typename Getter>
std::vector<double> column(const SimulationTrace& t, Getter get) {
  std::vector<double> out;
  out.reserve(t.records.size());
  for (const auto& r : t.records) out.push_back(get(r));
  return out;
}

}  // namespace

std::vector<MseEntry> module_mse_table(const SimulationTrace& reference,
                                       const SimulationTrace& test) {
  if (reference.records.size() != test.records.size()) {
    throw SeriesLengthMismatch(reference.records.size(), test.records.size());
  }
  std::vector<MseEntry> out;
  auto add = [&](const char* module, const char* name, auto get) {
    out.push_back({module, name,
                   compute_mse(column(reference, get), column(test, get))});
  };
  using R = const TraceRecord&;
  add("FK-HMD", "c_x", [](R r) { return r.c.x; });
  add("FK-HMD", "c_y", [](R r) { return r.c.y; });
  add("FK-HMD", "c_z", [](R r) { return r.c.z; });
  add("IK-HSD", "theta_hsd1", [](R r) { return r.theta_hsd.theta1; });
  add("IK-HSD", "theta_hsd2", [](R r) { return r.theta_hsd.theta2; });
  add("IK-HSD", "theta_hsd3", [](R r) { return r.theta_hsd.theta3; });
  add("FK-HSD", "l_x", [](R r) { return r.l.x; });
  add("FK-HSD", "l_y", [](R r) { return r.l.y; });
  add("FK-HSD", "l_z", [](R r) { return r.l.z; });
  add("FBF-HSD", "h_x", [](R r) { return r.h.fx; });
  add("FBF-HSD", "h_y", [](R r) { return r.h.fy; });
  add("FBF-HSD", "h_z", [](R r) { return r.h.fz; });
  add("KFF-HMD", "p1", [](R r) { return r.p.tau1; });
  add("KFF-HMD", "p2", [](R r) { return r.p.tau2; });
  add("KFF-HMD", "p3", [](R r) { return r.p.tau3; });
  return out;
}

// ---------------------------------------------------------------------------
// Budget

double LatencyBudget::t_latency() const {
  return 2.0 * (t_md + t_hmd + t_nw + t_hsd + t_sd);
}

double hardware_time_limit(double t_latency) { return 0.3 * t_latency / 8.0; }

std::vector<SpeedupRow> speedup_report(double t_hardware,
                                       const std::vector<double>& limits) {
  if (!(t_hardware > 0.0)) {
    throw std::invalid_argument("speedup_report: t_hardware must be > 0");
  }
  std::vector<SpeedupRow> out;
  out.reserve(limits.size());
  for (double limit : limits) {
    SpeedupRow row;
    row.t_latency = limit;
    row.time_limit = hardware_time_limit(limit);
    row.ratio = row.time_limit / t_hardware;
    // Tolerate a few ulps below an integer before truncating.
    row.speedup = static_cast<std::int64_t>(std::floor(row.ratio * (1.0 + 1e-12)));
    out.push_back(row);
  }
  return out;
}

}  // namespace tactile
