#include "tactile/latency_model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace tactile::latency {
namespace {

constexpr std::array<std::string_view, 12> kNames = {
    "add",  "mul",  "div",  "tfb_sincos", "tfb_atan2", "tfb_acos",
    "sqrt", "f2fp", "fp2f", "negate",     "input",     "constant"};

std::size_t index(OpKind kind) { return static_cast<std::size_t>(kind); }

}  // namespace

std::string_view to_string(OpKind kind) { return kNames[index(kind)]; }

std::optional<OpKind> op_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<OpKind>(i);
  }
  return std::nullopt;
}

bool is_timed(OpKind kind) {
  return kind != OpKind::kInput && kind != OpKind::kConstant;
}

// ---------------------------------------------------------------------------
// OpLatencyTable

OpLatencyTable OpLatencyTable::uniform(double ns) {
  OpLatencyTable t;
  t.ns_.fill(ns);
  return t;
}

double OpLatencyTable::at(OpKind kind) const {
  return is_timed(kind) ? ns_[index(kind)] : 0.0;
}

void OpLatencyTable::set(OpKind kind, double ns) {
  if (!is_timed(kind)) {
    throw std::invalid_argument("OpLatencyTable: sources carry no latency");
  }
  ns_[index(kind)] = ns;
}

void OpLatencyTable::validate() const {
  for (std::size_t i = 0; i < ns_.size(); ++i) {
    if (!(std::isfinite(ns_[i]) && ns_[i] >= 0.0)) {
      throw ConfigError("latency." + std::string(kNames[i]),
                        "latency must be finite and >= 0");
    }
  }
}

// ---------------------------------------------------------------------------
// DataflowGraph

int DataflowGraph::push(OpKind kind, std::string label,
                        std::vector<int> operands) {
  nodes_.push_back({kind, std::move(label), std::move(operands)});
  return static_cast<int>(nodes_.size()) - 1;
}

int DataflowGraph::add_input(std::string label) {
  return push(OpKind::kInput, std::move(label), {});
}

int DataflowGraph::add_constant(std::string label) {
  return push(OpKind::kConstant, std::move(label), {});
}

int DataflowGraph::add_op(OpKind kind, std::string label,
                          std::vector<int> operands) {
  if (!is_timed(kind)) {
    throw std::invalid_argument("add_op: use add_input/add_constant");
  }
  for (int id : operands) {
    if (id < 0 || id >= static_cast<int>(nodes_.size())) {
      throw std::out_of_range("add_op: unknown operand node");
    }
  }
  return push(kind, std::move(label), std::move(operands));
}

std::vector<int> DataflowGraph::add_tfb(OpKind core, const std::string& label,
                                        const std::vector<int>& operands,
                                        int results) {
  std::vector<int> fixed;
  for (std::size_t i = 0; i < operands.size(); ++i) {
    fixed.push_back(add_op(OpKind::kF2fp,
                           label + ".f2fp" + std::to_string(i), {operands[i]}));
  }
  const int c = add_op(core, label, fixed);
  std::vector<int> out;
  for (int i = 0; i < results; ++i) {
    out.push_back(add_op(OpKind::kFp2f, label + ".fp2f" + std::to_string(i),
                         {c}));
  }
  return out;
}

void DataflowGraph::add_edge(int from, int to) {
  const int n = static_cast<int>(nodes_.size());
  if (from < 0 || from >= n || to < 0 || to >= n) {
    throw std::out_of_range("add_edge: unknown node");
  }
  nodes_[static_cast<std::size_t>(to)].operands.push_back(from);
}

void DataflowGraph::mark_output(int id) {
  if (id < 0 || id >= static_cast<int>(nodes_.size())) {
    throw std::out_of_range("mark_output: unknown node");
  }
  outputs_.push_back(id);
}

std::vector<int> DataflowGraph::inputs() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].kind == OpKind::kInput) out.push_back(static_cast<int>(i));
  }
  return out;
}

int DataflowGraph::find(std::string_view label) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

std::vector<int> DataflowGraph::topological_order() const {
  const std::size_t n = nodes_.size();
  std::vector<int> pending(n, 0);
  std::vector<std::vector<int>> users(n);
  for (std::size_t v = 0; v < n; ++v) {
    for (int u : nodes_[v].operands) {
      users[static_cast<std::size_t>(u)].push_back(static_cast<int>(v));
      ++pending[v];
    }
  }
  std::vector<int> order;
  order.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (pending[v] == 0) order.push_back(static_cast<int>(v));
  }
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (int w : users[static_cast<std::size_t>(order[head])]) {
      if (--pending[static_cast<std::size_t>(w)] == 0) order.push_back(w);
    }
  }
  if (order.size() != n) {
    throw CyclicGraph("dataflow graph '" + name_ + "' contains a cycle");
  }
  return order;
}

// ---------------------------------------------------------------------------
// Critical path

PathReport critical_path_report(const DataflowGraph& g,
                                const OpLatencyTable& t) {
  const auto order = g.topological_order();
  const auto& nodes = g.nodes();
  std::vector<double> finish(nodes.size(), 0.0);
  std::vector<int> via(nodes.size(), -1);
  for (int v : order) {
    const auto& node = nodes[static_cast<std::size_t>(v)];
    double start = 0.0;
    for (int u : node.operands) {
      if (via[static_cast<std::size_t>(v)] < 0 ||
          finish[static_cast<std::size_t>(u)] > start) {
        start = finish[static_cast<std::size_t>(u)];
        via[static_cast<std::size_t>(v)] = u;
      }
    }
    finish[static_cast<std::size_t>(v)] = start + t.at(node.kind);
  }

  std::vector<int> sinks = g.outputs();
  if (sinks.empty()) {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      sinks.push_back(static_cast<int>(i));
    }
  }
  PathReport report;
  int end = -1;
  for (int s : sinks) {
    if (end < 0 || finish[static_cast<std::size_t>(s)] > report.latency_ns) {
      report.latency_ns = finish[static_cast<std::size_t>(s)];
      end = s;
    }
  }
  for (int v = end; v >= 0; v = via[static_cast<std::size_t>(v)]) {
    report.nodes.push_back(v);
    const OpKind k = nodes[static_cast<std::size_t>(v)].kind;
    if (is_timed(k)) ++report.op_counts[index(k)];
  }
  std::reverse(report.nodes.begin(), report.nodes.end());
  return report;
}

double critical_path(const DataflowGraph& g, const OpLatencyTable& t) {
  return critical_path_report(g, t).latency_ns;
}

int depth(const DataflowGraph& g) {
  return static_cast<int>(
      std::lround(critical_path(g, OpLatencyTable::uniform(1.0))));
}

// ---------------------------------------------------------------------------
// Circuits

namespace {

using K = OpKind;

struct TrigNodes {
  int s1, c1, s2, c2, s3, c3;
};

TrigNodes joint_trig(DataflowGraph& g, int t1, int t2, int t3) {
  const auto a = g.add_tfb(K::kTfbSincos, "sincos theta1", {t1}, 2);
  const auto b = g.add_tfb(K::kTfbSincos, "sincos theta2", {t2}, 2);
  const auto c = g.add_tfb(K::kTfbSincos, "sincos theta3", {t3}, 2);
  return {a[0], a[1], b[0], b[1], c[0], c[1]};
}

DataflowGraph fk_graph() {
  DataflowGraph g("FK");
  const int t1 = g.add_input("theta1");
  const int t2 = g.add_input("theta2");
  const int t3 = g.add_input("theta3");
  const int l1 = g.add_constant("L1");
  const int l2 = g.add_constant("L2");
  const int l3 = g.add_constant("L3");
  const int l4 = g.add_constant("L4");
  const auto t = joint_trig(g, t1, t2, t3);

  const int xa = g.add_op(K::kMul, "x.L2s3", {l2, t.s3});
  const int xb = g.add_op(K::kMul, "x.L1c2", {l1, t.c2});
  const int xs = g.add_op(K::kAdd, "x.sum", {xa, xb});
  const int xm = g.add_op(K::kMul, "x.s1", {t.s1, xs});
  g.mark_output(g.add_op(K::kNegate, "x", {xm}));

  const int ya = g.add_op(K::kMul, "y.L2c3", {l2, t.c3});
  const int yn = g.add_op(K::kNegate, "y.neg", {ya});
  const int yb = g.add_op(K::kMul, "y.L1s2", {l1, t.s2});
  const int ys = g.add_op(K::kAdd, "y.sum", {yn, yb});
  g.mark_output(g.add_op(K::kAdd, "y", {ys, l3}));

  const int za = g.add_op(K::kMul, "z.L2c1", {l2, t.c1});
  const int zb = g.add_op(K::kMul, "z.L2c1s3", {za, t.s3});
  const int zc = g.add_op(K::kMul, "z.L1c1", {l1, t.c1});
  const int zd = g.add_op(K::kMul, "z.L1c1c2", {zc, t.c2});
  const int zs = g.add_op(K::kAdd, "z.sum", {zb, zd});
  const int zn = g.add_op(K::kNegate, "z.negL4", {l4});
  g.mark_output(g.add_op(K::kAdd, "z", {zs, zn}));
  return g;
}

DataflowGraph ik_graph() {
  DataflowGraph g("IK");
  const int x = g.add_input("x");
  const int y = g.add_input("y");
  const int z = g.add_input("z");
  const int l1 = g.add_constant("L1");
  const int l2 = g.add_constant("L2");
  const int l3 = g.add_constant("L3");
  const int l4 = g.add_constant("L4");
  const int two = g.add_constant("2");
  const int half_pi = g.add_constant("pi/2");

  // Stage 1: theta1 alongside R and r.
  const int zz = g.add_op(K::kAdd, "z+L4", {z, l4});
  const int at1 = g.add_tfb(K::kTfbAtan2, "atan2 theta1", {x, zz})[0];
  g.mark_output(g.add_op(K::kNegate, "theta1", {at1}));

  const int xx = g.add_op(K::kMul, "x^2", {x, x});
  const int zz2 = g.add_op(K::kMul, "(z+L4)^2", {zz, zz});
  const int rr_xz = g.add_op(K::kAdd, "R^2", {xx, zz2});
  const int big_r = g.add_op(K::kSqrt, "R", {rr_xz});
  const int nl3 = g.add_op(K::kNegate, "-L3", {l3});
  const int yy = g.add_op(K::kAdd, "y-L3", {y, nl3});
  const int yy2 = g.add_op(K::kMul, "(y-L3)^2", {yy, yy});
  const int rr = g.add_op(K::kAdd, "r^2", {rr_xz, yy2});
  const int r = g.add_op(K::kSqrt, "r", {rr});

  // Stage 2: gamma, beta, alpha.
  const int l1sq = g.add_op(K::kMul, "L1^2", {l1, l1});
  const int l2sq = g.add_op(K::kMul, "L2^2", {l2, l2});
  const int r2 = g.add_op(K::kMul, "r*r", {r, r});
  const int two_l1 = g.add_op(K::kMul, "2L1", {two, l1});

  const int nl2sq = g.add_op(K::kNegate, "-L2^2", {l2sq});
  const int gd = g.add_op(K::kAdd, "gamma.diff", {l1sq, nl2sq});
  const int gn = g.add_op(K::kAdd, "gamma.num", {gd, r2});
  const int gden = g.add_op(K::kMul, "gamma.den", {two_l1, r});
  const int garg = g.add_op(K::kDiv, "gamma.arg", {gn, gden});
  const int gamma = g.add_tfb(K::kTfbAcos, "acos gamma", {garg})[0];

  const int beta = g.add_tfb(K::kTfbAtan2, "atan2 beta", {yy, big_r})[0];

  const int as = g.add_op(K::kAdd, "alpha.sum", {l1sq, l2sq});
  const int nr2 = g.add_op(K::kNegate, "-r^2", {r2});
  const int an = g.add_op(K::kAdd, "alpha.num", {as, nr2});
  const int aden = g.add_op(K::kMul, "alpha.den", {two_l1, l2});
  const int aarg = g.add_op(K::kDiv, "alpha.arg", {an, aden});
  const int alpha = g.add_tfb(K::kTfbAcos, "acos alpha", {aarg})[0];

  // Stage 3: theta2, theta3.
  const int theta2 = g.add_op(K::kAdd, "theta2", {gamma, beta});
  g.mark_output(theta2);
  const int ta = g.add_op(K::kAdd, "theta3.sum", {theta2, alpha});
  const int nhp = g.add_op(K::kNegate, "-pi/2", {half_pi});
  g.mark_output(g.add_op(K::kAdd, "theta3", {ta, nhp}));
  return g;
}

DataflowGraph kff_graph() {
  DataflowGraph g("KFF");
  const int t1 = g.add_input("theta1");
  const int t2 = g.add_input("theta2");
  const int t3 = g.add_input("theta3");
  const int fx = g.add_input("Fx");
  const int fy = g.add_input("Fy");
  const int fz = g.add_input("Fz");
  const int l1 = g.add_constant("L1");
  const int l2 = g.add_constant("L2");
  const auto t = joint_trig(g, t1, t2, t3);

  const int j11a = g.add_op(K::kMul, "J11.L2s3", {l2, t.s3});
  const int j11b = g.add_op(K::kMul, "J11.L1c2", {l1, t.c2});
  const int j11s = g.add_op(K::kAdd, "J11.sum", {j11a, j11b});
  const int j11m = g.add_op(K::kMul, "J11.c1", {t.c1, j11s});
  const int j11 = g.add_op(K::kNegate, "J11", {j11m});

  const int j12a = g.add_op(K::kMul, "J12.L1s1", {l1, t.s1});
  const int j12 = g.add_op(K::kMul, "J12", {j12a, t.s2});

  const int j13a = g.add_op(K::kMul, "J13.L2s1", {l2, t.s1});
  const int j13b = g.add_op(K::kMul, "J13.c3", {j13a, t.c3});
  const int j13 = g.add_op(K::kNegate, "J13", {j13b});

  const int j21 = g.add_constant("J21");
  const int j22 = g.add_op(K::kMul, "J22", {l1, t.c2});
  const int j23 = g.add_op(K::kMul, "J23", {l2, t.s3});

  const int j31a = g.add_op(K::kMul, "J31.L1c2", {l1, t.c2});
  const int j31b = g.add_op(K::kMul, "J31.s1a", {j31a, t.s1});
  const int j31c = g.add_op(K::kNegate, "J31.neg1", {j31b});
  const int j31d = g.add_op(K::kMul, "J31.L2s3", {l2, t.s3});
  const int j31e = g.add_op(K::kMul, "J31.s1b", {j31d, t.s1});
  const int j31f = g.add_op(K::kNegate, "J31.neg2", {j31e});
  const int j31 = g.add_op(K::kAdd, "J31", {j31c, j31f});

  const int j32a = g.add_op(K::kMul, "J32.L1s2", {l1, t.s2});
  const int j32b = g.add_op(K::kMul, "J32.c1", {j32a, t.c1});
  const int j32 = g.add_op(K::kNegate, "J32", {j32b});

  const int j33a = g.add_op(K::kMul, "J33.L2c3", {l2, t.c3});
  const int j33 = g.add_op(K::kMul, "J33", {j33a, t.c1});

  auto tau = [&](const std::string& name, int ja, int jb, int jc) {
    const int a = g.add_op(K::kMul, name + ".x", {ja, fx});
    const int b = g.add_op(K::kMul, name + ".y", {jb, fy});
    const int c = g.add_op(K::kMul, name + ".z", {jc, fz});
    const int s = g.add_op(K::kAdd, name + ".sum", {a, b});
    g.mark_output(g.add_op(K::kAdd, name, {s, c}));
  };
  tau("tau1", j11, j21, j31);
  tau("tau2", j12, j22, j32);
  tau("tau3", j13, j23, j33);
  return g;
}

DataflowGraph fbf_graph() {
  DataflowGraph g("FBF");
  for (const char* axis : {"x", "y", "z"}) {
    const std::string a(axis);
    const int obj = g.add_input("s_obj_" + a);
    const int env = g.add_input("l_" + a);
    const int h = g.add_input("h_" + a);
    const int d = g.add_op(K::kAdd, "subtract_" + a, {obj, env});
    g.mark_output(g.add_op(K::kMul, "F_" + a, {h, d}));
  }
  return g;
}

}  // namespace

std::map<std::string, DataflowGraph> builtin_graphs() {
  return {{"FK", fk_graph()},
          {"IK", ik_graph()},
          {"KFF", kff_graph()},
          {"FBF", fbf_graph()}};
}

std::map<std::string, double> reference_targets() {
  return {{"FK", 47.0}, {"KFF", 70.0}, {"IK", 218.0}, {"FBF", 21.0}};
}

double hardware_latency(const std::map<std::string, double>& module_ns) {
  auto get = [&](const char* name) {
    const auto it = module_ns.find(name);
    return it == module_ns.end() ? 0.0 : it->second;
  };
  return 2.0 * get("FK") + get("KFF") + get("IK") + get("FBF");
}

// ---------------------------------------------------------------------------
// Calibration

std::vector<double> nnls(const std::vector<double>& a, int cols,
                         const std::vector<double>& b) {
  const int rows = static_cast<int>(b.size());
  if (cols <= 0 || a.size() != static_cast<std::size_t>(rows) *
                                   static_cast<std::size_t>(cols)) {
    throw std::invalid_argument("nnls: matrix shape mismatch");
  }
  using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                            Eigen::RowMajor>;
  const Mat A = Eigen::Map<const Mat>(a.data(), rows, cols);
  const Eigen::VectorXd B = Eigen::Map<const Eigen::VectorXd>(b.data(), rows);

  const double tol = 1e-10 * std::max(1.0, A.cwiseAbs().maxCoeff()) *
                     std::max(1.0, B.cwiseAbs().maxCoeff());
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cols);
  std::vector<bool> passive(static_cast<std::size_t>(cols), false);

  // Least squares restricted to the passive set.
  auto solve_passive = [&]() {
    std::vector<int> idx;
    for (int j = 0; j < cols; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    Eigen::MatrixXd ap(rows, static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) {
      ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    }
    const Eigen::VectorXd sp = ap.completeOrthogonalDecomposition().solve(B);
    Eigen::VectorXd s = Eigen::VectorXd::Zero(cols);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      s(idx[k]) = sp(static_cast<Eigen::Index>(k));
    }
    return s;
  };

  for (int outer = 0; outer < 3 * cols; ++outer) {
    const Eigen::VectorXd w = A.transpose() * (B - A * x);
    int best = -1;
    for (int j = 0; j < cols; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > tol &&
          (best < 0 || w(j) > w(best))) {
        best = j;
      }
    }
    if (best < 0) break;
    passive[static_cast<std::size_t>(best)] = true;

    Eigen::VectorXd s = solve_passive();
    for (int inner = 0; inner < 3 * cols; ++inner) {
      double step = std::numeric_limits<double>::infinity();
      for (int j = 0; j < cols; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
          step = std::min(step, x(j) / (x(j) - s(j)));
        }
      }
      if (!std::isfinite(step)) break;
      x += step * (s - x);
      for (int j = 0; j < cols; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= tol) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
      s = solve_passive();
    }
    x = s;
  }
  return {x.data(), x.data() + cols};
}

CalibrationResult calibrate(const std::map<std::string, double>& targets,
                            const std::map<std::string, DataflowGraph>& graphs) {
  if (targets.empty()) {
    throw CalibrationDegenerate("calibration needs at least one target");
  }
  std::vector<const DataflowGraph*> gs;
  std::vector<double> b;
  bool any_op = false;
  for (const auto& [name, ns] : targets) {
    const auto it = graphs.find(name);
    if (it == graphs.end()) {
      throw ConfigError("targets." + name, "no circuit named '" + name + "'");
    }
    if (!(std::isfinite(ns) && ns > 0.0)) {
      throw ConfigError("targets." + name, "target must be finite and > 0");
    }
    for (const auto& node : it->second.nodes()) any_op |= is_timed(node.kind);
    gs.push_back(&it->second);
    b.push_back(ns);
  }
  if (!any_op) {
    throw CalibrationDegenerate("every target circuit is empty");
  }

  auto evaluate = [&](const OpLatencyTable& table, CalibrationResult& r) {
    r.table = table;
    r.targets = targets;
    r.fitted.clear();
    r.residuals.clear();
    std::size_t k = 0;
    for (const auto& [name, ns] : targets) {
      const double cp = critical_path(*gs[k++], table);
      r.fitted[name] = cp;
      r.residuals[name] = cp - ns;
    }
    r.t_hardware_ns = hardware_latency(r.fitted);
  };
  auto cost = [](const CalibrationResult& r) {
    double c = 0.0;
    for (const auto& [name, res] : r.residuals) c += res * res;
    return c;
  };

  // Start from the unit-weight critical paths. Every critical path met so
  // far stays in the system as its own equation (path latency == module
  // target), so a path that overtakes the fitted one gets pulled back on the
  // next round. Stops once no new path appears.
  OpLatencyTable table = OpLatencyTable::uniform(1.0);
  CalibrationResult best;
  double best_cost = std::numeric_limits<double>::infinity();
  std::vector<std::array<int, kTimedOpCount>> rows;
  std::vector<double> rhs;
  constexpr int kMaxRounds = 64;
  for (int round = 1; round <= kMaxRounds; ++round) {
    bool grew = false;
    for (std::size_t k = 0; k < gs.size(); ++k) {
      const auto counts = critical_path_report(*gs[k], table).op_counts;
      bool seen = false;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        seen |= rows[r] == counts && rhs[r] == b[k];
      }
      if (!seen) {
        rows.push_back(counts);
        rhs.push_back(b[k]);
        grew = true;
      }
    }
    if (!grew) break;

    std::vector<double> a;
    for (const auto& row : rows) a.insert(a.end(), row.begin(), row.end());
    const auto x = nnls(a, kTimedOpCount, rhs);
    OpLatencyTable fitted;
    for (int j = 0; j < kTimedOpCount; ++j) {
      fitted.set(static_cast<OpKind>(j), x[static_cast<std::size_t>(j)]);
    }
    CalibrationResult r;
    evaluate(fitted, r);
    r.iterations = round;
    if (cost(r) < best_cost) {
      best_cost = cost(r);
      best = r;
    }
    table = fitted;
  }
  return best;
}

}  // namespace tactile::latency
