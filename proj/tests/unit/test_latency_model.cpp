#include <gtest/gtest.h>

#include <cmath>

#include "tactile/latency_model.hpp"

using namespace tactile::latency;

namespace {

OpLatencyTable table_with(std::initializer_list<std::pair<OpKind, double>> v) {
  OpLatencyTable t;
  for (const auto& [k, ns] : v) t.set(k, ns);
  return t;
}

}  // namespace

TEST(OpKind, NamesRoundTrip) {
  for (int i = 0; i <= static_cast<int>(OpKind::kConstant); ++i) {
    const auto k = static_cast<OpKind>(i);
    EXPECT_EQ(op_kind_from_string(to_string(k)), k);
  }
  EXPECT_FALSE(op_kind_from_string("fma").has_value());
  EXPECT_TRUE(is_timed(OpKind::kNegate));
  EXPECT_FALSE(is_timed(OpKind::kInput));
  EXPECT_FALSE(is_timed(OpKind::kConstant));
}

TEST(OpLatencyTable, Validation) {
  auto t = OpLatencyTable::uniform(3.0);
  EXPECT_EQ(t.at(OpKind::kSqrt), 3.0);
  EXPECT_EQ(t.at(OpKind::kInput), 0.0);
  EXPECT_NO_THROW(t.validate());
  t.set(OpKind::kDiv, -1.0);
  EXPECT_THROW(t.validate(), tactile::ConfigError);
}

TEST(CriticalPath, SingleAdd) {
  DataflowGraph g;
  const int a = g.add_input("a");
  const int b = g.add_input("b");
  g.mark_output(g.add_op(OpKind::kAdd, "sum", {a, b}));
  EXPECT_EQ(critical_path(g, table_with({{OpKind::kAdd, 5}})), 5.0);
}

TEST(CriticalPath, Chain) {
  DataflowGraph g;
  const int a = g.add_input("a");
  const int s = g.add_op(OpKind::kAdd, "s", {a, a});
  g.mark_output(g.add_op(OpKind::kMul, "m", {s, a}));
  const auto t = table_with({{OpKind::kAdd, 5}, {OpKind::kMul, 7}});
  EXPECT_EQ(critical_path(g, t), 12.0);
  const auto rep = critical_path_report(g, t);
  EXPECT_EQ(rep.op_counts[static_cast<int>(OpKind::kAdd)], 1);
  EXPECT_EQ(rep.op_counts[static_cast<int>(OpKind::kMul)], 1);
  EXPECT_EQ(rep.nodes.back(), g.find("m"));
}

TEST(CriticalPath, ParallelBranchesJoin) {
  DataflowGraph g;
  const int a = g.add_input("a");
  const int slow = g.add_op(OpKind::kDiv, "slow", {a, a});    // 12
  const int fast = g.add_op(OpKind::kMul, "fast", {a, a});    // 10
  g.mark_output(g.add_op(OpKind::kAdd, "join", {slow, fast}));  // 5
  const auto t = table_with(
      {{OpKind::kAdd, 5}, {OpKind::kMul, 10}, {OpKind::kDiv, 12}});
  EXPECT_EQ(critical_path(g, t), 17.0);
  EXPECT_EQ(depth(g), 2);
}

TEST(CriticalPath, CycleDetected) {
  DataflowGraph g;
  const int a = g.add_input("a");
  const int x = g.add_op(OpKind::kAdd, "x", {a});
  const int y = g.add_op(OpKind::kMul, "y", {x});
  g.add_edge(y, x);
  g.mark_output(y);
  EXPECT_THROW(g.topological_order(), tactile::CyclicGraph);
  EXPECT_THROW(critical_path(g, OpLatencyTable::uniform(1)),
               tactile::CyclicGraph);
}

TEST(CriticalPath, MonotoneInOperatorLatency) {
  const auto graphs = builtin_graphs();
  for (const auto& [name, g] : graphs) {
    auto t = OpLatencyTable::uniform(2.0);
    double prev = critical_path(g, t);
    for (int k = 0; k < kTimedOpCount; ++k) {
      const auto kind = static_cast<OpKind>(k);
      t.set(kind, t.at(kind) + 3.0);
      const double now = critical_path(g, t);
      EXPECT_GE(now, prev) << name << " " << to_string(kind);
      prev = now;
    }
  }
}

TEST(TfbBlock, WrapsCoreWithConverters) {
  DataflowGraph g;
  const int a = g.add_input("angle");
  const auto out = g.add_tfb(OpKind::kTfbSincos, "sc", {a}, 2);
  ASSERT_EQ(out.size(), 2u);
  for (int o : out) g.mark_output(o);
  const auto t = table_with({{OpKind::kF2fp, 1},
                             {OpKind::kTfbSincos, 10},
                             {OpKind::kFp2f, 2}});
  EXPECT_EQ(critical_path(g, t), 13.0);
}

TEST(BuiltinGraphs, Structure) {
  const auto graphs = builtin_graphs();
  ASSERT_EQ(graphs.size(), 4u);
  for (const char* name : {"FK", "IK", "KFF", "FBF"}) {
    ASSERT_TRUE(graphs.count(name)) << name;
    const auto& g = graphs.at(name);
    EXPECT_EQ(g.outputs().size(), 3u) << name;
    EXPECT_NO_THROW(g.topological_order());
  }
  EXPECT_EQ(depth(graphs.at("FBF")), 2);
  EXPECT_GT(depth(graphs.at("IK")), depth(graphs.at("FK")));
  EXPECT_GT(depth(graphs.at("KFF")), depth(graphs.at("FK")));
  const auto& fbf = graphs.at("FBF");
  EXPECT_GE(fbf.find("subtract_x"), 0);
  EXPECT_GE(fbf.find("F_x"), 0);
}

TEST(BuiltinGraphs, TorqueSumsThreeProducts) {
  const auto graphs = builtin_graphs();
  const auto& kff = graphs.at("KFF");
  // Each torque output is fed by an adder whose inputs trace back to
  // products of Jacobian entries and force components.
  for (int out : kff.outputs()) {
    EXPECT_EQ(kff.nodes()[out].kind, OpKind::kAdd);
  }
}

TEST(HardwareLatency, CountsForwardKinematicsTwice) {
  EXPECT_EQ(hardware_latency({{"FK", 47}, {"KFF", 70}, {"IK", 218},
                              {"FBF", 21}}),
            403.0);
  EXPECT_EQ(hardware_latency({{"IK", 10}}), 10.0);
}

TEST(Nnls, UnconstrainedSolutionWhenFeasible) {
  // [[1, 0], [0, 2], [1, 1]] x = [1, 4, 3] has exact solution (1, 2).
  const auto x = nnls({1, 0, 0, 2, 1, 1}, 2, {1, 4, 3});
  ASSERT_EQ(x.size(), 2u);
  EXPECT_NEAR(x[0], 1.0, 1e-12);
  EXPECT_NEAR(x[1], 2.0, 1e-12);
}

TEST(Nnls, ClampsNegativeComponent) {
  // Unconstrained least squares of [[1, 1], [1, -1]] x = [0, 2] is (1, -1);
  // the constrained optimum (1, 0) is checked against the KKT conditions.
  const std::vector<double> a{1, 1, 1, -1};
  const std::vector<double> b{0, 2};
  const auto x = nnls(a, 2, b);
  EXPECT_GE(x[0], 0.0);
  EXPECT_GE(x[1], 0.0);
  // Gradient w = A^T (b - A x): w_j <= 0 where x_j == 0, w_j == 0 otherwise.
  const double r0 = b[0] - (a[0] * x[0] + a[1] * x[1]);
  const double r1 = b[1] - (a[2] * x[0] + a[3] * x[1]);
  const double w[2] = {a[0] * r0 + a[2] * r1, a[1] * r0 + a[3] * r1};
  for (int j = 0; j < 2; ++j) {
    if (x[j] > 0) {
      EXPECT_NEAR(w[j], 0.0, 1e-12);
    } else {
      EXPECT_LE(w[j], 1e-12);
    }
  }
  EXPECT_NEAR(x[0], 1.0, 1e-12);
  EXPECT_NEAR(x[1], 0.0, 1e-12);
}

TEST(Calibrate, ReferenceTargets) {
  const auto r = calibrate(reference_targets());
  EXPECT_NO_THROW(r.table.validate());
  for (const auto& [name, target] : r.targets) {
    EXPECT_LE(std::abs(r.residuals.at(name)), 0.2 * target) << name;
  }
  EXPECT_LT(r.fitted.at("FBF"), r.fitted.at("FK"));
  EXPECT_LT(r.fitted.at("FK"), r.fitted.at("KFF"));
  EXPECT_LT(r.fitted.at("KFF"), r.fitted.at("IK"));
  EXPECT_NEAR(r.t_hardware_ns, 403.0, 0.2 * 403.0);
  EXPECT_GE(r.iterations, 1);
}

TEST(Calibrate, SingleTargetFitsExactly) {
  for (const auto& [name, ns] : reference_targets()) {
    const auto r = calibrate({{name, ns}});
    EXPECT_NEAR(r.residuals.at(name), 0.0, 1e-9) << name;
    EXPECT_EQ(r.fitted.size(), 1u);
  }
}

TEST(Calibrate, AchievableTargetsFitExactly) {
  const auto graphs = builtin_graphs();
  const auto truth = table_with({{OpKind::kAdd, 3},
                                 {OpKind::kMul, 4},
                                 {OpKind::kDiv, 20},
                                 {OpKind::kTfbSincos, 11},
                                 {OpKind::kTfbAtan2, 11},
                                 {OpKind::kTfbAcos, 11},
                                 {OpKind::kSqrt, 9},
                                 {OpKind::kF2fp, 1},
                                 {OpKind::kFp2f, 1},
                                 {OpKind::kNegate, 1}});
  std::map<std::string, double> targets;
  for (const auto& [name, g] : graphs) targets[name] = critical_path(g, truth);
  const auto r = calibrate(targets, graphs);
  for (const auto& [name, res] : r.residuals) {
    EXPECT_NEAR(res, 0.0, 1e-6) << name;
  }
}

TEST(Calibrate, Errors) {
  EXPECT_THROW(calibrate({}), tactile::CalibrationDegenerate);
  EXPECT_THROW(calibrate({{"GPU", 5}}), tactile::ConfigError);
  EXPECT_THROW(calibrate({{"FK", 0}}), tactile::ConfigError);
  EXPECT_THROW(calibrate({{"FK", -3}}), tactile::ConfigError);
  std::map<std::string, DataflowGraph> empty{{"FK", DataflowGraph("FK")}};
  EXPECT_THROW(calibrate({{"FK", 47}}, empty), tactile::CalibrationDegenerate);
}
