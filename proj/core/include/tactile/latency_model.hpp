#pragma once

// Combinational latency model of the hardware modules. Each module is a DAG
// of primitive operators; its sample period is the latency-weighted critical
// path. Per-operator latencies are fitted to measured module timings.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tactile/errors.hpp"

namespace tactile::latency {

enum class OpKind {
  kAdd,
  kMul,
  kDiv,
  kTfbSincos,
  kTfbAtan2,
  kTfbAcos,
  kSqrt,
  kF2fp,
  kFp2f,
  kNegate,
  // Zero-latency sources.
  kInput,
  kConstant,
};

inline constexpr int kTimedOpCount = 10;  // kAdd..kNegate

std::string_view to_string(OpKind kind);
std::optional<OpKind> op_kind_from_string(std::string_view name);
bool is_timed(OpKind kind);

/// Nanoseconds per operator kind.
class OpLatencyTable {
 public:
  OpLatencyTable() = default;
  /// Every timed operator set to `ns`.
  static OpLatencyTable uniform(double ns);

  double at(OpKind kind) const;
  void set(OpKind kind, double ns);
  const std::array<double, kTimedOpCount>& values() const { return ns_; }

  /// Throws ConfigError on negative or non-finite entries.
  void validate() const;

 private:
  std::array<double, kTimedOpCount> ns_{};
};

class DataflowGraph {
 public:
  struct Node {
    OpKind kind;
    std::string label;
    std::vector<int> operands;
  };

  explicit DataflowGraph(std::string name = {}) : name_(std::move(name)) {}

  int add_input(std::string label);
  int add_constant(std::string label);
  /// Operands must already exist, so graphs built this way are acyclic.
  int add_op(OpKind kind, std::string label, std::vector<int> operands);
  /// Wraps a trig core as the TFB does: one F2FP per operand, the CORDIC
  /// core, then one FP2F per result. Returns the FP2F node ids.
  std::vector<int> add_tfb(OpKind core, const std::string& label,
                           const std::vector<int>& operands, int results = 1);
  /// Adds an arbitrary edge; may introduce a cycle.
  void add_edge(int from, int to);
  void mark_output(int id);

  const std::string& name() const { return name_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& outputs() const { return outputs_; }
  std::vector<int> inputs() const;
  int find(std::string_view label) const;  // -1 when absent

  /// Throws CyclicGraph.
  std::vector<int> topological_order() const;

 private:
  int push(OpKind kind, std::string label, std::vector<int> operands);

  std::string name_;
  std::vector<Node> nodes_;
  std::vector<int> outputs_;
};

struct PathReport {
  double latency_ns = 0.0;
  std::vector<int> nodes;  // source to sink
  /// Number of operators of each timed kind along the path.
  std::array<int, kTimedOpCount> op_counts{};
};

/// Longest latency-weighted path ending at a designated output (or at any
/// node if none are marked). Throws CyclicGraph.
PathReport critical_path_report(const DataflowGraph& g,
                                const OpLatencyTable& t);
double critical_path(const DataflowGraph& g, const OpLatencyTable& t);

/// Critical path with every timed operator weighing 1.
int depth(const DataflowGraph& g);

/// FK, IK, KFF and FBF circuits.
std::map<std::string, DataflowGraph> builtin_graphs();

/// Measured module sample periods: FK 47, KFF 70, IK 218, FBF 21 ns.
std::map<std::string, double> reference_targets();

/// FK runs on both devices, so it counts twice:
/// 2*FK + KFF + IK + FBF. Missing modules contribute zero.
double hardware_latency(const std::map<std::string, double>& module_ns);

struct CalibrationResult {
  OpLatencyTable table;
  std::map<std::string, double> targets;
  std::map<std::string, double> fitted;     // critical paths under `table`
  std::map<std::string, double> residuals;  // fitted - target
  int iterations = 0;
  double t_hardware_ns = 0.0;
};

/// Nonnegative least-squares fit of the per-operator latencies so each
/// module's critical path matches its target. The op-count vector of each
/// critical path is refitted until the paths stop changing.
/// Throws ConfigError for unknown modules or non-positive targets and
/// CalibrationDegenerate when the targets are empty or every graph is empty.
CalibrationResult calibrate(
    const std::map<std::string, double>& targets,
    const std::map<std::string, DataflowGraph>& graphs = builtin_graphs());

/// Lawson-Hanson NNLS: argmin ||A x - b|| subject to x >= 0. A is row-major
/// with `cols` columns.
std::vector<double> nnls(const std::vector<double>& a, int cols,
                         const std::vector<double>& b);

}  // namespace tactile::latency
