#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "scenario.hpp"
#include "tactile/latency_model.hpp"
#include "tactile/pipeline.hpp"
#include "tactile/trace_io.hpp"

namespace tactile::cli {
namespace {

using nlohmann::ordered_json;

const std::vector<double> kLatencyLimits = {1e-3, 10e-3};

std::string output_dir(const Scenario& s) {
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return s.output_dir;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  if (!f) throw std::runtime_error("write failed for " + path.string());
}

ordered_json speedup_json(double t_hardware_s) {
  ordered_json rows = ordered_json::array();
  for (const auto& r : speedup_report(t_hardware_s, kLatencyLimits)) {
    rows.push_back({{"t_latency_s", r.t_latency},
                    {"hardware_time_limit_s", r.time_limit},
                    {"ratio", r.ratio},
                    {"speedup", r.speedup}});
  }
  return rows;
}

ordered_json latency_report(const latency::CalibrationResult& cal) {
  const auto graphs = latency::builtin_graphs();
  ordered_json table = ordered_json::object();
  for (int k = 0; k < latency::kTimedOpCount; ++k) {
    const auto kind = static_cast<latency::OpKind>(k);
    table[std::string(latency::to_string(kind))] = cal.table.at(kind);
  }
  ordered_json modules = ordered_json::object();
  for (const auto& [name, target] : cal.targets) {
    const auto& g = graphs.at(name);
    const auto path = latency::critical_path_report(g, cal.table);
    ordered_json labels = ordered_json::array();
    for (int id : path.nodes) {
      labels.push_back(g.nodes()[static_cast<std::size_t>(id)].label);
    }
    modules[name] = {{"target_ns", target},
                     {"critical_path_ns", cal.fitted.at(name)},
                     {"residual_ns", cal.residuals.at(name)},
                     {"relative_residual", cal.residuals.at(name) / target},
                     {"depth", latency::depth(g)},
                     {"path", labels}};
  }
  ordered_json report = {{"op_latency_ns", table},
                         {"modules", modules},
                         {"iterations", cal.iterations},
                         {"t_hardware_ns", cal.t_hardware_ns}};
  if (cal.t_hardware_ns > 0.0) {
    report["speedup"] = speedup_json(cal.t_hardware_ns * 1e-9);
  }
  return report;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string trace_csv(const SimulationTrace& t) {
  std::ostringstream os;
  write_trace_csv(os, t);
  return os.str();
}

}  // namespace

int cmd_run(const std::string& scenario_path, std::ostream& out,
            std::ostream& err) {
  Scenario s;
  try {
    s = load_scenario(scenario_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const std::filesystem::path dir = output_dir(s);
    std::filesystem::create_directories(dir);
    const auto hybrid = Backend::hybrid(s.cordic);

    ordered_json summary;
    summary["version"] = 1;
    summary["scenario"] = scenario_path;
    summary["seed"] = s.seed;
    summary["samples"] = s.pipeline.trajectory.total_samples();
    summary["sample_period_s"] = s.pipeline.trajectory.sample_period;

    std::optional<SimulationTrace> oracle_trace;
    std::optional<SimulationTrace> hybrid_trace;
    ordered_json files = ordered_json::array();
    if (s.run_oracle) {
      oracle_trace = run_pipeline(s.pipeline, Backend::oracle());
      write_file(dir / "trace_oracle.csv", trace_csv(*oracle_trace));
      files.push_back("trace_oracle.csv");
    }
    if (s.run_hybrid) {
      hybrid_trace = s.hybrid_mode == HybridMode::kIsolated
                         ? run_modules_isolated(*oracle_trace, s.pipeline, hybrid)
                         : run_pipeline(s.pipeline, hybrid);
      write_file(dir / "trace_hybrid.csv", trace_csv(*hybrid_trace));
      files.push_back("trace_hybrid.csv");
      summary["hybrid"] = {
          {"mode", s.hybrid_mode == HybridMode::kIsolated ? "isolated" : "loop"},
          {"cordic",
           {{"format", s.cordic.format().to_string()},
            {"iterations", s.cordic.iterations()},
            {"guard_bits", s.cordic.guard_bits()}}}};
    }
    summary["traces"] = files;

    if (oracle_trace && hybrid_trace) {
      ordered_json mse = ordered_json::array();
      for (const auto& e : module_mse_table(*oracle_trace, *hybrid_trace)) {
        mse.push_back(
            {{"module", e.module}, {"variable", e.variable}, {"mse", e.mse}});
      }
      summary["mse"] = mse;
    }

    const auto cal = latency::calibrate(latency::reference_targets());
    ordered_json limits = ordered_json::array();
    for (double t : kLatencyLimits) {
      limits.push_back(
          {{"t_latency_s", t}, {"hardware_time_limit_s", hardware_time_limit(t)}});
    }
    summary["budget"] = {{"limits", limits},
                         {"t_hardware_ns", cal.t_hardware_ns},
                         {"speedup", speedup_json(cal.t_hardware_ns * 1e-9)}};

    write_file(dir / "summary.json", summary.dump(2) + "\n");
    out << "wrote " << (dir / "summary.json").string() << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Unreachable& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int cmd_latency(const std::string& targets, std::ostream& out,
                std::ostream& err) {
  std::map<std::string, double> t;
  try {
    if (targets.empty()) {
      t = latency::reference_targets();
    } else {
      const bool inline_json = targets.find('{') != std::string::npos;
      const auto doc = ordered_json::parse(
          inline_json ? targets : read_text(targets));
      if (!doc.is_object()) throw ConfigError("targets", "expected a JSON object");
      for (const auto& [name, v] : doc.items()) {
        if (!v.is_number()) {
          throw ConfigError("targets." + name, "expected a number");
        }
        t[name] = v.get<double>();
      }
    }
    out << latency_report(latency::calibrate(t)).dump(2) << '\n';
    return kExitOk;
  } catch (const ordered_json::parse_error& e) {
    err << "config error: targets: " << e.what() << '\n';
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const CalibrationDegenerate& e) {
    err << "calibration error: " << e.what() << '\n';
  }
  return kExitConfig;
}

int cmd_mse(const std::string& a_path, const std::string& b_path,
            std::ostream& out, std::ostream& err) {
  try {
    const auto a = read_csv(a_path);
    const auto b = read_csv(b_path);
    if (a.header != b.header) {
      throw ConfigError(b_path, "column header differs from " + a_path);
    }
    if (a.rows.size() != b.rows.size()) {
      throw ConfigError(b_path, "row count " + std::to_string(b.rows.size()) +
                                    " differs from " +
                                    std::to_string(a.rows.size()) + " in " +
                                    a_path);
    }
    if (a.rows.empty()) throw ConfigError(a_path, "no data rows");
    ordered_json cols = ordered_json::array();
    for (std::size_t i = 0; i < a.header.size(); ++i) {
      cols.push_back({{"column", a.header[i]},
                      {"mse", compute_mse(a.column(i), b.column(i))}});
    }
    out << ordered_json{{"rows", a.rows.size()}, {"columns", cols}}.dump(2)
        << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace tactile::cli
