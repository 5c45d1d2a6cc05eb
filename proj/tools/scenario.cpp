#include "scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace tactile::cli {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  const char* first = s.data();
  if (*first == '+') ++first;
  const auto res = std::from_chars(first, s.data() + s.size(), out);
  return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

void check_keys(const YAML::Node& node, const std::string& field,
                std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ConfigError(field, "expected a mapping");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& kv : node) {
    const auto key = kv.first.as<std::string>();
    if (!ok.count(key)) {
      throw ConfigError(field.empty() ? key : field + "." + key,
                        "unknown key");
    }
  }
}

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

double as_double(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) throw ConfigError(field, "expected a number");
  double v = 0.0;
  if (!parse_number(trim(n.Scalar()), v) || !std::isfinite(v)) {
    throw ConfigError(field, "expected a number, got '" + n.Scalar() + "'");
  }
  return v;
}

std::int64_t as_int(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) throw ConfigError(field, "expected an integer");
  const std::string s = trim(n.Scalar());
  std::int64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(field, "expected an integer, got '" + s + "'");
  }
  return v;
}

std::uint64_t as_uint(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) throw ConfigError(field, "expected an unsigned integer");
  const std::string s = trim(n.Scalar());
  std::uint64_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw ConfigError(field, "expected an unsigned integer, got '" + s + "'");
  }
  return v;
}

std::string as_string(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) throw ConfigError(field, "expected a string");
  return n.Scalar();
}

std::array<double, 3> as_vec3(const YAML::Node& n, const std::string& field) {
  if (n.IsScalar()) {
    const double v = as_double(n, field);
    return {v, v, v};
  }
  if (!n.IsSequence() || n.size() != 3) {
    throw ConfigError(field, "expected a number or a list of three numbers");
  }
  return {as_double(n[0], field + "[0]"), as_double(n[1], field + "[1]"),
          as_double(n[2], field + "[2]")};
}

TrajectorySpec parse_trajectory(const YAML::Node& n) {
  const std::string f = "trajectory";
  check_keys(n, f, {"sample_period", "segments"});
  TrajectorySpec spec = TrajectorySpec::standard();
  if (n["sample_period"]) {
    spec.sample_period = as_double(n["sample_period"], f + ".sample_period");
  }
  if (const auto segs = n["segments"]) {
    if (!segs.IsSequence()) throw ConfigError(f + ".segments", "expected a list");
    spec.segments.clear();
    for (std::size_t i = 0; i < segs.size(); ++i) {
      const std::string sf = f + ".segments[" + std::to_string(i) + "]";
      const auto& s = segs[i];
      check_keys(s, sf, {"joint", "start", "end", "samples"});
      for (const char* key : {"joint", "end", "samples"}) {
        if (!s[key]) throw ConfigError(join(sf, key), "required");
      }
      TrajectorySegment seg;
      seg.joint = static_cast<int>(as_int(s["joint"], sf + ".joint"));
      seg.start = s["start"] ? parse_angle(as_string(s["start"], sf + ".start"),
                                           sf + ".start")
                             : 0.0;
      seg.end = parse_angle(as_string(s["end"], sf + ".end"), sf + ".end");
      seg.samples = as_int(s["samples"], sf + ".samples");
      spec.segments.push_back(seg);
    }
  }
  spec.validate();
  return spec;
}

DeviceGeometry parse_geometry(const YAML::Node& n) {
  check_keys(n, "geometry", {"l1", "l2", "l3", "l4"});
  DeviceGeometry g;
  if (n["l1"]) g.l1 = as_double(n["l1"], "geometry.l1");
  if (n["l2"]) g.l2 = as_double(n["l2"], "geometry.l2");
  if (n["l3"]) g.l3 = as_double(n["l3"], "geometry.l3");
  if (n["l4"]) g.l4 = as_double(n["l4"], "geometry.l4");
  g.validate();
  return g;
}

ElasticitySchedule parse_elasticity(const YAML::Node& n,
                                    const std::string& f) {
  auto to_h = [](std::array<double, 3> v) {
    return Elasticity{v[0], v[1], v[2]};
  };
  // A list of maps is a schedule; anything else is a constant.
  if (n.IsSequence() && n.size() > 0 && n[0].IsMap()) {
    std::vector<ElasticitySchedule::Breakpoint> points;
    for (std::size_t i = 0; i < n.size(); ++i) {
      const std::string bf = f + "[" + std::to_string(i) + "]";
      check_keys(n[i], bf, {"start", "h"});
      if (!n[i]["start"] || !n[i]["h"]) {
        throw ConfigError(bf, "breakpoints need 'start' and 'h'");
      }
      points.push_back({as_int(n[i]["start"], bf + ".start"),
                        to_h(as_vec3(n[i]["h"], bf + ".h"))});
    }
    return ElasticitySchedule(std::move(points));
  }
  return ElasticitySchedule(to_h(as_vec3(n, f)));
}

Scene parse_scene(const YAML::Node& n) {
  const std::string f = "scene";
  check_keys(n, f, {"elasticity", "plane", "type"});
  const std::string type =
      n["type"] ? as_string(n["type"], f + ".type") : std::string("plane");
  ElasticitySchedule h = n["elasticity"]
                             ? parse_elasticity(n["elasticity"], f + ".elasticity")
                             : Scene::standard().elasticity();
  if (type == "none") return Scene::none(std::move(h));
  if (type != "plane") {
    throw ConfigError(f + ".type", "expected 'plane' or 'none'");
  }
  const Scene std_scene = Scene::standard();
  std::array<double, 3> normal = std_scene.normal();
  double offset = std_scene.offset();
  if (const auto p = n["plane"]) {
    check_keys(p, f + ".plane", {"normal", "offset"});
    if (p["normal"]) normal = as_vec3(p["normal"], f + ".plane.normal");
    if (p["offset"]) offset = as_double(p["offset"], f + ".plane.offset");
  }
  return Scene::plane(normal, offset, std::move(h));
}

DelayProfile parse_delay(const YAML::Node& n, const std::string& f) {
  if (n.IsMap()) {
    check_keys(n, f, {"min", "max"});
    if (!n["min"] || !n["max"]) {
      throw ConfigError(f, "random-walk delay needs 'min' and 'max'");
    }
    const auto lo = as_int(n["min"], f + ".min");
    const auto hi = as_int(n["max"], f + ".max");
    if (lo < 0 || hi < lo || hi > 1'000'000) {
      throw ConfigError(f, "need 0 <= min <= max <= 1000000");
    }
    return DelayProfile::random_walk(static_cast<int>(lo), static_cast<int>(hi));
  }
  const auto d = as_int(n, f);
  if (d < 0 || d > 1'000'000) {
    throw ConfigError(f, "delay must be an integer in [0, 1000000]");
  }
  return DelayProfile::constant(static_cast<int>(d));
}

ChannelConfig parse_channel(const YAML::Node& n, const std::string& f,
                            std::uint64_t seed) {
  check_keys(n, f, {"sigma2", "delay", "hold"});
  ChannelConfig c;
  c.seed = seed;
  if (n["sigma2"]) c.noise_variance = as_vec3(n["sigma2"], f + ".sigma2");
  if (const auto d = n["delay"]) {
    if (d.IsSequence()) {
      if (d.size() != 3) throw ConfigError(f + ".delay", "expected 3 entries");
      for (std::size_t i = 0; i < 3; ++i) {
        c.delay[i] = parse_delay(d[i], f + ".delay[" + std::to_string(i) + "]");
      }
    } else {
      c.delay.fill(parse_delay(d, f + ".delay"));
    }
  }
  if (n["hold"]) c.initial_hold = as_vec3(n["hold"], f + ".hold");
  for (std::size_t i = 0; i < 3; ++i) {
    if (c.noise_variance[i] < 0.0) {
      throw ConfigError(f + ".sigma2", "variance must be >= 0");
    }
  }
  return c;
}

numerics::CordicConfig parse_cordic(const YAML::Node& n) {
  const std::string f = "hybrid.cordic";
  check_keys(n, f, {"format", "iterations", "guard_bits"});
  const auto d = numerics::CordicConfig::defaults();
  numerics::QFormat fmt = d.format();
  int iterations = d.iterations();
  int guard = d.guard_bits();
  try {
    if (n["format"]) fmt = numerics::QFormat::parse(as_string(n["format"], f));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(f + ".format", e.what());
  }
  if (n["iterations"]) {
    iterations = static_cast<int>(as_int(n["iterations"], f + ".iterations"));
  }
  if (n["guard_bits"]) {
    guard = static_cast<int>(as_int(n["guard_bits"], f + ".guard_bits"));
  }
  try {
    return numerics::CordicConfig(iterations, fmt, guard);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(f, e.what());
  }
}

}  // namespace

double parse_angle(const std::string& text, const std::string& field) {
  const std::string s = trim(text);
  double v = 0.0;
  if (parse_number(s, v) && std::isfinite(v)) return v;

  // [sign][coef*]pi[/den]
  std::string rest = s;
  double sign = 1.0;
  if (!rest.empty() && (rest[0] == '-' || rest[0] == '+')) {
    sign = rest[0] == '-' ? -1.0 : 1.0;
    rest = trim(rest.substr(1));
  }
  const auto pi_pos = rest.find("pi");
  if (pi_pos == std::string::npos) {
    throw ConfigError(field, "expected a number or a multiple of pi, got '" +
                                 text + "'");
  }
  double coef = 1.0;
  const std::string head = trim(rest.substr(0, pi_pos));
  if (!head.empty()) {
    if (head.back() != '*' ||
        !parse_number(trim(head.substr(0, head.size() - 1)), coef)) {
      throw ConfigError(field, "cannot parse angle '" + text + "'");
    }
  }
  double den = 1.0;
  const std::string tail = trim(rest.substr(pi_pos + 2));
  if (!tail.empty()) {
    if (tail[0] != '/' || !parse_number(trim(tail.substr(1)), den) ||
        den == 0.0) {
      throw ConfigError(field, "cannot parse angle '" + text + "'");
    }
  }
  return sign * coef * std::numbers::pi / den;
}

Scenario parse_scenario(const std::string& yaml_text) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml_text);
  } catch (const YAML::Exception& e) {
    throw ConfigError("scenario", std::string("YAML parse error: ") + e.what());
  }
  if (!root.IsMap()) throw ConfigError("scenario", "expected a mapping");
  check_keys(root, "", {"version", "seed", "trajectory", "geometry", "scene",
                        "channels", "backends", "hybrid", "tracking",
                        "output"});

  if (!root["version"]) throw ConfigError("version", "required");
  if (as_int(root["version"], "version") != 1) {
    throw ConfigError("version", "unsupported schema version");
  }
  if (!root["seed"]) throw ConfigError("seed", "required");

  Scenario s;
  s.seed = as_uint(root["seed"], "seed");
  auto& p = s.pipeline;
  if (root["trajectory"]) p.trajectory = parse_trajectory(root["trajectory"]);
  if (root["geometry"]) p.geometry = parse_geometry(root["geometry"]);
  if (root["scene"]) p.scene = parse_scene(root["scene"]);

  p.fc.seed = s.seed;
  p.bc.seed = s.seed;
  if (const auto ch = root["channels"]) {
    check_keys(ch, "channels", {"fc", "bc"});
    if (ch["fc"]) p.fc = parse_channel(ch["fc"], "channels.fc", s.seed);
    if (ch["bc"]) p.bc = parse_channel(ch["bc"], "channels.bc", s.seed);
  }

  if (const auto b = root["backends"]) {
    if (!b.IsSequence() || b.size() == 0) {
      throw ConfigError("backends", "expected a non-empty list");
    }
    s.run_oracle = s.run_hybrid = false;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto name = as_string(b[i], "backends");
      if (name == "oracle") {
        s.run_oracle = true;
      } else if (name == "hybrid") {
        s.run_hybrid = true;
      } else {
        throw ConfigError("backends[" + std::to_string(i) + "]",
                          "expected 'oracle' or 'hybrid'");
      }
    }
  }

  if (const auto h = root["hybrid"]) {
    check_keys(h, "hybrid", {"mode", "cordic"});
    if (h["mode"]) {
      const auto mode = as_string(h["mode"], "hybrid.mode");
      if (mode == "isolated") {
        s.hybrid_mode = HybridMode::kIsolated;
      } else if (mode == "loop") {
        s.hybrid_mode = HybridMode::kLoop;
      } else {
        throw ConfigError("hybrid.mode", "expected 'isolated' or 'loop'");
      }
    }
    if (h["cordic"]) s.cordic = parse_cordic(h["cordic"]);
  }
  if (s.run_hybrid && !s.run_oracle && s.hybrid_mode == HybridMode::kIsolated) {
    throw ConfigError("hybrid.mode",
                      "isolated mode needs the oracle backend as reference");
  }

  if (const auto t = root["tracking"]) {
    check_keys(t, "tracking", {"pole"});
    if (t["pole"]) p.tracking.pole = as_double(t["pole"], "tracking.pole");
  }
  if (const auto o = root["output"]) {
    check_keys(o, "output", {"dir"});
    if (o["dir"]) s.output_dir = as_string(o["dir"], "output.dir");
  }

  p.validate();
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open scenario file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace tactile::cli
