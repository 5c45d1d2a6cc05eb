#pragma once

// Scenario files: a versioned YAML document describing one simulation run.

#include <cstdint>
#include <string>

#include "tactile/numerics.hpp"
#include "tactile/pipeline.hpp"

namespace tactile::cli {

enum class HybridMode {
  kIsolated,  // each hybrid module fed the oracle run's inputs
  kLoop,      // hybrid backend runs the whole loop on its own
};

struct Scenario {
  std::uint64_t seed = 0;
  PipelineConfig pipeline;
  bool run_oracle = true;
  bool run_hybrid = true;
  HybridMode hybrid_mode = HybridMode::kIsolated;
  numerics::CordicConfig cordic = numerics::CordicConfig::defaults();
  std::string output_dir = "out";
};

/// Accepts a plain number or a multiple of pi: "pi", "-pi/2", "3*pi/4",
/// "0.5*pi". Throws ConfigError naming `field`.
double parse_angle(const std::string& text, const std::string& field);

/// Throws ConfigError naming the offending field.
Scenario parse_scenario(const std::string& yaml_text);
Scenario load_scenario(const std::string& path);

}  // namespace tactile::cli
