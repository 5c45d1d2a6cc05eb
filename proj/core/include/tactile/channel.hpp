#pragma once

// Forward/backward channel impairment at sample granularity: per-component
// integer delay and additive Gaussian noise, reproducible from a seed.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "tactile/errors.hpp"

namespace tactile {

using Sample3 = std::array<double, 3>;

class DelayProfile {
 public:
  enum class Kind { kConstant, kRandomWalk };

  static DelayProfile constant(int d);
  /// Bounded walk: starts at the midpoint (rounded down), then moves -1 or +1
  /// each sample and is clamped to [d_min, d_max].
  static DelayProfile random_walk(int d_min, int d_max);

  Kind kind() const { return kind_; }
  int min_delay() const { return d_min_; }
  int max_delay() const { return d_max_; }

  friend bool operator==(const DelayProfile&, const DelayProfile&) = default;

 private:
  DelayProfile(Kind kind, int d_min, int d_max);

  Kind kind_ = Kind::kConstant;
  int d_min_ = 0;
  int d_max_ = 0;
};

struct ChannelConfig {
  Sample3 noise_variance{};  // sigma^2 per component
  std::array<DelayProfile, 3> delay{DelayProfile::constant(0),
                                    DelayProfile::constant(0),
                                    DelayProfile::constant(0)};
  std::uint64_t seed = 0;
  /// Distinguishes channels sharing a seed (FC and BC).
  std::uint64_t stream = 0;
  /// Emitted before the first delayed sample arrives; defaults to the n = 0
  /// input when unset.
  std::optional<Sample3> initial_hold;

  /// sigma^2 = 0 and zero delay on every component.
  static ChannelConfig transparent();
  bool is_transparent() const;

  /// Throws ConfigError naming the field.
  void validate() const;
};

class Channel {
 public:
  explicit Channel(ChannelConfig cfg);

  /// Calls must supply n = 0, 1, 2, ... in order; anything else throws
  /// OutOfOrderSample.
  Sample3 step(const Sample3& input, std::int64_t n);

  /// Delay applied to component i at the most recent step.
  int current_delay(int i) const { return delay_[static_cast<std::size_t>(i)]; }
  const ChannelConfig& config() const { return cfg_; }

 private:
  ChannelConfig cfg_;
  std::size_t ring_len_;
  std::array<std::vector<double>, 3> history_;
  std::array<int, 3> delay_{};
  Sample3 hold_{};
  std::int64_t next_n_ = 0;
};

/// Counter-based randomness. Values depend only on the key, never on call
/// order, so traces are reproducible across platforms.
namespace channel_rng {

std::uint64_t hash(std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t component, std::uint64_t n,
                   std::uint64_t counter);

/// Uniform in [0, 1) with 53 random bits.
double uniform(std::uint64_t key);

/// Standard normal via the Marsaglia polar method; rejected pairs advance
/// `counter`.
double gaussian(std::uint64_t seed, std::uint64_t stream,
                std::uint64_t component, std::uint64_t n);

}  // namespace channel_rng

}  // namespace tactile
