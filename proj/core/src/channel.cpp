#include "tactile/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace tactile {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Counter slots: even values feed the Gaussian, odd ones the delay walk.
constexpr std::uint64_t kWalkCounter = 1;

}  // namespace

namespace channel_rng {

std::uint64_t hash(std::uint64_t seed, std::uint64_t stream,
                   std::uint64_t component, std::uint64_t n,
                   std::uint64_t counter) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ component);
  h = splitmix64(h ^ n);
  return splitmix64(h ^ counter);
}

double uniform(std::uint64_t key) {
  return static_cast<double>(key >> 11) * 0x1.0p-53;
}

double gaussian(std::uint64_t seed, std::uint64_t stream,
                std::uint64_t component, std::uint64_t n) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    const double u =
        2.0 * uniform(hash(seed, stream, component, n, 4 * attempt)) - 1.0;
    const double v =
        2.0 * uniform(hash(seed, stream, component, n, 4 * attempt + 2)) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

}  // namespace channel_rng

DelayProfile::DelayProfile(Kind kind, int d_min, int d_max)
    : kind_(kind), d_min_(d_min), d_max_(d_max) {}

DelayProfile DelayProfile::constant(int d) {
  return DelayProfile(Kind::kConstant, d, d);
}

DelayProfile DelayProfile::random_walk(int d_min, int d_max) {
  return DelayProfile(Kind::kRandomWalk, d_min, d_max);
}

ChannelConfig ChannelConfig::transparent() { return ChannelConfig{}; }

bool ChannelConfig::is_transparent() const {
  for (std::size_t i = 0; i < 3; ++i) {
    if (noise_variance[i] != 0.0 || delay[i].max_delay() != 0) return false;
  }
  return true;
}

void ChannelConfig::validate() const {
  for (std::size_t i = 0; i < 3; ++i) {
    const std::string idx = "[" + std::to_string(i) + "]";
    if (!(std::isfinite(noise_variance[i]) && noise_variance[i] >= 0.0)) {
      throw ConfigError("sigma2" + idx, "noise variance must be finite and >= 0");
    }
    if (delay[i].min_delay() < 0 || delay[i].max_delay() < delay[i].min_delay()) {
      throw ConfigError("delay" + idx,
                        "delays must satisfy 0 <= d_min <= d_max");
    }
    if (initial_hold && !std::isfinite((*initial_hold)[i])) {
      throw ConfigError("initial_hold" + idx, "hold value must be finite");
    }
  }
}

Channel::Channel(ChannelConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  int d_max = 0;
  for (const auto& d : cfg_.delay) d_max = std::max(d_max, d.max_delay());
  ring_len_ = static_cast<std::size_t>(d_max) + 1;
  for (auto& h : history_) h.assign(ring_len_, 0.0);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& d = cfg_.delay[i];
    delay_[i] = d.min_delay() + (d.max_delay() - d.min_delay()) / 2;
  }
}

Sample3 Channel::step(const Sample3& input, std::int64_t n) {
  if (n != next_n_) throw OutOfOrderSample(next_n_, n);
  ++next_n_;
  if (n == 0) hold_ = cfg_.initial_hold.value_or(input);

  const auto un = static_cast<std::uint64_t>(n);
  const std::size_t slot = static_cast<std::size_t>(n) % ring_len_;
  Sample3 out{};
  for (std::size_t i = 0; i < 3; ++i) {
    history_[i][slot] = input[i];

    const auto& profile = cfg_.delay[i];
    if (profile.kind() == DelayProfile::Kind::kRandomWalk && n > 0) {
      const auto bit =
          channel_rng::hash(cfg_.seed, cfg_.stream, i, un, kWalkCounter) >> 63;
      delay_[i] = std::clamp(delay_[i] + (bit ? 1 : -1), profile.min_delay(),
                             profile.max_delay());
    }

    const int d = delay_[i];
    if (n < d) {
      out[i] = hold_[i];
      continue;
    }
    out[i] = history_[i][static_cast<std::size_t>(n - d) % ring_len_];
    if (cfg_.noise_variance[i] > 0.0) {
      out[i] += std::sqrt(cfg_.noise_variance[i]) *
                channel_rng::gaussian(cfg_.seed, cfg_.stream, i, un);
    }
  }
  return out;
}

}  // namespace tactile
