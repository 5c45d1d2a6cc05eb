#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "tactile/channel.hpp"

using namespace tactile;

namespace {

ChannelConfig delayed(int d) {
  auto cfg = ChannelConfig::transparent();
  cfg.delay = {DelayProfile::constant(d), DelayProfile::constant(d),
               DelayProfile::constant(d)};
  return cfg;
}

std::vector<Sample3> run(const ChannelConfig& cfg,
                         const std::vector<Sample3>& in) {
  Channel ch(cfg);
  std::vector<Sample3> out;
  for (std::size_t n = 0; n < in.size(); ++n) {
    out.push_back(ch.step(in[n], static_cast<std::int64_t>(n)));
  }
  return out;
}

std::vector<Sample3> ramp(int len) {
  std::vector<Sample3> in;
  for (int n = 0; n < len; ++n) {
    in.push_back({0.001 * n, -0.5 * n, std::sin(0.1 * n)});
  }
  return in;
}

}  // namespace

TEST(Channel, TransparentIsBitExactIdentity) {
  const auto cfg = ChannelConfig::transparent();
  EXPECT_TRUE(cfg.is_transparent());
  const auto in = ramp(500);
  EXPECT_EQ(run(cfg, in), in);
}

TEST(Channel, ConstantDelayShiftsUnitStep) {
  auto cfg = delayed(3);
  cfg.initial_hold = Sample3{-1.0, -1.0, -1.0};
  std::vector<Sample3> in(10, Sample3{1.0, 1.0, 1.0});
  const auto out = run(cfg, in);
  for (int n = 0; n < 3; ++n) EXPECT_EQ(out[n][0], -1.0) << n;
  for (int n = 3; n < 10; ++n) EXPECT_EQ(out[n][0], 1.0) << n;
}

TEST(Channel, HoldDefaultsToFirstInput) {
  const auto in = ramp(20);
  const auto out = run(delayed(5), in);
  for (int n = 0; n < 5; ++n) EXPECT_EQ(out[n], in[0]);
  for (int n = 5; n < 20; ++n) EXPECT_EQ(out[n], in[n - 5]);
}

TEST(Channel, PerComponentDelays) {
  auto cfg = ChannelConfig::transparent();
  cfg.delay = {DelayProfile::constant(0), DelayProfile::constant(2),
               DelayProfile::constant(7)};
  const auto in = ramp(30);
  const auto out = run(cfg, in);
  for (int n = 7; n < 30; ++n) {
    EXPECT_EQ(out[n][0], in[n][0]);
    EXPECT_EQ(out[n][1], in[n - 2][1]);
    EXPECT_EQ(out[n][2], in[n - 7][2]);
  }
}

TEST(Channel, SeededNoiseIsReproducible) {
  auto cfg = ChannelConfig::transparent();
  cfg.noise_variance = {1e-6, 1e-6, 1e-6};
  cfg.seed = 1234;
  const auto in = ramp(1000);
  const auto a = run(cfg, in);
  EXPECT_EQ(a, run(cfg, in));
  EXPECT_NE(a, in);
  cfg.seed = 1235;
  EXPECT_NE(a, run(cfg, in));
  cfg.seed = 1234;
  cfg.stream = 1;
  EXPECT_NE(a, run(cfg, in));
}

TEST(Channel, NoiseStatistics) {
  const double var = 1e-6;
  auto cfg = ChannelConfig::transparent();
  cfg.noise_variance = {var, var, var};
  cfg.seed = 99;
  Channel ch(cfg);
  const int count = 100000;
  double sum[3] = {};
  double sq[3] = {};
  for (int n = 0; n < count; ++n) {
    const auto y = ch.step({0.0, 0.0, 0.0}, n);
    for (int i = 0; i < 3; ++i) {
      sum[i] += y[i];
      sq[i] += y[i] * y[i];
    }
  }
  for (int i = 0; i < 3; ++i) {
    const double mean = sum[i] / count;
    const double v = sq[i] / count - mean * mean;
    EXPECT_LE(std::abs(mean), 4 * std::sqrt(var) / std::sqrt(count)) << i;
    EXPECT_NEAR(v, var, 0.05 * var) << i;
  }
}

TEST(Channel, OutOfOrderSamplesRejected) {
  Channel a(ChannelConfig::transparent());
  EXPECT_THROW(a.step({}, 1), OutOfOrderSample);
  Channel b(ChannelConfig::transparent());
  b.step({}, 0);
  EXPECT_THROW(b.step({}, 0), OutOfOrderSample);
  EXPECT_THROW(b.step({}, 2), OutOfOrderSample);
  EXPECT_NO_THROW(b.step({}, 1));
}

TEST(Channel, RandomWalkStaysInBoundsAndMoves) {
  auto cfg = ChannelConfig::transparent();
  cfg.delay = {DelayProfile::random_walk(2, 9), DelayProfile::random_walk(0, 1),
               DelayProfile::random_walk(4, 4)};
  cfg.seed = 5;
  Channel ch(cfg);
  bool moved = false;
  int first = -1;
  for (int n = 0; n < 2000; ++n) {
    ch.step({0, 0, 0}, n);
    const int d = ch.current_delay(0);
    ASSERT_GE(d, 2);
    ASSERT_LE(d, 9);
    if (n == 0) {
      first = d;
      EXPECT_EQ(d, 5);
    } else if (d != first) {
      moved = true;
    }
    ASSERT_GE(ch.current_delay(1), 0);
    ASSERT_LE(ch.current_delay(1), 1);
    ASSERT_EQ(ch.current_delay(2), 4);
  }
  EXPECT_TRUE(moved);
}

// With the input equal to its own index, the output value is the index of
// the sample that was delivered, which must never lie in the future.
TEST(Channel, RandomDelayNeverBreaksCausality) {
  auto cfg = ChannelConfig::transparent();
  cfg.delay = {DelayProfile::random_walk(0, 12),
               DelayProfile::random_walk(3, 6),
               DelayProfile::random_walk(0, 30)};
  cfg.seed = 77;
  Channel ch(cfg);
  for (int n = 0; n < 5000; ++n) {
    const double v = n;
    const auto y = ch.step({v, v, v}, n);
    for (int i = 0; i < 3; ++i) {
      ASSERT_LE(y[i], v);
      ASSERT_GE(y[i], std::max(0, n - cfg.delay[i].max_delay()));
    }
  }
}

TEST(Channel, ConfigValidation) {
  auto cfg = ChannelConfig::transparent();
  cfg.noise_variance[1] = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_THROW(Channel{cfg}, ConfigError);
  cfg = ChannelConfig::transparent();
  cfg.noise_variance[0] = NAN;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = ChannelConfig::transparent();
  cfg.delay[2] = DelayProfile::constant(-1);
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.delay[2] = DelayProfile::random_walk(5, 2);
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg.delay[2] = DelayProfile::random_walk(2, 5);
  EXPECT_NO_THROW(cfg.validate());
}

TEST(ChannelRng, GaussianMomentsFromKeys) {
  double sum = 0.0;
  double sq = 0.0;
  const int count = 200000;
  for (int n = 0; n < count; ++n) {
    const double g = channel_rng::gaussian(1, 0, 0, n);
    sum += g;
    sq += g * g;
  }
  EXPECT_NEAR(sum / count, 0.0, 4.0 / std::sqrt(count));
  EXPECT_NEAR(sq / count, 1.0, 0.02);
  EXPECT_EQ(channel_rng::gaussian(1, 2, 3, 4), channel_rng::gaussian(1, 2, 3, 4));
}

TEST(ChannelRng, UniformRange) {
  for (std::uint64_t k = 0; k < 10000; ++k) {
    const double u = channel_rng::uniform(channel_rng::hash(9, 0, 0, k, 0));
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
  EXPECT_EQ(channel_rng::uniform(0), 0.0);
  EXPECT_LT(channel_rng::uniform(~0ULL), 1.0);
}
