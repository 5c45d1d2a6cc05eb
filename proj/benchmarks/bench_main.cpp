#include <benchmark/benchmark.h>

#include <cmath>

#include "tactile/force.hpp"
#include "tactile/kinematics.hpp"
#include "tactile/latency_model.hpp"
#include "tactile/numerics.hpp"
#include "tactile/pipeline.hpp"

using namespace tactile;

namespace {

void BM_CordicSinCos(benchmark::State& state) {
  const numerics::CordicConfig cfg(static_cast<int>(state.range(0)),
                                   numerics::QFormat::s16_13(), 4);
  const auto a = numerics::float_to_fixed(0.7, cfg.format());
  for (auto _ : state) benchmark::DoNotOptimize(numerics::cordic_sincos(a, cfg));
}
BENCHMARK(BM_CordicSinCos)->Arg(10)->Arg(16);

void BM_CordicAtan2(benchmark::State& state) {
  const auto cfg = numerics::CordicConfig::defaults();
  const auto y = numerics::float_to_fixed(0.3, cfg.format());
  const auto x = numerics::float_to_fixed(-0.8, cfg.format());
  for (auto _ : state) benchmark::DoNotOptimize(numerics::cordic_atan2(y, x, cfg));
}
BENCHMARK(BM_CordicAtan2);

void BM_Sqrt32(benchmark::State& state) {
  float x = 0.03645f;
  for (auto _ : state) {
    benchmark::DoNotOptimize(numerics::sqrt32(x));
    x += 1e-9f;
  }
}
BENCHMARK(BM_Sqrt32);

Backend backend_for(const benchmark::State& state) {
  return state.range(0) ? Backend::hybrid() : Backend::oracle();
}

void BM_ForwardKinematics(benchmark::State& state) {
  const auto b = backend_for(state);
  const DeviceGeometry g;
  const JointAngles q{0.3, 0.2, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(forward_kinematics(q, g, b));
}
BENCHMARK(BM_ForwardKinematics)->Arg(0)->Arg(1);

void BM_InverseKinematics(benchmark::State& state) {
  const auto b = backend_for(state);
  const DeviceGeometry g;
  const auto p = forward_kinematics({0.3, 0.2, 0.5}, g, Backend::oracle());
  for (auto _ : state) benchmark::DoNotOptimize(inverse_kinematics(p, g, b));
}
BENCHMARK(BM_InverseKinematics)->Arg(0)->Arg(1);

void BM_KinestheticFeedback(benchmark::State& state) {
  const auto b = backend_for(state);
  const DeviceGeometry g;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        kinesthetic_feedback({0.3, 0.2, 0.5}, {1.0, -2.0, 0.5}, g, b));
  }
}
BENCHMARK(BM_KinestheticFeedback)->Arg(0)->Arg(1);

void BM_PipelineRun(benchmark::State& state) {
  const auto b = backend_for(state);
  const PipelineConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(run_pipeline(cfg, b));
}
BENCHMARK(BM_PipelineRun)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Calibrate(benchmark::State& state) {
  const auto targets = latency::reference_targets();
  const auto graphs = latency::builtin_graphs();
  for (auto _ : state) benchmark::DoNotOptimize(latency::calibrate(targets, graphs));
}
BENCHMARK(BM_Calibrate)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
