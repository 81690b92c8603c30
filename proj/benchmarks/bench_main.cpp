#include <benchmark/benchmark.h>

#include "pushbutton/acoustics.hpp"
#include "pushbutton/radiation_force.hpp"
#include "pushbutton/sensing.hpp"

using namespace pushbutton;

namespace {

const Scene& scene() {
  static const Scene s = default_scene();
  return s;
}

const DriveState& drive() {
  static const DriveState d = focus_phases(scene(), {{0, 0, 3e-3}, true});
  return d;
}

void BM_PressureAt(benchmark::State& state) {
  const Vec3 p{1e-3, 2e-3, 3e-3};
  for (auto _ : state) benchmark::DoNotOptimize(pressure_at(scene(), drive(), p));
}
BENCHMARK(BM_PressureAt);

void BM_SourceFieldEvaluate(benchmark::State& state) {
  const SourceField field = build_source_field(scene(), drive());
  Vec3 p{0, 0, 3e-3};
  for (auto _ : state) {
    p.x += 1e-9;
    benchmark::DoNotOptimize(field.evaluate(p));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(field.size()));
}
BENCHMARK(BM_SourceFieldEvaluate);

void BM_FieldSlice(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto spec = GridSpec::box({-40e-3, -40e-3, 3e-3}, {n, n, 1}, 80e-3 / static_cast<double>(n - 1));
  for (auto _ : state) benchmark::DoNotOptimize(field_grid(scene(), drive(), spec).values.data());
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}
BENCHMARK(BM_FieldSlice)->Arg(21)->Arg(41)->Unit(benchmark::kMillisecond);

void BM_DiscForce(benchmark::State& state) {
  ForceOptions opt;
  opt.bounce_order = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(radiation_force_disc(scene(), drive(), {}, 5e-3, opt));
}
BENCHMARK(BM_DiscForce)->Arg(0)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_DetectorStep(benchmark::State& state) {
  DetectorState s = DetectorState::make(2.0, 3.0);
  double t = 0.0;
  std::size_t i = 0;
  for (auto _ : state) {
    const double v = (i++ / 50) % 2 ? 0.5 : 4.5;
    t += 1e-3;
    auto step = detector_step(s, {v, t});
    s = step.state;
    benchmark::DoNotOptimize(step.event);
  }
}
BENCHMARK(BM_DetectorStep);

void BM_Occlusion(benchmark::State& state) {
  const BeamModel beam = beam_for(scene(), SensorConfig{});
  double h = 2.5e-3;
  for (auto _ : state) {
    h = h > 3.5e-3 ? 2.5e-3 : h + 1e-7;
    benchmark::DoNotOptimize(photovoltage(occlusion(FingerModel::at_height(h, 7e-3), beam), beam));
  }
}
BENCHMARK(BM_Occlusion);

}  // namespace
BENCHMARK_MAIN();
