#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "pushbutton/error.hpp"
#include "pushbutton/harness.hpp"
#include "pushbutton/io.hpp"

using namespace pushbutton;

namespace {

SessionLog session(Condition c, const Trajectory& t, double burst = 50e-3, SensorConfig sensor = {}) {
  FeedbackConfig f;
  f.condition = c;
  f.burst_duration = burst;
  return run_session(default_scene(), sensor, f, t);
}

SweepOptions quick_sweep() {
  SweepOptions o;
  o.force.radial_nodes = 4;
  o.force.angular_nodes = 8;
  return o;
}

}  // namespace

TEST(Trajectory, TouchingRange) {
  const auto t = sinusoid_trajectory(5, 2.0, 10e-3, TouchMode::TouchingPlate);
  EXPECT_EQ(t.size(), 10001u);
  EXPECT_NEAR(*std::min_element(t.heights.begin(), t.heights.end()), 0.0, 1e-15);
  EXPECT_NEAR(*std::max_element(t.heights.begin(), t.heights.end()), 10e-3, 1e-15);
  EXPECT_NO_THROW(validate_trajectory(t));
}

TEST(Trajectory, AirborneFloor) {
  const auto t = sinusoid_trajectory(2, 2.0, 10e-3, TouchMode::Airborne);
  EXPECT_NEAR(*std::min_element(t.heights.begin(), t.heights.end()), kAirborneFloor, 1e-15);
}

TEST(Trajectory, Rejections) {
  EXPECT_THROW(sinusoid_trajectory(0, 2.0, 10e-3, TouchMode::TouchingPlate), ConfigError);
  EXPECT_THROW(sinusoid_trajectory(1, -2.0, 10e-3, TouchMode::TouchingPlate), ConfigError);
  Trajectory bad{{0.0, 0.0}, {1e-3, 1e-3}, TouchMode::TouchingPlate};
  EXPECT_THROW(validate_trajectory(bad), TimeOrderError);
}

TEST(Session, OneCycleOnePair) {
  const auto log = session(Condition::Both, sinusoid_trajectory(1, 2.0, 10e-3, TouchMode::TouchingPlate));
  ASSERT_EQ(log.events.size(), 2u);
  EXPECT_EQ(log.events[0].kind, EventKind::Down);
  EXPECT_EQ(log.events[1].kind, EventKind::Up);
}

TEST(Session, StrokeBelowBeamHasNoEvents) {
  const auto log = session(Condition::Both, sinusoid_trajectory(5, 2.0, 2e-3, TouchMode::TouchingPlate));
  EXPECT_TRUE(log.events.empty());
  EXPECT_TRUE(log.commands.empty());
  EXPECT_THROW(measure_latency(log), NoDataError);
}

TEST(Session, ConditionCounts) {
  for (auto mode : {TouchMode::TouchingPlate, TouchMode::Airborne}) {
    const auto t = sinusoid_trajectory(5, 2.0, 10e-3, mode);
    EXPECT_EQ(session(Condition::Both, t).commands.size(), 10u);
    EXPECT_EQ(session(Condition::DownOnly, t).commands.size(), 5u);
    const auto up = session(Condition::UpOnly, t, 100e-3);
    ASSERT_EQ(up.commands.size(), 5u);
    for (const auto& c : up.commands) {
      EXPECT_EQ(up.events[c.event_index].kind, EventKind::Up);
      EXPECT_EQ(c.command.duration, 100e-3);
    }
  }
}

TEST(Session, RejectsRateMismatch) {
  SensorConfig s;
  s.sampling_hz = 100;
  EXPECT_THROW(session(Condition::Both, sinusoid_trajectory(1, 2.0, 10e-3, TouchMode::TouchingPlate), 50e-3, s),
               ConfigError);
}

TEST(Latency, WithinOnePeriodAtOneKilohertz) {
  const auto log = session(Condition::Both, sinusoid_trajectory(5, 2.0, 10e-3, TouchMode::TouchingPlate));
  const auto r = measure_latency(log);
  EXPECT_EQ(r.latencies.size(), 10u);
  EXPECT_LE(r.max_latency, 1e-3);
  EXPECT_GE(*std::min_element(r.latencies.begin(), r.latencies.end()), 0.0);
  EXPECT_TRUE(r.within_budget());
}

TEST(Latency, HundredHertzStillWithinBudget) {
  SensorConfig s;
  s.sampling_hz = 100;
  const auto log = session(Condition::Both, sinusoid_trajectory(5, 2.0, 10e-3, TouchMode::TouchingPlate, 100), 50e-3, s);
  const auto r = measure_latency(log);
  EXPECT_LE(r.max_latency, 10e-3 + 1e-12);
  EXPECT_TRUE(r.within_budget());
}

TEST(Latency, FiftyHertzViolatesBudget) {
  SensorConfig s;
  s.sampling_hz = 50;
  const auto log = session(Condition::Both, sinusoid_trajectory(5, 2.0, 10e-3, TouchMode::TouchingPlate, 50), 50e-3, s);
  const auto r = measure_latency(log);
  EXPECT_TRUE(r.latency_within_period());
  EXPECT_FALSE(r.period_within_budget());
  EXPECT_FALSE(r.within_budget());
}

TEST(Chatter, ZeroNoiseIdentical) {
  const auto t = sinusoid_trajectory(2, 2.0, 10e-3, TouchMode::TouchingPlate);
  const auto c = add_chatter(t, 0.0, 42);
  EXPECT_EQ(c.heights, t.heights);
  EXPECT_EQ(c.times, t.times);
}

TEST(Chatter, SeedDeterminism) {
  const auto t = sinusoid_trajectory(2, 2.0, 10e-3, TouchMode::TouchingPlate);
  EXPECT_EQ(add_chatter(t, 1e-4, 9).heights, add_chatter(t, 1e-4, 9).heights);
  EXPECT_NE(add_chatter(t, 1e-4, 9).heights, add_chatter(t, 1e-4, 10).heights);
  for (double h : add_chatter(t, 1e-3, 1).heights) EXPECT_GE(h, 0.0);
}

TEST(Chatter, SafeNoiseLeavesCountsUnchanged) {
  const Scene scene = default_scene();
  const SensorConfig sensor;
  const double noise = hysteresis_safe_noise(scene, sensor);
  EXPECT_LT(noise * max_voltage_slope(beam_for(scene, sensor)), 0.5 * (sensor.t_release - sensor.t_press));
  const auto t = sinusoid_trajectory(5, 2.0, 10e-3, TouchMode::TouchingPlate);
  const auto clean = session(Condition::Both, t);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto noisy = session(Condition::Both, add_chatter(t, noise, seed));
    EXPECT_EQ(noisy.events.size(), clean.events.size());
    EXPECT_EQ(noisy.commands.size(), clean.commands.size());
  }
}

TEST(DominantPeriod, SyntheticCosine) {
  std::vector<double> x, y;
  for (int g = 1; g <= 10; ++g) {
    x.push_back(g);
    y.push_back(std::cos(2 * std::numbers::pi * g / 4.25));
  }
  EXPECT_NEAR(dominant_period(x, y), 4.25, 0.5);
}

TEST(DominantPeriod, ConstantSeries) {
  std::vector<double> x{1, 2, 3, 4, 5, 6, 7}, y(7, 3.0);
  EXPECT_THROW(dominant_period(x, y), NoPeriodError);
}

TEST(DominantPeriod, Rejections) {
  std::vector<double> x{1, 2, 3, 4, 5}, y{0, 1, 0, 1, 0};
  EXPECT_THROW(dominant_period(x, y), ConfigError);
  std::vector<double> xn{1, 2, 3, 4, 5, 7}, yn{0, 1, 0, 1, 0, 1};
  EXPECT_THROW(dominant_period(xn, yn), ConfigError);
}

TEST(DominantPeriod, RecoversRandomPeriodsProperty) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> period(3.5, 5.5), phase(0.0, 2 * std::numbers::pi);
  for (int i = 0; i < 200; ++i) {
    const double p = period(rng), ph = phase(rng);
    std::vector<double> x, y;
    for (int g = 1; g <= 10; ++g) {
      x.push_back(g);
      y.push_back(std::cos(2 * std::numbers::pi * g / p + ph));
    }
    try {
      EXPECT_NEAR(dominant_period(x, y), p, 0.5) << p << " " << ph;
    } catch (const NoPeriodError&) {
      // one maximum inside the window is a legitimate refusal
    }
  }
}

TEST(Sweep, ShapeAndSeries) {
  const auto r = run_force_sweep(default_scene(), quick_sweep());
  EXPECT_EQ(r.gaps.size(), 10u);
  EXPECT_EQ(r.focal_heights.size(), 10u);
  EXPECT_EQ(r.forces.size(), 100u);
  const auto s = r.gap_series(3);
  for (std::size_t g = 0; g < 10; ++g) EXPECT_EQ(s[g], r.at(g, 3));
}

TEST(Sweep, ZeroDriveAllZero) {
  auto o = quick_sweep();
  o.drive_amplitude = 0.0;
  for (double f : run_force_sweep(default_scene(), o).forces) EXPECT_EQ(f, 0.0);
}

TEST(Sweep, QuantizationWithinHalfStep) {
  auto o = quick_sweep();
  const auto raw = run_force_sweep(default_scene(), o);
  o.quantize = true;
  const auto q = run_force_sweep(default_scene(), o);
  EXPECT_TRUE(q.quantized);
  for (std::size_t i = 0; i < raw.forces.size(); ++i) {
    EXPECT_LE(std::abs(q.forces[i] - raw.forces[i]), kScaleStep / 2 * (1 + 1e-12));
    const double steps = q.forces[i] / kScaleStep;
    EXPECT_NEAR(steps, std::round(steps), 1e-9);
  }
  EXPECT_NEAR(kScaleStep, 0.981e-3, 1e-12);
}

TEST(Sweep, WorkersAreDeterministic) {
  auto o = quick_sweep();
  o.focal_heights = {3e-3, 5e-3};
  const auto a = run_force_sweep(default_scene(), o);
  o.workers = 3;
  const auto b = run_force_sweep(default_scene(), o);
  EXPECT_EQ(a.forces, b.forces);
}

TEST(Sweep, NonMonotoneInGap) {
  auto o = quick_sweep();
  o.focal_heights = {3e-3};
  const auto s = run_force_sweep(default_scene(), o).gap_series(0);
  int sign_changes = 0;
  for (std::size_t i = 2; i < s.size(); ++i) {
    if ((s[i] - s[i - 1]) * (s[i - 1] - s[i - 2]) < 0) ++sign_changes;
  }
  EXPECT_GE(sign_changes, 2);
}

TEST(Session, BitIdenticalCsvAcrossRuns) {
  auto t = add_chatter(sinusoid_trajectory(5, 2.0, 10e-3, TouchMode::TouchingPlate), 5e-5, 7);
  auto csv = [&] {
    const auto log = session(Condition::Both, t);
    std::ostringstream a;
    write_events_csv(a, log.events);
    write_commands_csv(a, log.commands);
    write_trace_csv(a, voltage_trace(log));
    return a.str();
  };
  EXPECT_EQ(csv(), csv());
}
