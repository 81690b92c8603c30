#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pushbutton/controller.hpp"
#include "pushbutton/radiation_force.hpp"
#include "pushbutton/sensing.hpp"

namespace pushbutton {

enum class TouchMode { TouchingPlate, Airborne };

/// Finger bottom height above the plate, sampled at strictly increasing times.
struct Trajectory {
  std::vector<double> times;    // s
  std::vector<double> heights;  // m
  TouchMode touch_mode = TouchMode::TouchingPlate;

  std::size_t size() const { return times.size(); }
};

void validate_trajectory(const Trajectory& trajectory);

/// Minimum finger height for airborne (non-touching) presses.
inline constexpr double kAirborneFloor = 1e-3;  // m

/// Press cycles starting and ending at the top of the stroke:
/// h(t) = offset + amplitude/2 * (1 + cos(2 pi t / period)), sampled at
/// `sample_hz` over [0, cycles * period]. offset is 0 when touching, else
/// kAirborneFloor.
Trajectory sinusoid_trajectory(int cycles, double period, double amplitude, TouchMode mode,
                               double sample_hz = 1000.0);

/// Adds seeded uniform jitter in [-noise_amplitude, noise_amplitude] to every
/// sample; heights are clamped at 0.
Trajectory add_chatter(const Trajectory& trajectory, double noise_amplitude, std::uint64_t seed);

/// Height jitter amplitude (m) whose worst-case voltage jitter stays at 90% of
/// half the hysteresis band.
double hysteresis_safe_noise(const Scene& scene, const SensorConfig& sensor);

struct TraceSample {
  double time = 0.0;
  double height = 0.0;
  double voltage = 0.0;
};

struct CommandRecord {
  FocusCommand command;
  std::size_t event_index = 0;  // into SessionLog::events
};

struct SessionLog {
  std::vector<TraceSample> trace;
  std::vector<ButtonEvent> events;
  std::vector<CommandRecord> commands;
  /// Per command: start minus the interpolated threshold crossing of its event.
  std::vector<double> latencies;
  double sampling_period = 0.0;
};

SessionLog run_session(const Scene& scene, const SensorConfig& sensor,
                       const FeedbackConfig& feedback, const Trajectory& trajectory);

struct LatencyReport {
  std::vector<double> latencies;
  double max_latency = 0.0;
  double sampling_period = 0.0;
  double budget = kLatencyBudget;

  bool latency_within_period() const { return max_latency <= sampling_period * (1.0 + 1e-9); }
  bool period_within_budget() const { return sampling_period <= budget; }
  bool within_budget() const { return latency_within_period() && period_within_budget(); }
};

/// Throws NoDataError when the session produced no events.
LatencyReport measure_latency(const SessionLog& log);

/// One scale division of 0.1 g expressed as force.
inline constexpr double kScaleStep = 0.1e-3 * 9.81;  // N

/// Rounds to the nearest multiple of kScaleStep.
double quantize_to_scale(double force);

struct SweepOptions {
  std::vector<double> gaps{1e-3, 2e-3, 3e-3, 4e-3, 5e-3, 6e-3, 7e-3, 8e-3, 9e-3, 10e-3};
  std::vector<double> focal_heights{1e-3, 2e-3, 3e-3, 4e-3, 5e-3,
                                    6e-3, 7e-3, 8e-3, 9e-3, 10e-3};
  double disc_radius = 5e-3;
  double drive_amplitude = 1.0;
  bool quantize = false;
  ForceOptions force;
  unsigned workers = 1;  // cells evaluated concurrently
};

struct SweepResult {
  std::vector<double> gaps;           // m
  std::vector<double> focal_heights;  // m
  /// forces[h * gaps.size() + g], newtons.
  std::vector<double> forces;
  bool quantized = false;

  double at(std::size_t gap_index, std::size_t height_index) const {
    return forces[height_index * gaps.size() + gap_index];
  }
  /// F(gap) at one focal height.
  std::vector<double> gap_series(std::size_t height_index) const;
};

SweepResult run_force_sweep(const Scene& scene, const SweepOptions& options = {});

/// Period (same unit as x) from the mean spacing of parabola-refined local
/// maxima of the mean-removed series. Needs >= 6 uniformly spaced samples;
/// throws NoPeriodError with fewer than two maxima.
double dominant_period(std::span<const double> x, std::span<const double> y);

/// dominant_period of each gap series in mm; nullopt where no period exists.
std::vector<std::optional<double>> sweep_periods_mm(const SweepResult& sweep);

}  // namespace pushbutton
