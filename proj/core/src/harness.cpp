#include "pushbutton/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "pushbutton/error.hpp"
#include "pushbutton/numeric.hpp"

namespace pushbutton {

void validate_trajectory(const Trajectory& t) {
  if (t.times.size() != t.heights.size()) throw ConfigError("trajectory size mismatch");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t.heights[i] >= 0.0)) throw ConfigError("trajectory height below the plate");
    if (i > 0 && !(t.times[i] > t.times[i - 1])) {
      throw TimeOrderError("trajectory times must be strictly increasing");
    }
  }
}

Trajectory sinusoid_trajectory(int cycles, double period, double amplitude, TouchMode mode,
                               double sample_hz) {
  if (cycles < 1) throw ConfigError("trajectory needs at least one cycle");
  if (!(period > 0.0)) throw ConfigError("trajectory period must be positive");
  if (!(amplitude > 0.0)) throw ConfigError("trajectory amplitude must be positive");
  if (!(sample_hz > 0.0)) throw ConfigError("sample rate must be positive");
  const double offset = mode == TouchMode::TouchingPlate ? 0.0 : kAirborneFloor;
  const auto samples = static_cast<std::size_t>(std::llround(cycles * period * sample_hz));
  Trajectory t;
  t.touch_mode = mode;
  t.times.reserve(samples + 1);
  t.heights.reserve(samples + 1);
  for (std::size_t i = 0; i <= samples; ++i) {
    const double time = static_cast<double>(i) / sample_hz;
    t.times.push_back(time);
    t.heights.push_back(offset +
                        0.5 * amplitude * (1.0 + std::cos(2.0 * std::numbers::pi * time / period)));
  }
  return t;
}

Trajectory add_chatter(const Trajectory& trajectory, double noise_amplitude, std::uint64_t seed) {
  if (!(noise_amplitude >= 0.0)) throw ConfigError("noise amplitude must be non-negative");
  Trajectory out = trajectory;
  if (noise_amplitude == 0.0) return out;
  // Explicit 53-bit mapping: std::uniform_real_distribution is not portable bit-for-bit.
  std::mt19937_64 rng(seed);
  for (double& h : out.heights) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    h = std::max(0.0, h + noise_amplitude * (2.0 * u - 1.0));
  }
  return out;
}

double hysteresis_safe_noise(const Scene& scene, const SensorConfig& sensor) {
  const BeamModel beam = beam_for(scene, sensor);
  const double half_band = 0.5 * (sensor.t_release - sensor.t_press);
  return 0.9 * half_band / max_voltage_slope(beam);
}

SessionLog run_session(const Scene& scene, const SensorConfig& sensor,
                       const FeedbackConfig& feedback, const Trajectory& trajectory) {
  validate_trajectory(trajectory);
  const BeamModel beam = beam_for(scene, sensor);
  DetectorState detector = DetectorState::make(sensor);
  ControllerState controller = ControllerState::make(feedback);

  SessionLog log;
  log.sampling_period = trajectory.size() > 1 ? trajectory.times[1] - trajectory.times[0]
                                              : sensor.sampling_period();
  if (std::abs(log.sampling_period - sensor.sampling_period()) > 1e-6 * sensor.sampling_period()) {
    throw ConfigError("trajectory sample spacing does not match the sensor sampling rate");
  }
  log.trace.reserve(trajectory.size());
  for (std::size_t i = 0; i < trajectory.size(); ++i) {
    const double t = trajectory.times[i];
    const double h = trajectory.heights[i];
    const double v =
        photovoltage(occlusion(FingerModel::at_height(h, sensor.finger_radius), beam), beam);
    log.trace.push_back({t, h, v});

    auto det = detector_step(detector, {v, t});
    detector = det.state;
    if (det.event) log.events.push_back(*det.event);

    auto ctl = controller_step(controller, det.event, t);
    controller = ctl.state;
    if (ctl.command) {
      log.commands.push_back({*ctl.command, log.events.size() - 1});
      log.latencies.push_back(ctl.command->start - det.event->crossing_time);
    }
  }
  return log;
}

LatencyReport measure_latency(const SessionLog& log) {
  if (log.events.empty()) throw NoDataError("session contains no button events");
  LatencyReport r;
  r.latencies = log.latencies;
  r.sampling_period = log.sampling_period;
  for (double l : r.latencies) r.max_latency = std::max(r.max_latency, l);
  return r;
}

double quantize_to_scale(double force) { return std::round(force / kScaleStep) * kScaleStep; }

std::vector<double> SweepResult::gap_series(std::size_t height_index) const {
  const auto first = forces.begin() + static_cast<std::ptrdiff_t>(height_index * gaps.size());
  return {first, first + static_cast<std::ptrdiff_t>(gaps.size())};
}

SweepResult run_force_sweep(const Scene& scene, const SweepOptions& options) {
  validate_scene(scene);
  if (options.gaps.empty() || options.focal_heights.empty()) {
    throw ConfigError("sweep needs at least one gap and one focal height");
  }
  const std::size_t ng = options.gaps.size();
  const std::size_t nh = options.focal_heights.size();

  std::vector<DriveState> drives;
  drives.reserve(nh);
  for (double h : options.focal_heights) {
    DriveState d = focus_phases(scene, {{0.0, 0.0, h}, true});
    drives.push_back(scale_amplitudes(std::move(d), options.drive_amplitude));
  }

  SweepResult result{options.gaps, options.focal_heights, std::vector<double>(ng * nh),
                     options.quantize};
  ForceOptions cell = options.force;
  cell.workers = 1;
  const DiscTarget disc{{0.0, 0.0, 0.0}, options.disc_radius, scene.plane.normal};
  parallel_chunks(ng * nh, options.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const std::size_t h = j / ng;
      const std::size_t g = j % ng;
      double f = radiation_force_disc(scene, drives[h], disc, options.gaps[g], cell);
      result.forces[j] = options.quantize ? quantize_to_scale(f) : f;
    }
  });
  return result;
}

double dominant_period(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ConfigError("period series size mismatch");
  if (x.size() < 6) throw ConfigError("period estimation needs at least 6 samples");
  const double dx = x[1] - x[0];
  if (!(dx > 0.0)) throw ConfigError("period series must be increasing");
  for (std::size_t i = 2; i < x.size(); ++i) {
    if (std::abs((x[i] - x[i - 1]) - dx) > 1e-9 * std::abs(dx)) {
      throw ConfigError("period series must be uniformly spaced");
    }
  }
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(y.size());
  std::vector<double> c(y.size());
  double scale = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    c[i] = y[i] - mean;
    scale = std::max(scale, std::abs(y[i]));
  }
  const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  if (!(*hi - *lo > 1e-12 * scale)) throw NoPeriodError("series is constant");

  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < c.size(); ++i) {
    if (c[i] > c[i - 1] && c[i] >= c[i + 1]) {
      const double curvature = c[i - 1] - 2.0 * c[i] + c[i + 1];
      const double offset = curvature != 0.0 ? 0.5 * (c[i - 1] - c[i + 1]) / curvature : 0.0;
      peaks.push_back(x[i] + offset * dx);
    }
  }
  if (peaks.size() < 2) throw NoPeriodError("fewer than two local maxima");
  return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

std::vector<std::optional<double>> sweep_periods_mm(const SweepResult& sweep) {
  std::vector<double> gaps_mm;
  for (double g : sweep.gaps) gaps_mm.push_back(g * 1e3);
  std::vector<std::optional<double>> out;
  for (std::size_t h = 0; h < sweep.focal_heights.size(); ++h) {
    try {
      out.emplace_back(dominant_period(gaps_mm, sweep.gap_series(h)));
    } catch (const NoPeriodError&) {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

}  // namespace pushbutton
