// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../unit/oracle.hpp"
#include "pushbutton/acoustics.hpp"
#include "pushbutton/harness.hpp"
#include "pushbutton/io.hpp"
#include "pushbutton/numeric.hpp"
#include "pushbutton/radiation_force.hpp"

using namespace pushbutton;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

SweepResult g_sweep;  // shared by criteria 2 and 9

Outcome mirrored_focus() {
  const Scene s = default_scene();
  const Vec3 target{0, 0, 3e-3};
  const auto drive = focus_phases(s, {target, true});
  const auto t0 = Clock::now();
  const auto grid = field_grid(s, drive, GridSpec::box({-40e-3, -40e-3, 0}, {81, 81, 21}, 1e-3), 1);
  const double dt = seconds_since(t0);
  const auto m = focal_metrics(grid, target);
  const double limit = s.wavelength() / 2;
  return {m.distance_to_target <= limit && dt <= 60.0,
          fmt("peak (%.1f, %.1f, %.1f) mm, %.2f mm from target (limit %.3f), %.1f s single-threaded",
              m.peak_position.x * 1e3, m.peak_position.y * 1e3, m.peak_position.z * 1e3,
              m.distance_to_target * 1e3, limit * 1e3, dt)};
}

Outcome standing_wave_period() {
  const auto t0 = Clock::now();
  g_sweep = run_force_sweep(default_scene());
  const double dt = seconds_since(t0);
  const auto periods = sweep_periods_mm(g_sweep);
  int in_band = 0;
  std::string list;
  for (const auto& p : periods) {
    if (p && *p >= 4.0 && *p <= 5.0) ++in_band;
    list += p ? fmt("%.2f ", *p) : std::string("none ");
  }
  return {in_band >= 8 && dt <= 300.0, fmt("%d/10 heights in [4,5] mm, periods ", in_band) + list +
                                           fmt("(%.1f s)", dt)};
}

Outcome image_source() {
  Scene s = default_scene();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DriveState d = uniform_drive(s);
  for (std::size_t i = 0; i < d.size(); ++i) {
    d.amplitudes[i] = u(rng);
    d.phases[i] = wrap_phase(2 * std::numbers::pi * u(rng));
  }
  std::vector<Vec3> plate;
  const double half = s.plate_extent / 2;
  for (int i = 0; i < 100; ++i) plate.push_back({(2 * u(rng) - 1) * half, (2 * u(rng) - 1) * half, 0.0});
  const double residual = boundary_residual(s, d, plate);

  std::vector<oracle::Source> direct;
  const auto em = s.emitters();
  for (std::size_t i = 0; i < em.size(); ++i) {
    direct.push_back({em[i].position, em[i].normal, std::polar(d.source_pressure * d.amplitudes[i], d.phases[i])});
  }
  const auto all = oracle::with_mirror(direct, 0.0, s.plane.reflection_coefficient);
  const double k = s.wavenumber();
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 p{(2 * u(rng) - 1) * 0.05, (2 * u(rng) - 1) * 0.05, u(rng) * 0.05};
    const Complex ref = oracle::field(all, k, k * s.arrays[0].lattice.element_radius, true, p);
    worst = std::max(worst, std::abs(pressure_at(s, d, p) - ref) / std::abs(ref));
  }
  return {residual < 1e-6 && worst <= 1e-12,
          fmt("boundary residual %.2e (< 1e-6), image equivalence max rel err %.2e (<= 1e-12)", residual, worst)};
}

Outcome phase_alignment() {
  const Scene s = default_scene();
  const auto d = focus_phases(s, {{0, 0, 3e-3}, true});
  const Vec3 image{0, 0, -3e-3};
  const double k = s.wavenumber();
  const double ka = k * s.arrays[0].lattice.element_radius;
  const auto em = s.emitters();
  std::vector<double> phases;
  for (std::size_t i = 0; i < em.size(); ++i) {
    phases.push_back(std::arg(element_contribution(em[i], d.weight(i), k, ka, s.directivity, image)));
  }
  const double spread = oracle::phase_spread(phases);
  return {spread < 1e-9, fmt("phase spread %.2e rad over %zu elements (< 1e-9)", spread, em.size())};
}

Outcome force_scaling() {
  const Scene s = default_scene();
  const auto d = scale_amplitudes(focus_phases(s, {{0, 0, 3e-3}, true}), 0.5);
  const double f1 = radiation_force_disc(s, d, {}, 5e-3);
  const double f2 = radiation_force_disc(s, scale_amplitudes(d, 2.0), {}, 5e-3);
  ForceOptions fine;
  fine.radial_nodes *= 2;
  fine.angular_nodes *= 2;
  const double f1_fine = radiation_force_disc(s, d, {}, 5e-3, fine);
  const double ratio = f2 / f1;
  const double refine = std::abs(f1_fine - f1) / std::abs(f1_fine);
  return {std::abs(ratio - 4.0) <= 1e-9 && refine < 5e-3,
          fmt("F(2a)/F(a) = %.12f, doubled-node change %.2e (< 0.5%%)", ratio, refine)};
}

Outcome condition_matrix() {
  const Scene scene = default_scene();
  int ok = 0, total = 0;
  std::string failures;
  for (auto cond : {Condition::DownOnly, Condition::UpOnly, Condition::Both}) {
    for (double burst : {50e-3, 100e-3}) {
      for (auto mode : {TouchMode::TouchingPlate, TouchMode::Airborne}) {
        ++total;
        FeedbackConfig f;
        f.condition = cond;
        f.burst_duration = burst;
        const auto log = run_session(scene, SensorConfig{}, f, sinusoid_trajectory(5, 2.0, 10e-3, mode));
        const std::size_t expected = cond == Condition::Both ? 10 : 5;
        bool good = log.commands.size() == expected;
        for (const auto& c : log.commands) {
          good = good && c.command.duration == burst;
          const auto kind = log.events[c.event_index].kind;
          if (cond == Condition::DownOnly) good = good && kind == EventKind::Down;
          if (cond == Condition::UpOnly) good = good && kind == EventKind::Up;
        }
        if (good) {
          ++ok;
        } else {
          failures += fmt(" [%s %.0fms %s: %zu cmds]", std::string(to_string(cond)).c_str(), burst * 1e3,
                          mode == TouchMode::Airborne ? "airborne" : "touching", log.commands.size());
        }
      }
    }
  }
  return {ok == total, fmt("%d/%d conditions give the expected command count and burst length", ok, total) +
                           failures};
}

Outcome latency_budget() {
  const Scene scene = default_scene();
  auto report = [&](double hz) {
    SensorConfig s;
    s.sampling_hz = hz;
    const auto log =
        run_session(scene, s, FeedbackConfig{}, sinusoid_trajectory(5, 2.0, 10e-3, TouchMode::TouchingPlate, hz));
    return measure_latency(log);
  };
  const auto r1k = report(1000), r100 = report(100), r50 = report(50);
  const bool pass = r1k.within_budget() && r100.within_budget() && r50.latency_within_period() &&
                    !r50.period_within_budget();
  return {pass, fmt("1 kHz max %.3f ms, 100 Hz max %.3f ms (both within period and 15 ms); "
                    "50 Hz period 20 ms reported as %s",
                    r1k.max_latency * 1e3, r100.max_latency * 1e3,
                    r50.within_budget() ? "within budget (wrong)" : "budget violation")};
}

Outcome chattering() {
  const Scene scene = default_scene();
  const SensorConfig sensor;
  const double noise = hysteresis_safe_noise(scene, sensor);
  const double jitter = noise * max_voltage_slope(beam_for(scene, sensor));
  const double half_band = 0.5 * (sensor.t_release - sensor.t_press);
  const auto clean_traj = sinusoid_trajectory(5, 2.0, 10e-3, TouchMode::TouchingPlate);
  const auto clean = run_session(scene, sensor, FeedbackConfig{}, clean_traj);
  int unchanged = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto log = run_session(scene, sensor, FeedbackConfig{}, add_chatter(clean_traj, noise, seed));
    if (log.events.size() == clean.events.size() && log.commands.size() == clean.commands.size()) ++unchanged;
  }
  return {unchanged == 100 && jitter < half_band,
          fmt("%d/100 seeds unchanged (%zu events), noise %.1f um -> jitter %.3f V < half band %.3f V", unchanged,
              clean.events.size(), noise * 1e6, jitter, half_band)};
}

Outcome determinism() {
  const Scene scene = default_scene();
  auto session_csv = [&] {
    const auto traj = add_chatter(sinusoid_trajectory(5, 2.0, 10e-3, TouchMode::TouchingPlate),
                                  hysteresis_safe_noise(scene, SensorConfig{}), 7);
    const auto log = run_session(scene, SensorConfig{}, FeedbackConfig{}, traj);
    std::ostringstream os;
    write_events_csv(os, log.events);
    write_commands_csv(os, log.commands);
    write_trace_csv(os, voltage_trace(log));
    return os.str();
  };
  auto sweep_csv = [](const SweepResult& r) {
    std::ostringstream os;
    write_sweep_csv(os, r);
    return os.str();
  };
  const bool session_same = session_csv() == session_csv();
  SweepOptions again;
  again.workers = 2;
  const bool sweep_same = sweep_csv(g_sweep) == sweep_csv(run_force_sweep(default_scene(), again));
  return {session_same && sweep_same,
          fmt("session CSVs %s, sweep CSV %s (second run on 2 workers)", session_same ? "identical" : "differ",
              sweep_same ? "identical" : "differs")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"mirrored-focus formation", mirrored_focus},
      {"standing-wave periodicity", standing_wave_period},
      {"image-source correctness", image_source},
      {"phase alignment", phase_alignment},
      {"force scaling", force_scaling},
      {"controller condition matrix", condition_matrix},
      {"latency budget", latency_budget},
      {"chattering suppression", chattering},
      {"determinism", determinism},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %d %-28s %s  %s\n", n, name, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
