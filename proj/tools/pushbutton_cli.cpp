// pushbutton: batch experiments (sweep, session, field, detect) and the live
// WebSocket pipeline service (serve).

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pushbutton/config.hpp"
#include "pushbutton/error.hpp"
#include "pushbutton/harness.hpp"
#include "pushbutton/io.hpp"
#include "pushbutton/live.hpp"
#include "server.hpp"

namespace fs = std::filesystem;
using namespace pushbutton;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct Common {
  std::string scene;
  std::string out_dir = ".";
};

RunConfig load(const Common& c) {
  if (c.scene.empty()) return RunConfig{};
  return load_run_config(c.scene);
}

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--scene", c.scene, "Scene/config JSON file (built-in default scene if omitted)")
      ->envname("PUSHBUTTON_SCENE");
  sub->add_option("--out-dir", c.out_dir, "Directory for output files")->envname("PUSHBUTTON_OUT_DIR");
}

std::string to_text(auto writer) {
  std::ostringstream os;
  writer(os);
  return os.str();
}

std::string manifest(const std::string& command, const RunConfig& config, nlohmann::json extra) {
  nlohmann::json j = {{"command", command},
                      {"version", "0.1.0"},
                      {"scene_hash", scene_hash(config.scene)},
                      {"config", to_json(config)}};
  j.update(extra);
  return j.dump(2) + "\n";
}

fs::path prepare_out_dir(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (!fs::is_directory(p)) throw ConfigError("cannot create output directory '" + dir + "'");
  return p;
}

// ---- sweep -------------------------------------------------------------------

struct SweepArgs {
  Common common;
  bool quantize = false;
  unsigned workers = 1;
  std::size_t bounce_order = 3;
};

int run_sweep(const SweepArgs& a) {
  const RunConfig config = load(a.common);
  SweepOptions opts;
  opts.quantize = a.quantize;
  opts.workers = a.workers;
  opts.force.bounce_order = a.bounce_order;
  const SweepResult sweep = run_force_sweep(config.scene, opts);
  const fs::path out = prepare_out_dir(a.common.out_dir);
  write_files_atomically(
      {{out / "sweep.csv", to_text([&](std::ostream& os) { write_sweep_csv(os, sweep); })},
       {out / "run_manifest.json",
        manifest("sweep", config, {{"quantize_scale", a.quantize}, {"bounce_order", a.bounce_order}})}});
  const auto periods = sweep_periods_mm(sweep);
  std::printf("sweep: %zu cells written to %s\n", sweep.forces.size(), (out / "sweep.csv").c_str());
  for (std::size_t h = 0; h < periods.size(); ++h) {
    if (periods[h]) {
      std::printf("  focal %.0f mm: gap period %.2f mm\n", sweep.focal_heights[h] * 1e3, *periods[h]);
    } else {
      std::printf("  focal %.0f mm: no period\n", sweep.focal_heights[h] * 1e3);
    }
  }
  return 0;
}

// ---- session -----------------------------------------------------------------

struct SessionArgs {
  Common common;
  std::string condition;
  std::optional<double> burst_ms;
  std::optional<int> cycles;
  std::optional<double> period_s;
  std::optional<double> amplitude_mm;
  bool airborne = false;
  std::optional<double> sampling_hz;
  std::optional<std::uint64_t> seed;
  std::optional<double> chatter_mm;
};

int run_session_cmd(const SessionArgs& a) {
  RunConfig config = load(a.common);
  if (!a.condition.empty()) config.feedback.condition = parse_condition(a.condition);
  if (a.burst_ms) {
    bool allowed = false;
    for (double b : config.burst_set_ms) allowed = allowed || b == *a.burst_ms;
    if (!allowed) throw ConfigError("burst " + format_number(*a.burst_ms) + " ms is not in the configured set");
    config.feedback.burst_duration = *a.burst_ms * 1e-3;
  }
  if (a.cycles) config.session.cycles = *a.cycles;
  if (a.period_s) config.session.period = *a.period_s;
  if (a.amplitude_mm) config.session.amplitude = *a.amplitude_mm * 1e-3;
  if (a.airborne) config.session.touch_mode = TouchMode::Airborne;
  if (a.sampling_hz) config.sensor.sampling_hz = *a.sampling_hz;
  validate_sensor(config.sensor);
  validate_feedback(config.feedback);

  Trajectory traj = sinusoid_trajectory(config.session.cycles, config.session.period,
                                        config.session.amplitude, config.session.touch_mode,
                                        config.sensor.sampling_hz);
  double noise = 0.0;
  if (a.seed) {
    noise = a.chatter_mm ? *a.chatter_mm * 1e-3 : hysteresis_safe_noise(config.scene, config.sensor);
    traj = add_chatter(traj, noise, *a.seed);
  }
  const SessionLog log = run_session(config.scene, config.sensor, config.feedback, traj);
  std::optional<LatencyReport> latency;
  if (!log.events.empty()) latency = measure_latency(log);
  const double period = log.sampling_period;
  const double max_latency = latency ? latency->max_latency : 0.0;
  const bool ok = latency ? latency->within_budget() : period <= kLatencyBudget;

  std::printf("session: condition=%s burst_ms=%s events=%zu commands=%zu max_latency_ms=%s "
              "sampling_period_ms=%.3f budget_ms=%.0f\n",
              std::string(to_string(config.feedback.condition)).c_str(),
              format_number(config.feedback.burst_duration * 1e3).c_str(), log.events.size(),
              log.commands.size(), latency ? format_number(max_latency * 1e3).c_str() : "n/a",
              period * 1e3, kLatencyBudget * 1e3);
  if (!ok) {
    std::fprintf(stderr, "latency budget violated: sampling period %.3f ms, max latency %.3f ms, budget %.0f ms\n",
                 period * 1e3, max_latency * 1e3, kLatencyBudget * 1e3);
    return kExitBudget;
  }

  const fs::path out = prepare_out_dir(a.common.out_dir);
  nlohmann::json extra = {{"seed", a.seed ? nlohmann::json(*a.seed) : nlohmann::json(nullptr)},
                          {"chatter_m", noise}};
  write_files_atomically(
      {{out / "session_events.csv", to_text([&](std::ostream& os) { write_events_csv(os, log.events); })},
       {out / "session_commands.csv",
        to_text([&](std::ostream& os) { write_commands_csv(os, log.commands); })},
       {out / "session_trace.csv",
        to_text([&](std::ostream& os) { write_trace_csv(os, voltage_trace(log)); })},
       {out / "run_manifest.json", manifest("session", config, extra)}});
  return 0;
}

// ---- field -------------------------------------------------------------------

struct FieldArgs {
  Common common;
  std::vector<double> target_mm{0.0, 0.0, 3.0};
  std::string format = "both";
  double step_mm = 1.0;
  double half_width_mm = 40.0;
  double height_mm = 20.0;
  unsigned workers = 1;
};

int run_field(const FieldArgs& a) {
  const RunConfig config = load(a.common);
  if (a.target_mm.size() != 3) throw ConfigError("--target-mm needs x,y,z");
  const Vec3 target{a.target_mm[0] * 1e-3, a.target_mm[1] * 1e-3, a.target_mm[2] * 1e-3};
  const DriveState drive = focus_phases(config.scene, {target, true});
  const auto n_lat = static_cast<std::size_t>(std::llround(2.0 * a.half_width_mm / a.step_mm)) + 1;
  const auto n_z = static_cast<std::size_t>(std::llround(a.height_mm / a.step_mm)) + 1;
  const GridSpec spec = GridSpec::box({-a.half_width_mm * 1e-3, -a.half_width_mm * 1e-3, 0.0},
                                      {n_lat, n_lat, n_z}, a.step_mm * 1e-3);
  const FieldGrid grid = field_grid(config.scene, drive, spec, a.workers);
  const FocalMetrics m = focal_metrics(grid, target);

  std::vector<std::pair<fs::path, std::string>> files;
  const fs::path out = prepare_out_dir(a.common.out_dir);
  if (a.format == "csv" || a.format == "both") {
    files.push_back({out / "field.csv", to_text([&](std::ostream& os) { write_field_csv(os, grid); })});
  }
  if (a.format == "bin" || a.format == "both") {
    files.push_back({out / "field.bin", to_text([&](std::ostream& os) { write_field_binary(os, grid); })});
  }
  write_files_atomically(files);
  std::printf("field: peak %.3f Pa at (%.1f, %.1f, %.1f) mm, %.2f mm from target\n", m.peak_magnitude,
              m.peak_position.x * 1e3, m.peak_position.y * 1e3, m.peak_position.z * 1e3,
              m.distance_to_target * 1e3);
  return 0;
}

// ---- detect ------------------------------------------------------------------

struct DetectArgs {
  Common common;
  std::string trace;
};

int run_detect(const DetectArgs& a) {
  const RunConfig config = load(a.common);
  std::ifstream in(a.trace);
  if (!in) throw ConfigError("cannot read trace '" + a.trace + "'");
  DetectorState state = DetectorState::make(config.sensor);
  std::vector<ButtonEvent> events;
  for (const auto& s : read_trace_csv(in)) {
    auto step = detector_step(state, s);
    state = step.state;
    if (step.event) events.push_back(*step.event);
  }
  const fs::path out = prepare_out_dir(a.common.out_dir);
  write_files_atomically(
      {{out / "events.csv", to_text([&](std::ostream& os) { write_events_csv(os, events); })}});
  std::printf("detect: %zu events\n", events.size());
  return 0;
}

// ---- serve -------------------------------------------------------------------

struct ServeArgs {
  Common common;
  std::uint16_t port = 8765;
  double tick_hz = 250.0;
  std::string record_inputs;
  std::string replay;
  std::uint64_t ticks = 0;
  std::string frames_out;
};

service::PipelineServer* g_server = nullptr;

extern "C" void on_signal(int) {
  if (g_server) g_server->request_stop();
}

int run_serve(const ServeArgs& a) {
  const RunConfig config = load(a.common);
  if (!a.replay.empty()) {
    std::ifstream in(a.replay);
    if (!in) throw ConfigError("cannot read input log '" + a.replay + "'");
    const auto inputs = read_input_log(in);
    const std::uint64_t ticks = a.ticks ? a.ticks : (inputs.empty() ? 0 : inputs.back().tick + 1);
    LivePipeline pipeline(config.scene, config.sensor, config.feedback, a.tick_hz,
                          service::ServerOptions{}.initial_height);
    std::ostringstream os;
    for (const auto& f : replay(pipeline, inputs, ticks)) os << frame_to_json(f).dump() << '\n';
    if (a.frames_out.empty()) {
      std::cout << os.str();
    } else {
      write_files_atomically({{a.frames_out, os.str()}});
    }
    return 0;
  }

  service::ServerOptions opts;
  opts.port = a.port;
  opts.tick_hz = a.tick_hz;
  if (!a.record_inputs.empty()) opts.record_inputs = a.record_inputs;
  service::PipelineServer server(config, opts);
  server.start();
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::printf("serving ws://127.0.0.1:%u at %.0f Hz (Ctrl-C to stop)\n", server.port(), a.tick_hz);
  std::fflush(stdout);
  server.wait();
  g_server = nullptr;
  std::printf("stopped\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aerial push-button simulator: reflected-ultrasound acoustics, IR finger sensing, "
               "two-stage burst feedback"};
  app.require_subcommand(1);

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Radiation force over gap x focal height (1..10 mm each)");
  add_common(s, sweep.common);
  s->add_flag("--quantize-scale", sweep.quantize, "Round forces to the 0.1 g scale resolution");
  s->add_option("--workers", sweep.workers, "Concurrent sweep cells")->check(CLI::Range(1u, 256u));
  s->add_option("--bounce-order", sweep.bounce_order, "Disc-plate round trips in the force model");

  SessionArgs session;
  auto* se = app.add_subcommand("session", "Scripted press/release session through sensing and feedback");
  add_common(se, session.common);
  se->add_option("condition,--condition", session.condition, "down | up | both")
      ->check(CLI::IsMember({"down", "up", "both"}))
      ->envname("PUSHBUTTON_CONDITION");
  se->add_option("burst_ms,--burst-ms", session.burst_ms, "Burst duration (ms)")->envname("PUSHBUTTON_BURST_MS");
  se->add_option("--cycles", session.cycles, "Press cycles")->check(CLI::PositiveNumber);
  se->add_option("--period-s", session.period_s, "Seconds per press cycle")->check(CLI::PositiveNumber);
  se->add_option("--amplitude-mm", session.amplitude_mm, "Vertical stroke (mm)")->check(CLI::PositiveNumber);
  se->add_flag("--airborne", session.airborne, "Keep the finger >= 1 mm above the plate");
  se->add_option("--sampling-hz", session.sampling_hz, "Sensor sampling rate")
      ->check(CLI::PositiveNumber)
      ->envname("PUSHBUTTON_SAMPLING_HZ");
  se->add_option("--seed,--chatter-seed", session.seed, "Add seeded height chatter")->envname("PUSHBUTTON_SEED");
  se->add_option("--chatter-mm", session.chatter_mm, "Chatter amplitude (mm); default stays inside the hysteresis band");

  FieldArgs field;
  auto* f = app.add_subcommand("field", "Export the pressure field around the mirrored focus");
  add_common(f, field.common);
  f->add_option("--target-mm", field.target_mm, "Focus target x,y,z (mm)")->delimiter(',')->expected(3);
  f->add_option("--format", field.format, "csv | bin | both")->check(CLI::IsMember({"csv", "bin", "both"}));
  f->add_option("--step-mm", field.step_mm, "Grid spacing (mm)")->check(CLI::PositiveNumber);
  f->add_option("--half-width-mm", field.half_width_mm, "Lateral half extent (mm)")->check(CLI::PositiveNumber);
  f->add_option("--height-mm", field.height_mm, "Vertical extent above the plate (mm)")->check(CLI::NonNegativeNumber);
  f->add_option("--workers", field.workers, "Worker threads")->check(CLI::Range(1u, 256u));

  DetectArgs detect;
  auto* d = app.add_subcommand("detect", "Run the hysteresis detector over a voltage trace CSV");
  add_common(d, detect.common);
  d->add_option("--trace", detect.trace, "CSV with time_s,volts")->required();

  ServeArgs serve;
  auto* sv = app.add_subcommand("serve", "Live pipeline over WebSocket (or offline replay)");
  add_common(sv, serve.common);
  sv->add_option("--port", serve.port, "TCP port on 127.0.0.1")->envname("PUSHBUTTON_PORT");
  sv->add_option("--tick-hz", serve.tick_hz, "Pipeline tick rate")
      ->check(CLI::PositiveNumber)
      ->envname("PUSHBUTTON_TICK_HZ");
  sv->add_option("--record-inputs", serve.record_inputs, "Write applied inputs (tick,finger_height_m) on exit");
  sv->add_option("--replay", serve.replay, "Replay an input log offline instead of serving");
  sv->add_option("--ticks", serve.ticks, "Ticks to replay (default: through the last input)");
  sv->add_option("--frames-out", serve.frames_out, "Replay output (JSON lines); stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*s) return run_sweep(sweep);
    if (*se) return run_session_cmd(session);
    if (*f) return run_field(field);
    if (*d) return run_detect(detect);
    if (*sv) return run_serve(serve);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const service::StartupError& e) {
    std::fprintf(stderr, "startup error: %s\n", e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
