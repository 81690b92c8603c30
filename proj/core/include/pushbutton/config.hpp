#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pushbutton/controller.hpp"
#include "pushbutton/geometry.hpp"
#include "pushbutton/harness.hpp"
#include "pushbutton/sensing.hpp"

namespace pushbutton {

struct SessionDefaults {
  int cycles = 5;
  double period = 2.0;       // s
  double amplitude = 10e-3;  // m
  TouchMode touch_mode = TouchMode::TouchingPlate;
};

/// Everything a scene/config file can hold. Only "scene" is required; the
/// other sections fall back to defaults.
struct RunConfig {
  Scene scene = default_scene();
  SensorConfig sensor;
  FeedbackConfig feedback;
  std::vector<double> burst_set_ms{50.0, 100.0};
  SessionDefaults session;
};

nlohmann::json to_json(const Scene& scene);
Scene scene_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RunConfig& config);
RunConfig run_config_from_json(const nlohmann::json& j);

/// Parses and validates a config file. Throws ConfigError with the file name
/// on unreadable, malformed or invalid content.
RunConfig load_run_config(const std::filesystem::path& path);

std::string dump_run_config(const RunConfig& config);

/// FNV-1a 64 of the canonical (sorted-key, compact) scene JSON, as 16 hex digits.
std::string scene_hash(const Scene& scene);

}  // namespace pushbutton
