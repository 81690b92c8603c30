#include "pushbutton/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pushbutton/error.hpp"

namespace pushbutton {

using nlohmann::json;

namespace {

json vec(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

Vec3 vec_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 3) {
    throw ConfigError(std::string(what) + " must be a 3-element array");
  }
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

std::string_view directivity_name(Directivity d) {
  return d == Directivity::Piston ? "piston" : "monopole";
}

Directivity parse_directivity(const std::string& s) {
  if (s == "piston") return Directivity::Piston;
  if (s == "monopole") return Directivity::Monopole;
  throw ConfigError("unknown directivity '" + s + "'");
}

std::string_view touch_name(TouchMode m) {
  return m == TouchMode::TouchingPlate ? "touching" : "airborne";
}

TouchMode parse_touch(const std::string& s) {
  if (s == "touching") return TouchMode::TouchingPlate;
  if (s == "airborne") return TouchMode::Airborne;
  throw ConfigError("unknown touch mode '" + s + "'");
}

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

json to_json(const Scene& s) {
  json arrays = json::array();
  for (const auto& a : s.arrays) {
    arrays.push_back({{"lattice",
                       {{"rows", a.lattice.rows},
                        {"cols", a.lattice.cols},
                        {"pitch_m", a.lattice.pitch},
                        {"element_radius_m", a.lattice.element_radius}}},
                      {"pose",
                       {{"origin_m", vec(a.pose.origin)},
                        {"normal", vec(a.pose.normal)},
                        {"axis", vec(a.pose.axis)}}}});
  }
  return {{"arrays", arrays},
          {"plane",
           {{"point_m", vec(s.plane.point)},
            {"normal", vec(s.plane.normal)},
            {"reflection_coefficient", s.plane.reflection_coefficient}}},
          {"frequency_hz", s.frequency},
          {"sound_speed_m_s", s.sound_speed},
          {"air_density_kg_m3", s.air_density},
          {"beam_height_m", s.beam_height},
          {"source_pressure_pa_m", s.source_pressure},
          {"directivity", directivity_name(s.directivity)},
          {"plate_extent_m", s.plate_extent}};
}

Scene scene_from_json(const json& j) {
  Scene s;
  s.arrays.clear();
  for (const auto& a : j.at("arrays")) {
    const auto& l = a.at("lattice");
    const auto& p = a.at("pose");
    ArrayPlacement placement{
        build_lattice(l.at("rows").get<std::size_t>(), l.at("cols").get<std::size_t>(),
                      l.at("pitch_m").get<double>(), l.at("element_radius_m").get<double>()),
        ArrayPose{vec_from(p.at("origin_m"), "pose.origin_m"), vec_from(p.at("normal"), "pose.normal"),
                  vec_from(p.at("axis"), "pose.axis")}};
    s.arrays.push_back(placement);
  }
  const auto& plane = j.at("plane");
  s.plane = {vec_from(plane.at("point_m"), "plane.point_m"), vec_from(plane.at("normal"), "plane.normal"),
             plane.value("reflection_coefficient", 1.0)};
  s.frequency = j.at("frequency_hz").get<double>();
  s.sound_speed = j.at("sound_speed_m_s").get<double>();
  read_opt(j, "air_density_kg_m3", s.air_density);
  read_opt(j, "beam_height_m", s.beam_height);
  read_opt(j, "source_pressure_pa_m", s.source_pressure);
  read_opt(j, "plate_extent_m", s.plate_extent);
  if (j.contains("directivity")) s.directivity = parse_directivity(j.at("directivity").get<std::string>());
  validate_scene(s);
  return s;
}

json to_json(const RunConfig& c) {
  const auto& se = c.sensor;
  const auto& fb = c.feedback;
  return {{"scene", to_json(c.scene)},
          {"sensor",
           {{"aperture_radius_m", se.aperture_radius},
            {"beam_length_m", se.beam_length},
            {"v_bright", se.v_bright},
            {"v_dark", se.v_dark},
            {"t_press", se.t_press},
            {"t_release", se.t_release},
            {"sampling_hz", se.sampling_hz},
            {"finger_radius_m", se.finger_radius}}},
          {"feedback",
           {{"condition", to_string(fb.condition)},
            {"burst_ms", fb.burst_duration * 1e3},
            {"burst_set_ms", c.burst_set_ms},
            {"focal_height_m", fb.focal_height},
            {"focal_xy_m", json::array({fb.focal_x, fb.focal_y})}}},
          {"session",
           {{"cycles", c.session.cycles},
            {"period_s", c.session.period},
            {"amplitude_m", c.session.amplitude},
            {"touch_mode", touch_name(c.session.touch_mode)}}}};
}

RunConfig run_config_from_json(const json& j) {
  RunConfig c;
  c.scene = scene_from_json(j.at("scene"));
  if (j.contains("sensor")) {
    const auto& s = j.at("sensor");
    read_opt(s, "aperture_radius_m", c.sensor.aperture_radius);
    read_opt(s, "beam_length_m", c.sensor.beam_length);
    read_opt(s, "v_bright", c.sensor.v_bright);
    read_opt(s, "v_dark", c.sensor.v_dark);
    read_opt(s, "t_press", c.sensor.t_press);
    read_opt(s, "t_release", c.sensor.t_release);
    read_opt(s, "sampling_hz", c.sensor.sampling_hz);
    read_opt(s, "finger_radius_m", c.sensor.finger_radius);
  }
  validate_sensor(c.sensor);
  if (j.contains("feedback")) {
    const auto& f = j.at("feedback");
    if (f.contains("condition")) c.feedback.condition = parse_condition(f.at("condition").get<std::string>());
    if (f.contains("burst_ms")) c.feedback.burst_duration = f.at("burst_ms").get<double>() * 1e-3;
    read_opt(f, "burst_set_ms", c.burst_set_ms);
    read_opt(f, "focal_height_m", c.feedback.focal_height);
    if (f.contains("focal_xy_m")) {
      const auto& xy = f.at("focal_xy_m");
      c.feedback.focal_x = xy.at(0).get<double>();
      c.feedback.focal_y = xy.at(1).get<double>();
    }
  }
  validate_feedback(c.feedback);
  if (j.contains("session")) {
    const auto& s = j.at("session");
    read_opt(s, "cycles", c.session.cycles);
    read_opt(s, "period_s", c.session.period);
    read_opt(s, "amplitude_m", c.session.amplitude);
    if (s.contains("touch_mode")) c.session.touch_mode = parse_touch(s.at("touch_mode").get<std::string>());
  }
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  try {
    return run_config_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw ConfigError("malformed config file '" + path.string() + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("invalid config file '" + path.string() + "': " + e.what());
  }
}

std::string dump_run_config(const RunConfig& config) { return to_json(config).dump(2) + "\n"; }

std::string scene_hash(const Scene& scene) {
  const std::string canonical = to_json(scene).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pushbutton
