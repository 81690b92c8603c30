#include "pushbutton/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pushbutton/error.hpp"

namespace pushbutton {

void validate_sensor(const SensorConfig& c) {
  if (!(c.aperture_radius > 0.0)) throw ConfigError("aperture radius must be positive");
  if (!(c.beam_length > 0.0)) throw ConfigError("beam length must be positive");
  if (!(c.v_bright > c.v_dark && c.v_dark >= 0.0)) {
    throw ConfigError("need v_bright > v_dark >= 0");
  }
  if (!(c.t_release > c.t_press)) {
    throw ConfigError("release threshold must exceed press threshold");
  }
  if (!(c.sampling_hz > 0.0)) throw ConfigError("sampling rate must be positive");
  if (!(c.finger_radius > 0.0)) throw ConfigError("finger radius must be positive");
}

void validate_beam(const BeamModel& beam) {
  if (!(beam.aperture_radius > 0.0)) throw ConfigError("aperture radius must be positive");
  if (!(beam.v_bright > beam.v_dark && beam.v_dark >= 0.0)) {
    throw ConfigError("need v_bright > v_dark >= 0");
  }
  if (norm(beam.receiver - beam.emitter) == 0.0) {
    throw ConfigError("beam emitter and receiver coincide");
  }
}

BeamModel beam_for(const Scene& scene, const SensorConfig& config) {
  validate_sensor(config);
  const Vec3 up = scene.plane.normal;
  const Vec3 mid = scene.plane.point + up * scene.beam_height;
  const Vec3 along{0.5 * config.beam_length, 0.0, 0.0};
  return {mid - along, mid + along, config.aperture_radius, config.v_bright, config.v_dark};
}

FingerModel FingerModel::at_height(double height, double radius) {
  return {{0.0, 0.0, height + radius}, radius};
}

double occlusion(const FingerModel& finger, const BeamModel& beam) {
  const Vec3 axis = beam.receiver - beam.emitter;
  const double t = dot(finger.pad_center - beam.emitter, axis) / dot(axis, axis);
  if (t < 0.0 || t > 1.0) return 0.0;
  const double beam_z = beam.emitter.z + t * axis.z;
  // Normalized offset of the finger's lower edge from the beam axis.
  const double d = (finger.bottom() - beam_z) / beam.aperture_radius;
  if (d >= 1.0) return 0.0;
  if (d <= -1.0) return 1.0;
  // Area of the unit-circle segment above the chord at height d, over pi.
  return (std::acos(d) - d * std::sqrt(1.0 - d * d)) / std::numbers::pi;
}

double photovoltage(double occ, const BeamModel& beam) {
  if (!(occ >= 0.0 && occ <= 1.0)) throw ConfigError("occlusion fraction outside [0, 1]");
  return beam.v_dark + (1.0 - occ) * (beam.v_bright - beam.v_dark);
}

double max_voltage_slope(const BeamModel& beam) {
  // d(occ)/dd peaks at d = 0 with magnitude 2/pi.
  return 2.0 / std::numbers::pi / beam.aperture_radius * (beam.v_bright - beam.v_dark);
}

std::string_view to_string(Region region) {
  switch (region) {
    case Region::Unarmed: return "unarmed";
    case Region::Above: return "above";
    case Region::Below: return "below";
  }
  return "unarmed";
}

std::string_view to_string(EventKind kind) { return kind == EventKind::Down ? "Down" : "Up"; }

EventKind parse_event_kind(std::string_view text) {
  if (text == "Down") return EventKind::Down;
  if (text == "Up") return EventKind::Up;
  throw ConfigError("unknown event kind '" + std::string(text) + "'");
}

DetectorState DetectorState::make(double t_press, double t_release) {
  if (!(t_release > t_press)) throw ConfigError("release threshold must exceed press threshold");
  DetectorState s;
  s.t_press = t_press;
  s.t_release = t_release;
  return s;
}

namespace {

double interpolate_crossing(const DetectorState& s, const VoltageSample& sample, double threshold) {
  if (!s.last_sample_time) return sample.time;
  const double v0 = s.last_sample_voltage;
  const double dv = sample.voltage - v0;
  if (dv == 0.0) return sample.time;
  const double frac = std::clamp((threshold - v0) / dv, 0.0, 1.0);
  return *s.last_sample_time + frac * (sample.time - *s.last_sample_time);
}

}  // namespace

DetectorStep detector_step(const DetectorState& state, const VoltageSample& sample) {
  if (state.last_sample_time && sample.time < *state.last_sample_time) {
    throw TimeOrderError("detector sample time went backwards");
  }
  DetectorStep out{state, std::nullopt};
  DetectorState& s = out.state;
  switch (state.region) {
    case Region::Unarmed:
      if (sample.voltage >= state.t_release) s.region = Region::Above;
      break;
    case Region::Above:
      if (sample.voltage <= state.t_press) {
        s.region = Region::Below;
        out.event = ButtonEvent{EventKind::Down, sample.time, sample.voltage,
                                interpolate_crossing(state, sample, state.t_press)};
      }
      break;
    case Region::Below:
      if (sample.voltage >= state.t_release) {
        s.region = Region::Above;
        out.event = ButtonEvent{EventKind::Up, sample.time, sample.voltage,
                                interpolate_crossing(state, sample, state.t_release)};
      }
      break;
  }
  if (out.event) s.last_event_time = sample.time;
  s.last_sample_time = sample.time;
  s.last_sample_voltage = sample.voltage;
  return out;
}

}  // namespace pushbutton
