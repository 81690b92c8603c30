#pragma once

#include <optional>
#include <string_view>

#include "pushbutton/geometry.hpp"

namespace pushbutton {

/// Sensor parameters that are not part of the acoustic scene.
struct SensorConfig {
  double aperture_radius = 0.5e-3;  // m, collimating hole radius
  double beam_length = 200e-3;      // m, LED to phototransistor
  double v_bright = 5.0;            // V, beam unobstructed
  double v_dark = 0.0;              // V, beam fully blocked
  double t_press = 2.0;             // V, Down when v <= t_press
  double t_release = 3.0;           // V, Up when v >= t_release
  double sampling_hz = 1000.0;
  double finger_radius = 7e-3;      // m, cylinder proxy

  double sampling_period() const { return 1.0 / sampling_hz; }
};

void validate_sensor(const SensorConfig& config);

struct BeamModel {
  Vec3 emitter;
  Vec3 receiver;
  double aperture_radius = 0.5e-3;
  double v_bright = 5.0;
  double v_dark = 0.0;
};

void validate_beam(const BeamModel& beam);

/// Beam along x through the plate center at the scene's beam height.
BeamModel beam_for(const Scene& scene, const SensorConfig& config);

/// Horizontal cylinder (axis along y) standing in for the finger pad.
struct FingerModel {
  Vec3 pad_center;
  double pad_radius = 7e-3;

  double bottom() const { return pad_center.z - pad_radius; }

  /// Finger over the plate center whose lowest point is `height` above z = 0.
  static FingerModel at_height(double height, double radius);
};

/// Fraction of the circular beam aperture covered by the finger: the circle
/// segment above the finger's lower edge. 0 if the finger is clear of the beam
/// segment laterally.
double occlusion(const FingerModel& finger, const BeamModel& beam);

/// Linear photodetector: v_dark + (1 - occ) (v_bright - v_dark).
double photovoltage(double occ, const BeamModel& beam);

/// Largest |dV/dh| (V/m) of photovoltage(occlusion(h)) over finger height h.
double max_voltage_slope(const BeamModel& beam);

enum class Region { Unarmed, Above, Below };
enum class EventKind { Down, Up };

std::string_view to_string(Region region);
std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

struct ButtonEvent {
  EventKind kind = EventKind::Down;
  double time = 0.0;     // s, sample that satisfied the threshold
  double voltage = 0.0;  // V, that sample's voltage
  /// Threshold crossing instant, linearly interpolated between the previous
  /// sample and this one. Equals `time` when there is no previous sample.
  double crossing_time = 0.0;
};

/// Voltage hysteresis detector. Starts Unarmed and arms (silently) the first
/// time the beam reads clear, so a finger already in the beam at start-up
/// never produces a stray Up.
struct DetectorState {
  Region region = Region::Unarmed;
  double t_press = 2.0;
  double t_release = 3.0;
  double last_event_time = 0.0;
  std::optional<double> last_sample_time;
  double last_sample_voltage = 0.0;

  static DetectorState make(double t_press, double t_release);
  static DetectorState make(const SensorConfig& config) {
    return make(config.t_press, config.t_release);
  }
};

struct VoltageSample {
  double voltage = 0.0;
  double time = 0.0;
};

struct DetectorStep {
  DetectorState state;
  std::optional<ButtonEvent> event;
};

/// Above -> Below emits Down when v <= t_press; Below -> Above emits Up when
/// v >= t_release. Throws TimeOrderError if the sample time decreases.
DetectorStep detector_step(const DetectorState& state, const VoltageSample& sample);

}  // namespace pushbutton
