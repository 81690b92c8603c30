#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pushbutton/controller.hpp"
#include "pushbutton/sensing.hpp"

namespace pushbutton {

struct BurstStatus {
  double remaining = 0.0;  // s
  double duration = 0.0;   // s
};

/// Snapshot broadcast once per tick.
struct TickFrame {
  std::uint64_t tick = 0;
  double time = 0.0;           // s, tick / tick_hz
  double finger_height = 0.0;  // m
  double voltage = 0.0;        // V
  Region detector_region = Region::Unarmed;
  std::optional<BurstStatus> active_burst;
  std::optional<ButtonEvent> last_event;  // emitted on this tick only
  double t_press = 0.0;
  double t_release = 0.0;
};

struct InputMessage {
  double finger_height = 0.0;  // m
  std::optional<double> client_time;
};

/// Encodes {"type":"frame", ...} with SI units.
nlohmann::json frame_to_json(const TickFrame& frame);
TickFrame frame_from_json(const nlohmann::json& j);

/// Parses {"type":"input","finger_height_m":h[,"client_time":t]}; throws
/// ConfigError on any other shape or a negative height.
InputMessage parse_input(const nlohmann::json& j);
nlohmann::json input_to_json(const InputMessage& input);

/// The sensing -> detector -> controller chain advanced at a fixed tick rate.
/// Owned by a single thread.
class LivePipeline {
 public:
  LivePipeline(const Scene& scene, const SensorConfig& sensor, const FeedbackConfig& feedback,
               double tick_hz, double initial_height);

  /// Applies the input (if any; otherwise the last height is held) and
  /// advances one tick.
  TickFrame step(const std::optional<InputMessage>& input);

  double tick_hz() const { return tick_hz_; }
  std::uint64_t ticks() const { return tick_; }
  const std::vector<FocusCommand>& commands() const { return commands_; }

 private:
  BeamModel beam_;
  SensorConfig sensor_;
  DetectorState detector_;
  ControllerState controller_;
  double tick_hz_;
  double height_;
  std::uint64_t tick_ = 0;
  std::vector<FocusCommand> commands_;
};

/// One recorded input, applied before the given tick.
struct RecordedInput {
  std::uint64_t tick = 0;
  double finger_height = 0.0;
};

/// Offline replay: runs `ticks` ticks, applying each recorded input at its tick.
std::vector<TickFrame> replay(LivePipeline pipeline, const std::vector<RecordedInput>& inputs,
                              std::uint64_t ticks);

std::vector<RecordedInput> read_input_log(std::istream& is);  // tick,finger_height_m
void write_input_log(std::ostream& os, const std::vector<RecordedInput>& inputs);

}  // namespace pushbutton
