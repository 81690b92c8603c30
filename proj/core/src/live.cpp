#include "pushbutton/live.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

#include "pushbutton/error.hpp"
#include "pushbutton/io.hpp"

namespace pushbutton {

using nlohmann::json;

json frame_to_json(const TickFrame& f) {
  json j = {{"type", "frame"},
            {"tick", f.tick},
            {"time", f.time},
            {"finger_height", f.finger_height},
            {"voltage", f.voltage},
            {"detector_region", to_string(f.detector_region)},
            {"thresholds", {{"t_press", f.t_press}, {"t_release", f.t_release}}},
            {"active_burst", nullptr},
            {"last_event", nullptr}};
  if (f.active_burst) {
    j["active_burst"] = {{"remaining", f.active_burst->remaining},
                         {"duration", f.active_burst->duration}};
  }
  if (f.last_event) {
    j["last_event"] = {{"kind", to_string(f.last_event->kind)},
                       {"time", f.last_event->time},
                       {"voltage", f.last_event->voltage}};
  }
  return j;
}

TickFrame frame_from_json(const json& j) {
  if (j.value("type", "") != "frame") throw ConfigError("not a frame message");
  TickFrame f;
  f.tick = j.at("tick").get<std::uint64_t>();
  f.time = j.at("time").get<double>();
  f.finger_height = j.at("finger_height").get<double>();
  f.voltage = j.at("voltage").get<double>();
  const auto region = j.at("detector_region").get<std::string>();
  f.detector_region = region == "above" ? Region::Above
                      : region == "below" ? Region::Below
                                          : Region::Unarmed;
  f.t_press = j.at("thresholds").at("t_press").get<double>();
  f.t_release = j.at("thresholds").at("t_release").get<double>();
  if (!j.at("active_burst").is_null()) {
    f.active_burst = BurstStatus{j["active_burst"].at("remaining").get<double>(),
                                 j["active_burst"].at("duration").get<double>()};
  }
  if (!j.at("last_event").is_null()) {
    const auto& e = j["last_event"];
    const double t = e.at("time").get<double>();
    f.last_event = ButtonEvent{parse_event_kind(e.at("kind").get<std::string>()), t,
                               e.at("voltage").get<double>(), t};
  }
  return f;
}

InputMessage parse_input(const json& j) {
  if (!j.is_object() || j.value("type", "") != "input") {
    throw ConfigError("expected an input message");
  }
  const auto it = j.find("finger_height_m");
  if (it == j.end() || !it->is_number()) throw ConfigError("input needs numeric finger_height_m");
  InputMessage m{it->get<double>(), std::nullopt};
  if (!(m.finger_height >= 0.0)) throw ConfigError("finger height must be non-negative");
  if (j.contains("client_time") && j["client_time"].is_number()) {
    m.client_time = j["client_time"].get<double>();
  }
  return m;
}

json input_to_json(const InputMessage& input) {
  json j = {{"type", "input"}, {"finger_height_m", input.finger_height}};
  if (input.client_time) j["client_time"] = *input.client_time;
  return j;
}

LivePipeline::LivePipeline(const Scene& scene, const SensorConfig& sensor,
                           const FeedbackConfig& feedback, double tick_hz, double initial_height)
    : beam_(beam_for(scene, sensor)),
      sensor_(sensor),
      detector_(DetectorState::make(sensor)),
      controller_(ControllerState::make(feedback)),
      tick_hz_(tick_hz),
      height_(initial_height) {
  if (!(tick_hz > 0.0)) throw ConfigError("tick rate must be positive");
  if (!(initial_height >= 0.0)) throw ConfigError("initial height must be non-negative");
}

TickFrame LivePipeline::step(const std::optional<InputMessage>& input) {
  if (input) height_ = std::max(0.0, input->finger_height);
  const double now = static_cast<double>(tick_) / tick_hz_;

  TickFrame frame;
  frame.tick = tick_;
  frame.time = now;
  frame.finger_height = height_;
  frame.voltage =
      photovoltage(occlusion(FingerModel::at_height(height_, sensor_.finger_radius), beam_), beam_);

  auto det = detector_step(detector_, {frame.voltage, now});
  detector_ = det.state;
  auto ctl = controller_step(controller_, det.event, now);
  controller_ = ctl.state;
  if (ctl.command) commands_.push_back(*ctl.command);

  frame.detector_region = detector_.region;
  frame.last_event = det.event;
  frame.t_press = detector_.t_press;
  frame.t_release = detector_.t_release;
  if (controller_.active_burst) {
    const auto& b = *controller_.active_burst;
    frame.active_burst = BurstStatus{b.start + b.duration - now, b.duration};
  }
  ++tick_;
  return frame;
}

std::vector<TickFrame> replay(LivePipeline pipeline, const std::vector<RecordedInput>& inputs,
                              std::uint64_t ticks) {
  std::vector<TickFrame> frames;
  frames.reserve(ticks);
  std::size_t next = 0;
  for (std::uint64_t t = 0; t < ticks; ++t) {
    std::optional<InputMessage> input;
    // Several inputs at one tick: the latest wins, as in live ingest.
    while (next < inputs.size() && inputs[next].tick <= pipeline.ticks()) {
      input = InputMessage{inputs[next].finger_height, std::nullopt};
      ++next;
    }
    frames.push_back(pipeline.step(input));
  }
  return frames;
}

std::vector<RecordedInput> read_input_log(std::istream& is) {
  std::vector<RecordedInput> out;
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("empty input log");
  while (std::getline(is, line)) {
    if (line.empty() || line == "\r") continue;
    std::stringstream ss(line);
    RecordedInput r;
    char comma = 0;
    if (!(ss >> r.tick >> comma >> r.finger_height) || comma != ',') {
      throw ConfigError("malformed input log line: " + line);
    }
    if (!out.empty() && r.tick < out.back().tick) throw ConfigError("input log ticks must not decrease");
    out.push_back(r);
  }
  return out;
}

void write_input_log(std::ostream& os, const std::vector<RecordedInput>& inputs) {
  os << "tick,finger_height_m\n";
  for (const auto& r : inputs) os << r.tick << ',' << format_number(r.finger_height) << '\n';
}

}  // namespace pushbutton
