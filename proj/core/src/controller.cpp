#include "pushbutton/controller.hpp"

#include <string>

#include "pushbutton/error.hpp"

namespace pushbutton {

std::string_view to_string(Condition condition) {
  switch (condition) {
    case Condition::DownOnly: return "down";
    case Condition::UpOnly: return "up";
    case Condition::Both: return "both";
  }
  return "both";
}

Condition parse_condition(std::string_view text) {
  if (text == "down") return Condition::DownOnly;
  if (text == "up") return Condition::UpOnly;
  if (text == "both") return Condition::Both;
  throw ConfigError("unknown condition '" + std::string(text) + "' (expected down, up or both)");
}

void validate_feedback(const FeedbackConfig& config) {
  if (!(config.burst_duration > 0.0)) throw ConfigError("burst duration must be positive");
  if (!(config.focal_height > 0.0)) throw ConfigError("focal height must be positive");
}

ControllerState ControllerState::make(const FeedbackConfig& config) {
  validate_feedback(config);
  return {config, std::nullopt, std::nullopt};
}

namespace {

bool fires(Condition condition, EventKind kind) {
  switch (condition) {
    case Condition::DownOnly: return kind == EventKind::Down;
    case Condition::UpOnly: return kind == EventKind::Up;
    case Condition::Both: return true;
  }
  return false;
}

}  // namespace

ControllerStep controller_step(const ControllerState& state,
                               const std::optional<ButtonEvent>& event, double now) {
  if (state.last_time && now < *state.last_time) {
    throw TimeOrderError("controller time went backwards");
  }
  ControllerStep out{state, std::nullopt};
  ControllerState& s = out.state;
  s.last_time = now;
  if (s.active_burst && now >= s.active_burst->start + s.active_burst->duration) {
    s.active_burst.reset();
  }
  if (!event || s.active_burst || !fires(s.config.condition, event->kind)) return out;

  const FeedbackConfig& c = s.config;
  out.command = FocusCommand{{c.focal_x, c.focal_y, c.focal_height}, now, c.burst_duration, 1.0};
  s.active_burst = ActiveBurst{now, c.burst_duration};
  return out;
}

double burst_envelope(const FocusCommand& command, double t) {
  return (t >= command.start && t < command.start + command.duration) ? 1.0 : 0.0;
}

}  // namespace pushbutton
