#pragma once

#include <optional>
#include <string_view>

#include "pushbutton/sensing.hpp"

namespace pushbutton {

/// Which button edges fire a burst.
enum class Condition { DownOnly, UpOnly, Both };

std::string_view to_string(Condition condition);
/// Accepts "down", "up", "both" (case-sensitive).
Condition parse_condition(std::string_view text);

struct FeedbackConfig {
  Condition condition = Condition::Both;
  double burst_duration = 50e-3;  // s
  double focal_height = 3e-3;     // m above the plate
  double focal_x = 0.0;           // m
  double focal_y = 0.0;           // m
};

void validate_feedback(const FeedbackConfig& config);

struct FocusCommand {
  Vec3 target;
  double start = 0.0;     // s
  double duration = 0.0;  // s
  double amplitude = 1.0;

  double end() const { return start + duration; }
};

struct ActiveBurst {
  double start = 0.0;
  double duration = 0.0;
};

struct ControllerState {
  FeedbackConfig config;
  std::optional<ActiveBurst> active_burst;
  std::optional<double> last_time;

  static ControllerState make(const FeedbackConfig& config);
};

struct ControllerStep {
  ControllerState state;
  std::optional<FocusCommand> command;
};

/// Clears an expired burst, then fires a burst at `now` if the event's kind is
/// enabled by the condition and no burst is active. Events arriving during a
/// burst are dropped. Throws TimeOrderError if `now` decreases.
ControllerStep controller_step(const ControllerState& state,
                               const std::optional<ButtonEvent>& event, double now);

/// Rectangular gate: 1 on [start, start + duration), 0 elsewhere.
double burst_envelope(const FocusCommand& command, double t);

/// End-to-end budget from threshold crossing to emission.
inline constexpr double kLatencyBudget = 15e-3;  // s

}  // namespace pushbutton
