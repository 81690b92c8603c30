#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <filesystem>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pushbutton/config.hpp"
#include "pushbutton/live.hpp"

namespace pushbutton::service {

class StartupError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Unbounded MPSC queue; the only thing the pipeline owner shares with the
/// network thread.
template <typename T>
class Channel {
 public:
  void push(T value) {
    {
      std::lock_guard lock(mu_);
      items_.push_back(std::move(value));
    }
    cv_.notify_one();
  }

  std::deque<T> drain() {
    std::lock_guard lock(mu_);
    return std::exchange(items_, {});
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<T> items_;
};

struct ServerOptions {
  std::uint16_t port = 8765;  // 0 picks a free port
  double tick_hz = 250.0;
  double initial_height = 20e-3;  // m, finger well clear of the beam
  std::optional<std::filesystem::path> record_inputs;
};

/// Streams TickFrames over WebSocket to every connected client and feeds
/// their input messages into one LivePipeline.
///
/// Threads: the owner advances the pipeline at tick_hz against the wall
/// clock; the network thread accepts clients, parses input, and writes
/// frames. They exchange data only through Channels.
class PipelineServer {
 public:
  PipelineServer(RunConfig config, ServerOptions options);
  ~PipelineServer();
  PipelineServer(const PipelineServer&) = delete;
  PipelineServer& operator=(const PipelineServer&) = delete;

  /// Binds and starts both threads. Throws StartupError if the port is taken.
  void start();
  std::uint16_t port() const { return bound_port_; }

  /// Async-signal-safe.
  void request_stop() noexcept;
  /// Blocks until stopped, joins threads, writes the input recording.
  void wait();
  void stop() {
    request_stop();
    wait();
  }

  /// Message sent to each client right after the handshake.
  std::string hello_message() const;

 private:
  void owner_loop();
  void network_loop();
  void wake() noexcept;

  RunConfig config_;
  ServerOptions options_;
  std::string field_message_;
  int listen_fd_ = -1;
  int wake_pipe_[2] = {-1, -1};
  std::uint16_t bound_port_ = 0;
  std::atomic<bool> stop_{false};
  Channel<InputMessage> inputs_;
  Channel<std::string> outbound_;
  std::vector<RecordedInput> recorded_;  // owner thread only until joined
  std::jthread owner_;
  std::jthread network_;
  bool joined_ = false;
};

}  // namespace pushbutton::service
