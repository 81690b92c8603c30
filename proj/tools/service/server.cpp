#include "server.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <map>

#include "pushbutton/acoustics.hpp"
#include "pushbutton/error.hpp"
#include "websocket.hpp"

namespace pushbutton::service {

namespace {

using nlohmann::json;

std::string field_slice_message(const RunConfig& config) {
  // Static heatmap of |p| at the focal height for the configured drive.
  const auto& fb = config.feedback;
  const Vec3 target{fb.focal_x, fb.focal_y, fb.focal_height};
  const DriveState drive = focus_phases(config.scene, {target, true});
  GridSpec spec = GridSpec::box({-40e-3, -40e-3, fb.focal_height}, {41, 41, 1}, 2e-3);
  const FieldGrid grid = field_grid(config.scene, drive, spec);
  json mags = json::array();
  for (const auto& v : grid.values) mags.push_back(std::abs(v));
  return json{{"type", "field"},
              {"nx", spec.counts[0]},
              {"ny", spec.counts[1]},
              {"origin_m", {spec.origin.x, spec.origin.y, spec.origin.z}},
              {"spacing_m", spec.spacing[0]},
              {"abs_pa", mags}}
      .dump();
}

struct Connection {
  int fd = -1;
  bool upgraded = false;
  std::string in;
};

bool send_raw(int fd, const std::string& data) {
  std::size_t off = 0;
  while (off < data.size()) {
    const ssize_t n = ::send(fd, data.data() + off, data.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    off += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

PipelineServer::PipelineServer(RunConfig config, ServerOptions options)
    : config_(std::move(config)), options_(std::move(options)) {
  if (!(options_.tick_hz > 0.0)) throw ConfigError("tick rate must be positive");
  if (1.0 / options_.tick_hz > kLatencyBudget) {
    throw ConfigError("tick period exceeds the 15 ms latency budget");
  }
}

PipelineServer::~PipelineServer() {
  request_stop();
  if (!joined_ && (owner_.joinable() || network_.joinable())) wait();
  for (int fd : {listen_fd_, wake_pipe_[0], wake_pipe_[1]}) {
    if (fd >= 0) ::close(fd);
  }
}

std::string PipelineServer::hello_message() const {
  const auto& fb = config_.feedback;
  return json{{"type", "hello"},
              {"tick_hz", options_.tick_hz},
              {"condition", to_string(fb.condition)},
              {"burst_s", fb.burst_duration},
              {"focal_height_m", fb.focal_height},
              {"beam_height_m", config_.scene.beam_height},
              {"scene_hash", scene_hash(config_.scene)},
              {"thresholds", {{"t_press", config_.sensor.t_press}, {"t_release", config_.sensor.t_release}}}}
      .dump();
}

void PipelineServer::start() {
  field_message_ = field_slice_message(config_);
  if (::pipe2(wake_pipe_, O_NONBLOCK | O_CLOEXEC) != 0) throw StartupError("pipe2 failed");

  listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw StartupError("socket() failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(options_.port);
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    throw StartupError("cannot bind 127.0.0.1:" + std::to_string(options_.port) + ": " +
                       std::strerror(errno));
  }
  if (::listen(listen_fd_, 16) != 0) throw StartupError("listen() failed");
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  bound_port_ = ntohs(addr.sin_port);

  network_ = std::jthread([this] { network_loop(); });
  owner_ = std::jthread([this] { owner_loop(); });
}

void PipelineServer::request_stop() noexcept {
  stop_.store(true);
  wake();
}

void PipelineServer::wake() noexcept {
  if (wake_pipe_[1] >= 0) {
    const char b = 1;
    [[maybe_unused]] auto n = ::write(wake_pipe_[1], &b, 1);
  }
}

void PipelineServer::wait() {
  if (owner_.joinable()) owner_.join();
  if (network_.joinable()) network_.join();
  joined_ = true;
  if (options_.record_inputs) {
    std::ofstream out(*options_.record_inputs);
    write_input_log(out, recorded_);
  }
}

void PipelineServer::owner_loop() {
  LivePipeline pipeline(config_.scene, config_.sensor, config_.feedback, options_.tick_hz,
                        options_.initial_height);
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  while (!stop_.load()) {
    std::optional<InputMessage> latest;
    for (auto& m : inputs_.drain()) latest = m;
    if (latest) recorded_.push_back({pipeline.ticks(), latest->finger_height});
    const TickFrame frame = pipeline.step(latest);
    outbound_.push(frame_to_json(frame).dump());
    wake();
    const auto next = t0 + std::chrono::duration_cast<clock::duration>(
                               std::chrono::duration<double>(static_cast<double>(pipeline.ticks()) /
                                                             options_.tick_hz));
    std::this_thread::sleep_until(next);
  }
}

void PipelineServer::network_loop() {
  std::map<int, Connection> conns;
  auto drop = [&conns](int fd) {
    ::close(fd);
    conns.erase(fd);
  };

  while (!stop_.load()) {
    std::vector<pollfd> fds{{listen_fd_, POLLIN, 0}, {wake_pipe_[0], POLLIN, 0}};
    for (const auto& [fd, c] : conns) fds.push_back({fd, POLLIN, 0});
    if (::poll(fds.data(), fds.size(), 100) < 0 && errno != EINTR) break;

    if (fds[1].revents & POLLIN) {
      char sink[256];
      while (::read(wake_pipe_[0], sink, sizeof sink) > 0) {
      }
    }
    // Frames go out in tick order to every upgraded client.
    for (const auto& msg : outbound_.drain()) {
      const std::string wire = ws::encode_frame(ws::Opcode::Text, msg);
      std::vector<int> dead;
      for (auto& [fd, c] : conns) {
        if (c.upgraded && !send_raw(fd, wire)) dead.push_back(fd);
      }
      for (int fd : dead) drop(fd);
    }

    if (fds[0].revents & POLLIN) {
      const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
      if (fd >= 0) {
        int one = 1;
        ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
        conns[fd] = Connection{fd, false, {}};
      }
    }

    for (std::size_t i = 2; i < fds.size(); ++i) {
      if (!(fds[i].revents & (POLLIN | POLLHUP | POLLERR))) continue;
      const int fd = fds[i].fd;
      auto it = conns.find(fd);
      if (it == conns.end()) continue;
      Connection& c = it->second;
      char buf[8192];
      const ssize_t n = ::recv(fd, buf, sizeof buf, 0);
      if (n <= 0) {
        drop(fd);
        continue;
      }
      c.in.append(buf, static_cast<std::size_t>(n));

      if (!c.upgraded) {
        const auto end = c.in.find("\r\n\r\n");
        if (end == std::string::npos) {
          if (c.in.size() > 16384) drop(fd);
          continue;
        }
        const auto key = ws::find_header(std::string_view(c.in).substr(0, end), "Sec-WebSocket-Key");
        if (!key) {
          send_raw(fd, "HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\n\r\n");
          drop(fd);
          continue;
        }
        c.in.erase(0, end + 4);
        c.upgraded = send_raw(fd, ws::handshake_response(*key)) &&
                     send_raw(fd, ws::encode_frame(ws::Opcode::Text, hello_message()));
        if (!c.upgraded) {
          drop(fd);
          continue;
        }
      }

      bool closed = false;
      std::size_t used = 0;
      while (auto frame = ws::decode_frame(c.in, used)) {
        c.in.erase(0, used);
        if (frame->opcode == ws::Opcode::Close) {
          send_raw(fd, ws::encode_frame(ws::Opcode::Close, ""));
          closed = true;
          break;
        }
        if (frame->opcode == ws::Opcode::Ping) {
          send_raw(fd, ws::encode_frame(ws::Opcode::Pong, frame->payload));
          continue;
        }
        if (frame->opcode != ws::Opcode::Text) continue;
        try {
          const json msg = json::parse(frame->payload);
          if (msg.value("type", "") == "field_request") {
            send_raw(fd, ws::encode_frame(ws::Opcode::Text, field_message_));
          } else {
            inputs_.push(parse_input(msg));
          }
        } catch (const std::exception& e) {
          send_raw(fd, ws::encode_frame(ws::Opcode::Text,
                                        json{{"type", "error"}, {"message", e.what()}}.dump()));
        }
      }
      if (closed) drop(fd);
    }
  }
  for (auto& [fd, c] : conns) {
    send_raw(fd, ws::encode_frame(ws::Opcode::Close, ""));
    ::close(fd);
  }
}

}  // namespace pushbutton::service
