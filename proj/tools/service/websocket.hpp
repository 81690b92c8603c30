#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

// Minimal RFC 6455 pieces: opening handshake, frame codec, and a blocking
// client used by tests and scripted drivers.
namespace pushbutton::ws {

enum class Opcode : std::uint8_t {
  Continuation = 0x0,
  Text = 0x1,
  Binary = 0x2,
  Close = 0x8,
  Ping = 0x9,
  Pong = 0xA,
};

struct Frame {
  bool fin = true;
  Opcode opcode = Opcode::Text;
  std::string payload;
};

/// base64(SHA-1(key + RFC 6455 GUID)).
std::string accept_key(std::string_view client_key);

/// Case-insensitive header lookup in a raw HTTP request/response head.
std::optional<std::string> find_header(std::string_view head, std::string_view name);

std::string handshake_response(std::string_view client_key);

/// Client frames must be masked, server frames must not.
std::string encode_frame(Opcode opcode, std::string_view payload,
                         std::optional<std::array<std::uint8_t, 4>> mask = std::nullopt);

/// Decodes one frame from the start of buf. Returns nullopt when buf holds an
/// incomplete frame; otherwise sets `consumed` to the frame's byte length.
std::optional<Frame> decode_frame(std::string_view buf, std::size_t& consumed);

class Client {
 public:
  Client() = default;
  Client(const Client&) = delete;
  Client& operator=(const Client&) = delete;
  Client(Client&& other) noexcept;
  Client& operator=(Client&& other) noexcept;
  ~Client();

  /// Connects to 127.0.0.1:port and completes the handshake; throws std::runtime_error.
  void connect(std::uint16_t port, std::chrono::milliseconds timeout = std::chrono::seconds(5));
  void send_text(std::string_view text);
  /// Next text message, or nullopt on timeout or close.
  std::optional<std::string> receive_text(std::chrono::milliseconds timeout);
  void close();
  bool connected() const { return fd_ >= 0; }

 private:
  int fd_ = -1;
  std::string buffer_;
  std::uint32_t mask_seed_ = 0x9e3779b9u;
};

}  // namespace pushbutton::ws
