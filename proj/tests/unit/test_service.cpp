#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include "pushbutton/config.hpp"
#include "pushbutton/error.hpp"
#include "server.hpp"
#include "websocket.hpp"

using namespace pushbutton;
using namespace std::chrono_literals;

namespace {

service::ServerOptions ephemeral(double tick_hz = 250.0) {
  service::ServerOptions o;
  o.port = 0;
  o.tick_hz = tick_hz;
  return o;
}

// Next frame message, skipping hello/field/error messages.
std::optional<nlohmann::json> next_frame(ws::Client& c) {
  for (int i = 0; i < 100; ++i) {
    auto text = c.receive_text(2s);
    if (!text) return std::nullopt;
    auto j = nlohmann::json::parse(*text);
    if (j["type"] == "frame") return j;
  }
  return std::nullopt;
}

}  // namespace

TEST(WebSocket, AcceptKeyKnownAnswer) {
  EXPECT_EQ(ws::accept_key("dGhlIHNhbXBsZSBub25jZQ=="), "s3pPLMBiTxaQ9kYGzzhZRbK+xOo=");
}

TEST(WebSocket, FrameCodecRoundTrip) {
  for (std::size_t n : {0u, 5u, 125u, 126u, 300u, 70000u}) {
    const std::string payload(n, 'x');
    for (bool masked : {false, true}) {
      const auto bytes = masked ? ws::encode_frame(ws::Opcode::Text, payload, std::array<std::uint8_t, 4>{1, 2, 3, 4})
                                : ws::encode_frame(ws::Opcode::Text, payload);
      std::size_t used = 0;
      EXPECT_FALSE(ws::decode_frame(std::string_view(bytes).substr(0, bytes.size() - 1), used));
      const auto f = ws::decode_frame(bytes, used);
      ASSERT_TRUE(f);
      EXPECT_EQ(used, bytes.size());
      EXPECT_EQ(f->payload, payload);
      EXPECT_EQ(f->opcode, ws::Opcode::Text);
    }
  }
}

TEST(WebSocket, HeaderLookupIsCaseInsensitive) {
  const std::string head = "GET / HTTP/1.1\r\nsec-websocket-key: abc==\r\nHost: x\r\n\r\n";
  EXPECT_EQ(ws::find_header(head, "Sec-WebSocket-Key"), "abc==");
  EXPECT_FALSE(ws::find_header(head, "Upgrade"));
}

TEST(Server, RejectsTickRateOverBudget) {
  EXPECT_THROW(service::PipelineServer(RunConfig{}, ephemeral(50.0)), ConfigError);
}

TEST(Server, PortInUseIsStartupError) {
  service::PipelineServer a(RunConfig{}, ephemeral());
  a.start();
  auto opts = ephemeral();
  opts.port = a.port();
  service::PipelineServer b(RunConfig{}, opts);
  EXPECT_THROW(b.start(), service::StartupError);
  a.stop();
}

TEST(Server, HelloCarriesThresholds) {
  service::PipelineServer s(RunConfig{}, ephemeral());
  s.start();
  ws::Client c;
  c.connect(s.port());
  const auto hello = c.receive_text(2s);
  ASSERT_TRUE(hello);
  const auto j = nlohmann::json::parse(*hello);
  EXPECT_EQ(j["type"], "hello");
  EXPECT_EQ(j["thresholds"]["t_press"], 2.0);
  EXPECT_EQ(j["thresholds"]["t_release"], 3.0);
  c.close();
  s.stop();
}

TEST(Server, NoInputGivesConstantFrames) {
  service::PipelineServer s(RunConfig{}, ephemeral());
  s.start();
  ws::Client c;
  c.connect(s.port());
  std::uint64_t last_tick = 0;
  for (int i = 0; i < 60; ++i) {
    const auto f = next_frame(c);
    ASSERT_TRUE(f);
    EXPECT_EQ((*f)["finger_height"], 20e-3);
    EXPECT_EQ((*f)["voltage"], 5.0);
    EXPECT_TRUE((*f)["last_event"].is_null());
    if (i > 0) EXPECT_GT((*f)["tick"].get<std::uint64_t>(), last_tick);
    last_tick = (*f)["tick"].get<std::uint64_t>();
  }
  s.stop();
}

TEST(Server, TwoClientsSeeIdenticalFrames) {
  service::PipelineServer s(RunConfig{}, ephemeral());
  s.start();
  ws::Client a, b;
  a.connect(s.port());
  b.connect(s.port());
  std::map<std::uint64_t, std::string> seen_a, seen_b;
  for (int i = 0; i < 80; ++i) {
    const auto fa = next_frame(a);
    const auto fb = next_frame(b);
    ASSERT_TRUE(fa && fb);
    seen_a[(*fa)["tick"].get<std::uint64_t>()] = fa->dump();
    seen_b[(*fb)["tick"].get<std::uint64_t>()] = fb->dump();
    if (i == 20) a.send_text(R"({"type":"input","finger_height_m":0.0})");
  }
  std::size_t common = 0;
  for (const auto& [tick, text] : seen_a) {
    auto it = seen_b.find(tick);
    if (it == seen_b.end()) continue;
    ++common;
    EXPECT_EQ(text, it->second) << tick;
  }
  EXPECT_GE(common, 60u);
  s.stop();
}

TEST(Server, ScriptedLoweringProducesOneDownFrame) {
  service::PipelineServer s(RunConfig{}, ephemeral());
  s.start();
  ws::Client c;
  c.connect(s.port());
  int downs = 0, ups = 0;
  std::vector<double> heights;
  for (double h = 10e-3; h > -0.5e-3; h -= 0.5e-3) heights.push_back(std::max(h, 0.0));
  std::size_t next = 0;
  for (int i = 0; i < 200; ++i) {
    if (next < heights.size() && i % 2 == 0) {
      c.send_text(input_to_json(InputMessage{heights[next++], {}}).dump());
    }
    const auto f = next_frame(c);
    ASSERT_TRUE(f);
    if (!(*f)["last_event"].is_null()) {
      ((*f)["last_event"]["kind"] == "Down" ? downs : ups)++;
    }
  }
  EXPECT_EQ(downs, 1);
  EXPECT_EQ(ups, 0);
  s.stop();
}

TEST(Server, MalformedInputGetsErrorReply) {
  service::PipelineServer s(RunConfig{}, ephemeral());
  s.start();
  ws::Client c;
  c.connect(s.port());
  c.send_text("{bad json");
  bool got_error = false;
  for (int i = 0; i < 200 && !got_error; ++i) {
    auto t = c.receive_text(2s);
    ASSERT_TRUE(t);
    got_error = nlohmann::json::parse(*t)["type"] == "error";
  }
  EXPECT_TRUE(got_error);
  s.stop();
}

TEST(Server, FieldRequestReturnsSlice) {
  service::PipelineServer s(RunConfig{}, ephemeral());
  s.start();
  ws::Client c;
  c.connect(s.port());
  c.send_text(R"({"type":"field_request"})");
  std::optional<nlohmann::json> field;
  for (int i = 0; i < 400 && !field; ++i) {
    auto t = c.receive_text(5s);
    ASSERT_TRUE(t);
    auto j = nlohmann::json::parse(*t);
    if (j["type"] == "field") field = j;
  }
  ASSERT_TRUE(field);
  EXPECT_EQ((*field)["nx"], 41);
  EXPECT_EQ((*field)["ny"], 41);
  EXPECT_EQ((*field)["abs_pa"].size(), 41u * 41u);
  s.stop();
}

TEST(Server, RecordsInputsForReplay) {
  const auto path = std::filesystem::temp_directory_path() / "pushbutton_record.csv";
  std::filesystem::remove(path);
  auto opts = ephemeral();
  opts.record_inputs = path;
  {
    service::PipelineServer s(RunConfig{}, opts);
    s.start();
    ws::Client c;
    c.connect(s.port());
    c.send_text(R"({"type":"input","finger_height_m":0.001})");
    for (int i = 0; i < 20; ++i) next_frame(c);
    s.stop();
  }
  std::ifstream in(path);
  const auto inputs = read_input_log(in);
  ASSERT_EQ(inputs.size(), 1u);
  EXPECT_EQ(inputs[0].finger_height, 0.001);
}
