#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "butler/behavior/planner.hpp"
#include "butler/net/channel.hpp"
#include "butler/net/socket.hpp"
#include "butler/session/session.hpp"
#include "butler/session/wire.hpp"
#include "butler/world/world_model.hpp"

namespace butler::session {

struct ServerConfig {
  std::string host = "127.0.0.1";
  std::uint16_t port = 0;  // 0 picks a free port
  world::WorldModel world;  // every connection starts from its own copy
  std::function<std::shared_ptr<behavior::Planner>()> make_planner;
  std::shared_ptr<skills::VqaBackend> vqa_backend;
  SessionConfig session;
  std::chrono::milliseconds frame_period{200};
  /// Frames still queued for a client beyond this are dropped.
  std::size_t max_pending_frames = 2;
  std::string ws_path = "/session";
};

/// Counters shared by all connections, for tests and logging.
struct ServerStats {
  std::atomic<std::uint64_t> frames_sent{0};
  std::atomic<std::uint64_t> frames_dropped{0};
  std::atomic<std::uint64_t> messages_handled{0};
  /// Queue-to-done time of the most recent / slowest client message.
  std::atomic<std::int64_t> last_handle_us{0};
  std::atomic<std::int64_t> max_handle_us{0};
};

class Connection;

/// Serves sessions over TCP. One port takes both WebSocket upgrades on
/// ws_path and length-prefixed framing.
class LiveServer {
 public:
  explicit LiveServer(ServerConfig cfg);
  ~LiveServer();
  LiveServer(const LiveServer&) = delete;
  LiveServer& operator=(const LiveServer&) = delete;

  /// Binds and starts accepting. Throws net::SocketError.
  void start();
  void stop();
  std::uint16_t port() const { return port_; }
  const ServerStats& stats() const { return stats_; }

 private:
  void accept_loop();

  ServerConfig cfg_;
  std::optional<net::Listener> listener_;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread acceptor_;
  std::mutex mu_;
  std::list<std::shared_ptr<Connection>> connections_;
  ServerStats stats_;
};

/// Blocking client used by tests and the CLI's smoke commands.
class Client {
 public:
  static Client connect(const std::string& host, std::uint16_t port, bool websocket, const std::string& ws_path = "/session");

  /// Sends with the next sequence number; returns it.
  std::uint64_t send(const wire::Payload& p);
  void send_raw(const std::string& text) { channel_->send(text); }
  /// Next decoded server message, or nullopt on close.
  std::optional<wire::Message> receive();
  void close() { channel_->shutdown(); }

 private:
  explicit Client(std::unique_ptr<net::MessageChannel> c) : channel_(std::move(c)) {}
  std::unique_ptr<net::MessageChannel> channel_;
  std::uint64_t seq_ = 0;
};

}  // namespace butler::session
