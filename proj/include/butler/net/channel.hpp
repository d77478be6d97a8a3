#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "butler/net/socket.hpp"

namespace butler::net {

/// Ordered, bidirectional stream of text messages. One reader and one writer
/// may use a channel concurrently.
class MessageChannel {
 public:
  virtual ~MessageChannel() = default;
  virtual void send(const std::string& message) = 0;
  /// Next message, or nullopt once the peer has closed.
  virtual std::optional<std::string> receive() = 0;
  /// Unblocks a pending receive() from another thread.
  virtual void shutdown() = 0;
};

/// 4-byte big-endian length, then the payload.
class LengthPrefixedChannel : public MessageChannel {
 public:
  static constexpr std::size_t kMaxMessage = 64u << 20;

  explicit LengthPrefixedChannel(Socket s) : sock_(std::move(s)) {}
  void send(const std::string& message) override;
  std::optional<std::string> receive() override;
  void shutdown() override { sock_.shutdown(); }

 private:
  Socket sock_;
  std::mutex write_mu_;
};

/// RFC 6455 text messages. The server side expects the opening handshake to
/// be done already (see accept_websocket); the client side masks its frames.
class WebSocketChannel : public MessageChannel {
 public:
  enum class Role { server, client };

  WebSocketChannel(Socket s, Role role) : sock_(std::move(s)), role_(role) {}
  void send(const std::string& message) override;
  std::optional<std::string> receive() override;
  void shutdown() override { sock_.shutdown(); }

 private:
  void send_frame(std::uint8_t opcode, const std::string& payload);

  Socket sock_;
  Role role_;
  std::mutex write_mu_;
};

std::string websocket_accept_key(const std::string& client_key);

/// Reads the HTTP upgrade request and answers it. Only `path` is accepted;
/// anything else gets a 404 and a SocketError.
std::unique_ptr<WebSocketChannel> accept_websocket(Socket s, const std::string& path = "/session");

/// Client handshake against ws://host:port/path.
std::unique_ptr<WebSocketChannel> connect_websocket(const std::string& host, std::uint16_t port,
                                                    const std::string& path = "/session");

/// Looks at the first byte: "G" starts a WebSocket upgrade, anything else (or
/// nothing within sniff_ms) means length-prefixed framing.
std::unique_ptr<MessageChannel> accept_any(Socket s, const std::string& ws_path = "/session", int sniff_ms = 250);

}  // namespace butler::net
