#include "butler/net/channel.hpp"

#include <openssl/sha.h>

#include <array>
#include <cstring>
#include <random>

#include "butler/common/base64.hpp"
#include "butler/common/text.hpp"

namespace butler::net {

void LengthPrefixedChannel::send(const std::string& message) {
  if (message.size() > kMaxMessage) throw SocketError("message too large");
  std::uint32_t n = static_cast<std::uint32_t>(message.size());
  std::array<std::uint8_t, 4> header{static_cast<std::uint8_t>(n >> 24), static_cast<std::uint8_t>(n >> 16),
                                     static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)};
  std::lock_guard lock(write_mu_);
  sock_.write_all(header.data(), header.size());
  sock_.write_all(message);
}

std::optional<std::string> LengthPrefixedChannel::receive() {
  std::array<std::uint8_t, 4> header{};
  try {
    if (!sock_.read_exact(header.data(), header.size())) return std::nullopt;
  } catch (const SocketError&) {
    return std::nullopt;
  }
  std::uint32_t n = (std::uint32_t{header[0]} << 24) | (std::uint32_t{header[1]} << 16) | (std::uint32_t{header[2]} << 8) | header[3];
  if (n > kMaxMessage) throw SocketError("incoming message too large");
  std::string out(n, '\0');
  if (n > 0 && !sock_.read_exact(out.data(), n)) return std::nullopt;
  return out;
}

namespace {

constexpr std::uint8_t kOpContinuation = 0x0;
constexpr std::uint8_t kOpText = 0x1;
constexpr std::uint8_t kOpBinary = 0x2;
constexpr std::uint8_t kOpClose = 0x8;
constexpr std::uint8_t kOpPing = 0x9;
constexpr std::uint8_t kOpPong = 0xA;

std::string read_http_head(Socket& s) {
  std::string head;
  char c;
  while (head.size() < 16384) {
    if (!s.read_exact(&c, 1)) throw SocketError("connection closed during handshake");
    head.push_back(c);
    if (head.size() >= 4 && head.compare(head.size() - 4, 4, "\r\n\r\n") == 0) return head;
  }
  throw SocketError("handshake header too long");
}

std::optional<std::string> header_value(const std::string& head, const std::string& name) {
  std::string lower = text::to_lower(head);
  std::string key = "\r\n" + text::to_lower(name) + ":";
  auto pos = lower.find(key);
  if (pos == std::string::npos) return std::nullopt;
  auto start = pos + key.size();
  auto end = head.find("\r\n", start);
  return text::trim(head.substr(start, end - start));
}

}  // namespace

std::string websocket_accept_key(const std::string& client_key) {
  std::string s = client_key + "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";
  std::array<unsigned char, SHA_DIGEST_LENGTH> digest{};
  SHA1(reinterpret_cast<const unsigned char*>(s.data()), s.size(), digest.data());
  return base64_encode(std::span<const std::uint8_t>(digest.data(), digest.size()));
}

void WebSocketChannel::send_frame(std::uint8_t opcode, const std::string& payload) {
  std::string frame;
  frame.push_back(static_cast<char>(0x80 | opcode));
  std::uint8_t mask_bit = role_ == Role::client ? 0x80 : 0x00;
  std::size_t n = payload.size();
  if (n < 126) {
    frame.push_back(static_cast<char>(mask_bit | n));
  } else if (n <= 0xFFFF) {
    frame.push_back(static_cast<char>(mask_bit | 126));
    frame.push_back(static_cast<char>((n >> 8) & 0xFF));
    frame.push_back(static_cast<char>(n & 0xFF));
  } else {
    frame.push_back(static_cast<char>(mask_bit | 127));
    for (int i = 7; i >= 0; --i) frame.push_back(static_cast<char>((static_cast<std::uint64_t>(n) >> (8 * i)) & 0xFF));
  }
  if (role_ == Role::client) {
    static thread_local std::mt19937 rng(std::random_device{}());
    std::array<std::uint8_t, 4> mask{};
    for (auto& m : mask) m = static_cast<std::uint8_t>(rng());
    frame.append(reinterpret_cast<const char*>(mask.data()), 4);
    for (std::size_t i = 0; i < n; ++i) frame.push_back(static_cast<char>(payload[i] ^ mask[i % 4]));
  } else {
    frame += payload;
  }
  std::lock_guard lock(write_mu_);
  sock_.write_all(frame);
}

void WebSocketChannel::send(const std::string& message) { send_frame(kOpText, message); }

std::optional<std::string> WebSocketChannel::receive() {
  std::string message;
  bool in_message = false;
  try {
    while (true) {
      std::array<std::uint8_t, 2> h{};
      if (!sock_.read_exact(h.data(), 2)) return std::nullopt;
      bool fin = (h[0] & 0x80) != 0;
      std::uint8_t opcode = h[0] & 0x0F;
      bool masked = (h[1] & 0x80) != 0;
      std::uint64_t n = h[1] & 0x7F;
      if (n == 126) {
        std::array<std::uint8_t, 2> ext{};
        if (!sock_.read_exact(ext.data(), 2)) return std::nullopt;
        n = (std::uint64_t{ext[0]} << 8) | ext[1];
      } else if (n == 127) {
        std::array<std::uint8_t, 8> ext{};
        if (!sock_.read_exact(ext.data(), 8)) return std::nullopt;
        n = 0;
        for (auto b : ext) n = (n << 8) | b;
      }
      if (n > LengthPrefixedChannel::kMaxMessage) throw SocketError("websocket frame too large");
      std::array<std::uint8_t, 4> mask{};
      if (masked && !sock_.read_exact(mask.data(), 4)) return std::nullopt;
      std::string payload(n, '\0');
      if (n > 0 && !sock_.read_exact(payload.data(), n)) return std::nullopt;
      if (masked) {
        for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<char>(payload[i] ^ mask[i % 4]);
      }

      switch (opcode) {
        case kOpPing: send_frame(kOpPong, payload); continue;
        case kOpPong: continue;
        case kOpClose:
          try {
            send_frame(kOpClose, payload.substr(0, 2));
          } catch (const SocketError&) {
          }
          return std::nullopt;
        case kOpText:
        case kOpBinary:
          if (in_message) throw SocketError("websocket: new message inside a fragmented one");
          message = std::move(payload);
          in_message = true;
          break;
        case kOpContinuation:
          if (!in_message) throw SocketError("websocket: continuation without a message");
          message += payload;
          break;
        default: throw SocketError("websocket: unknown opcode");
      }
      if (fin) return message;
    }
  } catch (const SocketError&) {
    return std::nullopt;
  }
}

std::unique_ptr<WebSocketChannel> accept_websocket(Socket s, const std::string& path) {
  std::string head = read_http_head(s);
  auto line_end = head.find("\r\n");
  std::string request_line = head.substr(0, line_end);
  auto parts = text::tokenize_ws(request_line);
  auto key = header_value(head, "Sec-WebSocket-Key");
  if (parts.size() < 2 || parts[0] != "GET" || parts[1] != path || !key) {
    s.write_all("HTTP/1.1 404 Not Found\r\nContent-Length: 0\r\nConnection: close\r\n\r\n");
    throw SocketError("rejected websocket request: " + request_line);
  }
  s.write_all("HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Accept: " +
              websocket_accept_key(*key) + "\r\n\r\n");
  return std::make_unique<WebSocketChannel>(std::move(s), WebSocketChannel::Role::server);
}

std::unique_ptr<WebSocketChannel> connect_websocket(const std::string& host, std::uint16_t port, const std::string& path) {
  Socket s = connect_tcp(host, port);
  std::array<std::uint8_t, 16> nonce{};
  std::random_device rd;
  for (auto& b : nonce) b = static_cast<std::uint8_t>(rd());
  std::string key = base64_encode(std::span<const std::uint8_t>(nonce.data(), nonce.size()));
  s.write_all("GET " + path + " HTTP/1.1\r\nHost: " + host + ":" + std::to_string(port) +
              "\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Key: " + key +
              "\r\nSec-WebSocket-Version: 13\r\n\r\n");
  std::string head = read_http_head(s);
  if (head.rfind("HTTP/1.1 101", 0) != 0) throw SocketError("websocket upgrade refused");
  auto accept = header_value(head, "Sec-WebSocket-Accept");
  if (!accept || *accept != websocket_accept_key(key)) throw SocketError("websocket accept key mismatch");
  return std::make_unique<WebSocketChannel>(std::move(s), WebSocketChannel::Role::client);
}

std::unique_ptr<MessageChannel> accept_any(Socket s, const std::string& ws_path, int sniff_ms) {
  // A length prefix starting with 'G' would announce a >1 GB message, so one
  // byte is enough to tell the two framings apart. Silent peers get framing.
  char first = 0;
  if (s.wait_readable(sniff_ms)) {
    if (s.peek(&first, 1) == 0) throw SocketError("connection closed before the first message");
  }
  if (first == 'G') return accept_websocket(std::move(s), ws_path);
  return std::make_unique<LengthPrefixedChannel>(std::move(s));
}

}  // namespace butler::net
