#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace butler::net {

class SocketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Owning TCP socket descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(o.release()) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket() { close(); }

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release();
  void close();
  /// Stops both directions without releasing the descriptor; unblocks readers.
  void shutdown();

  /// Throws SocketError on failure; false on orderly EOF before `n` bytes.
  bool read_exact(void* buf, std::size_t n);
  /// Reads whatever is available (at least one byte); 0 on EOF.
  std::size_t read_some(void* buf, std::size_t n);
  void write_all(const void* buf, std::size_t n);
  void write_all(std::string_view s) { write_all(s.data(), s.size()); }
  /// Waits until readable. False on timeout.
  bool wait_readable(int timeout_ms);
  /// Copies up to n pending bytes without consuming them (blocks for at least one).
  std::size_t peek(void* buf, std::size_t n);

  void set_nodelay(bool on);
  void set_recv_timeout(int ms);

 private:
  int fd_ = -1;
};

Socket connect_tcp(const std::string& host, std::uint16_t port, int timeout_ms = 2000);

class Listener {
 public:
  /// Binds 127.0.0.1 by default; port 0 picks a free port.
  explicit Listener(std::uint16_t port, const std::string& host = "127.0.0.1");
  std::uint16_t port() const { return port_; }
  /// Blocks up to timeout_ms; nullopt on timeout.
  std::optional<Socket> accept(int timeout_ms);
  void close() { sock_.close(); }

 private:
  Socket sock_;
  std::uint16_t port_ = 0;
};

}  // namespace butler::net
