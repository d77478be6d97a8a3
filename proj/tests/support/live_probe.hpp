#pragma once

// Background reader for a session Client: records every server message with
// its arrival time so tests can measure frame rate and response latency.

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "butler/session/server.hpp"

namespace butler::testing {

using SteadyClock = std::chrono::steady_clock;

struct Received {
  SteadyClock::time_point at;
  session::wire::Message msg;
};

class LiveProbe {
 public:
  explicit LiveProbe(session::Client& c) : client_(c), reader_([this] { loop(); }) {}
  ~LiveProbe() {
    client_.close();
    if (reader_.joinable()) reader_.join();
  }

  std::vector<Received> snapshot() {
    std::lock_guard lock(mu_);
    return got_;
  }

  /// First non-frame message that arrived at or after `since`.
  std::optional<Received> wait_reply(SteadyClock::time_point since, std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    std::optional<Received> hit;
    cv_.wait_for(lock, timeout, [&] {
      for (const auto& r : got_) {
        if (r.at >= since && !std::holds_alternative<session::wire::FrameMsg>(r.msg.payload)) {
          hit = r;
          return true;
        }
      }
      return closed_;
    });
    return hit;
  }

  template <class T>
  std::optional<T> wait_for(SteadyClock::time_point since, std::chrono::milliseconds timeout) {
    std::unique_lock lock(mu_);
    std::optional<T> hit;
    cv_.wait_for(lock, timeout, [&] {
      for (const auto& r : got_) {
        if (r.at < since) continue;
        if (auto* p = std::get_if<T>(&r.msg.payload)) {
          hit = *p;
          return true;
        }
      }
      return closed_;
    });
    return hit;
  }

 private:
  void loop() {
    try {
      while (auto m = client_.receive()) {
        std::lock_guard lock(mu_);
        got_.push_back({SteadyClock::now(), std::move(*m)});
        cv_.notify_all();
      }
    } catch (const std::exception&) {
      // Shut down under us or sent garbage; either way the stream is over.
    }
    std::lock_guard lock(mu_);
    closed_ = true;
    cv_.notify_all();
  }

  session::Client& client_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::vector<Received> got_;
  bool closed_ = false;
  std::thread reader_;
};

/// Frames per second between the first and last frame in [from, to).
inline double frame_rate(const std::vector<Received>& got, SteadyClock::time_point from, SteadyClock::time_point to) {
  std::optional<SteadyClock::time_point> first, last;
  std::size_t n = 0;
  for (const auto& r : got) {
    if (r.at < from || r.at >= to || !std::holds_alternative<session::wire::FrameMsg>(r.msg.payload)) continue;
    if (!first) first = r.at;
    last = r.at;
    ++n;
  }
  if (n < 2) return 0.0;
  return static_cast<double>(n - 1) / std::chrono::duration<double>(*last - *first).count();
}

inline std::size_t count_frames(const std::vector<Received>& got, SteadyClock::time_point from,
                                SteadyClock::time_point to) {
  std::size_t n = 0;
  for (const auto& r : got) {
    if (r.at >= from && r.at < to && std::holds_alternative<session::wire::FrameMsg>(r.msg.payload)) ++n;
  }
  return n;
}

}  // namespace butler::testing
