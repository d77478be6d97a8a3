#include "butler/session/server.hpp"

#include <sys/socket.h>
#include <sys/time.h>

#include <condition_variable>
#include <deque>
#include <variant>

namespace butler::session {

namespace {

using Clock = std::chrono::steady_clock;

void bump_max(std::atomic<std::int64_t>& slot, std::int64_t v) {
  std::int64_t cur = slot.load();
  while (v > cur && !slot.compare_exchange_weak(cur, v)) {
  }
}

struct Incoming {
  std::string text;
  Clock::time_point received;
};
struct PlanDone {
  std::uint64_t generation;
  behavior::PlanResult result;
};
struct PeerClosed {};
using Event = std::variant<Incoming, PlanDone, PeerClosed>;

}  // namespace

/// One client. Three threads: reader (socket -> events), loop (owns the
/// Session, ticks frames) and writer (outbox -> socket). Planner calls for
/// non-rule planners run on their own threads.
class Connection {
 public:
  static constexpr int kHandshakeTimeoutMs = 2000;

  Connection(net::Socket s, const ServerConfig& cfg, ServerStats& stats)
      : sock_(std::move(s)), cfg_(cfg), stats_(stats) {}

  ~Connection() { stop(); }

  void start() {
    loop_ = std::thread([this] {
      if (!handshake()) {
        finished_ = true;
        return;
      }
      writer_ = std::thread([this] { write_loop(); });
      reader_ = std::thread([this] { read_loop(); });
      event_loop();
    });
  }

  void stop() {
    {
      std::lock_guard lk(ev_mu_);
      stopping_ = true;
    }
    ev_cv_.notify_all();
    // The handshake gives up on its own (receive timeout); join the loop first.
    if (loop_.joinable()) loop_.join();
    if (!channel_) return;
    channel_->shutdown();
    {
      std::lock_guard lk(out_mu_);
      out_closed_ = true;
    }
    out_cv_.notify_all();
    if (reader_.joinable()) reader_.join();
    if (writer_.joinable()) writer_.join();
  }

  bool finished() const { return finished_.load(); }

 private:
  bool handshake() {
    try {
      const int fd = sock_.fd();
      sock_.set_nodelay(true);
      sock_.set_recv_timeout(kHandshakeTimeoutMs);
      channel_ = net::accept_any(std::move(sock_), cfg_.ws_path);
      timeval tv{};  // back to blocking reads
      ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
      return true;
    } catch (const std::exception&) {
      channel_.reset();
      return false;
    }
  }

  void push_event(Event e) {
    {
      std::lock_guard lk(ev_mu_);
      events_.push_back(std::move(e));
    }
    ev_cv_.notify_all();
  }

  void read_loop() {
    try {
      while (auto m = channel_->receive()) push_event(Incoming{std::move(*m), Clock::now()});
    } catch (const std::exception&) {
    }
    push_event(PeerClosed{});
  }

  void enqueue(std::string text, bool is_frame) {
    {
      std::lock_guard lk(out_mu_);
      if (out_closed_) return;
      if (is_frame && pending_frames_ >= cfg_.max_pending_frames) {
        ++stats_.frames_dropped;
        return;
      }
      if (is_frame) ++pending_frames_;
      outbox_.push_back({std::move(text), is_frame});
    }
    out_cv_.notify_all();
  }

  void write_loop() {
    for (;;) {
      std::pair<std::string, bool> item;
      {
        std::unique_lock lk(out_mu_);
        out_cv_.wait(lk, [&] { return out_closed_ || !outbox_.empty(); });
        if (outbox_.empty()) return;
        item = std::move(outbox_.front());
        outbox_.pop_front();
      }
      try {
        channel_->send(item.first);
      } catch (const std::exception&) {
        push_event(PeerClosed{});
        return;
      }
      if (item.second) {
        std::lock_guard lk(out_mu_);
        --pending_frames_;
        ++stats_.frames_sent;
      }
    }
  }

  std::int64_t wall_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - started_).count();
  }

  void handle_text(Session& s, const std::string& text) {
    wire::Message m;
    try {
      m = wire::decode(text);
    } catch (const wire::DecodeError& e) {
      s.protocol_error(e.what(), e.seq());
      return;
    }
    if (!seq_guard_.accept(m.seq)) {
      s.protocol_error("seq must increase", m.seq);
      return;
    }
    if (!wire::is_client_payload(m.payload)) {
      s.protocol_error("'" + std::string(wire::type_name(m.payload)) + "' is a server message", m.seq);
      return;
    }
    const auto* chat = std::get_if<wire::Chat>(&m.payload);
    if (!chat) {
      s.handle(m.payload);
      return;
    }
    auto job = s.on_chat(chat->text);
    if (!job) return;
    if (dynamic_cast<behavior::RulePlanner*>(planner_.get())) {
      s.on_plan_ready(job->generation, planner_->generate(job->instruction, job->context));
      return;
    }
    // Slow planners must not block the loop; a newer chat makes the result stale.
    if (pending_plan_.joinable()) pending_plan_.request_stop();
    retired_.push_back(std::move(pending_plan_));
    pending_plan_ = std::jthread([this, job = std::move(*job)](std::stop_token st) {
      auto r = planner_->generate(job.instruction, job.context, st);
      push_event(PlanDone{job.generation, std::move(r)});
    });
  }

  void event_loop() {
    planner_ = cfg_.make_planner();
    Session s(cfg_.world, planner_, cfg_.session);
    if (cfg_.vqa_backend) s.set_vqa_backend(cfg_.vqa_backend);
    s.set_sink([this](const wire::Message& m) {
      enqueue(wire::encode(m), std::holds_alternative<wire::FrameMsg>(m.payload));
    });
    started_ = Clock::now();
    const std::int64_t base = s.now();
    auto next_tick = Clock::now();

    for (;;) {
      std::deque<Event> batch;
      {
        std::unique_lock lk(ev_mu_);
        ev_cv_.wait_until(lk, next_tick, [&] { return stopping_ || !events_.empty(); });
        if (stopping_) break;
        batch.swap(events_);
      }
      bool closed = false;
      for (auto& e : batch) {
        s.advance_to(base + wall_ms());
        if (auto* in = std::get_if<Incoming>(&e)) {
          handle_text(s, in->text);
          auto us = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - in->received).count();
          stats_.last_handle_us = us;
          bump_max(stats_.max_handle_us, us);
          ++stats_.messages_handled;
        } else if (auto* pd = std::get_if<PlanDone>(&e)) {
          s.on_plan_ready(pd->generation, std::move(pd->result));
        } else {
          closed = true;
        }
      }
      if (closed) break;
      auto now = Clock::now();
      if (now >= next_tick) {
        s.advance_to(base + wall_ms());
        s.emit_frame();
        next_tick += cfg_.frame_period;
        // After a stall, keep the cadence instead of bursting.
        while (next_tick <= now) next_tick += cfg_.frame_period;
      }
    }
    if (pending_plan_.joinable()) pending_plan_.request_stop();
    for (auto& t : retired_)
      if (t.joinable()) t.request_stop();
    pending_plan_ = {};
    retired_.clear();
    channel_->shutdown();
    {
      std::lock_guard lk(out_mu_);
      out_closed_ = true;
    }
    out_cv_.notify_all();
    finished_ = true;
  }

  net::Socket sock_;
  std::unique_ptr<net::MessageChannel> channel_;
  const ServerConfig& cfg_;
  ServerStats& stats_;
  std::shared_ptr<behavior::Planner> planner_;
  wire::SeqGuard seq_guard_;
  Clock::time_point started_;

  std::mutex ev_mu_;
  std::condition_variable ev_cv_;
  std::deque<Event> events_;
  bool stopping_ = false;

  std::mutex out_mu_;
  std::condition_variable out_cv_;
  std::deque<std::pair<std::string, bool>> outbox_;
  std::size_t pending_frames_ = 0;
  bool out_closed_ = false;

  std::jthread pending_plan_;
  std::vector<std::jthread> retired_;
  std::atomic<bool> finished_{false};

  std::thread reader_, loop_, writer_;
};

LiveServer::LiveServer(ServerConfig cfg) : cfg_(std::move(cfg)) {
  if (!cfg_.make_planner) throw std::invalid_argument("ServerConfig.make_planner is required");
}

LiveServer::~LiveServer() { stop(); }

void LiveServer::start() {
  listener_.emplace(cfg_.port, cfg_.host);
  port_ = listener_->port();
  stopping_ = false;
  acceptor_ = std::thread([this] { accept_loop(); });
}

void LiveServer::stop() {
  stopping_ = true;
  if (acceptor_.joinable()) acceptor_.join();
  std::list<std::shared_ptr<Connection>> conns;
  {
    std::lock_guard lk(mu_);
    conns.swap(connections_);
  }
  conns.clear();  // each destructor stops and joins
  if (listener_) listener_->close();
  listener_.reset();
}

void LiveServer::accept_loop() {
  while (!stopping_) {
    std::optional<net::Socket> s;
    try {
      s = listener_->accept(100);
    } catch (const net::SocketError&) {
      continue;
    }
    {
      std::lock_guard lk(mu_);
      connections_.remove_if([](const auto& c) { return c->finished(); });
    }
    if (!s) continue;
    auto c = std::make_shared<Connection>(std::move(*s), cfg_, stats_);
    c->start();
    std::lock_guard lk(mu_);
    connections_.push_back(std::move(c));
  }
}

Client Client::connect(const std::string& host, std::uint16_t port, bool websocket, const std::string& ws_path) {
  if (websocket) return Client(net::connect_websocket(host, port, ws_path));
  auto s = net::connect_tcp(host, port);
  s.set_nodelay(true);
  return Client(std::make_unique<net::LengthPrefixedChannel>(std::move(s)));
}

std::uint64_t Client::send(const wire::Payload& p) {
  wire::Message m;
  m.seq = ++seq_;
  m.timestamp_ms = 0;
  m.payload = p;
  channel_->send(wire::encode(m));
  return m.seq;
}

std::optional<wire::Message> Client::receive() {
  auto t = channel_->receive();
  if (!t) return std::nullopt;
  return wire::decode(*t);
}

}  // namespace butler::session
