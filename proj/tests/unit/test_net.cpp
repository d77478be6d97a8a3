#include <doctest.h>

#include <thread>

#include <httplib.h>

#include "butler/net/backends.hpp"
#include "butler/net/channel.hpp"
#include "butler/net/socket.hpp"

using namespace butler;
using namespace butler::net;

namespace {

// Accepts one connection on a background thread and hands back the server side.
struct Loopback {
  Listener listener{0};
  std::unique_ptr<MessageChannel> server;
  std::thread t;

  template <class Accept>
  void start(Accept accept) {
    t = std::thread([this, accept] {
      auto s = listener.accept(2000);
      REQUIRE(s);
      server = accept(std::move(*s));
    });
  }
  void join() { t.join(); }
};

}  // namespace

TEST_SUITE("net") {

TEST_CASE("websocket accept key matches the RFC sample") {
  CHECK(websocket_accept_key("dGhlIHNhbXBsZSBub25jZQ==") == "s3pPLMBiTxaQ9kYGzzhZRbK+xOo=");
}

TEST_CASE("length-prefixed messages of all sizes") {
  Loopback lb;
  lb.start([](Socket s) { return std::make_unique<LengthPrefixedChannel>(std::move(s)); });
  LengthPrefixedChannel client(connect_tcp("127.0.0.1", lb.listener.port()));
  lb.join();
  for (std::size_t n : {0u, 1u, 125u, 70000u, 1u << 20}) {
    std::string msg(n, 'x');
    client.send(msg);
    CHECK(lb.server->receive() == msg);
  }
  lb.server->send("back");
  CHECK(client.receive() == "back");
  client.shutdown();
  CHECK_FALSE(lb.server->receive());
}

TEST_CASE("websocket text frames both ways") {
  Loopback lb;
  lb.start([](Socket s) { return accept_websocket(std::move(s), "/session"); });
  auto client = connect_websocket("127.0.0.1", lb.listener.port(), "/session");
  lb.join();
  for (std::size_t n : {0u, 5u, 126u, 65535u, 65536u, 300000u}) {
    std::string msg(n, 'y');
    client->send(msg);
    CHECK(lb.server->receive() == msg);
    lb.server->send(msg);
    CHECK(client->receive() == msg);
  }
  client->shutdown();
  CHECK_FALSE(lb.server->receive());
}

TEST_CASE("websocket rejects other paths") {
  Listener l(0);
  std::thread t([&] {
    auto s = l.accept(2000);
    REQUIRE(s);
    CHECK_THROWS_AS(accept_websocket(std::move(*s), "/session"), SocketError);
  });
  CHECK_THROWS(connect_websocket("127.0.0.1", l.port(), "/elsewhere"));
  t.join();
}

TEST_CASE("one port serves both framings") {
  for (bool ws : {false, true}) {
    Loopback lb;
    lb.start([](Socket s) { return accept_any(std::move(s), "/session"); });
    std::unique_ptr<MessageChannel> client;
    if (ws) {
      client = connect_websocket("127.0.0.1", lb.listener.port(), "/session");
    } else {
      client = std::make_unique<LengthPrefixedChannel>(connect_tcp("127.0.0.1", lb.listener.port()));
    }
    lb.join();
    client->send("ping");
    CHECK(lb.server->receive() == "ping");
  }
}

TEST_CASE("tcp line backend") {
  Listener l(0);
  std::thread t([&] {
    auto s = l.accept(2000);
    REQUIRE(s);
    std::string line;
    char c;
    while (s->read_some(&c, 1) == 1 && c != '\n') line += c;
    auto req = nlohmann::json::parse(line);
    s->write_all(nlohmann::json{{"echo", req.at("q")}}.dump() + "\n");
  });
  auto b = make_json_backend("tcp://127.0.0.1:" + std::to_string(l.port()));
  CHECK(b->call({{"q", 5}}) == nlohmann::json{{"echo", 5}});
  t.join();
}

TEST_CASE("http backend") {
  httplib::Server srv;
  srv.Post("/plan", [](const httplib::Request& req, httplib::Response& res) {
    auto j = nlohmann::json::parse(req.body);
    res.set_content(nlohmann::json{{"plan", "[]"}, {"got", j.at("instruction")}}.dump(), "application/json");
  });
  int port = srv.bind_to_any_port("127.0.0.1");
  std::thread t([&] { srv.listen_after_bind(); });
  srv.wait_until_ready();
  auto b = make_json_backend("http://127.0.0.1:" + std::to_string(port) + "/plan");
  CHECK(b->call({{"instruction", "go"}}).at("got") == "go");
  srv.stop();
  t.join();
}

TEST_CASE("unreachable backends and bad urls") {
  std::uint16_t dead;
  {
    Listener l(0);
    dead = l.port();
  }
  CHECK_THROWS_AS(make_json_backend("tcp://127.0.0.1:" + std::to_string(dead), 500)->call({}), BackendUnreachable);
  CHECK_THROWS_AS(make_json_backend("http://127.0.0.1:" + std::to_string(dead) + "/x", 500)->call({}), BackendUnreachable);
  CHECK_THROWS_AS(make_json_backend("ftp://host"), std::invalid_argument);
  CHECK_THROWS_AS(make_json_backend("tcp://host"), std::invalid_argument);
}

}  // TEST_SUITE
