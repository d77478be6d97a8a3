#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "butler/common/json_backend.hpp"

namespace butler::net {

/// One JSON object per line over a fresh TCP connection per request.
class TcpLineBackend : public JsonBackend {
 public:
  TcpLineBackend(std::string host, std::uint16_t port, int timeout_ms = 10000)
      : host_(std::move(host)), port_(port), timeout_ms_(timeout_ms) {}
  nlohmann::json call(const nlohmann::json& request) override;

 private:
  std::string host_;
  std::uint16_t port_;
  int timeout_ms_;
};

/// POSTs the request as application/json and parses the body of the reply.
class HttpJsonBackend : public JsonBackend {
 public:
  HttpJsonBackend(std::string base, std::string path, int timeout_ms = 10000)
      : base_(std::move(base)), path_(std::move(path)), timeout_ms_(timeout_ms) {}
  nlohmann::json call(const nlohmann::json& request) override;

 private:
  std::string base_;
  std::string path_;
  int timeout_ms_;
};

/// tcp://host:port or http://host:port/path. Throws std::invalid_argument.
std::shared_ptr<JsonBackend> make_json_backend(const std::string& url, int timeout_ms = 10000);

}  // namespace butler::net
