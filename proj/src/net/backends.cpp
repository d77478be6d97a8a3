#include "butler/net/backends.hpp"

#include <httplib.h>

#include <stdexcept>

#include "butler/net/socket.hpp"

namespace butler::net {

nlohmann::json TcpLineBackend::call(const nlohmann::json& request) {
  try {
    Socket s = connect_tcp(host_, port_, timeout_ms_);
    s.write_all(request.dump() + "\n");
    std::string line;
    char buf[4096];
    while (true) {
      if (!s.wait_readable(timeout_ms_)) throw BackendUnreachable("backend timed out");
      std::size_t n = s.read_some(buf, sizeof buf);
      if (n == 0) break;
      line.append(buf, n);
      if (auto nl = line.find('\n'); nl != std::string::npos) {
        line.resize(nl);
        break;
      }
    }
    return nlohmann::json::parse(line);
  } catch (const SocketError& e) {
    throw BackendUnreachable(e.what());
  } catch (const nlohmann::json::exception& e) {
    // A garbled reply is reported like any other unusable reply.
    return nlohmann::json::object();
  }
}

nlohmann::json HttpJsonBackend::call(const nlohmann::json& request) {
  httplib::Client cli(base_);
  cli.set_connection_timeout(std::chrono::milliseconds(timeout_ms_));
  cli.set_read_timeout(std::chrono::milliseconds(timeout_ms_));
  auto res = cli.Post(path_, request.dump(), "application/json");
  if (!res) throw BackendUnreachable("http backend: " + httplib::to_string(res.error()));
  if (res->status != 200) throw BackendUnreachable("http backend returned status " + std::to_string(res->status));
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::exception&) {
    return nlohmann::json::object();
  }
}

std::shared_ptr<JsonBackend> make_json_backend(const std::string& url, int timeout_ms) {
  auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw std::invalid_argument("backend url needs a scheme: " + url);
  std::string scheme = url.substr(0, scheme_end);
  std::string rest = url.substr(scheme_end + 3);
  auto slash = rest.find('/');
  std::string authority = rest.substr(0, slash);
  std::string path = slash == std::string::npos ? "/" : rest.substr(slash);
  if (scheme == "http") return std::make_shared<HttpJsonBackend>("http://" + authority, path, timeout_ms);
  if (scheme == "tcp") {
    auto colon = authority.rfind(':');
    if (colon == std::string::npos) throw std::invalid_argument("tcp backend url needs a port: " + url);
    int port = std::stoi(authority.substr(colon + 1));
    if (port <= 0 || port > 65535) throw std::invalid_argument("bad port in " + url);
    return std::make_shared<TcpLineBackend>(authority.substr(0, colon), static_cast<std::uint16_t>(port), timeout_ms);
  }
  throw std::invalid_argument("unsupported backend scheme '" + scheme + "'");
}

}  // namespace butler::net
