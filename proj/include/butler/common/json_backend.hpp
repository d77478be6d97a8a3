#pragma once

#include <stdexcept>

#include <json.hpp>

namespace butler {

class BackendUnreachable : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Request/response transport shared by the external planner and VQA
/// contracts: one JSON object out, one back. Throws BackendUnreachable.
class JsonBackend {
 public:
  virtual ~JsonBackend() = default;
  virtual nlohmann::json call(const nlohmann::json& request) = 0;
};

}  // namespace butler
