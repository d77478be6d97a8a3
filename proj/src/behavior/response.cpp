#include "butler/behavior/response.hpp"

namespace butler::behavior {

std::string_view to_string(ResponseKind k) {
  switch (k) {
    case ResponseKind::ack: return "ack";
    case ResponseKind::answer: return "answer";
    case ResponseKind::error: return "error";
    case ResponseKind::disambiguation: return "disambiguation";
  }
  return "ack";
}

std::optional<ResponseKind> response_kind_from_string(std::string_view s) {
  for (auto k : {ResponseKind::ack, ResponseKind::answer, ResponseKind::error, ResponseKind::disambiguation}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

}  // namespace butler::behavior
