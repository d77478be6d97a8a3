#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "butler/world/world_model.hpp"

namespace butler::behavior {

enum class ResponseKind { ack, answer, error, disambiguation };

std::string_view to_string(ResponseKind k);
std::optional<ResponseKind> response_kind_from_string(std::string_view s);

struct Response {
  std::string text;
  ResponseKind kind = ResponseKind::ack;
  std::vector<world::ObjectId> candidates;  // disambiguation only
  bool operator==(const Response&) const = default;
};

inline constexpr std::string_view kDisambiguationPrompt = "Which one are you referring to?";
inline constexpr std::string_view kPointPrompt = "Please point at the target.";

}  // namespace butler::behavior
