#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "butler/skills/action.hpp"

namespace butler::behavior {

enum class PlanSource { rule, external };

struct Plan {
  std::vector<skills::PrimitiveAction> steps;  // may still hold Star arguments
  PlanSource source = PlanSource::rule;
  std::string raw;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, std::string expected);
  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

/// plan   := "[" (action ("," action)*)? "]"
/// action := ident "(" args? ")"
/// arg    := "\"" chars "\"" | "*"
/// Whitespace is allowed between tokens. Inside quotes, \" and \\ escape.
/// Skill names and arities are checked here too (vqa takes one or two
/// arguments, open/close refuse "*"), so every error carries a byte offset.
Plan parse_plan(std::string_view text);

/// Canonical form: `[pick(*), placeon("plate")]`. Point and object arguments
/// have no textual form and serialize as "*".
std::string serialize_plan(const std::vector<skills::PrimitiveAction>& steps);
std::string serialize_action(const skills::PrimitiveAction& a);

}  // namespace butler::behavior
