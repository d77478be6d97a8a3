#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "butler/skills/action.hpp"

namespace butler::behavior {

class PatternError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One element of a match pattern.
///   go|move     literal alternatives
///   up?         optional literal
///   {obj}       one or more tokens (never "and"/"then")
///   {loc:deixis} exactly one "this"/"here"
///   {s:state}   exactly one state word
struct PatternElement {
  enum class Kind { literal, slot, deixis_slot, state_slot };
  Kind kind = Kind::literal;
  std::vector<std::string> alternatives;
  bool optional = false;
  std::string slot;
};

/// Step of an emit template. An argument that is exactly "{slot}" passes the
/// slot through (as "*" when it is a demonstrative); anything else is a
/// question template with slots interpolated. "{current}" names the
/// container in the robot's current zone.
struct StepTemplate {
  skills::SkillKind skill = skills::SkillKind::move;
  std::vector<std::string> args;
};

struct Pattern {
  std::string match;
  std::vector<PatternElement> elements;
  std::vector<StepTemplate> emit;
  /// slot naming where a vqa step has to look; drives move insertion
  std::optional<std::string> at;
  /// open the `at` container before looking (and close it afterwards)
  bool inspect = false;
};

struct PatternTable {
  int version = 1;
  std::set<std::string, std::less<>> filler;
  std::set<std::string, std::less<>> lead_filler;  // dropped only at the start of a clause
  std::set<std::string, std::less<>> state_words;
  std::vector<Pattern> patterns;
};

using Bindings = std::map<std::string, std::vector<std::string>>;

std::vector<PatternElement> parse_pattern(std::string_view match);
PatternTable parse_pattern_table(std::string_view json_text);
PatternTable load_pattern_table(const std::filesystem::path& path);

/// Calls `visit` for every way `tokens` matches, shortest slot captures
/// first, until it returns true. Returns whether any visit accepted.
bool match_pattern(const Pattern& p, const PatternTable& table, const std::vector<std::string>& tokens,
                   const std::function<bool(const Bindings&)>& visit);

}  // namespace butler::behavior
