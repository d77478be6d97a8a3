#include "butler/behavior/plan.hpp"

#include <cctype>

namespace butler::behavior {

using skills::ActionArg;
using skills::PrimitiveAction;
using skills::SkillKind;

ParseError::ParseError(std::size_t position, std::string expected)
    : std::runtime_error("parse error at byte " + std::to_string(position) + ": expected " + expected),
      position_(position),
      expected_(std::move(expected)) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  std::vector<PrimitiveAction> plan() {
    skip_ws();
    expect('[', "'['");
    std::vector<PrimitiveAction> steps;
    skip_ws();
    if (peek() == ']') {
      ++pos_;
    } else {
      while (true) {
        steps.push_back(action());
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(']', "',' or ']'");
        break;
      }
    }
    skip_ws();
    if (pos_ != s_.size()) throw ParseError(pos_, "end of input");
    return steps;
  }

 private:
  PrimitiveAction action() {
    skip_ws();
    std::size_t start = pos_;
    std::string name;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      name.push_back(s_[pos_++]);
    }
    if (name.empty() || std::isdigit(static_cast<unsigned char>(name[0]))) throw ParseError(start, "skill name");
    auto kind = skills::skill_from_string(name);
    if (!kind) throw ParseError(start, "one of move, pick, placeon, open, close, vqa");

    PrimitiveAction a{*kind, {}};
    skip_ws();
    expect('(', "'('");
    skip_ws();
    if (peek() != ')') {
      while (true) {
        skip_ws();
        std::size_t arg_pos = pos_;
        ActionArg arg = argument();
        check_arg(a, arg, arg_pos);
        a.args.push_back(std::move(arg));
        skip_ws();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        break;
      }
    }
    std::size_t close_pos = pos_;
    if (peek() != ')') throw ParseError(pos_, a.args.empty() ? "argument or ')'" : "',' or ')'");
    if (a.args.empty()) throw ParseError(close_pos, "argument");
    ++pos_;
    return a;
  }

  void check_arg(const PrimitiveAction& a, const ActionArg& arg, std::size_t pos) {
    std::size_t index = a.args.size();
    std::size_t max = a.skill == SkillKind::vqa ? 2 : 1;
    if (index >= max) throw ParseError(pos, "')'");
    bool star = std::holds_alternative<skills::Star>(arg);
    if (star && (a.skill == SkillKind::open || a.skill == SkillKind::close)) throw ParseError(pos, "quoted container name");
    if (star && a.skill == SkillKind::vqa && index == 0) throw ParseError(pos, "quoted question");
  }

  ActionArg argument() {
    if (peek() == '*') {
      ++pos_;
      return skills::Star{};
    }
    if (peek() != '"') throw ParseError(pos_, "'\"' or '*'");
    ++pos_;
    std::string value;
    while (true) {
      if (pos_ >= s_.size()) throw ParseError(pos_, "closing '\"'");
      char c = s_[pos_++];
      if (c == '"') break;
      if (c == '\\') {
        if (pos_ >= s_.size()) throw ParseError(pos_, "escaped character");
        char e = s_[pos_];
        if (e != '"' && e != '\\') throw ParseError(pos_, "'\"' or '\\' after '\\'");
        value.push_back(e);
        ++pos_;
        continue;
      }
      value.push_back(c);
    }
    return skills::TextArg{std::move(value)};
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void expect(char c, const char* what) {
    if (pos_ >= s_.size() || s_[pos_] != c) throw ParseError(pos_, what);
    ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Plan parse_plan(std::string_view text) {
  Plan p;
  p.steps = Parser(text).plan();
  p.raw = std::string(text);
  return p;
}

std::string serialize_action(const PrimitiveAction& a) {
  std::string out(skills::to_string(a.skill));
  out.push_back('(');
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ", ";
    if (const auto* t = std::get_if<skills::TextArg>(&a.args[i])) out += quote(t->text);
    else out += "*";
  }
  out.push_back(')');
  return out;
}

std::string serialize_plan(const std::vector<PrimitiveAction>& steps) {
  std::string out = "[";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (i) out += ", ";
    out += serialize_action(steps[i]);
  }
  out.push_back(']');
  return out;
}

}  // namespace butler::behavior
