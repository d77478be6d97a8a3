#include "butler/behavior/patterns.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "butler/common/text.hpp"

namespace butler::behavior {

namespace {

bool is_separator(const std::string& t) { return t == "and" || t == "then"; }

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

StepTemplate parse_step(const nlohmann::json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_string()) throw PatternError("emit step must be [skill, args...]");
  auto kind = skills::skill_from_string(j[0].get<std::string>());
  if (!kind) throw PatternError("unknown skill '" + j[0].get<std::string>() + "' in pattern table");
  StepTemplate s{*kind, {}};
  for (std::size_t i = 1; i < j.size(); ++i) s.args.push_back(j[i].get<std::string>());
  return s;
}

struct Matcher {
  const std::vector<PatternElement>& elems;
  const PatternTable& table;
  const std::vector<std::string>& toks;
  const std::function<bool(const Bindings&)>& visit;
  Bindings bindings;

  bool run(std::size_t ei, std::size_t ti) {
    if (ei == elems.size()) return ti == toks.size() && visit(bindings);
    const PatternElement& e = elems[ei];
    switch (e.kind) {
      case PatternElement::Kind::literal: {
        if (ti < toks.size()) {
          for (const auto& alt : e.alternatives) {
            if (toks[ti] == alt && run(ei + 1, ti + 1)) return true;
          }
        }
        return e.optional && run(ei + 1, ti);
      }
      case PatternElement::Kind::deixis_slot:
      case PatternElement::Kind::state_slot: {
        if (ti >= toks.size()) return false;
        bool ok = e.kind == PatternElement::Kind::deixis_slot ? text::is_demonstrative(toks[ti])
                                                               : table.state_words.contains(toks[ti]);
        if (!ok) return false;
        bindings[e.slot] = {toks[ti]};
        bool accepted = run(ei + 1, ti + 1);
        bindings.erase(e.slot);
        return accepted;
      }
      case PatternElement::Kind::slot: {
        for (std::size_t end = ti + 1; end <= toks.size(); ++end) {
          if (is_separator(toks[end - 1])) break;
          bindings[e.slot] = {toks.begin() + static_cast<std::ptrdiff_t>(ti), toks.begin() + static_cast<std::ptrdiff_t>(end)};
          if (run(ei + 1, end)) return true;
        }
        bindings.erase(e.slot);
        return false;
      }
    }
    return false;
  }
};

}  // namespace

std::vector<PatternElement> parse_pattern(std::string_view match) {
  std::vector<PatternElement> out;
  for (const auto& word : text::tokenize_ws(match)) {
    PatternElement e;
    if (word.front() == '{') {
      if (word.back() != '}' || word.size() < 3) throw PatternError("malformed slot '" + word + "'");
      std::string inner = word.substr(1, word.size() - 2);
      auto colon = inner.find(':');
      e.kind = PatternElement::Kind::slot;
      e.slot = inner.substr(0, colon);
      if (colon != std::string::npos) {
        std::string kind = inner.substr(colon + 1);
        if (kind == "deixis") e.kind = PatternElement::Kind::deixis_slot;
        else if (kind == "state") e.kind = PatternElement::Kind::state_slot;
        else throw PatternError("unknown slot kind '" + kind + "'");
      }
      if (e.slot.empty()) throw PatternError("slot without a name in '" + std::string(match) + "'");
    } else {
      std::string w = word;
      if (w.back() == '?') {
        e.optional = true;
        w.pop_back();
      }
      e.alternatives = split(w, '|');
      for (const auto& alt : e.alternatives) {
        if (alt.empty()) throw PatternError("empty alternative in '" + std::string(match) + "'");
      }
    }
    out.push_back(std::move(e));
  }
  if (out.empty()) throw PatternError("empty pattern");
  return out;
}

PatternTable parse_pattern_table(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw PatternError(std::string("pattern table is not valid JSON: ") + e.what());
  }
  PatternTable t;
  try {
    t.version = j.value("version", 1);
    for (const auto& w : j.at("filler")) t.filler.insert(w.get<std::string>());
    if (j.contains("lead_filler"))
      for (const auto& w : j.at("lead_filler")) t.lead_filler.insert(w.get<std::string>());
    for (const auto& w : j.at("state_words")) t.state_words.insert(w.get<std::string>());
    for (const auto& p : j.at("patterns")) {
      Pattern pat;
      pat.match = p.at("match").get<std::string>();
      pat.elements = parse_pattern(pat.match);
      for (const auto& s : p.at("emit")) pat.emit.push_back(parse_step(s));
      if (p.contains("at")) pat.at = p.at("at").get<std::string>();
      pat.inspect = p.value("inspect", false);
      if (pat.inspect && !pat.at) throw PatternError("pattern '" + pat.match + "' inspects without an 'at' slot");
      t.patterns.push_back(std::move(pat));
    }
  } catch (const nlohmann::json::exception& e) {
    throw PatternError(std::string("malformed pattern table: ") + e.what());
  }
  return t;
}

PatternTable load_pattern_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw PatternError("cannot open pattern table " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_pattern_table(ss.str());
}

bool match_pattern(const Pattern& p, const PatternTable& table, const std::vector<std::string>& tokens,
                   const std::function<bool(const Bindings&)>& visit) {
  Matcher m{p.elements, table, tokens, visit, {}};
  return m.run(0, 0);
}

}  // namespace butler::behavior
