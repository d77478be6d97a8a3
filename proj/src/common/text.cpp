#include "butler/common/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

namespace butler::text {

namespace {

constexpr std::array<std::pair<std::string_view, std::string_view>, 14> kContractions{{
    {"it's", "it is"},
    {"what's", "what is"},
    {"that's", "that is"},
    {"there's", "there is"},
    {"here's", "here is"},
    {"where's", "where is"},
    {"let's", "let us"},
    {"don't", "do not"},
    {"doesn't", "does not"},
    {"isn't", "is not"},
    {"aren't", "are not"},
    {"can't", "can not"},
    {"won't", "will not"},
    {"i'm", "i am"},
}};

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(std::string_view s) {
  auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> tokenize(std::string_view s) {
  std::string lowered = to_lower(s);
  // Typographic apostrophe (U+2019) folds to ASCII before contraction lookup.
  for (std::size_t pos = 0; (pos = lowered.find("\xE2\x80\x99", pos)) != std::string::npos;) {
    lowered.replace(pos, 3, "'");
  }

  std::vector<std::string> raw;
  std::string current;
  for (char c : lowered) {
    if (is_word_char(c) || c == '\'') {
      current.push_back(c);
    } else if (!current.empty()) {
      raw.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) raw.push_back(std::move(current));

  std::vector<std::string> tokens;
  for (auto& word : raw) {
    std::string_view expanded = word;
    for (const auto& [from, to] : kContractions) {
      if (word == from) {
        expanded = to;
        break;
      }
    }
    std::string piece;
    for (char c : expanded) {
      if (is_word_char(c)) {
        piece.push_back(c);
      } else if (!piece.empty()) {
        tokens.push_back(std::move(piece));
        piece.clear();
      }
    }
    if (!piece.empty()) tokens.push_back(std::move(piece));
  }
  return tokens;
}

std::vector<std::string> tokenize_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

bool token_matches(std::string_view query, std::string_view term) {
  if (query == term) return true;
  auto strip = [](std::string_view w) -> std::string_view {
    if (w.size() > 3 && w.ends_with("es") &&
        (w.ends_with("xes") || w.ends_with("ches") || w.ends_with("shes") || w.ends_with("sses"))) {
      return w.substr(0, w.size() - 2);
    }
    if (w.size() > 2 && w.ends_with('s') && !w.ends_with("ss")) return w.substr(0, w.size() - 1);
    return w;
  };
  return strip(query) == strip(term);
}

bool contains_case_insensitive(std::string_view haystack, std::string_view needle) {
  return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

bool is_demonstrative(std::string_view token) {
  return token == "this" || token == "here";
}

}  // namespace butler::text
