#include "butler/perception/detect.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "butler/common/text.hpp"
#include "butler/world/queries.hpp"

namespace butler::perception {

using world::ObjectRecord;
using world::WorldModel;

namespace {

const std::set<std::string, std::less<>> kStopWords{"the", "a",  "an",   "some",  "any",   "of",  "my",
                                                    "our", "your", "this", "that", "these", "those", "please"};

std::vector<std::string> term_tokens(const ObjectRecord& o) {
  std::vector<std::string> out = text::tokenize(o.name);
  auto add = [&](const std::string& s) {
    auto t = text::tokenize(s);
    out.insert(out.end(), t.begin(), t.end());
  };
  add(o.category);
  for (const auto& s : o.synonyms) add(s);
  return out;
}

}  // namespace

const std::vector<std::string>& filter_attribute_keys() {
  static const std::vector<std::string> keys{"color", "size", "material", "pattern", "shape", "brand"};
  return keys;
}

std::vector<DetectionResult> detect(const WorldModel& w, std::string_view query, DetectionNoise noise) {
  if (text::trim(query).empty()) throw std::invalid_argument("detect: empty query");

  std::vector<std::string> tokens;
  for (auto& t : text::tokenize(query)) {
    if (!kStopWords.contains(t)) tokens.push_back(std::move(t));
  }
  if (tokens.empty()) return {};

  // attribute value -> key, over the whole scene
  std::map<std::string, std::string> attribute_vocab;
  for (const auto& [id, o] : w.objects) {
    for (const auto& key : filter_attribute_keys()) {
      if (auto it = o.attributes.find(key); it != o.attributes.end()) {
        attribute_vocab.emplace(text::to_lower(it->second), key);
      }
    }
  }

  std::vector<DetectionResult> results;
  for (const auto& [id, o] : w.objects) {
    if (!world::is_visible(w, id)) continue;
    const auto terms = term_tokens(o);
    DetectionResult r{id, 0.0, {}};
    int matched = 0;
    int term_matches = 0;
    bool rejected = false;
    for (const auto& t : tokens) {
      bool hit = std::any_of(terms.begin(), terms.end(), [&](const std::string& term) { return text::token_matches(t, term); });
      if (hit) {
        ++matched;
        ++term_matches;
        r.matched_terms.push_back(t);
        continue;
      }
      auto attr = attribute_vocab.find(t);
      if (attr == attribute_vocab.end()) {
        rejected = true;
        break;
      }
      auto own = o.attributes.find(attr->second);
      if (own == o.attributes.end()) continue;  // unknown attribute: kept, unmatched
      if (text::to_lower(own->second) != t) {
        rejected = true;
        break;
      }
      ++matched;
      r.matched_terms.push_back(t);
    }
    if (rejected || term_matches == 0) continue;
    r.score = static_cast<double>(matched) / static_cast<double>(tokens.size());
    results.push_back(std::move(r));
  }

  std::sort(results.begin(), results.end(), [](const DetectionResult& a, const DetectionResult& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.object_id < b.object_id;
  });

  if (noise.epsilon > 0.0 && noise.rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (auto& r : results) {
      if (coin(*noise.rng) >= noise.epsilon) continue;
      const ObjectRecord& original = w.objects.at(r.object_id);
      std::vector<world::ObjectId> distractors;
      for (const auto& [id, o] : w.objects) {
        if (id == r.object_id || o.category != original.category || !world::is_visible(w, id)) continue;
        bool already = std::any_of(results.begin(), results.end(), [&](const DetectionResult& x) { return x.object_id == id; });
        if (!already) distractors.push_back(id);
      }
      if (distractors.empty()) continue;
      std::uniform_int_distribution<std::size_t> pick(0, distractors.size() - 1);
      r.object_id = distractors[pick(*noise.rng)];
    }
  }
  return results;
}

std::vector<world::ObjectId> top_candidates(const std::vector<DetectionResult>& results) {
  std::vector<world::ObjectId> out;
  for (const auto& r : results) {
    if (r.score != results.front().score) break;
    out.push_back(r.object_id);
  }
  return out;
}

}  // namespace butler::perception
