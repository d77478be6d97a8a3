#pragma once

#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "butler/world/world_model.hpp"

namespace butler::perception {

struct DetectionResult {
  world::ObjectId object_id;
  double score = 0.0;  // matched tokens / query tokens, in (0, 1]
  std::vector<std::string> matched_terms;
};

/// Swaps a result for a same-category distractor with probability epsilon.
struct DetectionNoise {
  double epsilon = 0.0;
  std::mt19937_64* rng = nullptr;
};

/// Attribute keys whose values act as filters in queries ("green tea box").
const std::vector<std::string>& filter_attribute_keys();

/// Open-vocabulary lookup against visible objects. Every non-attribute query
/// token must match the object's name, category or synonyms; attribute tokens
/// reject objects with a conflicting value and count as unmatched when the
/// object lacks that attribute. Sorted by (score desc, id asc).
std::vector<DetectionResult> detect(const world::WorldModel& w, std::string_view query, DetectionNoise noise = {});

/// Ids of all results that share the best score.
std::vector<world::ObjectId> top_candidates(const std::vector<DetectionResult>& results);

}  // namespace butler::perception
