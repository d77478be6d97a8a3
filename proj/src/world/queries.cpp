#include "butler/world/queries.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "butler/common/text.hpp"

namespace butler::world {

namespace {

// Parent chain walk; bounded so that a malformed cycle cannot hang a query.
template <typename Fn>
void walk_ancestors(const WorldModel& w, const ObjectId& id, Fn&& fn) {
  const ObjectRecord* current = w.find_object(id);
  for (std::size_t depth = 0; current && depth <= w.objects.size(); ++depth) {
    const auto& parent = current->parent;
    if (parent.kind != ParentRef::Kind::container && parent.kind != ParentRef::Kind::surface) return;
    const ObjectRecord* next = w.find_object(parent.ref);
    if (!next) return;  // surface parent naming a zone
    if (!fn(*next)) return;
    current = next;
  }
}

}  // namespace

bool is_visible(const WorldModel& w, const ObjectId& id) {
  if (!w.find_object(id)) return false;
  bool visible = true;
  const ObjectRecord* child = w.find_object(id);
  walk_ancestors(w, id, [&](const ObjectRecord& ancestor) {
    if (child->parent.kind == ParentRef::Kind::container && ancestor.is_container &&
        !ancestor.is_open.value_or(false)) {
      visible = false;
      return false;
    }
    child = &ancestor;
    return true;
  });
  return visible;
}

bool has_ancestor(const WorldModel& w, const ObjectId& id, const ObjectId& ancestor) {
  bool found = false;
  walk_ancestors(w, id, [&](const ObjectRecord& a) {
    if (a.id == ancestor) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

std::vector<ObjectId> children_of(const WorldModel& w, const ObjectId& id) {
  std::vector<ObjectId> out;
  for (const auto& [oid, obj] : w.objects) {
    if ((obj.parent.kind == ParentRef::Kind::container || obj.parent.kind == ParentRef::Kind::surface) &&
        obj.parent.ref == id) {
      out.push_back(oid);
    }
  }
  return out;
}

const Zone* zone_of_object(const WorldModel& w, const ObjectId& id) {
  const ObjectRecord* root = w.find_object(id);
  if (!root) return nullptr;
  walk_ancestors(w, id, [&](const ObjectRecord& a) {
    root = &a;
    return true;
  });
  if (root->parent.kind == ParentRef::Kind::surface && !w.find_object(root->parent.ref)) {
    if (const Zone* z = w.find_zone(root->parent.ref)) return z;
  }
  return w.zone_at(root->pose);
}

const ObjectRecord* find_container(const WorldModel& w, std::string_view name) {
  std::string key = text::to_lower(name);
  for (const auto& [id, obj] : w.objects) {
    if (obj.is_container && (id == key || text::to_lower(obj.name) == key)) return &obj;
  }
  if (const Zone* z = w.find_zone(key)) {
    for (const auto& [id, obj] : w.objects) {
      if (obj.is_container && z->footprint.contains(obj.pose)) return &obj;
    }
  }
  return nullptr;
}

const Zone* robot_zone(const WorldModel& w, double tolerance) {
  const Zone* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const auto& z : w.zones) {
    double d = distance(z.waypoint.position(), w.robot.base.position());
    if (d <= tolerance && d < best_d) {
      best = &z;
      best_d = d;
    }
  }
  return best;
}

std::map<std::string, std::vector<std::string>> build_location_directory(const WorldModel& w) {
  std::map<std::string, std::set<std::string>> sets;
  for (const auto& [id, obj] : w.objects) {
    const Zone* z = zone_of_object(w, id);
    auto add = [&](const std::string& key) {
      if (key.empty()) return;
      auto& zones = sets[text::to_lower(key)];
      if (z) zones.insert(z->name);
    };
    add(obj.name);
    add(obj.category);
    for (const auto& s : obj.synonyms) add(s);
  }
  std::map<std::string, std::vector<std::string>> out;
  for (auto& [k, v] : sets) out[k] = {v.begin(), v.end()};
  return out;
}

}  // namespace butler::world
