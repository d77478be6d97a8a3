#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "butler/world/world_model.hpp"

namespace butler::skills {

class NoPath : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PathPlan {
  std::vector<world::Cell> waypoints;  // start ... goal, 4-connected
  /// Number of cells on the path, endpoints included.
  std::size_t length() const { return waypoints.size(); }
  /// Cell-to-cell moves (length - 1).
  std::size_t steps() const { return waypoints.empty() ? 0 : waypoints.size() - 1; }
};

/// A* over the occupancy grid: 4-connected, unit cost, Manhattan heuristic.
/// Neighbors are expanded N, E, S, W (N is -y); equal-f nodes pop in
/// insertion order, so the result is deterministic.
/// Throws std::invalid_argument if start or goal is out of bounds or occupied,
/// NoPath if they are disconnected.
PathPlan plan_path(const world::OccupancyGrid& grid, world::Cell start, world::Cell goal);

/// Breadth-first step counts from start over free cells; -1 where unreachable.
std::vector<int> reachable_steps(const world::OccupancyGrid& grid, world::Cell start);

}  // namespace butler::skills
