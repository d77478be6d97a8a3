#pragma once

// Reference shortest path for grid checks. Plain Dijkstra with a binary heap
// over 4-connected free cells; shares no code with the planner under test.

#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

#include "butler/world/world_model.hpp"

namespace butler::testing {

/// Number of cells on a shortest path (endpoints included), or nullopt.
inline std::optional<int> dijkstra_cells(const world::OccupancyGrid& g, world::Cell s, world::Cell t) {
  const int W = g.width(), H = g.height();
  auto idx = [W](int x, int y) { return y * W + x; };
  std::vector<int> dist(static_cast<std::size_t>(W * H), std::numeric_limits<int>::max());
  using Item = std::pair<int, int>;  // (dist, index)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  dist[idx(s.x, s.y)] = 0;
  pq.push({0, idx(s.x, s.y)});
  const int dx[] = {1, -1, 0, 0}, dy[] = {0, 0, 1, -1};
  while (!pq.empty()) {
    auto [d, i] = pq.top();
    pq.pop();
    if (d != dist[i]) continue;
    int x = i % W, y = i / W;
    if (x == t.x && y == t.y) return d + 1;
    for (int k = 0; k < 4; ++k) {
      int nx = x + dx[k], ny = y + dy[k];
      if (nx < 0 || ny < 0 || nx >= W || ny >= H || g.occupied({nx, ny})) continue;
      int j = idx(nx, ny);
      if (d + 1 < dist[j]) {
        dist[j] = d + 1;
        pq.push({d + 1, j});
      }
    }
  }
  return std::nullopt;
}

}  // namespace butler::testing
