#include "butler/skills/path_planner.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstdlib>
#include <queue>
#include <tuple>

namespace butler::skills {

using world::Cell;
using world::OccupancyGrid;

namespace {

constexpr std::array<Cell, 4> kNeighborOrder{{{0, -1}, {1, 0}, {0, 1}, {-1, 0}}};

int manhattan(Cell a, Cell b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

}  // namespace

PathPlan plan_path(const OccupancyGrid& grid, Cell start, Cell goal) {
  if (!grid.free(start)) throw std::invalid_argument("plan_path: start cell is out of bounds or occupied");
  if (!grid.free(goal)) throw std::invalid_argument("plan_path: goal cell is out of bounds or occupied");

  const int w = grid.width();
  const auto index = [w](Cell c) { return static_cast<std::size_t>(c.y) * w + c.x; };
  const std::size_t n = static_cast<std::size_t>(w) * grid.height();

  std::vector<int> g(n, -1);
  std::vector<std::int64_t> came_from(n, -1);
  std::vector<bool> closed(n, false);

  // (f, insertion sequence, cell); min-heap
  using Entry = std::tuple<int, std::uint64_t, int, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  std::uint64_t seq = 0;

  g[index(start)] = 0;
  open.emplace(manhattan(start, goal), seq++, start.x, start.y);

  while (!open.empty()) {
    auto [f, s, x, y] = open.top();
    open.pop();
    Cell cur{x, y};
    std::size_t ci = index(cur);
    if (closed[ci]) continue;
    closed[ci] = true;
    if (cur == goal) break;

    for (Cell d : kNeighborOrder) {
      Cell nb{cur.x + d.x, cur.y + d.y};
      if (!grid.free(nb)) continue;
      std::size_t ni = index(nb);
      if (closed[ni]) continue;
      int cand = g[ci] + 1;
      if (g[ni] == -1 || cand < g[ni]) {
        g[ni] = cand;
        came_from[ni] = static_cast<std::int64_t>(ci);
        open.emplace(cand + manhattan(nb, goal), seq++, nb.x, nb.y);
      }
    }
  }

  if (!closed[index(goal)]) throw NoPath("no obstacle-free path between the requested cells");

  PathPlan plan;
  for (std::int64_t i = static_cast<std::int64_t>(index(goal)); i != -1; i = came_from[static_cast<std::size_t>(i)]) {
    plan.waypoints.push_back({static_cast<int>(i % w), static_cast<int>(i / w)});
    if (static_cast<std::size_t>(i) == index(start)) break;
  }
  std::reverse(plan.waypoints.begin(), plan.waypoints.end());
  return plan;
}

std::vector<int> reachable_steps(const OccupancyGrid& grid, Cell start) {
  const int w = grid.width();
  std::vector<int> dist(static_cast<std::size_t>(w) * grid.height(), -1);
  if (!grid.free(start)) return dist;
  std::queue<Cell> q;
  dist[static_cast<std::size_t>(start.y) * w + start.x] = 0;
  q.push(start);
  while (!q.empty()) {
    Cell c = q.front();
    q.pop();
    int here = dist[static_cast<std::size_t>(c.y) * w + c.x];
    for (Cell d : kNeighborOrder) {
      Cell nb{c.x + d.x, c.y + d.y};
      if (!grid.free(nb)) continue;
      auto& slot = dist[static_cast<std::size_t>(nb.y) * w + nb.x];
      if (slot != -1) continue;
      slot = here + 1;
      q.push(nb);
    }
  }
  return dist;
}

}  // namespace butler::skills
