// Copyright 2026 The topoasm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "topoasm/route.hpp"

#include <algorithm>
#include <numeric>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace topoasm {

const char *to_string(ObstacleKind k) { return k == ObstacleKind::guide ? "guide" : "occupy"; }

const char *to_string(SegmentClass c) {
  switch (c) {
    case SegmentClass::kappa_b: return "kappa_b";
    case SegmentClass::kappa_e: return "kappa_e";
    case SegmentClass::kappa_c: return "kappa_c";
  }
  return "?";
}

EntryId World::insert_solid(const Box3 &box, ElementTag tag, int owner) {
  EntryId id = next_entry_++;
  solids_.insert({id, box, tag, owner});
  return id;
}

ObstacleId World::add_obstacle(const Obstacle &o) {
  ObstacleId id = next_obstacle_++;
  obstacle_index_.insert({id, o.region, ElementTag::obstacle, o.owner});
  obstacles_.emplace(id, o);
  return id;
}

void World::remove_obstacle(ObstacleId id) {
  if (obstacles_.erase(id) == 0) throw IndexError("unknown obstacle " + std::to_string(id));
  obstacle_index_.remove(id);
}

void World::set_enabled(ObstacleId id, bool enabled) { obstacles_.at(id).enabled = enabled; }

std::optional<ObstacleId> World::governing_obstacle(Point3 cell) const {
  std::optional<ObstacleId> best;
  auto rank = [&](ObstacleId id) {
    const Obstacle &o = obstacles_.at(id);
    return std::tuple{o.kind == ObstacleKind::guide ? 0 : 1, o.priority, id};
  };
  for (EntryId id : obstacle_index_.hits(Box3::cell(cell))) {
    auto oid = static_cast<ObstacleId>(id);
    if (!best || rank(oid) < rank(*best)) best = oid;
  }
  return best;
}

bool World::is_blocked(Point3 cell, const SegmentSpec &active) const {
  bool endpoint = cell == active.start || cell == active.stop;
  for (const IndexEntry *e : solids_.hit_entries(Box3::cell(cell))) {
    bool exempt = endpoint && (e->tag == ElementTag::pin || e->tag == ElementTag::port ||
                               (e->owner >= 0 && e->owner == active.owner));
    if (!exempt) return true;
  }
  if (endpoint) return false;
  auto gov = governing_obstacle(cell);
  return gov && obstacles_.at(*gov).enabled;
}

void World::commit(const Path &path, int owner, Journal *journal) {
  std::ostringstream cells;
  int claimed = 0;
  for (Point3 c : path.cells) {
    bool held = false;
    for (const IndexEntry *e : solids_.hit_entries(Box3::cell(c))) {
      held = held || (e->tag == ElementTag::connection && e->owner == owner);
    }
    if (held) continue;
    insert_solid(Box3::cell(c), ElementTag::connection, owner);
    cells << ' ' << c.t << ':' << c.x << ':' << c.y;
    ++claimed;
  }
  if (journal) journal->record("claim", std::to_string(owner) + " " + std::to_string(claimed) + cells.str());
}

std::optional<Box3> World::bounds() const {
  auto a = solids_.bounds();
  auto b = obstacle_index_.bounds();
  if (a && b) return a->hull(*b);
  return a ? a : b;
}

std::function<bool(Point3)> blocked_set(const World &world, const SegmentSpec &active) {
  return [&world, active](Point3 p) { return world.is_blocked(p, active); };
}

Path plan_segment(const SegmentSpec &spec, const World &world, std::optional<Box3> bounds) {
  if (spec.start == spec.stop) throw std::invalid_argument("segment start equals stop");
  Box3 area = Box3::cell(spec.start).hull(Box3::cell(spec.stop));
  if (bounds) {
    area = *bounds;
  } else if (auto wb = world.bounds()) {
    area = area.hull(*wb).expanded(4);
  } else {
    area = area.expanded(4);
  }
  if (!area.contains(spec.start) || !area.contains(spec.stop)) {
    throw NoPathError(spec, "segment endpoint outside search bounds");
  }
  if (world.is_blocked(spec.start, spec) || world.is_blocked(spec.stop, spec)) {
    throw NoPathError(spec, "segment endpoint blocked " + to_string(spec.start) + "->" + to_string(spec.stop));
  }

  // Open list ordered by (f, h, cell); the min element is expanded first.
  using Key = std::tuple<int, int, Point3>;
  std::priority_queue<Key, std::vector<Key>, std::greater<>> open;
  std::unordered_map<Point3, int, Point3Hash> g;
  std::unordered_map<Point3, Point3, Point3Hash> parent;
  std::unordered_map<Point3, bool, Point3Hash> blocked_cache;
  std::unordered_map<Point3, bool, Point3Hash> closed;

  auto blocked = [&](Point3 p) {
    auto [it, fresh] = blocked_cache.try_emplace(p, false);
    if (fresh) it->second = world.is_blocked(p, spec);
    return it->second;
  };

  static constexpr Point3 kSteps[6] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  int h0 = manhattan(spec.start, spec.stop);
  g[spec.start] = 0;
  open.emplace(h0, h0, spec.start);
  while (!open.empty()) {
    auto [f, h, cur] = open.top();
    open.pop();
    if (closed[cur]) continue;
    closed[cur] = true;
    if (cur == spec.stop) {
      Path path;
      for (Point3 p = cur;; p = parent.at(p)) {
        path.cells.push_back(p);
        if (p == spec.start) break;
      }
      std::reverse(path.cells.begin(), path.cells.end());
      return path;
    }
    int gc = g.at(cur);
    for (Point3 step : kSteps) {
      Point3 nb = cur + step;
      if (!area.contains(nb) || closed[nb] || blocked(nb)) continue;
      auto it = g.find(nb);
      if (it != g.end() && it->second <= gc + 1) continue;
      g[nb] = gc + 1;
      parent[nb] = cur;
      int hn = manhattan(nb, spec.stop);
      open.emplace(gc + 1 + hn, hn, nb);
    }
  }
  throw NoPathError(spec, "no path " + to_string(spec.start) + "->" + to_string(spec.stop) + " (" +
                              to_string(spec.segment_class) + ", owner " + std::to_string(spec.owner) + ")");
}

std::vector<Path> compute_taskset(const TaskSet &tasks, World &world, Journal *journal,
                                  std::optional<Box3> bounds) {
  std::vector<std::size_t> order(tasks.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return tasks[a].priority > tasks[b].priority; });
  for (std::size_t i = 1; i < order.size(); ++i) {
    if (tasks[order[i]].priority == tasks[order[i - 1]].priority) {
      throw std::invalid_argument("task set priorities must be distinct");
    }
  }

  std::vector<Path> paths(tasks.size());
  std::vector<Path> done;
  for (std::size_t idx : order) {
    const SegmentSpec &spec = tasks[idx];
    for (ObstacleId o : spec.obstacles) {
      world.set_enabled(o, false);
      if (journal) journal->record("disable", std::to_string(o));
    }
    try {
      paths[idx] = plan_segment(spec, world, bounds);
    } catch (const NoPathError &e) {
      if (journal) journal->record("nopath", std::to_string(spec.owner) + " " + to_string(spec.segment_class) +
                                                 " " + to_string(spec.start) + " " + to_string(spec.stop));
      throw TaskSetFailure(spec, done, e.what());
    }
    world.commit(paths[idx], spec.owner, journal);
    for (ObstacleId o : spec.obstacles) {
      if (world.obstacle(o).kind == ObstacleKind::guide) {
        world.set_enabled(o, true);
        if (journal) journal->record("enable", std::to_string(o));
      }
    }
    done.push_back(paths[idx]);
  }
  return paths;
}

}  // namespace topoasm
