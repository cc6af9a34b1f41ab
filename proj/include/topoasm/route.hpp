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

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "topoasm/geometry.hpp"
#include "topoasm/journal.hpp"
#include "topoasm/spatial_index.hpp"

namespace topoasm {

/// A guide stays in force for every later segment once its owner has been
/// routed; an occupy only protects space until its owner has been routed.
enum class ObstacleKind { guide, occupy };
const char *to_string(ObstacleKind k);

using ObstacleId = int;

struct Obstacle {
  Box3 region;
  ObstacleKind kind = ObstacleKind::guide;
  /// Lower numbers win where obstacles intersect.
  int priority = 0;
  int owner = -1;
  bool enabled = true;
};

enum class SegmentClass { kappa_b, kappa_e, kappa_c };
const char *to_string(SegmentClass c);

/// One connection segment to route: endpoints, the obstacles it owns, and
/// its priority (higher is routed earlier).
struct SegmentSpec {
  Point3 start;
  Point3 stop;
  std::vector<ObstacleId> obstacles;
  int priority = 0;
  SegmentClass segment_class = SegmentClass::kappa_c;
  /// Connection the segment belongs to.
  int owner = -1;
};

using TaskSet = std::vector<SegmentSpec>;

struct Path {
  std::vector<Point3> cells;
  int length() const { return cells.empty() ? 0 : static_cast<int>(cells.size()) - 1; }
  bool operator==(const Path &) const = default;
};

class NoPathError : public std::runtime_error {
 public:
  NoPathError(const SegmentSpec &spec, const std::string &what)
      : std::runtime_error(what), spec_(spec) {}
  const SegmentSpec &spec() const { return spec_; }

 private:
  SegmentSpec spec_;
};

/// Solid geometry plus the obstacle registry, as seen by the path finder.
class World {
 public:
  SpatialIndex &solids() { return solids_; }
  const SpatialIndex &solids() const { return solids_; }

  EntryId insert_solid(const Box3 &box, ElementTag tag, int owner = -1);

  ObstacleId add_obstacle(const Obstacle &o);
  void remove_obstacle(ObstacleId id);
  void set_enabled(ObstacleId id, bool enabled);
  const Obstacle &obstacle(ObstacleId id) const { return obstacles_.at(id); }
  const std::map<ObstacleId, Obstacle> &obstacles() const { return obstacles_; }

  /// Obstacle governing a cell among those covering it: guides before
  /// occupies, then ascending priority number, then id.
  std::optional<ObstacleId> governing_obstacle(Point3 cell) const;

  /// Solid geometry blocks every cell except the active segment's own
  /// endpoints when they are pins, ports, or cells of the same connection.
  /// An obstacle-covered cell is blocked iff its governing obstacle is
  /// enabled; endpoints are never obstacle-blocked.
  bool is_blocked(Point3 cell, const SegmentSpec &active) const;

  /// Claims the path's cells for `owner`. Cells the owner already holds
  /// (the joint with its previous segment) are left alone.
  void commit(const Path &path, int owner, Journal *journal = nullptr);

  std::optional<Box3> bounds() const;

 private:
  SpatialIndex solids_;
  SpatialIndex obstacle_index_;
  std::map<ObstacleId, Obstacle> obstacles_;
  EntryId next_entry_ = 1;
  ObstacleId next_obstacle_ = 1;
};

/// Cell predicate for one segment computation.
std::function<bool(Point3)> blocked_set(const World &world, const SegmentSpec &active);

/// Shortest 6-connected path under blocked_set, found by A* with an exact L1
/// heuristic. Ties go to the smaller remaining distance, then the
/// lexicographically smaller (t, x, y) cell. The search is confined to
/// `bounds`, defaulting to the world hull plus a margin. Throws NoPathError.
Path plan_segment(const SegmentSpec &spec, const World &world, std::optional<Box3> bounds = std::nullopt);

class TaskSetFailure : public std::runtime_error {
 public:
  TaskSetFailure(const SegmentSpec &spec, std::vector<Path> done, const std::string &what)
      : std::runtime_error(what), spec_(spec), done_(std::move(done)) {}
  const SegmentSpec &failed() const { return spec_; }
  const std::vector<Path> &completed() const { return done_; }

 private:
  SegmentSpec spec_;
  std::vector<Path> done_;
};

/// Routes specs in descending priority. For each: disable every obstacle it
/// owns, plan, commit, then re-enable its guides only. paths[i] belongs to
/// tasks[i]. Throws std::invalid_argument on repeated
/// priorities and TaskSetFailure when a spec cannot be routed.
std::vector<Path> compute_taskset(const TaskSet &tasks, World &world, Journal *journal = nullptr,
                                  std::optional<Box3> bounds = std::nullopt);

}  // namespace topoasm
