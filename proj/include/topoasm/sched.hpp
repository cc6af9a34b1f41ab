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

#include <stdexcept>
#include <string>
#include <vector>

#include "topoasm/circuit_geometry.hpp"
#include "topoasm/geometry.hpp"
#include "topoasm/spatial_index.hpp"

namespace topoasm {

class PlacementFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SchedulerKind { spiral, asap, alap };
const char *to_string(SchedulerKind k);
SchedulerKind parse_scheduler_kind(const std::string &s);

enum class ConditionKind { back_to_back, temporal, pool_threshold };

/// When a proactive round fires, besides a pool that cannot serve the
/// current event.
struct SchedulingCondition {
  ConditionKind kind = ConditionKind::back_to_back;
  /// Timesteps between rounds for `temporal`.
  int period = 24;
  /// For `pool_threshold`: fire when a type has fewer reserved connections.
  int threshold = 2;
};

struct SchedulerPolicy {
  SchedulerKind kind = SchedulerKind::spiral;
  SchedulingCondition condition;
  double confidence = 0.999;
  double p_fail = 0.5;
  /// Only non-delaying schedulers exist, so this stays 0.
  int delay = 0;

  void validate() const;
};

/// P[Binomial(n, p_success) >= k], summed exactly in long double.
long double binomial_tail_at_least(int n, int k, double p_success);

/// Smallest n with P[Binomial(n, 1 - p_fail) >= k] >= confidence.
int required_round_size(int k_needed, double p_fail, double confidence);

struct DistillationLayer {
  int round = 0;
  /// Geometric time at which every box of the layer has finished.
  int trigger_time = 0;
  std::vector<PlacedBox> boxes;
  /// Lower corner of each box, in placement order.
  std::vector<Point3> schedule;

  Box3 hull() const;
};

/// Output port of a box: the cell right after the centre of its +t face.
Point3 box_port(const Box3 &footprint);

/// Footprint plus port, the space a box needs free.
std::vector<Box3> box_claim(const PlacedBox &b);

/// Rectangular counter-clockwise spiral of slots around `channel` in the
/// (x, y) plane; t of `channel` is ignored. Slot i never changes for a
/// fixed channel and pitch.
class SpiralSlots {
 public:
  SpiralSlots(const Box3 &channel, int pitch_x, int pitch_y);
  /// Lower (x, y) corner of slot i, or false beyond `max_rings` rings.
  bool slot(int i, int max_rings, int &x, int &y) const;

 private:
  int ox_, oy_, nx_, ny_, px_, py_;
};

/// A boxes first, then Y boxes, each in the first free spiral slot after
/// the previous box. All boxes end at t = trigger_time. Box ids start at
/// `first_id`. Throws PlacementFailure past `max_rings`.
DistillationLayer place_spiral_layer(int n_a, int n_y, int trigger_time, const SpatialIndex &world,
                                     const LayoutConfig &layout, const Box3 &channel, int round, int first_id,
                                     int max_rings = 64);

/// Baseline packer: rows of `columns` slots starting at x = x0, stacked
/// upward in y from y0 in the slab ending at trigger_time. Occupied slots
/// are skipped.
DistillationLayer place_grid_layer(int n_a, int n_y, int trigger_time, const SpatialIndex &world,
                                   const LayoutConfig &layout, int x0, int y0, int columns, int round, int first_id,
                                   int max_rows = 4096);

/// Column count used by both baselines: as many slots as fit over the
/// circuit width, at least one.
int baseline_columns(int circuit_width, const LayoutConfig &layout);

/// Box demand of one baseline layer, due at geometric time `time`.
struct LayerDemand {
  int time = 0;
  int n_a = 0;
  int n_y = 0;
};

/// Offline form of the baselines against a frozen world. ASAP puts every
/// demand into one layer ending at `circuit_start`; ALAP gives each demand
/// its own layer ending at its time. Layers share the column grid at
/// (x0, y0).
std::vector<DistillationLayer> place_baseline_layer(SchedulerKind kind, const std::vector<LayerDemand> &demand,
                                                    const SpatialIndex &world, const LayoutConfig &layout,
                                                    int circuit_start, int x0, int y0, int columns);

}  // namespace topoasm
