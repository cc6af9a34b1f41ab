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

#include "topoasm/sched.hpp"

#include <algorithm>
#include <cmath>

namespace topoasm {

const char *to_string(SchedulerKind k) {
  switch (k) {
    case SchedulerKind::spiral: return "spiral";
    case SchedulerKind::asap: return "asap";
    case SchedulerKind::alap: return "alap";
  }
  return "?";
}

SchedulerKind parse_scheduler_kind(const std::string &s) {
  if (s == "spiral") return SchedulerKind::spiral;
  if (s == "asap") return SchedulerKind::asap;
  if (s == "alap") return SchedulerKind::alap;
  throw std::invalid_argument("unknown scheduler '" + s + "'");
}

void SchedulerPolicy::validate() const {
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
  if (!(p_fail >= 0.0 && p_fail < 1.0)) throw std::invalid_argument("p_fail must lie in [0, 1)");
  if (delay != 0) throw std::invalid_argument("only non-delaying schedulers are supported");
  if (condition.kind == ConditionKind::temporal && condition.period < 1) {
    throw std::invalid_argument("temporal period must be >= 1");
  }
}

long double binomial_tail_at_least(int n, int k, double p_success) {
  if (k <= 0) return 1.0L;
  if (k > n) return 0.0L;
  long double p = p_success, q = 1.0L - p;
  if (p == 0.0L) return 0.0L;
  if (q == 0.0L) return 1.0L;
  // Sum the lower tail below k; it is the short side for the sizes we use.
  long double below = 0.0L;
  for (int i = 0; i < k; ++i) {
    long double lc = std::lgamma((long double)n + 1) - std::lgamma((long double)i + 1) -
                     std::lgamma((long double)(n - i) + 1);
    below += std::exp(lc + i * std::log(p) + (n - i) * std::log(q));
  }
  return std::clamp(1.0L - below, 0.0L, 1.0L);
}

int required_round_size(int k_needed, double p_fail, double confidence) {
  if (k_needed < 1) throw std::invalid_argument("k_needed must be >= 1");
  if (!(p_fail >= 0.0 && p_fail < 1.0)) throw std::invalid_argument("p_fail must lie in [0, 1)");
  if (!(confidence > 0.0 && confidence < 1.0)) throw std::invalid_argument("confidence must lie in (0, 1)");
  for (int n = k_needed;; ++n) {
    if (binomial_tail_at_least(n, k_needed, 1.0 - p_fail) >= confidence) return n;
    if (n > 1000000) throw std::overflow_error("round size does not converge");
  }
}

Box3 DistillationLayer::hull() const {
  if (boxes.empty()) throw GeometryError("empty layer has no hull");
  Box3 h = boxes.front().footprint;
  for (const auto &b : boxes) h = h.hull(b.footprint).hull(Box3::cell(b.port));
  return h;
}

Point3 box_port(const Box3 &f) {
  Point3 e = f.extents();
  return {f.hi.t, f.lo.x + e.x / 2, f.lo.y + e.y / 2};
}

std::vector<Box3> box_claim(const PlacedBox &b) { return {b.footprint, Box3::cell(b.port)}; }

SpiralSlots::SpiralSlots(const Box3 &channel, int pitch_x, int pitch_y) : px_(pitch_x), py_(pitch_y) {
  int cw = channel.hi.x - channel.lo.x;
  int ch = channel.hi.y - channel.lo.y;
  nx_ = std::max(1, (cw + px_ - 1) / px_);
  ny_ = std::max(1, (ch + py_ - 1) / py_);
  ox_ = channel.lo.x - (nx_ * px_ - cw) / 2;
  oy_ = channel.lo.y - (ny_ * py_ - ch) / 2;
}

bool SpiralSlots::slot(int i, int max_rings, int &x, int &y) const {
  for (int r = 0; r < max_rings; ++r) {
    int w = nx_ + 2 * (r + 1);
    int h = ny_ + 2 * (r + 1);
    int count = 2 * w + 2 * h - 4;
    if (i >= count) {
      i -= count;
      continue;
    }
    int lo_i = -(r + 1), hi_i = nx_ + r, lo_j = -(r + 1), hi_j = ny_ + r;
    int si, sj;
    if (i < w) {
      si = lo_i + i, sj = lo_j;
    } else if ((i -= w) < h - 1) {
      si = hi_i, sj = lo_j + 1 + i;
    } else if ((i -= h - 1) < w - 1) {
      si = hi_i - 1 - i, sj = hi_j;
    } else {
      i -= w - 1;
      si = lo_i, sj = hi_j - 1 - i;
    }
    x = ox_ + si * px_;
    y = oy_ + sj * py_;
    return true;
  }
  return false;
}

namespace {

PlacedBox make_placed(int id, BoxType type, Point3 lo, const LayoutConfig &layout) {
  Box3 f = Box3::from_extents(lo, layout.box_extents(type));
  return {id, type, f, box_port(f)};
}

bool is_free(const PlacedBox &b, const SpatialIndex &world) {
  for (const Box3 &c : box_claim(b)) {
    if (world.any_hit(c)) return false;
  }
  return true;
}

std::vector<BoxType> box_types(int n_a, int n_y) {
  if (n_a < 0 || n_y < 0) throw std::invalid_argument("negative box count");
  std::vector<BoxType> out(n_a, BoxType::A);
  out.insert(out.end(), n_y, BoxType::Y);
  return out;
}

int pitch_x(const LayoutConfig &l) { return std::max(l.a_box_extents.x, l.y_box_extents.x) + l.box_clearance; }
int pitch_y(const LayoutConfig &l) { return std::max(l.a_box_extents.y, l.y_box_extents.y) + l.box_clearance; }

}  // namespace

DistillationLayer place_spiral_layer(int n_a, int n_y, int trigger_time, const SpatialIndex &world,
                                     const LayoutConfig &layout, const Box3 &channel, int round, int first_id,
                                     int max_rings) {
  DistillationLayer layer{round, trigger_time, {}, {}};
  int id = first_id;
  auto clashes = [&](const PlacedBox &b) {
    for (const PlacedBox &o : layer.boxes) {
      for (const Box3 &c : box_claim(b))
        for (const Box3 &d : box_claim(o))
          if (c.overlaps(d)) return true;
    }
    return false;
  };
  // Each type walks its own spiral, stepping by its footprint plus clearance.
  for (auto [type, count] : {std::pair{BoxType::A, n_a}, std::pair{BoxType::Y, n_y}}) {
    if (count < 0) throw std::invalid_argument("negative box count");
    Point3 ext = layout.box_extents(type);
    SpiralSlots slots(channel, ext.x + layout.box_clearance, ext.y + layout.box_clearance);
    int cursor = 0;
    for (int k = 0; k < count; ++k) {
      for (;; ++cursor) {
        int x, y;
        if (!slots.slot(cursor, max_rings, x, y)) {
          throw PlacementFailure("spiral exhausted " + std::to_string(max_rings) + " rings at t=" +
                                 std::to_string(trigger_time));
        }
        PlacedBox b = make_placed(id, type, {trigger_time - ext.t, x, y}, layout);
        if (b.footprint.overlaps(channel) || !is_free(b, world) || clashes(b)) continue;
        layer.boxes.push_back(b);
        layer.schedule.push_back(b.footprint.lo);
        ++cursor;
        ++id;
        break;
      }
    }
  }
  return layer;
}

DistillationLayer place_grid_layer(int n_a, int n_y, int trigger_time, const SpatialIndex &world,
                                   const LayoutConfig &layout, int x0, int y0, int columns, int round, int first_id,
                                   int max_rows) {
  if (columns < 1) throw std::invalid_argument("columns must be >= 1");
  DistillationLayer layer{round, trigger_time, {}, {}};
  int px = pitch_x(layout), py = pitch_y(layout);
  int cursor = 0;
  int id = first_id;
  for (BoxType type : box_types(n_a, n_y)) {
    int depth = layout.box_extents(type).t;
    for (;; ++cursor) {
      if (cursor >= columns * max_rows) throw PlacementFailure("grid packer ran out of rows");
      Point3 lo{trigger_time - depth, x0 + (cursor % columns) * px, y0 + (cursor / columns) * py};
      PlacedBox b = make_placed(id, type, lo, layout);
      if (!is_free(b, world)) continue;
      layer.boxes.push_back(b);
      layer.schedule.push_back(lo);
      ++cursor;
      ++id;
      break;
    }
  }
  return layer;
}

int baseline_columns(int circuit_width, const LayoutConfig &layout) {
  return std::max(1, circuit_width / pitch_x(layout));
}

std::vector<DistillationLayer> place_baseline_layer(SchedulerKind kind, const std::vector<LayerDemand> &demand,
                                                    const SpatialIndex &world, const LayoutConfig &layout,
                                                    int circuit_start, int x0, int y0, int columns) {
  std::vector<DistillationLayer> out;
  if (kind == SchedulerKind::spiral) throw std::invalid_argument("spiral is not a baseline");
  if (kind == SchedulerKind::asap) {
    int na = 0, ny = 0;
    for (const auto &d : demand) na += d.n_a, ny += d.n_y;
    out.push_back(place_grid_layer(na, ny, circuit_start, world, layout, x0, y0, columns, 1, 0));
    return out;
  }
  // Later layers must see the earlier ones.
  SpatialIndex scratch = world;
  EntryId next = static_cast<EntryId>(1) << 40;
  int id = 0;
  for (const auto &d : demand) {
    if (d.n_a + d.n_y == 0) continue;
    out.push_back(place_grid_layer(d.n_a, d.n_y, d.time, scratch, layout, x0, y0, columns,
                                   static_cast<int>(out.size()) + 1, id));
    for (const auto &b : out.back().boxes) {
      for (const Box3 &c : box_claim(b)) scratch.insert({next++, c, ElementTag::box, b.id});
    }
    id += d.n_a + d.n_y;
  }
  return out;
}

}  // namespace topoasm
