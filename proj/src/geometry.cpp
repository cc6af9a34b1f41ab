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

#include "topoasm/geometry.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace topoasm {

std::string to_string(Point3 p) {
  std::ostringstream os;
  os << '(' << p.t << ',' << p.x << ',' << p.y << ')';
  return os.str();
}

Box3 Box3::hull(const Box3 &o) const {
  return {{std::min(lo.t, o.lo.t), std::min(lo.x, o.lo.x), std::min(lo.y, o.lo.y)},
          {std::max(hi.t, o.hi.t), std::max(hi.x, o.hi.x), std::max(hi.y, o.hi.y)}};
}

Box3 make_box(Point3 lo, Point3 hi) {
  Box3 b{lo, hi};
  if (!b.valid()) {
    throw GeometryError("degenerate box " + to_string(b));
  }
  return b;
}

std::string to_string(const Box3 &b) { return "[" + to_string(b.lo) + "," + to_string(b.hi) + ")"; }

const char *to_string(DefectKind k) { return k == DefectKind::primal ? "primal" : "dual"; }

const char *to_string(DefectRole r) {
  switch (r) {
    case DefectRole::circuit: return "circuit";
    case DefectRole::connection_b: return "connection_b";
    case DefectRole::connection_e: return "connection_e";
    case DefectRole::connection_c: return "connection_c";
  }
  return "?";
}

const char *to_string(BoxType t) { return t == BoxType::A ? "A" : "Y"; }

int varying_axes(const Segment &s) {
  int n = 0;
  for (int axis = 0; axis < 3; ++axis) n += s.a[axis] != s.b[axis];
  return n;
}

Box3 hull(const Segment &s) {
  Point3 lo{std::min(s.a.t, s.b.t), std::min(s.a.x, s.b.x), std::min(s.a.y, s.b.y)};
  Point3 hi{std::max(s.a.t, s.b.t), std::max(s.a.x, s.b.x), std::max(s.a.y, s.b.y)};
  return {lo, hi + Point3{1, 1, 1}};
}

void for_each_cell(const Segment &s, const std::function<void(Point3)> &fn) {
  Point3 step{(s.b.t > s.a.t) - (s.b.t < s.a.t), (s.b.x > s.a.x) - (s.b.x < s.a.x),
              (s.b.y > s.a.y) - (s.b.y < s.a.y)};
  Point3 p = s.a;
  fn(p);
  while (p != s.b) {
    p = p + step;
    fn(p);
  }
}

bool is_well_formed(const DefectPolyline &p) {
  if (p.segments.empty()) return false;
  for (std::size_t i = 0; i < p.segments.size(); ++i) {
    if (varying_axes(p.segments[i]) != 1) return false;
    if (i > 0 && p.segments[i - 1].b != p.segments[i].a) return false;
  }
  return true;
}

std::vector<Segment> segments_from_cells(std::span<const Point3> cells) {
  std::vector<Segment> out;
  if (cells.size() < 2) return out;
  Point3 start = cells[0];
  Point3 dir = cells[1] - cells[0];
  for (std::size_t i = 1; i < cells.size(); ++i) {
    Point3 d = cells[i] - cells[i - 1];
    if (d != dir) {
      out.push_back({start, cells[i - 1]});
      start = cells[i - 1];
      dir = d;
    }
  }
  out.push_back({start, cells.back()});
  return out;
}

std::vector<Point3> cells_of(const DefectPolyline &p) {
  std::vector<Point3> out;
  for (std::size_t i = 0; i < p.segments.size(); ++i) {
    bool skip_first = i > 0;
    for_each_cell(p.segments[i], [&](Point3 c) {
      if (skip_first) {
        skip_first = false;
        return;
      }
      out.push_back(c);
    });
  }
  return out;
}

void GeometrySet::append(const GeometrySet &other) {
  defects.insert(defects.end(), other.defects.begin(), other.defects.end());
  boxes.insert(boxes.end(), other.boxes.begin(), other.boxes.end());
  pins.insert(pins.end(), other.pins.begin(), other.pins.end());
}

Box3 global_bounding_box(const GeometrySet &g) {
  std::optional<Box3> acc;
  auto add = [&](const Box3 &b) { acc = acc ? acc->hull(b) : b; };
  for (const auto &d : g.defects)
    for (const auto &s : d.segments) add(hull(s));
  for (const auto &b : g.boxes) add(b.footprint);
  if (!acc) throw GeometryError("bounding box of an empty geometry set");
  return *acc;
}

std::int64_t plumbing_volume(const Box3 &b) {
  Point3 e = b.extents();
  return static_cast<std::int64_t>(e.t) * e.x * e.y;
}

}  // namespace topoasm
