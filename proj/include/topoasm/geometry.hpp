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

#include <compare>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace topoasm {

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integer lattice coordinate. One unit is one plumbing piece on every axis;
/// t is the time axis, x and y span the hardware plane.
struct Point3 {
  int t = 0;
  int x = 0;
  int y = 0;

  constexpr int &operator[](int axis) { return axis == 0 ? t : (axis == 1 ? x : y); }
  constexpr int operator[](int axis) const { return axis == 0 ? t : (axis == 1 ? x : y); }

  auto operator<=>(const Point3 &) const = default;
};

constexpr Point3 operator+(Point3 a, Point3 b) { return {a.t + b.t, a.x + b.x, a.y + b.y}; }
constexpr Point3 operator-(Point3 a, Point3 b) { return {a.t - b.t, a.x - b.x, a.y - b.y}; }

inline int manhattan(Point3 a, Point3 b) {
  auto d = [](int v) { return v < 0 ? -v : v; };
  return d(a.t - b.t) + d(a.x - b.x) + d(a.y - b.y);
}

std::string to_string(Point3 p);

struct Point3Hash {
  std::size_t operator()(Point3 p) const noexcept {
    std::uint64_t h = static_cast<std::uint32_t>(p.t);
    h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(p.x);
    h = h * 0x9E3779B97F4A7C15ull ^ static_cast<std::uint32_t>(p.y);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

/// Axis-aligned box with inclusive lower and exclusive upper corner. Two boxes
/// that only share a face do not overlap.
struct Box3 {
  Point3 lo;
  Point3 hi;

  static Box3 cell(Point3 p) { return {p, p + Point3{1, 1, 1}}; }
  static Box3 from_extents(Point3 lo, Point3 extents) { return {lo, lo + extents}; }

  Point3 extents() const { return hi - lo; }
  bool valid() const { return lo.t < hi.t && lo.x < hi.x && lo.y < hi.y; }

  bool contains(Point3 p) const {
    return lo.t <= p.t && p.t < hi.t && lo.x <= p.x && p.x < hi.x && lo.y <= p.y && p.y < hi.y;
  }
  bool overlaps(const Box3 &o) const {
    return lo.t < o.hi.t && o.lo.t < hi.t && lo.x < o.hi.x && o.lo.x < hi.x &&
           lo.y < o.hi.y && o.lo.y < hi.y;
  }
  Box3 hull(const Box3 &o) const;
  Box3 expanded(int margin) const {
    return {lo - Point3{margin, margin, margin}, hi + Point3{margin, margin, margin}};
  }
  Box3 translated(Point3 d) const { return {lo + d, hi + d}; }

  bool operator==(const Box3 &) const = default;
};

/// Throws GeometryError unless lo < hi componentwise.
Box3 make_box(Point3 lo, Point3 hi);

std::string to_string(const Box3 &b);

enum class DefectKind { primal, dual };
enum class DefectRole { circuit, connection_b, connection_e, connection_c };

const char *to_string(DefectKind k);
const char *to_string(DefectRole r);

/// Straight run of lattice cells from a to b, both inclusive.
struct Segment {
  Point3 a;
  Point3 b;
  bool operator==(const Segment &) const = default;
};

/// Number of axes along which the endpoints differ.
int varying_axes(const Segment &s);
Box3 hull(const Segment &s);
void for_each_cell(const Segment &s, const std::function<void(Point3)> &fn);

struct DefectPolyline {
  DefectKind kind = DefectKind::primal;
  DefectRole role = DefectRole::circuit;
  /// Groups polylines belonging to one element (wire lifetime, braid, connection).
  int element = 0;
  std::vector<Segment> segments;

  bool operator==(const DefectPolyline &) const = default;
};

/// Axis-aligned, connected, and free of zero-length segments.
bool is_well_formed(const DefectPolyline &p);

/// Collapses a path of unit steps into maximal straight segments.
std::vector<Segment> segments_from_cells(std::span<const Point3> cells);

/// Every lattice cell of the polyline, joints counted once.
std::vector<Point3> cells_of(const DefectPolyline &p);

enum class BoxType { A, Y };
const char *to_string(BoxType t);

struct PlacedBox {
  int id = 0;
  BoxType type = BoxType::A;
  Box3 footprint;
  Point3 port;
  bool operator==(const PlacedBox &) const = default;
};

struct Pin {
  int input = 0;
  Point3 at;
  bool operator==(const Pin &) const = default;
};

struct GeometrySet {
  std::vector<DefectPolyline> defects;
  std::vector<PlacedBox> boxes;
  std::vector<Pin> pins;

  bool empty() const { return defects.empty() && boxes.empty(); }
  void append(const GeometrySet &other);
};

/// Minimal box containing every defect segment and box footprint.
Box3 global_bounding_box(const GeometrySet &g);

/// Product of the three extents.
std::int64_t plumbing_volume(const Box3 &b);

}  // namespace topoasm
