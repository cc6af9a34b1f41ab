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

#include <vector>

#include "topoasm/geometry.hpp"
#include "topoasm/icm.hpp"

namespace topoasm {

/// Lattice pitches and box footprints. Extents are given as (t, x, y).
struct LayoutConfig {
  /// Geometric t units per logical timestep.
  int time_pitch = 3;
  /// x distance between neighbouring wire rows.
  int row_pitch = 2;
  /// Wires run at y = 0, braid templates at y = 1.
  int circuit_height = 2;
  Point3 a_box_extents{4, 4, 6};
  Point3 y_box_extents{2, 2, 4};
  /// Gap between neighbouring spiral boxes.
  int box_clearance = 1;
  /// Free margin kept around the circuit and pool for routing.
  int channel_margin = 2;

  int wire_x(int wire) const { return wire * row_pitch; }
  int geometric_time(int timestep) const { return timestep * time_pitch; }
  Point3 box_extents(BoxType t) const { return t == BoxType::A ? a_box_extents : y_box_extents; }
};

/// Where the distilled state for a magic input has to arrive.
Point3 pin_position(const MagicInput &in, const LayoutConfig &layout);

/// Incremental geometric description of an ICM circuit: one primal polyline
/// per wire lifetime along +t and one fixed dual braid template per CNOT.
/// Every coordinate is known up front; emission only controls how far in
/// time the description has been released.
class CircuitGeometry {
 public:
  /// Throws GeometryError when two CNOT templates collide.
  CircuitGeometry(const IcmCircuit &circuit, LayoutConfig layout);

  /// Full description up to and including timestep `horizon`.
  GeometrySet until(int horizon) const;

  /// Elements added since the previous call. Horizons must not decrease.
  GeometrySet advance(int horizon);
  int emitted_horizon() const { return emitted_; }

  /// Solid footprint of the complete circuit, as disjoint boxes.
  std::vector<Box3> solid_boxes() const;
  std::vector<Pin> all_pins() const;
  /// Element id of the first braid; wire lifetimes use ids below it.
  int braid_element_base() const { return static_cast<int>(lifetimes_.size()); }

 private:
  struct Braid {
    int timestep;
    int control;
    int target;
  };
  DefectPolyline braid_polyline(std::size_t i) const;
  /// Last geometric t cell of a lifetime released at `horizon`, or lower than
  /// the first cell when nothing is released yet.
  int wire_end_cell(const Lifetime &lt, int horizon) const;
  int wire_first_cell(const Lifetime &lt) const;

  const IcmCircuit *circuit_;
  LayoutConfig layout_;
  std::vector<Lifetime> lifetimes_;
  std::vector<Braid> braids_;
  int emitted_ = -1;
};

/// Stateless form of CircuitGeometry::until.
GeometrySet emit_geometry_until(const IcmCircuit &circuit, int horizon, const LayoutConfig &layout);

}  // namespace topoasm
