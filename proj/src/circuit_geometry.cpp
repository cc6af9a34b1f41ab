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

#include "topoasm/circuit_geometry.hpp"

#include <algorithm>

namespace topoasm {

Point3 pin_position(const MagicInput &in, const LayoutConfig &layout) {
  return {layout.geometric_time(in.timestep), layout.wire_x(in.wire), 0};
}

CircuitGeometry::CircuitGeometry(const IcmCircuit &circuit, LayoutConfig layout)
    : circuit_(&circuit), layout_(layout), lifetimes_(circuit.lifetimes()) {
  if (layout_.time_pitch < 3) throw GeometryError("time pitch must be at least 3");
  for (const auto &op : circuit.ops()) {
    if (op.kind == OpKind::cnot) braids_.push_back({op.timestep, op.wire, op.target});
  }
  // Templates of CNOTs sharing a timestep collide when their row spans meet.
  for (std::size_t i = 0; i < braids_.size(); ++i) {
    Box3 bi = hull(braid_polyline(i).segments[0]);
    for (std::size_t j = i + 1; j < braids_.size() && braids_[j].timestep == braids_[i].timestep; ++j) {
      if (bi.overlaps(hull(braid_polyline(j).segments[0]))) {
        throw GeometryError("braid template collision at timestep " + std::to_string(braids_[i].timestep) +
                            "; increase the row pitch or serialise the CNOTs");
      }
    }
  }
}

int CircuitGeometry::wire_first_cell(const Lifetime &lt) const {
  return layout_.geometric_time(lt.init_time) + 1;
}

int CircuitGeometry::wire_end_cell(const Lifetime &lt, int horizon) const {
  int last = std::min(lt.end_time, horizon);
  return layout_.geometric_time(last) + layout_.time_pitch - 1;
}

DefectPolyline CircuitGeometry::braid_polyline(std::size_t i) const {
  const Braid &b = braids_[i];
  int t = layout_.geometric_time(b.timestep);
  int xc = layout_.wire_x(b.control);
  int xt = layout_.wire_x(b.target);
  DefectPolyline p;
  p.kind = DefectKind::dual;
  p.role = DefectRole::circuit;
  p.element = braid_element_base() + static_cast<int>(i);
  p.segments = {{{t, xc, 1}, {t, xt, 1}}, {{t, xt, 1}, {t + 1, xt, 1}}, {{t + 1, xt, 1}, {t + 1, xc, 1}}};
  return p;
}

GeometrySet CircuitGeometry::until(int horizon) const {
  GeometrySet g;
  for (std::size_t i = 0; i < lifetimes_.size(); ++i) {
    const auto &lt = lifetimes_[i];
    if (lt.init_time > horizon) continue;
    int x = layout_.wire_x(lt.wire);
    DefectPolyline p;
    p.element = static_cast<int>(i);
    p.segments.push_back({{wire_first_cell(lt), x, 0}, {wire_end_cell(lt, horizon), x, 0}});
    g.defects.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < braids_.size(); ++i) {
    if (braids_[i].timestep <= horizon) g.defects.push_back(braid_polyline(i));
  }
  const auto &mi = circuit_->magic_inputs();
  for (std::size_t i = 0; i < mi.size(); ++i) {
    if (mi[i].timestep <= horizon) g.pins.push_back({static_cast<int>(i), pin_position(mi[i], layout_)});
  }
  return g;
}

GeometrySet CircuitGeometry::advance(int horizon) {
  if (horizon < emitted_) throw GeometryError("geometry horizon moved backwards");
  GeometrySet g;
  int prev = emitted_;
  for (std::size_t i = 0; i < lifetimes_.size(); ++i) {
    const auto &lt = lifetimes_[i];
    if (lt.init_time > horizon) continue;
    int x = layout_.wire_x(lt.wire);
    int end = wire_end_cell(lt, horizon);
    int start = wire_first_cell(lt);
    if (lt.init_time <= prev) {
      int old_end = wire_end_cell(lt, prev);
      if (old_end >= end) continue;
      start = old_end;
    }
    DefectPolyline p;
    p.element = static_cast<int>(i);
    p.segments.push_back({{start, x, 0}, {end, x, 0}});
    g.defects.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < braids_.size(); ++i) {
    if (braids_[i].timestep > prev && braids_[i].timestep <= horizon) g.defects.push_back(braid_polyline(i));
  }
  const auto &mi = circuit_->magic_inputs();
  for (std::size_t i = 0; i < mi.size(); ++i) {
    if (mi[i].timestep > prev && mi[i].timestep <= horizon) {
      g.pins.push_back({static_cast<int>(i), pin_position(mi[i], layout_)});
    }
  }
  emitted_ = horizon;
  return g;
}

std::vector<Box3> CircuitGeometry::solid_boxes() const {
  std::vector<Box3> out;
  GeometrySet all = until(circuit_->last_timestep());
  for (const auto &d : all.defects) {
    if (d.kind == DefectKind::primal) {
      out.push_back(hull(d.segments[0]));
    } else {
      // The braid template is two full rows at t and t+1.
      out.push_back(hull(d.segments[0]).hull(hull(d.segments[2])));
    }
  }
  return out;
}

std::vector<Pin> CircuitGeometry::all_pins() const { return until(circuit_->last_timestep()).pins; }

GeometrySet emit_geometry_until(const IcmCircuit &circuit, int horizon, const LayoutConfig &layout) {
  return CircuitGeometry(circuit, layout).until(horizon);
}

}  // namespace topoasm
