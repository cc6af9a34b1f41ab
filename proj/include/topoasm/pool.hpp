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

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "topoasm/circuit_geometry.hpp"
#include "topoasm/geometry.hpp"
#include "topoasm/route.hpp"

namespace topoasm {

enum class ConnState { available, reserved, assigned, tobeavailable };
const char *to_string(ConnState s);

/// True for the four edges of the connection life cycle.
bool legal_transition(ConnState from, ConnState to);

class IllegalTransition : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct PoolConfig {
  /// Distance in y between the top of the circuit and the rail plane.
  int pool_gap = 2;
  int rail_pitch = 2;
  /// Maximum reserved connections of each type.
  int cap_per_type = 10;
};

/// Closed t-interval of rail cells claimed by one lease.
struct RailInterval {
  int lo = 0;
  int hi = 0;
  int lease = 0;
};

struct Rail {
  int index = 0;
  int x = 0;
  int y = 0;
  std::vector<RailInterval> occupancy;

  /// Highest occupied t, or nullopt for an untouched rail.
  std::optional<int> max_t() const;
  Point3 cell(int t) const { return {t, x, y}; }
};

struct Connection {
  /// Equal to the index of the rail it runs on.
  int id = 0;
  ConnState state = ConnState::available;
  std::optional<BoxType> type;
  /// Owner id for world geometry; fresh for every reservation.
  int lease = -1;
  int source_box = -1;
  Point3 port;
  /// Last rail cell reached so far.
  int head_t = 0;
  int input = -1;
  std::vector<Path> kappa_b;
  std::vector<Path> kappa_e;
  std::vector<Path> kappa_c;
};

struct Success {
  int box = 0;
  BoxType type = BoxType::A;
  Point3 port;
};

struct Transition {
  int connection;
  ConnState from;
  ConnState to;
};

class ConnectionPool {
 public:
  ConnectionPool(PoolConfig config, const LayoutConfig &layout);

  const PoolConfig &config() const { return config_; }
  int plane_y() const { return plane_y_; }

  /// Binds successes to the lowest free rails at rail-entry time `arrival`.
  /// Successes beyond the per-type cap are discarded. Returns the ids of
  /// the reserved connections. `rail_ok` can veto an existing free rail.
  std::vector<int> reserve_connections(std::span<const Success> successes, int arrival,
                                       const std::function<bool(const Rail &)> &rail_ok = {});

  /// Lowest-rail reserved connection of type `t`, moved to assigned, or
  /// nullopt when none is reserved.
  std::optional<int> assign_to_input(int input, BoxType t);

  void mark_tobeavailable(int id);

  /// Records that the connection's routed geometry covers its rail at `t`.
  void note_rail_use(int id, int t);

  /// Rail extension requests: one kappa_e spec per reserved connection whose
  /// head lies before `now`. Priority and obstacles are left to the caller.
  std::vector<SegmentSpec> extension_specs(int now) const;
  /// Moves a connection head to `now`, growing its rail interval.
  void extend(int id, int now);

  /// tobeavailable connections whose rail has nothing at t >= now become
  /// available again. Returns the released ids.
  std::vector<int> sweep(int now);

  /// extension_specs + extend + sweep, for callers without routing.
  std::vector<SegmentSpec> extend_and_sweep(int now);

  int reserved_count(BoxType t) const;
  int offered(BoxType t) const { return offered_[idx(t)]; }
  int reserved_in(BoxType t) const { return reserved_in_[idx(t)]; }
  int assigned_out(BoxType t) const { return assigned_out_[idx(t)]; }
  int discarded(BoxType t) const { return offered_[idx(t)] - reserved_in_[idx(t)]; }

  const std::vector<Connection> &connections() const { return conns_; }
  Connection &connection(int id) { return conns_.at(id); }
  const Connection &connection(int id) const { return conns_.at(id); }
  const std::vector<Rail> &rails() const { return rails_; }
  const Rail &rail(int id) const { return rails_.at(id); }
  const std::vector<Transition> &transitions() const { return transitions_; }

  /// Largest rail x used so far, or -1.
  int rail_high_water() const;

  /// First lease number handed out; leases stay clear of circuit owners.
  static constexpr int kLeaseBase = 1 << 20;

 private:
  static std::size_t idx(BoxType t) { return t == BoxType::A ? 0 : 1; }
  void set_state(Connection &c, ConnState to);

  PoolConfig config_;
  int plane_y_;
  std::vector<Rail> rails_;
  std::vector<Connection> conns_;
  std::vector<Transition> transitions_;
  std::array<int, 2> offered_{};
  std::array<int, 2> reserved_in_{};
  std::array<int, 2> assigned_out_{};
  int next_lease_ = kLeaseBase;
};

}  // namespace topoasm
