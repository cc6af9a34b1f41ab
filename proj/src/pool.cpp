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

#include "topoasm/pool.hpp"

#include <algorithm>
#include <string>

namespace topoasm {

const char *to_string(ConnState s) {
  switch (s) {
    case ConnState::available: return "available";
    case ConnState::reserved: return "reserved";
    case ConnState::assigned: return "assigned";
    case ConnState::tobeavailable: return "tobeavailable";
  }
  return "?";
}

bool legal_transition(ConnState from, ConnState to) {
  return (from == ConnState::available && to == ConnState::reserved) ||
         (from == ConnState::reserved && to == ConnState::assigned) ||
         (from == ConnState::assigned && to == ConnState::tobeavailable) ||
         (from == ConnState::tobeavailable && to == ConnState::available);
}

std::optional<int> Rail::max_t() const {
  if (occupancy.empty()) return std::nullopt;
  return occupancy.back().hi;
}

ConnectionPool::ConnectionPool(PoolConfig config, const LayoutConfig &layout)
    : config_(config), plane_y_(layout.circuit_height + config.pool_gap) {
  if (config_.pool_gap < 1) throw std::invalid_argument("pool_gap must be >= 1");
  if (config_.cap_per_type < 1) throw std::invalid_argument("cap_per_type must be >= 1");
  if (config_.rail_pitch < 1) throw std::invalid_argument("rail_pitch must be >= 1");
}

void ConnectionPool::set_state(Connection &c, ConnState to) {
  if (!legal_transition(c.state, to)) {
    throw IllegalTransition("connection " + std::to_string(c.id) + ": " + to_string(c.state) + " -> " +
                            to_string(to));
  }
  transitions_.push_back({c.id, c.state, to});
  c.state = to;
}

std::vector<int> ConnectionPool::reserve_connections(std::span<const Success> successes, int arrival,
                                                     const std::function<bool(const Rail &)> &rail_ok) {
  std::vector<int> out;
  for (const Success &s : successes) {
    ++offered_[idx(s.type)];
    if (reserved_count(s.type) >= config_.cap_per_type) continue;

    auto it = std::find_if(conns_.begin(), conns_.end(), [&](const Connection &c) {
      auto top = rails_[c.id].max_t();
      return c.state == ConnState::available && (!top || *top < arrival) && (!rail_ok || rail_ok(rails_[c.id]));
    });
    if (it == conns_.end()) {
      int id = static_cast<int>(conns_.size());
      rails_.push_back({id, id * config_.rail_pitch, plane_y_, {}});
      conns_.push_back({});
      conns_.back().id = id;
      it = conns_.end() - 1;
    }
    Connection &c = *it;
    set_state(c, ConnState::reserved);
    c.type = s.type;
    c.lease = next_lease_++;
    c.source_box = s.box;
    c.port = s.port;
    c.head_t = arrival;
    c.input = -1;
    rails_[c.id].occupancy.push_back({arrival, arrival, c.lease});
    ++reserved_in_[idx(s.type)];
    out.push_back(c.id);
  }
  return out;
}

std::optional<int> ConnectionPool::assign_to_input(int input, BoxType t) {
  for (Connection &c : conns_) {
    if (c.state == ConnState::reserved && c.type == t) {
      set_state(c, ConnState::assigned);
      c.input = input;
      ++assigned_out_[idx(t)];
      return c.id;
    }
  }
  return std::nullopt;
}

void ConnectionPool::mark_tobeavailable(int id) { set_state(conns_.at(id), ConnState::tobeavailable); }

void ConnectionPool::note_rail_use(int id, int t) {
  Connection &c = conns_.at(id);
  if (c.state == ConnState::available) throw std::logic_error("available connections hold no rail");
  RailInterval &iv = rails_[c.id].occupancy.back();
  iv.hi = std::max(iv.hi, t);
}

std::vector<SegmentSpec> ConnectionPool::extension_specs(int now) const {
  std::vector<SegmentSpec> out;
  for (const Connection &c : conns_) {
    if (c.state != ConnState::reserved || c.head_t >= now) continue;
    SegmentSpec s;
    s.start = rails_[c.id].cell(c.head_t);
    s.stop = rails_[c.id].cell(now);
    s.segment_class = SegmentClass::kappa_e;
    s.owner = c.lease;
    out.push_back(s);
  }
  return out;
}

void ConnectionPool::extend(int id, int now) {
  Connection &c = conns_.at(id);
  if (c.state != ConnState::reserved) throw std::logic_error("only reserved connections extend");
  if (now < c.head_t) throw std::invalid_argument("rail extension going back in time");
  c.head_t = now;
  rails_[c.id].occupancy.back().hi = now;
}

std::vector<int> ConnectionPool::sweep(int now) {
  std::vector<int> out;
  for (Connection &c : conns_) {
    if (c.state != ConnState::tobeavailable) continue;
    auto top = rails_[c.id].max_t();
    if (top && *top >= now) continue;
    set_state(c, ConnState::available);
    c.type.reset();
    c.source_box = -1;
    c.input = -1;
    c.kappa_b.clear();
    c.kappa_e.clear();
    c.kappa_c.clear();
    out.push_back(c.id);
  }
  return out;
}

std::vector<SegmentSpec> ConnectionPool::extend_and_sweep(int now) {
  auto specs = extension_specs(now);
  for (const Connection &c : conns_) {
    if (c.state == ConnState::reserved && c.head_t < now) extend(c.id, now);
  }
  sweep(now);
  return specs;
}

int ConnectionPool::reserved_count(BoxType t) const {
  return static_cast<int>(std::count_if(conns_.begin(), conns_.end(), [&](const Connection &c) {
    return c.state == ConnState::reserved && c.type == t;
  }));
}

int ConnectionPool::rail_high_water() const { return rails_.empty() ? -1 : rails_.back().x; }

}  // namespace topoasm
