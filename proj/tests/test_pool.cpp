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

#include <random>
#include <set>

#include <catch_amalgamated.hpp>

#include "topoasm/pool.hpp"

using namespace topoasm;

namespace {

std::vector<Success> successes(int a, int y) {
  std::vector<Success> out;
  int box = 0;
  for (int i = 0; i < a; ++i) out.push_back({box++, BoxType::A, {0, box, 9}});
  for (int i = 0; i < y; ++i) out.push_back({box++, BoxType::Y, {0, box, 9}});
  return out;
}

}  // namespace

TEST_CASE("state machine edges") {
  using S = ConnState;
  const S all[4] = {S::available, S::reserved, S::assigned, S::tobeavailable};
  int legal = 0;
  for (S a : all)
    for (S b : all) legal += legal_transition(a, b);
  CHECK(legal == 4);
  CHECK(legal_transition(S::tobeavailable, S::available));
  CHECK_FALSE(legal_transition(S::available, S::assigned));
  CHECK_FALSE(legal_transition(S::reserved, S::available));
}

TEST_CASE("rails sit on the pool plane") {
  LayoutConfig l;
  ConnectionPool pool({3, 2, 10}, l);
  CHECK(pool.plane_y() == l.circuit_height + 3);
  auto s = successes(2, 1);
  auto ids = pool.reserve_connections(s, 12);
  CHECK(ids == std::vector<int>{0, 1, 2});
  CHECK(pool.rail(2).x == 4);
  CHECK(pool.rail(2).y == pool.plane_y());
  CHECK(pool.rail_high_water() == 4);
  CHECK(pool.connection(0).lease != pool.connection(1).lease);
  CHECK(pool.connection(0).head_t == 12);
  CHECK_THROWS_AS(ConnectionPool({0, 2, 10}, l), std::invalid_argument);
}

TEST_CASE("cap discards excess by type") {
  ConnectionPool pool({2, 2, 3}, LayoutConfig{});
  auto s = successes(5, 2);
  auto ids = pool.reserve_connections(s, 0);
  CHECK(ids.size() == 5);
  CHECK(pool.reserved_count(BoxType::A) == 3);
  CHECK(pool.reserved_count(BoxType::Y) == 2);
  CHECK(pool.discarded(BoxType::A) == 2);
  CHECK(pool.discarded(BoxType::Y) == 0);
}

TEST_CASE("assignment takes the lowest reserved rail") {
  ConnectionPool pool({2, 2, 10}, LayoutConfig{});
  auto s = successes(2, 2);
  pool.reserve_connections(s, 0);
  CHECK(pool.assign_to_input(4, BoxType::Y) == 2);
  CHECK(pool.assign_to_input(5, BoxType::A) == 0);
  CHECK(pool.assign_to_input(6, BoxType::A) == 1);
  CHECK_FALSE(pool.assign_to_input(7, BoxType::A).has_value());
  CHECK(pool.connection(0).input == 5);
  CHECK_THROWS_AS(pool.mark_tobeavailable(3), IllegalTransition);
}

TEST_CASE("rails are reused only once clear") {
  ConnectionPool pool({2, 2, 10}, LayoutConfig{});
  auto one = successes(1, 0);
  pool.reserve_connections(one, 3);
  pool.extend(0, 9);
  pool.assign_to_input(0, BoxType::A);
  pool.note_rail_use(0, 10);
  pool.mark_tobeavailable(0);
  CHECK(pool.sweep(10).empty());
  CHECK(pool.sweep(11) == std::vector<int>{0});
  CHECK(pool.connection(0).state == ConnState::available);
  // Arrival at or before the rail's last cell needs a fresh rail.
  CHECK(pool.reserve_connections(one, 10) == std::vector<int>{1});
  CHECK(pool.reserve_connections(one, 11) == std::vector<int>{0});
  const auto &occ = pool.rail(0).occupancy;
  REQUIRE(occ.size() == 2);
  CHECK(occ[0].hi == 10);
  CHECK(occ[1].lo == 11);
  CHECK(occ[0].lease != occ[1].lease);
  auto veto = [](const Rail &r) { return r.index > 1; };
  for (int in : {1, 2}) pool.mark_tobeavailable(*pool.assign_to_input(in, BoxType::A));
  CHECK(pool.sweep(40).size() == 2);
  CHECK(pool.reserve_connections(one, 50, veto) == std::vector<int>{2});
}

TEST_CASE("extension specs cover stale heads") {
  ConnectionPool pool({2, 2, 10}, LayoutConfig{});
  auto s = successes(1, 1);
  pool.reserve_connections(s, 6);
  CHECK(pool.extension_specs(6).empty());
  auto specs = pool.extension_specs(9);
  REQUIRE(specs.size() == 2);
  CHECK(specs[0].start == pool.rail(0).cell(6));
  CHECK(specs[0].stop == pool.rail(0).cell(9));
  CHECK(specs[0].segment_class == SegmentClass::kappa_e);
  CHECK(specs[0].owner == pool.connection(0).lease);
  pool.extend_and_sweep(9);
  CHECK(pool.connection(1).head_t == 9);
  CHECK(pool.extension_specs(9).empty());
  CHECK_THROWS(pool.extend(0, 5));
}

TEST_CASE("random scripts keep the pool consistent") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    ConnectionPool pool({2, 2, 1 + trial % 6}, LayoutConfig{});
    int now = 0, input = 0;
    for (int step = 0; step < 200; ++step) {
      now += 1 + static_cast<int>(rng() % 3);
      switch (rng() % 4) {
        case 0: {
          auto s = successes(static_cast<int>(rng() % 4), static_cast<int>(rng() % 4));
          pool.reserve_connections(s, now);
          break;
        }
        case 1: {
          auto id = pool.assign_to_input(input++, rng() % 2 ? BoxType::A : BoxType::Y);
          if (id) {
            pool.note_rail_use(*id, now + static_cast<int>(rng() % 4));
            pool.mark_tobeavailable(*id);
          }
          break;
        }
        default:
          pool.extend_and_sweep(now);
      }
      for (BoxType t : {BoxType::A, BoxType::Y}) {
        REQUIRE(pool.reserved_count(t) <= pool.config().cap_per_type);
        REQUIRE(pool.offered(t) == pool.reserved_in(t) + pool.discarded(t));
        int later = 0;
        for (const Connection &c : pool.connections())
          later += c.type == t && (c.state == ConnState::assigned || c.state == ConnState::tobeavailable);
        REQUIRE(pool.assigned_out(t) >= later);
      }
    }
    for (const Transition &tr : pool.transitions()) REQUIRE(legal_transition(tr.from, tr.to));
    // Rail intervals of successive leases never overlap.
    for (const Rail &r : pool.rails()) {
      for (std::size_t i = 1; i < r.occupancy.size(); ++i) {
        REQUIRE(r.occupancy[i - 1].hi < r.occupancy[i].lo);
      }
    }
    // Every successful reservation was either assigned or is still waiting.
    int reserved = 0, assigned = 0;
    for (BoxType t : {BoxType::A, BoxType::Y}) {
      reserved += pool.reserved_in(t);
      assigned += pool.assigned_out(t) + pool.reserved_count(t);
    }
    REQUIRE(reserved == assigned);
  }
}
