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

#include <cmath>

#include <catch_amalgamated.hpp>

#include "topoasm/circuit_geometry.hpp"
#include "topoasm/icm.hpp"
#include "topoasm/sched.hpp"

using namespace topoasm;

namespace {

// P[X >= k] for X ~ Binomial(n, q), built by repeated convolution.
double tail_oracle(int n, int k, double q) {
  std::vector<double> pmf{1.0};
  for (int i = 0; i < n; ++i) {
    std::vector<double> next(pmf.size() + 1, 0.0);
    for (std::size_t j = 0; j < pmf.size(); ++j) {
      next[j] += pmf[j] * (1 - q);
      next[j + 1] += pmf[j] * q;
    }
    pmf.swap(next);
  }
  double s = 0;
  for (int j = k; j <= n; ++j) s += pmf[j];
  return s;
}

int rrs_oracle(int k, double p_fail, double conf) {
  for (int n = k;; ++n)
    if (tail_oracle(n, k, 1 - p_fail) >= conf) return n;
}

void check_disjoint(const std::vector<PlacedBox> &boxes) {
  for (std::size_t i = 0; i < boxes.size(); ++i)
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      for (const Box3 &a : box_claim(boxes[i]))
        for (const Box3 &b : box_claim(boxes[j])) REQUIRE_FALSE(a.overlaps(b));
}

struct Fixture {
  IcmCircuit circuit = load_icm(std::string(TOPOASM_DATA_DIR) + "/toffoli.icm");
  LayoutConfig layout;
  SpatialIndex world;
  Box3 solid_hull;
  Fixture() {
    CircuitGeometry cg(circuit, layout);
    EntryId id = 0;
    bool first = true;
    for (const Box3 &b : cg.solid_boxes()) {
      world.insert({id++, b, ElementTag::circuit, -1});
      solid_hull = first ? b : solid_hull.hull(b);
      first = false;
    }
  }
};

}  // namespace

TEST_CASE("round size examples") {
  CHECK(required_round_size(1, 0.0, 0.999) == 1);
  CHECK(required_round_size(2, 0.5, 0.999) == 14);
  CHECK(required_round_size(2, 0.5, 0.99) == rrs_oracle(2, 0.5, 0.99));
  CHECK(required_round_size(2, 0.5, 0.99) == 11);
}

TEST_CASE("binomial tail matches convolution") {
  for (double q : {0.1, 0.5, 0.75, 0.99})
    for (int n = 0; n <= 64; ++n)
      for (int k = 0; k <= 5; ++k)
        REQUIRE(static_cast<double>(binomial_tail_at_least(n, k, q)) == Catch::Approx(tail_oracle(n, k, q)).margin(1e-12));
  for (int k = 1; k <= 5; ++k)
    for (double p : {0.0, 0.2, 0.5, 0.7})
      for (double c : {0.9, 0.99, 0.999}) {
        INFO("k=" << k << " p=" << p << " c=" << c);
        int n = required_round_size(k, p, c);
        CHECK(n == rrs_oracle(k, p, c));
      }
}

TEST_CASE("round size is monotone") {
  for (int k = 1; k < 8; ++k) {
    CHECK(required_round_size(k, 0.5, 0.999) <= required_round_size(k + 1, 0.5, 0.999));
    for (double p = 0.0; p < 0.85; p += 0.05)
      CHECK(required_round_size(k, p, 0.99) <= required_round_size(k, p + 0.05, 0.99));
    for (double c = 0.5; c < 0.99; c += 0.01)
      CHECK(required_round_size(k, 0.3, c) <= required_round_size(k, 0.3, c + 0.01));
  }
}

TEST_CASE("policy validation") {
  SchedulerPolicy p;
  CHECK_NOTHROW(p.validate());
  p.confidence = 1.0;
  CHECK_THROWS(p.validate());
  p.confidence = 0.9;
  p.p_fail = 1.0;
  CHECK_THROWS(p.validate());
  p.p_fail = 0.1;
  p.delay = 2;
  CHECK_THROWS(p.validate());
  CHECK(parse_scheduler_kind("alap") == SchedulerKind::alap);
  CHECK_THROWS(parse_scheduler_kind("greedy"));
}

TEST_CASE("spiral slots wind counter-clockwise") {
  SpiralSlots s({{0, 0, 0}, {1, 10, 10}}, 5, 5);
  int x, y;
  REQUIRE(s.slot(0, 1, x, y));
  CHECK((x == -5 && y == -5));
  s.slot(1, 1, x, y);
  CHECK((x == 0 && y == -5));
  s.slot(3, 1, x, y);
  CHECK((x == 10 && y == -5));
  s.slot(4, 1, x, y);
  CHECK((x == 10 && y == 0));
  s.slot(6, 1, x, y);
  CHECK((x == 10 && y == 10));
  s.slot(7, 1, x, y);
  CHECK((x == 5 && y == 10));
  CHECK(s.slot(11, 1, x, y));
  CHECK_FALSE(s.slot(12, 1, x, y));
}

TEST_CASE("single box sits next to a unit seed") {
  SpatialIndex world;
  Box3 seed = Box3::cell({9, 0, 0});
  world.insert({1, seed, ElementTag::circuit, -1});
  LayoutConfig l;
  auto layer = place_spiral_layer(0, 1, 10, world, l, seed, 1, 0);
  REQUIRE(layer.boxes.size() == 1);
  const Box3 &f = layer.boxes[0].footprint;
  CHECK_FALSE(f.overlaps(seed));
  CHECK(f.hi.t == 10);
  // Within the first ring around the seed.
  CHECK(f.overlaps(seed.expanded(l.y_box_extents.y + l.box_clearance)));
}

TEST_CASE("spiral around the circuit is collision free and deterministic") {
  Fixture fx;
  Box3 channel = fx.solid_hull.expanded(2);
  for (int trigger : {30, 90, 150}) {
    auto a = place_spiral_layer(4, 4, trigger, fx.world, fx.layout, channel, 1, 0);
    auto b = place_spiral_layer(4, 4, trigger, fx.world, fx.layout, channel, 1, 0);
    REQUIRE(a.boxes.size() == 8);
    CHECK(a.schedule == b.schedule);
    check_disjoint(a.boxes);
    for (const PlacedBox &p : a.boxes) {
      CHECK(p.footprint.hi.t == trigger);
      for (const Box3 &c : box_claim(p)) CHECK_FALSE(fx.world.any_hit(c));
      CHECK_FALSE(p.footprint.overlaps(channel));
    }
    CHECK(a.boxes[0].type == BoxType::A);
    CHECK(a.boxes[7].type == BoxType::Y);
  }
}

TEST_CASE("large spirals balance around the seed") {
  SpatialIndex world;
  Box3 seed{{0, 0, 0}, {40, 6, 6}};
  world.insert({1, seed, ElementTag::circuit, -1});
  LayoutConfig l;
  for (auto [na, ny] : {std::pair{64, 0}, std::pair{0, 64}, std::pair{32, 32}}) {
    auto layer = place_spiral_layer(na, ny, 20, world, l, seed, 1, 0);
    REQUIRE(layer.boxes.size() == 64);
    check_disjoint(layer.boxes);
    double cx = 0, cy = 0;
    for (const PlacedBox &b : layer.boxes) {
      cx += (b.footprint.lo.x + b.footprint.hi.x) / 2.0;
      cy += (b.footprint.lo.y + b.footprint.hi.y) / 2.0;
    }
    cx /= 64;
    cy /= 64;
    double pitch_x = l.a_box_extents.x + l.box_clearance, pitch_y = l.a_box_extents.y + l.box_clearance;
    INFO(na << " A, " << ny << " Y: centroid " << cx << ", " << cy);
    CHECK(std::abs(cx - (seed.lo.x + seed.hi.x) / 2.0) <= pitch_x);
    CHECK(std::abs(cy - (seed.lo.y + seed.hi.y) / 2.0) <= pitch_y);
  }
}

TEST_CASE("spiral gives up past its ring bound") {
  SpatialIndex world;
  Box3 seed = Box3::cell({0, 0, 0});
  CHECK_THROWS_AS(place_spiral_layer(40, 0, 10, world, LayoutConfig{}, seed, 1, 0, 2), PlacementFailure);
}

TEST_CASE("baselines respect their deadlines") {
  Fixture fx;
  auto st = TraversalState::fresh(fx.circuit);
  std::vector<LayerDemand> demand;
  for (auto ev = next_traversal_event(fx.circuit, st); !ev.end; ev = next_traversal_event(fx.circuit, st)) {
    LayerDemand d{fx.layout.geometric_time(ev.time), 0, 0};
    for (int i : ev.inputs) {
      (fx.circuit.magic_inputs()[i].type == BoxType::A ? d.n_a : d.n_y)++;
      st.assign(i);
      st.connect(i);
    }
    demand.push_back(d);
  }
  int width = fx.solid_hull.hi.x - fx.solid_hull.lo.x;
  int cols = baseline_columns(width, fx.layout);
  CHECK(cols >= 1);
  int y0 = fx.solid_hull.hi.y + 4;
  int start = fx.solid_hull.lo.t;

  auto asap = place_baseline_layer(SchedulerKind::asap, demand, fx.world, fx.layout, start, fx.solid_hull.lo.x, y0, cols);
  REQUIRE(asap.size() == 1);
  CHECK(asap[0].boxes.size() == 21);
  check_disjoint(asap[0].boxes);
  for (const PlacedBox &b : asap[0].boxes) CHECK(b.footprint.hi.t <= start);

  auto alap = place_baseline_layer(SchedulerKind::alap, demand, fx.world, fx.layout, start, fx.solid_hull.lo.x, y0, cols);
  std::vector<PlacedBox> all;
  std::size_t li = 0;
  for (const LayerDemand &d : demand) {
    if (d.n_a + d.n_y == 0) continue;
    REQUIRE(li < alap.size());
    for (const PlacedBox &b : alap[li].boxes) CHECK(b.footprint.hi.t <= d.time);
    CHECK(static_cast<int>(alap[li].boxes.size()) == d.n_a + d.n_y);
    for (const PlacedBox &b : alap[li].boxes) {
      for (const Box3 &c : box_claim(b)) CHECK_FALSE(fx.world.any_hit(c));
      all.push_back(b);
    }
    ++li;
  }
  CHECK(li == alap.size());
  check_disjoint(all);
  CHECK_THROWS_AS(place_baseline_layer(SchedulerKind::spiral, demand, fx.world, fx.layout, 0, 0, 0, 1),
                  std::invalid_argument);
}
