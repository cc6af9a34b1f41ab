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

#include "topoasm/engine.hpp"

#include <algorithm>
#include <climits>
#include <fstream>
#include <map>
#include <sstream>

namespace topoasm {

OutcomeScript OutcomeScript::parse(const std::string &text) {
  OutcomeScript s;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::vector<bool> bits;
    for (char ch : line) {
      if (ch == '0' || ch == '1') {
        bits.push_back(ch == '1');
      } else if (ch != ' ' && ch != '\t' && ch != '\r') {
        throw std::invalid_argument("outcome script line " + std::to_string(lineno) + ": unexpected '" +
                                    std::string(1, ch) + "'");
      }
    }
    if (!bits.empty()) s.rounds.push_back(std::move(bits));
  }
  return s;
}

OutcomeScript OutcomeScript::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open outcome script " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::vector<bool> OutcomeSource::draw(std::size_t boxes) {
  std::vector<bool> out(boxes, false);
  if (script_) {
    if (next_round_ >= script_->rounds.size()) {
      throw ScriptExhausted("outcome script has no line for round " + std::to_string(next_round_ + 1));
    }
    const auto &bits = script_->rounds[next_round_++];
    for (std::size_t i = 0; i < boxes && i < bits.size(); ++i) out[i] = bits[i];
    return out;
  }
  for (std::size_t i = 0; i < boxes; ++i) {
    double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    out[i] = u < 1.0 - p_fail_;
  }
  return out;
}

std::vector<Success> simulate_round(const DistillationLayer &layer, OutcomeSource &source) {
  std::vector<PlacedBox> boxes = layer.boxes;
  std::sort(boxes.begin(), boxes.end(), [](const PlacedBox &a, const PlacedBox &b) { return a.id < b.id; });
  auto bits = source.draw(boxes.size());
  std::vector<Success> out;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (bits[i]) out.push_back({boxes[i].id, boxes[i].type, boxes[i].port});
  }
  return out;
}

namespace {

std::size_t ti(BoxType t) { return t == BoxType::A ? 0 : 1; }

std::string bitstring(const std::vector<Success> &s, const DistillationLayer &layer) {
  std::string out;
  for (const auto &b : layer.boxes) {
    bool ok = std::any_of(s.begin(), s.end(), [&](const Success &x) { return x.box == b.id; });
    out += ok ? '1' : '0';
  }
  return out;
}

class Engine {
 public:
  Engine(const IcmCircuit &input, const SynthesisConfig &cfg)
      : cfg_(cfg),
        circuit_(cfg.recycle ? recycle_wires(input) : input),
        geometry_(circuit_, cfg.layout),
        pool_(pool_config(cfg, circuit_), cfg.layout),
        outcomes_(cfg.script ? OutcomeSource(*cfg.script) : OutcomeSource(cfg.seed, cfg.policy.p_fail)) {
    cfg.policy.validate();
    if (cfg.max_rounds < 1) throw std::invalid_argument("max_rounds must be >= 1");
  }

  Assembly run();

 private:
  static PoolConfig pool_config(const SynthesisConfig &cfg, const IcmCircuit &c);

  Box3 channel() const;
  bool condition_fires(const TraversalEvent &ev, int T) const;
  void run_round(int T, int need_a, int need_y);
  void route_step(int T, const std::vector<std::pair<int, int>> &assigned, const std::vector<int> &fresh);
  void fail(const std::string &why) { throw SynthesisFailure(why, assembly_.journal); }
  ConnectionRecord &record_of(int cid) { return assembly_.connections.at(record_.at(pool_.connection(cid).lease)); }
  void add_defect(const Path &p, DefectRole role, int lease);

  const SynthesisConfig &cfg_;
  IcmCircuit circuit_;
  CircuitGeometry geometry_;
  World world_;
  ConnectionPool pool_;
  OutcomeSource outcomes_;
  Assembly assembly_;
  std::map<int, std::size_t> record_;
  std::vector<int> fresh_;
  int rounds_ = 0;
  int k_max_ = 1;
  int next_box_ = 0;
  int last_round_t_ = INT_MIN / 2;
  int t_max_ = 0;
};

PoolConfig Engine::pool_config(const SynthesisConfig &cfg, const IcmCircuit &c) {
  PoolConfig p = cfg.pool;
  if (cfg.policy.kind == SchedulerKind::asap) {
    // The single up-front layer has to fit in the pool.
    int na = 0, ny = 0;
    for (const auto &m : c.magic_inputs()) (m.type == BoxType::A ? na : ny)++;
    int n = 0;
    if (na) n = std::max(n, required_round_size(na, cfg.policy.p_fail, cfg.policy.confidence));
    if (ny) n = std::max(n, required_round_size(ny, cfg.policy.p_fail, cfg.policy.confidence));
    p.cap_per_type = std::max(p.cap_per_type, n);
  }
  return p;
}

Box3 Engine::channel() const {
  const LayoutConfig &l = cfg_.layout;
  int m = l.channel_margin;
  int rails = std::max(pool_.rail_high_water(), (2 * pool_.config().cap_per_type - 1) * pool_.config().rail_pitch);
  int hi_x = std::max(l.wire_x(std::max(circuit_.wire_count(), 1) - 1), rails) + 1;
  return {{INT_MIN / 4, -m, -m}, {INT_MAX / 4, hi_x + m, pool_.plane_y() + 1 + m}};
}

bool Engine::condition_fires(const TraversalEvent &ev, int T) const {
  if (cfg_.policy.kind != SchedulerKind::spiral) return false;
  const SchedulingCondition &c = cfg_.policy.condition;
  switch (c.kind) {
    case ConditionKind::temporal: return ev.checkpoint;
    case ConditionKind::pool_threshold:
      return pool_.reserved_count(BoxType::A) < c.threshold || pool_.reserved_count(BoxType::Y) < c.threshold;
    case ConditionKind::back_to_back: {
      int depth = std::max(cfg_.layout.a_box_extents.t, cfg_.layout.y_box_extents.t);
      return T - depth > last_round_t_;
    }
  }
  return false;
}

void Engine::run_round(int T, int need_a, int need_y) {
  if (rounds_ >= cfg_.max_rounds) fail("round limit " + std::to_string(cfg_.max_rounds) + " reached");
  ++rounds_;
  const LayoutConfig &l = cfg_.layout;
  const SchedulerPolicy &p = cfg_.policy;
  int na, ny;
  if (p.kind == SchedulerKind::spiral) {
    na = ny = required_round_size(k_max_, p.p_fail, p.confidence);
  } else {
    int da = need_a - pool_.reserved_count(BoxType::A);
    int dy = need_y - pool_.reserved_count(BoxType::Y);
    na = da > 0 ? required_round_size(std::max(da, k_max_), p.p_fail, p.confidence) : 0;
    ny = dy > 0 ? required_round_size(std::max(dy, k_max_), p.p_fail, p.confidence) : 0;
  }

  DistillationLayer layer;
  Box3 ch = channel();
  try {
    if (p.kind == SchedulerKind::spiral) {
      layer = place_spiral_layer(na, ny, T, world_.solids(), l, ch, rounds_, next_box_);
    } else {
      int width = l.wire_x(std::max(circuit_.wire_count(), 1) - 1) + 1;
      layer = place_grid_layer(na, ny, T, world_.solids(), l, ch.lo.x, ch.hi.y + l.box_clearance,
                               baseline_columns(width, l), rounds_, next_box_);
    }
  } catch (const PlacementFailure &e) {
    fail(e.what());
  }
  next_box_ += na + ny;
  assembly_.journal.record("schedule", "round=" + std::to_string(rounds_) + " t=" + std::to_string(T) +
                                           " a=" + std::to_string(na) + " y=" + std::to_string(ny));
  for (const PlacedBox &b : layer.boxes) {
    world_.insert_solid(b.footprint, ElementTag::box, -1);
    world_.insert_solid(Box3::cell(b.port), ElementTag::port, -1);
    assembly_.geometry.boxes.push_back(b);
  }
  last_round_t_ = T;

  std::vector<Success> ok;
  try {
    ok = simulate_round(layer, outcomes_);
  } catch (const ScriptExhausted &e) {
    fail(e.what());
  }
  assembly_.journal.record("simulate", bitstring(ok, layer));

  int before_a = pool_.reserved_in(BoxType::A), before_y = pool_.reserved_in(BoxType::Y);
  int da = pool_.discarded(BoxType::A), dy = pool_.discarded(BoxType::Y);
  int tmax = t_max_;
  auto rail_ok = [&](const Rail &r) {
    return !world_.solids().any_hit({{T, r.x, r.y}, {tmax + 1, r.x + 1, r.y + 1}});
  };
  for (int cid : pool_.reserve_connections(ok, T, rail_ok)) {
    const Connection &c = pool_.connection(cid);
    record_[c.lease] = assembly_.connections.size();
    assembly_.connections.push_back({c.lease, cid, *c.type, c.source_box, -1, {}, {}, {}});
    fresh_.push_back(cid);
  }
  assembly_.journal.record(
      "reserve", "a=" + std::to_string(pool_.reserved_in(BoxType::A) - before_a) +
                     " y=" + std::to_string(pool_.reserved_in(BoxType::Y) - before_y) +
                     " discarded=" + std::to_string(pool_.discarded(BoxType::A) - da + pool_.discarded(BoxType::Y) - dy));
  assembly_.layers.push_back(std::move(layer));
}

void Engine::add_defect(const Path &p, DefectRole role, int lease) {
  assembly_.geometry.defects.push_back({DefectKind::primal, role, lease, segments_from_cells(p.cells)});
}

// assigned: (connection id, input index) pairs already in state tobeavailable.
// fresh: connections reserved during this step.
void Engine::route_step(int T, const std::vector<std::pair<int, int>> &assigned, const std::vector<int> &fresh) {
  Journal &j = assembly_.journal;
  const int y_pool = pool_.plane_y();

  TaskSet tasks;
  std::vector<int> task_conn;
  for (auto [cid, input] : assigned) {
    const Connection &c = pool_.connection(cid);
    SegmentSpec s;
    s.start = pool_.rail(cid).cell(c.head_t);
    s.stop = pin_position(circuit_.magic_inputs()[input], cfg_.layout);
    s.segment_class = SegmentClass::kappa_c;
    s.owner = c.lease;
    tasks.push_back(s);
    task_conn.push_back(cid);
  }
  std::size_t n_c = tasks.size();
  for (int cid : fresh) {
    const Connection &c = pool_.connection(cid);
    SegmentSpec s;
    s.start = c.port;
    s.stop = pool_.rail(cid).cell(T);
    s.segment_class = SegmentClass::kappa_b;
    s.owner = c.lease;
    tasks.push_back(s);
    task_conn.push_back(cid);
  }
  std::size_t n_cb = tasks.size();
  std::map<int, int> conn_of_lease;
  for (const Connection &c : pool_.connections()) conn_of_lease[c.lease] = c.id;
  for (SegmentSpec &s : pool_.extension_specs(T)) {
    tasks.push_back(s);
    task_conn.push_back(conn_of_lease.at(s.owner));
  }

  // Obstacles: a guide over every reserved rail ahead of its head, an
  // occupy over each pin approach and each rail entry.
  std::vector<ObstacleId> added;
  std::map<int, std::vector<ObstacleId>> owned;
  int prio = 0;
  for (const Connection &c : pool_.connections()) {
    if (c.state != ConnState::reserved) continue;
    int from = c.head_t + 1;
    if (from > t_max_) continue;
    const Rail &r = pool_.rail(c.id);
    ObstacleId o = world_.add_obstacle({{{from, r.x, r.y}, {t_max_ + 1, r.x + 1, r.y + 1}},
                                        ObstacleKind::guide, prio++, c.lease, true});
    added.push_back(o);
    owned[c.lease].push_back(o);
  }
  std::vector<std::vector<ObstacleId>> spec_obstacles(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const SegmentSpec &s = tasks[i];
    Box3 region;
    if (i < n_c) {
      region = {{s.stop.t, s.stop.x, s.stop.y + 1}, {s.stop.t + 1, s.stop.x + 1, y_pool}};
    } else if (i < n_cb) {
      region = {{s.stop.t, s.stop.x, y_pool}, {s.stop.t + 1, s.stop.x + 1, y_pool + 2}};
    } else {
      continue;
    }
    if (!region.valid()) continue;
    ObstacleId o = world_.add_obstacle({region, ObstacleKind::occupy, prio++, s.owner, true});
    added.push_back(o);
    spec_obstacles[i].push_back(o);
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    tasks[i].obstacles = spec_obstacles[i];
    if (i >= n_c) {
      for (ObstacleId o : owned[tasks[i].owner]) tasks[i].obstacles.push_back(o);
    }
    tasks[i].priority = static_cast<int>(tasks.size() - i);
  }
  j.record("obstacles", std::to_string(added.size()));

  std::vector<Path> paths;
  try {
    paths = compute_taskset(tasks, world_, &j);
  } catch (const TaskSetFailure &e) {
    fail(std::string("segment routing failed: ") + e.what());
  }
  j.record("compute", std::to_string(paths.size()));
  for (ObstacleId o : added) world_.remove_obstacle(o);

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    int cid = task_conn[i];
    ConnectionRecord &rec = record_of(cid);
    const Rail &rail = pool_.rail(cid);
    int on_rail = INT_MIN;
    for (Point3 p : paths[i].cells) {
      if (p.x == rail.x && p.y == rail.y) on_rail = std::max(on_rail, p.t);
    }
    switch (tasks[i].segment_class) {
      case SegmentClass::kappa_c:
        rec.kappa_c = paths[i];
        add_defect(paths[i], DefectRole::connection_c, rec.lease);
        if (on_rail != INT_MIN) pool_.note_rail_use(cid, on_rail);
        break;
      case SegmentClass::kappa_b:
        rec.kappa_b = paths[i];
        add_defect(paths[i], DefectRole::connection_b, rec.lease);
        if (on_rail != INT_MIN) pool_.note_rail_use(cid, on_rail);
        break;
      case SegmentClass::kappa_e:
        rec.kappa_e.push_back(paths[i]);
        add_defect(paths[i], DefectRole::connection_e, rec.lease);
        pool_.extend(cid, T);
        break;
    }
  }
}

Assembly Engine::run() {
  Journal &j = assembly_.journal;
  const LayoutConfig &l = cfg_.layout;
  const auto &inputs = circuit_.magic_inputs();
  assembly_.circuit = circuit_;

  j.begin_step(0);
  for (const Box3 &b : geometry_.solid_boxes()) world_.insert_solid(b, ElementTag::circuit, -1);
  for (const Pin &p : geometry_.all_pins()) world_.insert_solid(Box3::cell(p.at), ElementTag::pin, -1);
  t_max_ = l.geometric_time(circuit_.last_timestep()) + l.time_pitch;

  TraversalState st = TraversalState::fresh(circuit_);
  if (cfg_.policy.kind == SchedulerKind::spiral && cfg_.policy.condition.kind == ConditionKind::temporal) {
    for (int t = cfg_.policy.condition.period; t <= circuit_.last_timestep(); t += cfg_.policy.condition.period) {
      st.checkpoints.insert(t);
    }
  }

  if (cfg_.policy.kind == SchedulerKind::asap && !inputs.empty()) {
    int na = 0, ny = 0;
    for (const auto &m : inputs) (m.type == BoxType::A ? na : ny)++;
    auto solids = geometry_.solid_boxes();
    int start = solids.empty() ? 0 : solids.front().lo.t;
    for (const Box3 &b : solids) start = std::min(start, b.lo.t);
    run_round(start, na, ny);
    route_step(start, {}, fresh_);
    fresh_.clear();
  }

  int step = 0;
  TraversalEvent ev = next_traversal_event(circuit_, st);
  while (!ev.end) {
    j.begin_step(++step);
    int T = l.geometric_time(ev.time);
    std::array<int, 2> need{};
    for (int i : ev.inputs) ++need[ti(inputs[i].type)];
    k_max_ = std::max({k_max_, need[0], need[1]});

    bool fired = false;
    for (;;) {
      bool short_pool = pool_.reserved_count(BoxType::A) < need[0] || pool_.reserved_count(BoxType::Y) < need[1];
      bool proactive = !fired && condition_fires(ev, T);
      if (!short_pool && !proactive) break;
      if (short_pool && fired && cfg_.strict) fail("pool insufficient after scheduling at step " + std::to_string(step));
      run_round(T, need[0], need[1]);
      fired = true;
    }

    GeometrySet delta = geometry_.advance(ev.horizon);
    j.record("geometry", std::to_string(ev.horizon) + " " + std::to_string(delta.defects.size()));
    assembly_.geometry.append(delta);

    std::vector<std::pair<int, int>> assigned;
    for (int i : ev.inputs) {
      auto cid = pool_.assign_to_input(i, inputs[i].type);
      if (!cid) fail("no reserved connection for input " + std::to_string(i));
      st.assign(i);
      record_of(*cid).input = i;
      assigned.push_back({*cid, i});
      j.record("assign", std::to_string(i) + " " + std::to_string(*cid));
    }
    for (auto [cid, i] : assigned) j.record("kappa_c", std::to_string(cid) + " " + std::to_string(i));
    for (auto [cid, i] : assigned) {
      pool_.mark_tobeavailable(cid);
      j.record("mark", std::to_string(cid));
    }
    j.record("kappa_e", std::to_string(pool_.extension_specs(T).size()));
    j.record("kappa_b", std::to_string(fresh_.size()));

    route_step(T, assigned, fresh_);
    fresh_.clear();
    for (auto [cid, i] : assigned) st.connect(i);

    auto released = pool_.sweep(T);
    j.record("sweep", std::to_string(released.size()));

    StepRecord rec{step, need[0], need[1], pool_.reserved_count(BoxType::A), pool_.reserved_count(BoxType::Y),
                   fired ? 1 : 0};
    assembly_.records.push_back(rec);
    PoolSnapshot snap;
    for (BoxType t : {BoxType::A, BoxType::Y}) {
      snap.offered[ti(t)] = pool_.offered(t);
      snap.reserved_in[ti(t)] = pool_.reserved_in(t);
      snap.assigned_out[ti(t)] = pool_.assigned_out(t);
      snap.discarded[ti(t)] = pool_.discarded(t);
      snap.reserved[ti(t)] = pool_.reserved_count(t);
    }
    assembly_.snapshots.push_back(snap);

    ev = next_traversal_event(circuit_, st);
    j.record("traverse", ev.end ? "end" : std::to_string(ev.time));
  }

  assembly_.geometry.append(geometry_.advance(circuit_.last_timestep()));
  assembly_.geometry.pins = geometry_.all_pins();
  assembly_.transitions = pool_.transitions();
  assembly_.rails = pool_.rails();
  assembly_.connected_inputs = static_cast<int>(st.in_a.size());
  if (!assembly_.geometry.empty()) assembly_.volume = plumbing_volume(global_bounding_box(assembly_.geometry));
  return std::move(assembly_);
}

}  // namespace

Assembly synthesize(const IcmCircuit &circuit, const SynthesisConfig &config) {
  Engine e(circuit, config);
  return e.run();
}

std::vector<StepRecord> trace_table(const Assembly &assembly) { return assembly.records; }

std::vector<DefectPolyline> connection_defects(const Assembly &assembly) {
  std::vector<DefectPolyline> out;
  for (const auto &d : assembly.geometry.defects) {
    if (d.role != DefectRole::circuit) out.push_back(d);
  }
  return out;
}

}  // namespace topoasm
