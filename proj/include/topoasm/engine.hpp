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
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "topoasm/circuit_geometry.hpp"
#include "topoasm/geometry.hpp"
#include "topoasm/icm.hpp"
#include "topoasm/journal.hpp"
#include "topoasm/pool.hpp"
#include "topoasm/sched.hpp"

namespace topoasm {

class SynthesisFailure : public std::runtime_error {
 public:
  SynthesisFailure(const std::string &what, Journal journal)
      : std::runtime_error(what), journal_(std::move(journal)) {}
  const Journal &journal() const { return journal_; }

 private:
  Journal journal_;
};

class ScriptExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-round success bitmaps, boxes in id order. Missing trailing bits are
/// failures.
struct OutcomeScript {
  std::vector<std::vector<bool>> rounds;

  /// One line of 0/1 characters per round; '#' comments and blank lines
  /// are skipped.
  static OutcomeScript parse(const std::string &text);
  static OutcomeScript load(const std::string &path);
};

class OutcomeSource {
 public:
  explicit OutcomeSource(std::uint64_t seed, double p_fail) : rng_(seed), p_fail_(p_fail) {}
  explicit OutcomeSource(OutcomeScript script) : script_(std::move(script)) {}

  /// One success flag per box. Throws ScriptExhausted.
  std::vector<bool> draw(std::size_t boxes);

 private:
  std::mt19937_64 rng_;
  double p_fail_ = 0.0;
  std::optional<OutcomeScript> script_;
  std::size_t next_round_ = 0;
};

/// Successful boxes of a layer, in box-id order.
std::vector<Success> simulate_round(const DistillationLayer &layer, OutcomeSource &source);

struct SynthesisConfig {
  SchedulerPolicy policy;
  LayoutConfig layout;
  PoolConfig pool;
  std::uint64_t seed = 1;
  std::optional<OutcomeScript> script;
  int max_rounds = 64;
  bool recycle = true;
  bool strict = false;
};

struct StepRecord {
  int step = 0;
  int nr_a = 0;
  int nr_y = 0;
  int a_pool = 0;
  int y_pool = 0;
  int sched_round = 0;
  bool operator==(const StepRecord &) const = default;
};

/// Pool counters after a step, per type (A, Y).
struct PoolSnapshot {
  std::array<int, 2> offered{};
  std::array<int, 2> reserved_in{};
  std::array<int, 2> assigned_out{};
  std::array<int, 2> discarded{};
  std::array<int, 2> reserved{};
};

/// Everything routed for one reservation.
struct ConnectionRecord {
  int lease = 0;
  int rail = 0;
  BoxType type = BoxType::A;
  int box = 0;
  int input = -1;
  Path kappa_b;
  std::vector<Path> kappa_e;
  Path kappa_c;
};

struct Assembly {
  IcmCircuit circuit;
  GeometrySet geometry;
  std::vector<DistillationLayer> layers;
  std::vector<StepRecord> records;
  std::vector<PoolSnapshot> snapshots;
  std::vector<ConnectionRecord> connections;
  std::vector<Transition> transitions;
  std::vector<Rail> rails;
  std::int64_t volume = 0;
  Journal journal;
  /// Inputs connected at the end of traversal.
  int connected_inputs = 0;
};

Assembly synthesize(const IcmCircuit &circuit, const SynthesisConfig &config);

std::vector<StepRecord> trace_table(const Assembly &assembly);

/// Connection paths as defects, one polyline per path.
std::vector<DefectPolyline> connection_defects(const Assembly &assembly);

}  // namespace topoasm
