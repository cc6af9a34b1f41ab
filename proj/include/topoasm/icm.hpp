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

#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "topoasm/geometry.hpp"

namespace topoasm {

class IcmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Syntax or validation error in an ICM source document.
class ParseError : public IcmError {
 public:
  ParseError(int line, int column, const std::string &what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

enum class InitBasis { zero, plus, A, Y };
enum class MeasureBasis { X, Z };
enum class OpKind { init, cnot, measure };

struct IcmOp {
  OpKind kind = OpKind::init;
  /// Initialised/measured wire, or the CNOT control.
  int wire = 0;
  /// CNOT target; unused otherwise.
  int target = -1;
  InitBasis init_basis = InitBasis::zero;
  MeasureBasis measure_basis = MeasureBasis::Z;
  int timestep = 0;

  bool touches(int w) const { return wire == w || (kind == OpKind::cnot && target == w); }
  bool operator==(const IcmOp &) const = default;
};

/// An |A> or |Y> initialisation that must be fed a distilled state.
struct MagicInput {
  int wire = 0;
  int timestep = 0;
  BoxType type = BoxType::A;
  bool operator==(const MagicInput &) const = default;
};

/// One qubit's stay on a wire: its init, CNOTs, and (optionally) measurement.
struct Lifetime {
  int wire = 0;
  int init_time = 0;
  /// Measurement timestep, or the circuit's last timestep when never measured.
  int end_time = 0;
  bool measured = false;
  InitBasis basis = InitBasis::zero;
};

class IcmCircuit {
 public:
  IcmCircuit() = default;

  /// Validates and sorts into timestep order; throws IcmError.
  static IcmCircuit from_ops(std::vector<IcmOp> ops);

  int wire_count() const { return wire_count_; }
  const std::vector<IcmOp> &ops() const { return ops_; }
  /// Ordered by timestep, then wire.
  const std::vector<MagicInput> &magic_inputs() const { return magic_; }
  /// Ordered by (init_time, wire).
  std::vector<Lifetime> lifetimes() const;
  int last_timestep() const { return ops_.empty() ? 0 : ops_.back().timestep; }
  int first_timestep() const { return ops_.empty() ? 0 : ops_.front().timestep; }

 private:
  int wire_count_ = 0;
  std::vector<IcmOp> ops_;
  std::vector<MagicInput> magic_;
};

/// Line format: `[@<t>] init <w> <0|+|A|Y>`, `[@<t>] cnot <c> <t>`,
/// `[@<t>] measure <w> <X|Z>`; `#` starts a comment.
IcmCircuit parse_icm(std::string_view text);
IcmCircuit load_icm(const std::string &path);
std::string to_icm_text(const IcmCircuit &c);

struct RecycleResult {
  IcmCircuit circuit;
  /// Output wire for each input lifetime, indexed like IcmCircuit::lifetimes().
  std::vector<int> wire_of_lifetime;
};

/// First-fit interval allocation of qubit lifetimes onto wires, in order of
/// init time. A lifetime may reuse a wire once the previous occupant has been
/// measured at a strictly earlier timestep.
RecycleResult recycle_wires_mapped(const IcmCircuit &c);
IcmCircuit recycle_wires(const IcmCircuit &c);

/// Input classes during event driven traversal. Magic inputs are referred to
/// by index into IcmCircuit::magic_inputs().
struct TraversalState {
  int cursor_time = -1;
  std::set<int> in_a;  // connected
  std::set<int> in_c;  // assigned, not yet connected
  std::set<int> in_b;  // triggered scheduling, not yet assigned
  std::set<int> in_f;  // future
  int delay = 0;
  /// Extra stop times requested by a temporal scheduling condition.
  std::set<int> checkpoints;

  static TraversalState fresh(const IcmCircuit &c);

  void assign(int input);
  void connect(int input);
  bool partition_ok(const IcmCircuit &c) const;
};

struct TraversalEvent {
  bool end = false;
  int time = 0;
  /// Inputs at `time`, now in in_b. Empty for a pure checkpoint stop.
  std::vector<int> inputs;
  /// Geometry may be generated up to and including this timestep.
  int horizon = 0;
  bool checkpoint = false;
};

/// Advances to the next timestep carrying future magic inputs (or the next
/// checkpoint before it). Returns `end` once no future inputs remain.
TraversalEvent next_traversal_event(const IcmCircuit &c, TraversalState &state);

}  // namespace topoasm
