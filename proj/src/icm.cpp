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

#include "topoasm/icm.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

namespace topoasm {

ParseError::ParseError(int line, int column, const std::string &what)
    : IcmError(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

struct SourcedOp {
  IcmOp op;
  int line = 0;
};

bool op_order(const IcmOp &a, const IcmOp &b) {
  if (a.timestep != b.timestep) return a.timestep < b.timestep;
  return a.wire < b.wire;
}

// Replays ops in timestep order and reports the first violated invariant as
// an index into `ops` plus a message.
std::pair<int, std::string> first_violation(const std::vector<IcmOp> &ops) {
  std::map<std::pair<int, int>, int> slot;
  std::map<int, bool> live;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    const IcmOp &op = ops[i];
    auto idx = static_cast<int>(i);
    if (op.wire < 0 || (op.kind == OpKind::cnot && op.target < 0)) {
      return {idx, "negative wire id"};
    }
    if (op.timestep < 0) return {idx, "negative timestep"};
    if (op.kind == OpKind::cnot && op.wire == op.target) {
      return {idx, "cnot control equals target"};
    }
    for (int w : {op.wire, op.kind == OpKind::cnot ? op.target : op.wire}) {
      auto [it, fresh] = slot.emplace(std::pair{w, op.timestep}, idx);
      if (!fresh && it->second != idx) {
        return {idx, "duplicate op slot on wire " + std::to_string(w) + " at timestep " +
                         std::to_string(op.timestep)};
      }
    }
    switch (op.kind) {
      case OpKind::init:
        if (live[op.wire]) return {idx, "init on live wire " + std::to_string(op.wire)};
        live[op.wire] = true;
        break;
      case OpKind::cnot:
        if (!live[op.wire] || !live[op.target]) {
          return {idx, "wire used before init in cnot " + std::to_string(op.wire) + " " +
                           std::to_string(op.target)};
        }
        break;
      case OpKind::measure:
        if (!live[op.wire]) return {idx, "measure before init on wire " + std::to_string(op.wire)};
        live[op.wire] = false;
        break;
    }
  }
  return {-1, {}};
}

}  // namespace

IcmCircuit IcmCircuit::from_ops(std::vector<IcmOp> ops) {
  std::stable_sort(ops.begin(), ops.end(), op_order);
  if (auto [idx, msg] = first_violation(ops); idx >= 0) throw IcmError(msg);
  if (ops.empty()) throw IcmError("empty circuit");

  IcmCircuit c;
  c.ops_ = std::move(ops);
  for (const auto &op : c.ops_) {
    c.wire_count_ = std::max({c.wire_count_, op.wire + 1, op.target + 1});
    if (op.kind == OpKind::init && (op.init_basis == InitBasis::A || op.init_basis == InitBasis::Y)) {
      c.magic_.push_back({op.wire, op.timestep, op.init_basis == InitBasis::A ? BoxType::A : BoxType::Y});
    }
  }
  return c;
}

std::vector<Lifetime> IcmCircuit::lifetimes() const {
  std::vector<Lifetime> out;
  std::map<int, std::size_t> open;
  for (const auto &op : ops_) {
    if (op.kind == OpKind::init) {
      open[op.wire] = out.size();
      out.push_back({op.wire, op.timestep, last_timestep(), false, op.init_basis});
    } else if (op.kind == OpKind::measure) {
      auto &lt = out[open.at(op.wire)];
      lt.end_time = op.timestep;
      lt.measured = true;
      open.erase(op.wire);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Lifetime &a, const Lifetime &b) {
    return a.init_time != b.init_time ? a.init_time < b.init_time : a.wire < b.wire;
  });
  return out;
}

namespace {

struct Token {
  std::string_view text;
  int column;
};

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    if (i >= line.size() || line[i] == '#') break;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r' && line[j] != '#') ++j;
    out.push_back({line.substr(i, j - i), static_cast<int>(i) + 1});
    i = j;
  }
  return out;
}

int parse_int(const Token &tok, int line, const char *what) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), v);
  if (ec != std::errc{} || ptr != tok.text.data() + tok.text.size() || v < 0) {
    throw ParseError(line, tok.column, std::string("expected ") + what + ", got '" +
                                           std::string(tok.text) + "'");
  }
  return v;
}

}  // namespace

IcmCircuit parse_icm(std::string_view text) {
  std::vector<SourcedOp> ops;
  std::map<int, int> last_time;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    auto toks = tokenize(line);
    if (toks.empty()) continue;
    std::size_t k = 0;
    int explicit_t = -1;
    if (toks[0].text.front() == '@') {
      Token t{toks[0].text.substr(1), toks[0].column + 1};
      explicit_t = parse_int(t, line_no, "timestep");
      ++k;
    }
    if (k >= toks.size()) throw ParseError(line_no, toks[0].column, "missing operation");
    const Token &kw = toks[k];
    auto need = [&](std::size_t n) {
      if (toks.size() != k + 1 + n) {
        int col = toks.size() > k + 1 + n ? toks[k + 1 + n].column : kw.column;
        throw ParseError(line_no, col, "'" + std::string(kw.text) + "' takes " + std::to_string(n) +
                                           " operands");
      }
    };
    IcmOp op;
    if (kw.text == "init") {
      need(2);
      op.kind = OpKind::init;
      op.wire = parse_int(toks[k + 1], line_no, "wire id");
      auto b = toks[k + 2].text;
      if (b == "0") op.init_basis = InitBasis::zero;
      else if (b == "+") op.init_basis = InitBasis::plus;
      else if (b == "A") op.init_basis = InitBasis::A;
      else if (b == "Y") op.init_basis = InitBasis::Y;
      else throw ParseError(line_no, toks[k + 2].column, "unknown init basis '" + std::string(b) + "'");
    } else if (kw.text == "cnot") {
      need(2);
      op.kind = OpKind::cnot;
      op.wire = parse_int(toks[k + 1], line_no, "control wire id");
      op.target = parse_int(toks[k + 2], line_no, "target wire id");
      if (op.wire == op.target) throw ParseError(line_no, toks[k + 2].column, "cnot control equals target");
    } else if (kw.text == "measure") {
      need(2);
      op.kind = OpKind::measure;
      op.wire = parse_int(toks[k + 1], line_no, "wire id");
      auto b = toks[k + 2].text;
      if (b == "X") op.measure_basis = MeasureBasis::X;
      else if (b == "Z") op.measure_basis = MeasureBasis::Z;
      else throw ParseError(line_no, toks[k + 2].column, "unknown measure basis '" + std::string(b) + "'");
    } else {
      throw ParseError(line_no, kw.column, "unknown operation '" + std::string(kw.text) + "'");
    }

    std::vector<int> wires{op.wire};
    if (op.kind == OpKind::cnot) wires.push_back(op.target);
    if (explicit_t >= 0) {
      op.timestep = explicit_t;
    } else {
      int t = -1;
      for (int w : wires) {
        auto it = last_time.find(w);
        t = std::max(t, it == last_time.end() ? -1 : it->second);
      }
      op.timestep = t + 1;
    }
    for (int w : wires) last_time[w] = std::max(last_time[w], op.timestep);
    ops.push_back({op, line_no});
  }

  if (ops.empty()) throw ParseError(line_no, 1, "empty circuit");
  std::stable_sort(ops.begin(), ops.end(),
                   [](const SourcedOp &a, const SourcedOp &b) { return op_order(a.op, b.op); });
  std::vector<IcmOp> plain;
  plain.reserve(ops.size());
  for (const auto &s : ops) plain.push_back(s.op);
  if (auto [idx, msg] = first_violation(plain); idx >= 0) throw ParseError(ops[idx].line, 1, msg);
  return IcmCircuit::from_ops(std::move(plain));
}

IcmCircuit load_icm(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IcmError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_icm(ss.str());
}

std::string to_icm_text(const IcmCircuit &c) {
  std::ostringstream os;
  for (const auto &op : c.ops()) {
    os << '@' << op.timestep << ' ';
    switch (op.kind) {
      case OpKind::init: {
        static const char *names[] = {"0", "+", "A", "Y"};
        os << "init " << op.wire << ' ' << names[static_cast<int>(op.init_basis)];
        break;
      }
      case OpKind::cnot: os << "cnot " << op.wire << ' ' << op.target; break;
      case OpKind::measure:
        os << "measure " << op.wire << ' ' << (op.measure_basis == MeasureBasis::X ? 'X' : 'Z');
        break;
    }
    os << '\n';
  }
  return os.str();
}

RecycleResult recycle_wires_mapped(const IcmCircuit &c) {
  auto lts = c.lifetimes();
  std::vector<int> wire_of(lts.size());
  std::vector<int> wire_end;  // end timestep of the last lifetime placed on each output wire
  for (std::size_t i = 0; i < lts.size(); ++i) {
    int chosen = -1;
    for (std::size_t w = 0; w < wire_end.size(); ++w) {
      if (wire_end[w] < lts[i].init_time) {
        chosen = static_cast<int>(w);
        break;
      }
    }
    if (chosen < 0) {
      chosen = static_cast<int>(wire_end.size());
      wire_end.push_back(0);
    }
    // An open lifetime blocks its wire for the rest of the circuit.
    wire_end[chosen] = lts[i].measured ? lts[i].end_time : std::numeric_limits<int>::max();
    wire_of[i] = chosen;
  }

  // Map (input wire, time) -> output wire by locating each op's lifetime.
  std::map<int, std::vector<std::size_t>> by_wire;
  for (std::size_t i = 0; i < lts.size(); ++i) by_wire[lts[i].wire].push_back(i);
  auto rename = [&](int w, int t) {
    const auto &cands = by_wire.at(w);
    for (auto it = cands.rbegin(); it != cands.rend(); ++it) {
      if (lts[*it].init_time <= t) return wire_of[*it];
    }
    throw IcmError("op outside any lifetime");
  };
  std::vector<IcmOp> ops = c.ops();
  for (auto &op : ops) {
    int w = rename(op.wire, op.timestep);
    if (op.kind == OpKind::cnot) op.target = rename(op.target, op.timestep);
    op.wire = w;
  }
  return {IcmCircuit::from_ops(std::move(ops)), std::move(wire_of)};
}

IcmCircuit recycle_wires(const IcmCircuit &c) { return recycle_wires_mapped(c).circuit; }

TraversalState TraversalState::fresh(const IcmCircuit &c) {
  TraversalState s;
  for (int i = 0; i < static_cast<int>(c.magic_inputs().size()); ++i) s.in_f.insert(i);
  return s;
}

void TraversalState::assign(int input) {
  if (in_b.erase(input) == 0) throw IcmError("assign of input not pending: " + std::to_string(input));
  in_c.insert(input);
}

void TraversalState::connect(int input) {
  if (in_c.erase(input) == 0) throw IcmError("connect of unassigned input: " + std::to_string(input));
  in_a.insert(input);
}

bool TraversalState::partition_ok(const IcmCircuit &c) const {
  std::set<int> all;
  std::size_t total = in_a.size() + in_b.size() + in_c.size() + in_f.size();
  for (const auto *s : {&in_a, &in_b, &in_c, &in_f}) all.insert(s->begin(), s->end());
  if (all.size() != total || total != c.magic_inputs().size()) return false;
  const auto &mi = c.magic_inputs();
  for (const auto *s : {&in_a, &in_c})
    for (int i : *s)
      if (mi[i].timestep > cursor_time) return false;
  for (int i : in_f)
    if (mi[i].timestep <= cursor_time) return false;
  return true;
}

TraversalEvent next_traversal_event(const IcmCircuit &c, TraversalState &state) {
  TraversalEvent ev;
  const auto &mi = c.magic_inputs();
  if (state.in_f.empty()) {
    ev.end = true;
    ev.time = std::max(state.cursor_time, c.last_timestep());
    ev.horizon = c.last_timestep();
    return ev;
  }
  int t_input = mi[*state.in_f.begin()].timestep + state.delay;
  int t_star = t_input;
  auto cp = state.checkpoints.upper_bound(state.cursor_time);
  if (cp != state.checkpoints.end() && *cp <= t_input) {
    t_star = *cp;
    ev.checkpoint = true;
  }
  state.cursor_time = t_star;
  ev.time = t_star;
  ev.horizon = t_star - 1;
  while (!state.in_f.empty() && mi[*state.in_f.begin()].timestep + state.delay == t_star) {
    int id = *state.in_f.begin();
    state.in_f.erase(state.in_f.begin());
    state.in_b.insert(id);
    ev.inputs.push_back(id);
  }
  return ev;
}

}  // namespace topoasm
