#!/usr/bin/env python3
# Copyright 2026 The topoasm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Generates the bundled ICM Toffoli fixtures.

The circuit is the 7-T Toffoli (three data qubits) written in ICM form:
every T gate is teleported through an |A> ancilla and every phase
correction through a |Y> ancilla, Hadamards through |+> ancillas. Each
teleport moves the logical qubit onto a fresh wire.

  data/toffoli_unoptimized.icm   one wire per qubit lifetime
  data/toffoli.icm               same operations after first-fit wire recycling

Usage: gen_toffoli_fixture.py <output dir>
"""

import sys
from pathlib import Path

# (timestep, [basis per teleport]) for every timestep that carries magic inputs.
MAGIC_EVENTS = [
    (2, "AAY"), (6, "Y"), (10, "Y"), (14, "A"), (18, "Y"),
    (28, "A"), (32, "Y"), (36, "A"),
    (52, "YY"), (56, "A"), (60, "A"),
    (76, "Y"), (80, "Y"), (84, "Y"), (88, "Y"), (92, "Y"), (96, "Y"), (100, "Y"),
]
# Clifford CNOTs of the Toffoli network between data qubits a=0, b=1, c=2.
CLIFFORD_CNOTS = [(8, 1, 2), (16, 0, 2), (24, 1, 2), (40, 0, 2), (48, 0, 1), (68, 0, 1)]
# Hadamard teleports on the target qubit c.
HADAMARDS = [(44, 2), (64, 2)]
# Timesteps an old wire survives after its teleport CNOT before being measured.
HOLD = 11


def build():
    lifetimes = []  # [init_t, basis, ops]
    current = {}

    def new_lifetime(t, basis):
        lifetimes.append({"init": t, "basis": basis, "ops": [(t, "init", basis)]})
        return len(lifetimes) - 1

    for q in range(3):
        current[q] = new_lifetime(0, "0")

    actions = []
    rr = 0
    for t, bases in MAGIC_EVENTS:
        for i, b in enumerate(bases):
            actions.append((t, "teleport", rr % 3, b, t + 1 + i, "Z"))
            rr += 1
    for t, q in HADAMARDS:
        actions.append((t, "teleport", q, "+", t + 1, "X"))
    for t, c, tg in CLIFFORD_CNOTS:
        actions.append((t, "cnot", c, tg))
    actions.sort(key=lambda a: (a[0], a[2]))

    cnot_times = set()
    last_t = 0
    for a in actions:
        if a[1] == "cnot":
            t, _, c, tg = a
            assert t not in cnot_times
            cnot_times.add(t)
            lifetimes[current[c]]["ops"].append((t, "cnot_c", current[tg]))
            lifetimes[current[tg]]["ops"].append((t, "cnot_t", current[c]))
            last_t = max(last_t, t)
        else:
            t, _, q, basis, tc, meas = a
            assert tc not in cnot_times
            cnot_times.add(tc)
            old = current[q]
            new = new_lifetime(t, basis)
            lifetimes[old]["ops"].append((tc, "cnot_c", new))
            lifetimes[new]["ops"].append((tc, "cnot_t", old))
            lifetimes[old]["ops"].append((tc + HOLD, "measure", meas))
            current[q] = new
            last_t = max(last_t, tc + HOLD)
    for q in range(3):
        lifetimes[current[q]]["ops"].append((last_t + 1, "measure", "Z"))
    return lifetimes


def lifetime_span(lt):
    ts = [op[0] for op in lt["ops"]]
    return min(ts), max(ts)


def first_fit(lifetimes):
    order = sorted(range(len(lifetimes)), key=lambda i: (lifetime_span(lifetimes[i])[0], i))
    wire_end = []
    assign = {}
    for i in order:
        lo, hi = lifetime_span(lifetimes[i])
        for w, end in enumerate(wire_end):
            if end < lo:
                assign[i] = w
                wire_end[w] = hi
                break
        else:
            assign[i] = len(wire_end)
            wire_end.append(hi)
    return assign, len(wire_end)


def render(lifetimes, wire_of, title):
    lines = []
    for i, lt in enumerate(lifetimes):
        for op in lt["ops"]:
            t, kind, arg = op
            if kind == "init":
                lines.append((t, wire_of[i], f"@{t} init {wire_of[i]} {arg}"))
            elif kind == "measure":
                lines.append((t, wire_of[i], f"@{t} measure {wire_of[i]} {arg}"))
            elif kind == "cnot_c":
                lines.append((t, wire_of[i], f"@{t} cnot {wire_of[i]} {wire_of[arg]}"))
    lines.sort(key=lambda x: (x[0], x[1]))
    header = [f"# {title}", "# generated by tools/gen_toffoli_fixture.py"]
    return "\n".join(header + [l[2] for l in lines]) + "\n"


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out.mkdir(parents=True, exist_ok=True)
    lts = build()
    identity = {i: i for i in range(len(lts))}
    assign, wires = first_fit(lts)
    (out / "toffoli_unoptimized.icm").write_text(
        render(lts, identity, f"ICM Toffoli, one wire per qubit ({len(lts)} wires)"))
    (out / "toffoli.icm").write_text(
        render(lts, assign, f"ICM Toffoli after wire recycling ({wires} wires)"))
    print(f"lifetimes={len(lts)} recycled_wires={wires}")


if __name__ == "__main__":
    main()
