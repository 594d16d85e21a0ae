"""Convert a static circuit plus a reuse solution into an executable dynamic circuit.

Reuse edges (terminal of one qubit to root of the next in its sequence) are
added to the circuit DAG, which is then topologically sorted; instructions are
emitted in sorted order with logical qubits relabeled to virtual wires. Each
segment ends with a measure into the logical qubit's original classical bit,
followed by a reset when another segment follows on the same wire.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

from .circuit import Circuit, Instruction, build_dag, serialize_circuit
from .gidnet import ReuseSolution
from .matrices import biadjacency, candidate_from_biadjacency


@dataclass(frozen=True)
class VirtualQubit:
    index: int
    segments: tuple[int, ...]  # logical qubits, in reuse-sequence order


@dataclass
class DynamicCircuit:
    circuit: Circuit
    mapping: list[VirtualQubit]
    clbit_map: dict[int, int]  # logical qubit -> classical bit

    @property
    def width(self) -> int:
        return len(self.mapping)

    def serialize(self) -> str:
        return serialize_circuit(self.circuit, [list(v.segments) for v in self.mapping])


@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    violation: str | None = None


def validate_solution(c: Circuit, u: ReuseSolution) -> ValidityReport:
    """Check partition, per-pair candidate legality, and augmented-DAG acyclicity."""
    n = c.num_qubits
    seen: set[int] = set()
    for seq in u.sequences:
        for q in seq:
            if not 0 <= q < n:
                return ValidityReport(False, f"partition: q{q} out of range [0, {n})")
            if q in seen:
                return ValidityReport(False, f"partition: q{q} appears more than once")
            seen.add(q)
    if len(seen) != n:
        missing = sorted(set(range(n)) - seen)
        return ValidityReport(False, f"partition: q{missing[0]} missing")
    cm = candidate_from_biadjacency(biadjacency(build_dag(c)))
    for seq in u.sequences:
        for a, b in zip(seq, seq[1:]):
            if not cm.c[a, b]:
                return ValidityReport(False, f"legality: edge (t{a}, r{b}) not in candidate matrix")
    if not _augmented_sort(c, u)[1]:
        return ValidityReport(False, "acyclicity: augmented DAG has a cycle")
    return ValidityReport(True)


def _augmented_sort(c: Circuit, u: ReuseSolution):
    """Kahn's sort of the DAG plus reuse edges, ready queue keyed by
    (virtual qubit index, original instruction index). Returns (order, complete)."""
    dag = build_dag(c)
    successors = {v: list(ws) for v, ws in dag.successors.items()}
    for seq in u.sequences:
        for a, b in zip(seq, seq[1:]):
            successors[("t", a)].append(("r", b))
    indeg = {v: 0 for v in successors}
    for vs in successors.values():
        for v in vs:
            indeg[v] += 1

    virt = {q: i for i, seq in enumerate(u.sequences) for q in seq}
    measure_idx = {
        ins.qubits[0]: i for i, ins in enumerate(c.instructions) if ins.kind == "measure"
    }
    end = len(c.instructions)

    def key(v):
        if v[0] == "r":
            return (virt[v[1]], -1, 0, v[1])
        if v[0] == "op":
            ins = c.instructions[v[1]]
            return (min(virt[q] for q in ins.qubits), v[1], 1, v[1])
        return (virt[v[1]], measure_idx.get(v[1], end), 2, v[1])

    ready = [(key(v), v) for v, d in indeg.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        _, v = heapq.heappop(ready)
        order.append(v)
        for w in successors[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(ready, (key(w), w))
    return order, len(order) == len(successors)


def rewrite_dynamic(c: Circuit, u: ReuseSolution) -> DynamicCircuit:
    """Emit the width-reduced dynamic circuit realizing solution ``u`` on ``c``.

    Raises ValueError if the solution is not a partition of the circuit's
    qubits or its reuse edges induce a cycle. Barriers are dropped (they carry
    no dependency). A logical qubit the static circuit never measures gets no
    measure at its segment end, only the reset needed before the next segment.
    """
    n = c.num_qubits
    seen = [q for seq in u.sequences for q in seq]
    if sorted(seen) != list(range(n)):
        raise ValueError("solution is not a partition of the circuit's qubits")
    order, complete = _augmented_sort(c, u)
    if not complete:
        raise ValueError("reuse solution induces a cycle in the augmented DAG")

    virt = {q: i for i, seq in enumerate(u.sequences) for q in seq}
    last_seg = {seq[-1] for seq in u.sequences}
    clbit_map = c.measure_map()

    out: list[Instruction] = []
    for v in order:
        if v[0] == "op":
            ins = c.instructions[v[1]]
            out.append(Instruction.gate(ins.name, tuple(virt[q] for q in ins.qubits), ins.params))
        elif v[0] == "t":
            q = v[1]
            if q in clbit_map:
                out.append(Instruction.measure(virt[q], clbit_map[q]))
            if q not in last_seg:
                out.append(Instruction.reset(virt[q]))
    width = len(u.sequences)
    dyn = Circuit(width, c.num_clbits, out)
    mapping = [VirtualQubit(i, tuple(seq)) for i, seq in enumerate(u.sequences)]
    return DynamicCircuit(dyn, mapping, dict(clbit_map))
