"""Seeded benchmark-circuit generators.

Two families: random-circuit-sampling style lattice circuits (a Hadamard
layer, then cycles alternating a CZ pattern with random single-qubit gates on
the untouched qubits, then measure-all), and MaxCut QAOA circuits on random
unweighted 3-regular graphs.

The CZ schedule cycles through 8 fixed patterns that partition the lattice
edges: pattern k alternates horizontal/vertical orientation; horizontal edges
(r,c)-(r,c+1) are grouped by (c%2, r%2) and vertical edges (r,c)-(r+1,c) by
(r%2, c%2), in the order H00, V00, H10, V10, H01, V01, H11, V11. Cycle i uses
pattern i mod 8.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, Instruction

SINGLE_QUBIT_SET = ("sx", "sy", "t")
DEFAULT_GAMMA = 0.7
DEFAULT_BETA = 0.3


@dataclass(frozen=True)
class GrcsSpec:
    rows: int
    cols: int
    depth: int
    seed: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1 or self.depth < 1:
            raise ValueError("rows, cols and depth must be positive")


@dataclass(frozen=True)
class U3RGraph:
    """Simple 3-regular graph; edges canonical as sorted (low, high) pairs."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        deg = [0] * self.n
        for a, b in self.edges:
            if a == b:
                raise ValueError("self-loop")
            deg[a] += 1
            deg[b] += 1
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("parallel edge")
        if any(d != 3 for d in deg):
            raise ValueError("graph is not 3-regular")


@dataclass(frozen=True)
class QaoaSpec:
    graph: U3RGraph
    p: int
    betas: tuple[float, ...] = ()
    gammas: tuple[float, ...] = ()
    seed: int = 0

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("p must be positive")
        object.__setattr__(self, "betas", self.betas or (DEFAULT_BETA,) * self.p)
        object.__setattr__(self, "gammas", self.gammas or (DEFAULT_GAMMA,) * self.p)
        if len(self.betas) != self.p or len(self.gammas) != self.p:
            raise ValueError("betas and gammas must have length p")


def cz_patterns(rows: int, cols: int) -> list[list[tuple[int, int]]]:
    """The 8 CZ edge groups of a rows x cols lattice (qubit id = r*cols + c)."""
    horiz = {(cp, rp): [] for cp in (0, 1) for rp in (0, 1)}
    vert = {(rp, cp): [] for rp in (0, 1) for cp in (0, 1)}
    for r in range(rows):
        for c in range(cols - 1):
            horiz[(c % 2, r % 2)].append((r * cols + c, r * cols + c + 1))
    for r in range(rows - 1):
        for c in range(cols):
            vert[(r % 2, c % 2)].append((r * cols + c, (r + 1) * cols + c))
    order = [(0, 0), (1, 0), (0, 1), (1, 1)]
    patterns = []
    for parity in order:
        patterns.append(sorted(horiz[parity]))
        patterns.append(sorted(vert[parity]))
    return patterns


def gen_grcs(spec: GrcsSpec) -> Circuit:
    """Lattice random circuit: H layer, `depth` CZ/single-qubit cycles, measure-all."""
    n = spec.rows * spec.cols
    rng = np.random.default_rng(spec.seed)
    patterns = cz_patterns(spec.rows, spec.cols)
    instructions = [Instruction.gate("h", (q,)) for q in range(n)]
    last_1q: dict[int, str] = {}
    for cycle in range(spec.depth):
        pattern = patterns[cycle % 8]
        busy = {q for edge in pattern for q in edge}
        for a, b in pattern:
            instructions.append(Instruction.gate("cz", (a, b)))
        for q in range(n):
            if q in busy:
                continue
            choices = [g for g in SINGLE_QUBIT_SET if g != last_1q.get(q)]
            gate = choices[int(rng.integers(len(choices)))]
            instructions.append(Instruction.gate(gate, (q,)))
            last_1q[q] = gate
    instructions.extend(Instruction.measure(q, q) for q in range(n))
    return Circuit(n, n, instructions)


def gen_u3r(n: int, seed: int) -> U3RGraph:
    """Uniform random simple 3-regular graph via configuration-model rejection sampling."""
    if n < 4 or n % 2:
        raise ValueError("3-regular graphs need an even vertex count >= 4")
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), 3)
    for _ in range(100_000):
        rng.shuffle(stubs)
        pairs = {(min(int(a), int(b)), max(int(a), int(b))) for a, b in stubs.reshape(-1, 2)}
        if len(pairs) == 3 * n // 2 and all(a != b for a, b in pairs):
            return U3RGraph(n, tuple(sorted(pairs)))
    raise RuntimeError("configuration model failed to produce a simple graph")


def gen_qaoa(spec: QaoaSpec) -> Circuit:
    """MaxCut QAOA circuit: H layer, p cost+mixer layers, measure-all."""
    n = spec.graph.n
    instructions = [Instruction.gate("h", (q,)) for q in range(n)]
    for layer in range(spec.p):
        gamma, beta = spec.gammas[layer], spec.betas[layer]
        for i, j in sorted(spec.graph.edges):
            instructions.append(Instruction.gate("cx", (i, j)))
            instructions.append(Instruction.gate("rz", (j,), (2.0 * gamma,)))
            instructions.append(Instruction.gate("cx", (i, j)))
        for q in range(n):
            instructions.append(Instruction.gate("rx", (q,), (2.0 * beta,)))
    instructions.extend(Instruction.measure(q, q) for q in range(n))
    return Circuit(n, n, instructions)
