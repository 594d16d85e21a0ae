"""GidNET qubit-reuse search.

Repeatedly grows reuse sequences on a private copy of the candidate matrix:
pick a random available qubit, extend it greedily through the candidate qubit
whose common-neighbor set is largest (ties broken by reuse score, then
randomly), commit the chosen edges to the matrix, and repeat until no edges
remain. The best iteration (fewest sequences) wins. The whole search is a
pure function of (circuit, seed, iterations, tie_break).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .circuit import Circuit, build_dag
from .matrices import (
    CandidateMatrix,
    available_qubits,
    biadjacency,
    candidate_from_biadjacency,
    update_cmatrix,
)

ReuseSequence = list  # ordered list of distinct qubit ints


@dataclass
class ReuseSolution:
    """Partition of the logical qubits into ordered reuse sequences."""

    sequences: list[list[int]]
    iterations: int | None = None
    seed: int | None = None

    @property
    def width(self) -> int:
        return len(self.sequences)

    def to_json_dict(self) -> dict:
        return {
            "width": self.width,
            "sequences": [list(s) for s in self.sequences],
            "iterations": self.iterations,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class SearchConfig:
    iterations: int | str = "auto"
    seed: int = 0
    tie_break: str = "random"  # or "lowest-index"

    def __post_init__(self):
        if self.iterations != "auto" and (not isinstance(self.iterations, int) or self.iterations < 1):
            raise ValueError("iterations must be a positive int or 'auto'")
        if self.tie_break not in ("random", "lowest-index"):
            raise ValueError("tie_break must be 'random' or 'lowest-index'")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    def resolve_iterations(self, n: int) -> int:
        if self.iterations == "auto":
            return max(1, math.ceil(math.log2(n))) if n > 1 else 1
        return self.iterations


@dataclass(frozen=True)
class NeighborTable:
    """Common-neighbor sets of each candidate qubit, with the potential set they came from."""

    potential: frozenset
    neighbors: dict

    def max_set(self) -> list[int]:
        """Candidates whose common-neighbor set has the maximum size, ascending."""
        s = max((len(v) for v in self.neighbors.values()), default=0)
        return sorted(j for j, v in self.neighbors.items() if len(v) == s)


def potential_reuse(c: CandidateMatrix, q_i: int) -> set[int]:
    """Qubits that can start a reuse sequence after q_i: the set entries of row t_i."""
    return {int(j) for j in np.flatnonzero(c.c[q_i])}


def common_neighbors(c: CandidateMatrix, f: list[int], q_x: int) -> set[int]:
    """Intersection of the potential sets of every qubit in f plus q_x."""
    if q_x in f:
        raise ValueError(f"q{q_x} already in the sequence")
    out = potential_reuse(c, q_x)
    for q in f:
        out &= potential_reuse(c, q)
    return out


def neighbor_table(c: CandidateMatrix, f: list[int], potential: set[int]) -> NeighborTable:
    return NeighborTable(
        frozenset(potential),
        {q: frozenset(common_neighbors(c, f, q)) for q in sorted(potential)},
    )


def reuse_score(table: NeighborTable, q_j: int) -> int:
    """Sum of pairwise common-neighbor overlaps between q_j and the other maximal candidates."""
    m = table.max_set()
    if q_j not in m:
        raise ValueError(f"q{q_j} is not in the maximal common-neighbor set")
    n_j = table.neighbors[q_j]
    return sum(len(n_j & table.neighbors[q_k]) for q_k in m if q_k != q_j)


def _pick(items: list[int], rng, tie_break: str) -> int:
    # items ascending; a single candidate never consumes randomness
    if len(items) == 1 or tie_break == "lowest-index":
        return items[0]
    return items[int(rng.integers(len(items)))]


def best_reuse_sequence(
    c: CandidateMatrix, q_i: int, rng, tie_break: str = "random"
) -> tuple[list[int], CandidateMatrix]:
    """Greedily extend a reuse sequence starting at q_i; commit its edges to ``c``.

    While candidates remain, each candidate's common-neighbor set is the
    intersection of the running potential mask with its own row. If all are
    empty one candidate is appended at random and the sequence ends; otherwise
    the largest set wins, ties broken by reuse score, then at random. The
    matrix is updated once per consecutive pair afterwards.
    """
    m = c.c
    f = [q_i]
    pot = m[q_i].copy()  # running intersection of potential sets over f
    while pot.any():
        cand = np.flatnonzero(pot)
        neigh = m[cand] & pot  # row k: common neighbors of cand[k]
        sizes = neigh.sum(axis=1)
        if not sizes.any():
            chosen = _pick([int(q) for q in cand], rng, tie_break)
            f.append(chosen)
            break
        s = sizes.max()
        maximal = np.flatnonzero(sizes == s)
        if len(maximal) == 1:
            k = int(maximal[0])
        else:
            rows = neigh[maximal].astype(np.int32)
            overlaps = rows @ rows.T
            scores = overlaps.sum(axis=1) - np.diag(overlaps)
            best = [int(i) for i in maximal[np.flatnonzero(scores == scores.max())]]
            k = _pick(best, rng, tie_break)
        f.append(int(cand[k]))
        pot = neigh[k].copy()
    for a, b in zip(f, f[1:]):
        update_cmatrix(c, a, b)
    return f, c


def merge_subsets(sequences: list[list[int]]) -> list[list[int]]:
    """Merge sequences sharing endpoints into maximal chains of the successor map.

    Requires every qubit to have at most one successor and one predecessor
    (guaranteed by the row/column zeroing of the matrix update); raises on a
    violation or on a cycle in the successor map.
    """
    succ: dict[int, int] = {}
    pred: dict[int, int] = {}
    for seq in sequences:
        for a, b in zip(seq, seq[1:]):
            if succ.get(a, b) != b:
                raise ValueError(f"q{a} has two successors")
            if pred.get(b, a) != a:
                raise ValueError(f"q{b} has two predecessors")
            succ[a] = b
            pred[b] = a
    chains: list[list[int]] = []
    emitted: set[int] = set()
    for seq in sequences:
        for q in seq:
            if q in emitted or q in pred:
                continue
            chain = [q]
            while chain[-1] in succ:
                nxt = succ[chain[-1]]
                if nxt in emitted or nxt == q:
                    raise ValueError("cycle in successor map")
                chain.append(nxt)
            emitted.update(chain)
            chains.append(chain)
    if len(emitted) != len({q for seq in sequences for q in seq}):
        raise ValueError("cycle in successor map")
    return chains


def finalize_reuse(sequences: list[list[int]], n: int) -> ReuseSolution:
    """Append a singleton sequence for every qubit absent from the inputs."""
    seen: set[int] = set()
    for seq in sequences:
        for q in seq:
            if q in seen:
                raise ValueError(f"duplicate qubit q{q} across sequences")
            seen.add(q)
    out = [list(seq) for seq in sequences]
    out.extend([q] for q in range(n) if q not in seen)
    return ReuseSolution(out)


def _run_iteration(c0: CandidateMatrix, n: int, stream, tie_break: str) -> ReuseSolution:
    rng = np.random.default_rng(stream)
    c = c0.copy()
    partial: list[list[int]] = []
    while c.any_edges():
        avail = sorted(available_qubits(c))
        q_i = _pick(avail, rng, tie_break)
        f, c = best_reuse_sequence(c, q_i, rng, tie_break)
        if len(f) > 1:
            partial.append(f)
    return finalize_reuse(merge_subsets(partial), n)


def gidnet(circuit: Circuit, config: SearchConfig | None = None, threads: int = 1) -> ReuseSolution:
    """Search for a minimal-width reuse partition of a static circuit.

    Returns the all-singletons solution immediately when the candidate matrix
    has no edges (irreducible circuit). Otherwise runs independent iterations,
    each on a fresh matrix copy with its own RNG stream, and keeps the
    solution with the fewest sequences (first found wins ties). Deterministic
    for a fixed (circuit, seed, iterations, tie_break).
    """
    config = config or SearchConfig()
    n = circuit.num_qubits
    c0 = candidate_from_biadjacency(biadjacency(build_dag(circuit)))
    iterations = config.resolve_iterations(n)
    singletons = ReuseSolution([[q] for q in range(n)], iterations, config.seed)
    if not c0.any_edges():
        return singletons
    streams = np.random.SeedSequence(config.seed).spawn(iterations)
    best = singletons
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(
                lambda s: _run_iteration(c0, n, s, config.tie_break), streams
            ))
        for sol in results:
            if sol.width < best.width:
                best = sol
    else:
        for stream in streams:
            sol = _run_iteration(c0, n, stream, config.tie_break)
            if sol.width < best.width:
                best = sol
            if best.width == 1:
                break  # provable lower bound once any edge exists
    best.iterations = iterations
    best.seed = config.seed
    return best
