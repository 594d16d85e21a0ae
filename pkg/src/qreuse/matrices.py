"""Reachability analysis: biadjacency matrix, candidate matrix, and edge-selection updates.

The biadjacency matrix B has B[i][j] = 1 iff terminal j is reachable from root
i in the circuit DAG. The candidate matrix is its complement-transpose: a 1 at
(t_i, r_j) means qubit j may be placed on the same wire immediately after
qubit i is measured. Selecting such an edge updates the matrix so that every
remaining 1 is still a legal, acyclic choice.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import CircuitDag


@dataclass(frozen=True)
class BiadjacencyMatrix:
    """Boolean n x n matrix; rows indexed by roots, columns by terminals."""

    n: int
    b: np.ndarray

    def __post_init__(self):
        self.b.flags.writeable = False


@dataclass
class CandidateMatrix:
    """Boolean n x n matrix; rows indexed by terminals, columns by roots."""

    n: int
    c: np.ndarray

    def copy(self) -> "CandidateMatrix":
        return CandidateMatrix(self.n, self.c.copy())

    def any_edges(self) -> bool:
        return bool(self.c.any())


def biadjacency(dag: CircuitDag) -> BiadjacencyMatrix:
    """Compute B[i][j] = (terminal j reachable from root i).

    Single reverse-topological pass propagating per-vertex bitmasks of
    reachable terminals.
    """
    n = dag.num_qubits
    reach: dict[tuple, int] = {}
    for v in reversed(dag.order):
        mask = 1 << v[1] if v[0] == "t" else 0
        for w in dag.successors[v]:
            mask |= reach[w]
        reach[v] = mask
    b = np.zeros((n, n), dtype=bool)
    for i in range(n):
        mask = reach[("r", i)]
        for j in range(n):
            if (mask >> j) & 1:
                b[i, j] = True
    return BiadjacencyMatrix(n, b)


def candidate_from_biadjacency(b: BiadjacencyMatrix) -> CandidateMatrix:
    """Candidate matrix: all-ones minus B transposed, i.e. c[i][j] = not b[j][i]."""
    return CandidateMatrix(b.n, ~b.b.T)


def update_cmatrix(c: CandidateMatrix, t_i: int, r_j: int) -> CandidateMatrix:
    """Zero out entries invalidated by selecting the reuse edge (t_i, r_j).

    V_r (roots with a 0 in row t_i) and V_t (terminals with a 0 in column r_j)
    are taken from the matrix state before any zeroing; every pair in
    V_t x V_r is then cleared, along with all of row t_i and column r_j.
    Mutates and returns ``c``.
    """
    m = c.c
    if not m[t_i, r_j]:
        raise ValueError(f"illegal reuse edge (t{t_i}, r{r_j}): entry not set")
    v_r = ~m[t_i, :]
    v_t = ~m[:, r_j]
    m &= ~np.logical_and.outer(v_t, v_r)
    m[t_i, :] = False
    m[:, r_j] = False
    return c


def row_sums(c: CandidateMatrix) -> np.ndarray:
    """Per-terminal count of set entries."""
    return c.c.sum(axis=1)


def available_qubits(c: CandidateMatrix) -> set[int]:
    """Qubits whose terminal row still has at least one candidate root."""
    return {int(i) for i in np.flatnonzero(row_sums(c) > 0)}


def format_matrices(b: BiadjacencyMatrix, c: CandidateMatrix) -> str:
    """Debug dump: rows of 0/1 characters, labeled, roots-by-terminals then terminals-by-roots."""
    lines = ["B (rows roots, cols terminals):"]
    for i in range(b.n):
        lines.append(f"r{i} " + "".join("1" if x else "0" for x in b.b[i]))
    lines.append("C (rows terminals, cols roots):")
    for i in range(c.n):
        lines.append(f"t{i} " + "".join("1" if x else "0" for x in c.c[i]))
    return "\n".join(lines) + "\n"
