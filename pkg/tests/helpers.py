"""Shared fixtures and independent oracles for the test suite."""

from __future__ import annotations

import numpy as np
import networkx as nx

from qreuse.circuit import Circuit, Instruction, build_dag
from qreuse.gidnet import finalize_reuse, merge_subsets
from qreuse.matrices import biadjacency, candidate_from_biadjacency, update_cmatrix

FIG_EXAMPLE_TEXT = """\
OPENQASM 2.0;
qreg q[5];
creg c[5];
cx q[0],q[4];
cx q[2],q[4];
cx q[3],q[4];
barrier;
measure q[0] -> c[0];
measure q[1] -> c[1];
measure q[2] -> c[2];
measure q[3] -> c[3];
measure q[4] -> c[4];
"""

# 5-qubit worked example: root-by-terminal reachability and its complement-transpose
EXPECTED_B = [
    [1, 0, 1, 1, 1],
    [0, 1, 0, 0, 0],
    [0, 0, 1, 1, 1],
    [0, 0, 0, 1, 1],
    [1, 0, 1, 1, 1],
]
EXPECTED_C = [
    [0, 1, 1, 1, 0],
    [1, 0, 1, 1, 1],
    [0, 1, 0, 1, 0],
    [0, 1, 0, 0, 0],
    [0, 1, 0, 0, 0],
]


def fig_example() -> Circuit:
    ins = [
        Instruction.gate("cx", (0, 4)),
        Instruction.gate("cx", (2, 4)),
        Instruction.gate("cx", (3, 4)),
        Instruction.barrier(),
    ] + [Instruction.measure(q, q) for q in range(5)]
    return Circuit(5, 5, ins)


def irreducible_circuit(n: int) -> Circuit:
    """Two cx fan-in passes through wire 0: every root reaches every terminal."""
    ins = []
    for _ in range(2):
        ins += [Instruction.gate("cx", (i, 0)) for i in range(1, n)]
    ins += [Instruction.measure(q, q) for q in range(n)]
    return Circuit(n, n, ins)


def gate_free(n: int) -> Circuit:
    return Circuit(n, n, [Instruction.measure(q, q) for q in range(n)])


GATE_POOL = ["h", "x", "y", "z", "s", "t", "sx", "sy", "rx", "rz", "cx", "cz"]


def random_circuit(rng: np.random.Generator, n: int, n_gates: int, measure_all: bool = True) -> Circuit:
    ins = []
    for _ in range(n_gates):
        name = GATE_POOL[int(rng.integers(len(GATE_POOL)))]
        if name in ("cx", "cz"):
            if n < 2:
                continue
            a, b = rng.choice(n, size=2, replace=False)
            ins.append(Instruction.gate(name, (int(a), int(b))))
        elif name in ("rx", "rz"):
            q = int(rng.integers(n))
            ins.append(Instruction.gate(name, (q,), (float(rng.uniform(0, 2 * np.pi)),)))
        else:
            ins.append(Instruction.gate(name, (int(rng.integers(n)),)))
    if measure_all:
        ins += [Instruction.measure(q, q) for q in range(n)]
    return Circuit(n, n if measure_all else 0, ins)


def candidate_matrix(circuit: Circuit):
    return candidate_from_biadjacency(biadjacency(build_dag(circuit)))


# ---------------------------------------------------------------------------
# Independent oracles
# ---------------------------------------------------------------------------

def chain_builder_edges(c: Circuit) -> list:
    """Naive DAG construction: one chain per qubit, edges unioned as a multiset."""
    edges = []
    for q in range(c.num_qubits):
        chain = [("r", q)]
        chain += [
            ("op", i)
            for i, ins in enumerate(c.instructions)
            if ins.kind == "gate" and q in ins.qubits
        ]
        chain.append(("t", q))
        edges.extend(zip(chain, chain[1:]))
    return sorted(edges)


def closure_biadjacency(c: Circuit) -> np.ndarray:
    """Root-to-terminal reachability via repeated boolean matrix squaring."""
    dag = build_dag(c)
    verts = dag.order
    idx = {v: i for i, v in enumerate(verts)}
    m = len(verts)
    adj = np.zeros((m, m), dtype=bool)
    for u, vs in dag.successors.items():
        for v in vs:
            adj[idx[u], idx[v]] = True
    closure = adj | np.eye(m, dtype=bool)
    while True:
        nxt = closure | (closure @ closure)
        if np.array_equal(nxt, closure):
            break
        closure = nxt
    n = c.num_qubits
    b = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(n):
            b[i, j] = closure[idx[("r", i)], idx[("t", j)]]
    return b


def augmented_is_acyclic(circuit: Circuit, reuse_edges: list[tuple[int, int]]) -> bool:
    """networkx acyclicity of the instruction-level DAG plus terminal-to-root edges."""
    dag = build_dag(circuit)
    g = nx.DiGraph()
    g.add_nodes_from(dag.order)
    g.add_edges_from(dag.edges())
    for a, b in reuse_edges:
        g.add_edge(("t", a), ("r", b))
    return nx.is_directed_acyclic_graph(g)


def pairwise_merge(seqs: list[list[int]]) -> list[list[int]]:
    """Fixpoint endpoint merging, as a cross-check for the chain extraction."""
    seqs = [list(s) for s in seqs]
    changed = True
    while changed:
        changed = False
        for i in range(len(seqs)):
            for j in range(len(seqs)):
                if i != j and seqs[i] and seqs[j] and seqs[i][-1] == seqs[j][0]:
                    seqs[i] = seqs[i] + seqs[j][1:]
                    seqs[j] = []
                    changed = True
    return [s for s in seqs if s]


def random_valid_solution(circuit: Circuit, rng: np.random.Generator):
    """Random legal reuse solution built by a random edge-selection walk."""
    cm = candidate_matrix(circuit)
    pairs = []
    while cm.c.any():
        if pairs and rng.random() < 0.25:
            break
        choices = np.argwhere(cm.c)
        a, b = choices[int(rng.integers(len(choices)))]
        update_cmatrix(cm, int(a), int(b))
        pairs.append([int(a), int(b)])
    return finalize_reuse(merge_subsets(pairs), circuit.num_qubits)


class ScriptedRNG:
    """Replays a fixed choice script; records branch factors for enumeration."""

    def __init__(self, script):
        self.script = list(script)
        self.pos = 0
        self.trace = []  # (value used, branch factor)

    def integers(self, high):
        if self.pos < len(self.script):
            v = self.script[self.pos]
        else:
            v = 0
            self.script.append(0)
        assert v < high
        self.trace.append((v, int(high)))
        self.pos += 1
        return v


def enumerate_tie_breaks(run):
    """Run ``run(rng)`` once per distinct tie-break path, odometer-style."""
    results = []
    script: list[int] = []
    while True:
        rng = ScriptedRNG(script)
        results.append(run(rng))
        for p in range(len(rng.trace) - 1, -1, -1):
            value, factor = rng.trace[p]
            if value + 1 < factor:
                script = [v for v, _ in rng.trace[:p]] + [value + 1]
                break
        else:
            return results
