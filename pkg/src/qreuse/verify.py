"""Desk-scale correctness oracles.

``simulate_distribution`` computes the exact joint outcome distribution of a
circuit by branching the statevector at every measurement (both outcomes with
their Born probabilities; reset maps the measured wire back to |0>).
``brute_force_min_width`` exhaustively searches all valid reuse-edge sets for
the true minimum width. ``equivalence_check`` compares two circuits'
distributions bit-by-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import Circuit
from .matrices import biadjacency
from .circuit import build_dag
from .rewrite import DynamicCircuit

MAX_WIRES = 12
MAX_MEASURED_CLBITS = 20
MAX_BRUTE_FORCE_QUBITS = 7
_PRUNE = 1e-24  # branch probability below double-precision relevance


class SimulationSizeError(ValueError):
    pass


def _checked_unitary(u: np.ndarray) -> np.ndarray:
    dev = np.abs(u.conj().T @ u - np.eye(u.shape[0])).max()
    if dev > 1e-12:
        raise AssertionError(f"gate matrix not unitary (deviation {dev:.3e})")
    u.flags.writeable = False
    return u


_I2 = np.eye(2, dtype=complex)
_FIXED_1Q = {
    "h": _checked_unitary(np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)),
    "x": _checked_unitary(np.array([[0, 1], [1, 0]], dtype=complex)),
    "y": _checked_unitary(np.array([[0, -1j], [1j, 0]], dtype=complex)),
    "z": _checked_unitary(np.array([[1, 0], [0, -1]], dtype=complex)),
    "s": _checked_unitary(np.array([[1, 0], [0, 1j]], dtype=complex)),
    "t": _checked_unitary(np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex)),
    "sx": _checked_unitary(np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex) / 2),
    "sy": _checked_unitary(np.array([[1 + 1j, -1 - 1j], [1 + 1j, 1 + 1j]], dtype=complex) / 2),
}
_FIXED_2Q = {
    "cx": _checked_unitary(np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    )),
    "cz": _checked_unitary(np.diag([1, 1, 1, -1]).astype(complex)),
}


def gate_matrix(name: str, params: tuple[float, ...] = ()) -> np.ndarray:
    """Unitary for a gate mnemonic; 2x2 for single-qubit gates, 4x4 for cx/cz."""
    if name in _FIXED_1Q:
        return _FIXED_1Q[name]
    if name in _FIXED_2Q:
        return _FIXED_2Q[name]
    if name == "rx":
        (theta,) = params
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return _checked_unitary(np.array([[c, -1j * s], [-1j * s, c]], dtype=complex))
    if name == "rz":
        (theta,) = params
        return _checked_unitary(np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)]))
    raise ValueError(f"no matrix for gate '{name}'")


@dataclass
class StateVector:
    """Amplitudes over the active wires plus the branch's probability weight."""

    amplitudes: np.ndarray
    weight: float


@dataclass(frozen=True)
class OutcomeDistribution:
    """Exact probabilities keyed by bitstring over the measured classical bits.

    ``clbits`` lists the measured bit indices ascending; key position p holds
    the outcome of clbits[p].
    """

    probs: dict
    clbits: tuple[int, ...]
    branches: int


def _apply_1q(psi: np.ndarray, u: np.ndarray, w: int, k: int) -> np.ndarray:
    t = np.moveaxis(psi.reshape((2,) * k), w, 0)
    t = np.tensordot(u, t, axes=([1], [0]))
    return np.moveaxis(t, 0, w).reshape(-1)


def _apply_2q(psi: np.ndarray, u: np.ndarray, w1: int, w2: int, k: int) -> np.ndarray:
    t = np.moveaxis(psi.reshape((2,) * k), (w1, w2), (0, 1))
    t = np.tensordot(u.reshape(2, 2, 2, 2), t, axes=([2, 3], [0, 1]))
    return np.moveaxis(t, (0, 1), (w1, w2)).reshape(-1)


def _collapse(psi: np.ndarray, w: int, k: int):
    """Both measurement outcomes of wire w with probabilities; renormalized states."""
    t = np.moveaxis(psi.reshape((2,) * k), w, 0)
    out = []
    for outcome in (0, 1):
        p = float(np.sum(np.abs(t[outcome]) ** 2))
        if p <= _PRUNE:
            continue
        proj = np.zeros_like(t)
        proj[outcome] = t[outcome] / math.sqrt(p)
        out.append((outcome, p, np.moveaxis(proj, 0, w).reshape(-1)))
    return out


def simulate_distribution(circuit: Circuit | DynamicCircuit) -> OutcomeDistribution:
    """Exact outcome distribution via depth-first branching at each measurement."""
    c = circuit.circuit if isinstance(circuit, DynamicCircuit) else circuit
    k = c.num_qubits
    if k > MAX_WIRES:
        raise SimulationSizeError(f"{k} wires exceeds the {MAX_WIRES}-wire simulation cap")
    measured = sorted({ins.clbit for ins in c.instructions if ins.kind == "measure"})
    if len(measured) > MAX_MEASURED_CLBITS:
        raise SimulationSizeError(
            f"{len(measured)} measured clbits exceeds the {MAX_MEASURED_CLBITS}-bit cap"
        )
    probs: dict[str, float] = {}
    leaves = 0

    init = np.zeros(2**k, dtype=complex)
    init[0] = 1.0

    def run(idx: int, psi: np.ndarray, weight: float, bits: dict[int, int]) -> None:
        nonlocal leaves
        for i in range(idx, len(c.instructions)):
            ins = c.instructions[i]
            if ins.kind == "gate":
                u = gate_matrix(ins.name, ins.params)
                if len(ins.qubits) == 1:
                    psi = _apply_1q(psi, u, ins.qubits[0], k)
                else:
                    psi = _apply_2q(psi, u, ins.qubits[0], ins.qubits[1], k)
            elif ins.kind == "measure":
                for outcome, p, branch in _collapse(psi, ins.qubits[0], k):
                    run(i + 1, branch, weight * p, {**bits, ins.clbit: outcome})
                return
            elif ins.kind == "reset":
                w = ins.qubits[0]
                for outcome, p, branch in _collapse(psi, w, k):
                    if outcome == 1:
                        branch = _apply_1q(branch, _FIXED_1Q["x"], w, k)
                    run(i + 1, branch, weight * p, bits)
                return
            # barrier: no effect
        key = "".join(str(bits[b]) for b in measured)
        probs[key] = probs.get(key, 0.0) + weight
        leaves += 1

    run(0, init, 1.0, {})
    total = sum(probs.values())
    if abs(total - 1.0) > 1e-9:
        raise RuntimeError(f"branch weights sum to {total!r}, not 1")
    return OutcomeDistribution(probs, tuple(measured), leaves)


@dataclass(frozen=True)
class EquivalenceReport:
    passed: bool
    tvd: float
    branches: int


def equivalence_check(
    static: Circuit, dynamic: Circuit | DynamicCircuit, tol: float = 1e-9
) -> EquivalenceReport:
    """Total-variation comparison of the two circuits' outcome distributions."""
    d_static = simulate_distribution(static)
    d_dynamic = simulate_distribution(dynamic)
    if d_static.clbits != d_dynamic.clbits:
        raise ValueError(
            f"measured clbit sets differ: {d_static.clbits} vs {d_dynamic.clbits}"
        )
    keys = set(d_static.probs) | set(d_dynamic.probs)
    tvd = 0.5 * sum(
        abs(d_static.probs.get(x, 0.0) - d_dynamic.probs.get(x, 0.0)) for x in keys
    )
    return EquivalenceReport(tvd <= tol, tvd, d_static.branches + d_dynamic.branches)


def brute_force_min_width(c: Circuit) -> int:
    """Exact minimum width over all valid reuse solutions (n <= 7).

    Backtracks over the successor root of each terminal (or none), keeping a
    reachability closure of the augmented graph so each candidate edge is a
    constant-time cycle check; prunes branches that cannot beat the best.
    """
    n = c.num_qubits
    if n > MAX_BRUTE_FORCE_QUBITS:
        raise SimulationSizeError(
            f"{n} qubits exceeds the {MAX_BRUTE_FORCE_QUBITS}-qubit brute-force cap"
        )
    reach0 = biadjacency(build_dag(c)).b  # reach[i][j]: root i -> terminal j
    best = n

    def search(t: int, reach: np.ndarray, used_roots: int, edges: int) -> None:
        nonlocal best
        if t - edges >= best:
            return  # terminals already left unchained lower-bound the width
        if t == n:
            best = min(best, n - edges)
            return
        for r in range(n):
            if used_roots >> r & 1 or reach[r, t]:
                continue
            aug = reach | np.logical_and.outer(reach[:, t], reach[r, :])
            search(t + 1, aug, used_roots | (1 << r), edges + 1)
        search(t + 1, reach, used_roots, edges)

    search(0, reach0.copy(), 0, 0)
    return best
