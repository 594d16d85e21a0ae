"""Simulator, brute-force width, and equivalence oracle tests."""

import math

import numpy as np
import pytest

from qreuse.circuit import Circuit, Instruction
from qreuse.gidnet import ReuseSolution, SearchConfig, gidnet
from qreuse.rewrite import rewrite_dynamic
from qreuse.verify import (
    SimulationSizeError,
    brute_force_min_width,
    equivalence_check,
    gate_matrix,
    simulate_distribution,
)

from helpers import fig_example, gate_free, irreducible_circuit, random_circuit

ALL_GATES = [
    ("h", ()), ("x", ()), ("y", ()), ("z", ()), ("s", ()), ("t", ()),
    ("sx", ()), ("sy", ()), ("rx", (0.37,)), ("rz", (1.91,)), ("cx", ()), ("cz", ()),
]


class TestGateMatrices:
    @pytest.mark.parametrize("name,params", ALL_GATES)
    def test_unitarity(self, name, params):
        u = gate_matrix(name, params)
        assert np.abs(u.conj().T @ u - np.eye(u.shape[0])).max() <= 1e-12

    def test_sx_squares_to_x(self):
        sx = gate_matrix("sx")
        assert np.allclose(sx @ sx, gate_matrix("x"))

    def test_sy_squares_to_y(self):
        sy = gate_matrix("sy")
        assert np.allclose(sy @ sy, gate_matrix("y"))


def dense_reference_distribution(c: Circuit):
    """Independent oracle for measure-at-the-end circuits: explicit index
    arithmetic on a dense statevector, then marginalize |amp|^2."""
    k = c.num_qubits
    psi = np.zeros(2**k, dtype=complex)
    psi[0] = 1.0
    measures = []
    for ins in c.instructions:
        if ins.kind == "measure":
            measures.append((ins.qubits[0], ins.clbit))
            continue
        if ins.kind != "gate":
            continue
        u = gate_matrix(ins.name, ins.params)
        wires = ins.qubits
        m = len(wires)
        new = np.zeros_like(psi)
        for idx in range(2**k):
            if psi[idx] == 0:
                continue
            col = 0
            for pos, w in enumerate(wires):
                col = (col << 1) | ((idx >> (k - 1 - w)) & 1)
            for row in range(2**m):
                out = idx
                for pos, w in enumerate(wires):
                    bit = (row >> (m - 1 - pos)) & 1
                    out = (out & ~(1 << (k - 1 - w))) | (bit << (k - 1 - w))
                new[out] += u[row, col] * psi[idx]
        psi = new
    clbits = sorted(cb for _, cb in measures)
    qubit_of = {cb: q for q, cb in measures}
    dist = {}
    for idx, amp in enumerate(psi):
        p = abs(amp) ** 2
        if p < 1e-18:
            continue
        key = "".join(str((idx >> (k - 1 - qubit_of[cb])) & 1) for cb in clbits)
        dist[key] = dist.get(key, 0.0) + p
    return dist


class TestSimulateDistribution:
    def test_h_then_measure(self):
        c = Circuit(1, 1, [Instruction.gate("h", (0,)), Instruction.measure(0, 0)])
        d = simulate_distribution(c)
        assert d.probs == pytest.approx({"0": 0.5, "1": 0.5})
        assert d.clbits == (0,)

    def test_worked_example_all_zeros(self):
        d = simulate_distribution(fig_example())
        assert d.probs == pytest.approx({"00000": 1.0})

    def test_bell_pair(self):
        c = Circuit(2, 2, [
            Instruction.gate("h", (0,)),
            Instruction.gate("cx", (0, 1)),
            Instruction.measure(0, 0),
            Instruction.measure(1, 1),
        ])
        assert simulate_distribution(c).probs == pytest.approx({"00": 0.5, "11": 0.5})

    def test_mid_circuit_measure_then_hadamard(self):
        c = Circuit(1, 2, [
            Instruction.gate("x", (0,)),
            Instruction.measure(0, 0),
            Instruction.reset(0),
            Instruction.gate("h", (0,)),
            Instruction.measure(0, 1),
        ])
        assert simulate_distribution(c).probs == pytest.approx({"10": 0.5, "11": 0.5})

    def test_reset_without_measure(self):
        c = Circuit(1, 1, [
            Instruction.gate("h", (0,)),
            Instruction.reset(0),
            Instruction.measure(0, 0),
        ])
        assert simulate_distribution(c).probs == pytest.approx({"0": 1.0})

    def test_keys_cover_only_measured_bits(self):
        c = Circuit(3, 3, [
            Instruction.gate("h", (0,)),
            Instruction.gate("x", (2,)),
            Instruction.measure(2, 2),
        ])
        d = simulate_distribution(c)
        assert d.clbits == (2,)
        assert d.probs == pytest.approx({"1": 1.0})

    def test_matches_dense_reference_on_random_circuits(self):
        rng = np.random.default_rng(19)
        for _ in range(30):
            n = int(rng.integers(1, 4))
            c = random_circuit(rng, n, int(rng.integers(1, 9)))
            got = simulate_distribution(c).probs
            want = dense_reference_distribution(c)
            assert set(got) <= set(want) | {k for k in got if got[k] < 1e-12} or set(got) == set(want)
            for key in set(got) | set(want):
                assert got.get(key, 0.0) == pytest.approx(want.get(key, 0.0), abs=1e-12)

    def test_probabilities_sum_to_one(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            c = random_circuit(rng, int(rng.integers(1, 6)), int(rng.integers(0, 10)))
            d = simulate_distribution(c)
            assert sum(d.probs.values()) == pytest.approx(1.0, abs=1e-9)

    def test_wire_cap(self):
        with pytest.raises(SimulationSizeError):
            simulate_distribution(gate_free(13))

    def test_branch_count_reported(self):
        c = Circuit(2, 2, [
            Instruction.gate("h", (0,)),
            Instruction.gate("h", (1,)),
            Instruction.measure(0, 0),
            Instruction.measure(1, 1),
        ])
        assert simulate_distribution(c).branches == 4


class TestEquivalenceCheck:
    def test_identical_circuit(self):
        c = fig_example()
        report = equivalence_check(c, c)
        assert report.passed and report.tvd == 0.0

    def test_worked_example_vs_rewrite(self):
        c = fig_example()
        dyn = rewrite_dynamic(c, ReuseSolution([[0, 2, 3, 1], [4]]))
        report = equivalence_check(c, dyn, tol=1e-9)
        assert report.passed

    def test_deleted_reset_leaks_state(self):
        static = Circuit(2, 2, [
            Instruction.gate("h", (0,)),
            Instruction.measure(0, 0),
            Instruction.gate("x", (1,)),
            Instruction.measure(1, 1),
        ])
        dyn = rewrite_dynamic(static, ReuseSolution([[0, 1]]))
        assert any(i.kind == "reset" for i in dyn.circuit.instructions)
        mutated = Circuit(
            dyn.circuit.num_qubits,
            dyn.circuit.num_clbits,
            [i for i in dyn.circuit.instructions if i.kind != "reset"],
        )
        assert equivalence_check(static, dyn).passed
        assert not equivalence_check(static, mutated).passed

    def test_mismatched_clbits_raise(self):
        a = Circuit(1, 1, [Instruction.measure(0, 0)])
        b = Circuit(1, 2, [Instruction.measure(0, 1)])
        with pytest.raises(ValueError, match="clbit sets differ"):
            equivalence_check(a, b)


class TestBruteForceMinWidth:
    def test_worked_example(self):
        assert brute_force_min_width(fig_example()) == 2

    def test_gate_free_chains_to_one(self):
        assert brute_force_min_width(gate_free(4)) == 1

    @pytest.mark.parametrize("n", [2, 4, 7])
    def test_irreducible_is_n(self, n):
        assert brute_force_min_width(irreducible_circuit(n)) == n

    def test_size_cap(self):
        with pytest.raises(SimulationSizeError):
            brute_force_min_width(gate_free(8))

    def test_lower_bounds_gidnet_and_random_solutions(self):
        from helpers import random_valid_solution

        rng = np.random.default_rng(61)
        for _ in range(25):
            c = random_circuit(rng, int(rng.integers(2, 7)), int(rng.integers(0, 12)))
            floor = brute_force_min_width(c)
            assert floor <= gidnet(c, SearchConfig("auto", 5)).width
            assert floor <= random_valid_solution(c, rng).width
            assert floor >= 1 or c.num_qubits == 0
