"""qreuse: width-reducing quantum circuit compilation via qubit reuse."""

from .circuit import (
    Circuit,
    CircuitDag,
    Instruction,
    QasmParseError,
    build_dag,
    parse_circuit,
    serialize_circuit,
)
from .gidnet import (
    NeighborTable,
    ReuseSolution,
    SearchConfig,
    best_reuse_sequence,
    common_neighbors,
    finalize_reuse,
    gidnet,
    merge_subsets,
    neighbor_table,
    potential_reuse,
    reuse_score,
)
from .matrices import (
    BiadjacencyMatrix,
    CandidateMatrix,
    available_qubits,
    biadjacency,
    candidate_from_biadjacency,
    row_sums,
    update_cmatrix,
)
from .rewrite import DynamicCircuit, ValidityReport, VirtualQubit, rewrite_dynamic, validate_solution
from .verify import (
    EquivalenceReport,
    OutcomeDistribution,
    SimulationSizeError,
    brute_force_min_width,
    equivalence_check,
    simulate_distribution,
)

__version__ = "0.1.0"

__all__ = [
    "Circuit",
    "CircuitDag",
    "Instruction",
    "QasmParseError",
    "parse_circuit",
    "serialize_circuit",
    "build_dag",
    "BiadjacencyMatrix",
    "CandidateMatrix",
    "biadjacency",
    "candidate_from_biadjacency",
    "update_cmatrix",
    "row_sums",
    "available_qubits",
    "SearchConfig",
    "ReuseSolution",
    "NeighborTable",
    "potential_reuse",
    "common_neighbors",
    "neighbor_table",
    "reuse_score",
    "best_reuse_sequence",
    "merge_subsets",
    "finalize_reuse",
    "gidnet",
    "DynamicCircuit",
    "VirtualQubit",
    "ValidityReport",
    "rewrite_dynamic",
    "validate_solution",
    "OutcomeDistribution",
    "EquivalenceReport",
    "SimulationSizeError",
    "simulate_distribution",
    "equivalence_check",
    "brute_force_min_width",
]
