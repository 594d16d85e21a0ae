"""Circuit data model, text-format parser/serializer, and circuit DAG construction.

The text format is a small QASM subset: optional ``OPENQASM 2.0;`` header, a
required ``qreg q[n];`` declaration, an optional ``creg c[m];`` declaration,
then one ``;``-terminated instruction per line. Supported instructions:

    <gate>(<params>) q[i](,q[j]);      gates: h x y z s t sx sy rx rz cx cz
    measure q[i] -> c[k];
    reset q[i];
    barrier;  or  barrier q[i],q[j];

``//`` starts a comment. Whitespace is insignificant. Dynamic circuits carry
their virtual-to-logical mapping as trailing ``// z<i>: q<a> q<b> ...``
comment lines, which are informational only and not parsed back.

Qubits are plain ints in ``[0, n)``; classical bits likewise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

# mnemonic -> (qubit arity, parameter count)
GATE_DEFS: dict[str, tuple[int, int]] = {
    "h": (1, 0),
    "x": (1, 0),
    "y": (1, 0),
    "z": (1, 0),
    "s": (1, 0),
    "t": (1, 0),
    "sx": (1, 0),
    "sy": (1, 0),
    "rx": (1, 1),
    "rz": (1, 1),
    "cx": (2, 0),
    "cz": (2, 0),
}


class QasmParseError(ValueError):
    """Parse failure carrying the 1-based source line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Instruction:
    """One circuit instruction: a gate, measure, reset, or barrier."""

    kind: str  # "gate" | "measure" | "reset" | "barrier"
    name: str
    params: tuple[float, ...] = ()
    qubits: tuple[int, ...] = ()
    clbit: int | None = None

    @staticmethod
    def gate(name: str, qubits: tuple[int, ...], params: tuple[float, ...] = ()) -> "Instruction":
        return Instruction("gate", name, tuple(params), tuple(qubits))

    @staticmethod
    def measure(qubit: int, clbit: int) -> "Instruction":
        return Instruction("measure", "measure", (), (qubit,), clbit)

    @staticmethod
    def reset(qubit: int) -> "Instruction":
        return Instruction("reset", "reset", (), (qubit,))

    @staticmethod
    def barrier(qubits: tuple[int, ...] = ()) -> "Instruction":
        return Instruction("barrier", "barrier", (), tuple(qubits))


@dataclass
class Circuit:
    """An ordered instruction list over ``num_qubits`` wires.

    ``form`` is derived from the instruction stream: a circuit is static when
    every qubit sees (optional leading resets, then) gates, then at most one
    terminal measure; anything after a measure, or a reset after activity,
    makes it dynamic.
    """

    num_qubits: int
    num_clbits: int
    instructions: list[Instruction] = field(default_factory=list)

    @property
    def form(self) -> str:
        touched = [False] * self.num_qubits  # gate/measure/reset seen
        measured = [False] * self.num_qubits
        for ins in self.instructions:
            if ins.kind == "barrier":
                continue
            for q in ins.qubits:
                if measured[q]:
                    return "dynamic"
                if ins.kind == "reset" and touched[q]:
                    return "dynamic"
                touched[q] = True
                if ins.kind == "measure":
                    measured[q] = True
        return "static"

    @property
    def num_gates(self) -> int:
        return sum(1 for ins in self.instructions if ins.kind == "gate")

    def measure_map(self) -> dict[int, int]:
        """Map each measured qubit to the clbit its (last) measure writes."""
        return {ins.qubits[0]: ins.clbit for ins in self.instructions if ins.kind == "measure"}

    def validate(self) -> None:
        """Raise ValueError on any structural invariant violation."""
        written: set[int] = set()
        for ins in self.instructions:
            for q in ins.qubits:
                if not 0 <= q < self.num_qubits:
                    raise ValueError(f"qubit index {q} out of range [0, {self.num_qubits})")
            if ins.kind == "gate":
                arity, nparams = GATE_DEFS[ins.name]
                if len(ins.qubits) != arity:
                    raise ValueError(f"gate '{ins.name}' expects {arity} qubit(s)")
                if len(ins.params) != nparams:
                    raise ValueError(f"gate '{ins.name}' expects {nparams} parameter(s)")
                if arity == 2 and ins.qubits[0] == ins.qubits[1]:
                    raise ValueError(f"gate '{ins.name}' requires distinct qubits")
            elif ins.kind == "measure":
                if ins.clbit is None or not 0 <= ins.clbit < self.num_clbits:
                    raise ValueError(f"clbit index {ins.clbit} out of range [0, {self.num_clbits})")
                if ins.clbit in written:
                    raise ValueError(f"classical bit c[{ins.clbit}] written more than once")
                written.add(ins.clbit)


_QUBIT_RE = re.compile(r"q\[(\d+)\]")
_QREG_RE = re.compile(r"^qreg\s+(\w+)\s*\[\s*(\d+)\s*\]$")
_CREG_RE = re.compile(r"^creg\s+(\w+)\s*\[\s*(\d+)\s*\]$")
_MEASURE_RE = re.compile(r"^measure\s+q\[(\d+)\]\s*->\s*c\[(\d+)\]$")
_RESET_RE = re.compile(r"^reset\s+q\[(\d+)\]$")
_GATE_RE = re.compile(r"^([a-zA-Z_][\w]*)\s*(?:\(([^)]*)\))?\s*(.*)$")


def _parse_qubit_list(text: str, line: int) -> tuple[int, ...]:
    parts = [p.strip() for p in text.split(",")]
    qubits = []
    for p in parts:
        m = re.fullmatch(r"q\[(\d+)\]", p)
        if not m:
            raise QasmParseError(f"expected qubit operand, got '{p}'", line)
        qubits.append(int(m.group(1)))
    return tuple(qubits)


def parse_circuit(text: str) -> Circuit:
    """Parse QASM-subset source into a Circuit; instruction order equals source order."""
    num_qubits: int | None = None
    num_clbits: int | None = None
    instructions: list[Instruction] = []
    max_clbit = -1
    written_clbits: set[int] = set()

    def check_qubits(qubits: tuple[int, ...], line: int) -> None:
        if num_qubits is None:
            raise QasmParseError("instruction before qreg declaration", line)
        for q in qubits:
            if q >= num_qubits:
                raise QasmParseError(f"qubit index {q} out of range [0, {num_qubits})", line)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0]
        if not line.strip():
            continue
        pieces = line.split(";")
        if pieces[-1].strip():
            raise QasmParseError("missing ';'", lineno)
        for stmt in (p.strip() for p in pieces[:-1]):
            if not stmt:
                continue
            if stmt.startswith("OPENQASM"):
                continue
            m = _QREG_RE.match(stmt)
            if m:
                if m.group(1) != "q":
                    raise QasmParseError("only a single register named 'q' is supported", lineno)
                if num_qubits is not None:
                    raise QasmParseError("duplicate qreg declaration", lineno)
                num_qubits = int(m.group(2))
                continue
            m = _CREG_RE.match(stmt)
            if m:
                if m.group(1) != "c":
                    raise QasmParseError("only a single register named 'c' is supported", lineno)
                if num_clbits is not None:
                    raise QasmParseError("duplicate creg declaration", lineno)
                num_clbits = int(m.group(2))
                continue
            m = _MEASURE_RE.match(stmt)
            if m:
                q, k = int(m.group(1)), int(m.group(2))
                check_qubits((q,), lineno)
                if num_clbits is not None and k >= num_clbits:
                    raise QasmParseError(f"clbit index {k} out of range [0, {num_clbits})", lineno)
                if k in written_clbits:
                    raise QasmParseError(f"classical bit c[{k}] written more than once", lineno)
                written_clbits.add(k)
                max_clbit = max(max_clbit, k)
                instructions.append(Instruction.measure(q, k))
                continue
            m = _RESET_RE.match(stmt)
            if m:
                q = int(m.group(1))
                check_qubits((q,), lineno)
                instructions.append(Instruction.reset(q))
                continue
            if stmt == "barrier" or stmt.startswith("barrier ") or stmt.startswith("barrier\t"):
                rest = stmt[len("barrier"):].strip()
                qubits = _parse_qubit_list(rest, lineno) if rest else ()
                check_qubits(qubits, lineno)
                instructions.append(Instruction.barrier(qubits))
                continue
            m = _GATE_RE.match(stmt)
            if not m:
                raise QasmParseError(f"cannot parse statement '{stmt}'", lineno)
            name, params_text, operands = m.group(1), m.group(2), m.group(3)
            if name not in GATE_DEFS:
                raise QasmParseError(f"unknown gate mnemonic '{name}'", lineno)
            arity, nparams = GATE_DEFS[name]
            params: tuple[float, ...] = ()
            if params_text is not None:
                try:
                    params = tuple(float(p) for p in params_text.split(",") if p.strip())
                except ValueError:
                    raise QasmParseError(f"bad parameter list '({params_text})'", lineno) from None
            if len(params) != nparams:
                raise QasmParseError(f"gate '{name}' expects {nparams} parameter(s)", lineno)
            if not operands.strip():
                raise QasmParseError(f"gate '{name}' missing qubit operands", lineno)
            qubits = _parse_qubit_list(operands, lineno)
            if len(qubits) != arity:
                raise QasmParseError(f"gate '{name}' expects {arity} qubit(s)", lineno)
            if arity == 2 and qubits[0] == qubits[1]:
                raise QasmParseError(f"gate '{name}' requires distinct qubits", lineno)
            check_qubits(qubits, lineno)
            instructions.append(Instruction.gate(name, qubits, params))

    if num_qubits is None:
        raise QasmParseError("missing qreg declaration", len(text.splitlines()) or 1)
    if num_clbits is None:
        num_clbits = max_clbit + 1
    circuit = Circuit(num_qubits, num_clbits, instructions)
    circuit.validate()
    return circuit


def _format_param(x: float) -> str:
    return repr(float(x))


def serialize_circuit(c: Circuit, virtual_map: list[list[int]] | None = None) -> str:
    """Emit the text format; ``parse_circuit(serialize_circuit(c)) == c``.

    ``virtual_map`` appends the informational ``// z<i>: ...`` mapping comments
    used for dynamic circuits.
    """
    lines = ["OPENQASM 2.0;", f"qreg q[{c.num_qubits}];", f"creg c[{c.num_clbits}];"]
    for ins in c.instructions:
        if ins.kind == "gate":
            params = f"({','.join(_format_param(p) for p in ins.params)})" if ins.params else ""
            operands = ",".join(f"q[{q}]" for q in ins.qubits)
            lines.append(f"{ins.name}{params} {operands};")
        elif ins.kind == "measure":
            lines.append(f"measure q[{ins.qubits[0]}] -> c[{ins.clbit}];")
        elif ins.kind == "reset":
            lines.append(f"reset q[{ins.qubits[0]}];")
        elif ins.kind == "barrier":
            if ins.qubits:
                lines.append("barrier " + ",".join(f"q[{q}]" for q in ins.qubits) + ";")
            else:
                lines.append("barrier;")
    if virtual_map is not None:
        for i, segs in enumerate(virtual_map):
            lines.append(f"// z{i}: " + " ".join(f"q{q}" for q in segs))
    return "\n".join(lines) + "\n"


# DAG vertices are tagged tuples: ("r", qubit), ("t", qubit), ("op", instruction index).
Vertex = tuple


@dataclass
class CircuitDag:
    """Dependency DAG with one root and one terminal vertex per qubit.

    ``order`` lists vertices in a topological order (roots, then op vertices in
    instruction order, then terminals).
    """

    num_qubits: int
    successors: dict[Vertex, list[Vertex]]
    order: list[Vertex]

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        return [(u, v) for u, vs in self.successors.items() for v in vs]

    def op_vertices(self) -> list[Vertex]:
        return [v for v in self.order if v[0] == "op"]

    def in_degrees(self) -> dict[Vertex, int]:
        deg = {v: 0 for v in self.order}
        for _, v in self.edges():
            deg[v] += 1
        return deg


def build_dag(c: Circuit) -> CircuitDag:
    """Build the circuit DAG of a static circuit.

    Each gate becomes one op vertex with an incoming edge per operand qubit
    from that qubit's previous vertex. Barriers contribute nothing. Measures
    are absorbed into terminals; leading resets are absorbed into roots.
    """
    if c.form != "static":
        raise ValueError("build_dag requires a static circuit")
    n = c.num_qubits
    last: dict[int, Vertex] = {q: ("r", q) for q in range(n)}
    successors: dict[Vertex, list[Vertex]] = {("r", q): [] for q in range(n)}
    order: list[Vertex] = [("r", q) for q in range(n)]
    for i, ins in enumerate(c.instructions):
        if ins.kind != "gate":
            continue  # barrier: no dependency; measure/reset: absorbed
        v = ("op", i)
        successors[v] = []
        order.append(v)
        for q in ins.qubits:
            successors[last[q]].append(v)
            last[q] = v
    for q in range(n):
        t = ("t", q)
        successors[last[q]].append(t)
        successors[t] = []
        order.append(t)
    return CircuitDag(n, successors, order)
