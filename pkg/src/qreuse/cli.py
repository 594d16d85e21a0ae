"""Command-line entry point: compile, gen, bench, verify, and fit subcommands.

Exit codes: 0 success, 2 input or usage error (including circuit parse
errors), 3 internal invariant breach. Data goes to stdout, diagnostics to
stderr. Every run with an explicit --seed is bit-reproducible.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys
from pathlib import Path

from .benchgen import GrcsSpec, QaoaSpec, gen_grcs, gen_qaoa, gen_u3r
from .circuit import QasmParseError, parse_circuit, serialize_circuit, build_dag
from .gidnet import SearchConfig, gidnet
from .harness import FIT_DEGREES, fit_polynomial, read_csv, records_to_json, run_bench, write_csv
from .matrices import biadjacency, candidate_from_biadjacency, format_matrices
from .rewrite import rewrite_dynamic, validate_solution
from .verify import SimulationSizeError, equivalence_check

DEFAULT_SEED = 0xC0FFEE  # fixed constant so bare invocations reproduce


def _seed_arg(value: str) -> int:
    if value == "random":
        return secrets.randbits(63)
    return int(value)


def _iterations_arg(value: str) -> int | str:
    if value == "auto":
        return "auto"
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("iterations must be >= 1 or 'auto'")
    return n


def _sizes_arg(value: str) -> list[int]:
    return [int(s) for s in value.split(",") if s.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qreuse", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a static circuit into a width-reduced dynamic circuit")
    p.add_argument("input", help="path to a static circuit file")
    p.add_argument("-o", "--out", help="dynamic circuit output path (default INPUT stem + .dyn.qasm)")
    p.add_argument("--solution", help="solution JSON output path (default INPUT stem + .solution.json)")
    p.add_argument("--seed", type=_seed_arg, default=DEFAULT_SEED, help="search seed, or 'random'")
    p.add_argument("--iterations", type=_iterations_arg, default="auto",
                   help="search iterations, or 'auto' (= max(1, ceil(log2 n)))")
    p.add_argument("--tie-break", choices=["random", "lowest-index"], default="random")
    p.add_argument("--threads", type=int, default=1, help="parallel search iterations (default 1)")
    p.add_argument("--verify", action="store_true",
                   help="check static/dynamic distribution equivalence (small circuits only)")
    p.add_argument("--tol", type=float, default=1e-9, help="equivalence tolerance for --verify")
    p.add_argument("--dump-matrices", action="store_true", help="print B and C as 0/1 rows")
    p.add_argument("--json", action="store_true", help="machine-readable stdout")
    p.add_argument("--quiet", action="store_true", help="suppress the human summary line")

    p = sub.add_parser("gen", help="generate a benchmark circuit")
    fam = p.add_subparsers(dest="family", required=True)
    g = fam.add_parser("grcs", help="lattice random circuit")
    g.add_argument("--rows", type=int, required=True)
    g.add_argument("--cols", type=int, required=True)
    g.add_argument("--depth", type=int, required=True)
    g.add_argument("--seed", type=_seed_arg, default=DEFAULT_SEED)
    g.add_argument("-o", "--out", required=True)
    q = fam.add_parser("qaoa", help="MaxCut QAOA circuit on a random 3-regular graph")
    q.add_argument("--n", type=int, required=True, help="even vertex count >= 4")
    q.add_argument("--p", type=int, required=True, help="layer count")
    q.add_argument("--seed", type=_seed_arg, default=DEFAULT_SEED)
    q.add_argument("-o", "--out", required=True)
    q.add_argument("--graph-out", help="also write the graph as edge-list text")

    p = sub.add_parser("bench", help="benchmark compilation width and runtime over a size grid")
    p.add_argument("--family", choices=["grcs", "qaoa"], required=True)
    p.add_argument("--sizes", type=_sizes_arg, required=True, help="comma-separated qubit counts")
    p.add_argument("--depth", type=int, help="cycle count (grcs)")
    p.add_argument("--p", type=int, help="layer count (qaoa)")
    p.add_argument("--repeats", type=int, default=10, help="width repeats per instance")
    p.add_argument("--time-reps", type=int, default=7, help="timed compilations per instance")
    p.add_argument("--seed", type=_seed_arg, default=DEFAULT_SEED)
    p.add_argument("--iterations", type=_iterations_arg, default="auto")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", help="CSV output path (default stdout)")
    p.add_argument("--json-out", help="also write a JSON mirror of the records")

    p = sub.add_parser("verify", help="compare a static and a dynamic circuit's distributions")
    p.add_argument("static", help="static circuit file")
    p.add_argument("dynamic", help="dynamic circuit file")
    p.add_argument("--tol", type=float, default=1e-9)

    p = sub.add_parser("fit", help="fit a polynomial to bench CSV runtimes")
    p.add_argument("--in", dest="input", required=True, help="bench CSV path")
    p.add_argument("--degree", type=int, choices=list(FIT_DEGREES), default=3)
    return parser


def _cmd_compile(args) -> int:
    source = Path(args.input)
    try:
        circuit = parse_circuit(source.read_text())
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if circuit.form != "static":
        print("error: input circuit is not static", file=sys.stderr)
        return 2

    config = SearchConfig(args.iterations, args.seed, args.tie_break)
    solution = gidnet(circuit, config, threads=args.threads)
    report = validate_solution(circuit, solution)
    if not report.ok:
        print(f"internal invariant breach: {report.violation}", file=sys.stderr)
        return 3
    dynamic = rewrite_dynamic(circuit, solution)

    out_path = Path(args.out) if args.out else source.with_suffix(".dyn.qasm")
    sol_path = Path(args.solution) if args.solution else source.with_suffix(".solution.json")
    out_path.write_text(dynamic.serialize())
    sol_path.write_text(json.dumps(solution.to_json_dict(), indent=2) + "\n")

    if args.dump_matrices:
        b = biadjacency(build_dag(circuit))
        print(format_matrices(b, candidate_from_biadjacency(b)), end="")

    irreducible = solution.width == circuit.num_qubits and circuit.num_qubits > 0
    tvd = None
    if args.verify:
        try:
            eq = equivalence_check(circuit, dynamic, args.tol)
        except SimulationSizeError as exc:
            print(f"error: --verify: {exc}", file=sys.stderr)
            return 2
        tvd = eq.tvd
        if not eq.passed:
            print(f"internal invariant breach: equivalence tvd {eq.tvd:.3e} > {args.tol}", file=sys.stderr)
            return 3
    if args.json:
        payload = {
            "input": str(source),
            "width_before": circuit.num_qubits,
            "width_after": solution.width,
            "irreducible": irreducible,
            "output": str(out_path),
            "solution": str(sol_path),
        }
        if tvd is not None:
            payload["tvd"] = tvd
        print(json.dumps(payload))
    elif not args.quiet:
        print(f"width {circuit.num_qubits} -> {solution.width}")
        if irreducible:
            print("irreducible")
        if tvd is not None:
            print(f"verified: tvd {tvd:.3e}")
    return 0


def _cmd_gen(args) -> int:
    if args.family == "grcs":
        circuit = gen_grcs(GrcsSpec(args.rows, args.cols, args.depth, args.seed))
        Path(args.out).write_text(serialize_circuit(circuit))
    else:
        graph = gen_u3r(args.n, args.seed)
        circuit = gen_qaoa(QaoaSpec(graph, args.p, seed=args.seed))
        Path(args.out).write_text(serialize_circuit(circuit))
        if args.graph_out:
            Path(args.graph_out).write_text(
                "".join(f"{a} {b}\n" for a, b in graph.edges)
            )
    return 0


def _cmd_bench(args) -> int:
    if args.family == "grcs":
        if args.depth is None:
            print("error: --depth is required for --family grcs", file=sys.stderr)
            return 2
        depth_or_p = args.depth
    else:
        if args.p is None:
            print("error: --p is required for --family qaoa", file=sys.stderr)
            return 2
        depth_or_p = args.p
    records = run_bench(
        args.family, args.sizes, depth_or_p,
        repeats=args.repeats, time_reps=args.time_reps,
        seed=args.seed, iterations=args.iterations, threads=args.threads,
    )
    if args.out:
        write_csv(records, args.out)
        for r in records:
            print(f"{r.circuit_id}: width {r.orig_width} -> best {r.best_width}, "
                  f"mean {r.mean_runtime_s:.4f}s", file=sys.stderr)
    else:
        import io

        buf = io.StringIO()
        import csv as _csv

        writer = _csv.writer(buf)
        writer.writerow(
            ["family", "n", "depth_or_p", "seed", "orig_width", "best_width",
             "mean_runtime_s", "median_runtime_s"]
        )
        for r in records:
            writer.writerow([r.family, r.n, r.depth_or_p, r.seed, r.orig_width,
                             r.best_width, repr(r.mean_runtime_s), repr(r.median_runtime_s)])
        print(buf.getvalue(), end="")
    if args.json_out:
        Path(args.json_out).write_text(records_to_json(records) + "\n")
    return 0


def _cmd_verify(args) -> int:
    static = parse_circuit(Path(args.static).read_text())
    dynamic = parse_circuit(Path(args.dynamic).read_text())
    eq = equivalence_check(static, dynamic, args.tol)
    print(json.dumps({"pass": eq.passed, "tvd": eq.tvd, "branches": eq.branches}))
    return 0


def _cmd_fit(args) -> int:
    records = read_csv(args.input)
    report = fit_polynomial(records, args.degree)
    print(json.dumps(report.to_json_dict()))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "compile": _cmd_compile,
        "gen": _cmd_gen,
        "bench": _cmd_bench,
        "verify": _cmd_verify,
        "fit": _cmd_fit,
    }
    try:
        return handlers[args.command](args)
    except QasmParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, SimulationSizeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
