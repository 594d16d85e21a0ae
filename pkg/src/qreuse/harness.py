"""Benchmark runner and runtime-scaling statistics.

Each instance is compiled `repeats` times with distinct derived seeds (best
width kept) and timed over `time_reps` further compilations (wall clock around
the compile call only). Mean runtimes versus qubit count feed a least-squares
polynomial fit reported with R-squared and F-statistic.
"""

from __future__ import annotations

import csv
import json
import math
import statistics
import time
import warnings
from dataclasses import dataclass

import numpy as np

from .benchgen import GrcsSpec, QaoaSpec, gen_grcs, gen_qaoa, gen_u3r
from .circuit import Circuit
from .gidnet import SearchConfig, gidnet

FIT_DEGREES = (2, 3, 5)

CSV_COLUMNS = [
    "family",
    "n",
    "depth_or_p",
    "seed",
    "orig_width",
    "best_width",
    "mean_runtime_s",
    "median_runtime_s",
]


@dataclass
class BenchRecord:
    circuit_id: str
    family: str
    n: int
    depth_or_p: int
    seed: int
    orig_width: int
    compiled_width: int  # width of the first repeat
    runs: int
    best_width: int
    runtime_samples: tuple[float, ...]
    mean_runtime_s: float
    median_runtime_s: float


def _square_factors(n: int) -> tuple[int, int]:
    rows = max(d for d in range(1, int(math.isqrt(n)) + 1) if n % d == 0)
    return rows, n // rows


def _instance(family: str, n: int, depth_or_p: int, gen_seed: int) -> Circuit:
    if family == "grcs":
        rows, cols = _square_factors(n)
        return gen_grcs(GrcsSpec(rows, cols, depth_or_p, gen_seed))
    if family == "qaoa":
        return gen_qaoa(QaoaSpec(gen_u3r(n, gen_seed), depth_or_p, seed=gen_seed))
    raise ValueError(f"unknown family '{family}'")


def run_bench(
    family: str,
    sizes: list[int],
    depth_or_p: int,
    repeats: int = 10,
    time_reps: int = 7,
    seed: int = 0,
    iterations: int | str = "auto",
    threads: int = 1,
) -> list[BenchRecord]:
    """Benchmark one instance per size; width repeats first, then sequential timed runs."""
    records = []
    master = np.random.SeedSequence(seed)
    children = master.spawn(len(sizes))
    for child, n in zip(children, sizes):
        streams = child.spawn(1 + repeats + time_reps)
        derived = [int(s.generate_state(1, np.uint64)[0]) for s in streams]
        circuit = _instance(family, n, depth_or_p, derived[0])
        widths = [
            gidnet(circuit, SearchConfig(iterations, s), threads=threads).width
            for s in derived[1 : 1 + repeats]
        ]
        samples = []
        for s in derived[1 + repeats :]:
            config = SearchConfig(iterations, s)
            start = time.perf_counter()
            gidnet(circuit, config, threads=threads)
            samples.append(time.perf_counter() - start)
        records.append(
            BenchRecord(
                circuit_id=f"{family}-{n}-{depth_or_p}-{seed}",
                family=family,
                n=n,
                depth_or_p=depth_or_p,
                seed=seed,
                orig_width=circuit.num_qubits,
                compiled_width=widths[0],
                runs=repeats,
                best_width=min(widths),
                runtime_samples=tuple(samples),
                mean_runtime_s=statistics.fmean(samples),
                median_runtime_s=statistics.median(samples),
            )
        )
    return records


def write_csv(records: list[BenchRecord], path: str) -> None:
    with open(path, "w", newline="") as fp:
        writer = csv.writer(fp)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(
                [r.family, r.n, r.depth_or_p, r.seed, r.orig_width, r.best_width,
                 repr(r.mean_runtime_s), repr(r.median_runtime_s)]
            )


def read_csv(path: str) -> list[BenchRecord]:
    records = []
    with open(path, newline="") as fp:
        for row in csv.DictReader(fp):
            records.append(
                BenchRecord(
                    circuit_id=f"{row['family']}-{row['n']}-{row['depth_or_p']}-{row['seed']}",
                    family=row["family"],
                    n=int(row["n"]),
                    depth_or_p=int(row["depth_or_p"]),
                    seed=int(row["seed"]),
                    orig_width=int(row["orig_width"]),
                    compiled_width=int(row["best_width"]),
                    runs=0,
                    best_width=int(row["best_width"]),
                    runtime_samples=(),
                    mean_runtime_s=float(row["mean_runtime_s"]),
                    median_runtime_s=float(row["median_runtime_s"]),
                )
            )
    return records


def records_to_json(records: list[BenchRecord]) -> str:
    return json.dumps(
        [
            {
                "circuit_id": r.circuit_id,
                "family": r.family,
                "n": r.n,
                "depth_or_p": r.depth_or_p,
                "seed": r.seed,
                "orig_width": r.orig_width,
                "compiled_width": r.compiled_width,
                "runs": r.runs,
                "best_width": r.best_width,
                "runtime_samples": list(r.runtime_samples),
                "mean_runtime_s": r.mean_runtime_s,
                "median_runtime_s": r.median_runtime_s,
            }
            for r in records
        ],
        indent=2,
    )


@dataclass(frozen=True)
class FitReport:
    degree: int
    coefficients: tuple[float, ...]  # ascending powers
    r_squared: float
    f_statistic: float

    def to_json_dict(self) -> dict:
        return {
            "degree": self.degree,
            "coefficients": list(self.coefficients),
            "r_squared": self.r_squared,
            "f_statistic": self.f_statistic,
        }


def fit_polynomial(records: list[BenchRecord], degree: int) -> FitReport:
    """Least-squares fit of mean runtime vs qubit count with monomials up to ``degree``."""
    if degree not in FIT_DEGREES:
        raise ValueError(f"degree must be one of {FIT_DEGREES}")
    xs = np.array([r.n for r in records], dtype=float)
    ys = np.array([r.mean_runtime_s for r in records], dtype=float)
    if len(set(xs.tolist())) < degree + 2:
        raise ValueError(
            f"insufficient sizes: need >= {degree + 2} distinct circuit sizes, got {len(set(xs.tolist()))}"
        )
    coeffs = np.polynomial.polynomial.polyfit(xs, ys, degree)
    yhat = np.polynomial.polynomial.polyval(xs, coeffs)
    ss_res = float(np.sum((ys - yhat) ** 2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    if ss_tot == 0.0:
        warnings.warn("constant response: R-squared defined as 0", stacklevel=2)
        r_squared = 0.0
    else:
        r_squared = max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    dof = len(xs) - degree - 1
    if ss_res == 0.0:
        f_statistic = math.inf
    else:
        ss_reg = max(ss_tot - ss_res, 0.0)
        f_statistic = (ss_reg / degree) / (ss_res / dof) if dof > 0 else math.inf
    return FitReport(degree, tuple(float(c) for c in coeffs), r_squared, f_statistic)
