"""
Experiment runner: generate, build, verify and record over an n ladder.

Every ``(n, seed)`` pair is an independent job. With ``WORKERS > 1`` the
jobs run in a bounded process pool; rows always come back ordered by
``(n, seed)``.

The separator experiment reuses the same ladder to record the size and
balance of the top-level separator of each instance.
"""
import csv
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from django_hopspan.conf import get_conf
from django_hopspan.exceptions import HopspanError, InputError
from django_hopspan.graph import build_intersection_graph
from django_hopspan.harness.generators import generate_instance
from django_hopspan.separator import balanced_separator, separator_quality, validate_separator
from django_hopspan.services import build_spanner, check_spanner

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "format_version",
    "family",
    "construction",
    "k",
    "n",
    "seed",
    "m",
    "spanner_edges",
    "edges_per_n_log_n",
    "declared_t",
    "verified_ok",
    "max_required_hops",
    "build_time_ms",
    "verify_time_ms",
    "verify_mode",
    "aux",
    "error",
)

SEPARATOR_COLUMNS = (
    "format_version",
    "family",
    "n",
    "seed",
    "m",
    "separator_size",
    "balance",
    "x_over_sqrt_m",
)


@dataclass
class ExperimentSpec:
    family: str
    construction: str
    ladder: list[int]
    seeds: list[int]
    params: dict = field(default_factory=dict)
    k: int | None = None
    output: str = ""

    def __post_init__(self):
        self.ladder = [int(n) for n in self.ladder]
        self.seeds = [int(s) for s in self.seeds]
        if any(b <= a for a, b in zip(self.ladder, self.ladder[1:])):
            raise InputError(f"n ladder must be strictly increasing, got {self.ladder}")
        if not self.seeds:
            raise InputError("an experiment needs at least one seed")

    def jobs(self) -> list[tuple[int, int]]:
        return [(n, seed) for n in self.ladder for seed in self.seeds]

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass
class ResultRow:
    """
    One ``(n, seed)`` outcome.

    ``verified_ok`` is only true when ``max_required_hops <= declared_t``; a
    construction error leaves it false and fills ``error``.
    """

    family: str
    construction: str
    k: int | None
    n: int
    seed: int
    m: int = 0
    spanner_edges: int = 0
    declared_t: int = 0
    verified_ok: bool = False
    max_required_hops: int = 0
    build_time_ms: float = 0.0
    verify_time_ms: float = 0.0
    verify_mode: str = ""
    aux: dict = field(default_factory=dict)
    error: str = ""

    @property
    def edges_per_n_log_n(self) -> float:
        if self.n < 2:
            return 0.0
        return self.spanner_edges / (self.n * math.log2(self.n))

    def as_dict(self) -> dict:
        return {**asdict(self), "edges_per_n_log_n": self.edges_per_n_log_n}

    def csv_values(self, format_version: int) -> list:
        values = {
            **self.as_dict(),
            "format_version": format_version,
            "k": "" if self.k is None else self.k,
            "edges_per_n_log_n": f"{self.edges_per_n_log_n:.6f}",
            "build_time_ms": f"{self.build_time_ms:.3f}",
            "verify_time_ms": f"{self.verify_time_ms:.3f}",
            "verified_ok": int(self.verified_ok),
            "aux": json.dumps(self.aux, sort_keys=True, separators=(",", ":"), default=str),
        }
        return [values[column] for column in CSV_COLUMNS]


def _is_flat(value) -> bool:
    """Scalars and lists of scalars go into ``aux``; nested diagnostics stay out."""
    if isinstance(value, (list, tuple)):
        return all(isinstance(item, (int, float, str, bool)) for item in value)
    return isinstance(value, (int, float, str, bool)) or value is None


def run_case(spec: ExperimentSpec, n: int, seed: int) -> ResultRow:
    """
    Generate one instance, build its spanner and verify it.

    Library errors are recorded in the row; anything else propagates.
    """
    row = ResultRow(spec.family, spec.construction, spec.k, n, seed)
    try:
        objects = generate_instance(spec.family, n, spec.params, seed)

        start = time.perf_counter()
        graph, spanner = build_spanner(objects, spec.construction, k=spec.k, seed=seed)
        row.build_time_ms = (time.perf_counter() - start) * 1000.0

        start = time.perf_counter()
        report = check_spanner(graph, spanner, seed=seed)
        row.verify_time_ms = (time.perf_counter() - start) * 1000.0
    except HopspanError as e:
        row.error = f"{type(e).__name__}: {e.detail}"
        logger.warning(f"{spec.construction} on {spec.family} n={n} seed={seed} failed: {row.error}")
        return row

    row.m = graph.m
    row.spanner_edges = len(spanner)
    row.declared_t = spanner.declared_stretch
    row.verified_ok = report.ok
    row.max_required_hops = report.worst_hops
    row.verify_mode = report.mode
    row.aux = {key: value for key, value in spanner.parameters.items() if _is_flat(value)}
    row.aux["unreachable"] = report.unreachable
    if not report.ok:
        logger.warning(
            f"{spec.construction} on {spec.family} n={n} seed={seed}: edge {report.worst_edge} "
            f"needs more than {report.t} hops"
        )
    return row


def _run_job(job: tuple[ExperimentSpec, int, int]) -> ResultRow:
    return run_case(*job)


def run_suite(spec: ExperimentSpec, workers: int | None = None) -> list[ResultRow]:
    """
    Run every ``(n, seed)`` job of ``spec`` and write the CSV if ``spec.output`` is set.

    Args:
        spec: The experiment.
        workers: Pool size; ``WORKERS`` from the configuration when omitted.

    Returns:
        list: Rows ordered by ``(n, seed)``.
    """
    workers = get_conf().WORKERS if workers is None else max(1, int(workers))
    jobs = [(spec, n, seed) for n, seed in spec.jobs()]
    logger.info(
        f"running {spec.construction} on {spec.family}: {len(jobs)} jobs, {workers} worker(s)"
    )

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            rows = list(pool.map(_run_job, jobs))
    else:
        rows = [_run_job(job) for job in jobs]

    rows.sort(key=lambda row: (row.n, row.seed))
    if spec.output:
        write_csv(rows, spec.output)
    failed = sum(1 for row in rows if not row.verified_ok)
    if failed:
        logger.warning(f"{failed} of {len(rows)} rows did not verify")
    return rows


def write_csv(rows: list[ResultRow], path: str | Path) -> None:
    """Write the header and one line per row; an empty list gives the header only."""
    version = get_conf().FORMAT_VERSION
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(CSV_COLUMNS)
        for row in rows:
            w.writerow(row.csv_values(version))


@dataclass
class SeparatorRow:
    """Top-level separator of one generated instance."""

    family: str
    n: int
    seed: int
    m: int = 0
    separator_size: int = 0
    balance: float = 0.0
    x_over_sqrt_m: float = 0.0

    def csv_values(self, format_version: int) -> list:
        values = {
            **asdict(self),
            "format_version": format_version,
            "balance": f"{self.balance:.6f}",
            "x_over_sqrt_m": f"{self.x_over_sqrt_m:.6f}",
        }
        return [values[column] for column in SEPARATOR_COLUMNS]


def measure_separator(family: str, n: int, seed: int, params: dict | None = None) -> SeparatorRow:
    """
    Separate the intersection graph of one generated instance and record its quality.

    Raises:
        StructuralViolation: If the separator is not balanced or lets an edge cross.
    """
    graph = build_intersection_graph(generate_instance(family, n, params, seed))
    result = balanced_separator(graph)
    validate_separator(graph, result)
    quality = separator_quality(graph, result)
    return SeparatorRow(
        family,
        n,
        seed,
        m=quality["m"],
        separator_size=quality["separator_size"],
        balance=quality["balance"],
        x_over_sqrt_m=quality["x_over_sqrt_m"],
    )


def _measure_job(job: tuple[str, int, int, dict]) -> SeparatorRow:
    return measure_separator(*job)


def run_separator_suite(
    spec: ExperimentSpec, output: str | Path = "", workers: int | None = None
) -> list[SeparatorRow]:
    """
    Measure the separator of every ``(n, seed)`` instance of ``spec``'s family.

    The construction of ``spec`` plays no part. The CSV is written when
    ``output`` is given.
    """
    workers = get_conf().WORKERS if workers is None else max(1, int(workers))
    jobs = [(spec.family, n, seed, spec.params) for n, seed in spec.jobs()]
    logger.info(f"measuring separators on {spec.family}: {len(jobs)} instances")

    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            rows = list(pool.map(_measure_job, jobs))
    else:
        rows = [_measure_job(job) for job in jobs]

    rows.sort(key=lambda row: (row.n, row.seed))
    if output:
        write_separator_csv(rows, output)
    return rows


def median_separator_ratio(rows: list[SeparatorRow]) -> dict[int, float]:
    """Median ``|X| / sqrt(m)`` per ``n``, over the instances with at least one edge."""
    by_n: dict[int, list[float]] = {}
    for row in rows:
        if row.m > 0:
            by_n.setdefault(row.n, []).append(row.x_over_sqrt_m)
    return {n: float(np.median(ratios)) for n, ratios in sorted(by_n.items())}


def write_separator_csv(rows: list[SeparatorRow], path: str | Path) -> None:
    version = get_conf().FORMAT_VERSION
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(SEPARATOR_COLUMNS)
        for row in rows:
            w.writerow(row.csv_values(version))
