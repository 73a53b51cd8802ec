"""Experiment driver: (alpha, replicas) sweeps, turning points, and reports.

A sweep traces a fixed query set against every (alpha, replicas) cell of a
grid and records per-cell means of the parallelization ratio, storage ratio,
rounds, and lookups.  Replica counts follow the external convention
``replicas = beta - 1`` (0 replicas = the sequential single-copy baseline
configuration).

Repeats vary the hashed-policy seed; modulo placement is deterministic, so
its cells are evaluated once no matter how many repeats are requested.

Turning-point extraction finds, per replica count, the chunk count that
maximises the mean ratio (ties resolve to the smallest alpha) and fits a
least-squares line through the (beta, best-alpha) points.

Sweep cells are independent: with ``jobs > 1`` they are evaluated on a
process pool.  Records are sorted before emission, so the output does not
depend on scheduling order.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from statistics import fmean, linear_regression
from typing import Iterable, Sequence

from .chunks import MODULO, AllocationPolicy, ChunkStoreConfig, build_store
from .errors import (
    EmptyLedger,
    InsufficientData,
    InvalidParams,
    IoError,
    ResultMismatch,
)
from .hashing import mix64, stream_value
from .ledger import Ledger
from .tracing import TraceResult, trace_bfs, trace_parallel

__all__ = [
    "SweepSpec",
    "BenchRecord",
    "TurningPointFit",
    "deepest_query_ids",
    "run_sweep",
    "find_turning_points",
    "emit_report",
    "render_summary",
    "read_records_csv",
]

CSV_COLUMNS = (
    "alpha",
    "replicas",
    "policy",
    "mean_parallelization_ratio",
    "mean_storage_ratio",
    "mean_rounds",
    "mean_lookups",
)


@dataclass(frozen=True)
class SweepSpec:
    """Grid definition for one sweep.

    ``queries`` pins the traced ids explicitly; when None, the ``deepest``
    ids with the largest predecessor sets are sampled instead (deep traces
    are the ones that exercise parallelism).
    """

    alpha_values: tuple[int, ...]
    replica_values: tuple[int, ...]
    policy: AllocationPolicy = field(default_factory=AllocationPolicy)
    queries: tuple[int, ...] | None = None
    deepest: int = 20
    repeats: int = 1
    per_chunk_index_overhead: float = 0.0

    def __post_init__(self) -> None:
        if not self.alpha_values or not self.replica_values:
            raise InvalidParams("alpha_values and replica_values must be non-empty")
        if any(a < 1 for a in self.alpha_values):
            raise InvalidParams("alpha values must be >= 1")
        if any(r < 0 for r in self.replica_values):
            raise InvalidParams("replica values must be >= 0")
        if self.repeats < 1:
            raise InvalidParams("repeats must be >= 1")
        if self.queries is not None and len(self.queries) == 0:
            raise InvalidParams("explicit query list must be non-empty")
        if self.queries is None and self.deepest < 1:
            raise InvalidParams("deepest must be >= 1")


@dataclass(frozen=True)
class BenchRecord:
    """Per-cell means over queries and repeats."""

    alpha: int
    replicas: int
    policy: str
    mean_parallelization_ratio: float
    mean_storage_ratio: float
    mean_rounds: float
    mean_lookups: float


@dataclass(frozen=True)
class TurningPointFit:
    """Best alpha per beta and the least-squares line through those points."""

    best_alpha_per_beta: tuple[tuple[int, int], ...]
    slope: float
    intercept: float


def deepest_query_ids(ledger: Ledger, k: int) -> tuple[int, ...]:
    """The ``k`` ids with the largest full predecessor sets.

    Ties resolve to the smaller id.  Computed by brute-force closure per id,
    so this is a one-off cost per workload.
    """
    if len(ledger) == 0:
        raise EmptyLedger("cannot sample queries from an empty ledger")
    sorted_preds = {tx.id: ledger.sorted_predecessors(tx.id) for tx in ledger}
    sizes: list[tuple[int, int]] = []
    for tx in ledger:
        stack = list(sorted_preds[tx.id])
        found: set[int] = set()
        while stack:
            v = stack.pop()
            if v not in found:
                found.add(v)
                stack.extend(sorted_preds[v])
        sizes.append((-len(found), tx.id))
    sizes.sort()
    return tuple(tx_id for _, tx_id in sizes[: max(1, k)])


def _repeat_seeds(policy: AllocationPolicy, repeats: int) -> list[int]:
    # Repeat 0 keeps the configured seed; later repeats derive new ones.
    base = mix64(policy.seed)
    return [policy.seed] + [stream_value(base, r) for r in range(1, repeats)]


def _cell_record(
    ledger: Ledger,
    baselines: dict[int, TraceResult],
    queries: Sequence[int],
    alpha: int,
    replicas: int,
    policy: AllocationPolicy,
    repeats: int,
    per_chunk_index_overhead: float,
) -> BenchRecord:
    beta = replicas + 1
    if policy.kind == MODULO:
        seeds = [policy.seed]  # modulo results are repeat-invariant
    else:
        seeds = _repeat_seeds(policy, repeats)
    ratios: list[float] = []
    rounds: list[int] = []
    lookups: list[int] = []
    storage: list[float] = []
    for seed in seeds:
        config = ChunkStoreConfig(
            alpha=alpha,
            beta=beta,
            policy=AllocationPolicy(policy.kind, seed),
            per_chunk_index_overhead=per_chunk_index_overhead,
        )
        store = build_store(ledger, config)
        storage.append(store.storage_report().storage_ratio)
        for q in queries:
            base = baselines[q]
            par = trace_parallel(store, q)
            if par.predecessors != base.predecessors:
                raise ResultMismatch(f"trace of {q} diverged in cell "
                                     f"(alpha={alpha}, replicas={replicas})")
            ratios.append(base.simulated_time / par.simulated_time)
            rounds.append(par.rounds)
            lookups.append(par.lookups)
    return BenchRecord(
        alpha=alpha,
        replicas=replicas,
        policy=policy.kind,
        mean_parallelization_ratio=fmean(ratios),
        mean_storage_ratio=fmean(storage),
        mean_rounds=fmean(rounds),
        mean_lookups=fmean(lookups),
    )


# Worker-side state for the process pool; populated once per worker by the
# pool initializer so cells only need to ship their (alpha, replicas) pair.
_POOL_STATE: dict = {}


def _pool_init(ledger, baselines, queries, policy, repeats, overhead) -> None:
    _POOL_STATE["args"] = (ledger, baselines, queries, policy, repeats, overhead)


def _pool_cell(cell: tuple[int, int]) -> BenchRecord:
    ledger, baselines, queries, policy, repeats, overhead = _POOL_STATE["args"]
    alpha, replicas = cell
    return _cell_record(
        ledger, baselines, queries, alpha, replicas, policy, repeats, overhead
    )


def run_sweep(
    ledger: Ledger, spec: SweepSpec, jobs: int | None = 1
) -> list[BenchRecord]:
    """Evaluate every (alpha, replicas) cell of ``spec`` on ``ledger``.

    The sequential baseline is traced once per query and reused by all
    cells.  ``jobs`` > 1 fans the cells out to a process pool; passing None
    uses the machine's CPU count.  Output order and content are independent
    of ``jobs``.
    """
    if len(ledger) == 0:
        raise EmptyLedger("cannot sweep an empty ledger")
    queries = spec.queries or deepest_query_ids(ledger, spec.deepest)
    baseline_store = build_store(ledger, ChunkStoreConfig(alpha=1, beta=1))
    baselines = {q: trace_bfs(baseline_store, q) for q in queries}

    cells = [
        (alpha, replicas)
        for alpha in spec.alpha_values
        for replicas in spec.replica_values
    ]
    if jobs is None:
        jobs = os.cpu_count() or 1
    if jobs > 1 and len(cells) > 1:
        init_args = (
            ledger,
            baselines,
            queries,
            spec.policy,
            spec.repeats,
            spec.per_chunk_index_overhead,
        )
        with ProcessPoolExecutor(
            max_workers=min(jobs, len(cells)),
            initializer=_pool_init,
            initargs=init_args,
        ) as pool:
            records = list(pool.map(_pool_cell, cells, chunksize=4))
    else:
        records = [
            _cell_record(
                ledger,
                baselines,
                queries,
                alpha,
                replicas,
                spec.policy,
                spec.repeats,
                spec.per_chunk_index_overhead,
            )
            for alpha, replicas in cells
        ]
    records.sort(key=lambda r: (r.policy, r.replicas, r.alpha))
    return records


def find_turning_points(records: Iterable[BenchRecord]) -> TurningPointFit:
    """Best alpha per beta, plus the least-squares line through those points.

    Ties on the maximal ratio resolve to the smallest alpha.  Requires at
    least two distinct replica counts; duplicate (alpha, replicas, policy)
    cells are rejected.
    """
    by_beta: dict[int, list[tuple[float, int]]] = {}
    seen: set[tuple[int, int, str]] = set()
    for rec in records:
        key = (rec.alpha, rec.replicas, rec.policy)
        if key in seen:
            raise InvalidParams(f"duplicate sweep cell {key}")
        seen.add(key)
        by_beta.setdefault(rec.replicas + 1, []).append(
            (rec.mean_parallelization_ratio, rec.alpha)
        )
    if len(by_beta) < 2:
        raise InsufficientData(
            f"turning-point fit needs >= 2 distinct replica counts, "
            f"got {len(by_beta)}"
        )
    best: list[tuple[int, int]] = []
    for beta in sorted(by_beta):
        cells = by_beta[beta]
        top_ratio = max(ratio for ratio, _ in cells)
        best_alpha = min(alpha for ratio, alpha in cells if ratio == top_ratio)
        best.append((beta, best_alpha))
    slope, intercept = linear_regression(
        [beta for beta, _ in best], [alpha for _, alpha in best]
    )
    return TurningPointFit(
        best_alpha_per_beta=tuple(best), slope=slope, intercept=intercept
    )


def emit_report(
    records: Sequence[BenchRecord],
    fit: TurningPointFit | None,
    csv_path: str | Path,
    summary_path: str | Path | None = None,
) -> Path:
    """Write records as CSV (stable column order); optionally a text summary.

    Floats are written with ``repr``, so re-parsing the file reproduces the
    records exactly and identical inputs yield identical bytes.
    """
    if not records:
        raise InvalidParams("no records to report")
    csv_path = Path(csv_path)
    try:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_COLUMNS)
            for rec in records:
                writer.writerow(
                    [
                        rec.alpha,
                        rec.replicas,
                        rec.policy,
                        repr(rec.mean_parallelization_ratio),
                        repr(rec.mean_storage_ratio),
                        repr(rec.mean_rounds),
                        repr(rec.mean_lookups),
                    ]
                )
        if summary_path is not None:
            with open(summary_path, "w", encoding="utf-8") as fh:
                fh.write(render_summary(records, fit))
    except OSError as exc:
        raise IoError(f"cannot write report: {exc}") from exc
    return csv_path


def render_summary(
    records: Sequence[BenchRecord], fit: TurningPointFit | None = None
) -> str:
    """Human-readable digest: best cell, time saving, per-beta curves."""
    if not records:
        raise InvalidParams("no records to summarise")
    best = max(
        records, key=lambda r: (r.mean_parallelization_ratio, -r.alpha, -r.replicas)
    )
    ratio = best.mean_parallelization_ratio
    saving = (1.0 - 1.0 / ratio) * 100.0 if ratio > 0 else 0.0
    lines = [
        "sweep summary",
        "=============",
        f"cells: {len(records)}",
        f"max parallelization ratio: {ratio:.4g} "
        f"(alpha={best.alpha}, replicas={best.replicas}, policy={best.policy})",
        f"time saving at best cell: {saving:.2f}%",
        f"storage ratio range: {min(r.mean_storage_ratio for r in records):.4g}"
        f" .. {max(r.mean_storage_ratio for r in records):.4g}",
        "",
        "per replica count (ratio across the alpha grid):",
    ]
    by_replicas: dict[int, list[BenchRecord]] = {}
    for rec in records:
        by_replicas.setdefault(rec.replicas, []).append(rec)
    for replicas in sorted(by_replicas):
        row = by_replicas[replicas]
        ratios = [r.mean_parallelization_ratio for r in row]
        top = max(row, key=lambda r: (r.mean_parallelization_ratio, -r.alpha))
        centre = fmean(ratios)
        spread = fmean([(x - centre) ** 2 for x in ratios]) ** 0.5
        lines.append(
            f"  replicas={replicas}: best ratio {top.mean_parallelization_ratio:.4g}"
            f" at alpha={top.alpha}; mean {centre:.4g}; spread {spread:.3g}"
        )
    if fit is not None:
        pts = ", ".join(f"({b}, {a})" for b, a in fit.best_alpha_per_beta)
        lines.append("")
        lines.append(f"best-alpha per beta: {pts}")
        lines.append(
            f"least-squares best-alpha vs beta: "
            f"slope={fit.slope:.4g}, intercept={fit.intercept:.4g}"
        )
    lines.append("")
    return "\n".join(lines)


def read_records_csv(path: str | Path) -> list[BenchRecord]:
    """Parse a CSV written by :func:`emit_report` back into records."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or tuple(reader.fieldnames) != CSV_COLUMNS:
                raise InvalidParams(f"{path}: unexpected columns {reader.fieldnames}")
            out = []
            for row in reader:
                out.append(
                    BenchRecord(
                        alpha=int(row["alpha"]),
                        replicas=int(row["replicas"]),
                        policy=row["policy"],
                        mean_parallelization_ratio=float(
                            row["mean_parallelization_ratio"]
                        ),
                        mean_storage_ratio=float(row["mean_storage_ratio"]),
                        mean_rounds=float(row["mean_rounds"]),
                        mean_lookups=float(row["mean_lookups"]),
                    )
                )
    except OSError as exc:
        raise IoError(f"cannot read report: {exc}") from exc
    return out
