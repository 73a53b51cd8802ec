"""Traceability engines: sequential breadth-first search and the round-based
parallel tracer.

Both engines answer the same question — all direct and indirect predecessors
of a transaction — and must return identical sets.  They differ only in how
lookups are issued:

* :func:`trace_bfs` pops one id at a time from a FIFO queue and pays one
  time unit per lookup.  This is the single-chunk baseline.
* :func:`trace_parallel` works in rounds.  Each round matches the pending
  set against the chunks (see :mod:`chaintrace.scheduling`), executes all
  matched lookups simultaneously, then merges the results: a newly seen id
  enters both the pending set and the result set exactly once.  Matched
  lookups hit distinct chunks by construction, so a round costs one lookup's
  worth of time regardless of its width.

Cost accounting uses the store's ``per_lookup_cost``: sequential time is
``lookups * cost``, parallel time is ``rounds * cost``, and their quotient is
the parallelization ratio (equal to lookups/rounds under the default unit
cost).  Parallelism changes rounds, never the number of lookups: every
discovered id plus the queried one is looked up exactly once.

The default mode is a single-threaded simulation whose parallelism is
accounted rather than executed.  ``threaded=True`` really forks one worker
per matched pair each round, with the merge phase as the synchronisation
barrier; results are identical in both modes.
"""

from __future__ import annotations

from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .chunks import AllocationPolicy, ChunkStore, ChunkStoreConfig, build_store
from .errors import ResultMismatch, UnknownId
from .ledger import Ledger
from .scheduling import match_pending

__all__ = [
    "TraceResult",
    "RatioReport",
    "trace_bfs",
    "trace_parallel",
    "compare",
    "compare_stores",
]


@dataclass(frozen=True)
class TraceResult:
    """A predecessor set plus the cost of computing it.

    ``lookups`` counts GetPredecessors calls (always ``len(predecessors) + 1``),
    ``rounds`` counts scheduling rounds (equal to ``lookups`` for the
    sequential engine), and ``parallel_width_avg`` is lookups/rounds — the
    mean number of lookups served per round.
    """

    predecessors: frozenset[int]
    lookups: int
    rounds: int
    simulated_time: float
    parallel_width_avg: float


@dataclass(frozen=True)
class RatioReport:
    """Baseline-vs-parallel comparison for one query."""

    parallelization_ratio: float
    baseline_time: float
    parallel_time: float
    baseline: TraceResult
    parallel: TraceResult


def trace_bfs(store: ChunkStore, tx_id: int) -> TraceResult:
    """Sequential breadth-first trace of ``tx_id``.

    Intended for the single-chunk baseline store; on a replicated store each
    lookup is routed to the transaction's primary chunk.  One lookup is
    charged per queue pop.
    """
    if tx_id not in store:
        raise UnknownId(f"transaction id {tx_id} not in store")
    found: set[int] = set()
    queue: deque[int] = deque((tx_id,))
    lookups = 0
    while queue:
        u = queue.popleft()
        preds = store.get_predecessors(store.chunks_for(u)[0], u)
        lookups += 1
        for v in sorted(preds):
            if v not in found:
                found.add(v)
                queue.append(v)
    cost = store.config.per_lookup_cost
    return TraceResult(
        predecessors=frozenset(found),
        lookups=lookups,
        rounds=lookups,
        simulated_time=lookups * cost,
        parallel_width_avg=1.0,
    )


def trace_parallel(
    store: ChunkStore, tx_id: int, threaded: bool = False
) -> TraceResult:
    """Round-based parallel trace of ``tx_id``.

    Each round schedules the pending set, serves every matched lookup in
    parallel, removes the matched ids from the pending set, and merges the
    returned predecessor sets in ascending id order (so duplicate discoveries
    across simultaneous lookups resolve deterministically).  The pending set
    shrinks by at least one id per round, so the trace terminates after at
    most ``lookups`` rounds.
    """
    if tx_id not in store:
        raise UnknownId(f"transaction id {tx_id} not in store")
    alpha = store.alpha
    adjacency = store.sorted_chunks_for
    found: set[int] = set()
    pending: list[int] = [tx_id]
    rounds = 0
    lookups = 0

    executor = ThreadPoolExecutor(max_workers=alpha) if threaded else None
    try:
        while pending:
            matched = match_pending(pending, adjacency, alpha)
            rounds += 1
            lookups += len(matched)
            if executor is not None:
                futures = [
                    executor.submit(store.get_predecessors, c, u)
                    for u, c in matched
                ]
                results = [f.result() for f in futures]  # barrier
            else:
                results = [store.get_predecessors(c, u) for u, c in matched]
            matched_ids = {u for u, _ in matched}
            pending = [u for u in pending if u not in matched_ids]
            # Merge in ascending id order: results follow the ascending
            # matched pairs and each set is walked sorted, which pins the
            # discovery order no matter how the lookups were executed.
            fresh: list[int] = []
            for preds in results:
                for v in sorted(preds):
                    if v not in found:
                        found.add(v)
                        fresh.append(v)
            if fresh:
                pending.extend(fresh)
                pending.sort()
    finally:
        if executor is not None:
            executor.shutdown(wait=False)

    cost = store.config.per_lookup_cost
    return TraceResult(
        predecessors=frozenset(found),
        lookups=lookups,
        rounds=rounds,
        simulated_time=rounds * cost,
        parallel_width_avg=lookups / rounds if rounds else 0.0,
    )


def compare_stores(
    baseline_store: ChunkStore, parallel_store: ChunkStore, tx_id: int
) -> RatioReport:
    """Trace ``tx_id`` on both stores and report the time ratio.

    Raises ResultMismatch when the two traces disagree on the predecessor
    set — a correctness violation that must never occur.
    """
    baseline = trace_bfs(baseline_store, tx_id)
    parallel = trace_parallel(parallel_store, tx_id)
    if baseline.predecessors != parallel.predecessors:
        raise ResultMismatch(
            f"trace of {tx_id}: sequential and parallel results differ"
        )
    return RatioReport(
        parallelization_ratio=baseline.simulated_time / parallel.simulated_time,
        baseline_time=baseline.simulated_time,
        parallel_time=parallel.simulated_time,
        baseline=baseline,
        parallel=parallel,
    )


def compare(ledger: Ledger, config: ChunkStoreConfig, tx_id: int) -> RatioReport:
    """Compare the single-chunk sequential baseline against ``config``.

    The baseline store uses one chunk, one copy, zero index overhead, and the
    same per-lookup cost as ``config``.
    """
    baseline_config = ChunkStoreConfig(
        alpha=1,
        beta=1,
        policy=AllocationPolicy(),
        per_lookup_cost=config.per_lookup_cost,
    )
    return compare_stores(
        build_store(ledger, baseline_config), build_store(ledger, config), tx_id
    )
