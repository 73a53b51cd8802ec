"""Ledger builders: UTXO-style dump ingestion and a synthetic DAG generator.

UTXO ingestion reads records of the form (tx_key, position, inputs, outputs)
where inputs and outputs are opaque outpoint strings.  Transaction A is a
direct predecessor of transaction B exactly when some output of A is an
input of B and both records fall inside the selection window; links to
out-of-window records are dropped.  In-window records receive fresh dense
ids (0, 1, 2, ...) in position order, which guarantees the ledger ordering
invariant regardless of the source key scheme.

The CSV layout is ``tx_key,position,inputs,outputs`` with inputs/outputs as
semicolon-separated outpoint strings.

The synthetic generator produces workloads of a configurable shape: each
transaction is independently a root with probability ``root_fraction``;
every non-root draws an in-degree from the configured distribution and picks
that many predecessors uniformly from the transactions already generated.
All randomness comes from a counter-based 64-bit stream, so output is
byte-identical for identical parameters on any platform.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Iterator

import numpy as np

from .errors import InvalidParams, MalformedRecord, UnsortedInput
from .hashing import mix64, stream_unit_array
from .ledger import Ledger, Transaction

UNIFORM = "uniform"
GEOMETRIC = "geometric"

_GEOMETRIC_P = 0.5

__all__ = [
    "UNIFORM",
    "GEOMETRIC",
    "UtxoRecord",
    "SyntheticDagParams",
    "read_utxo_csv",
    "ingest_utxo",
    "generate_ledger",
]


@dataclass(frozen=True)
class UtxoRecord:
    """One transaction from a UTXO-style dump."""

    tx_key: str
    position: int
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]


def _split_outpoints(cell: str) -> tuple[str, ...]:
    cell = cell.strip()
    if not cell:
        return ()
    return tuple(part.strip() for part in cell.split(";"))


def read_utxo_csv(path: str | Path) -> Iterator[UtxoRecord]:
    """Stream UtxoRecords from a CSV file with a header row."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"tx_key", "position", "inputs", "outputs"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise MalformedRecord(
                f"{path}: expected columns tx_key,position,inputs,outputs"
            )
        for lineno, row in enumerate(reader, start=2):
            try:
                yield UtxoRecord(
                    tx_key=row["tx_key"],
                    position=int(row["position"]),
                    inputs=_split_outpoints(row["inputs"]),
                    outputs=_split_outpoints(row["outputs"]),
                )
            except (TypeError, ValueError) as exc:
                raise MalformedRecord(f"{path}:{lineno}: {exc}") from exc


def ingest_utxo(
    records: Iterable[UtxoRecord],
    window: Callable[[int], bool] | None = None,
) -> Ledger:
    """Convert a position-sorted record stream into a ledger.

    ``window`` selects the in-scope positions; None admits everything.
    Raises UnsortedInput when positions decrease, and MalformedRecord when
    two records claim the same outpoint as an output.
    """
    ledger = Ledger()
    producers: dict[str, int] = {}
    last_position: int | None = None
    for rec in records:
        if last_position is not None and rec.position < last_position:
            raise UnsortedInput(
                f"record {rec.tx_key!r} at position {rec.position} after "
                f"position {last_position}"
            )
        last_position = rec.position
        if window is not None and not window(rec.position):
            continue
        tx_id = len(ledger)
        preds = {producers[i] for i in rec.inputs if i in producers}
        for out in rec.outputs:
            if out in producers:
                raise MalformedRecord(
                    f"outpoint {out!r} produced by two records"
                )
            producers[out] = tx_id
        ledger.append(Transaction(tx_id, preds))
    return ledger


@dataclass(frozen=True)
class SyntheticDagParams:
    """Shape parameters for the synthetic workload generator."""

    n: int
    max_indegree: int = 3
    indegree_distribution: str = UNIFORM
    root_fraction: float = 0.25
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidParams(f"n must be >= 0, got {self.n}")
        if self.max_indegree < 0:
            raise InvalidParams(f"max_indegree must be >= 0, got {self.max_indegree}")
        if self.indegree_distribution not in (UNIFORM, GEOMETRIC):
            raise InvalidParams(
                f"unknown indegree distribution {self.indegree_distribution!r}"
            )
        if not 0.0 < self.root_fraction <= 1.0:
            raise InvalidParams(
                f"root_fraction must be in (0, 1], got {self.root_fraction}"
            )


def generate_ledger(params: SyntheticDagParams) -> Ledger:
    """Deterministic synthetic ledger with dense ids 0..n-1.

    Transaction 0 is always a root.  Duplicate predecessor draws collapse,
    so realised in-degrees can fall below the drawn value.
    """
    n = params.n
    ledger = Ledger()
    if n == 0:
        return ledger
    if params.max_indegree == 0:
        for i in range(n):
            ledger.append(Transaction(i))
        return ledger

    root_seed = mix64(params.seed ^ 1)
    degree_seed = mix64(params.seed ^ 2)
    pred_seed = mix64(params.seed ^ 3)

    is_root = stream_unit_array(root_seed, 0, n) < params.root_fraction
    is_root[0] = True

    deg_units = stream_unit_array(degree_seed, 0, n)
    if params.indegree_distribution == UNIFORM:
        degrees = 1 + np.floor(deg_units * params.max_indegree).astype(np.int64)
    else:
        # Truncated geometric on {1, 2, ...}, success probability 1/2.
        raw = 1 + np.floor(
            np.log1p(-deg_units) / math.log(1.0 - _GEOMETRIC_P)
        ).astype(np.int64)
        degrees = np.minimum(raw, params.max_indegree)
    degrees = np.minimum(degrees, params.max_indegree)

    pick_units = stream_unit_array(
        pred_seed, 0, n * params.max_indegree
    ).reshape(n, params.max_indegree)

    for i in range(n):
        if is_root[i]:
            ledger.append(Transaction(i))
            continue
        k = int(degrees[i])
        preds = {int(u * i) for u in pick_units[i, :k]}
        ledger.append(Transaction(i, preds))
    return ledger
