"""Append-only transaction ledger, its DAG view, and a brute-force trace oracle.

A ledger is a totally ordered, append-only list of transactions.  Each
transaction pairs an identifier with the set of identifiers of its direct
predecessors, and every predecessor must already be present when the
transaction is appended.  That single rule makes the induced graph acyclic by
construction: all dependency edges point from earlier list positions to later
ones.

Identifiers are unsigned 64-bit integers.  They do not have to be consecutive
or equal to the list position; only uniqueness and the predecessor-exists rule
are enforced.

Concurrency: the ledger is single-writer.  Once fully built it is never
mutated and can be read from any number of threads without locking.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .errors import (
    DuplicateId,
    InvalidParams,
    MalformedRecord,
    UnknownId,
    UnknownPredecessor,
)

MAX_TX_ID = (1 << 64) - 1

__all__ = [
    "MAX_TX_ID",
    "Transaction",
    "Ledger",
    "DagView",
    "build_dag",
    "transitive_predecessors",
]


def _checked_id(value: int) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidParams(f"transaction id must be an integer, got {value!r}")
    if value < 0 or value > MAX_TX_ID:
        raise InvalidParams(f"transaction id {value} outside [0, 2**64)")
    return value


@dataclass(frozen=True)
class Transaction:
    """One ledger entry: an identifier plus its direct-predecessor ids.

    ``predecessors`` accepts any iterable of ids; it is stored as a frozenset.
    A transaction that lists itself, or lists the same predecessor twice, is
    rejected outright.
    """

    id: int
    predecessors: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        tx_id = _checked_id(self.id)
        raw = self.predecessors
        if isinstance(raw, (set, frozenset)):
            preds = frozenset(_checked_id(p) for p in raw)
        else:
            listed = tuple(raw)
            preds = frozenset(_checked_id(p) for p in listed)
            if len(preds) != len(listed):
                raise InvalidParams(
                    f"transaction {tx_id} lists a predecessor more than once"
                )
        if tx_id in preds:
            raise InvalidParams(f"transaction {tx_id} lists itself as a predecessor")
        object.__setattr__(self, "id", tx_id)
        object.__setattr__(self, "predecessors", preds)


class Ledger:
    """Append-only ordered list of transactions with id-based lookup."""

    __slots__ = ("_transactions", "_preds", "_sorted_preds", "_positions")

    def __init__(self, transactions: Iterable[Transaction] = ()) -> None:
        self._transactions: list[Transaction] = []
        self._preds: dict[int, frozenset[int]] = {}
        self._sorted_preds: dict[int, tuple[int, ...]] = {}
        self._positions: dict[int, int] = {}
        for tx in transactions:
            self.append(tx)

    def append(self, tx: Transaction) -> None:
        """Append ``tx``; a rejected append leaves the ledger untouched.

        Raises:
            DuplicateId: the id is already present.
            UnknownPredecessor: a predecessor id has not been appended yet.
        """
        if tx.id in self._preds:
            raise DuplicateId(f"transaction id {tx.id} already in ledger")
        for p in tx.predecessors:
            if p not in self._preds:
                raise UnknownPredecessor(
                    f"transaction {tx.id} references unknown predecessor {p}"
                )
        self._positions[tx.id] = len(self._transactions)
        self._transactions.append(tx)
        self._preds[tx.id] = tx.predecessors
        self._sorted_preds[tx.id] = tuple(sorted(tx.predecessors))

    def __len__(self) -> int:
        return len(self._transactions)

    def __iter__(self) -> Iterator[Transaction]:
        return iter(self._transactions)

    def __contains__(self, tx_id: int) -> bool:
        return tx_id in self._preds

    def transaction(self, tx_id: int) -> Transaction:
        return self._transactions[self.position(tx_id)]

    def predecessors(self, tx_id: int) -> frozenset[int]:
        """Direct-predecessor ids of ``tx_id``."""
        try:
            return self._preds[tx_id]
        except KeyError:
            raise UnknownId(f"transaction id {tx_id} not in ledger") from None

    def sorted_predecessors(self, tx_id: int) -> tuple[int, ...]:
        """Direct predecessors in ascending order (deterministic iteration)."""
        try:
            return self._sorted_preds[tx_id]
        except KeyError:
            raise UnknownId(f"transaction id {tx_id} not in ledger") from None

    def position(self, tx_id: int) -> int:
        """0-based list position of ``tx_id``."""
        try:
            return self._positions[tx_id]
        except KeyError:
            raise UnknownId(f"transaction id {tx_id} not in ledger") from None

    def ids(self) -> list[int]:
        """All transaction ids in ledger order."""
        return [tx.id for tx in self._transactions]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, Iterable[int]]]) -> "Ledger":
        """Build a ledger from (id, predecessors) pairs in order."""
        return cls(Transaction(tx_id, preds) for tx_id, preds in pairs)

    # -- JSON Lines interchange format ------------------------------------
    # One object per line, fields `id` (integer) and `preds` (array of
    # integers), lines in ledger order.  Shared by the generator, the UTXO
    # ingester, and the CLI.

    def to_jsonl(self, path: str | Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for tx in self._transactions:
                fh.write(
                    json.dumps(
                        {"id": tx.id, "preds": sorted(tx.predecessors)},
                        separators=(",", ":"),
                    )
                )
                fh.write("\n")

    @classmethod
    def from_jsonl(cls, path: str | Path) -> "Ledger":
        """Load a ledger, re-validating every append along the way."""
        ledger = cls()
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line)
                    tx = Transaction(obj["id"], obj["preds"])
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise MalformedRecord(f"{path}:{lineno}: {exc}") from exc
                ledger.append(tx)
        return ledger


@dataclass(frozen=True)
class DagView:
    """Graph view of a ledger: vertex per transaction, edge (j, i) when j is a
    direct predecessor of i."""

    vertices: frozenset[int]
    edges: frozenset[tuple[int, int]]


def build_dag(ledger: Ledger) -> DagView:
    """Materialise the dependency graph of ``ledger``."""
    vertices = frozenset(ledger.ids())
    edges = frozenset(
        (j, tx.id) for tx in ledger for j in tx.predecessors
    )
    return DagView(vertices=vertices, edges=edges)


def transitive_predecessors(ledger: Ledger, tx_id: int) -> frozenset[int]:
    """All direct and indirect predecessors of ``tx_id``.

    Brute-force reverse depth-first walk over the stored predecessor sets.
    This is the reference oracle used by the tests; it favours clarity over
    speed.
    """
    stack = list(ledger.sorted_predecessors(tx_id))
    found: set[int] = set()
    while stack:
        v = stack.pop()
        if v in found:
            continue
        found.add(v)
        stack.extend(ledger.sorted_predecessors(v))
    return frozenset(found)
