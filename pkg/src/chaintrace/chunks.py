"""Replicated chunk placement for transaction lookups.

Transactions are spread over ``alpha`` independently accessible chunks so
that lookups against distinct chunks can run in parallel.  Each transaction
is stored in up to ``beta`` chunks (its original plus replicas), under one of
two placement policies:

* ``modulo`` — the primary chunk is ``id % alpha``; replica r occupies the
  next chunk along, ``(id % alpha + r) % alpha``.  Deterministic and
  seed-independent.  Copies land in distinct chunks, so the effective copy
  count is ``min(beta, alpha)``.
* ``hashed`` — replica r lands at ``H(seed, r, id) % alpha`` for a keyed
  64-bit avalanche hash H.  Draws that collide on the same chunk are
  deduplicated (a transaction is stored at most once per chunk), so a
  transaction may end up with fewer than ``beta`` copies.

The store is immutable after build.  Reads against distinct chunks are
contention-free by construction; the tracing simulator admits at most one
in-flight lookup per chunk per round.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import InvalidParams, IoError, NotInChunk, UnknownId
from .hashing import GOLDEN, MASK64, mix64, mix64_array, stream_value
from .ledger import Ledger, Transaction

MODULO = "modulo"
HASHED = "hashed"

_SNAPSHOT_MAGIC = b"CTSNAP01"

__all__ = [
    "MODULO",
    "HASHED",
    "AllocationPolicy",
    "ChunkStoreConfig",
    "StorageStats",
    "allocate_modulo",
    "allocate_hashed",
    "ChunkStore",
    "build_store",
]


@dataclass(frozen=True)
class AllocationPolicy:
    """Placement rule mapping a transaction id to its chunk set.

    ``seed`` is only consulted by the hashed policy; modulo placement is
    deterministic and seed-independent.
    """

    kind: str = MODULO
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in (MODULO, HASHED):
            raise InvalidParams(f"unknown allocation policy {self.kind!r}")


@dataclass(frozen=True)
class ChunkStoreConfig:
    """Store shape and cost model.

    ``beta`` counts total stored copies per transaction (the original plus
    replicas).  External interfaces expose ``replicas = beta - 1`` instead,
    matching the axis convention of the benchmark reports.

    ``per_lookup_cost`` is the abstract time charged per GetPredecessors
    call; ``per_chunk_index_overhead`` is storage (in entry-equivalents)
    charged per chunk for its index.

    ``replicas_colocated`` reproduces a degenerate reading of modulo
    replication in which every copy lands on the primary chunk; since a chunk
    holds at most one copy of a transaction this collapses to a single stored
    copy.  Kept behind this flag for comparison runs only.
    """

    alpha: int
    beta: int = 1
    policy: AllocationPolicy = field(default_factory=AllocationPolicy)
    per_lookup_cost: float = 1.0
    per_chunk_index_overhead: float = 0.0
    replicas_colocated: bool = False

    def __post_init__(self) -> None:
        if self.alpha < 1:
            raise InvalidParams(f"alpha must be >= 1, got {self.alpha}")
        if self.beta < 1:
            raise InvalidParams(f"beta must be >= 1, got {self.beta}")
        if self.per_lookup_cost <= 0:
            raise InvalidParams("per_lookup_cost must be positive")
        if self.per_chunk_index_overhead < 0:
            raise InvalidParams("per_chunk_index_overhead must be >= 0")
        if self.replicas_colocated and self.policy.kind != MODULO:
            raise InvalidParams("replicas_colocated applies to the modulo policy only")


@dataclass(frozen=True)
class StorageStats:
    """Stored-entry accounting for one built store.

    ``storage_ratio`` is (total_entries + index_overhead) / ledger length,
    i.e. relative to a single-copy, single-chunk baseline.
    """

    total_entries: int
    index_overhead: float
    per_chunk_entries: tuple[int, ...]
    storage_ratio: float


def allocate_modulo(tx_id: int, alpha: int, beta: int) -> list[int]:
    """Chunk ids for ``tx_id`` under modulo placement.

    Returns ``min(beta, alpha)`` distinct chunks; the first is
    ``tx_id % alpha`` and replica r occupies ``(tx_id % alpha + r) % alpha``.
    """
    if alpha < 1 or beta < 1:
        raise InvalidParams("alpha and beta must be >= 1")
    base = tx_id % alpha
    return [(base + r) % alpha for r in range(min(beta, alpha))]


def _replica_keys(seed: int, beta: int) -> list[int]:
    # Per-replica derived keys; replica r hashes ids against key r.
    base = mix64(seed)
    return [stream_value(base, r) for r in range(beta)]


def allocate_hashed(tx_id: int, alpha: int, beta: int, seed: int) -> list[int]:
    """Chunk ids for ``tx_id`` under hashed placement.

    Replica r draws ``mix64(key_r ^ tx_id) % alpha`` with a per-replica key
    derived from ``seed``.  Duplicate chunk hits are removed (keeping first
    occurrence), so the result holds between 1 and ``min(beta, alpha)``
    distinct chunks.  Deterministic given ``seed``.
    """
    if alpha < 1 or beta < 1:
        raise InvalidParams("alpha and beta must be >= 1")
    out: list[int] = []
    for key in _replica_keys(seed, beta):
        chunk = mix64(key ^ tx_id) % alpha
        if chunk not in out:
            out.append(chunk)
    return out


class ChunkStore:
    """``alpha`` chunks holding replicated (id, predecessors) pairs.

    Chunk membership follows deterministically from the ledger and the
    allocation policy, so the store keeps a single copy of the pair data and
    answers per-chunk queries through the placement rule.  All contracts are
    phrased against the replicated view: a GetPredecessors call succeeds
    exactly when the transaction is allocated to the queried chunk.
    """

    __slots__ = (
        "_ledger",
        "_config",
        "_alloc_cache",
        "_sorted_alloc_cache",
        "_hash_keys",
        "_stats",
    )

    def __init__(self, ledger: Ledger, config: ChunkStoreConfig) -> None:
        self._ledger = ledger
        self._config = config
        self._alloc_cache: dict[int, tuple[int, ...]] = {}
        self._sorted_alloc_cache: dict[int, tuple[int, ...]] = {}
        if config.policy.kind == HASHED:
            self._hash_keys = _replica_keys(config.policy.seed, config.beta)
        else:
            self._hash_keys = []
        self._stats: StorageStats | None = None

    @property
    def ledger(self) -> Ledger:
        return self._ledger

    @property
    def config(self) -> ChunkStoreConfig:
        return self._config

    @property
    def alpha(self) -> int:
        return self._config.alpha

    @property
    def beta(self) -> int:
        return self._config.beta

    def __contains__(self, tx_id: int) -> bool:
        return tx_id in self._ledger

    def __len__(self) -> int:
        return len(self._ledger)

    def chunks_for(self, tx_id: int) -> tuple[int, ...]:
        """Chunks holding ``tx_id``, primary first."""
        cached = self._alloc_cache.get(tx_id)
        if cached is not None:
            return cached
        if tx_id not in self._ledger:
            raise UnknownId(f"transaction id {tx_id} not in store")
        cfg = self._config
        if cfg.policy.kind == MODULO:
            if cfg.replicas_colocated:
                chunks: tuple[int, ...] = (tx_id % cfg.alpha,)
            else:
                chunks = tuple(allocate_modulo(tx_id, cfg.alpha, cfg.beta))
        else:
            out: list[int] = []
            alpha = cfg.alpha
            for key in self._hash_keys:
                chunk = mix64(key ^ tx_id) % alpha
                if chunk not in out:
                    out.append(chunk)
            chunks = tuple(out)
        self._alloc_cache[tx_id] = chunks
        return chunks

    def sorted_chunks_for(self, tx_id: int) -> tuple[int, ...]:
        """Chunks holding ``tx_id`` in ascending chunk order."""
        cached = self._sorted_alloc_cache.get(tx_id)
        if cached is None:
            cached = tuple(sorted(self.chunks_for(tx_id)))
            self._sorted_alloc_cache[tx_id] = cached
        return cached

    def get_predecessors(self, chunk: int, tx_id: int) -> frozenset[int]:
        """Direct predecessors of ``tx_id`` as stored in ``chunk``.

        Raises NotInChunk when the transaction is not allocated to that
        chunk; tracing schedules are expected to route lookups only to
        holding chunks, so NotInChunk signals a scheduler bug.
        """
        if chunk not in self.chunks_for(tx_id):
            raise NotInChunk(f"transaction {tx_id} is not stored in chunk {chunk}")
        return self._ledger.predecessors(tx_id)

    def ids_in_chunk(self, chunk: int) -> list[int]:
        """Transaction ids stored in ``chunk``, in ledger order."""
        if chunk < 0 or chunk >= self._config.alpha:
            raise InvalidParams(f"chunk {chunk} outside [0, {self._config.alpha})")
        return [tx.id for tx in self._ledger if chunk in self.chunks_for(tx.id)]

    def storage_report(self) -> StorageStats:
        """Exact per-chunk entry counts and the storage ratio."""
        if self._stats is None:
            self._stats = self._compute_stats()
        return self._stats

    def _compute_stats(self) -> StorageStats:
        cfg = self._config
        n = len(self._ledger)
        alpha = cfg.alpha
        if n == 0:
            per_chunk = np.zeros(alpha, dtype=np.int64)
        else:
            ids = np.fromiter(
                (tx.id for tx in self._ledger), dtype=np.uint64, count=n
            )
            if cfg.policy.kind == MODULO:
                residue_counts = np.bincount(
                    (ids % np.uint64(alpha)).astype(np.int64), minlength=alpha
                )
                if cfg.replicas_colocated:
                    per_chunk = residue_counts
                else:
                    copies = min(cfg.beta, alpha)
                    per_chunk = sum(
                        np.roll(residue_counts, r) for r in range(copies)
                    )
            else:
                draws = np.empty((cfg.beta, n), dtype=np.int64)
                for r, key in enumerate(self._hash_keys):
                    hashed = mix64_array(np.uint64(key) ^ ids)
                    draws[r] = (hashed % np.uint64(alpha)).astype(np.int64)
                draws.sort(axis=0)
                fresh = np.ones_like(draws, dtype=bool)
                fresh[1:] = draws[1:] != draws[:-1]
                per_chunk = np.bincount(draws[fresh], minlength=alpha)
        total = int(per_chunk.sum())
        overhead = alpha * cfg.per_chunk_index_overhead
        ratio = (total + overhead) / n if n else 1.0
        return StorageStats(
            total_entries=total,
            index_overhead=overhead,
            per_chunk_entries=tuple(int(c) for c in per_chunk),
            storage_ratio=ratio,
        )

    # -- binary snapshot ---------------------------------------------------
    # Versioned header followed by the config and the raw (id, preds) pairs;
    # lets benchmark reruns skip JSONL parsing and re-validation.

    def save(self, path: str | Path) -> None:
        cfg = self._config
        try:
            with open(path, "wb") as fh:
                fh.write(_SNAPSHOT_MAGIC)
                policy_kind = 0 if cfg.policy.kind == MODULO else 1
                fh.write(
                    struct.pack(
                        "<IIBQddBQ",
                        cfg.alpha,
                        cfg.beta,
                        policy_kind,
                        cfg.policy.seed & MASK64,
                        cfg.per_lookup_cost,
                        cfg.per_chunk_index_overhead,
                        1 if cfg.replicas_colocated else 0,
                        len(self._ledger),
                    )
                )
                for tx in self._ledger:
                    preds = sorted(tx.predecessors)
                    fh.write(struct.pack("<QI", tx.id, len(preds)))
                    fh.write(struct.pack(f"<{len(preds)}Q", *preds))
        except OSError as exc:
            raise IoError(f"cannot write snapshot {path}: {exc}") from exc

    @classmethod
    def load(cls, path: str | Path) -> "ChunkStore":
        try:
            with open(path, "rb") as fh:
                magic = fh.read(len(_SNAPSHOT_MAGIC))
                if magic != _SNAPSHOT_MAGIC:
                    raise IoError(f"{path} is not a chunk-store snapshot")
                header = struct.calcsize("<IIBQddBQ")
                alpha, beta, kind, seed, cost, overhead, colocated, n = struct.unpack(
                    "<IIBQddBQ", fh.read(header)
                )
                ledger = Ledger()
                for _ in range(n):
                    tx_id, k = struct.unpack("<QI", fh.read(12))
                    preds = struct.unpack(f"<{k}Q", fh.read(8 * k)) if k else ()
                    ledger.append(Transaction(tx_id, preds))
        except OSError as exc:
            raise IoError(f"cannot read snapshot {path}: {exc}") from exc
        except struct.error as exc:
            raise IoError(f"truncated snapshot {path}: {exc}") from exc
        config = ChunkStoreConfig(
            alpha=alpha,
            beta=beta,
            policy=AllocationPolicy(MODULO if kind == 0 else HASHED, seed),
            per_lookup_cost=cost,
            per_chunk_index_overhead=overhead,
            replicas_colocated=bool(colocated),
        )
        return cls(ledger, config)


def build_store(ledger: Ledger, config: ChunkStoreConfig) -> ChunkStore:
    """Build the chunk store for ``ledger`` under ``config``."""
    return ChunkStore(ledger, config)
