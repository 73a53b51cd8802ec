"""Round scheduling: match pending lookups to chunks with no conflicts.

Each tracing round has a set of pending transaction ids.  Every pending id
can be served by any chunk that stores a copy of it, but a chunk can serve at
most one lookup per round.  Modelling pending ids and chunks as the two sides
of a bipartite graph, the largest conflict-free batch is exactly a
maximum-cardinality matching.

The matcher is a Kuhn-style augmenting-path search.  Left vertices (pending
ids) are processed in ascending order and each adjacency list is ascending by
chunk id, so ties between equal-cardinality matchings always resolve the same
way and the schedule is deterministic.  The search stops early once every
chunk is matched, since no larger matching exists.

Everything here is a pure function of its inputs and safe to call from any
thread.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .chunks import ChunkStore

__all__ = [
    "RequestGraph",
    "Assignment",
    "build_request_graph",
    "maximum_matching",
    "schedule",
]


@dataclass(frozen=True)
class RequestGraph:
    """Bipartite graph of one round: pending ids vs. chunks.

    ``left`` lists pending transaction ids in ascending order, ``right``
    lists all chunk ids, and ``edges`` maps each pending id to the ascending
    tuple of chunks that store it.
    """

    left: tuple[int, ...]
    right: tuple[int, ...]
    edges: Mapping[int, tuple[int, ...]]

    def edge_pairs(self) -> frozenset[tuple[int, int]]:
        """All (transaction, chunk) edges as a set of pairs."""
        return frozenset(
            (u, c) for u in self.left for c in self.edges[u]
        )


@dataclass(frozen=True)
class Assignment:
    """A conflict-free batch: matched (transaction, chunk) pairs.

    No transaction and no chunk appears twice.  ``pairs`` is ascending by
    transaction id.
    """

    pairs: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.pairs)

    def transactions(self) -> tuple[int, ...]:
        return tuple(u for u, _ in self.pairs)

    def chunks(self) -> tuple[int, ...]:
        return tuple(c for _, c in self.pairs)

    def as_dict(self) -> dict[int, int]:
        return dict(self.pairs)


def build_request_graph(pending: Iterable[int], store: ChunkStore) -> RequestGraph:
    """Request graph for ``pending`` against ``store``.

    Raises UnknownId when a pending id is not stored.
    """
    left = tuple(sorted(pending))
    edges = {u: store.sorted_chunks_for(u) for u in left}
    return RequestGraph(left=left, right=tuple(range(store.alpha)), edges=edges)


def _augment(
    u: int,
    adjacency: Callable[[int], tuple[int, ...]],
    owner: dict[int, int],
    visited: set[int],
) -> bool:
    # Classic alternating-path step: claim a free chunk, or recursively
    # re-seat the current owner of an already-claimed one.
    for chunk in adjacency(u):
        if chunk in visited:
            continue
        visited.add(chunk)
        current = owner.get(chunk)
        if current is None or _augment(current, adjacency, owner, visited):
            owner[chunk] = u
            return True
    return False


def match_pending(
    pending_sorted: list[int],
    adjacency: Callable[[int], tuple[int, ...]],
    alpha: int,
) -> list[tuple[int, int]]:
    """Maximum matching over already-sorted pending ids.

    Internal fast path shared by :func:`maximum_matching` and the tracing
    engine; returns matched pairs ascending by transaction id.
    """
    owner: dict[int, int] = {}
    for u in pending_sorted:
        if len(owner) == alpha:
            break
        _augment(u, adjacency, owner, set())
    return sorted((u, c) for c, u in owner.items())


def maximum_matching(graph: RequestGraph) -> Assignment:
    """A maximum-cardinality matching of ``graph``.

    Deterministic for a given graph: augmenting paths are explored in
    ascending transaction order, chunks in ascending chunk order.
    """
    sorted_adj = {u: graph.edges[u] for u in graph.left}
    pairs = match_pending(
        list(graph.left), sorted_adj.__getitem__, len(graph.right)
    )
    return Assignment(pairs=tuple(pairs))


def schedule(pending: Iterable[int], store: ChunkStore) -> Assignment:
    """One round's conflict-free batch for ``pending`` against ``store``.

    Composition of :func:`build_request_graph` and :func:`maximum_matching`,
    mapping matched edges back to (transaction, chunk) pairs.
    """
    return maximum_matching(build_request_graph(pending, store))
