"""Shared test utilities: random workloads and independent oracles.

The oracles here deliberately avoid the library's own data paths: graph
reachability walks DagView edges, matching enumerates all assignments, and
the depth bound runs a plain level-by-level expansion.  They exist to check
the production code against something that cannot share its bugs.
"""

from __future__ import annotations

import random

from chaintrace import DagView, Ledger, Transaction, build_dag


def random_ledger(rng: random.Random, n: int, max_preds: int = 3,
                  root_prob: float = 0.3) -> Ledger:
    """Random valid ledger with ids shuffled away from positions."""
    ids = list(range(10, 10 + 3 * n, 3))
    rng.shuffle(ids)
    ledger = Ledger()
    appended: list[int] = []
    for i in range(n):
        if i == 0 or rng.random() < root_prob:
            preds: set[int] = set()
        else:
            k = rng.randint(1, max_preds)
            preds = {rng.choice(appended) for _ in range(k)}
        ledger.append(Transaction(ids[i], preds))
        appended.append(ids[i])
    return ledger


def reachable_to(dag: DagView, target: int) -> frozenset[int]:
    """Vertices with a directed path to ``target`` in the DAG view.

    Independent reachability oracle: walks materialised edges only.
    """
    incoming: dict[int, list[int]] = {}
    for src, dst in dag.edges:
        incoming.setdefault(dst, []).append(src)
    seen: set[int] = set()
    stack = list(incoming.get(target, ()))
    while stack:
        v = stack.pop()
        if v in seen:
            continue
        seen.add(v)
        stack.extend(incoming.get(v, ()))
    return frozenset(seen)


def oracle_reachability(ledger: Ledger, tx_id: int) -> frozenset[int]:
    return reachable_to(build_dag(ledger), tx_id)


def brute_force_matching_size(edges: set[tuple[int, int]]) -> int:
    """Maximum matching cardinality by exhaustive search (tiny graphs only)."""
    edge_list = sorted(edges)

    def extend(index: int, used_u: frozenset, used_v: frozenset) -> int:
        best = 0
        for i in range(index, len(edge_list)):
            u, v = edge_list[i]
            if u in used_u or v in used_v:
                continue
            best = max(
                best, 1 + extend(i + 1, used_u | {u}, used_v | {v})
            )
        return best

    return extend(0, frozenset(), frozenset())


def level_depth(ledger: Ledger, tx_id: int) -> int:
    """Rounds any schedule needs at minimum: level count of the backward
    expansion from ``tx_id`` (the query itself is level 1)."""
    frontier = set(ledger.predecessors(tx_id))
    seen = set(frontier)
    depth = 1
    while frontier:
        depth += 1
        nxt: set[int] = set()
        for v in frontier:
            for p in ledger.predecessors(v):
                if p not in seen:
                    seen.add(p)
                    nxt.add(p)
        frontier = nxt
    return depth
