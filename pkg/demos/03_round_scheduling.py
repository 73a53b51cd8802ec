"""
Scheduling one round with maximum matching
==========================================

Each tracing round must pick a conflict-free batch: every pending lookup
goes to a chunk holding a copy of it, and no chunk serves two lookups at
once.  That is a bipartite maximum-matching problem between pending ids and
chunks.
"""

from chaintrace import (
    ChunkStoreConfig,
    Ledger,
    build_request_graph,
    build_store,
    maximum_matching,
    schedule,
)

ledger = Ledger.from_pairs(
    [(1, []), (2, [1]), (3, [1]), (4, [2, 3]), (5, [1, 4])]
)

# Without replicas, ids 1, 3, and 5 all live in chunk 1 (odd ids mod 2):
# the request graph has three left vertices but only one usable chunk.
store = build_store(ledger, ChunkStoreConfig(alpha=2, beta=1))
graph = build_request_graph({1, 3, 5}, store)
print("pending:", graph.left)
print("edges:  ", sorted(graph.edge_pairs()))
assignment = maximum_matching(graph)
print("matched:", assignment.pairs, "-> only one lookup this round\n")

# One replica each (beta=2) adds a second edge per id, and the matcher can
# now serve two lookups in the same round.
store2 = build_store(ledger, ChunkStoreConfig(alpha=2, beta=2))
graph2 = build_request_graph({1, 3, 5}, store2)
print("edges with replicas:", sorted(graph2.edge_pairs()))
print("matched:", maximum_matching(graph2).pairs, "\n")

# schedule() is the one-call version used by the tracer each round.  2 and 4
# are both even, so without replicas they fight over chunk 0; 4 and 5 land
# on different chunks and run together.
print("schedule({2, 4}):", schedule({2, 4}, store).pairs, "(collision)")
print("schedule({4, 5}):", schedule({4, 5}, store).pairs, "(parallel)")

# The matcher re-seats earlier choices when that grows the batch: transaction
# 1 could take either chunk, 3 only chunk 0 -- so 1 gets pushed to chunk 1.
from chaintrace.scheduling import RequestGraph

tight = RequestGraph(left=(1, 3), right=(0, 1), edges={1: (0, 1), 3: (0,)})
print("augmenting-path example:", maximum_matching(tight).pairs)
