"""
Ingesting a UTXO-style transaction dump
=======================================

Real transaction graphs arrive as (inputs, outputs) records keyed by opaque
outpoint strings.  The ingester links a record to the earlier records whose
outputs it spends, keeps only records inside a position window, and assigns
fresh dense ids in position order.
"""

from pathlib import Path

from chaintrace import (
    ChunkStoreConfig,
    deepest_query_ids,
    build_store,
    compare,
    ingest_utxo,
    read_utxo_csv,
    trace_parallel,
)

fixture = Path(__file__).parent.parent / "tests" / "data" / "utxo_small.csv"

# Full dump, no window.
full = ingest_utxo(read_utxo_csv(fixture))
print(f"full dump: {len(full)} transactions, "
      f"{sum(len(t.predecessors) for t in full)} dependency edges")

# Restrict to a position window: links that cross the boundary are dropped,
# exactly as if the out-of-window records never existed.
window = lambda pos: 1000 <= pos <= 1999  # noqa: E731
ledger = ingest_utxo(read_utxo_csv(fixture), window)
print(f"windowed:  {len(ledger)} transactions, "
      f"{sum(len(t.predecessors) for t in ledger)} dependency edges")

# Trace the transaction with the deepest ancestry in the window.
(query,) = deepest_query_ids(ledger, 1)
store = build_store(ledger, ChunkStoreConfig(alpha=6, beta=2))
result = trace_parallel(store, query)
print(f"\ndeepest transaction: id={query}")
print(f"ancestors: {len(result.predecessors)}  rounds: {result.rounds}  "
      f"lookups: {result.lookups}")

report = compare(ledger, ChunkStoreConfig(alpha=6, beta=2), query)
print(f"parallelization ratio vs sequential: "
      f"{report.parallelization_ratio:.2f}")
