"""
Chunk placement policies and storage cost
=========================================

Transactions are replicated across chunks so that later lookups can run in
parallel.  This script shows where copies land under the modulo and hashed
policies and what replication does to the storage ratio.
"""

from chaintrace import (
    AllocationPolicy,
    ChunkStoreConfig,
    HASHED,
    Ledger,
    allocate_hashed,
    allocate_modulo,
    build_store,
)

# Placement is a pure function of the id (plus a seed for the hashed policy).
print("modulo, alpha=5:")
for tx_id in (0, 3, 7, 12):
    for beta in (1, 2, 3):
        print(f"  id={tx_id:2d} beta={beta}: chunks {allocate_modulo(tx_id, 5, beta)}")

print("\nhashed, alpha=5, seed=9:")
for tx_id in (0, 3, 7, 12):
    print(f"  id={tx_id:2d} beta=3: chunks {allocate_hashed(tx_id, 5, 3, seed=9)}")

# A store built over a thousand-transaction ledger.  With zero index
# overhead and beta <= alpha, modulo replication costs exactly beta times
# the single-copy baseline.
ledger = Ledger.from_pairs((i, []) for i in range(1000))
for beta in (1, 2, 3):
    stats = build_store(ledger, ChunkStoreConfig(alpha=8, beta=beta)).storage_report()
    print(f"\nmodulo alpha=8 beta={beta}: total={stats.total_entries} "
          f"ratio={stats.storage_ratio:.3f}")
    print(f"  per chunk: {stats.per_chunk_entries}")

# Hashed draws can collide on the same chunk, so its ratio is at most beta.
config = ChunkStoreConfig(alpha=8, beta=3, policy=AllocationPolicy(HASHED, seed=1))
stats = build_store(ledger, config).storage_report()
print(f"\nhashed alpha=8 beta=3: ratio={stats.storage_ratio:.3f} (<= 3)")

# Chunk indexes cost storage too; the overhead term grows with alpha.
for alpha in (4, 16, 64):
    config = ChunkStoreConfig(alpha=alpha, beta=3, per_chunk_index_overhead=0.5)
    stats = build_store(ledger, config).storage_report()
    print(f"alpha={alpha:3d} beta=3 overhead=0.5/chunk: "
          f"ratio={stats.storage_ratio:.3f}")
