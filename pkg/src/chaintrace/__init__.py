"""chaintrace: parallel predecessor tracing over append-only ledgers.

The library models a totally ordered transaction ledger whose entries point
at their direct predecessors, replicates the (id, predecessors) pairs across
independently accessible chunks, and answers "all predecessors of X" queries
either sequentially (breadth-first baseline) or in rounds whose lookups are
packed by bipartite maximum matching.  A benchmark harness sweeps chunk and
replica counts and reports parallelization and storage ratios.
"""

from .bench import (
    BenchRecord,
    SweepSpec,
    TurningPointFit,
    deepest_query_ids,
    emit_report,
    find_turning_points,
    read_records_csv,
    render_summary,
    run_sweep,
)
from .chunks import (
    HASHED,
    MODULO,
    AllocationPolicy,
    ChunkStore,
    ChunkStoreConfig,
    StorageStats,
    allocate_hashed,
    allocate_modulo,
    build_store,
)
from .errors import (
    ChaintraceError,
    DuplicateId,
    EmptyLedger,
    InsufficientData,
    InvalidParams,
    IoError,
    MalformedRecord,
    NotInChunk,
    ResultMismatch,
    UnknownId,
    UnknownPredecessor,
    UnsortedInput,
)
from .ingest import (
    SyntheticDagParams,
    UtxoRecord,
    generate_ledger,
    ingest_utxo,
    read_utxo_csv,
)
from .ledger import (
    DagView,
    Ledger,
    Transaction,
    build_dag,
    transitive_predecessors,
)
from .scheduling import (
    Assignment,
    RequestGraph,
    build_request_graph,
    maximum_matching,
    schedule,
)
from .tracing import (
    RatioReport,
    TraceResult,
    compare,
    compare_stores,
    trace_bfs,
    trace_parallel,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # ledger
    "Transaction",
    "Ledger",
    "DagView",
    "build_dag",
    "transitive_predecessors",
    # chunks
    "MODULO",
    "HASHED",
    "AllocationPolicy",
    "ChunkStoreConfig",
    "ChunkStore",
    "StorageStats",
    "allocate_modulo",
    "allocate_hashed",
    "build_store",
    # scheduling
    "RequestGraph",
    "Assignment",
    "build_request_graph",
    "maximum_matching",
    "schedule",
    # tracing
    "TraceResult",
    "RatioReport",
    "trace_bfs",
    "trace_parallel",
    "compare",
    "compare_stores",
    # ingest
    "UtxoRecord",
    "SyntheticDagParams",
    "read_utxo_csv",
    "ingest_utxo",
    "generate_ledger",
    # bench
    "SweepSpec",
    "BenchRecord",
    "TurningPointFit",
    "deepest_query_ids",
    "run_sweep",
    "find_turning_points",
    "emit_report",
    "render_summary",
    "read_records_csv",
    # errors
    "ChaintraceError",
    "DuplicateId",
    "UnknownPredecessor",
    "UnknownId",
    "NotInChunk",
    "ResultMismatch",
    "UnsortedInput",
    "MalformedRecord",
    "InvalidParams",
    "InsufficientData",
    "EmptyLedger",
    "IoError",
]
