import pytest

from chaintrace import Ledger, SyntheticDagParams, deepest_query_ids, generate_ledger

# Frozen benchmark workload: wide/shallow synthetic DAG at n=1e5.  The shape
# parameters were fixed once (together with the goldens derived from them)
# and must not drift; the generator's counter-based stream keeps the ledger
# byte-identical across platforms.
BENCH_WORKLOAD_PARAMS = SyntheticDagParams(
    n=100_000,
    max_indegree=3,
    indegree_distribution="geometric",
    root_fraction=0.572,
    seed=1,
)
BENCH_QUERY_COUNT = 20


@pytest.fixture
def example_ledger() -> Ledger:
    """The five-transaction worked example used across the tests.

    1 has no predecessors; 2 and 3 depend on 1; 4 on {2, 3}; 5 on {1, 4}.
    """
    return Ledger.from_pairs(
        [(1, []), (2, [1]), (3, [1]), (4, [2, 3]), (5, [1, 4])]
    )


@pytest.fixture(scope="session")
def bench_workload() -> tuple[Ledger, tuple[int, ...]]:
    """The frozen n=1e5 workload plus its 20 deepest query ids."""
    ledger = generate_ledger(BENCH_WORKLOAD_PARAMS)
    queries = deepest_query_ids(ledger, BENCH_QUERY_COUNT)
    return ledger, queries
