import random

import pytest

from chaintrace import (
    AllocationPolicy,
    BenchRecord,
    EmptyLedger,
    HASHED,
    InsufficientData,
    InvalidParams,
    Ledger,
    SweepSpec,
    SyntheticDagParams,
    TurningPointFit,
    deepest_query_ids,
    emit_report,
    find_turning_points,
    generate_ledger,
    read_records_csv,
    render_summary,
    run_sweep,
    transitive_predecessors,
)


def record(alpha, replicas, ratio, policy="modulo", storage=1.0, rounds=1.0,
           lookups=1.0):
    return BenchRecord(alpha, replicas, policy, ratio, storage, rounds, lookups)


@pytest.fixture(scope="module")
def wide_ledger():
    return generate_ledger(
        SyntheticDagParams(n=3000, max_indegree=3, root_fraction=0.35, seed=5)
    )


# Frozen on the first harness run over the bench workload; guards the whole
# generator -> store -> scheduler -> tracer pipeline against regressions.
GOLDEN_A13_R8_RATIO = 6.840438727938728


class TestWorkloadGolden:
    def test_wide_shallow_cell_ratio(self, bench_workload):
        ledger, queries = bench_workload
        spec = SweepSpec(alpha_values=(13,), replica_values=(8,), queries=queries)
        (rec,) = run_sweep(ledger, spec)
        assert rec.mean_parallelization_ratio > 3.0
        assert rec.mean_parallelization_ratio == pytest.approx(
            GOLDEN_A13_R8_RATIO, rel=1e-12
        )


class TestDeepestQueries:
    def test_matches_brute_force(self, wide_ledger):
        got = deepest_query_ids(wide_ledger, 5)
        sizes = {
            tx.id: len(transitive_predecessors(wide_ledger, tx.id))
            for tx in wide_ledger
        }
        expected = sorted(sizes, key=lambda i: (-sizes[i], i))[:5]
        assert list(got) == expected

    def test_empty_ledger(self):
        with pytest.raises(EmptyLedger):
            deepest_query_ids(Ledger(), 3)


class TestRunSweep:
    def test_baseline_cell(self, example_ledger):
        spec = SweepSpec(alpha_values=(1,), replica_values=(0,), queries=(5,))
        (rec,) = run_sweep(example_ledger, spec)
        assert rec.mean_parallelization_ratio == 1.0
        assert rec.mean_storage_ratio == 1.0
        assert rec.mean_lookups == 5.0

    def test_example_cell(self, example_ledger):
        spec = SweepSpec(alpha_values=(2,), replica_values=(0,), queries=(5,))
        (rec,) = run_sweep(example_ledger, spec)
        assert rec.mean_parallelization_ratio == 5 / 3
        assert rec.mean_rounds == 3.0

    def test_empty_ledger(self):
        spec = SweepSpec(alpha_values=(1,), replica_values=(0,), queries=(1,))
        with pytest.raises(EmptyLedger):
            run_sweep(Ledger(), spec)

    def test_lookups_invariant_across_cells(self, wide_ledger):
        spec = SweepSpec(
            alpha_values=(1, 2, 5, 9),
            replica_values=(0, 1, 3),
            deepest=5,
        )
        records = run_sweep(wide_ledger, spec)
        lookups = {rec.mean_lookups for rec in records}
        assert len(lookups) == 1
        queries = deepest_query_ids(wide_ledger, 5)
        expected = sum(
            len(transitive_predecessors(wide_ledger, q)) + 1 for q in queries
        ) / len(queries)
        assert lookups.pop() == expected

    def test_ratio_bounds_hold_per_cell(self, wide_ledger):
        spec = SweepSpec(alpha_values=(1, 3, 7), replica_values=(0, 2), deepest=5)
        for rec in run_sweep(wide_ledger, spec):
            assert 1.0 <= rec.mean_parallelization_ratio <= rec.alpha

    def test_more_replicas_never_slow_the_mean(self, wide_ledger):
        # Statistical trend: under the hashed policy with many repeats the
        # mean ratio is non-decreasing over the first replica steps.
        spec = SweepSpec(
            alpha_values=(4,),
            replica_values=(0, 1, 2),
            policy=AllocationPolicy(HASHED, seed=3),
            deepest=10,
            repeats=20,
        )
        records = run_sweep(wide_ledger, spec)
        by_replicas = {rec.replicas: rec.mean_parallelization_ratio
                       for rec in records}
        assert by_replicas[1] >= by_replicas[0]
        assert by_replicas[2] >= by_replicas[1]

    def test_jobs_do_not_change_records(self, wide_ledger):
        spec = SweepSpec(
            alpha_values=(2, 6),
            replica_values=(0, 2),
            policy=AllocationPolicy(HASHED, seed=9),
            deepest=4,
            repeats=3,
        )
        assert run_sweep(wide_ledger, spec, jobs=1) == \
            run_sweep(wide_ledger, spec, jobs=2)

    def test_modulo_repeat_invariance(self, wide_ledger):
        one = SweepSpec(alpha_values=(3,), replica_values=(1,), deepest=4,
                        repeats=1)
        many = SweepSpec(alpha_values=(3,), replica_values=(1,), deepest=4,
                         repeats=7)
        assert run_sweep(wide_ledger, one) == run_sweep(wide_ledger, many)

    def test_invalid_spec(self):
        with pytest.raises(InvalidParams):
            SweepSpec(alpha_values=(), replica_values=(0,))
        with pytest.raises(InvalidParams):
            SweepSpec(alpha_values=(1,), replica_values=(-1,))
        with pytest.raises(InvalidParams):
            SweepSpec(alpha_values=(1,), replica_values=(0,), repeats=0)


class TestFindTurningPoints:
    def test_fit_through_known_maxima(self):
        records = []
        for alpha in range(1, 16):
            records.append(record(alpha, 1, 3.0 - abs(alpha - 6) * 0.1))
            records.append(record(alpha, 5, 5.0 - abs(alpha - 12) * 0.1))
        fit = find_turning_points(records)
        assert fit.best_alpha_per_beta == ((2, 6), (6, 12))
        # Two points define the line exactly.
        assert fit.slope == pytest.approx(1.5)
        assert fit.intercept == pytest.approx(3.0)

    def test_ties_resolve_to_smallest_alpha(self):
        records = [record(a, 0, 2.0) for a in (1, 2, 3)]
        records += [record(a, 1, 3.0 if a >= 2 else 1.0) for a in (1, 2, 3)]
        fit = find_turning_points(records)
        assert fit.best_alpha_per_beta == ((1, 1), (2, 2))

    def test_single_beta_insufficient(self):
        with pytest.raises(InsufficientData):
            find_turning_points([record(a, 2, 1.0) for a in (1, 2)])

    def test_duplicate_cells_rejected(self):
        with pytest.raises(InvalidParams):
            find_turning_points([record(1, 0, 1.0), record(1, 0, 1.1)])

    def test_argmax_matches_table_scan(self):
        rng = random.Random(77)
        records = []
        expected = []
        for replicas in range(4):
            peak = rng.randint(2, 14)
            ratios = [
                (alpha, 4.0 - 0.05 * (alpha - peak) ** 2)
                for alpha in range(1, 16)
            ]
            records += [record(a, replicas, r) for a, r in ratios]
            best = max(ratios, key=lambda t: (t[1], -t[0]))
            expected.append((replicas + 1, best[0]))
        fit = find_turning_points(records)
        assert fit.best_alpha_per_beta == tuple(expected)


class TestEmitReport:
    def test_round_trip_exact(self, tmp_path, wide_ledger):
        spec = SweepSpec(
            alpha_values=(1, 4),
            replica_values=(0, 1),
            policy=AllocationPolicy(HASHED, seed=1),
            deepest=3,
            repeats=2,
        )
        records = run_sweep(wide_ledger, spec)
        path = tmp_path / "records.csv"
        emit_report(records, None, path)
        assert read_records_csv(path) == records

    def test_csv_byte_determinism(self, tmp_path, wide_ledger):
        spec = SweepSpec(
            alpha_values=(2, 3),
            replica_values=(0, 2),
            policy=AllocationPolicy(HASHED, seed=4),
            deepest=3,
            repeats=2,
        )
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        emit_report(run_sweep(wide_ledger, spec), None, a)
        emit_report(run_sweep(wide_ledger, spec, jobs=2), None, b)
        assert a.read_bytes() == b.read_bytes()

    def test_summary_reports_time_saving(self):
        import re

        text = render_summary([record(13, 8, 6.74)])
        match = re.search(r"time saving at best cell: ([0-9.]+)%", text)
        assert match is not None
        assert abs(float(match.group(1)) - 85.1) <= 0.1

    def test_summary_zero_saving_at_ratio_one(self):
        text = render_summary([record(1, 0, 1.0)])
        assert "time saving at best cell: 0.00%" in text

    def test_summary_includes_fit(self):
        fit = TurningPointFit(((2, 6), (6, 12)), 1.5, 3.0)
        text = render_summary([record(6, 1, 3.0), record(12, 5, 5.0)], fit)
        assert "slope=1.5" in text

    def test_empty_records_rejected(self, tmp_path):
        with pytest.raises(InvalidParams):
            emit_report([], None, tmp_path / "x.csv")

    def test_header_pinned(self, tmp_path):
        emit_report([record(1, 0, 1.0)], None, tmp_path / "r.csv")
        head = (tmp_path / "r.csv").read_text().splitlines()[0]
        assert head == ("alpha,replicas,policy,mean_parallelization_ratio,"
                        "mean_storage_ratio,mean_rounds,mean_lookups")
