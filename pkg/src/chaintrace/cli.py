"""Command line interface.

Subcommands:

* ``gen``    — write a synthetic ledger as JSON Lines.
* ``ingest`` — convert a UTXO-style CSV dump into a JSONL ledger.
* ``trace``  — trace one transaction and print its predecessors and costs.
* ``bench``  — evaluate a single (alpha, replicas) configuration.
* ``sweep``  — evaluate a grid, extract turning points, write CSV.

Errors exit non-zero with the error class name on stderr.
"""

from __future__ import annotations

import argparse
import sys

from .bench import (
    SweepSpec,
    deepest_query_ids,
    emit_report,
    find_turning_points,
    render_summary,
    run_sweep,
)
from .chunks import HASHED, MODULO, AllocationPolicy, ChunkStoreConfig, build_store
from .errors import ChaintraceError, InsufficientData, InvalidParams
from .ingest import SyntheticDagParams, generate_ledger, ingest_utxo, read_utxo_csv
from .ledger import Ledger
from .tracing import compare

_POLICIES = {"mod": MODULO, "hash": HASHED}


def _parse_int_list(text: str) -> tuple[int, ...]:
    """Accept '1,2,4' or a range '1..20'."""
    text = text.strip()
    if ".." in text:
        lo, hi = text.split("..", 1)
        values = tuple(range(int(lo), int(hi) + 1))
    else:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    if not values:
        raise InvalidParams(f"empty integer list {text!r}")
    return values


def _policy(args: argparse.Namespace) -> AllocationPolicy:
    return AllocationPolicy(_POLICIES[args.policy], args.seed)


def _add_store_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--alpha", type=int, default=1, help="number of chunks")
    parser.add_argument(
        "--replicas", type=int, default=0,
        help="replica copies per transaction (total copies = replicas + 1)",
    )
    parser.add_argument(
        "--policy", choices=sorted(_POLICIES), default="mod",
        help="allocation policy",
    )
    parser.add_argument("--seed", type=int, default=0, help="hashed-policy seed")


def _cmd_gen(args: argparse.Namespace) -> None:
    params = SyntheticDagParams(
        n=args.n,
        max_indegree=args.max_indegree,
        indegree_distribution=args.indegree_dist,
        root_fraction=args.root_fraction,
        seed=args.seed,
    )
    ledger = generate_ledger(params)
    ledger.to_jsonl(args.out)
    print(f"wrote {len(ledger)} transactions to {args.out}")


def _cmd_ingest(args: argparse.Namespace) -> None:
    lo, hi = args.min_position, args.max_position
    window = None
    if lo is not None or hi is not None:
        low = lo if lo is not None else float("-inf")
        high = hi if hi is not None else float("inf")
        window = lambda pos: low <= pos <= high  # noqa: E731
    ledger = ingest_utxo(read_utxo_csv(args.input), window)
    ledger.to_jsonl(args.out)
    print(f"wrote {len(ledger)} transactions to {args.out}")


def _cmd_trace(args: argparse.Namespace) -> None:
    ledger = Ledger.from_jsonl(args.ledger)
    config = ChunkStoreConfig(
        alpha=args.alpha, beta=args.replicas + 1, policy=_policy(args)
    )
    report = compare(ledger, config, args.id)
    parallel = report.parallel
    preds = " ".join(str(v) for v in sorted(parallel.predecessors))
    print(f"predecessors ({len(parallel.predecessors)}): {preds}")
    print(
        f"lookups={parallel.lookups} rounds={parallel.rounds} "
        f"simulated_time={parallel.simulated_time:g} "
        f"width_avg={parallel.parallel_width_avg:.3f} "
        f"ratio_vs_bfs={report.parallelization_ratio:.4f}"
    )


def _resolve_queries(args: argparse.Namespace, ledger: Ledger) -> tuple[int, ...]:
    if args.queries:
        return _parse_int_list(args.queries)
    return deepest_query_ids(ledger, args.deepest)


def _cmd_bench(args: argparse.Namespace) -> None:
    ledger = Ledger.from_jsonl(args.ledger)
    spec = SweepSpec(
        alpha_values=(args.alpha,),
        replica_values=(args.replicas,),
        policy=_policy(args),
        queries=_resolve_queries(args, ledger),
        repeats=args.repeats,
        per_chunk_index_overhead=args.index_overhead,
    )
    records = run_sweep(ledger, spec, jobs=1)
    rec = records[0]
    print(
        f"alpha={rec.alpha} replicas={rec.replicas} policy={rec.policy} "
        f"ratio={rec.mean_parallelization_ratio:.4f} "
        f"storage={rec.mean_storage_ratio:.4f} "
        f"rounds={rec.mean_rounds:.2f} lookups={rec.mean_lookups:.2f}"
    )
    if args.out:
        emit_report(records, None, args.out)
        print(f"wrote {args.out}")


def _cmd_sweep(args: argparse.Namespace) -> None:
    ledger = Ledger.from_jsonl(args.ledger)
    spec = SweepSpec(
        alpha_values=_parse_int_list(args.alphas),
        replica_values=_parse_int_list(args.replica_values),
        policy=_policy(args),
        queries=_parse_int_list(args.queries) if args.queries else None,
        deepest=args.deepest,
        repeats=args.repeats,
        per_chunk_index_overhead=args.index_overhead,
    )
    records = run_sweep(ledger, spec, jobs=args.jobs)
    fit = None
    try:
        fit = find_turning_points(records)
    except InsufficientData:
        pass  # single replica value: no fit to report
    emit_report(records, fit, args.out, args.summary_out)
    print(f"wrote {len(records)} records to {args.out}")
    if args.summary_out:
        print(f"wrote summary to {args.summary_out}")
    else:
        print(render_summary(records, fit), end="")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chaintrace",
        description="Trace transaction ancestry over replicated chunks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a synthetic ledger")
    p_gen.add_argument("--n", type=int, required=True, help="transaction count")
    p_gen.add_argument("--max-indegree", type=int, default=3)
    p_gen.add_argument(
        "--indegree-dist", choices=("uniform", "geometric"), default="uniform"
    )
    p_gen.add_argument("--root-fraction", type=float, default=0.25)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", required=True, help="output JSONL path")
    p_gen.set_defaults(func=_cmd_gen)

    p_ing = sub.add_parser("ingest", help="convert a UTXO CSV dump to JSONL")
    p_ing.add_argument("--input", required=True, help="CSV path")
    p_ing.add_argument("--min-position", type=int, default=None)
    p_ing.add_argument("--max-position", type=int, default=None)
    p_ing.add_argument("--out", required=True, help="output JSONL path")
    p_ing.set_defaults(func=_cmd_ingest)

    p_tr = sub.add_parser("trace", help="trace one transaction")
    p_tr.add_argument("--ledger", required=True, help="JSONL ledger path")
    p_tr.add_argument("--id", type=int, required=True, help="transaction id")
    _add_store_flags(p_tr)
    p_tr.set_defaults(func=_cmd_trace)

    p_be = sub.add_parser("bench", help="evaluate one configuration")
    p_be.add_argument("--ledger", required=True)
    _add_store_flags(p_be)
    p_be.add_argument("--queries", default=None, help="comma list of ids")
    p_be.add_argument("--deepest", type=int, default=20)
    p_be.add_argument("--repeats", type=int, default=1)
    p_be.add_argument("--index-overhead", type=float, default=0.0)
    p_be.add_argument("--out", default=None, help="optional CSV path")
    p_be.set_defaults(func=_cmd_bench)

    p_sw = sub.add_parser("sweep", help="evaluate an (alpha, replicas) grid")
    p_sw.add_argument("--ledger", required=True)
    p_sw.add_argument("--alphas", default="1..20", help="e.g. 1..20 or 1,2,4")
    p_sw.add_argument(
        "--replica-values", default="0..9", help="e.g. 0..9 or 0,1,2"
    )
    p_sw.add_argument(
        "--policy", choices=sorted(_POLICIES), default="mod"
    )
    p_sw.add_argument("--seed", type=int, default=0)
    p_sw.add_argument("--queries", default=None, help="comma list of ids")
    p_sw.add_argument("--deepest", type=int, default=20)
    p_sw.add_argument("--repeats", type=int, default=1)
    p_sw.add_argument("--index-overhead", type=float, default=0.0)
    p_sw.add_argument("--jobs", type=int, default=1, help="worker processes")
    p_sw.add_argument("--out", required=True, help="CSV output path")
    p_sw.add_argument("--summary-out", default=None, help="text summary path")
    p_sw.set_defaults(func=_cmd_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (ChaintraceError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
