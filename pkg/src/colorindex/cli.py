"""Operator surface: build and persist indexes, run queries under the three
tasks, cross-check the indexed path against the baseline engine and the
brute-force oracle, and emit size / preprocessing benchmarks.

Exit codes: 0 ok, 1 usage, 2 data error (including a failed check), 3 task
error.
"""
from __future__ import annotations

import argparse
import itertools
import random
import sys
import time

from . import engine, evaluator, generators, oracle
from .errors import (
    BudgetExceeded,
    ColorIndexError,
    NotAcyclic,
    NotFreeConnex,
    ParseError,
    TaskMismatch,
)
from .instrument import OpCounter
from .model import ConjunctiveQuery, Database
from .pipeline import TASKS, DatabaseIndex
from .textio import parse_database, parse_query, parse_schema

USAGE_ERROR, DATA_ERROR, TASK_ERROR = 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_db(db_path: str, schema_path: str) -> Database:
    schema = parse_schema(_read(schema_path))
    return parse_database(_read(db_path), schema)


def _format_answer(idx_or_db, tup: tuple[int, ...]) -> str:
    if not tup:
        return "()"
    if isinstance(idx_or_db, DatabaseIndex):
        return ",".join(idx_or_db.pool.display(c) for c in tup)
    return ",".join(idx_or_db.display(c) for c in tup)


def cmd_index(args) -> int:
    db = _load_db(args.db, args.schema)
    idx = DatabaseIndex.build(db, stage=args.stage)
    idx.save(args.out)
    ci = idx.cindex
    print(
        f"stage={idx.stage} |D|={db.size} |D_L|={ci.labeled_size} "
        f"|C|={ci.colors} |D_col|={ci.d_col_size}"
    )
    if args.dump_maps:
        for node, t in sorted(idx.node_tuple.items()):
            print(f"w\t{node}\t{' '.join(db.display(c) for c in t)}")
        for node, p in sorted(idx.node_proj.items()):
            print(f"v\t{node}\t{' '.join(db.display(c) for c in p)}")
        for (a, b), node in sorted(idx.gadget_node.items()):
            print(f"gadget\t{node}\t{a}\t{b}")
    return 0


def cmd_query(args) -> int:
    idx = DatabaseIndex.load(args.idx)
    q = parse_query(_read(args.query), idx.schema)
    if args.task == "bool":
        print("yes" if idx.eval_bool(q) else "no")
    elif args.task == "count":
        print(idx.count(q))
    else:
        stream = idx.enumerate(q)
        if args.limit is not None:
            emitted = 0
            for t in itertools.islice(stream, args.limit + 1):
                if emitted == args.limit:
                    return 0  # truncated: no end-of-enumeration marker
                print(_format_answer(idx, t))
                emitted += 1
        else:
            for t in stream:
                print(_format_answer(idx, t))
        print("EOE")
    return 0


def _check_once(db: Database, q: ConjunctiveQuery, task: str) -> tuple[bool, str]:
    """Compare indexed path, baseline engine, and oracle; on disagreement
    return the smallest witness tuple in the symmetric difference."""
    idx = DatabaseIndex.build(db)
    orc = oracle.brute_answers(q, db)
    expected = set(orc.answers.tuples)
    if task in ("enum", "all"):
        got = list(idx.enumerate(q))
        if len(got) != len(set(got)):
            dup = next(t for t in got if got.count(t) > 1)
            return False, f"enum emitted duplicate {dup}"
        baseline = engine.answers(q, db)
        for name, result in (("indexed", set(got)), ("baseline", baseline)):
            if result != expected:
                witness = min(result.symmetric_difference(expected))
                side = "extra" if witness in result else "missing"
                return False, f"{name} enum {side} witness {witness}"
    if task in ("count", "all"):
        got_n = idx.count(q)
        if got_n != len(expected):
            return False, f"indexed count {got_n} != oracle {len(expected)}"
    if task in ("bool", "all") and q.is_boolean():
        got_b = idx.eval_bool(q)
        base_b = engine.bool_eval(q, db)
        orc_b = bool(expected)
        if not (got_b == base_b == orc_b):
            return False, f"bool disagreement indexed={got_b} baseline={base_b} oracle={orc_b}"
    return True, ""


def cmd_check(args) -> int:
    schema = parse_schema(_read(args.schema))
    if args.n is None:
        if not args.db or not args.query:
            print("check: --db and --query are required without --n", file=sys.stderr)
            return USAGE_ERROR
        db = parse_database(_read(args.db), schema)
        q = parse_query(_read(args.query), schema)
        ok, diff = _check_once(db, q, args.task)
        print("PASS" if ok else f"FAIL {diff}")
        return 0 if ok else DATA_ERROR
    rng = random.Random(args.seed)
    for i in range(args.n):
        db = generators.random_relational_db(
            schema,
            n_constants=rng.randint(2, 6),
            n_tuples=rng.randint(1, 5),
            seed=rng.randrange(10**9),
        )
        q = generators.random_fc_query(schema, rng)
        ok, diff = _check_once(db, q, args.task)
        if not ok:
            print(f"FAIL instance={i} seed={args.seed} {diff}")
            return DATA_ERROR
    print(f"PASS {args.n} instances seed={args.seed}")
    return 0


_FAMILIES = ("cycle", "tree", "star", "random-graph", "random-relational")


def _family_db(family: str, size: int, seed: int) -> Database:
    if family == "cycle":
        return generators.cycle_db(size)
    if family == "tree":
        return generators.complete_binary_tree_db(size)
    if family == "star":
        return generators.star_db(size)
    if family == "random-graph":
        return generators.random_graph_db(size, p=0.5, seed=seed)
    return generators.random_relational_db(
        generators.TERNARY_SCHEMA, n_constants=size, n_tuples=2 * size, seed=seed
    )


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",")]
    print("family,size,db_size,colors,dcol_size,ratio,index_ms,indexed_pre_ops,baseline_pre_ops,indexed_ms,baseline_ms")
    for size in sizes:
        db = _family_db(args.family, size, args.seed)
        t0 = time.perf_counter()
        idx = DatabaseIndex.build(db)
        t1 = time.perf_counter()
        q = parse_query(_read(args.query), db.schema)
        tr = idx.translate(q)
        ops_i = OpCounter()
        t2 = time.perf_counter()
        evaluator.prepare(tr.qhat, idx.cindex, ops_i)
        t3 = time.perf_counter()
        ops_b = OpCounter()
        engine.preprocess(q, db, ops_b)
        t4 = time.perf_counter()
        ratio = idx.cindex.d_col_size / db.size if db.size else 0.0
        print(
            f"{args.family},{size},{db.size},{idx.cindex.colors},{idx.cindex.d_col_size},"
            f"{ratio:.4f},{(t1 - t0) * 1000:.1f},{ops_i.n},{ops_b.n},"
            f"{(t3 - t2) * 1000:.2f},{(t4 - t3) * 1000:.2f}"
        )
    return 0


def build_parser() -> _Parser:
    p = _Parser(prog="colorindex", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    pi = sub.add_parser("index", help="build and persist an index")
    pi.add_argument("--db", required=True)
    pi.add_argument("--schema", required=True)
    pi.add_argument("--out", required=True)
    pi.add_argument("--stage", default="auto", choices=("auto", "graph", "binary", "full"))
    pi.add_argument("--dump-maps", action="store_true", help="print reduction node maps")
    pi.set_defaults(func=cmd_index)

    pq = sub.add_parser("query", help="answer a query against a persisted index")
    pq.add_argument("--idx", required=True)
    pq.add_argument("--query", required=True)
    pq.add_argument("--task", required=True, choices=TASKS)
    pq.add_argument("--limit", type=int, default=None)
    pq.set_defaults(func=cmd_query)

    pc = sub.add_parser("check", help="cross-check indexed path, baseline, and oracle")
    pc.add_argument("--db")
    pc.add_argument("--schema", required=True)
    pc.add_argument("--query")
    pc.add_argument("--task", default="all", choices=TASKS + ("all",))
    pc.add_argument("--seed", type=int, default=0)
    pc.add_argument("--n", type=int, default=None, help="number of random instances")
    pc.set_defaults(func=cmd_check)

    pb = sub.add_parser("bench", help="size and preprocessing-cost table (CSV)")
    pb.add_argument("--family", required=True, choices=_FAMILIES)
    pb.add_argument("--sizes", required=True, help="comma-separated sizes")
    pb.add_argument("--query", required=True)
    pb.add_argument("--seed", type=int, default=0)
    pb.set_defaults(func=cmd_bench)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else USAGE_ERROR
    except (TaskMismatch, NotFreeConnex, NotAcyclic) as e:
        print(f"task error: {e}", file=sys.stderr)
        return TASK_ERROR
    except (ParseError, BudgetExceeded, ColorIndexError) as e:
        print(f"data error: {e}", file=sys.stderr)
        return DATA_ERROR
    except OSError as e:
        print(f"data error: {e}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
