"""Deterministic database families and seeded random instance / query
generators used by benchmarks, the check command, and the test suite."""
from __future__ import annotations

import random

from .analysis import is_free_connex_acyclic
from .model import ConjunctiveQuery, Database, Schema, cq, validate_database

GRAPH_SCHEMA = Schema.of(("E", 2))


def _graph_db(edges: list[tuple[str, str]], labels: dict[str, list[str]] | None = None) -> Database:
    """Symmetric closure of the given edges over a graph schema, with optional
    unary labels."""
    labels = labels or {}
    schema_syms: list[tuple[str, int]] = [("E", 2)]
    schema_syms += [(u, 1) for u in sorted(labels)]
    schema = Schema(tuple(schema_syms))
    sym = set()
    for a, b in edges:
        sym.add((a, b))
        sym.add((b, a))
    raw: dict[str, list[tuple[str, ...]]] = {"E": sorted(sym)}
    for u, vs in labels.items():
        raw[u] = [(v,) for v in vs]
    return validate_database(schema, raw)


def cycle_db(n: int) -> Database:
    if n < 3:
        raise ValueError("cycles need n >= 3")
    return _graph_db([(f"v{i}", f"v{(i + 1) % n}") for i in range(n)])


def path_db(n: int) -> Database:
    return _graph_db([(f"v{i}", f"v{i + 1}") for i in range(n - 1)])


def star_db(leaves: int) -> Database:
    return _graph_db([("c", f"l{i}") for i in range(leaves)])


def complete_binary_tree_db(height: int) -> Database:
    """Nodes 1..2^(h+1)-1 in heap order; node i has children 2i and 2i+1.
    Height must be >= 1 (an isolated vertex has no edge tuples)."""
    if height < 1:
        raise ValueError("complete binary trees need height >= 1")
    edges = []
    size = 2 ** (height + 1) - 1
    for i in range(1, size + 1):
        for child in (2 * i, 2 * i + 1):
            if child <= size:
                edges.append((f"n{i}", f"n{child}"))
    return _graph_db(edges)


def random_graph_db(n: int, p: float, seed: int, num_labels: int = 0, loop_p: float = 0.0) -> Database:
    rng = random.Random(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.append((f"v{i}", f"v{j}"))
        if rng.random() < loop_p:
            edges.append((f"v{i}", f"v{i}"))
    labels: dict[str, list[str]] = {}
    for li in range(num_labels):
        labels[f"P{li}"] = [f"v{i}" for i in range(n) if rng.random() < 0.4]
    if not edges and n > 0:
        edges = [("v0", "v0")] if loop_p > 0 else [(f"v0", f"v{max(1, n - 1)}")]
    return _graph_db(edges, labels)


def random_relational_db(schema: Schema, n_constants: int, n_tuples: int, seed: int) -> Database:
    """n_tuples random tuples per relation symbol over a shared constant set."""
    rng = random.Random(seed)
    consts = [f"a{i}" for i in range(n_constants)]
    raw: dict[str, list[tuple[str, ...]]] = {}
    for name, ar in schema.symbols:
        raw[name] = [tuple(rng.choice(consts) for _ in range(ar)) for _ in range(n_tuples)]
    return validate_database(schema, raw)


BINARY_SCHEMA = Schema.of(("R", 2), ("S", 2), ("P", 1))
TERNARY_SCHEMA = Schema.of(("T", 3), ("R", 2), ("P", 1))


def random_fc_query(
    schema: Schema,
    rng: random.Random,
    max_atoms: int = 5,
    max_vars: int = 6,
) -> ConjunctiveQuery:
    """A random free-connex acyclic query with at most max_atoms atoms and
    max_vars variables; rejection sampling with a chain-shaped bias, falling
    back to a single-atom query (always free-connex)."""
    names = [f"x{i}" for i in range(max_vars)]
    symbols = list(schema.symbols)
    for attempt in range(400):
        na = rng.randint(1, max_atoms)
        nv = rng.randint(1, max_vars)
        pool = names[:nv]
        chain = rng.random() < 0.6
        atoms: list[tuple[str, list[str]]] = []
        used: list[str] = []
        for _ in range(na):
            sym, ar = symbols[rng.randrange(len(symbols))]
            if chain and used:
                anchor = rng.choice(used)
                args = [anchor] + [rng.choice(pool) for _ in range(ar - 1)]
                rng.shuffle(args)
            else:
                args = [rng.choice(pool) for _ in range(ar)]
            atoms.append((sym, args))
            for v in args:
                if v not in used:
                    used.append(v)
        head_size = rng.randint(0, len(used))
        head = rng.sample(used, head_size)
        q = cq(head, atoms)
        if is_free_connex_acyclic(q):
            return q
    sym, ar = symbols[0]
    args = [names[i % max_vars] for i in range(ar)]
    return cq(sorted(set(args)), [(sym, args)])
