"""Reduction from binary schemas to node-labeled graphs.

Every ordered pair (a,b) in the symmetric closure of the binary relations
becomes a fresh gadget node w_ab; the single symmetric edge relation links
a - w_ab - w_ba - b (with a self-looped w_aa for reflexive pairs).  Gadget
nodes carry one label per binary relation containing their pair; original
unary relations and the V / W membership labels complete the graph.  Queries
are translated by subdividing each oriented Gaifman edge with two gadget
variables and labeling them accordingly; answers decode by projecting onto
the original head prefix.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .analysis import gaifman, is_free_connex_binary
from .errors import NotBinarySchema, NotFreeConnex
from .model import ConjunctiveQuery, ConstantPool, Database, Schema, cq
from .refinement import fresh_name


@dataclass(frozen=True)
class GraphSymbols:
    edge: str
    v_label: str
    w_label: str
    unary: tuple[str, ...]  # original unary symbols, kept as-is
    u_label: dict[str, str]  # binary source symbol -> gadget label

    def schema(self) -> Schema:
        symbols = [(self.edge, 2)]
        symbols += [(u, 1) for u in self.unary]
        symbols += [(self.u_label[f], 1) for f in sorted(self.u_label)]
        symbols += [(self.v_label, 1), (self.w_label, 1)]
        return Schema(tuple(symbols))


def graph_symbols_for(schema: Schema) -> GraphSymbols:
    if not schema.is_binary():
        raise NotBinarySchema("graph encoding requires a binary schema")
    taken = set(schema.names)
    edge = fresh_name("E", taken)
    taken.add(edge)
    v_label = fresh_name("V", taken)
    taken.add(v_label)
    w_label = fresh_name("W", taken)
    taken.add(w_label)
    u_label: dict[str, str] = {}
    for f in schema.binary_symbols():
        u_label[f] = fresh_name(f"U_{f}", taken)
        taken.add(u_label[f])
    return GraphSymbols(
        edge=edge,
        v_label=v_label,
        w_label=w_label,
        unary=schema.unary_symbols(),
        u_label=u_label,
    )


@dataclass(frozen=True)
class GraphEncoding:
    dhat: Database
    symbols: GraphSymbols
    vmap: dict[int, int]  # source constant -> V node
    vmap_inv: dict[int, int]
    gadget_node: dict[tuple[int, int], int]  # source pair -> W node
    node_gadget: dict[int, tuple[int, int]]

    def to_dot(self) -> str:
        db = self.dhat
        lines = ["graph encoded {"]
        seen = set()
        for v in sorted(db.active_domain()):
            shape = "box" if v in self.node_gadget else "circle"
            lines.append(f'  n{v} [label="{db.display(v)}", shape={shape}];')
        for a, b in db.rel(self.symbols.edge):
            if (b, a) not in seen:
                seen.add((a, b))
                lines.append(f"  n{a} -- n{b};")
        lines.append("}")
        return "\n".join(lines)


def encode_db(db: Database) -> GraphEncoding:
    symbols = graph_symbols_for(db.schema)
    sigma_hat = symbols.schema()
    pool = ConstantPool()
    adom = sorted(db.active_domain())
    vmap = {c: pool.intern(db.display(c)) for c in adom}

    pairs: set[tuple[int, int]] = set()
    for f in db.schema.binary_symbols():
        for a, b in db.rel(f):
            pairs.add((a, b))
            pairs.add((b, a))
    gadget_node = {
        (a, b): pool.intern(f"w({db.display(a)},{db.display(b)})")
        for a, b in sorted(pairs)
    }

    edges: set[tuple[int, int]] = set()
    for (a, b), w_ab in gadget_node.items():
        va = vmap[a]
        w_ba = gadget_node[(b, a)]
        edges.add((va, w_ab))
        edges.add((w_ab, va))
        edges.add((w_ab, w_ba))
        edges.add((w_ba, w_ab))

    relations: dict[str, tuple[tuple[int, ...], ...]] = {}
    relations[symbols.edge] = tuple(sorted(edges))
    for u in symbols.unary:
        relations[u] = tuple(sorted((vmap[c],) for (c,) in db.rel(u)))
    for f in db.schema.binary_symbols():
        relations[symbols.u_label[f]] = tuple(sorted((gadget_node[(a, b)],) for a, b in db.rel(f)))
    relations[symbols.v_label] = tuple(sorted((vmap[c],) for c in adom))
    relations[symbols.w_label] = tuple(sorted((w,) for w in gadget_node.values()))

    dhat = Database(schema=sigma_hat, relations=relations, pool=pool)
    return GraphEncoding(
        dhat=dhat,
        symbols=symbols,
        vmap=vmap,
        vmap_inv={n: c for c, n in vmap.items()},
        gadget_node=gadget_node,
        node_gadget={n: p for p, n in gadget_node.items()},
    )


@dataclass(frozen=True)
class QueryEncodingHat:
    qhat: ConjunctiveQuery
    source_head_len: int
    appended: tuple[tuple[str, str], ...]  # (z_xy, z_yx) names appended for free-free edges
    roots: tuple[int, ...]
    source: ConjunctiveQuery


def _oriented_edges(q: ConjunctiveQuery) -> tuple[list[tuple[int, int]], list[int]]:
    """Orient each Gaifman component away from its root (lowest-id free
    variable if the component has one, else lowest-id variable); edges in BFS
    discovery order."""
    adj = gaifman(q).adjacency()
    free = q.free()
    edges: list[tuple[int, int]] = []
    roots: list[int] = []
    seen: set[int] = set()
    for start in sorted(adj):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        comp_free = comp & free
        root = min(comp_free) if comp_free else min(comp)
        roots.append(root)
        seen |= comp
        visited = {root}
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for w in sorted(adj[v]):
                if w not in visited:
                    visited.add(w)
                    edges.append((v, w))
                    queue.append(w)
    return edges, roots


def encode_query(q: ConjunctiveQuery, schema: Schema) -> QueryEncodingHat:
    if not is_free_connex_binary(q):
        raise NotFreeConnex("graph encoding requires a free-connex acyclic query")
    symbols = graph_symbols_for(schema)
    free = q.free()
    edges, roots = _oriented_edges(q)

    def name(v: int) -> str:
        return q.var_name(v)

    def z(x: int, y: int) -> str:
        # '@' cannot occur in source variable names, so these are fresh
        return f"z@{name(x)}@{name(y)}"

    atoms: list[tuple[str, list[str]]] = []
    for a in q.atoms:
        if a.arity == 1:
            atoms.append((a.symbol, [name(a.args[0])]))
    for v in sorted(q.vars()):
        atoms.append((symbols.v_label, [name(v)]))
    loops = sorted({a.args[0] for a in q.atoms if a.arity == 2 and a.args[0] == a.args[1]})
    for x in loops:
        atoms.append((symbols.w_label, [z(x, x)]))
        atoms.append((symbols.edge, [name(x), z(x, x)]))
        atoms.append((symbols.edge, [z(x, x), z(x, x)]))
    for x, y in edges:
        atoms.append((symbols.w_label, [z(x, y)]))
        atoms.append((symbols.w_label, [z(y, x)]))
        atoms.append((symbols.edge, [name(x), z(x, y)]))
        atoms.append((symbols.edge, [z(x, y), z(y, x)]))
        atoms.append((symbols.edge, [z(y, x), name(y)]))
    for a in q.atoms:
        if a.arity == 2:
            u, v = a.args
            atoms.append((symbols.u_label[a.symbol], [z(u, v)]))

    head = [name(v) for v in q.head]
    appended: list[tuple[str, str]] = []
    for x, y in edges:
        if x in free and y in free:
            appended.append((z(x, y), z(y, x)))
            head.append(z(x, y))
            head.append(z(y, x))
    qhat = cq(head, atoms)
    return QueryEncodingHat(
        qhat=qhat,
        source_head_len=len(q.head),
        appended=tuple(appended),
        roots=tuple(roots),
        source=q,
    )


def decode_answer(answer: tuple[int, ...], enc_q: QueryEncodingHat, vmap_inv: dict[int, int]) -> tuple[int, ...]:
    """Project onto the original head prefix and map V nodes back to source
    constants."""
    return tuple(vmap_inv[a] for a in answer[: enc_q.source_head_len])
