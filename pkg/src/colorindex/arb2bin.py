"""Reduction from arbitrary schemas to binary schemas.

A database maps to one node per tuple plus one node per projection of a
tuple (subtuples selected by pairwise-distinct positions, the empty tuple
included).  Unary relations tag tuple nodes with their relation symbol and
projection nodes with their arity; binary relations record position equality
between tuples and projections, and between projections whose entry sets are
comparable.  Query translation runs over a complete fc-1-GHD with bag
containment on every edge: one node variable per GHD node, one extra tuple
variable per atom node, head variables taken from the witness.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .analysis import FcGHD
from .errors import BadGHD, MalformedAnswer
from .model import ConjunctiveQuery, ConstantPool, Database, Schema, cq


def binary_schema_for(schema: Schema) -> tuple[Schema, int]:
    """The derived binary schema: U_<R> per source symbol, A<i> for arities
    0..k, E<i>_<j> / F<i>_<j> for positions i,j in 1..k (k = max arity)."""
    k = schema.max_arity
    symbols: list[tuple[str, int]] = [(f"U_{name}", 1) for name in schema.names]
    symbols += [(f"A{i}", 1) for i in range(k + 1)]
    symbols += [(f"E{i}_{j}", 2) for i in range(1, k + 1) for j in range(1, k + 1)]
    symbols += [(f"F{i}_{j}", 2) for i in range(1, k + 1) for j in range(1, k + 1)]
    return Schema(tuple(symbols)), k


def projections_of(t: tuple[int, ...]) -> set[tuple[int, ...]]:
    """All value tuples selected by pairwise-distinct positions of t,
    including the empty tuple; deduplicated as value tuples."""
    out: set[tuple[int, ...]] = set()
    for m in range(len(t) + 1):
        for positions in itertools.permutations(range(len(t)), m):
            out.add(tuple(t[i] for i in positions))
    return out


@dataclass(frozen=True)
class BinaryEncoding:
    db2: Database
    sigma2: Schema
    k: int
    tuple_node: dict[tuple[int, ...], int]
    proj_node: dict[tuple[int, ...], int]
    node_tuple: dict[int, tuple[int, ...]]
    node_proj: dict[int, tuple[int, ...]]


def encode_db(db: Database) -> BinaryEncoding:
    schema = db.schema
    sigma2, k = binary_schema_for(schema)
    pool2 = ConstantPool()

    # tuple nodes, deduplicated across relations, in relation order
    tuple_node: dict[tuple[int, ...], int] = {}
    tuple_order: list[tuple[int, ...]] = []
    for name in schema.names:
        for t in db.rel(name):
            if t not in tuple_node:
                tuple_node[t] = pool2.intern("w(" + ",".join(db.display(c) for c in t) + ")")
                tuple_order.append(t)

    proj_node: dict[tuple[int, ...], int] = {}
    projections_by_tuple: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
    for t in tuple_order:
        projs = sorted(projections_of(t), key=lambda p: (len(p), p))
        projections_by_tuple[t] = projs
        for p in projs:
            if p not in proj_node:
                proj_node[p] = pool2.intern("v(" + ",".join(db.display(c) for c in p) + ")")

    relations: dict[str, set[tuple[int, ...]]] = {name: set() for name in sigma2.names}
    for name in schema.names:
        for t in db.rel(name):
            relations[f"U_{name}"].add((tuple_node[t],))
    for p, node in proj_node.items():
        relations[f"A{len(p)}"].add((node,))
    for t in tuple_order:
        wt = tuple_node[t]
        for p in projections_by_tuple[t]:
            vp = proj_node[p]
            for i in range(1, len(t) + 1):
                for j in range(1, len(p) + 1):
                    if t[i - 1] == p[j - 1]:
                        relations[f"E{i}_{j}"].add((wt, vp))
    # F: enumerate, per projection, the candidate subtuples over its entry set
    for p, vp in proj_node.items():
        values = sorted(set(p))
        if not values:
            continue
        for m in range(1, k + 1):
            for q_tuple in itertools.product(values, repeat=m):
                vq = proj_node.get(q_tuple)
                if vq is None:
                    continue
                for i in range(1, len(p) + 1):
                    for j in range(1, m + 1):
                        if p[i - 1] == q_tuple[j - 1]:
                            relations[f"F{i}_{j}"].add((vp, vq))
                            relations[f"F{j}_{i}"].add((vq, vp))
    db2 = Database(
        schema=sigma2,
        relations={name: tuple(sorted(ts)) for name, ts in relations.items()},
        pool=pool2,
    )
    return BinaryEncoding(
        db2=db2,
        sigma2=sigma2,
        k=k,
        tuple_node=tuple_node,
        proj_node=proj_node,
        node_tuple={n: t for t, n in tuple_node.items()},
        node_proj={n: p for p, n in proj_node.items()},
    )


@dataclass(frozen=True)
class QueryEncoding2:
    q2: ConjunctiveQuery
    ghd: FcGHD
    head_nodes: tuple[int, ...]  # witness nodes, in head order of q2
    decode_node: dict[int, int]  # free source variable -> witness node
    decode_pos: dict[int, int]  # free source variable -> 1-based bag position
    source: ConjunctiveQuery


def encode_query(q: ConjunctiveQuery, ghd: FcGHD, schema: Schema) -> QueryEncoding2:
    """Translate an fc-ACQ into the binary schema, given a complete fc-1-GHD
    with bag containment along every edge."""
    if ghd.query is not q:
        raise BadGHD("decomposition does not belong to the query")
    for a, b in ghd.edges:
        if not (ghd.bag[a] <= ghd.bag[b] or ghd.bag[b] <= ghd.bag[a]):
            raise BadGHD("decomposition lacks bag containment on an edge")
    _, k = binary_schema_for(schema)
    bag_tuple = [tuple(sorted(ghd.bag[t])) for t in ghd.nodes]
    node_of_atom = dict(ghd.atom_node)
    atom_of_node = {t: ai for ai, t in node_of_atom.items()}
    parent = ghd.parents()

    head_nodes = tuple(sorted(ghd.witness))
    head_names = [f"v{t}" for t in head_nodes]
    atoms: list[tuple[str, list[str]]] = []
    for t in ghd.nodes:
        atoms.append((f"A{len(ghd.bag[t])}", [f"v{t}"]))
        ai = atom_of_node.get(t)
        if ai is not None:
            atom = q.atoms[ai]
            atoms.append((f"U_{atom.symbol}", [f"w{t}"]))
            for i in range(1, atom.arity + 1):
                for j in range(1, len(bag_tuple[t]) + 1):
                    if atom.args[i - 1] == bag_tuple[t][j - 1]:
                        atoms.append((f"E{i}_{j}", [f"w{t}", f"v{t}"]))
        if t in parent:
            p = parent[t]
            for i in range(1, len(bag_tuple[t]) + 1):
                for j in range(1, len(bag_tuple[p]) + 1):
                    if bag_tuple[t][i - 1] == bag_tuple[p][j - 1]:
                        atoms.append((f"F{i}_{j}", [f"v{t}", f"v{p}"]))
    q2 = cq(head_names, atoms)

    decode_node: dict[int, int] = {}
    decode_pos: dict[int, int] = {}
    for y in sorted(q.free()):
        t_y = min(t for t in ghd.witness if y in ghd.bag[t])
        decode_node[y] = t_y
        decode_pos[y] = bag_tuple[t_y].index(y) + 1
    return QueryEncoding2(
        q2=q2,
        ghd=ghd,
        head_nodes=head_nodes,
        decode_node=decode_node,
        decode_pos=decode_pos,
        source=q,
    )


def decode_answer(
    answer: tuple[int, ...],
    enc_q: QueryEncoding2,
    node_proj: dict[int, tuple[int, ...]],
) -> tuple[int, ...]:
    """Map an answer of the translated query back to source constants: for
    each free source variable read the projection node of its witness node
    and take the recorded position."""
    q = enc_q.source
    index_of = {t: i for i, t in enumerate(enc_q.head_nodes)}
    out: list[int] = []
    for y in q.head:
        t_y = enc_q.decode_node[y]
        component = answer[index_of[t_y]]
        proj = node_proj.get(component)
        if proj is None:
            raise MalformedAnswer(f"answer component {component} is not a projection node")
        if len(proj) != len(enc_q.ghd.bag[t_y]):
            raise MalformedAnswer(
                f"projection node arity {len(proj)} does not match bag size {len(enc_q.ghd.bag[t_y])}"
            )
        out.append(proj[enc_q.decode_pos[y] - 1])
    return tuple(out)
