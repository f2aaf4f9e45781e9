"""The color-index: loop-encoded graph, coarsest stable coloring, lookup
tables for classes / per-color neighbor lists / color-pair degrees, and the
color database built over the colors.

The index is immutable after build and safe for unlimited concurrent readers;
the evaluation phase serves many queries against one index.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import ParseError
from .model import ConstantPool, Database, Schema
from .refinement import Coloring, LabeledGraph, encode_loops, refine


@dataclass(frozen=True)
class ColorIndex:
    graph: LabeledGraph
    coloring: Coloring
    class_members: tuple[tuple[int, ...], ...]
    nbr: dict[int, dict[int, tuple[int, ...]]]
    deg: dict[tuple[int, int], int]
    d_col: Database
    edge_label: str
    source_size: int

    @property
    def colors(self) -> int:
        return len(self.class_members)

    def color_of(self, v: int) -> int:
        return self.coloring.col[v]

    def n_c(self, c: int) -> int:
        return len(self.class_members[c])

    def num_n(self, c: int, cprime: int) -> int:
        return self.deg.get((c, cprime), 0)

    @property
    def loop_label(self) -> str:
        return self.graph.loop_label

    @property
    def labeled_size(self) -> int:
        """Size of the loop-encoded database: edge tuples plus unary tuples."""
        directed = sum(len(self.graph.adj[v]) for v in self.graph.vertices)
        labels = sum(len(self.graph.vl[v]) for v in self.graph.vertices)
        return directed + labels

    @property
    def d_col_size(self) -> int:
        return self.d_col.size


def neighbors_by_color(idx: ColorIndex, v: int, c: int) -> tuple[int, ...]:
    """The c-colored neighbors of v (v itself included when it has a loop and
    col(v) = c)."""
    return idx.nbr[v].get(c, ())


def build(db: Database) -> ColorIndex:
    """Index a node-labeled-graph database: encode loops, refine, and build
    the lookup tables plus the color database."""
    graph = encode_loops(db)
    coloring = refine(graph)
    return build_from_coloring(graph, coloring, source_size=db.size)


def build_from_coloring(graph: LabeledGraph, coloring: Coloring, source_size: int) -> ColorIndex:
    col = coloring.col
    nbr: dict[int, dict[int, tuple[int, ...]]] = {}
    for v in graph.vertices:
        buckets: dict[int, list[int]] = {}
        for u in graph.adj[v]:
            buckets.setdefault(col[u], []).append(u)
        nbr[v] = {c: tuple(sorted(us)) for c, us in sorted(buckets.items())}
    deg: dict[tuple[int, int], int] = {}
    for c, members in enumerate(coloring.classes):
        rep = members[0]
        for cprime, us in nbr[rep].items():
            deg[(c, cprime)] = len(us)

    d_col = _build_color_db(graph, coloring, deg)
    return ColorIndex(
        graph=graph,
        coloring=coloring,
        class_members=coloring.classes,
        nbr=nbr,
        deg=deg,
        d_col=d_col,
        edge_label=graph.edge_label,
        source_size=source_size,
    )


def _build_color_db(graph: LabeledGraph, coloring: Coloring, deg: dict[tuple[int, int], int]) -> Database:
    edge_label = graph.edge_label
    schema = Schema(tuple((u, 1) for u in graph.label_universe) + ((edge_label, 2),))
    pool = ConstantPool()
    for c in range(len(coloring.classes)):
        pool.intern(f"c{c}")
    unary_rel: dict[str, set[tuple[int, ...]]] = {u: set() for u in graph.label_universe}
    for c, members in enumerate(coloring.classes):
        for label in graph.vl[members[0]]:
            unary_rel[label].add((c,))
    relations: dict[str, tuple[tuple[int, ...], ...]] = {
        u: tuple(sorted(ts)) for u, ts in unary_rel.items()
    }
    relations[edge_label] = tuple(sorted((c, cp) for (c, cp), n in deg.items() if n > 0))
    return Database(schema=schema, relations=relations, pool=pool)


@dataclass(frozen=True)
class IndexStats:
    source_size: int
    labeled_size: int
    num_colors: int
    d_col_size: int
    color_ratio: float


def stats(idx: ColorIndex) -> IndexStats:
    n = len(idx.graph.vertices)
    return IndexStats(
        source_size=idx.source_size,
        labeled_size=idx.labeled_size,
        num_colors=idx.colors,
        d_col_size=idx.d_col_size,
        color_ratio=idx.colors / n if n else 0.0,
    )


def check_colorindex(idx: ColorIndex) -> list[str]:
    """Consistency suite: numN well-definedness via stability, class sizes,
    degree sums, and the color-database definition."""
    problems: list[str] = []
    g = idx.graph
    col = idx.coloring.col
    for c, members in enumerate(idx.class_members):
        for v in members:
            if col[v] != c:
                problems.append(f"class table disagrees with col at vertex {v}")
            per_color: dict[int, int] = {}
            for u in g.adj[v]:
                per_color[col[u]] = per_color.get(col[u], 0) + 1
            for cprime, n in per_color.items():
                if idx.num_n(c, cprime) != n:
                    problems.append(f"numN({c},{cprime}) not well-defined at vertex {v}")
                if idx.nbr[v].get(cprime, ()) != tuple(sorted(u for u in g.adj[v] if col[u] == cprime)):
                    problems.append(f"N({v},{cprime}) table incorrect")
            if sum(per_color.values()) != len(g.adj[v]):
                problems.append(f"degree mismatch at {v}")
    if sum(idx.n_c(c) for c in range(idx.colors)) != len(g.vertices):
        problems.append("class sizes do not sum to |V|")
    for (c, cp), n in idx.deg.items():
        if n > 0 and not idx.d_col.contains(idx.edge_label, (c, cp)):
            problems.append(f"color edge ({c},{cp}) missing from color database")
    for c, cp in idx.d_col.rel(idx.edge_label):
        if idx.num_n(c, cp) <= 0:
            problems.append(f"color edge ({c},{cp}) has numN 0")
        if not idx.d_col.contains(idx.edge_label, (cp, c)):
            problems.append(f"color edge relation not symmetric at ({c},{cp})")
        for v in idx.class_members[c]:
            if not any(col[u] == cp for u in g.adj[v]):
                problems.append(f"vertex {v} of color {c} has no {cp}-neighbor")
    for label in g.label_universe:
        expected = sorted({(col[v],) for v in g.vertices if label in g.vl[v]})
        if list(idx.d_col.rel(label)) != expected:
            problems.append(f"unary color relation {label} incorrect")
    if not idx.d_col.active_domain() <= set(range(idx.colors)):
        problems.append("color database domain exceeds color set")
    return problems


# --- serialization -----------------------------------------------------------
#
# Line-oriented, versioned sections; every section header carries its line
# count.  Writing is a pure function of the index, so write -> read -> write
# is bit-identical.

def write_sections(idx: ColorIndex) -> list[str]:
    g = idx.graph
    lines: list[str] = []

    def section(name: str, rows: list[str]) -> None:
        lines.append(f"[{name} {len(rows)}]")
        lines.extend(rows)

    section("LABELS", [f"{g.loop_label}\t{idx.edge_label}"] + list(g.label_universe))
    section(
        "VERTICES",
        [f"{v}\t{','.join(sorted(g.vl[v])) or '-'}" for v in g.vertices],
    )
    section("COLORS", [f"{v}\t{idx.coloring.col[v]}" for v in g.vertices])
    section(
        "CLASSES",
        [f"{c}\t{' '.join(map(str, members))}" for c, members in enumerate(idx.class_members)],
    )
    nbr_rows = []
    for v in g.vertices:
        for c, us in sorted(idx.nbr[v].items()):
            nbr_rows.append(f"{v}\t{c}\t{' '.join(map(str, us))}")
    section("NBR", nbr_rows)
    section("DEG", [f"{c}\t{cp}\t{n}" for (c, cp), n in sorted(idx.deg.items())])
    dcol_rows = []
    for name in idx.d_col.schema.names:
        for tup in idx.d_col.rel(name):
            dcol_rows.append(name + "\t" + "\t".join(map(str, tup)))
    section("DCOL", dcol_rows)
    return lines


class SectionReader:
    def __init__(self, lines: list[str]):
        self.lines = lines
        self.pos = 0

    def expect(self, name: str) -> list[str]:
        if self.pos >= len(self.lines):
            raise ParseError(f"missing section [{name}]", line=self.pos + 1)
        header = self.lines[self.pos]
        if not (header.startswith(f"[{name} ") and header.endswith("]")):
            raise ParseError(f"expected section [{name}], got {header!r}", line=self.pos + 1)
        count = int(header[len(name) + 2 : -1])
        body = self.lines[self.pos + 1 : self.pos + 1 + count]
        if len(body) != count:
            raise ParseError(f"section [{name}] truncated", line=self.pos + 1)
        self.pos += 1 + count
        return body


def read_sections(reader: SectionReader, source_size: int) -> ColorIndex:
    labels = reader.expect("LABELS")
    loop_label, edge_label = labels[0].split("\t")
    universe = tuple(labels[1:])
    vert_rows = reader.expect("VERTICES")
    vertices = []
    vl = {}
    for row in vert_rows:
        v_s, lab_s = row.split("\t")
        v = int(v_s)
        vertices.append(v)
        vl[v] = frozenset() if lab_s == "-" else frozenset(lab_s.split(","))
    col = {}
    for row in reader.expect("COLORS"):
        v_s, c_s = row.split("\t")
        col[int(v_s)] = int(c_s)
    class_rows = reader.expect("CLASSES")
    classes = []
    for row in class_rows:
        _, members = row.split("\t")
        classes.append(tuple(int(x) for x in members.split()))
    for c, ms in enumerate(classes):
        for v in ms:
            if col.get(v) != c:
                raise ParseError(f"color table disagrees with class table at vertex {v}")
    nbr: dict[int, dict[int, tuple[int, ...]]] = {v: {} for v in vertices}
    adj: dict[int, list[int]] = {v: [] for v in vertices}
    for row in reader.expect("NBR"):
        v_s, c_s, us = row.split("\t")
        members = tuple(int(x) for x in us.split())
        nbr[int(v_s)][int(c_s)] = members
        adj[int(v_s)].extend(members)
    deg = {}
    for row in reader.expect("DEG"):
        c_s, cp_s, n_s = row.split("\t")
        deg[(int(c_s), int(cp_s))] = int(n_s)
    graph = LabeledGraph(
        vertices=tuple(vertices),
        adj={v: tuple(sorted(us)) for v, us in adj.items()},
        vl=vl,
        label_universe=universe,
        loop_label=loop_label,
        edge_label=edge_label,
    )
    coloring = Coloring(col=col, classes=tuple(classes))
    dcol_schema = Schema(tuple((u, 1) for u in universe) + ((edge_label, 2),))
    pool = ConstantPool()
    for c in range(len(classes)):
        pool.intern(f"c{c}")
    rel: dict[str, list[tuple[int, ...]]] = {name: [] for name in dcol_schema.names}
    for row in reader.expect("DCOL"):
        parts = row.split("\t")
        rel[parts[0]].append(tuple(int(x) for x in parts[1:]))
    d_col = Database(
        schema=dcol_schema,
        relations={name: tuple(ts) for name, ts in rel.items()},
        pool=pool,
    )
    return ColorIndex(
        graph=graph,
        coloring=coloring,
        class_members=coloring.classes,
        nbr=nbr,
        deg=deg,
        d_col=d_col,
        edge_label=edge_label,
        source_size=source_size,
    )


def dump_coloring(idx: ColorIndex, display) -> str:
    """Optional coloring dump: one `vertex<TAB>color` line per vertex."""
    return "\n".join(f"{display(v)}\t{idx.color_of(v)}" for v in idx.graph.vertices)
