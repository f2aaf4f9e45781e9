"""Structural analysis of conjunctive queries: Gaifman graph, hypergraph,
acyclicity tests, free-connex width-1 decompositions, connected components,
and the rooted variable order used by evaluation.
"""
from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field

from .errors import BadGHD, FreeNotConnected, NotFreeConnex, NotTree
from .model import Atom, ConjunctiveQuery, cq


@dataclass(frozen=True)
class GaifmanGraph:
    vertices: frozenset[int]
    edges: frozenset[frozenset[int]]

    def adjacency(self) -> dict[int, set[int]]:
        adj: dict[int, set[int]] = {v: set() for v in self.vertices}
        for e in self.edges:
            a, b = tuple(e)
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def is_forest(self) -> bool:
        adj = self.adjacency()
        seen: set[int] = set()
        for start in self.vertices:
            if start in seen:
                continue
            comp_vertices = 0
            comp_edges = 0
            stack = [start]
            seen.add(start)
            while stack:
                v = stack.pop()
                comp_vertices += 1
                comp_edges += len(adj[v])
                for w in adj[v]:
                    if w not in seen:
                        seen.add(w)
                        stack.append(w)
            if comp_edges // 2 != comp_vertices - 1:
                return False
        return True


@dataclass(frozen=True)
class Hypergraph:
    vertices: frozenset[int]
    hyperedges: tuple[frozenset[int], ...]  # deduplicated, first-occurrence order


def gaifman(q: ConjunctiveQuery) -> GaifmanGraph:
    edges: set[frozenset[int]] = set()
    for a in q.atoms:
        vs = a.args
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                if vs[i] != vs[j]:
                    edges.add(frozenset((vs[i], vs[j])))
    return GaifmanGraph(vertices=q.vars(), edges=frozenset(edges))


def hypergraph(q: ConjunctiveQuery) -> Hypergraph:
    seen: list[frozenset[int]] = []
    for a in q.atoms:
        vs = a.var_set()
        if vs not in seen:
            seen.append(vs)
    return Hypergraph(vertices=q.vars(), hyperedges=tuple(seen))


def join_tree(hyperedges: list[frozenset[int]]) -> list[tuple[int, int]] | None:
    """GYO reduction.  Returns tree edges over hyperedge indices (a spanning
    tree over all indices), or None if the hypergraph is not alpha-acyclic.

    Ear vertices (occurring in exactly one hyperedge) are stripped and
    hyperedges contained in another are absorbed, recording a tree edge to
    the absorber.  Disconnected acyclic hypergraphs reduce through empty
    shrunken edges, which attaches their components arbitrarily.
    """
    if not hyperedges:
        return []
    work = {i: set(e) for i, e in enumerate(hyperedges)}
    alive = set(range(len(hyperedges)))
    edges: list[tuple[int, int]] = []
    while len(alive) > 1:
        occ = Counter(v for i in alive for v in work[i])
        changed = False
        for i in sorted(alive):
            private = {v for v in work[i] if occ[v] == 1}
            if private:
                work[i] -= private
                changed = True
        absorbed = None
        for i in sorted(alive):
            for j in sorted(alive):
                if i != j and work[i] <= work[j]:
                    absorbed = (i, j)
                    break
            if absorbed:
                break
        if absorbed:
            i, j = absorbed
            edges.append((i, j))
            alive.remove(i)
            changed = True
        if not changed:
            return None
    return edges


def is_acyclic(q: ConjunctiveQuery) -> bool:
    return join_tree(list(hypergraph(q).hyperedges)) is not None


def is_free_connex_acyclic(q: ConjunctiveQuery) -> bool:
    hs = list(hypergraph(q).hyperedges)
    if join_tree(hs) is None:
        return False
    free = q.free()
    if not free or free in hs:
        return True
    return join_tree(hs + [free]) is not None


def _free_parts_connected(q: ConjunctiveQuery) -> bool:
    g = gaifman(q)
    adj = g.adjacency()
    free = q.free()
    seen: set[int] = set()
    for start in g.vertices:
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
        seen |= comp
        comp_free = comp & free
        if comp_free:
            # connectivity of the subgraph induced by the free part
            fstart = min(comp_free)
            fseen = {fstart}
            stack = [fstart]
            while stack:
                v = stack.pop()
                for w in adj[v]:
                    if w in comp_free and w not in fseen:
                        fseen.add(w)
                        stack.append(w)
            if fseen != comp_free:
                return False
    return True


def is_acyclic_binary(q: ConjunctiveQuery) -> bool:
    """Characterization for binary schemas: acyclic iff G(Q) is a forest."""
    return gaifman(q).is_forest()


def is_free_connex_binary(q: ConjunctiveQuery) -> bool:
    """Binary-schema characterization: G(Q) a forest and, per connected
    component, the induced free part connected or empty."""
    return gaifman(q).is_forest() and _free_parts_connected(q)


@dataclass
class FcGHD:
    """Complete free-connex width-1 generalized hypertree decomposition.

    Tree nodes are dense ints.  ``cover`` maps each node to an atom whose
    variables contain the node's bag; ``atom_node`` gives, per atom index of
    the query, the dedicated node with bag equal to the atom's variables.
    ``witness`` is the connected node set whose bags union to free(Q).
    """

    query: ConjunctiveQuery
    bag: list[frozenset[int]]
    cover: list[Atom]
    edges: list[tuple[int, int]]
    witness: frozenset[int]
    atom_node: dict[int, int]
    root: int
    adj: dict[int, list[int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.adj = {t: [] for t in range(len(self.bag))}
        for a, b in self.edges:
            self.adj[a].append(b)
            self.adj[b].append(a)
        for t in self.adj:
            self.adj[t].sort()

    @property
    def nodes(self) -> range:
        return range(len(self.bag))

    def parents(self) -> dict[int, int]:
        """Parent map when rooting the tree at self.root (root absent)."""
        parent: dict[int, int] = {}
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            t = queue.popleft()
            for u in self.adj[t]:
                if u not in seen:
                    seen.add(u)
                    parent[u] = t
                    queue.append(u)
        return parent

    def bfs_order(self) -> list[int]:
        order = []
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            t = queue.popleft()
            order.append(t)
            for u in self.adj[t]:
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
        return order

    def to_dot(self) -> str:
        q = self.query
        lines = ["graph fc1ghd {"]
        for t in self.nodes:
            vars_s = ",".join(sorted(q.var_name(v) for v in self.bag[t]))
            cov = self.cover[t]
            cov_s = f"{cov.symbol}({','.join(q.var_name(v) for v in cov.args)})"
            shape = "doublecircle" if t in self.witness else "ellipse"
            lines.append(f'  n{t} [label="{{{vars_s}}}\\n{cov_s}", shape={shape}];')
        for a, b in self.edges:
            lines.append(f"  n{a} -- n{b};")
        lines.append("}")
        return "\n".join(lines)


def _bfs_first_node_with_bag(ghd_adj: dict[int, list[int]], bags: list[frozenset[int]],
                             root: int, target: frozenset[int]) -> int | None:
    seen = {root}
    queue = deque([root])
    while queue:
        t = queue.popleft()
        if bags[t] == target:
            return t
        for u in ghd_adj[t]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return None


def compute_fc1ghd(q: ConjunctiveQuery) -> FcGHD:
    """Compute a complete fc-1-GHD whose tree edges all satisfy bag
    containment (one endpoint's bag contains the other's) and with
    |witness| < 2 * |free(Q)| whenever free(Q) is non-empty.

    Raises NotFreeConnex when the query admits no such decomposition.
    """
    hs = list(hypergraph(q).hyperedges)
    if join_tree(hs) is None:
        raise NotFreeConnex("query hypergraph is not alpha-acyclic")
    free = q.free()

    ext = list(hs)
    if free and free not in ext:
        ext.append(free)
    tree_edges = join_tree(ext) if free else join_tree(ext)
    if tree_edges is None:
        raise NotFreeConnex("hypergraph plus free-variable hyperedge is not alpha-acyclic")

    bags: list[frozenset[int]] = list(ext)
    adj: dict[int, list[int]] = {i: [] for i in range(len(bags))}
    for a, b in tree_edges:
        adj[a].append(b)
        adj[b].append(a)

    # covering atom per hyperedge node: first atom with that exact var set
    first_atom_for: dict[frozenset[int], int] = {}
    for ai, atom in enumerate(q.atoms):
        first_atom_for.setdefault(atom.var_set(), ai)
    covers: list[Atom | None] = [None] * len(bags)
    for i, e in enumerate(hs):
        covers[i] = q.atoms[first_atom_for[e]]

    witness: set[int] = set()
    removed: set[int] = set()
    if free:
        f_node = ext.index(free)
        cover_atom = covers[f_node] or next((a for a in q.atoms if free <= a.var_set()), None)
        if cover_atom is not None:
            covers[f_node] = cover_atom
            witness = {f_node}
        else:
            # Split the uncoverable free node: its neighbors' bags intersected
            # with free(Q) form an alpha-acyclic hypergraph; a join tree of the
            # maximal intersections becomes the witness, each piece covered by
            # the corresponding neighbor's atom.
            nbrs = sorted(adj[f_node])
            inter = [(u, bags[u] & free) for u in nbrs]
            distinct = sorted({b for _, b in inter}, key=lambda s: (len(s), sorted(s)))
            maximal = [b for b in distinct if not any(b < other for other in distinct)]
            owner = {b: next(u for u, bu in inter if bu == b) for b in maximal}
            wt_edges = join_tree(maximal)
            if wt_edges is None:
                raise BadGHD("internal: free-split hypergraph not acyclic")
            base = len(bags)
            b_node = {i: base + i for i in range(len(maximal))}
            for i, b in enumerate(maximal):
                bags.append(b)
                covers.append(covers[owner[b]])
                adj[base + i] = []
                witness.add(base + i)
            for a, b in wt_edges:
                adj[b_node[a]].append(b_node[b])
                adj[b_node[b]].append(b_node[a])
            for u, bu in inter:
                target = b_node[next(i for i, m in enumerate(maximal) if bu <= m)]
                adj[u] = [x for x in adj[u] if x != f_node]
                adj[u].append(target)
                adj[target].append(u)
            removed.add(f_node)
            adj[f_node] = []

    # compact away the removed node, if any
    if removed:
        keep = [i for i in range(len(bags)) if i not in removed]
        remap = {old: new for new, old in enumerate(keep)}
        bags = [bags[i] for i in keep]
        covers = [covers[i] for i in keep]
        adj = {remap[i]: sorted(remap[j] for j in adj[i]) for i in keep}
        witness = {remap[i] for i in witness}

    root = min(witness) if witness else 0

    # completion: a dedicated node per atom with bag == vars(atom), attached to
    # the first BFS node carrying that bag
    atom_node: dict[int, int] = {}
    taken: set[int] = set()
    for ai, atom in enumerate(q.atoms):
        vs = atom.var_set()
        host = _bfs_first_node_with_bag(adj, bags, root, vs)
        assert host is not None
        if host not in taken and covers[host] == atom:
            atom_node[ai] = host
            taken.add(host)
        else:
            new = len(bags)
            bags.append(vs)
            covers.append(atom)
            adj[new] = [host]
            adj[host].append(new)
            atom_node[ai] = new
            taken.add(new)

    # subdivision: enforce bag containment along every edge
    pending = sorted({(min(a, b), max(a, b)) for a in adj for b in adj[a]})
    for a, b in pending:
        if bags[a] <= bags[b] or bags[b] <= bags[a]:
            continue
        n = len(bags)
        bags.append(bags[a] & bags[b])
        covers.append(covers[a])
        adj[a].remove(b)
        adj[b].remove(a)
        adj[n] = [a, b]
        adj[a].append(n)
        adj[b].append(n)
        if a in witness and b in witness:
            witness.add(n)

    edges = sorted({(min(a, b), max(a, b)) for a in adj for b in adj[a]})
    assert all(c is not None for c in covers)
    return FcGHD(
        query=q,
        bag=bags,
        cover=covers,  # type: ignore[arg-type]
        edges=edges,
        witness=frozenset(witness),
        atom_node=atom_node,
        root=root,
    )


def check_fc1ghd(H: FcGHD) -> list[str]:
    """Mechanically verify every fc-1-GHD invariant; returns a list of
    violations (empty when valid)."""
    q = H.query
    problems: list[str] = []
    n = len(H.bag)
    if len(H.edges) != n - 1:
        problems.append(f"not a tree: {n} nodes, {len(H.edges)} edges")
    seen = {0} if n else set()
    queue = deque(seen)
    while queue:
        t = queue.popleft()
        for u in H.adj[t]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    if len(seen) != n:
        problems.append("tree is disconnected")
    for t in H.nodes:
        if not H.bag[t] <= H.cover[t].var_set():
            problems.append(f"bag of node {t} not covered by its atom")
    for ai, atom in enumerate(q.atoms):
        t = H.atom_node.get(ai)
        if t is None or H.bag[t] != atom.var_set() or H.cover[t] != atom:
            problems.append(f"completeness fails for atom {ai}")
        if not any(atom.var_set() <= H.bag[t2] for t2 in H.nodes):
            problems.append(f"no bag contains vars of atom {ai}")
    for v in q.vars():
        holders = [t for t in H.nodes if v in H.bag[t]]
        if not holders:
            problems.append(f"variable {v} in no bag")
            continue
        reach = {holders[0]}
        queue = deque(reach)
        while queue:
            t = queue.popleft()
            for u in H.adj[t]:
                if u in reach or v not in H.bag[u]:
                    continue
                reach.add(u)
                queue.append(u)
        if reach != set(holders):
            problems.append(f"path condition fails for variable {v}")
    free = q.free()
    if free:
        if not H.witness:
            problems.append("empty witness for non-Boolean query")
        else:
            union = frozenset().union(*(H.bag[t] for t in H.witness))
            if union != free:
                problems.append("witness bags do not union to free(Q)")
            w0 = min(H.witness)
            reach = {w0}
            queue = deque(reach)
            while queue:
                t = queue.popleft()
                for u in H.adj[t]:
                    if u in H.witness and u not in reach:
                        reach.add(u)
                        queue.append(u)
            if reach != set(H.witness):
                problems.append("witness is not connected")
            if len(H.witness) >= 2 * len(free):
                problems.append(f"|W|={len(H.witness)} >= 2*|free|={2 * len(free)}")
            if H.root not in H.witness:
                problems.append("root not in witness")
    elif H.witness:
        problems.append("non-empty witness for Boolean query")
    for a, b in H.edges:
        if not (H.bag[a] <= H.bag[b] or H.bag[b] <= H.bag[a]):
            problems.append(f"edge ({a},{b}) violates bag containment")
    return problems


def connected_components(q: ConjunctiveQuery) -> list[tuple[ConjunctiveQuery, tuple[int, ...]]]:
    """Split q along the connected components of its Gaifman graph.

    Returns (component query, original head positions covered by its head).
    Concatenating component heads and permuting by those positions restores
    the original head.  Components carrying head variables come first, in
    order of their earliest head position; Boolean components follow, ordered
    by smallest variable id.
    """
    adj = gaifman(q).adjacency()
    comp_of: dict[int, int] = {}
    comps: list[set[int]] = []
    for v in sorted(adj):
        if v in comp_of:
            continue
        comp = {v}
        stack = [v]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        idx = len(comps)
        comps.append(comp)
        for x in comp:
            comp_of[x] = idx

    def sort_key(ci: int) -> tuple[int, int]:
        positions = [i for i, v in enumerate(q.head) if comp_of[v] == ci]
        return (positions[0] if positions else len(q.head) + 1, min(comps[ci]))

    out: list[tuple[ConjunctiveQuery, tuple[int, ...]]] = []
    for ci in sorted(range(len(comps)), key=sort_key):
        comp = comps[ci]
        head_positions = tuple(i for i, v in enumerate(q.head) if v in comp)
        head_names = [q.var_name(q.head[i]) for i in head_positions]
        atom_specs = [
            (a.symbol, [q.var_name(v) for v in a.args])
            for a in q.atoms
            if a.args[0] in comp
        ]
        out.append((cq(head_names, atom_specs), head_positions))
    return out


@dataclass(frozen=True)
class VariableOrder:
    """Rooted breadth-first order over the variables of a connected query
    whose Gaifman graph is a tree: free variables precede quantified ones and
    ancestors precede descendants."""

    order: tuple[int, ...]
    parent: dict[int, int]
    children: dict[int, tuple[int, ...]]
    labels: dict[int, frozenset[str]]
    root: int

    def free_prefix_len(self, q: ConjunctiveQuery) -> int:
        free = q.free()
        return sum(1 for v in self.order if v in free)


def variable_order(q: ConjunctiveQuery) -> VariableOrder:
    """Two-queue BFS from the root (lowest-id free variable when free(Q) is
    non-empty, else lowest-id variable), free queue served first."""
    for a in q.atoms:
        if a.arity == 2 and a.args[0] == a.args[1]:
            raise ValueError("query contains self-loop atoms; rewrite loops first")
    g = gaifman(q)
    adj = g.adjacency()
    n = len(g.vertices)
    if len(g.edges) != n - 1:
        raise NotTree(f"Gaifman graph has {n} vertices and {len(g.edges)} edges")
    free = q.free()
    if free and not _free_parts_connected(q):
        raise FreeNotConnected("free variables do not induce a connected subgraph")
    root = min(free) if free else min(g.vertices)

    order: list[int] = []
    parent: dict[int, int] = {}
    children: dict[int, list[int]] = {v: [] for v in g.vertices}
    free_q: deque[int] = deque([root])
    quant_q: deque[int] = deque()
    seen = {root}
    while free_q or quant_q:
        v = free_q.popleft() if free_q else quant_q.popleft()
        order.append(v)
        for w in sorted(adj[v]):
            if w in seen:
                continue
            seen.add(w)
            parent[w] = v
            children[v].append(w)
            (free_q if w in free else quant_q).append(w)
    if len(order) != n:
        raise NotTree("Gaifman graph is disconnected")

    labels = {
        v: frozenset(a.symbol for a in q.atoms if a.arity == 1 and a.args[0] == v)
        for v in g.vertices
    }
    return VariableOrder(
        order=tuple(order),
        parent=parent,
        children={v: tuple(c) for v, c in children.items()},
        labels=labels,
        root=root,
    )
