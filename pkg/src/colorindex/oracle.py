"""Independent brute-force references used by the test suite: exhaustive
homomorphism search over assignments, and round-based naive color refinement.

These implementations deliberately share nothing with the engine or the
index beyond the core model types.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded
from .model import AnswerSet, ConjunctiveQuery, Database
from .refinement import Coloring, LabeledGraph, _canonicalize

DEFAULT_BUDGET = 10_000_000


@dataclass(frozen=True)
class OracleResult:
    answers: AnswerSet
    hom_count: int


def brute_answers(q: ConjunctiveQuery, db: Database, budget: int = DEFAULT_BUDGET) -> OracleResult:
    """Depth-first enumeration of all homomorphisms, extending a partial
    assignment one atom at a time and rejecting inconsistent tuples early.

    The budget bounds the number of explored assignment extensions; crossing
    it raises BudgetExceeded instead of running silently slow.
    """
    atoms = q.atoms
    head = q.head
    assignment: dict[int, int] = {}
    answers: set[tuple[int, ...]] = set()
    state = {"steps": 0, "homs": 0}

    def rec(i: int) -> None:
        if i == len(atoms):
            state["homs"] += 1
            answers.add(tuple(assignment[v] for v in head))
            return
        atom = atoms[i]
        for tup in db.rel(atom.symbol):
            state["steps"] += 1
            if state["steps"] > budget:
                raise BudgetExceeded(f"oracle budget of {budget} assignment extensions exceeded")
            bound: dict[int, int] = {}
            ok = True
            for v, c in zip(atom.args, tup):
                cur = assignment.get(v)
                if cur is None:
                    cur = bound.get(v)
                if cur is None:
                    bound[v] = c
                elif cur != c:
                    ok = False
                    break
            if not ok:
                continue
            assignment.update(bound)
            rec(i + 1)
            for v in bound:
                del assignment[v]

    rec(0)
    return OracleResult(
        answers=AnswerSet(arity=len(head), tuples=frozenset(answers)),
        hom_count=state["homs"],
    )


def naive_refine(g: LabeledGraph) -> Coloring:
    """Round-based signature refinement from the vertex labels to a fixed
    point.  Partition-equal to the worklist implementation."""
    if not g.vertices:
        return Coloring(col={}, classes=())
    init = {v: tuple(sorted(g.vl[v])) for v in g.vertices}
    palette = {lab: i for i, lab in enumerate(sorted(set(init.values())))}
    color = {v: palette[init[v]] for v in g.vertices}
    ncolors = len(palette)
    while True:
        sig = {v: (color[v], tuple(sorted(color[u] for u in g.adj[v]))) for v in g.vertices}
        newpal = {s: i for i, s in enumerate(sorted(set(sig.values())))}
        if len(newpal) == ncolors:
            break
        color = {v: newpal[sig[v]] for v in g.vertices}
        ncolors = len(newpal)
    groups: dict[int, list[int]] = {}
    for v in g.vertices:
        groups.setdefault(color[v], []).append(v)
    return _canonicalize(list(groups.values()))
