import itertools
import random

import pytest

from colorindex.errors import AsymmetricEdgeRelation
from colorindex.generators import (
    complete_binary_tree_db,
    cycle_db,
    path_db,
    random_graph_db,
)
from colorindex.model import Schema, validate_database
from colorindex.oracle import naive_refine
from colorindex.refinement import Coloring, encode_loops, is_stable, refine, refines_labels


def test_encode_loops_loop_free():
    g = encode_loops(cycle_db(5))
    assert all(g.loop_label not in g.vl[v] for v in g.vertices)


def test_encode_loops_single_loop_vertex():
    schema = Schema.of(("E", 2))
    db = validate_database(schema, {"E": [("a", "a")]})
    g = encode_loops(db)
    (v,) = g.vertices
    assert g.loop_label in g.vl[v]
    assert g.has_loop(v)


def test_encode_loops_asymmetric_rejected():
    schema = Schema.of(("E", 2))
    db = validate_database(schema, {"E": [("a", "b")]})
    with pytest.raises(AsymmetricEdgeRelation):
        encode_loops(db)


def test_refine_path_two_colors():
    g = encode_loops(path_db(3))
    col = refine(g)
    assert col.num_colors == 2
    sizes = sorted(len(c) for c in col.classes)
    assert sizes == [1, 2]


@pytest.mark.parametrize("n", [3, 6, 11])
def test_refine_cycle_one_color(n):
    assert refine(encode_loops(cycle_db(n))).num_colors == 1


@pytest.mark.parametrize("h", [1, 3, 5])
def test_refine_binary_tree_depth_colors(h):
    g = encode_loops(complete_binary_tree_db(h))
    assert refine(g).num_colors == h + 1


def test_is_stable_discrete():
    g = encode_loops(path_db(4))
    classes = tuple((v,) for v in g.vertices)
    col = Coloring(col={v: i for i, (v,) in enumerate(classes)}, classes=classes)
    ok, witness = is_stable(g, col)
    assert ok and witness is None


def test_is_stable_monochrome_path_witness():
    g = encode_loops(path_db(3))
    col = Coloring(col={v: 0 for v in g.vertices}, classes=(tuple(g.vertices),))
    ok, witness = is_stable(g, col)
    assert not ok
    assert witness is not None and witness[0] != witness[1]


def _random_graphs(count, seed):
    rng = random.Random(seed)
    for _ in range(count):
        yield random_graph_db(
            rng.randint(1, 12),
            rng.random(),
            seed=rng.randrange(10**9),
            num_labels=rng.randint(0, 2),
            loop_p=rng.choice([0.0, 0.3]),
        )


def test_refine_matches_naive_oracle():
    for db in _random_graphs(150, seed=2718):
        g = encode_loops(db)
        assert refine(g).partition() == naive_refine(g).partition()


def test_refine_output_stable_and_refines_labels():
    for db in _random_graphs(100, seed=3141):
        g = encode_loops(db)
        col = refine(g)
        ok, witness = is_stable(g, col)
        assert ok, witness
        assert refines_labels(g, col)


def test_merging_any_two_classes_breaks_stability():
    for db in _random_graphs(40, seed=1618):
        g = encode_loops(db)
        col = refine(g)
        for i, j in itertools.combinations(range(col.num_colors), 2):
            merged_classes = [list(c) for k, c in enumerate(col.classes) if k not in (i, j)]
            merged_classes.append(sorted(col.classes[i] + col.classes[j]))
            mapping = {v: k for k, members in enumerate(merged_classes) for v in members}
            merged = Coloring(
                col=mapping, classes=tuple(tuple(c) for c in merged_classes)
            )
            ok, _ = is_stable(g, merged)
            assert not ok or not refines_labels(g, merged)
