import pytest

from colorindex.errors import BudgetExceeded
from colorindex.generators import cycle_db, path_db
from colorindex.model import Schema, cq, validate_database
from colorindex.oracle import brute_answers, naive_refine
from colorindex.refinement import encode_loops, is_stable


def test_movie_example(movie_db, movie_query):
    res = brute_answers(movie_query, movie_db)
    assert res.hom_count == 2
    shown = sorted(tuple(movie_db.display(c) for c in t) for t in res.answers.tuples)
    assert shown == [("LM", "PS"), ("MM", "PS")]


def test_empty_db():
    schema = Schema.of(("R", 2))
    db = validate_database(schema, {})
    res = brute_answers(cq(["x"], [("R", ["x", "y"])]), db)
    assert len(res.answers) == 0 and res.hom_count == 0


def test_k2_symmetric():
    schema = Schema.of(("E", 2))
    db = validate_database(schema, {"E": [("a", "b"), ("b", "a")]})
    res = brute_answers(cq(["x", "y"], [("E", ["x", "y"])]), db)
    assert len(res.answers) == 2


def test_repeated_variables_respected():
    schema = Schema.of(("R", 2))
    db = validate_database(schema, {"R": [("a", "a"), ("a", "b")]})
    res = brute_answers(cq(["x"], [("R", ["x", "x"])]), db)
    assert len(res.answers) == 1


def test_budget_guard():
    db = cycle_db(30)
    q = cq([], [("E", [f"x{i}", f"x{i+1}"]) for i in range(8)])
    with pytest.raises(BudgetExceeded):
        brute_answers(q, db, budget=1000)


def test_naive_refine_path():
    assert naive_refine(encode_loops(path_db(3))).num_colors == 2


@pytest.mark.parametrize("n", [3, 5, 9])
def test_naive_refine_cycle(n):
    assert naive_refine(encode_loops(cycle_db(n))).num_colors == 1


def test_naive_refine_always_stable():
    import random

    from colorindex.generators import random_graph_db

    rng = random.Random(1212)
    for _ in range(60):
        g = encode_loops(
            random_graph_db(rng.randint(1, 9), rng.random(), seed=rng.randrange(10**9), loop_p=0.3)
        )
        ok, witness = is_stable(g, naive_refine(g))
        assert ok, witness
