import pytest

from colorindex.model import Schema, validate_database
from colorindex.textio import parse_query

MOVIE_RAW = {
    "P": [("PS", "LM"), ("PS", "MM")],
    "A": [("LM", "PS"), ("MM", "PS")],
    "M": [("LM", "Dr.S"), ("MM", "Dr.S")],
    "S": [("LM", "18m"), ("MM", "34m")],
}


@pytest.fixture(scope="session")
def movie_schema():
    return Schema.of(("P", 2), ("A", 2), ("M", 2), ("S", 2))


@pytest.fixture(scope="session")
def movie_db(movie_schema):
    return validate_database(movie_schema, MOVIE_RAW)


@pytest.fixture(scope="session")
def movie_query(movie_schema):
    """The running-example query: actors playing a character who share a
    second character played by the same actor."""
    return parse_query("Ans(x,y1) :- A(x,y1), A(x,y2), P(y2,x).", movie_schema)


def displayed(db, tuples):
    return sorted(tuple(db.display(c) for c in t) for t in tuples)
