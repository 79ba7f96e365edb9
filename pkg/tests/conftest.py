from pathlib import Path

import pytest

from strata.model import GraphDataset, Person, Relation, parse_dataset

FIXTURE_DIR = Path(__file__).resolve().parent.parent / "fixtures"
GOLDEN_DIR = Path(__file__).resolve().parent / "golden"


def load_fixture(name: str) -> GraphDataset:
    return parse_dataset((FIXTURE_DIR / name).read_text(encoding="utf-8"))


def trio() -> GraphDataset:
    """Two parents and a child: A parent_of C, B parent_of C, A spouse_of B."""
    return GraphDataset(
        persons=(
            Person(id="A", label="A"),
            Person(id="B", label="B"),
            Person(id="C", label="C"),
        ),
        relations=(
            Relation("A", "C", "parent_of"),
            Relation("B", "C", "parent_of"),
            Relation("A", "B", "spouse_of"),
        ),
    )


def chain3() -> GraphDataset:
    """a parent_of b parent_of c."""
    return GraphDataset(
        persons=(
            Person(id="a", label="a"),
            Person(id="b", label="b"),
            Person(id="c", label="c"),
        ),
        relations=(
            Relation("a", "b", "parent_of"),
            Relation("b", "c", "parent_of"),
        ),
    )


@pytest.fixture
def cornelia38() -> GraphDataset:
    return load_fixture("cornelia38.json")


@pytest.fixture
def fig2_13() -> GraphDataset:
    return load_fixture("fig2_13.json")
