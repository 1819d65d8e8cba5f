import random
import sys
from pathlib import Path

import pytest

from roma.board import BoardSpec, parse_board
from roma.corpus import random_board

DATA = Path(__file__).parent / "data"

# the oracle and the exhaustive searches recurse once per empty cell
sys.setrecursionlimit(max(sys.getrecursionlimit(), 100_000))


def load(name: str) -> BoardSpec:
    return parse_board((DATA / name).read_text(encoding="utf-8"))


@pytest.fixture
def example() -> BoardSpec:
    return load("example.roma")


def corpus(count: int, seed: int, sizes=(2, 3, 4)) -> list[BoardSpec]:
    """Deterministic random boards for oracle-equivalence tests."""
    rng = random.Random(seed)
    return [random_board(rng.choice(sizes), rng) for _ in range(count)]


@pytest.fixture(scope="session")
def small_corpus() -> list[BoardSpec]:
    return corpus(120, seed=11)
