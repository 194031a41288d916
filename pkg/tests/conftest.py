"""Shared fixtures and independent brute-force helpers for the test suite.

The helpers here are deliberately naive pure-Python loops over the distance
matrix, so they share no code path with the vectorized library routines
they are compared against.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from commonfix import MetricSpace, MultiMap
from commonfix.maps import halving

PROBLEMS = Path(__file__).resolve().parents[1] / "src" / "commonfix" / "problems"

# {0,1,2,4} under the plain absolute value, and under the path metric of the
# embedding 0 -> 0, 1 -> 1, 2 -> 3, 4 -> 7 (there halving contracts by exactly 1/2)
ABS_ROWS = [[0, 1, 2, 4], [1, 0, 1, 3], [2, 1, 0, 2], [4, 3, 2, 0]]
EMBED_ROWS = [[0, 1, 3, 7], [1, 0, 2, 6], [3, 2, 0, 4], [7, 6, 4, 0]]
LABELS = ["0", "1", "2", "4"]


def brute_point_set(D, x, A) -> float:
    return min(D[x][a] for a in A)


def brute_hausdorff(D, A, B) -> float:
    return max(max(brute_point_set(D, b, A) for b in B),
               max(brute_point_set(D, a, B) for a in A))


def brute_m(D, Sx, Ty, x, y) -> float:
    return max(D[x][y], brute_point_set(D, x, Sx), brute_point_set(D, y, Ty),
               (brute_point_set(D, x, Ty) + brute_point_set(D, y, Sx)) / 2)


@pytest.fixture
def abs_space() -> MetricSpace:
    return MetricSpace.from_matrix(ABS_ROWS, labels=LABELS)


@pytest.fixture
def embed_space() -> MetricSpace:
    return MetricSpace.from_matrix(EMBED_ROWS, labels=LABELS)


@pytest.fixture
def abs_halving(abs_space) -> MultiMap:
    return halving(abs_space)


@pytest.fixture
def embed_halving(embed_space) -> MultiMap:
    return halving(embed_space)


@pytest.fixture
def two_point() -> MetricSpace:
    return MetricSpace.from_matrix([[0, 1], [1, 0]], labels=["a", "b"])


@pytest.fixture
def problems_dir() -> Path:
    return PROBLEMS


def random_integer_metric(rng: np.random.Generator, n: int, wmax: int = 20) -> np.ndarray:
    """Shortest-path metric of a random complete graph with integer weights.

    Sums of small integers are exact in floating point, so the triangle
    inequality holds with no round-off at all.
    """
    W = rng.integers(1, wmax + 1, size=(n, n)).astype(float)
    W = np.minimum(W, W.T)
    np.fill_diagonal(W, 0.0)
    for k in range(n):
        W = np.minimum(W, W[:, k:k + 1] + W[k:k + 1, :])
    return W


# ---- acceptance reporting -------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion."""

    def record(number: int, title: str, ok: bool, detail: str) -> bool:
        ACCEPTANCE_LINES.append(f"[{number}] {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
