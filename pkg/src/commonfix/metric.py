"""Finite metric spaces, finite point sets and the Hausdorff metric.

Points are integer indices into a finite universe. A space is either an
explicit symmetric distance matrix (optionally with display labels) or a
uniform 1-D grid ``origin + i * step`` with ``d(x, y) = |x - y|``. Both
modes precompute the full distance matrix, so every operation below is an
exact lookup/min/max over finitely many entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

__all__ = [
    "DomainError",
    "PointSet",
    "MetricSpace",
    "ValidationReport",
    "distance",
    "point_set_distance",
    "hausdorff",
    "validate_metric",
    "GRID_RTOL",
]

# relative tolerance for comparisons on grid-derived (computed) distances
GRID_RTOL = 1e-12


class DomainError(ValueError):
    """Raised for out-of-range points, empty sets and similar misuse."""


class PointSet(tuple):
    """Nonempty finite set of points, stored deduplicated in ascending order.

    Being a tuple subclass it is immutable, hashable and compares equal
    exactly when the underlying sets are equal.
    """

    __slots__ = ()

    def __new__(cls, members: Iterable[int] = ()):
        try:
            items = sorted({_as_index(m) for m in members})
        except TypeError as exc:
            raise DomainError(f"point set members must be integers: {exc}") from None
        if not items:
            raise DomainError("point set must be nonempty")
        return super().__new__(cls, items)

    def __repr__(self) -> str:
        return "PointSet({" + ", ".join(map(str, self)) + "})"


def _as_index(x) -> int:
    if isinstance(x, (bool, np.bool_)):
        raise TypeError(f"{x!r} is not a point index")
    if isinstance(x, (int, np.integer)):
        return int(x)
    raise TypeError(f"{x!r} is not a point index")


class MetricSpace:
    """A finite metric space over points ``0 .. n-1``.

    Use :meth:`from_matrix` or :meth:`grid` rather than the constructor.
    """

    def __init__(self, mode: str, dist: np.ndarray, labels: Sequence[str],
                 grid: Optional[tuple[float, float, int]] = None):
        self.mode = mode
        self._dist = dist
        self._dist.setflags(write=False)
        self.labels = tuple(labels)
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        self.grid_spec = grid

    @classmethod
    def from_matrix(cls, matrix, labels: Optional[Sequence] = None,
                    validate: bool = True) -> "MetricSpace":
        """Build a space from an explicit ``n x n`` distance matrix.

        With ``validate`` (the default) the metric axioms are checked and a
        :class:`DomainError` describing the first violation is raised.
        """
        dist = np.array(matrix, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1] or dist.shape[0] == 0:
            raise DomainError(f"distance matrix must be square and nonempty, got shape {dist.shape}")
        if not np.all(np.isfinite(dist)) or np.any(dist < 0):
            raise DomainError("distance matrix entries must be finite and nonnegative")
        n = dist.shape[0]
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = [str(lab) for lab in labels]
        if len(labels) != n:
            raise DomainError(f"expected {n} labels, got {len(labels)}")
        if len(set(labels)) != n:
            raise DomainError("labels must be distinct")
        space = cls("matrix", dist, labels)
        if validate:
            report = validate_metric(space)
            if not report.valid:
                raise DomainError(f"not a metric: {report.violation}")
        return space

    @classmethod
    def grid(cls, origin: float, step: float, count: int) -> "MetricSpace":
        """Uniform grid ``origin + i * step`` for ``i < count`` with ``|x - y|``."""
        if not (step > 0 and math.isfinite(step)):
            raise DomainError(f"grid step must be positive, got {step}")
        if int(count) != count or count < 1:
            raise DomainError(f"grid count must be an integer >= 1, got {count}")
        count = int(count)
        coords = origin + step * np.arange(count, dtype=float)
        dist = np.abs(coords[:, None] - coords[None, :])
        labels = [_format_coord(c) for c in coords]
        space = cls("grid", dist, labels, grid=(float(origin), float(step), count))
        space._coords = coords
        return space

    @property
    def n(self) -> int:
        return self._dist.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        """Read-only view of the full distance matrix."""
        return self._dist

    @property
    def exact(self) -> bool:
        """True for matrix spaces, whose distances are user-supplied exact values."""
        return self.mode == "matrix"

    def points(self) -> range:
        return range(self.n)

    def check_point(self, x) -> int:
        try:
            i = _as_index(x)
        except TypeError as exc:
            raise DomainError(str(exc)) from None
        if not 0 <= i < self.n:
            raise DomainError(f"point {i} out of range for a space of {self.n} points")
        return i

    def coord(self, x: int) -> float:
        """Grid coordinate of point ``x`` (grid mode only)."""
        if self.mode != "grid":
            raise DomainError("coordinates are only defined on grid spaces")
        return float(self._coords[self.check_point(x)])

    def label(self, x: int) -> str:
        return self.labels[self.check_point(x)]

    def lookup(self, token) -> int:
        """Resolve a label (matrix mode) or coordinate (grid mode) to a point.

        Grid coordinates must lie on the grid up to a relative tolerance of
        ``1e-9`` of the step.
        """
        if self.mode == "grid":
            origin, step, count = self.grid_spec
            try:
                value = float(token)
            except (TypeError, ValueError):
                raise DomainError(f"{token!r} is not a grid coordinate") from None
            pos = (value - origin) / step
            i = round(pos)
            if abs(pos - i) > 1e-9 or not 0 <= i < count:
                raise DomainError(f"{token!r} does not lie on the grid")
            return int(i)
        key = str(token)
        if key not in self._label_index:
            raise DomainError(f"unknown point label {key!r}")
        return self._label_index[key]

    def __eq__(self, other) -> bool:
        if not isinstance(other, MetricSpace):
            return NotImplemented
        return (self.mode == other.mode and self.labels == other.labels
                and self.grid_spec == other.grid_spec
                and np.array_equal(self._dist, other._dist))

    def __hash__(self):
        return hash((self.mode, self.labels, self.grid_spec))

    def __repr__(self) -> str:
        if self.mode == "grid":
            origin, step, count = self.grid_spec
            return f"MetricSpace.grid(origin={origin}, step={step}, count={count})"
        return f"MetricSpace(matrix, n={self.n})"


def _format_coord(c: float) -> str:
    return repr(float(c))


def distance(space: MetricSpace, x: int, y: int) -> float:
    """Return ``d(x, y)``."""
    return float(space.matrix[space.check_point(x), space.check_point(y)])


def _members(space: MetricSpace, A) -> np.ndarray:
    if len(A) == 0:
        raise DomainError("point set must be nonempty")
    idx = np.fromiter((space.check_point(a) for a in A), dtype=np.intp, count=len(A))
    return idx


def point_set_distance(space: MetricSpace, x: int, A) -> float:
    """Return ``d(x, A) = min_{a in A} d(x, a)``; zero exactly when ``x`` is in ``A``."""
    idx = _members(space, A)
    return float(space.matrix[space.check_point(x), idx].min())


def hausdorff(space: MetricSpace, A, B) -> float:
    """Hausdorff distance between two nonempty finite point sets."""
    ia, ib = _members(space, A), _members(space, B)
    sub = space.matrix[np.ix_(ia, ib)]
    return float(max(sub.min(axis=0).max(), sub.min(axis=1).max()))


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violation: Optional[str] = None
    where: Optional[tuple] = None

    def __bool__(self) -> bool:
        return self.valid


def validate_metric(space: MetricSpace) -> ValidationReport:
    """Check the metric axioms exhaustively, reporting the first violation.

    Matrix spaces are compared exactly; grid spaces allow a relative slack of
    ``GRID_RTOL`` in the triangle inequality.
    """
    D = space.matrix
    n = D.shape[0]
    diag = np.flatnonzero(np.diag(D) != 0)
    if diag.size:
        i = int(diag[0])
        return ValidationReport(False, f"nonzero diagonal at ({i},{i})", (i, i))
    asym = np.argwhere(D != D.T)
    if asym.size:
        i, j = sorted(map(int, asym[0]))
        return ValidationReport(False, f"asymmetry at ({i},{j})", (i, j))
    off = ~np.eye(n, dtype=bool)
    zero = np.argwhere((D == 0) & off)
    if zero.size:
        i, j = map(int, zero[0])
        return ValidationReport(False, f"zero distance between distinct points ({i},{j})", (i, j))
    # through[i, j, k] = d(i, j) + d(j, k), compared with d(i, k)
    through = D[:, :, None] + D[None, :, :]
    direct = D[:, None, :]
    if space.exact:
        bad = direct > through
    else:
        bad = direct > through * (1 + GRID_RTOL)
    hits = np.argwhere(bad)
    if hits.size:
        i, j, k = map(int, hits[0])
        return ValidationReport(
            False, f"triangle d({i},{k}) > d({i},{j})+d({j},{k})", (i, j, k))
    return ValidationReport(True)
