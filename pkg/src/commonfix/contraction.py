"""Generalized distance functionals and contraction certificates.

A certificate checks one of the contraction inequalities for a pair of
multi-valued maps ``(S, T)`` on every requested pair of points. On a finite
space with ``pairs="all"`` a pass is a proof over the represented space.

Two kinds of failure are kept apart: an inequality that fails is a
legitimate negative result (``CertificateReport.passed`` is False), while
an oracle that leaves its admissible range (``alpha >= 1``, a gauge with
``phi(t) >= t``, a negative gap) invalidates the premise and raises
:class:`CertificateError`.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Union

import numpy as np

from .maps import MultiMap
from .metric import DomainError, MetricSpace, distance, hausdorff, point_set_distance

__all__ = [
    "CertificateError",
    "AlphaOracle",
    "Gauge",
    "CompactlyPositiveGap",
    "CertificateReport",
    "GaugeReport",
    "ContractionSpec",
    "m_functional",
    "n_functional",
    "check_alpha_duality",
    "check_phi_duality",
    "check_weakly_contractive",
    "lambda_band",
    "alpha_from_compact_gap",
    "alpha_from_gauge",
    "check_gauge_conditions",
    "default_t_grid",
    "snap_margin",
]

REL_TOL = 1e-12

Pairs = Union[str, int, Iterable[tuple[int, int]]]


class CertificateError(Exception):
    """An oracle left its admissible range, so the certificate premise is void."""

    def __init__(self, message: str, pair: Optional[tuple[int, int]] = None):
        super().__init__(message)
        self.pair = pair


class AlphaOracle:
    """Contraction factor ``alpha(x, y)``; every evaluation must lie in ``[0, 1)``."""

    def __init__(self, func: Callable[[int, int], float], name: str = "alpha"):
        self._func = func
        self.name = name

    @classmethod
    def constant(cls, c: float) -> "AlphaOracle":
        c = float(c)
        return cls(lambda x, y: c, name=f"constant({c:g})")

    def __call__(self, x: int, y: int) -> float:
        value = float(self._func(x, y))
        if not 0.0 <= value < 1.0:
            raise CertificateError(
                f"alpha({x},{y}) = {value!r} lies outside [0, 1)", pair=(x, y))
        return value

    def __repr__(self) -> str:
        return f"AlphaOracle({self.name})"


class Gauge:
    """Univariate gauge ``phi`` with ``phi(0) = 0`` and ``phi(t) < t`` for ``t > 0``.

    The axioms are not enforced on construction; see :func:`check_gauge_conditions`.
    """

    def __init__(self, func: Callable[[float], float], name: str = "phi"):
        self._func = func
        self.name = name

    @classmethod
    def linear(cls, c: float) -> "Gauge":
        c = float(c)
        return cls(lambda t: c * t, name=f"linear({c:g})")

    @classmethod
    def rational(cls, c: float = 1.0) -> "Gauge":
        """``c * t / (1 + t)``."""
        c = float(c)
        return cls(lambda t: c * t / (1.0 + t), name=f"rational({c:g})")

    @classmethod
    def zero(cls) -> "Gauge":
        return cls(lambda t: 0.0, name="zero")

    @classmethod
    def damped(cls) -> "Gauge":
        """``t * (1 - exp(-t))``: fine near zero, but ``t - phi(t)`` vanishes at infinity."""
        return cls(lambda t: t * -math.expm1(-t), name="damped")

    def __call__(self, t: float) -> float:
        return float(self._func(float(t)))

    def __repr__(self) -> str:
        return f"Gauge({self.name})"


class CompactlyPositiveGap:
    """Bivariate gap ``phi(x, y) >= 0`` of the weakly-contractive inequality."""

    def __init__(self, func: Callable[[int, int], float], name: str = "gap"):
        self._func = func
        self.name = name

    @classmethod
    def linear(cls, space: MetricSpace, c: float) -> "CompactlyPositiveGap":
        """``c * d(x, y)``."""
        c = float(c)
        return cls(lambda x, y: c * distance(space, x, y), name=f"linear({c:g})")

    @classmethod
    def rational(cls, space: MetricSpace, c: float = 1.0) -> "CompactlyPositiveGap":
        """``c * d / (1 + d)`` with ``d = d(x, y)``."""
        c = float(c)

        def gap(x, y):
            d = distance(space, x, y)
            return c * d / (1.0 + d)

        return cls(gap, name=f"rational({c:g})")

    @classmethod
    def constant(cls, c: float) -> "CompactlyPositiveGap":
        c = float(c)
        return cls(lambda x, y: c, name=f"constant({c:g})")

    def __call__(self, x: int, y: int) -> float:
        return float(self._func(x, y))

    def __repr__(self) -> str:
        return f"CompactlyPositiveGap({self.name})"


@dataclass
class CertificateReport:
    """Outcome of a certificate check.

    ``worst_margin`` is ``lhs - rhs`` at ``worst_pair``; positive means the
    inequality is violated there. ``conditions`` holds extra yes/no checks a
    certificate needs besides the inequality (all must hold for a pass).
    """

    kind: str
    pairs_checked: int
    worst_pair: Optional[tuple[int, int]]
    worst_margin: float
    conditions: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.worst_margin <= 0 and all(self.conditions.values())

    def __bool__(self) -> bool:
        return self.passed

    def render(self, space: Optional[MetricSpace] = None) -> str:
        status = "PASS" if self.passed else "FAIL"
        lines = [f"{self.kind}: {status} ({self.pairs_checked} pairs checked)"]
        if self.worst_pair is not None:
            x, y = self.worst_pair
            if space is not None:
                x, y = space.label(x), space.label(y)
            lines.append(f"  worst pair ({x}, {y}) margin {self.worst_margin:.6g}")
        for name, ok in self.conditions.items():
            lines.append(f"  {name}: {'yes' if ok else 'no'}")
        return "\n".join(lines)


def snap_margin(lhs: float, rhs: float) -> float:
    """``lhs - rhs`` with float round-off at equality snapped to zero."""
    margin = lhs - rhs
    if 0 < margin <= REL_TOL * max(1.0, abs(lhs), abs(rhs)):
        return 0.0
    return margin


def m_functional(space: MetricSpace, S: MultiMap, T: MultiMap, x: int, y: int) -> float:
    """``max{d(x,y), d(x,Sx), d(y,Ty), (d(x,Ty) + d(y,Sx)) / 2}``."""
    Sx, Ty = S(x), T(y)
    return max(
        distance(space, x, y),
        point_set_distance(space, x, Sx),
        point_set_distance(space, y, Ty),
        (point_set_distance(space, x, Ty) + point_set_distance(space, y, Sx)) / 2,
    )


def n_functional(space: MetricSpace, T: MultiMap, x: int, y: int) -> float:
    """Single-map version: ``max{d(x,y), d(x,Tx), d(y,Ty), (d(x,Ty) + d(y,Tx)) / 2}``."""
    d = space.matrix
    Tx, Ty = list(T(x)), list(T(y))
    return max(
        d[x, y],
        d[x, Tx].min(),
        d[y, Ty].min(),
        (d[x, Ty].min() + d[y, Tx].min()) / 2,
    ).item()


def _iter_pairs(space: MetricSpace, pairs: Pairs, seed: int = 0) -> list[tuple[int, int]]:
    if isinstance(pairs, str):
        if pairs != "all":
            raise DomainError(f"pairs must be 'all', a sample size or a list, got {pairs!r}")
        return list(itertools.product(space.points(), repeat=2))
    if isinstance(pairs, (int, np.integer)):
        if pairs < 1:
            raise DomainError(f"sample size must be >= 1, got {pairs}")
        rng = np.random.default_rng(seed)
        xs = rng.integers(0, space.n, size=(int(pairs), 2))
        return [(int(a), int(b)) for a, b in xs]
    return [(space.check_point(a), space.check_point(b)) for a, b in pairs]


def _report(kind: str, margins: Iterable[tuple[tuple[int, int], float]]) -> CertificateReport:
    count, worst_pair, worst = 0, None, -math.inf
    for pair, margin in margins:
        count += 1
        if margin > worst:
            worst_pair, worst = pair, margin
    return CertificateReport(kind, count, worst_pair, worst if count else 0.0)


def check_alpha_duality(space: MetricSpace, S: MultiMap, T: MultiMap, alpha: AlphaOracle,
                        pairs: Pairs = "all", seed: int = 0) -> CertificateReport:
    """Check ``H(Sx, Ty) <= alpha(x, y) * M(x, y)`` on the requested pairs."""

    def margins():
        for x, y in _iter_pairs(space, pairs, seed):
            a = alpha(x, y)
            rhs = a * m_functional(space, S, T, x, y)
            yield (x, y), snap_margin(hausdorff(space, S(x), T(y)), rhs)

    return _report("alpha-duality", margins())


def _require_gauge(phi: Gauge) -> None:
    report = check_gauge_conditions(phi)
    if not report.phi_at_zero_ok:
        raise CertificateError(f"gauge {phi.name}: phi(0) = {phi(0.0)!r}, expected 0")
    if not report.below_identity_ok:
        raise CertificateError(
            f"gauge {phi.name}: phi(t) >= t at sampled t = {report.first_axiom_failure!r}")


def check_phi_duality(space: MetricSpace, S: MultiMap, T: MultiMap, phi: Gauge,
                      pairs: Pairs = "all", seed: int = 0) -> CertificateReport:
    """Check ``H(Sx, Ty) <= phi(M(x, y))`` on the requested pairs.

    The gauge axioms are sampled first; a gauge failing them raises
    :class:`CertificateError` before any pair is examined.
    """
    _require_gauge(phi)

    def margins():
        for x, y in _iter_pairs(space, pairs, seed):
            m = m_functional(space, S, T, x, y)
            rhs = phi(m)
            if (m > 0 and rhs >= m) or (m == 0 and rhs != 0) or rhs < 0:
                raise CertificateError(
                    f"gauge {phi.name}: phi({m!r}) = {rhs!r} breaks the gauge axioms", pair=(x, y))
            yield (x, y), snap_margin(hausdorff(space, S(x), T(y)), rhs)

    return _report("phi-duality", margins())


def _band_minima(space: MetricSpace, gap: CompactlyPositiveGap) -> dict[float, float]:
    """Minimum of ``gap`` over pairs at each realized positive distance."""
    minima: dict[float, float] = {}
    D = space.matrix
    for x, y in itertools.permutations(space.points(), 2):
        d = float(D[x, y])
        g = gap(x, y)
        if g < minima.get(d, math.inf):
            minima[d] = g
    return minima


def check_weakly_contractive(space: MetricSpace, T: MultiMap, gap: CompactlyPositiveGap,
                             pairs: Pairs = "all", seed: int = 0) -> CertificateReport:
    """Check ``H(Tx, Ty) <= d(x, y) - gap(x, y)`` plus compact positivity of ``gap``.

    On a finite space every band ``[a, b]`` meets finitely many realized
    distances, so compact positivity holds exactly when ``gap > 0`` at every
    pair of distinct points.
    """

    def margins():
        for x, y in _iter_pairs(space, pairs, seed):
            g = gap(x, y)
            if g < 0:
                raise CertificateError(f"gap({x},{y}) = {g!r} is negative", pair=(x, y))
            rhs = distance(space, x, y) - g
            yield (x, y), snap_margin(hausdorff(space, T(x), T(y)), rhs)

    report = _report("weakly-contractive", margins())
    minima = _band_minima(space, gap)
    report.conditions["compactly_positive"] = all(v > 0 for v in minima.values())
    return report


def lambda_band(space: MetricSpace, gap: CompactlyPositiveGap, a: float, b: float) -> float:
    """Infimum of ``gap`` over pairs with ``a <= d(x, y) <= b``; ``inf`` if there are none."""
    if not a > 0:
        raise DomainError(f"band start must be positive, got {a}")
    if b < a:
        raise DomainError(f"empty band [{a}, {b}]")
    D = space.matrix
    best = math.inf
    for x, y in itertools.permutations(space.points(), 2):
        if a <= D[x, y] <= b:
            best = min(best, gap(x, y))
    return best


def alpha_from_compact_gap(gap: CompactlyPositiveGap, space: MetricSpace) -> AlphaOracle:
    """``alpha(x, y) = 1 - gap(x, y) / d(x, y)``, and ``0`` on the diagonal."""

    def alpha(x, y):
        d = distance(space, x, y)
        if d == 0:
            return 0.0
        return 1.0 - gap(x, y) / d

    return AlphaOracle(alpha, name=f"1 - {gap.name}/d")


def alpha_from_gauge(phi: Gauge, S: MultiMap, T: MultiMap, space: MetricSpace) -> AlphaOracle:
    """``alpha(x, y) = phi(M(x, y)) / M(x, y)``, and ``0`` where ``M`` vanishes."""

    def alpha(x, y):
        m = m_functional(space, S, T, x, y)
        if m == 0:
            return 0.0
        v = phi(m)
        if v >= m:
            raise CertificateError(
                f"gauge {phi.name}: phi({m!r}) = {v!r} is not below its argument", pair=(x, y))
        return v / m

    return AlphaOracle(alpha, name=f"{phi.name}(M)/M")


def default_t_grid(t_min: float = 1e-9, t_max: float = 1e6, num: int = 200) -> np.ndarray:
    return np.logspace(math.log10(t_min), math.log10(t_max), num)


@dataclass
class GaugeReport:
    """Sampled gauge diagnostics. Falsification only: a pass is evidence, not proof."""

    phi_at_zero_ok: bool
    below_identity_ok: bool
    first_axiom_failure: Optional[float]
    max_ratio: float
    small_t_ratio: float
    large_t_gap: float
    small_t_window: float
    large_t_window: float
    label: str = "sampled, falsification-only"

    @property
    def small_t_ok(self) -> bool:
        """``limsup_{t->0} phi(t)/t < 1`` estimated on the small-t window."""
        return self.small_t_ratio < 1

    @property
    def small_t_inconclusive(self) -> bool:
        """The small-t estimate sits so close to 1 that sampling cannot tell."""
        return self.small_t_ok and 1 - self.small_t_ratio < 1e-6

    @property
    def large_t_ok(self) -> bool:
        """``liminf_{t->inf} (t - phi(t)) > 0`` estimated on the large-t window."""
        return self.large_t_gap > 0

    def render(self) -> str:
        return "\n".join([
            f"gauge conditions ({self.label})",
            f"  phi(0) = 0: {'yes' if self.phi_at_zero_ok else 'no'}",
            f"  phi(t) < t on grid: {'yes' if self.below_identity_ok else 'no'}",
            f"  max phi(t)/t: {self.max_ratio:.6g}",
            f"  limsup t->0 phi(t)/t (t < {self.small_t_window:g}): "
            f"{self.small_t_ratio:.10g} -> {'pass' if self.small_t_ok else 'fail'}"
            + (" (within 1e-6 of 1, inconclusive)" if self.small_t_inconclusive else ""),
            f"  liminf t->inf t - phi(t) (t > {self.large_t_window:g}): "
            f"{self.large_t_gap:.6g} -> {'pass' if self.large_t_ok else 'fail'}",
        ])


def check_gauge_conditions(phi: Gauge, t_grid=None, small_t: float = 1e-3,
                           large_t: float = 1e3) -> GaugeReport:
    """Sample the gauge axioms and the two asymptotic conditions on a log grid.

    The small-t estimate is the maximum of ``phi(t)/t`` for ``t < small_t``;
    the large-t estimate is the minimum of ``t - phi(t)`` for ``t > large_t``.
    An empty window yields ``nan`` (and therefore a failed condition).
    """
    t = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    t = t[t > 0]
    values = np.array([phi(s) for s in t])
    below = values < t
    ratio = values / t
    small = t < small_t
    large = t > large_t
    first_fail = None if below.all() else float(t[np.argmin(below)])
    return GaugeReport(
        phi_at_zero_ok=phi(0.0) == 0.0,
        below_identity_ok=bool(below.all() and np.all(values >= 0)),
        first_axiom_failure=first_fail,
        max_ratio=float(ratio.max()) if t.size else math.nan,
        small_t_ratio=float(ratio[small].max()) if small.any() else math.nan,
        large_t_gap=float((t - values)[large].min()) if large.any() else math.nan,
        small_t_window=small_t,
        large_t_window=large_t,
    )


@dataclass
class ContractionSpec:
    """Which contraction inequality a pair ``(S, T)`` is claimed to satisfy.

    ``kind`` is one of ``"alpha-duality"``, ``"constant-alpha"``,
    ``"phi-duality"`` or ``"weakly-contractive"``. The semicontinuity flags
    are declarations by the problem author and are only echoed in reports.
    """

    kind: str
    alpha: Optional[AlphaOracle] = None
    phi: Optional[Gauge] = None
    gap: Optional[CompactlyPositiveGap] = None
    alpha_usc: bool = False
    phi_usc: bool = False

    KINDS = ("alpha-duality", "constant-alpha", "phi-duality", "weakly-contractive")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise DomainError(f"unknown certificate kind {self.kind!r}")
        needs = {"alpha-duality": "alpha", "constant-alpha": "alpha",
                 "phi-duality": "phi", "weakly-contractive": "gap"}[self.kind]
        if getattr(self, needs) is None:
            raise DomainError(f"{self.kind} certificate needs {needs}")

    @classmethod
    def constant(cls, c: float) -> "ContractionSpec":
        return cls("constant-alpha", alpha=AlphaOracle.constant(c))

    @property
    def uses_gauge(self) -> bool:
        return self.kind == "phi-duality"

    def alpha_oracle(self, space: MetricSpace, S: MultiMap, T: MultiMap) -> AlphaOracle:
        """The factor oracle the fixed-point iteration runs with."""
        if self.kind == "phi-duality":
            return alpha_from_gauge(self.phi, S, T, space)
        if self.kind == "weakly-contractive":
            return alpha_from_compact_gap(self.gap, space)
        return self.alpha

    def check(self, space: MetricSpace, S: MultiMap, T: MultiMap,
              pairs: Pairs = "all", seed: int = 0) -> CertificateReport:
        if self.kind == "phi-duality":
            return check_phi_duality(space, S, T, self.phi, pairs, seed)
        if self.kind == "weakly-contractive":
            if S != T:
                raise CertificateError(
                    "a weakly-contractive certificate concerns a single map (S = T)")
            return check_weakly_contractive(space, T, self.gap, pairs, seed)
        report = check_alpha_duality(space, S, T, self.alpha, pairs, seed)
        if self.kind == "constant-alpha":
            report.kind = "constant-alpha"
        return report
