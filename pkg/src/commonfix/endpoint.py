"""Endpoint gaps, the approximate endpoint property and common endpoints.

An endpoint of ``T`` is a point with ``Tx = {x}``. For a certified duality
``(S, T)`` a common endpoint exists exactly when the combined gap
``H({x}, Sx) + H({x}, Tx)`` has infimum zero, and it is then unique.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .contraction import CertificateError, ContractionSpec, check_gauge_conditions, m_functional, snap_margin
from .maps import MultiMap
from .metric import MetricSpace, distance

__all__ = [
    "EndpointScan",
    "EndpointResult",
    "endpoint_gap",
    "combined_gap",
    "approximate_endpoint_scan",
    "find_common_endpoint",
    "default_tolerance",
]


def endpoint_gap(space: MetricSpace, T: MultiMap, x: int) -> float:
    """``sup_{y in Tx} d(x, y)``, i.e. ``H({x}, Tx)``; zero iff ``Tx = {x}``."""
    return float(space.matrix[space.check_point(x), list(T(x))].max())


def combined_gap(space: MetricSpace, S: MultiMap, T: MultiMap, x: int) -> float:
    return endpoint_gap(space, S, x) + endpoint_gap(space, T, x)


@dataclass
class EndpointScan:
    inf_gap: float
    argmin: int
    profile: np.ndarray

    def __iter__(self):
        return iter((self.inf_gap, self.argmin, self.profile))


def approximate_endpoint_scan(space: MetricSpace, S: MultiMap, T: MultiMap) -> EndpointScan:
    """Minimum of the combined gap over the whole universe, with the full profile."""
    profile = np.array([combined_gap(space, S, T, x) for x in space.points()])
    i = int(np.argmin(profile))
    return EndpointScan(float(profile[i]), i, profile)


def default_tolerance(space: MetricSpace) -> float:
    """Exact zero on matrix spaces, ``1e-9`` on grids."""
    return 0.0 if space.exact else 1e-9


@dataclass
class EndpointResult:
    endpoint: Optional[int]
    minimizing_sequence: list
    gaps: list
    final_gap: float
    certificate_kind: str
    unique: bool = True
    # finite surrogate for the asymptotic hypothesis of the certificate kind
    tail_condition: dict = field(default_factory=dict)

    @property
    def found(self) -> bool:
        return self.endpoint is not None

    def render(self, space: Optional[MetricSpace] = None) -> str:
        if self.endpoint is None:
            return (f"no endpoint (approximate endpoint property fails: "
                    f"inf gap = {self.final_gap:.6g})")
        label = space.label(self.endpoint) if space is not None else self.endpoint
        lines = [f"endpoint {label} (combined gap {self.final_gap:.6g}, "
                 f"{'unique' if self.unique else 'NOT unique'})"]
        for name, value in self.tail_condition.items():
            lines.append(f"  {name}: {value}")
        return "\n".join(lines)


def find_common_endpoint(space: MetricSpace, S: MultiMap, T: MultiMap, spec: ContractionSpec,
                         tol: Optional[float] = None) -> EndpointResult:
    """Locate the common endpoint of a certified duality, if any.

    Points are ordered by combined gap to form a gap-minimizing sequence.
    For every consecutive pair ``(u, v)`` of that sequence the bound
    ``M(u, v) <= r(u, v) + 2 H({u}, Su) + 2 H({v}, Tv)`` is checked, where
    ``r`` is ``alpha(u, v) M(u, v)`` or ``phi(M(u, v))`` by certificate kind.
    It follows from the certificate, so a violation raises
    :class:`CertificateError`, as does a second endpoint candidate.
    """
    tol = default_tolerance(space) if tol is None else tol
    gaps_S = np.array([endpoint_gap(space, S, x) for x in space.points()])
    gaps_T = np.array([endpoint_gap(space, T, x) for x in space.points()])
    combined = gaps_S + gaps_T
    order = [int(i) for i in np.argsort(combined, kind="stable")]
    alpha = None if spec.uses_gauge else spec.alpha_oracle(space, S, T)

    def reduced(u, v, m):
        if alpha is not None:
            return alpha(u, v) * m
        return spec.phi(m)

    for u, v in zip(order, order[1:]):
        m = m_functional(space, S, T, u, v)
        rhs = reduced(u, v, m) + 2 * gaps_S[u] + 2 * gaps_T[v]
        if snap_margin(m, rhs) > 0:
            raise CertificateError(
                f"endpoint chain broken at ({space.label(u)}, {space.label(v)}): "
                f"M = {m:.6g} > {rhs:.6g}", pair=(u, v))

    best = order[0]
    final_gap = float(combined[best])
    seq = order
    seq_gaps = [float(combined[i]) for i in order]
    kind = "phi" if spec.uses_gauge else "alpha"
    if final_gap > tol:
        return EndpointResult(None, seq, seq_gaps, final_gap, kind)

    rivals = [x for x in order[1:] if combined[x] <= tol and distance(space, x, best) > tol]
    if rivals:
        raise CertificateError(
            f"two endpoint candidates {space.label(best)} and {space.label(rivals[0])}; "
            "a certified duality has at most one", pair=(best, rivals[0]))

    if alpha is not None:
        tail = [x for x in order if combined[x] <= 10 * tol]
        worst = max(alpha(u, v) for u in tail for v in tail)
        condition = {"tail max alpha (sampled)": f"{worst:.6g} -> {'pass' if worst < 1 else 'fail'}"}
    else:
        report = check_gauge_conditions(spec.phi)
        condition = {"liminf t - phi(t) (sampled)":
                     f"{report.large_t_gap:.6g} -> {'pass' if report.large_t_ok else 'fail'}"}
    return EndpointResult(best, seq, seq_gaps, final_gap, kind, unique=True,
                          tail_condition=condition)
