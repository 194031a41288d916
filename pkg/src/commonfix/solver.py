"""Alternating selection iteration for common fixed points, plus rate bounds.

The iteration starts at ``x0`` and alternates the two maps: odd steps pick
``x_{2k+1}`` from ``S x_{2k}``, even steps pick ``x_{2k}`` from
``T x_{2k-1}``. Each selection is within a slack ``eps_n`` of the nearest
image point, where ``eps_n = min(2**-n, (1 - alpha_n) * d(x_{n-1}, x_n))``.
On finite sets the nearest point is attained, so the default ``argmin``
selection satisfies every such slack.

Along a certified run the step gaps decrease strictly and obey
``gap_n <= gamma * gap_{n-1} + 2**-n`` with ``gamma`` the largest sampled
factor; :func:`cauchy_bound` turns that recurrence into an a-priori bound on
``d(x_n, x_{n+m})``.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence, TextIO, Union

import numpy as np

from .contraction import AlphaOracle, CertificateError, m_functional, snap_margin
from .maps import MultiMap
from .metric import DomainError, MetricSpace, distance, hausdorff, point_set_distance

__all__ = [
    "SolverConfig",
    "IterationTrace",
    "LimitReport",
    "RateBound",
    "epsilon_schedule",
    "select_next",
    "iterate_duality",
    "verify_limit_fixed",
    "check_recurrence",
    "cauchy_bound",
    "rate_bound",
    "regime",
    "TRACE_COLUMNS",
]

TRACE_COLUMNS = ("step", "point", "gap", "epsilon", "alpha", "residual_S", "residual_T")
MODES = ("argmin", "epsilon-slack")


@dataclass
class SolverConfig:
    selection_mode: str = "argmin"
    max_iterations: int = 1000
    residual_tolerance: float = 1e-9
    seed: int = 0
    # assert the contraction inequality for every consecutive pair visited
    check_certificate: bool = True
    # consecutive non-decreasing steps tolerated before declaring a stall
    stall_window: int = 3

    def __post_init__(self):
        if self.selection_mode not in MODES:
            raise DomainError(f"selection mode must be one of {MODES}, got {self.selection_mode!r}")
        if self.max_iterations < 1:
            raise DomainError("max_iterations must be >= 1")
        if not self.residual_tolerance > 0:
            raise DomainError("residual_tolerance must be positive")


@dataclass
class IterationTrace:
    """Everything recorded along one run.

    ``points[n]`` is ``x_n``. Per-step lists are indexed by step ``n >= 1``
    at position ``n - 1`` (``step_gaps``, ``alphas``), while ``epsilons[n]``
    is the slack used to choose ``x_{n+1}`` and ``residuals[n]`` holds
    ``(d(x_n, S x_n), d(x_n, T x_n))``.
    """

    points: list = field(default_factory=list)
    step_gaps: list = field(default_factory=list)
    epsilons: list = field(default_factory=list)
    alphas: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    terminated: str = "max_iter"

    @property
    def steps(self) -> int:
        return len(self.step_gaps)

    @property
    def final_point(self) -> int:
        return self.points[-1]

    @property
    def converged(self) -> bool:
        return self.terminated == "converged"

    def strictly_decreasing(self) -> bool:
        """Gaps decrease strictly until (and excluding) the first zero gap."""
        gaps = self.step_gaps
        for prev, cur in zip(gaps, gaps[1:]):
            if prev == 0:
                return True
            if not cur < prev:
                return False
        return True

    def rows(self, space: Optional[MetricSpace] = None) -> list[dict]:
        out = []
        for n, x in enumerate(self.points):
            rs, rt = self.residuals[n]
            out.append({
                "step": n,
                "point": space.label(x) if space is not None else x,
                "gap": "" if n == 0 else repr(float(self.step_gaps[n - 1])),
                "epsilon": repr(float(self.epsilons[n])) if n < len(self.epsilons) else "",
                "alpha": "" if n == 0 else repr(float(self.alphas[n - 1])),
                "residual_S": repr(float(rs)),
                "residual_T": repr(float(rt)),
            })
        return out

    def to_csv(self, dest: Union[str, os.PathLike, TextIO, None] = None,
               space: Optional[MetricSpace] = None) -> str:
        """Write the trace as CSV (header included); return the text."""
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=TRACE_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.rows(space))
        text = buf.getvalue()
        if dest is None:
            return text
        if hasattr(dest, "write"):
            dest.write(text)
        else:
            with open(dest, "w", newline="") as fh:
                fh.write(text)
        return text


def epsilon_schedule(n: int, alpha_val: float, gap: float) -> float:
    """Selection slack ``min(2**-n, (1 - alpha_val) * gap)`` for step ``n >= 1``."""
    if n < 1:
        raise DomainError(f"step index must be >= 1, got {n}")
    if not alpha_val < 1:
        raise DomainError(f"alpha must be < 1, got {alpha_val}")
    return min(0.5 ** n, (1.0 - alpha_val) * gap)


def select_next(space: MetricSpace, x: int, A: Sequence[int], mode: str = "argmin",
                epsilon: float = 0.0, rng: Optional[np.random.Generator] = None) -> int:
    """Choose the next iterate from the image set ``A``.

    ``argmin`` returns the nearest member, ties going to the lowest index.
    ``epsilon-slack`` draws uniformly among members ``a`` with
    ``d(x, a) < d(x, A) + epsilon`` (the nearest members when ``epsilon`` is 0).
    """
    if len(A) == 0:
        raise DomainError("cannot select from an empty set")
    members = np.asarray(A, dtype=np.intp)
    d = space.matrix[space.check_point(x), members]
    if mode == "argmin":
        return int(members[np.argmin(d)])
    if mode != "epsilon-slack":
        raise DomainError(f"unknown selection mode {mode!r}")
    if epsilon < 0:
        raise DomainError(f"epsilon must be >= 0, got {epsilon}")
    dmin = d.min()
    ok = d < dmin + epsilon if epsilon > 0 else d == dmin
    rng = np.random.default_rng() if rng is None else rng
    return int(rng.choice(members[ok]))


def _residuals(space, S, T, x):
    return point_set_distance(space, x, S(x)), point_set_distance(space, x, T(x))


def iterate_duality(space: MetricSpace, S: MultiMap, T: MultiMap, alpha: AlphaOracle,
                    x0: int, config: Optional[SolverConfig] = None) -> IterationTrace:
    """Run the alternating selection from ``x0``.

    Terminates ``"converged"`` once the current point lies in both images (or
    both residuals are within tolerance), ``"stalled"`` after
    ``config.stall_window`` consecutive non-decreasing gaps, otherwise
    ``"max_iter"``.

    Raises:
        CertificateError: with ``config.check_certificate``, when a visited
            pair violates ``H(Sx, Ty) <= alpha(x, y) M(x, y)`` (``x`` being the
            even-indexed point of the pair), or when ``alpha`` leaves [0, 1).
    """
    config = config or SolverConfig()
    rng = np.random.default_rng(config.seed)
    tol = config.residual_tolerance
    x = space.check_point(x0)
    trace = IterationTrace(points=[x], epsilons=[1.0], residuals=[_residuals(space, S, T, x)])

    def converged(pt, res):
        return (pt in S(pt) and pt in T(pt)) or max(res) <= tol

    nondecreasing = 0
    for n in range(1, config.max_iterations + 1):
        if converged(x, trace.residuals[-1]):
            trace.terminated = "converged"
            return trace
        mapping = S if n % 2 == 1 else T
        nxt = select_next(space, x, mapping(x), config.selection_mode, trace.epsilons[-1], rng)
        # the S-argument of the pair is always the even-indexed point
        even, odd = (x, nxt) if n % 2 == 1 else (nxt, x)
        a = alpha(even, odd)
        if config.check_certificate:
            lhs = hausdorff(space, S(even), T(odd))
            rhs = a * m_functional(space, S, T, even, odd)
            if snap_margin(lhs, rhs) > 0:
                raise CertificateError(
                    f"step {n}: H(S{space.label(even)}, T{space.label(odd)}) = {lhs:.6g} exceeds "
                    f"alpha*M = {rhs:.6g}", pair=(even, odd))
        gap = distance(space, x, nxt)
        if trace.step_gaps and gap >= trace.step_gaps[-1]:
            nondecreasing += 1
        else:
            nondecreasing = 0
        trace.points.append(nxt)
        trace.step_gaps.append(gap)
        trace.alphas.append(a)
        trace.epsilons.append(epsilon_schedule(n, a, gap))
        trace.residuals.append(_residuals(space, S, T, nxt))
        x = nxt
        if nondecreasing >= config.stall_window:
            trace.terminated = "stalled"
            return trace
    trace.terminated = "converged" if converged(x, trace.residuals[-1]) else "max_iter"
    return trace


@dataclass
class LimitReport:
    """Whether the end point of a trace is a common fixed point.

    ``tail_alpha_max`` witnesses the hypothesis ``limsup alpha(x_2k, x*) < 1``
    over the even-indexed points of the trace.
    """

    point: int
    residual_S: float
    residual_T: float
    fixed: bool
    tail_alpha_max: float
    hypothesis_ok: bool
    note: str = ""

    @property
    def holds(self) -> bool:
        return self.fixed and self.hypothesis_ok

    def __bool__(self) -> bool:
        return self.holds


def verify_limit_fixed(space: MetricSpace, S: MultiMap, T: MultiMap, alpha: AlphaOracle,
                       trace: IterationTrace, tol: float = 1e-9) -> LimitReport:
    """Check that the trace's last point is fixed for both maps."""
    x = trace.final_point
    rs, rt = _residuals(space, S, T, x)
    fixed = rs <= tol and rt <= tol
    note = ""
    try:
        tail = [alpha(trace.points[k], x) for k in range(0, len(trace.points), 2)]
        tail_max = max(tail)
        ok = tail_max < 1
    except CertificateError as exc:
        tail_max, ok, note = math.nan, False, str(exc)
    return LimitReport(x, rs, rt, fixed, tail_max, ok, note)


def check_recurrence(step_gaps: Sequence[float], gamma: float) -> bool:
    """True iff ``gap_n <= gamma * gap_{n-1} + 2**-n`` for every ``n >= 1``.

    ``step_gaps[n]`` is ``d(x_n, x_{n+1})``.
    """
    if not 0 <= gamma < 1:
        raise DomainError(f"gamma must lie in [0, 1), got {gamma}")
    for n in range(1, len(step_gaps)):
        if snap_margin(step_gaps[n], gamma * step_gaps[n - 1] + 0.5 ** n) > 0:
            return False
    return True


def regime(gamma: float) -> str:
    if not 0 <= gamma < 1:
        raise DomainError(f"gamma must lie in [0, 1), got {gamma}")
    if 2 * gamma > 1:
        return "two-gamma-gt-1"
    if 2 * gamma < 1:
        return "two-gamma-lt-1"
    return "two-gamma-eq-1"


def _finite_sum_bound(gamma: float, n: int, m: int) -> float:
    head = sum(gamma ** (n - i) * 0.5 ** i for i in range(n + 1))
    tail = sum(0.5 ** i for i in range(n + 1, n + m))
    return (head + tail) / (1.0 - gamma)


def cauchy_bound(gamma: float, n: int, m: int = 1) -> float:
    """Upper bound on ``d(x_n, x_{n+m})`` for sequences obeying the gap recurrence.

    Valid when ``d(x_0, x_1) <= 1``; scale by ``max(d(x_0, x_1), 1)`` otherwise.

    * ``2 gamma > 1``: ``4 gamma**(n+1) / ((2 gamma - 1)(1 - gamma))``
    * ``2 gamma < 1``: ``1 / ((1 - gamma)(1 - 2 gamma) 2**(n-1))``
    * ``2 gamma = 1``: the finite sum
      ``(sum_{i<=n} gamma**(n-i) / 2**i + sum_{n<i<n+m} 2**-i) / (1 - gamma)``,
      the only case that depends on ``m``.
    """
    kind = regime(gamma)
    if n < 1 or m < 1:
        raise DomainError(f"n and m must be >= 1, got n={n}, m={m}")
    if kind == "two-gamma-gt-1":
        return 4 * gamma ** (n + 1) / ((2 * gamma - 1) * (1 - gamma))
    if kind == "two-gamma-lt-1":
        return 1.0 / ((1 - gamma) * (1 - 2 * gamma) * 2 ** (n - 1))
    return _finite_sum_bound(gamma, n, m)


@dataclass(frozen=True)
class RateBound:
    gamma: float
    regime: str
    n: int
    m: int
    value: float


def rate_bound(gamma: float, n: int, m: int = 1) -> RateBound:
    return RateBound(gamma, regime(gamma), n, m, cauchy_bound(gamma, n, m))
