"""Brute-force ground truth on finite spaces.

Nothing here goes through the solver or endpoint code: fixed points and
endpoints are enumerated by direct membership tests, and certificates are
re-verified with a vectorized all-pairs evaluation of ``H`` and ``M`` built
straight from the distance matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .contraction import REL_TOL, AlphaOracle, CertificateReport, ContractionSpec
from .maps import MultiMap
from .metric import DomainError, MetricSpace

__all__ = [
    "enumerate_fixed_points",
    "enumerate_endpoints",
    "pairwise_hausdorff_and_m",
    "verify_duality_exhaustive",
    "minimal_constant_alpha",
    "Instance",
    "GenerationFailure",
    "generate_certified_instance",
    "RETRY_BUDGET",
]

RETRY_BUDGET = 100_000
ALPHA_SWEEP = (0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99)


def enumerate_fixed_points(space: MetricSpace, T: MultiMap) -> tuple[int, ...]:
    return tuple(x for x in space.points() if x in T.images[x])


def enumerate_endpoints(space: MetricSpace, T: MultiMap) -> tuple[int, ...]:
    return tuple(x for x in space.points() if T.images[x] == (x,))


def _mask(T: MultiMap, n: int) -> np.ndarray:
    mask = np.zeros((n, n), dtype=bool)
    for x, img in enumerate(T.images):
        mask[x, list(img)] = True
    return mask


def pairwise_hausdorff_and_m(space: MetricSpace, S: MultiMap, T: MultiMap):
    """All-pairs arrays ``H[x, y] = H(Sx, Ty)`` and ``M[x, y]``."""
    n = space.n
    return _pairwise(space.matrix, _mask(S, n), _mask(T, n))


def _pairwise(D: np.ndarray, smask: np.ndarray, tmask: np.ndarray):
    # to_S[x, z] = d(z, Sx), to_T[y, z] = d(z, Ty)
    to_S = np.where(smask[:, :, None], D[None, :, :], np.inf).min(axis=1)
    to_T = np.where(tmask[:, :, None], D[None, :, :], np.inf).min(axis=1)
    s_into_t = np.where(smask[:, None, :], to_T[None, :, :], -np.inf).max(axis=2)
    t_into_s = np.where(tmask[None, :, :], to_S[:, None, :], -np.inf).max(axis=2)
    H = np.maximum(s_into_t, t_into_s)
    own_S = np.diag(to_S)[:, None]
    own_T = np.diag(to_T)[None, :]
    cross = (to_T.T + to_S) / 2
    M = np.maximum.reduce([D, np.broadcast_to(own_S, D.shape), np.broadcast_to(own_T, D.shape), cross])
    return H, M


def _snapped(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    margin = lhs - rhs
    scale = np.maximum.reduce([np.ones_like(lhs), np.abs(lhs), np.abs(rhs)])
    margin[(margin > 0) & (margin <= REL_TOL * scale)] = 0.0
    return margin


def verify_duality_exhaustive(space: MetricSpace, S: MultiMap, T: MultiMap,
                              spec: Union[ContractionSpec, AlphaOracle, float]) -> CertificateReport:
    """Check the certificate inequality on all ``n**2`` ordered pairs.

    ``spec`` may also be a bare :class:`AlphaOracle` or a constant factor.
    Out-of-range oracle values surface as :class:`CertificateError`.
    """
    if isinstance(spec, (int, float)):
        spec = ContractionSpec.constant(spec)
    elif isinstance(spec, AlphaOracle):
        spec = ContractionSpec("alpha-duality", alpha=spec)
    H, M = pairwise_hausdorff_and_m(space, S, T)
    n = space.n
    if spec.kind == "phi-duality":
        rhs = np.vectorize(spec.phi, otypes=[float])(M)
        lhs = H
    elif spec.kind == "weakly-contractive":
        if S != T:
            raise DomainError("weakly-contractive verification needs S = T")
        gap = np.array([[spec.gap(x, y) for y in range(n)] for x in range(n)])
        rhs = space.matrix - gap
        lhs = H
    else:
        alpha = np.array([[spec.alpha(x, y) for y in range(n)] for x in range(n)])
        rhs = alpha * M
        lhs = H
    margin = _snapped(lhs, rhs)
    flat = int(np.argmax(margin))
    x, y = divmod(flat, n)
    return CertificateReport(f"exhaustive {spec.kind}", n * n, (x, y), float(margin[x, y]))


def minimal_constant_alpha(space: MetricSpace, S: MultiMap, T: MultiMap) -> float:
    """Smallest constant ``c`` with ``H(Sx, Ty) <= c M(x, y)`` for all pairs (``inf`` if none)."""
    return _min_ratio(*pairwise_hausdorff_and_m(space, S, T))


def _min_ratio(H: np.ndarray, M: np.ndarray) -> float:
    if np.any((M == 0) & (H > 0)):
        return float("inf")
    pos = M > 0
    return float((H[pos] / M[pos]).max()) if pos.any() else 0.0


@dataclass
class Instance:
    space: MetricSpace
    S: MultiMap
    T: MultiMap
    alpha: float
    family: str
    attempts: int
    anchor: Optional[int] = None

    ok = True

    @property
    def spec(self) -> ContractionSpec:
        return ContractionSpec.constant(self.alpha)


@dataclass
class GenerationFailure:
    seed: int
    n: int
    family: str
    attempts: int

    ok = False


def _lattice_space(rng: np.random.Generator, n: int) -> MetricSpace:
    side = max(2, 2 * n)
    cells = rng.choice(side * side, size=n, replace=False)
    pts = np.stack([cells // side, cells % side], axis=1)
    D = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2).astype(float)
    return MetricSpace.from_matrix(D, validate=False)


def _random_subset(rng: np.random.Generator, pool: np.ndarray, kmax: int = 3) -> list[int]:
    k = int(rng.integers(1, min(kmax, pool.size) + 1))
    return [int(v) for v in rng.choice(pool, size=k, replace=False)]


def _random_masks(rng: np.random.Generator, n: int, kmax: int = 3) -> np.ndarray:
    """Boolean image masks for two maps: shape ``(2, n, n)``, each row nonempty."""
    sizes = rng.integers(1, min(kmax, n) + 1, size=(2, n, 1))
    order = rng.random((2, n, n)).argsort(axis=2).argsort(axis=2)
    return order < sizes


def _from_mask(space: MetricSpace, mask: np.ndarray, name: str) -> MultiMap:
    return MultiMap(space, [np.flatnonzero(row) for row in mask], name)


def generate_certified_instance(seed: int, n: int, family: str = "constructive",
                                budget: int = RETRY_BUDGET) -> Union[Instance, GenerationFailure]:
    """Draw a random finite instance carrying a passing exhaustive certificate.

    ``constructive``: integer lattice points under the L1 metric with an
    anchor ``p``; each image ``Sx``, ``Tx`` is a small random set inside the
    ball of radius ``a * d(x, p)`` about ``p`` for a drawn ``a`` in
    ``[0, 0.9]``. ``rejection``: fully random images, kept when some factor
    of a fixed sweep certifies them. Either way the constant factor returned
    is re-verified exhaustively before the instance is handed out.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if family not in ("constructive", "rejection"):
        raise DomainError(f"unknown generator family {family!r}")
    rng = np.random.default_rng(seed)
    for attempt in range(1, budget + 1):
        space = _lattice_space(rng, n)
        D = space.matrix
        anchor = None
        if family == "constructive":
            anchor = int(rng.integers(n))
            a0 = float(rng.uniform(0.0, 0.9))
            images = []
            for _ in range(2):
                img = []
                for x in range(n):
                    pool = np.flatnonzero(D[anchor] <= a0 * D[x, anchor])
                    img.append(_random_subset(rng, pool))
                images.append(img)
            S, T = MultiMap(space, images[0], "S"), MultiMap(space, images[1], "T")
            rho = minimal_constant_alpha(space, S, T)
            if not rho < 1:
                continue
            c = max(a0, rho)
        else:
            masks = _random_masks(rng, n)
            rho = _min_ratio(*_pairwise(D, masks[0], masks[1]))
            fits = [c for c in ALPHA_SWEEP if c >= rho]
            if not fits:
                continue
            c = fits[0]
            S, T = _from_mask(space, masks[0], "S"), _from_mask(space, masks[1], "T")
        if c >= 1 or not verify_duality_exhaustive(space, S, T, c).passed:
            continue
        return Instance(space, S, T, c, family, attempt, anchor)
    return GenerationFailure(seed, n, family, budget)
