"""Multi-valued maps on finite spaces and a few parametric families."""

from __future__ import annotations

import math
from typing import Callable, Iterable, Optional, Sequence

from .metric import DomainError, MetricSpace, PointSet

__all__ = ["MultiMap", "identity", "halving", "shift", "affine"]


class MultiMap:
    """Assignment of a nonempty finite image set to every point of a space.

    Args:
        space: The space the map acts on.
        images: One iterable of point indices per point of ``space``.
        name: Optional description used in reports.
    """

    def __init__(self, space: MetricSpace, images: Sequence[Iterable[int]],
                 name: Optional[str] = None):
        if len(images) != space.n:
            raise DomainError(f"map needs {space.n} images, got {len(images)}")
        resolved = []
        for x, image in enumerate(images):
            try:
                ps = PointSet(image)
            except DomainError as exc:
                raise DomainError(f"image of point {space.label(x)}: {exc}") from None
            for y in ps:
                if not 0 <= y < space.n:
                    raise DomainError(
                        f"image of point {space.label(x)} contains {y}, outside the universe")
            resolved.append(ps)
        self.space = space
        self.images = tuple(resolved)
        self.name = name

    @classmethod
    def from_function(cls, space: MetricSpace, func: Callable[[int], Iterable[int]],
                      name: Optional[str] = None) -> "MultiMap":
        return cls(space, [func(x) for x in space.points()], name=name)

    def __call__(self, x: int) -> PointSet:
        return self.images[self.space.check_point(x)]

    @property
    def single_valued(self) -> bool:
        return all(len(img) == 1 for img in self.images)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiMap):
            return NotImplemented
        return self.space == other.space and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self) -> str:
        body = ", ".join(
            f"{self.space.label(x)}->{{{' '.join(self.space.label(y) for y in img)}}}"
            for x, img in enumerate(self.images))
        return f"MultiMap({body})"


def identity(space: MetricSpace) -> MultiMap:
    return MultiMap.from_function(space, lambda x: (x,), name="identity")


def _numeric_values(space: MetricSpace) -> list[float]:
    if space.mode == "grid":
        return [space.coord(x) for x in space.points()]
    try:
        return [float(lab) for lab in space.labels]
    except ValueError:
        raise DomainError("this map family needs numeric point labels") from None


def halving(space: MetricSpace, divisor: float = 2.0) -> MultiMap:
    """``x -> {x / divisor}`` rounded down onto the space.

    On a grid the quotient is floored to the grid; on a labelled matrix space
    the floored quotient must itself be one of the labels.
    """
    if not divisor >= 1:
        raise DomainError(f"divisor must be >= 1, got {divisor}")
    values = _numeric_values(space)
    if space.mode == "grid":
        origin, step, count = space.grid_spec

        def image(x):
            pos = (values[x] / divisor - origin) / step
            i = math.floor(pos + 1e-9)
            if not 0 <= i < count:
                raise DomainError(f"halving image of {space.label(x)} falls off the grid")
            return (i,)
    else:
        index = {v: i for i, v in enumerate(values)}

        def image(x):
            target = float(math.floor(values[x] / divisor))
            if target not in index:
                raise DomainError(
                    f"halving image {target:g} of {space.label(x)} is not a point of the space")
            return (index[target],)

    return MultiMap.from_function(space, image, name=f"halving(divisor={divisor:g})")


def shift(space: MetricSpace, offset: int = 1) -> MultiMap:
    """Cyclic shift ``x_i -> {x_(i + offset) mod n}``."""
    n = space.n
    return MultiMap.from_function(space, lambda x: ((x + offset) % n,),
                                  name=f"shift(offset={offset})")


def affine(space: MetricSpace, target: float, factor: float, width: int = 0) -> MultiMap:
    """Contraction toward ``target``: ``x -> p + factor * (x - p)`` on a grid.

    The image is the nearest grid point, widened by ``width`` grid neighbours
    on each side (clipped to the grid).
    """
    if space.mode != "grid":
        raise DomainError("affine family is only defined on grid spaces")
    if not 0 <= factor < 1:
        raise DomainError(f"factor must lie in [0, 1), got {factor}")
    if width < 0:
        raise DomainError(f"width must be >= 0, got {width}")
    origin, step, count = space.grid_spec

    def image(x):
        y = target + factor * (space.coord(x) - target)
        centre = min(max(round((y - origin) / step), 0), count - 1)
        return range(max(centre - width, 0), min(centre + width, count - 1) + 1)

    return MultiMap.from_function(
        space, image, name=f"affine(target={target:g}, factor={factor:g}, width={width})")
