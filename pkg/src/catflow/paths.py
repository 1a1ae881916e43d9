"""Path containers shared by every space: local geodesics, closed geodesics
and piecewise lifted paths."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence


@dataclass(frozen=True)
class LocalGeodesic:
    """Unit-speed local geodesic R -> space, evaluable at any real time."""

    space: object
    fn: Callable[[float], object]
    period: Optional[float] = None
    label: str = ""

    def __call__(self, t: float):
        return self.fn(t)

    def shifted(self, t0: float) -> "LocalGeodesic":
        if t0 == 0.0:
            return self
        base = self.fn
        return LocalGeodesic(self.space, lambda s, _b=base, _t=t0: _b(s + _t),
                             self.period, self.label)


@dataclass(frozen=True)
class ClosedGeodesic(LocalGeodesic):
    """Periodic local geodesic with a class representation.

    rep is a cyclically reduced word (rose), a winding integer (cylinder)
    or any other description of the free homotopy class; anchor records the
    point chosen as parameter 0 (the projection anchor where relevant).
    """

    rep: object = None
    anchor: object = None

    def __post_init__(self):
        if self.period is None or self.period <= 0:
            raise ValueError("closed geodesic needs a positive period")


@dataclass(frozen=True)
class PiecewisePath:
    """Unit-speed path built from geodesic pieces, for quasi-geodesic and
    stability certificates.

    breakpoints are the piece boundaries (increasing, spanning the domain);
    dist measures distances between evaluated points.
    """

    eval_at: Callable[[float], object]
    dist: Callable[[object, object], float]
    breakpoints: Sequence[float] = field(default_factory=tuple)

    @property
    def domain(self):
        return self.breakpoints[0], self.breakpoints[-1]

    def __call__(self, t: float):
        return self.eval_at(t)

    def grid(self, per_piece: int = 32):
        """Breakpoints plus an interior grid of per_piece points per piece."""
        pts = [float(self.breakpoints[0])]
        for a, b in zip(self.breakpoints[:-1], self.breakpoints[1:]):
            if b <= a:
                continue
            step = (b - a) / (per_piece + 1)
            pts.extend(a + step * k for k in range(1, per_piece + 1))
            pts.append(float(b))
        return pts
