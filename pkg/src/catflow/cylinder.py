"""Hyperbolic cylinder: quotient of the model plane by a hyperbolic
translation of length omega, in Fermi coordinates around the core.

A point is (s, h): arclength s along the core (mod omega) and signed
perpendicular distance h.  The core lifts to the imaginary axis; the point
(s, h) at curvature -1 lifts to e^{s} (tanh h + i sech h), with h > 0 on
the x > 0 side.  Distances come from the Fermi formula

    cosh d = cosh h1 cosh h2 cosh ds - sinh h1 sinh h2

minimized over deck translates ds = s2 - s1 + k omega.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .halfplane import (
    HPoint,
    Mobius,
    PlaneGeodesic,
    _check_chi,
    geodesic_from_direction,
    geodesic_through,
    hp_distance,
)
from .paths import ClosedGeodesic, LocalGeodesic


@dataclass(frozen=True)
class FermiPoint:
    s: float
    h: float


@dataclass(frozen=True)
class CylinderConfig:
    """Cylinder with core period omega at curvature chi < 0."""

    omega: float
    chi: float = -1.0

    def __post_init__(self):
        _check_chi(self.chi)
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ValueError(f"core period must be positive, got {self.omega}")

    @property
    def su(self) -> float:
        return math.sqrt(-self.chi)

    def canon(self, s: float) -> float:
        return s % self.omega

    def point(self, s: float, h: float) -> FermiPoint:
        return FermiPoint(self.canon(s), h)

    # -- distance -------------------------------------------------------------

    def _dist_lift(self, h1: float, h2: float, ds: float) -> float:
        su = self.su
        c = (math.cosh(h1 * su) * math.cosh(h2 * su) * math.cosh(ds * su)
             - math.sinh(h1 * su) * math.sinh(h2 * su))
        return math.acosh(max(c, 1.0)) / su

    def distance(self, p: FermiPoint, q: FermiPoint) -> float:
        """Min over deck translates; the window grows until the axis offset
        alone exceeds the best candidate (projection to the core is
        1-Lipschitz, so d >= |ds|)."""
        ds0 = (q.s - p.s + self.omega / 2.0) % self.omega - self.omega / 2.0
        best = self._dist_lift(p.h, q.h, ds0)
        k = 1
        while k * self.omega - self.omega / 2.0 < best:
            for ds in (ds0 + k * self.omega, ds0 - k * self.omega):
                if abs(ds) < best:
                    best = min(best, self._dist_lift(p.h, q.h, ds))
            k += 1
        return best

    def distance_arrays(self, s1, h1, s2, h2, window: int = 2):
        """Vectorized distance over a fixed deck window (valid when the
        points are within window*omega of each other along the core)."""
        su = self.su
        ds0 = (np.asarray(s2) - np.asarray(s1) + self.omega / 2.0) % self.omega \
            - self.omega / 2.0
        ch = np.cosh(np.asarray(h1) * su) * np.cosh(np.asarray(h2) * su)
        sh = np.sinh(np.asarray(h1) * su) * np.sinh(np.asarray(h2) * su)
        best = None
        for k in range(-window, window + 1):
            c = ch * np.cosh((ds0 + k * self.omega) * su) - sh
            d = np.arccosh(np.maximum(c, 1.0)) / su
            best = d if best is None else np.minimum(best, d)
        return best

    def core_arc(self, s1: float, s2: float) -> float:
        """Distance between two core points (arc along the core)."""
        ds = abs(self.canon(s2) - self.canon(s1))
        return min(ds, self.omega - ds)

    # -- lifting --------------------------------------------------------------

    def lift(self, p: FermiPoint, k: int = 0) -> HPoint:
        su = self.su
        s = (self.canon(p.s) + k * self.omega) * su
        h = p.h * su
        r = math.exp(s)
        return HPoint(r * math.tanh(h), r / math.cosh(h))

    def unlift(self, z: HPoint) -> FermiPoint:
        su = self.su
        r = abs(z.z)
        s = math.log(r) / su
        h = math.atanh(z.x / r) / su
        return FermiPoint(self.canon(s), h)

    def deck(self) -> Mobius:
        return Mobius.scaling(self.omega * self.su)

    def best_lift_offset(self, p: FermiPoint, q: FermiPoint) -> int:
        """Deck index k so that lift(p, 0) and lift(q, k) realize the
        cylinder distance in the plane."""
        d = self.distance(p, q)
        ds0 = self.canon(q.s) - self.canon(p.s)
        best_k, best_err = 0, float("inf")
        kmax = int(abs(d) / self.omega) + 2
        for k in range(-kmax, kmax + 1):
            err = abs(self._dist_lift(p.h, q.h, ds0 + k * self.omega) - d)
            if err < best_err:
                best_k, best_err = k, err
        return best_k

    # -- geodesics ------------------------------------------------------------

    def geodesic(self, start: FermiPoint, angle: float) -> LocalGeodesic:
        """Unit-speed geodesic from start; angle 0 runs along increasing s,
        angle pi/2 along increasing h.  Evaluated by lifting once and
        projecting back (exact, no integration drift)."""
        z0 = self.lift(start)
        zc = z0.z
        radial = zc / abs(zc)
        direction = math.cos(angle) * radial + math.sin(angle) * (-1j * radial)
        g = geodesic_from_direction(z0, direction, self.chi)
        return LocalGeodesic(self, lambda t: self.unlift(g(t)),
                             label=f"cyl geodesic angle={angle:.3g}")

    def core(self) -> ClosedGeodesic:
        return ClosedGeodesic(self, lambda t: FermiPoint(self.canon(t), 0.0),
                              period=self.omega, label="core", rep=1,
                              anchor=FermiPoint(0.0, 0.0))

    def core_power(self, k: int) -> ClosedGeodesic:
        if k == 0:
            raise ValueError("trivial class has no closed geodesic")
        sgn = 1.0 if k > 0 else -1.0
        return ClosedGeodesic(self, lambda t: FermiPoint(self.canon(sgn * t), 0.0),
                              period=abs(k) * self.omega, label=f"core^{k}",
                              rep=k, anchor=FermiPoint(0.0, 0.0))

    # -- local structure -------------------------------------------------------

    def loop_length(self, h: float) -> float:
        """Length of the shortest essential loop through a point at height h."""
        su = self.su
        c = (math.cosh(h * su) ** 2 * math.cosh(self.omega * su)
             - math.sinh(h * su) ** 2)
        return math.acosh(max(c, 1.0)) / su

    def injectivity_radius(self, p: FermiPoint) -> float:
        return 0.5 * self.loop_length(p.h)

    @property
    def systole(self) -> float:
        return self.omega

    def segment(self, p: FermiPoint, q: FermiPoint):
        """(length, eval) for a minimizing segment, via minimizing lifts.

        Intended for pairs closer than the injectivity radius, where the
        minimizing geodesic is unique and lifts isometrically.
        """
        if p.s == q.s and p.h == q.h:
            return 0.0, lambda t: p
        zp = self.lift(p)
        zq = self.lift(q, self.best_lift_offset(p, q))
        length = hp_distance(zp, zq, self.chi)
        g = geodesic_through(zp, zq, self.chi)
        return length, lambda t: self.unlift(g(t))
