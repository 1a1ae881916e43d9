"""Two hyperbolic cylinders glued along a convex Fermi strip.

The strip is {(s, h): 0 <= s <= D, |h| <= w} in the Fermi coordinates of
either core, identified across the pieces by matching coordinates; the two
core segments over s in [0, D] coincide (D = omega1/2 = omega2/4, forced).
It is convex: it is the intersection of a Fermi collar, whose boundary
equidistants bound convex sides, with two half-planes bounded by the
perpendicular geodesics s = 0 and s = D.

gamma runs along core 2 from the infinite past, takes the core-1 loop once
between t = 0 and t = omega1, and follows core 2 forever after:

    gamma(t) = c1(t)            for t in [0, omega1]
    gamma(t) = c2(t)            for t <= 0
    gamma(t) = c2(t - omega1)   for t >= omega1

(the last line keeps gamma continuous; both cores pass point B = (0, 0)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cylinder import CylinderConfig, FermiPoint
from .paths import ClosedGeodesic, LocalGeodesic


@dataclass(frozen=True)
class GluedPoint:
    piece: int
    coords: FermiPoint


@dataclass(frozen=True)
class GluedConfig:
    omega1: float = 2.0
    omega2: float = 4.0
    width: float = None
    chi: float = -1.0

    def __post_init__(self):
        if abs(self.omega2 - 2.0 * self.omega1) > 1e-9:
            raise ValueError(
                "need omega2 = 2*omega1 so the core segments of length "
                "omega1/2 = omega2/4 can coincide in the strip")
        if self.width is None:
            object.__setattr__(self, "width", self.strip_length / 4.0)
        if not (0 < self.width <= self.strip_length):
            raise ValueError(f"strip width {self.width} out of range")

    @property
    def strip_length(self) -> float:
        """D = d(A, B), the length of the shared core segment."""
        return self.omega1 / 2.0

    @property
    def cyl1(self) -> CylinderConfig:
        return CylinderConfig(self.omega1, self.chi)

    @property
    def cyl2(self) -> CylinderConfig:
        return CylinderConfig(self.omega2, self.chi)

    def cyl(self, piece: int) -> CylinderConfig:
        return self.cyl1 if piece == 1 else self.cyl2

    # -- points ----------------------------------------------------------------

    def in_strip(self, f: FermiPoint) -> bool:
        return 0.0 <= f.s <= self.strip_length and abs(f.h) <= self.width

    def point(self, piece: int, s: float, h: float = 0.0) -> GluedPoint:
        if piece not in (1, 2):
            raise ValueError("piece must be 1 or 2")
        f = self.cyl(piece).point(s, h)
        if piece == 2 and self.in_strip(f):
            piece = 1
        return GluedPoint(piece, f)

    def reps(self, p: GluedPoint):
        """All (piece, coords) representations of p."""
        if self.in_strip(p.coords):
            return ((1, p.coords), (2, p.coords))
        return ((p.piece, p.coords),)

    # -- distance ---------------------------------------------------------------

    def distance(self, p: GluedPoint, q: GluedPoint) -> float:
        """Same piece: intrinsic cylinder distance (a detour through the
        other piece crosses the convex strip twice and can be shortcut
        inside it).  Different pieces: min over strip transit points of
        d1(p, z) + d2(z, q)."""
        best = math.inf
        preps, qreps = self.reps(p), self.reps(q)
        for pi, pf in preps:
            for qi, qf in qreps:
                if pi == qi:
                    best = min(best, self.cyl(pi).distance(pf, qf))
        if best < math.inf:
            return best
        if p.coords.h == 0.0 and q.coords.h == 0.0:
            if p.piece == 1:
                return self.cross_core_distance(p.coords.s, q.coords.s)
            return self.cross_core_distance(q.coords.s, p.coords.s)
        pf, qf = (p, q) if p.piece == 1 else (q, p)
        return self.cross_distance(pf.coords, qf.coords)

    def _arc(self, omega: float, s: float, z: float) -> float:
        d = (s - z) % omega
        return min(d, omega - d)

    def cross_core_distance(self, s1: float, s2: float) -> float:
        """Exact distance between core points (1, s1, 0) and (2, s2, 0):
        the transit objective arc1(s1, z) + arc2(s2, z) is piecewise linear
        in z, so the minimum sits at an interval end or an arc kink."""
        D = self.strip_length
        w1, w2 = self.omega1, self.omega2
        cands = [0.0, D, s1 % w1, (s1 + w1 / 2.0) % w1,
                 s2 % w2, (s2 + w2 / 2.0) % w2]
        best = math.inf
        for z in cands:
            if 0.0 <= z <= D:
                best = min(best, self._arc(w1, s1, z) + self._arc(w2, s2, z))
        return best

    def cross_core_distance_arrays(self, s1, s2):
        """Vectorized cross_core_distance."""
        D = self.strip_length
        w1, w2 = self.omega1, self.omega2
        s1 = np.asarray(s1, dtype=float)
        s2 = np.asarray(s2, dtype=float)
        z = np.stack([np.zeros_like(s1), np.full_like(s1, D),
                      s1 % w1, (s1 + w1 / 2.0) % w1,
                      s2 % w2, (s2 + w2 / 2.0) % w2])
        d1 = np.abs(np.mod(s1[None] - z + w1 / 2.0, w1) - w1 / 2.0)
        d2 = np.abs(np.mod(s2[None] - z + w2 / 2.0, w2) - w2 / 2.0)
        phi = np.where((z >= 0.0) & (z <= D), d1 + d2, np.inf)
        return phi.min(axis=0)

    def cross_distance(self, f1: FermiPoint, f2: FermiPoint,
                       tol: float = 1e-6) -> float:
        """General strip-transit minimum for f1 in piece 1, f2 in piece 2:
        coarse 64x16 grid over the strip, then nested zoom refinement."""
        D, w = self.strip_length, self.width
        c1, c2 = self.cyl1, self.cyl2

        def objective(zs, zh):
            return (c1.distance_arrays(f1.s, f1.h, zs, zh, window=4)
                    + c2.distance_arrays(f2.s, f2.h, zs, zh, window=4))

        zs, zh = np.meshgrid(np.linspace(0.0, D, 64), np.linspace(-w, w, 16))
        vals = objective(zs, zh)
        k = int(np.argmin(vals))
        bs, bh = float(zs.ravel()[k]), float(zh.ravel()[k])
        hs, hh = D / 63.0, (2.0 * w) / 15.0
        while max(hs, hh) > tol / 4.0:
            ls = np.clip(np.linspace(bs - hs, bs + hs, 9), 0.0, D)
            lh = np.clip(np.linspace(bh - hh, bh + hh, 9), -w, w)
            zs, zh = np.meshgrid(ls, lh)
            vals = objective(zs, zh)
            k = int(np.argmin(vals))
            bs, bh = float(zs.ravel()[k]), float(zh.ravel()[k])
            hs, hh = hs / 4.0, hh / 4.0
        return float(vals.ravel()[k])

    def distance_to_strip(self, piece: int, f: FermiPoint) -> float:
        """Distance from a point to the strip inside its own cylinder
        (lower-bound ingredient for cross-piece distances)."""
        if self.in_strip(f):
            return 0.0
        D, w = self.strip_length, self.width
        c = self.cyl(piece)
        zs, zh = np.meshgrid(np.linspace(0.0, D, 128), np.linspace(-w, w, 32))
        vals = c.distance_arrays(f.s, f.h, zs, zh, window=4)
        return float(vals.min())

    def cross_lower_bound(self, p: GluedPoint, q: GluedPoint) -> float:
        return (self.distance_to_strip(p.piece, p.coords)
                + self.distance_to_strip(q.piece, q.coords))

    # -- gamma and the cores -----------------------------------------------------

    def gamma_piece_coord(self, t: float):
        """(piece, core coordinate) of gamma(t)."""
        if 0.0 <= t <= self.omega1:
            return 1, t
        if t < 0.0:
            return 2, t % self.omega2
        return 2, (t - self.omega1) % self.omega2

    def gamma(self, t: float) -> GluedPoint:
        piece, s = self.gamma_piece_coord(t)
        return self.point(piece, s, 0.0)

    def gamma_piece_coord_arrays(self, t):
        t = np.asarray(t, dtype=float)
        piece = np.where((t >= 0.0) & (t <= self.omega1), 1, 2)
        s = np.where(piece == 1, np.mod(t, self.omega1),
                     np.where(t < 0, np.mod(t, self.omega2),
                              np.mod(t - self.omega1, self.omega2)))
        return piece, s

    def gamma_geodesic(self) -> LocalGeodesic:
        return LocalGeodesic(self, self.gamma, label="gamma")

    def core(self, piece: int) -> ClosedGeodesic:
        omega = self.omega1 if piece == 1 else self.omega2
        return ClosedGeodesic(
            self, lambda t, _p=piece, _w=omega: self.point(_p, t % _w, 0.0),
            period=omega, label=f"core{piece}", rep=("core", piece),
            anchor=self.point(1, 0.0, 0.0))

    def core_distance_arrays(self, piece_a, s_a, piece_b, s_b):
        """Vectorized distance between core points (both h = 0)."""
        piece_a = np.asarray(piece_a)
        piece_b = np.asarray(piece_b)
        s_a = np.asarray(s_a, dtype=float)
        s_b = np.asarray(s_b, dtype=float)
        D = self.strip_length
        w1, w2 = self.omega1, self.omega2

        has1_a = (piece_a == 1) | (s_a <= D)
        has1_b = (piece_b == 1) | (s_b <= D)
        has2_a = (piece_a == 2) | (s_a <= D)
        has2_b = (piece_b == 2) | (s_b <= D)

        arc1 = np.abs(np.mod(s_a - s_b + w1 / 2.0, w1) - w1 / 2.0)
        arc2 = np.abs(np.mod(s_a - s_b + w2 / 2.0, w2) - w2 / 2.0)
        d = np.where(has1_a & has1_b, arc1, np.inf)
        d = np.minimum(d, np.where(has2_a & has2_b, arc2, np.inf))

        cross_ab = self.cross_core_distance_arrays(s_a, s_b)  # a in piece 1
        cross_ba = self.cross_core_distance_arrays(s_b, s_a)  # b in piece 1
        d = np.minimum(d, np.where(has1_a & has2_b, cross_ab, np.inf))
        d = np.minimum(d, np.where(has2_a & has1_b, cross_ba, np.inf))
        return d


# -- non-recurrence certificate --------------------------------------------------


@dataclass(frozen=True)
class NonRecurrenceCertificate:
    """Grid certificate that gamma admits no recurrence shifts.

    For each shift s on the grid, m(s) = max over base times t0 of
    d(gamma(s + t0), gamma(t0)).  Both curves are unit speed, so m is
    2-Lipschitz and the grid minimum minus 2*step bounds the continuum
    minimum (inequality key: "contradiction").

    m(s) <= s always (continuity of the flow), so the claim m >= eps can
    only start past a floor; on s < s_floor the certificate instead checks
    the exact small-shift behaviour m(s) >= s - 2*step.  The two ranges
    together refute every recurrence sequence t_n -> infinity with
    eps-threshold below eps.
    """

    eps: float
    step: float
    s_max: float
    s_floor: float
    branch_threshold: float
    t0s: tuple
    s: np.ndarray = field(repr=False)
    branches: np.ndarray = field(repr=False)  # shape (len(t0s), len(s))
    m: np.ndarray = field(repr=False)

    @property
    def min_m_full(self) -> float:
        return float(self.m.min())

    @property
    def argmin_s_full(self) -> float:
        return float(self.s[int(np.argmin(self.m))])

    @property
    def certified_region(self) -> np.ndarray:
        return self.s >= self.s_floor

    @property
    def min_m_certified(self) -> float:
        return float(self.m[self.certified_region].min())

    @property
    def certified_margin(self) -> float:
        return self.min_m_certified - 2.0 * self.step

    @property
    def small_shift_ok(self) -> bool:
        mask = ~self.certified_region
        if not mask.any():
            return True
        return bool(np.all(self.m[mask] >= self.s[mask] - 2.0 * self.step - 1e-12))

    def branch_trigger(self) -> np.ndarray:
        """Certified-region grid points where the first branch is below eps."""
        return self.certified_region & (self.branches[0] < self.eps)

    @property
    def branch_ok(self) -> bool:
        """On every trigger point the second branch exceeds omega1/4 (its
        value there is a quarter period plus the strip offset)."""
        trig = self.branch_trigger()
        if not trig.any():
            return True
        return bool(np.all(self.branches[1][trig] > self.s_floor))

    @property
    def passes(self) -> bool:
        return (self.certified_margin >= self.eps and self.small_shift_ok
                and self.branch_ok)


def non_recurrence_certificate(cfg: GluedConfig, eps: float, s_max: float,
                               step: float, t0s=None,
                               s_floor: float = None) -> NonRecurrenceCertificate:
    """Scan shifts s in (0, s_max] on a grid and bound m(s) from below."""
    D = cfg.strip_length
    if not (0 < eps < D / 2.0):
        raise ValueError(f"eps must lie in (0, {D / 2.0}) for this certificate")
    if step <= 0 or s_max <= step:
        raise ValueError("need 0 < step < s_max")
    if t0s is None:
        t0s = (0.0, 3.0 * cfg.omega1 / 4.0)
    if s_floor is None:
        s_floor = D / 2.0

    s = np.arange(1, int(round(s_max / step)) + 1, dtype=float) * step
    branches = np.empty((len(t0s), len(s)))
    for i, t0 in enumerate(t0s):
        pc0, s0 = cfg.gamma_piece_coord(t0)
        pc, sc = cfg.gamma_piece_coord_arrays(s + t0)
        branches[i] = cfg.core_distance_arrays(
            pc, sc, np.full(len(s), pc0), np.full(len(s), s0))
    m = branches.max(axis=0)
    return NonRecurrenceCertificate(eps=eps, step=step, s_max=s_max,
                                    s_floor=s_floor, t0s=tuple(t0s),
                                    s=s, branches=branches, m=m)


# -- approximability of gamma ------------------------------------------------------


@dataclass(frozen=True)
class ApproximabilityCandidate:
    curve: str          # "core1" | "core2"
    t_x_used: float     # parameter of the base point actually compared
    t_y: float          # anchor parameter on the closed geodesic
    anchor_distance: float
    sup: float
    step: float

    @property
    def certified_sup(self) -> float:
        return self.sup + 2.0 * self.step


@dataclass(frozen=True)
class ApproximabilityReport:
    t_x: float
    eps: float
    best: ApproximabilityCandidate
    tried: tuple

    @property
    def passes(self) -> bool:
        return self.best is not None and self.best.certified_sup < self.eps + 1e-6


def _base_parameters(cfg: GluedConfig, t_x: float):
    """All natural parameters of the point gamma(t_x): gamma is eventually
    periodic on both ends, so points on core 2 (including the shared
    segment) recur in the tail and the past."""
    params = [t_x]
    piece, s = cfg.gamma_piece_coord(t_x)
    on_core2 = piece == 2 or s <= cfg.strip_length
    if on_core2:
        s2 = s % cfg.omega2
        params.append(cfg.omega1 + s2)          # future tail parameter
        params.append(s2 - cfg.omega2)          # past parameter
    return params


def _project_to_core(cfg: GluedConfig, x_piece: int, x_s: float, curve: int,
                     n_grid: int = 4096):
    """(t_y, distance): projection of the core point x onto Im core(curve)."""
    omega = cfg.omega1 if curve == 1 else cfg.omega2
    u = np.linspace(0.0, omega, n_grid, endpoint=False)
    d = cfg.core_distance_arrays(np.full(n_grid, curve), u,
                                 np.full(n_grid, x_piece), np.full(n_grid, x_s))
    k = int(np.argmin(d))
    return float(u[k]), float(d[k])


def approximability_check(cfg: GluedConfig, t_x: float, eps: float,
                          n_steps: int = 800) -> ApproximabilityReport:
    """Try to shadow gamma over one full period of core 1 or core 2 with
    the anchor on the closed geodesic chosen by projection."""
    tried = []
    best = None
    for t_x_used in _base_parameters(cfg, t_x):
        x_piece, x_s = cfg.gamma_piece_coord(t_x_used)
        for curve in (1, 2):
            omega = cfg.omega1 if curve == 1 else cfg.omega2
            t_y, d0 = _project_to_core(cfg, x_piece, x_s, curve)
            step = omega / n_steps
            t = np.arange(n_steps + 1) * step
            c_s = np.mod(t + t_y, omega)
            g_piece, g_s = cfg.gamma_piece_coord_arrays(t + t_x_used)
            d = cfg.core_distance_arrays(np.full(len(t), curve), c_s,
                                         g_piece, g_s)
            cand = ApproximabilityCandidate(
                curve=f"core{curve}", t_x_used=t_x_used, t_y=t_y,
                anchor_distance=d0, sup=float(d.max()), step=step)
            tried.append(cand)
            if best is None or cand.certified_sup < best.certified_sup:
                best = cand
    return ApproximabilityReport(t_x=t_x, eps=eps, best=best, tried=tuple(tried))
