"""Constant-curvature model plane in upper half-plane coordinates.

All trigonometry is done at curvature -1; a plane of curvature chi < 0 is
the same point set with distances rescaled by 1/sqrt(-chi).  Points are
(x, y) with y > 0, orientation-preserving isometries are real 2x2 matrices
acting as Mobius transformations, kept normalized to determinant 1 (M and
-M describe the same isometry).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

INF = math.inf

_DET_TOL = 1e-12


def _check_chi(chi: float) -> float:
    if not (math.isfinite(chi) and chi < 0):
        raise ValueError(f"curvature must be a finite negative real, got {chi}")
    return math.sqrt(-chi)


@dataclass(frozen=True)
class HPoint:
    """Point of the upper half-plane model."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")
        if self.y <= 0:
            raise ValueError(f"point must have y > 0, got y={self.y}")

    @property
    def z(self) -> complex:
        return complex(self.x, self.y)

    @classmethod
    def from_complex(cls, z: complex) -> "HPoint":
        return cls(z.real, z.imag)


class Mobius:
    """Orientation-preserving isometry of the half-plane, det-1 normalized."""

    __slots__ = ("m",)

    def __init__(self, m):
        a = np.asarray(m, dtype=float)
        if a.shape != (2, 2):
            raise ValueError("Mobius matrix must be 2x2")
        det = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
        if not math.isfinite(det) or det <= 0:
            raise ValueError(f"matrix must have positive determinant, got {det}")
        a = a / math.sqrt(det)
        self.m = a

    @classmethod
    def identity(cls) -> "Mobius":
        return cls(np.eye(2))

    @classmethod
    def scaling(cls, t: float) -> "Mobius":
        """z -> e^t z, translation by t along the imaginary axis."""
        e = math.exp(t / 2.0)
        return cls([[e, 0.0], [0.0, 1.0 / e]])

    @classmethod
    def rotation_about_i(cls, phi: float) -> "Mobius":
        """Rotation of the tangent space at i by angle +phi."""
        c, s = math.cos(phi / 2.0), math.sin(phi / 2.0)
        return cls([[c, s], [-s, c]])

    @classmethod
    def point_to_i(cls, p: HPoint) -> "Mobius":
        """Isometry sending p to i without rotating directions (z -> (z-x)/y)."""
        return cls([[1.0, -p.x], [0.0, p.y]])

    @property
    def trace(self) -> float:
        return float(self.m[0, 0] + self.m[1, 1])

    def __matmul__(self, other: "Mobius") -> "Mobius":
        return Mobius(self.m @ other.m)

    def inverse(self) -> "Mobius":
        a, b, c, d = self.m.ravel()
        return Mobius([[d, -b], [-c, a]])

    def apply_complex(self, z):
        """Apply to a complex number or the symbol INF (boundary allowed)."""
        a, b, c, d = self.m.ravel()
        if z == INF:
            return a / c if c != 0.0 else INF
        den = c * z + d
        if den == 0:
            return INF
        return (a * z + b) / den

    def apply(self, p: HPoint) -> HPoint:
        return HPoint.from_complex(self.apply_complex(p.z))

    def is_identity(self, tol: float = 1e-9) -> bool:
        return bool(
            np.abs(self.m - np.eye(2)).max() <= tol
            or np.abs(self.m + np.eye(2)).max() <= tol
        )

    def __repr__(self):
        a, b, c, d = self.m.ravel()
        return f"Mobius([[{a:.6g}, {b:.6g}], [{c:.6g}, {d:.6g}]])"


def hp_distance(p: HPoint, q: HPoint, chi: float = -1.0) -> float:
    """Distance in the curvature-chi plane.

    cosh d = 1 + |z-w|^2 / (2 Im z Im w) at curvature -1, then d/sqrt(-chi).
    """
    su = _check_chi(chi)
    dx = p.x - q.x
    dy = p.y - q.y
    c = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y)
    return math.acosh(max(c, 1.0)) / su


def hp_distance_arrays(x1, y1, x2, y2, chi: float = -1.0):
    """Vectorized hp_distance on coordinate arrays."""
    su = _check_chi(chi)
    dx = np.asarray(x1) - np.asarray(x2)
    dy = np.asarray(y1) - np.asarray(y2)
    c = 1.0 + (dx * dx + dy * dy) / (2.0 * np.asarray(y1) * np.asarray(y2))
    return np.arccosh(np.maximum(c, 1.0)) / su


@dataclass(frozen=True)
class PlaneGeodesic:
    """Unit-speed geodesic t -> frame . (i e^{t sqrt(-chi)})."""

    frame: Mobius
    chi: float = -1.0

    def __call__(self, t: float) -> HPoint:
        su = math.sqrt(-self.chi)
        return self.frame.apply(HPoint(0.0, math.exp(su * t)))

    def point_parameter(self, p: HPoint) -> float:
        """Parameter of the point of the geodesic closest to the axis pullback.

        Exact for points on the geodesic; used to rebase/orient frames.
        """
        w = self.frame.inverse().apply(p)
        return math.log(abs(w.z)) / math.sqrt(-self.chi)

    def shifted(self, t0: float) -> "PlaneGeodesic":
        su = math.sqrt(-self.chi)
        return PlaneGeodesic(self.frame @ Mobius.scaling(su * t0), self.chi)

    def endpoints(self):
        """Ideal endpoints (g(-inf), g(+inf)) on the boundary line."""
        return (self.frame.apply_complex(0.0), self.frame.apply_complex(INF))


def geodesic_from_endpoints(u, v, chi: float = -1.0) -> PlaneGeodesic:
    """Oriented geodesic with g(-inf) = u, g(+inf) = v (reals or INF)."""
    if u == v:
        raise ValueError("ideal endpoints must be distinct")
    if v == INF:
        frame = Mobius([[1.0, u], [0.0, 1.0]])
    elif u == INF:
        frame = Mobius([[-v, 1.0], [-1.0, 0.0]])
    elif u < v:
        frame = Mobius([[v, u], [1.0, 1.0]])
    else:
        frame = Mobius([[v, -u], [1.0, -1.0]])
    return PlaneGeodesic(frame, chi)


def _ideal_endpoints_through(zp: complex, zq: complex):
    """Ideal endpoints of the geodesic through zp, zq, ordered so travel
    zp -> zq heads toward the second endpoint."""
    if abs(zp.real - zq.real) < 1e-14 * (1.0 + abs(zp.real)):
        x = 0.5 * (zp.real + zq.real)
        return (x, INF) if zq.imag > zp.imag else (INF, x)
    c = (abs(zp) ** 2 - abs(zq) ** 2) / (2.0 * (zp.real - zq.real))
    r = abs(zp - c)
    tp = math.atan2(zp.imag, zp.real - c)
    tq = math.atan2(zq.imag, zq.real - c)
    # decreasing angle means moving toward the c + r end
    return (c - r, c + r) if tq < tp else (c + r, c - r)


def geodesic_through(p: HPoint, q: HPoint, chi: float = -1.0) -> PlaneGeodesic:
    """Unit-speed geodesic with g(0) = p and g(d(p,q)) = q."""
    if p.x == q.x and p.y == q.y:
        raise ValueError("degenerate geodesic: endpoints coincide")
    u, v = _ideal_endpoints_through(p.z, q.z)
    g = geodesic_from_endpoints(u, v, chi)
    return g.shifted(g.point_parameter(p))


def geodesic_from_direction(p: HPoint, direction: complex, chi: float = -1.0) -> PlaneGeodesic:
    """Unit-speed geodesic with g(0) = p heading along the Euclidean
    direction `direction` (nonzero complex) at p."""
    v = direction / abs(direction)
    z = p.z
    if abs(v.real) < 1e-14:
        u_e, v_e = ((z.real, INF) if v.imag > 0 else (INF, z.real))
    else:
        c = (z.real * v.real + z.imag * v.imag) / v.real
        r = abs(z - c)
        cross = (z.real - c) * v.imag - z.imag * v.real
        u_e, v_e = (c + r, c - r) if cross > 0 else (c - r, c + r)
    g = geodesic_from_endpoints(u_e, v_e, chi)
    return g.shifted(g.point_parameter(p))


def point_at_angle(p: HPoint, theta: float, dist: float, chi: float = -1.0) -> HPoint:
    """Point reached from p after distance `dist` along the direction with
    Euclidean angle theta at p (theta = pi/2 is straight up)."""
    su = _check_chi(chi)
    move = Mobius.point_to_i(p).inverse() @ Mobius.rotation_about_i(theta - math.pi / 2.0)
    return move.apply(HPoint(0.0, math.exp(su * dist)))


@dataclass(frozen=True)
class IsometryClass:
    kind: str  # "elliptic" | "parabolic" | "hyperbolic"
    translation_length: float
    trace: float


def classify_isometry(m: Mobius, chi: float = -1.0) -> IsometryClass:
    """Classify by |trace|: hyperbolic iff |tr| > 2, with translation
    length 2 arccosh(|tr|/2)/sqrt(-chi); identity counts as elliptic."""
    su = _check_chi(chi)
    tr = abs(m.trace)
    if tr > 2.0 + 1e-12:
        ell = 2.0 * math.acosh(tr / 2.0) / su
        return IsometryClass("hyperbolic", ell, tr)
    if tr >= 2.0 - 1e-9 and not m.is_identity():
        return IsometryClass("parabolic", 0.0, tr)
    return IsometryClass("elliptic", 0.0, tr)


def axis_of(m: Mobius, chi: float = -1.0) -> PlaneGeodesic:
    """Translation axis of a hyperbolic isometry, oriented so m translates
    by +translation_length along it."""
    cls = classify_isometry(m, chi)
    if cls.kind != "hyperbolic":
        raise ValueError(f"axis requires a hyperbolic isometry, got {cls.kind}")
    a, b, c, d = m.m.ravel()
    if abs(c) < 1e-15:
        fixed = [INF, b / (d - a)]
    else:
        disc = math.sqrt((a - d) ** 2 + 4.0 * b * c)
        fixed = [((a - d) - disc) / (2.0 * c), ((a - d) + disc) / (2.0 * c)]
    g = geodesic_from_endpoints(fixed[0], fixed[1], chi)
    moved = g.point_parameter(m.apply(g(0.0)))
    if moved < 0:
        g = geodesic_from_endpoints(fixed[1], fixed[0], chi)
    return g


# -- comparison triangles ----------------------------------------------------


def triangle_angle(a: float, b: float, c: float, chi: float = -1.0) -> float:
    """Angle opposite side a in the triangle with sides (a, b, c), from the
    hyperbolic law of cosines."""
    su = _check_chi(chi)
    a, b, c = a * su, b * su, c * su
    if b == 0.0 or c == 0.0:
        raise ValueError("angle undefined at a degenerate vertex")
    num = math.cosh(b) * math.cosh(c) - math.cosh(a)
    den = math.sinh(b) * math.sinh(c)
    return math.acos(min(1.0, max(-1.0, num / den)))


@dataclass(frozen=True)
class ComparisonTriangle:
    """Triangle in the curvature-chi model with prescribed side lengths.

    Vertices (A, B, C) satisfy d(A,B) = c, d(A,C) = b, d(B,C) = a.
    """

    a: float
    b: float
    c: float
    chi: float
    vertices: tuple = field(repr=False)

    @property
    def sides(self):
        return (self.a, self.b, self.c)

    def angle(self, vertex: int) -> float:
        """Interior angle at vertex 0 (=A), 1 (=B) or 2 (=C)."""
        a, b, c = self.a, self.b, self.c
        opposite = {0: (a, b, c), 1: (b, c, a), 2: (c, a, b)}[vertex]
        return triangle_angle(*opposite, chi=self.chi)

    def side_geodesic(self, i: int, j: int) -> PlaneGeodesic:
        return geodesic_through(self.vertices[i], self.vertices[j], self.chi)

    def side_length(self, i: int, j: int) -> float:
        pairs = {(0, 1): self.c, (1, 0): self.c, (0, 2): self.b,
                 (2, 0): self.b, (1, 2): self.a, (2, 1): self.a}
        return pairs[(i, j)]


def comparison_triangle(a: float, b: float, c: float, chi: float = -1.0) -> ComparisonTriangle:
    """Place a triangle with side lengths (a, b, c) in the model plane.

    A sits at i, B at distance c up the imaginary axis, C is solved from
    the two distance equations (x >= 0 branch).
    """
    su = _check_chi(chi)
    for s in (a, b, c):
        if not math.isfinite(s) or s < 0:
            raise ValueError(f"side lengths must be nonnegative reals, got {s}")
    if a > b + c + 1e-12 or b > a + c + 1e-12 or c > a + b + 1e-12:
        raise ValueError(f"triangle inequality violated by ({a}, {b}, {c})")

    au, bu, cu = a * su, b * su, c * su
    A = HPoint(0.0, 1.0)
    B = HPoint(0.0, math.exp(cu))
    if cu == 0.0:
        C = HPoint(0.0, math.exp(bu)) if bu > 0 else A
        return ComparisonTriangle(a, b, c, chi, (A, B, C))
    k1 = math.cosh(bu) - 1.0
    k2 = math.cosh(au) - 1.0
    ec = math.exp(cu)
    den = 2.0 * (ec - 1.0 - k1 + ec * k2)
    y = (ec * ec - 1.0) / den
    u = 2.0 * y * k1 - y * y + 2.0 * y - 1.0
    x = math.sqrt(max(u, 0.0))
    C = HPoint(x, y)
    return ComparisonTriangle(a, b, c, chi, (A, B, C))


def comparison_point(tri: ComparisonTriangle, side: tuple, arclength: float) -> HPoint:
    """Point at the given arclength from vertex side[0] along the model side
    toward side[1]."""
    i, j = side
    length = tri.side_length(i, j)
    if arclength < -1e-12 or arclength > length + 1e-12:
        raise ValueError(
            f"arclength {arclength} not on side {side} of length {length}")
    if length == 0.0:
        return tri.vertices[i]
    arclength = min(max(arclength, 0.0), length)
    if arclength == 0.0:
        return tri.vertices[i]
    return tri.side_geodesic(i, j)(arclength)


# -- projection ---------------------------------------------------------------


@dataclass(frozen=True)
class Projection:
    s: float
    foot: HPoint
    distance: float


def _bracket_minimum(f, t0: float = 0.0, h0: float = 1.0, max_iter: int = 200):
    """Geometric bracket expansion for a convex objective."""
    h = h0
    fm, f0, fp = f(t0 - h), f(t0), f(t0 + h)
    if fm >= f0 <= fp:
        return t0 - h, t0, t0 + h
    sgn = -1.0 if fm < f0 else 1.0
    prev_t, prev_f = t0, f0
    cur_t = t0 + sgn * h
    cur_f = fm if sgn < 0 else fp
    for _ in range(max_iter):
        h *= 2.0
        nxt_t = cur_t + sgn * h
        nxt_f = f(nxt_t)
        if nxt_f >= cur_f:
            lo, hi = sorted((prev_t, nxt_t))
            return lo, cur_t, hi
        prev_t, prev_f = cur_t, cur_f
        cur_t, cur_f = nxt_t, nxt_f
    raise RuntimeError("bracketing failure: objective does not look unimodal")


def _parabolic_polish(f, s: float, h: float = 1e-5) -> float:
    """One parabolic-fit step; pure golden stalls near the comparison noise
    floor (~sqrt(eps)) while the 3-point vertex stays accurate."""
    f0, fm, fp = f(s), f(s - h), f(s + h)
    denom = fm - 2.0 * f0 + fp
    if denom <= 0:
        return s
    step = 0.5 * h * (fm - fp) / denom
    if abs(step) > h:
        return s
    s2 = s + step
    return s2 if f(s2) <= f0 else s


def project_to_geodesic(p: HPoint, g: PlaneGeodesic, tol: float = 1e-10) -> Projection:
    """Unique foot of p on g, by geometric bracketing plus golden-section
    (the distance along a geodesic to a point is convex)."""

    def f(t):
        return hp_distance(p, g(t), g.chi)

    lo, mid, hi = _bracket_minimum(f)
    res = optimize.minimize_scalar(f, bracket=(lo, mid, hi), method="golden",
                                   options={"xtol": tol * 1e-2})
    s = _parabolic_polish(f, float(res.x))
    foot = g(s)
    return Projection(s, foot, hp_distance(p, foot, g.chi))


def project_to_segment(p: HPoint, a: HPoint, b: HPoint, chi: float = -1.0) -> float:
    """Distance from p to the geodesic segment [a, b]."""
    if a.x == b.x and a.y == b.y:
        return hp_distance(p, a, chi)
    g = geodesic_through(a, b, chi)
    proj = project_to_geodesic(p, g)
    s = min(max(proj.s, 0.0), hp_distance(a, b, chi))
    return hp_distance(p, g(s), chi)


# -- the plane as a space handle ----------------------------------------------


@dataclass(frozen=True)
class PlaneSpace:
    """The model plane as a space handle (distance + segments)."""

    chi: float = -1.0

    def distance(self, p: HPoint, q: HPoint) -> float:
        return hp_distance(p, q, self.chi)

    def segment(self, p: HPoint, q: HPoint):
        """(length, eval) for the geodesic segment from p to q."""
        length = hp_distance(p, q, self.chi)
        if length == 0.0:
            return 0.0, lambda t: p
        g = geodesic_through(p, q, self.chi)
        return length, g

    def sample_ball(self, center: HPoint, radius: float, n: int, rng) -> list:
        """n points uniform w.r.t. hyperbolic area in a ball around center."""
        su = math.sqrt(-self.chi)
        u = rng.random(n)
        r = np.arccosh(1.0 + u * (math.cosh(radius * su) - 1.0)) / su
        theta = rng.random(n) * 2.0 * math.pi
        return [point_at_angle(center, float(th), float(rr), self.chi)
                for th, rr in zip(theta, r)]
