"""Comparison-triangle inequality checks against the model plane.

A space handle must provide .chi, .distance(p, q) and .segment(p, q)
-> (length, eval); the check samples point pairs on the sides of a
triangle and compares with the corresponding pairs on the comparison
triangle in the model plane.  Nonpositive maximum violation (within
tolerance) certifies the thin-triangle inequality on that triangle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .halfplane import comparison_point, comparison_triangle, hp_distance


@dataclass(frozen=True)
class CatCheckResult:
    max_violation: float
    samples: int

    def passes(self, tol: float = 1e-8) -> bool:
        return self.max_violation <= tol


def cat_inequality_check(space, triangle, samples: int, rng) -> CatCheckResult:
    """Max over sampled side pairs of d_space(p, q) - d_model(pbar, qbar).

    triangle is a tuple of three points of the space.  Raises ValueError if
    a side cannot be constructed.
    """
    A, B, C = triangle
    try:
        sides = {
            (0, 1): space.segment(A, B),
            (1, 2): space.segment(B, C),
            (2, 0): space.segment(C, A),
        }
    except ValueError:
        raise
    except Exception as exc:
        raise ValueError(f"sides not constructible: {exc}") from exc

    a = space.distance(B, C)
    b = space.distance(A, C)
    c = space.distance(A, B)
    tri = comparison_triangle(a, b, c, space.chi)

    side_keys = list(sides)
    worst = -float("inf")
    n = 0
    while n < samples:
        i = int(rng.integers(len(side_keys)))
        j = int(rng.integers(len(side_keys)))
        if i == j:
            continue
        ki, kj = side_keys[i], side_keys[j]
        li, ei = sides[ki]
        lj, ej = sides[kj]
        u = float(rng.random()) * li
        v = float(rng.random()) * lj
        p, q = ei(u), ej(v)
        pbar = comparison_point(tri, ki, u)
        qbar = comparison_point(tri, kj, v)
        worst = max(worst, space.distance(p, q) - hp_distance(pbar, qbar, space.chi))
        n += 1
    return CatCheckResult(worst, samples)
