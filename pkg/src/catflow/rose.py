"""Rose with two petals: a compact locally negatively-curved metric graph.

Petals a and b have lengths la, lb and meet at the single vertex.  Words
over {a, A, b, B} (capitals are inverses) code edge paths; reduced words
code local geodesics, and the universal cover is the tree of reduced words
with edge lengths, where every distance is an exact sum of letter lengths.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass

import numpy as np

from .paths import LocalGeodesic

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0

LETTERS = "aAbB"
INVERSE = {"a": "A", "A": "a", "b": "B", "B": "b"}

SUBSTITUTIONS = {
    "fibonacci": {"a": "ab", "b": "a"},
    "thue_morse": {"a": "ab", "b": "ba"},
}
# two-sided fixed point seeds (left letter | right letter) for rule squared
_SEEDS = {"fibonacci": ("b", "a"), "thue_morse": ("a", "a")}


def _check_word(w: str) -> str:
    for ch in w:
        if ch not in INVERSE:
            raise ValueError(f"letter {ch!r} not in {{a, A, b, B}}")
    return w


def reduce_word(w: str) -> str:
    """Free reduction: cancel adjacent inverse pairs until none remain.

    >>> reduce_word("aAb")
    'b'
    >>> reduce_word("abab")
    'abab'
    """
    _check_word(w)
    out: list = []
    for ch in w:
        if out and out[-1] == INVERSE[ch]:
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def is_reduced(w: str) -> bool:
    _check_word(w)
    return all(w[i + 1] != INVERSE[w[i]] for i in range(len(w) - 1))


def cyclic_reduce(w: str) -> str:
    """Cyclically reduced representative of the conjugacy class of w.

    >>> cyclic_reduce("abA")
    'b'
    """
    w = reduce_word(w)
    while len(w) >= 2 and w[-1] == INVERSE[w[0]]:
        w = reduce_word(w[1:-1])
    return w


def inverse_word(w: str) -> str:
    return "".join(INVERSE[ch] for ch in reversed(w))


def substitution_word(rule: str, depth: int) -> str:
    """depth-fold substitution image of the letter a (all letters positive,
    hence reduced)."""
    if rule not in SUBSTITUTIONS:
        raise ValueError(f"unknown substitution rule {rule!r}")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    subs = SUBSTITUTIONS[rule]
    w = "a"
    for _ in range(depth):
        w = "".join(subs[c] for c in w)
    return w


def occurrences(word: str, pattern: str) -> list:
    """All (overlapping) start indices of pattern in word.

    >>> occurrences("abaab", "a")
    [0, 2, 3]
    """
    if not pattern:
        raise ValueError("empty pattern")
    out, i = [], word.find(pattern)
    while i != -1:
        out.append(i)
        i = word.find(pattern, i + 1)
    return out


class TwoSidedWord:
    """Bi-infinite substitutive word W[i], i in Z, from the standard
    two-sided fixed-point seeding of the squared substitution."""

    def __init__(self, rule: str):
        if rule not in SUBSTITUTIONS:
            raise ValueError(f"unknown substitution rule {rule!r}")
        self.rule = rule
        self._subs = SUBSTITUTIONS[rule]
        left, right = _SEEDS[rule]
        self._left = left
        self._right = right
        self._grow_left()
        self._grow_right()

    def _apply2(self, w: str) -> str:
        subs = self._subs
        return "".join(subs[c] for c in "".join(subs[c] for c in w))

    def _grow_left(self):
        new = self._apply2(self._left)
        if not new.endswith(self._left):
            raise AssertionError("left seed is not a suffix fixed point")
        self._left = new

    def _grow_right(self):
        new = self._apply2(self._right)
        if not new.startswith(self._right):
            raise AssertionError("right seed is not a prefix fixed point")
        self._right = new

    def ensure(self, lo: int, hi: int):
        while hi > len(self._right):
            self._grow_right()
        while -lo > len(self._left):
            self._grow_left()

    def letter(self, i: int) -> str:
        self.ensure(min(i, 0), max(i + 1, 0))
        return self._right[i] if i >= 0 else self._left[i]

    def slice(self, lo: int, hi: int) -> str:
        """Letters W[lo:hi]."""
        if hi <= lo:
            return ""
        self.ensure(min(lo, 0), max(hi, 0))
        if lo >= 0:
            return self._right[lo:hi]
        left = self._left[lo:] if hi >= 0 else self._left[lo:hi]
        return left + (self._right[:hi] if hi > 0 else "")

    def first_window_match(self, half_lo: int, half_hi: int,
                           start: int = 1, limit: int = 200000) -> int:
        """Smallest shift J >= start with W[J+i] = W[i] for all
        i in [-half_lo, half_hi)."""
        pattern = self.slice(-half_lo, half_hi)
        j = start
        while j < limit:
            if self.slice(j - half_lo, j + half_hi) == pattern:
                return j
            j += 1
        raise RuntimeError("no window recurrence found below the letter limit")


# -- the rose itself ----------------------------------------------------------


@dataclass(frozen=True)
class RosePoint:
    """Point on a petal; offsets 0 and petal length are the vertex, with
    canonical representative ('a', 0.0)."""

    edge: str
    offset: float

    @property
    def is_vertex(self) -> bool:
        return self.offset == 0.0


@dataclass(frozen=True)
class RoseConfig:
    la: float = 1.0
    lb: float = GOLDEN
    # chi is vacuous on a graph (locally a tree) but kept so the rose can sit
    # behind the same space-handle surface as the smooth pieces
    chi: float = -1.0

    def __post_init__(self):
        if self.la <= 0 or self.lb <= 0:
            raise ValueError("petal lengths must be positive")

    def ell(self, letter: str) -> float:
        return self.la if letter in "aA" else self.lb

    def arclength(self, word: str) -> float:
        """Left-to-right sum of letter lengths (fixed order, so equal words
        give bit-identical sums)."""
        total = 0.0
        for ch in word:
            total += self.ell(ch)
        return total

    def point(self, edge: str, offset: float) -> RosePoint:
        if edge not in ("a", "b"):
            raise ValueError(f"edge must be 'a' or 'b', got {edge!r}")
        ell = self.ell(edge)
        if offset < -1e-12 or offset > ell + 1e-12:
            raise ValueError(f"offset {offset} outside [0, {ell}]")
        offset = min(max(offset, 0.0), ell)
        if offset == 0.0 or offset == ell:
            return RosePoint("a", 0.0)
        return RosePoint(edge, offset)

    @property
    def vertex(self) -> RosePoint:
        return RosePoint("a", 0.0)

    def distance(self, p: RosePoint, q: RosePoint) -> float:
        """Min over the embedded routes: direct within the common petal, or
        through the vertex via the nearest ends."""
        via = (min(p.offset, self.ell(p.edge) - p.offset)
               + min(q.offset, self.ell(q.edge) - q.offset))
        if p.edge == q.edge:
            return min(abs(p.offset - q.offset), via)
        return via

    def letter_point(self, letter: str, offset: float) -> RosePoint:
        """Point at arclength `offset` along the directed edge `letter`."""
        ell = self.ell(letter)
        if letter in "ab":
            return self.point(letter, offset)
        return self.point(letter.lower(), ell - offset)


# -- the universal cover (tree of reduced words) -------------------------------


@dataclass(frozen=True)
class TreePoint:
    """Point of the tree cover: follow the reduced edge path `word` from the
    basepoint, stopping `offset` into its last edge (0 <= offset <= length
    of that edge).  The basepoint is ('', 0.0)."""

    word: str
    offset: float = 0.0


def _common_prefix_len(u: str, v: str) -> int:
    n = min(len(u), len(v))
    for i in range(n):
        if u[i] != v[i]:
            return i
    return n


def tree_distance(p: TreePoint, q: TreePoint, cfg: RoseConfig) -> float:
    """Exact tree metric: cancel the longest common prefix, then add the
    two leftover path lengths."""
    u, v = p.word, q.word
    if not is_reduced(u) or not is_reduced(v):
        raise ValueError("tree positions must be coded by reduced words")
    if u == v:
        return abs(p.offset - q.offset)
    k = _common_prefix_len(u, v)
    if k == len(u):
        # p sits on q's path (u may be empty = basepoint)
        head = (cfg.ell(u[-1]) - p.offset) if u else 0.0
        return head + cfg.arclength(v[k:-1]) + q.offset
    if k == len(v):
        head = (cfg.ell(v[-1]) - q.offset) if v else 0.0
        return head + cfg.arclength(u[k:-1]) + p.offset
    return (cfg.arclength(u[k:-1]) + p.offset
            + cfg.arclength(v[k:-1]) + q.offset)


def tree_gromov_product(p: TreePoint, q: TreePoint, base: TreePoint,
                        cfg: RoseConfig) -> float:
    dpb = tree_distance(p, base, cfg)
    dqb = tree_distance(q, base, cfg)
    dpq = tree_distance(p, q, cfg)
    return 0.5 * (dpb + dqb - dpq)


def tree_segment_distance(p: TreePoint, a: TreePoint, b: TreePoint,
                          cfg: RoseConfig) -> float:
    """Distance from p to the tree segment [a, b]; in a tree this is the
    Gromov product (a|b)_p."""
    return max(0.0, tree_gromov_product(a, b, p, cfg))


# vectorized tree distances, for the hyperbolicity scans ----------------------

_LETTER_CODE = {"a": 0, "A": 1, "b": 2, "B": 3}


def encode_words(words, cfg: RoseConfig):
    """Pack words (+ their cumulative arclengths) into padded arrays."""
    n = len(words)
    lmax = max([len(w) for w in words] + [1])
    codes = np.full((n, lmax), -1, dtype=np.int8)
    lengths = np.zeros(n, dtype=np.int64)
    arcs = np.zeros((n, lmax + 1))
    ell = np.array([cfg.la, cfg.la, cfg.lb, cfg.lb])
    for i, w in enumerate(words):
        lengths[i] = len(w)
        for j, ch in enumerate(w):
            codes[i, j] = _LETTER_CODE[ch]
        if w:
            arcs[i, 1:len(w) + 1] = np.cumsum(ell[codes[i, :len(w)]])
    return codes, lengths, arcs


def tree_distance_batch(enc, offsets, idx1, idx2, cfg: RoseConfig):
    """tree_distance for index pairs into an encoded word pool."""
    codes, lengths, arcs = enc
    ell = np.array([cfg.la, cfg.la, cfg.lb, cfg.lb])
    c1, c2 = codes[idx1], codes[idx2]
    n1, n2 = lengths[idx1], lengths[idx2]
    o1, o2 = np.asarray(offsets)[idx1], np.asarray(offsets)[idx2]
    both = np.minimum(n1, n2)
    width = codes.shape[1]
    neq = (c1 != c2) | (np.arange(width)[None, :] >= both[:, None])
    lcp = np.where(neq.any(axis=1), np.argmax(neq, axis=1), width)
    lcp = np.minimum(lcp, both)

    a1 = np.take_along_axis(arcs[idx1], n1[:, None], axis=1)[:, 0]
    a2 = np.take_along_axis(arcs[idx2], n2[:, None], axis=1)[:, 0]
    ak1 = np.take_along_axis(arcs[idx1], lcp[:, None], axis=1)[:, 0]
    ak2 = np.take_along_axis(arcs[idx2], lcp[:, None], axis=1)[:, 0]
    il1 = np.take_along_axis(c1, np.maximum(n1 - 1, 0)[:, None], axis=1)[:, 0]
    il2 = np.take_along_axis(c2, np.maximum(n2 - 1, 0)[:, None], axis=1)[:, 0]
    last1 = ell[np.clip(il1, 0, 3)]
    last2 = ell[np.clip(il2, 0, 3)]

    tail1 = a1 - ak1 - last1 + o1          # back out of u's leftover path
    tail2 = a2 - ak2 - last2 + o2
    d = tail1 + tail2                       # generic diverging case
    p12 = (lcp == n1) & (lcp != n2)         # u is a strict prefix of v
    p21 = (lcp == n2) & (lcp != n1)
    same = (lcp == n1) & (lcp == n2)
    d = np.where(p12, (last1 - o1) + (a2 - ak2 - last2 + o2), d)
    d = np.where(p21, (last2 - o2) + (a1 - ak1 - last1 + o1), d)
    d = np.where(same, np.abs(o1 - o2), d)
    base1, base2 = n1 == 0, n2 == 0
    d = np.where(base1, a2 - last2 + o2, d)
    d = np.where(base2, a1 - last1 + o1, d)
    d = np.where(base1 & base2, np.abs(o1 - o2), d)
    return d


def random_reduced_word(k: int, rng) -> str:
    out: list = []
    for _ in range(k):
        choices = [c for c in LETTERS if not out or c != INVERSE[out[-1]]]
        out.append(choices[int(rng.integers(len(choices)))])
    return "".join(out)


def sample_tree_points(cfg: RoseConfig, n: int, max_letters: int, rng):
    """Random reduced words with a random offset into the last edge."""
    words = []
    offsets = np.zeros(n)
    for i in range(n):
        k = int(rng.integers(0, max_letters + 1))
        w = random_reduced_word(k, rng)
        words.append(w)
        if w:
            offsets[i] = rng.random() * cfg.ell(w[-1])
    return words, offsets


# -- geodesics coded by words --------------------------------------------------


class RoseGeodesic(LocalGeodesic):
    """Local geodesic coded by a reduced word.

    Parameter 0 sits `anchor_offset` into letter 0.  `word` is either a
    TwoSidedWord (line geodesic) or a nonempty cyclically reduced finite
    word (periodic geodesic).  Lifts run through the tree basepoint placed
    at the start vertex of letter 0.
    """

    def __init__(self, cfg: RoseConfig, word, anchor_offset: float = 0.0,
                 periodic: bool = False):
        self.cfg = cfg
        self.word = word
        self.periodic = periodic
        self.anchor_offset = anchor_offset
        if periodic:
            if not isinstance(word, str) or not word:
                raise ValueError("periodic geodesic needs a nonempty finite word")
            if cyclic_reduce(word) != word:
                raise ValueError("periodic coding word must be cyclically reduced")
            self._cycle_arc = [0.0]
            for ch in word:
                self._cycle_arc.append(self._cycle_arc[-1] + cfg.ell(ch))
            per = self._cycle_arc[-1]
        else:
            if not isinstance(word, TwoSidedWord):
                raise ValueError("line geodesic needs a TwoSidedWord")
            self._pos_right = [0.0]   # arclengths of letter starts, i >= 0
            self._pos_left = [0.0]    # arclengths of letter starts, i <= 0
            per = None
        super().__init__(space=cfg, fn=self._eval, period=per,
                         label="rose word geodesic")

    def letter(self, i: int) -> str:
        if self.periodic:
            return self.word[i % len(self.word)]
        return self.word.letter(i)

    def boundary(self, i: int) -> float:
        """Arclength of the start of letter i relative to the start of
        letter 0 (anchor offset not applied)."""
        if self.periodic:
            n = len(self.word)
            k, r = divmod(i, n)
            return k * self.period + self._cycle_arc[r]
        if i >= 0:
            while len(self._pos_right) <= i:
                j = len(self._pos_right) - 1
                self._pos_right.append(self._pos_right[-1]
                                       + self.cfg.ell(self.letter(j)))
            return self._pos_right[i]
        while len(self._pos_left) <= -i:
            j = -len(self._pos_left)
            self._pos_left.append(self._pos_left[-1] - self.cfg.ell(self.letter(j)))
        return self._pos_left[-i]

    def locate(self, t: float):
        """(letter index i, offset into letter i) with
        boundary(i) <= t + anchor < boundary(i+1)."""
        t = t + self.anchor_offset
        if self.periodic:
            n = len(self.word)
            k, r = divmod(t, self.period)
            i = min(bisect_right(self._cycle_arc, r) - 1, n - 1)
            return int(k) * n + i, r - self._cycle_arc[i]
        if t >= 0:
            while self._pos_right[-1] <= t:
                j = len(self._pos_right) - 1
                self._pos_right.append(self._pos_right[-1]
                                       + self.cfg.ell(self.letter(j)))
            i = bisect_right(self._pos_right, t) - 1
            return i, t - self._pos_right[i]
        while self._pos_left[-1] > t:
            j = -len(self._pos_left)
            self._pos_left.append(self._pos_left[-1] - self.cfg.ell(self.letter(j)))
        inc = [-x for x in self._pos_left]
        j = bisect_left(inc, -t)
        i = -j
        return i, t - self.boundary(i)

    def _eval(self, t: float) -> RosePoint:
        i, off = self.locate(t)
        return self.cfg.letter_point(self.letter(i), off)

    def letters_between(self, lo: int, hi: int) -> str:
        if self.periodic:
            return "".join(self.letter(j) for j in range(lo, hi))
        return self.word.slice(lo, hi)

    def lift(self, t: float) -> TreePoint:
        i, off = self.locate(t)
        if i >= 0:
            return TreePoint(self.letters_between(0, i + 1), off)
        word = "".join(INVERSE[self.letter(j)] for j in range(-1, i - 1, -1))
        return TreePoint(word, self.cfg.ell(self.letter(i)) - off)

    def breakpoints_between(self, t0: float, t1: float) -> list:
        """Letter-boundary parameters inside [t0, t1], plus the endpoints."""
        i0, _ = self.locate(t0)
        i1, _ = self.locate(t1)
        pts = [t0]
        for i in range(i0 + 1, i1 + 1):
            b = self.boundary(i) - self.anchor_offset
            if t0 < b < t1:
                pts.append(b)
        pts.append(t1)
        return pts


def fibonacci_line(cfg: RoseConfig) -> RoseGeodesic:
    return RoseGeodesic(cfg, TwoSidedWord("fibonacci"))


def rose_space(la: float = 1.0, lb: float = GOLDEN) -> RoseConfig:
    return RoseConfig(la, lb)
