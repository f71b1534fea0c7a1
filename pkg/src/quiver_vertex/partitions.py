"""
Combinatorics of rotated Young diagrams.

A box is addressed by rectangular coordinates (row, col), both 1-based.
Its content is row - col, so the columns of the rotated diagram are
indexed by content and the corner box (1,1) sits in column 0.  Boxes of
a fixed content are numbered by height min(row, col), the corner being
at height 1.

Kahler variables z_i live on the contents lo..hi of the diagram, and the
potentials zeta_i on lo-1..hi, related by z_i = zeta_{i-1}/zeta_i.
"""

from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


Box = namedtuple("Box", "row col")


class Partition(object):
    """A weakly decreasing tuple of positive integers."""

    def __init__(self, parts):
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise ValueError("empty partition")
        if any(p < 1 for p in parts):
            raise ValueError("parts must be positive: %r" % (parts,))
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError("parts must be weakly decreasing: %r" % (parts,))
        self.parts = parts

    @classmethod
    def parse(cls, text):
        """Parse "5,4,3,2"."""
        try:
            return cls(int(t) for t in text.replace(" ", "").split(",") if t)
        except ValueError as e:
            raise ValueError("bad partition %r: %s" % (text, e))

    def __hash__(self):
        return hash(self.parts)

    def __eq__(self, other):
        return isinstance(other, Partition) and self.parts == other.parts

    def __repr__(self):
        return "Partition(%r)" % (self.parts,)

    def __str__(self):
        return ",".join(str(p) for p in self.parts)

    def __len__(self):
        return len(self.parts)

    @property
    def size(self):
        return sum(self.parts)

    def conjugate(self):
        return Partition(sum(1 for p in self.parts if p >= j)
                         for j in range(1, self.parts[0] + 1))

    def __contains__(self, b):
        i, j = b
        return 1 <= i <= len(self.parts) and 1 <= j <= self.parts[i - 1]

    def boxes(self):
        """All boxes, content ascending then height ascending."""
        return _boxes(self.parts)

    def boxes_of_content(self, c):
        return [b for b in self.boxes() if b.row - b.col == c]

    def box_at(self, content, height):
        """The box of given content and height."""
        if content >= 0:
            b = Box(content + height, height)
        else:
            b = Box(height, height - content)
        if height < 1 or b not in self:
            raise ValueError("no box %d:%d in %s" % (content, height, self))
        return b

    def parse_box(self, text):
        """Parse "content:height"."""
        c, h = text.split(":")
        return self.box_at(int(c), int(h))


@lru_cache(maxsize=None)
def _boxes(parts):
    bs = [Box(i, j) for i in range(1, len(parts) + 1)
          for j in range(1, parts[i - 1] + 1)]
    bs.sort(key=lambda b: (b.row - b.col, min(b)))
    return tuple(bs)


def all_partitions(n):
    """Partitions of n, in reverse lexicographic order."""
    def gen(n, cap):
        if n == 0:
            yield ()
            return
        for p in range(min(n, cap), 0, -1):
            for rest in gen(n - p, p):
                yield (p,) + rest
    return [Partition(p) for p in gen(n, n)]


def partitions_up_to(n):
    return [lam for k in range(1, n + 1) for lam in all_partitions(k)]


class ColumnProfile(namedtuple("ColumnProfile", "lo hi counts")):
    """Number v_i of boxes of content i, for lo <= i <= hi."""

    def v(self, i):
        if self.lo <= i <= self.hi:
            return self.counts[i - self.lo]
        return 0

    @property
    def nvars(self):
        return self.hi - self.lo + 1

    def contents(self):
        return range(self.lo, self.hi + 1)


def column_profile(lam):
    lo = 1 - lam.parts[0]
    hi = len(lam) - 1
    counts = [0] * (hi - lo + 1)
    for b in lam.boxes():
        counts[b.row - b.col - lo] += 1
    return ColumnProfile(lo, hi, tuple(counts))


def _check(lam, b):
    if b not in lam:
        raise ValueError("box %r is outside %s" % (tuple(b), lam))


def box_stats(lam, b):
    """(content, height, arm, leg); the arm runs down the column and the
    leg along the row."""
    _check(lam, b)
    i, j = b
    arm = sum(1 for p in lam.parts if p >= j) - i
    leg = lam.parts[i - 1] - j
    return i - j, min(i, j), arm, leg


def hook(lam, b):
    c, h, a, l = box_stats(lam, b)
    i, j = b
    hs = [Box(i, j)] + [Box(i + k, j) for k in range(1, a + 1)] \
        + [Box(i, j + k) for k in range(1, l + 1)]
    return sorted(hs, key=lambda x: (x.row - x.col, min(x)))


def slice_boxes(lam, b):
    """The slice through b.

    The boxes of content c fill the diagonal of a rectangle cut out of the
    corner; the slice is the line of that rectangle through b, a column
    when c >= 0 and a row when c < 0.
    """
    c, h, a, l = box_stats(lam, b)
    v = column_profile(lam).v(c)
    i, j = b
    if c >= 0:
        s = [Box(k, j) for k in range(1, c + v + 1)]
    else:
        s = [Box(i, k) for k in range(1, -c + v + 1)]
    return sorted(s, key=lambda x: (x.row - x.col, min(x)))


def sigma(lam, i):
    """sigma(i) = v_{i-1} - v_i + [i = 0]."""
    prof = column_profile(lam)
    return prof.v(i - 1) - prof.v(i) + (1 if i == 0 else 0)


@dataclass(frozen=True)
class BoxMonomial:
    """scale * (hbar/q)^hq * prod z_i^zexp[i-lo]."""
    lo: int
    zexp: tuple
    hq: int = 0
    scale: Fraction = Fraction(1)

    def __mul__(self, other):
        assert self.lo == other.lo and len(self.zexp) == len(other.zexp)
        return BoxMonomial(self.lo, tuple(x + y for x, y in zip(self.zexp, other.zexp)),
                           self.hq + other.hq, self.scale * other.scale)

    def inverse(self):
        return BoxMonomial(self.lo, tuple(-x for x in self.zexp), -self.hq, 1 / self.scale)

    @property
    def degree(self):
        return sum(self.zexp)

    def exponent(self, i):
        k = i - self.lo
        return self.zexp[k] if 0 <= k < len(self.zexp) else 0

    def coefficient(self, hbar, q):
        """The scalar part scale * (hbar/q)^hq."""
        return self.scale * (hbar / q) ** self.hq

    def evaluate(self, zvals, hbar, q):
        """Value at z_i = zvals[i - lo]; works for exact and complex input."""
        val = self.coefficient(hbar, q)
        for z, e in zip(zvals, self.zexp):
            if e:
                val = val * z ** e
        return val

    def pairing(self, theta):
        return sum(e * t for e, t in zip(self.zexp, theta))


def _unit(lam):
    prof = column_profile(lam)
    return prof.lo, prof.nvars


def z_box(lam, b):
    """z_b as the product of zhat_i = (hbar/q)^sigma(i) z_i over the
    contents of the hook at b."""
    lo, n = _unit(lam)
    e = [0] * n
    hq = 0
    for x in hook(lam, b):
        c = x.row - x.col
        e[c - lo] = 1
        hq += sigma(lam, c)
    return BoxMonomial(lo, tuple(e), hq)


def zeta_box(lam, b):
    """zeta_b as (index, hq): zeta_b = (hbar/q)^hq zeta_index."""
    c, h, a, l = box_stats(lam, b)
    if c >= 0:
        return c + a, h
    return c - l - 1, -h


def zeta_ratio(lam, j, k, hq=0):
    """(hbar/q)^hq zeta_j / zeta_k as a monomial in the z_i."""
    lo, n = _unit(lam)
    e = [0] * n
    if j < k:
        for i in range(j + 1, k + 1):
            e[i - lo] += 1
    else:
        for i in range(k + 1, j + 1):
            e[i - lo] -= 1
    return BoxMonomial(lo, tuple(e), hq)


def zeta_box_ratio(lam, b1, b2):
    """zeta_{b1} / zeta_{b2}."""
    j, h1 = zeta_box(lam, b1)
    k, h2 = zeta_box(lam, b2)
    return zeta_ratio(lam, j, k, h1 - h2)


def z_box_from_zeta(lam, b):
    """z_b = zeta_{c-l-1}/zeta_{c+a} times the (hbar/q) power of its hook."""
    c, h, a, l = box_stats(lam, b)
    return zeta_ratio(lam, c - l - 1, c + a, z_box(lam, b).hq)


def p_box(lam, b):
    """Shift descriptor [(zeta index, +-1), ...] for the operator p_b."""
    c, h, a, l = box_stats(lam, b)
    v = column_profile(lam).v(c)
    if c >= 0:
        return [(i, -1) for i in range(c + v - h, c + a + 1)]
    return [(i, 1) for i in range(c - l - 1, c - v + h)]


def shift_vector(lam, desc):
    """Exponents e with z_i -> q^{e_i} z_i induced by a shift descriptor.

    p_i sends zeta_i to q zeta_i, hence z_i to z_i/q and z_{i+1} to q z_{i+1}.
    """
    lo, n = _unit(lam)
    e = [0] * n
    for i, s in desc:
        if 0 <= i - lo < n:
            e[i - lo] -= s
        if 0 <= i + 1 - lo < n:
            e[i + 1 - lo] += s
    return tuple(e)


def shifted_monomial_factor(m, e):
    """Power of q picked up by the monomial m under z_i -> q^{e_i} z_i."""
    return sum(x * y for x, y in zip(m.zexp, e))
