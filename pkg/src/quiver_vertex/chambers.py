"""
Chambers of the arrangement cut out by the box characters sigma_b and
the pair characters sigma_{b,b'} (same content), limits of the capped
vertex at the corresponding points of the Kahler moduli space, and
characters of tautological bundles for arbitrary stability.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations
from math import gcd

import numpy as np
from scipy.optimize import linprog

from .partitions import Partition, column_profile, z_box, zeta_box_ratio, slice_boxes
from .qseries import GradedSeries, graded_geometric, default_context
from .vertex import capped_expression, beta


class WallError(ValueError):
    pass


def box_characters(lam):
    return [(b, z_box(lam, b).zexp) for b in lam.boxes()]


def pair_characters(lam):
    out = []
    prof = column_profile(lam)
    for n in prof.contents():
        C = lam.boxes_of_content(n)
        for b in C:
            for b2 in C:
                if b2 != b:
                    out.append(((b, b2), zeta_box_ratio(lam, b, b2).zexp))
    return out


def _dot(e, theta):
    return sum(x * y for x, y in zip(e, theta))


@dataclass
class Chamber:
    theta: tuple
    signs_box: dict = field(repr=False)
    signs_pair: dict = field(repr=False)

    @property
    def p(self):
        return sum(1 for s in self.signs_box.values() if s < 0)

    def negative_boxes(self):
        return [b for b, s in self.signs_box.items() if s < 0]

    def key(self):
        return (tuple(self.signs_box[b] for b in sorted(self.signs_box)),
                tuple(self.signs_pair[k] for k in sorted(self.signs_pair)))

    def is_positive(self):
        return self.p == 0

    def to_json(self):
        return {"theta": [str(t) for t in self.theta], "p": self.p,
                "signs_box": {"%d,%d" % b: s for b, s in sorted(self.signs_box.items())}}


def classify(lam, theta):
    theta = tuple(Fraction(t) for t in theta)
    n = column_profile(lam).nvars
    if len(theta) != n:
        raise ValueError("theta needs %d entries" % n)
    sb = {}
    for b, e in box_characters(lam):
        s = _dot(e, theta)
        if s == 0:
            raise WallError("theta lies on the wall of the box character at %r" % (tuple(b),))
        sb[b] = 1 if s > 0 else -1
    sp = {}
    for k, e in pair_characters(lam):
        s = _dot(e, theta)
        if s == 0:
            raise WallError("theta lies on the wall of the pair character %r" % ((tuple(k[0]), tuple(k[1])),))
        sp[k] = 1 if s > 0 else -1
    return Chamber(theta, sb, sp)


def hyperplanes(lam):
    """Distinct normals (up to sign) of all box and pair characters."""
    seen = []
    for _, e in box_characters(lam) + pair_characters(lam):
        neg = tuple(-x for x in e)
        if e not in seen and neg not in seen:
            seen.append(e)
    return seen


def _margin(normals, signs, dim):
    """max t with s_k <n_k, theta> >= t, |theta_i| <= 1; returns (t, theta)."""
    if not normals:
        return 1.0, np.zeros(dim)
    A = np.array([[-s * x for x in nrm] + [1.0] for nrm, s in zip(normals, signs)])
    res = linprog(c=[0.0] * dim + [-1.0], A_ub=A, b_ub=np.zeros(len(normals)),
                  bounds=[(-1, 1)] * dim + [(None, 1)], method="highs")
    if res.status != 0:
        return -1.0, None
    return -res.fun, res.x[:dim]


def _rational_point(normals, signs, theta):
    for den in (10, 100, 1000, 10 ** 4, 10 ** 6):
        fr = [Fraction(float(t)).limit_denominator(den) for t in theta]
        if all(s * _dot(n, fr) > 0 for n, s in zip(normals, signs)):
            L = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fr), 1)
            ints = [int(f * L) for f in fr]
            g = reduce(gcd, (abs(x) for x in ints), 0) or 1
            return tuple(x // g for x in ints)
    raise RuntimeError("could not find a rational interior point")


@lru_cache(maxsize=None)
def _enumerate(parts):
    lam = Partition(parts)
    dim = column_profile(lam).nvars
    normals = hyperplanes(lam)
    cells = [()]
    for k in range(len(normals)):
        new = []
        for s in cells:
            for sg in (1, -1):
                t, _ = _margin(normals[:k + 1], s + (sg,), dim)
                if t > 1e-9:
                    new.append(s + (sg,))
        cells = new
    out = []
    for s in cells:
        _, th = _margin(normals, s, dim)
        out.append(_rational_point(normals, s, th))
    return tuple(out)


def enumerate_chambers(lam):
    """One chamber per full-dimensional cell; the cell containing the
    positive directions comes first.  Other cells can have every box
    sign positive as well, when only pair signs differ."""
    chs = [classify(lam, th) for th in _enumerate(lam.parts)]
    pos = positive_chamber(lam).key()
    chs.sort(key=lambda c: (c.key() != pos,) + tuple(-x for x in c.key()[0])
             + tuple(-x for x in c.key()[1]))
    return chs


def positive_chamber(lam):
    n = column_profile(lam).nvars
    # weights growing fast enough that every box and pair sign is fixed
    return classify(lam, tuple(Fraction(1 + 10 ** k) for k in range(n)))


# ----------------------------------------------------------------------
# Laurent polynomials in hbar as {exponent: coefficient}

def laurent_add(a, b):
    t = dict(a)
    for e, c in b.items():
        t[e] = t.get(e, 0) + c
    return {e: c for e, c in t.items() if c}


def laurent_eval(p, hbar):
    return sum((Fraction(c) * Fraction(hbar) ** e for e, c in p.items()), Fraction(0))


def laurent_json(p):
    return {str(e): str(c) for e, c in sorted(p.items())}


def m_value(lam, b, C):
    n = b.row - b.col
    up = sum(1 for b2 in lam.boxes_of_content(n) if b2 != b and C.signs_pair[b, b2] > 0)
    down = sum(1 for b2 in slice_boxes(lam, b) if C.signs_box[b2] < 0)
    return up - down


def tautological_character(lam, n, r, C):
    """e_r of {hbar^{m(b)} : b of content n}."""
    ms = [m_value(lam, b, C) for b in lam.boxes_of_content(n)]
    if not 1 <= r <= len(ms):
        raise ValueError("rank out of range")
    out = {}
    for I in combinations(ms, r):
        out = laurent_add(out, {sum(I): 1})
    return out


def capped_limit(lam, n, r, C, convention="prefactor"):
    """Limit of the capped vertex expression at the point 0_C.

    Each pair factor tends to hbar or 1 and each slice factor to 1/hbar
    or 1, depending on the direction of the character along theta.
    convention "prefactor" keeps hbar^{r(r-1)/2+beta(n)}, "bare" drops it.
    """
    expr = capped_expression(lam, n, r)
    th = C.theta
    out = {}
    for t in expr.terms:
        e = 0
        for b, b2 in t.pairs:
            if _dot(expr.pair_monomial(b, b2).zexp, th) > 0:
                e += 1
        for b2 in t.slices:
            if _dot(expr.slice_monomial(b2).zexp, th) < 0:
                e -= 1
        out = laurent_add(out, {e: 1})
    if convention == "prefactor":
        out = {e + expr.prefactor_h: c for e, c in out.items()}
    elif convention != "bare":
        raise ValueError("convention must be 'prefactor' or 'bare'")
    return out


def capped_limit_both(lam, n, r, C):
    return {"prefactor": capped_limit(lam, n, r, C, "prefactor"),
            "bare": capped_limit(lam, n, r, C, "bare")}


# ----------------------------------------------------------------------
# chamber expansions

def _weights(C):
    return tuple(int(t) if Fraction(t).denominator == 1 else t for t in C.theta)


def chamber_expand(expr, C, T, ctx=None):
    """Expansion of a capped vertex expression around 0_C, truncated at
    grade <d, theta> <= T."""
    ctx = default_context() if ctx is None else ctx
    h, q = ctx.hbar, ctx.q
    w = _weights(C)
    one = GradedSeries.constant(w, T, 1)
    out = GradedSeries(w, T)
    for t in expr.terms:
        s = one
        for b, b2 in t.pairs:
            u = expr.pair_monomial(b, b2)
            if _dot(u.zexp, w) > 0:
                f = graded_geometric(u.zexp, u.coefficient(h, q), w, T, h, h - 1)
            else:
                u = u.inverse()
                f = graded_geometric(u.zexp, u.coefficient(h, q), w, T, 1, 1 - h)
            s = s * f
        for b2 in t.slices:
            x = expr.slice_monomial(b2)
            if _dot(x.zexp, w) > 0:
                f = graded_geometric(x.zexp, h * x.coefficient(h, q), w, T, 1, (h - 1) / h)
            else:
                y = x.inverse()
                f = graded_geometric(y.zexp, y.coefficient(h, q) / h, w, T, 1, 1 - h) * (1 / h)
            s = s * f
        out = out + s
    return out * (h ** expr.prefactor_h)


@dataclass
class ChamberSolution:
    chamber: Chamber
    analytic: GradedSeries
    p: int
    negative_boxes: list


def _qbinomial_series(exp, x, w, T, ctx):
    """sum_d (hbar)_d/(q)_d (x z^exp)^d."""
    g = _dot(exp, w)
    terms = {}
    coef = Fraction(1)
    for d in range(T // g + 1):
        terms[tuple(d * e for e in exp)] = coef * Fraction(x) ** d
        coef *= (1 - ctx.hbar * ctx.q ** d) / (1 - ctx.q ** (d + 1))
    return GradedSeries(w, T, terms)


def chamber_vertex(lam, C, T, ctx=None):
    """Analytic part of the solution around 0_C: boxes with positive sign
    contribute prod_{i>=0} (1 - hbar z q^i)/(1 - z q^i), the others
    prod_{i>=1} (1 - z^{-1} q^i)/(1 - z^{-1} hbar^{-1} q^i)."""
    ctx = default_context() if ctx is None else ctx
    w = _weights(C)
    s = GradedSeries.constant(w, T, 1)
    for b in lam.boxes():
        m = z_box(lam, b)
        if C.signs_box[b] > 0:
            s = s * _qbinomial_series(m.zexp, m.coefficient(ctx.hbar, ctx.q), w, T, ctx)
        else:
            y = m.inverse()
            s = s * _qbinomial_series(y.zexp, y.coefficient(ctx.hbar, ctx.q) * ctx.q / ctx.hbar,
                                      w, T, ctx)
    return ChamberSolution(C, s, C.p, C.negative_boxes())


def chamber_point(lam, C, rng, t=Fraction(1, 50), spread=10):
    """A rational point near 0_C: z_i = t^{theta_i} (1 + e_i), |e_i| <= 1/spread."""
    pts = []
    for th in C.theta:
        th = Fraction(th)
        assert th.denominator == 1
        e = Fraction(rng.randint(-100, 100), 100 * spread)
        pts.append(t ** int(th) * (1 + e))
    return pts
