"""
Vertex functions of the quiver varieties X_lambda: product formula,
fixed-point (localization) sum, redundant flag vertex, Macdonald
operators, descendant and capped vertex functions, gluing matrix.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .partitions import (Partition, column_profile, box_stats, slice_boxes,
                         z_box, zeta_box_ratio, p_box, shift_vector)
from .qseries import (TruncatedSeries, PochhammerValue, PoleError, pochhammer,
                      qpochhammer, box_factor, ratio_factor, default_context,
                      frac_str)


def _ctx(ctx):
    return default_context() if ctx is None else ctx


def beta(n):
    return -n if n < 0 else 0


def nvars(lam):
    return column_profile(lam).nvars


# ----------------------------------------------------------------------
# product formula

def vertex_product(lam, D, ctx=None):
    """prod over boxes of prod_{i>=0} (1 - hbar z_b q^i)/(1 - z_b q^i)."""
    ctx = _ctx(ctx)
    r = TruncatedSeries.one(nvars(lam), D)
    for b in lam.boxes():
        r = r * box_factor(z_box(lam, b), D, ctx)
    return r


def box_qde_defect(lam, b, D, ctx=None):
    """F(q t)(1 - hbar s t) - F(t)(1 - s t), where F(t) is the factor of
    box b written in an independent variable t with z_b = s t.  Vanishes
    identically."""
    ctx = _ctx(ctx)
    s = z_box(lam, b).coefficient(ctx.hbar, ctx.q)
    terms = {}
    coef = Fraction(1)
    for d in range(D + 1):
        terms[(d,)] = coef * s ** d
        coef *= (1 - ctx.hbar * ctx.q ** d) / (1 - ctx.q ** (d + 1))
    F = TruncatedSeries(1, D, terms)
    t = TruncatedSeries(1, D, {(1,): s})
    return F.q_shift((1,), ctx) * (1 - t.scale(ctx.hbar)) - F * (1 - t)


# ----------------------------------------------------------------------
# fixed-point sum

# below this many degree tuples the sum runs in-process
PARALLEL_MIN_TUPLES = 2000

def _compositions(total, k):
    if k == 0:
        if total == 0:
            yield ()
        return
    for t in range(total, -1, -1):
        for rest in _compositions(total - t, k - 1):
            yield (t,) + rest


def _degree_tuples(k, D):
    for tot in range(D + 1):
        for ds in _compositions(tot, k):
            yield ds


def _loc_term(prof, idx, ds, ctx):
    """The fixed-point term for degrees d_{i,j} as a PochhammerValue."""
    d = dict(zip(idx, ds))
    v = prof.v
    acc = PochhammerValue()

    def P(xh, xq, dd, sgn):
        nonlocal acc
        p = pochhammer(xh, xq, dd, ctx)
        acc = acc * p if sgn > 0 else acc / p

    for j in range(1, v(0) + 1):
        P(j, 0, d[0, j], 1)
        P(j - 1, 1, d[0, j], -1)
    for i in range(prof.lo, prof.hi):
        for j in range(1, v(i) + 1):
            for k in range(1, v(i + 1) + 1):
                dd = d[i + 1, k] - d[i, j]
                if i < 0:
                    P(k - j, 0, dd, 1)
                    P(k - j - 1, 1, dd, -1)
                else:
                    P(k - j + 1, 0, dd, 1)
                    P(k - j, 1, dd, -1)
    for i in prof.contents():
        for j in range(1, v(i) + 1):
            for k in range(1, v(i) + 1):
                if k != j:
                    dd = d[i, k] - d[i, j]
                    P(k - j, 1, dd, 1)
                    P(k - j + 1, 0, dd, -1)
    return acc, d


def _loc_block(args):
    parts, D, q, hbar, insertion, block = args
    from .qseries import SpecializationContext
    lam = Partition(parts)
    ctx = SpecializationContext(q, hbar)
    return _loc_sum(lam, D, ctx, insertion, block)


def _loc_sum(lam, D, ctx, insertion, tuples):
    prof = column_profile(lam)
    idx = [(i, j) for i in prof.contents() for j in range(1, prof.v(i) + 1)]
    out = {}
    for ds in tuples:
        acc, d = _loc_term(prof, idx, ds, ctx)
        if acc.is_zero:
            continue
        if acc.is_pole:
            raise PoleError("pole in fixed-point term %r" % (ds,))
        val = acc.value
        if insertion is not None:
            val *= _insertion_weight(insertion, d, prof, ctx)
        e = tuple(sum(d[i, j] for j in range(1, prof.v(i) + 1)) for i in prof.contents())
        out[e] = out.get(e, 0) + val
    return out


def vertex_localization(lam, D, ctx=None, insertion=None, workers=None):
    """The fixed-point sum over degrees d_{i,j} >= 0, 1 <= j <= v_i.

    Terms whose Pochhammer product contains a trivial zero factor are
    dropped; these are exactly the non-interlacing degree tuples.
    `insertion` is a DescendantPolynomial (all nodes >= 0) whose value at
    the fixed point weights each term.
    """
    ctx = _ctx(ctx)
    prof = column_profile(lam)
    k = sum(prof.counts)
    tuples = list(_degree_tuples(k, D))
    if workers is None:
        workers = thread_count()
    if workers > 1 and len(tuples) > PARALLEL_MIN_TUPLES:
        chunks = [tuples[i::workers] for i in range(workers)]
        args = [(lam.parts, D, ctx.q, ctx.hbar, insertion, c) for c in chunks]
        out = {}
        with ProcessPoolExecutor(workers) as ex:
            for part in ex.map(_loc_block, args):
                for e, c in part.items():
                    out[e] = out.get(e, 0) + c
    else:
        out = _loc_sum(lam, D, ctx, insertion, tuples)
    return TruncatedSeries(prof.nvars, D, out)


def thread_count():
    try:
        return max(1, int(os.environ.get("QUIVER_VERTEX_THREADS", "1")))
    except ValueError:
        return 1


def elementary(xs, r):
    tot = 0
    for I in combinations(xs, r):
        p = 1
        for x in I:
            p = p * x
        tot = tot + p
    return tot


def fixed_point_weights(n, d, prof, ctx):
    """Weights hbar^{j-1} q^{d_{n,j}} of V_n at the fixed point of degree d."""
    return [ctx.hbar ** (j - 1) * ctx.q ** d[n, j] for j in range(1, prof.v(n) + 1)]


def _insertion_weight(tau, d, prof, ctx):
    tot = Fraction(0)
    for mono, c in tau.terms.items():
        w = Fraction(c)
        for n, r in mono:
            w *= elementary(fixed_point_weights(n, d, prof, ctx), r)
        tot += w
    return tot


# ----------------------------------------------------------------------
# descendant polynomials

class DescendantPolynomial(object):
    """Integer polynomial in generators g_{n,r} standing for the exterior
    powers of the tautological bundles V_n.  A monomial is a sorted tuple
    of (n, r) pairs."""

    def __init__(self, terms=None):
        self.terms = {tuple(sorted(m)): int(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def one(cls):
        return cls({(): 1})

    @classmethod
    def gen(cls, n, r):
        return cls({((n, r),): 1})

    @classmethod
    def parse(cls, text):
        """Parse e.g. "g0,1*g1,1 + 2*g0,2" or "1"."""
        out = cls()
        for chunk in text.replace(" ", "").split("+"):
            if not chunk:
                continue
            c = 1
            mono = []
            for f in chunk.split("*"):
                if f.startswith("g"):
                    n, r = f[1:].split(",")
                    mono.append((int(n), int(r)))
                else:
                    c *= int(f)
            out = out + cls({tuple(mono): c})
        return out

    def __add__(self, other):
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return DescendantPolynomial(t)

    def __mul__(self, other):
        if isinstance(other, int):
            return DescendantPolynomial({m: c * other for m, c in self.terms.items()})
        t = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                t[m] = t.get(m, 0) + c1 * c2
        return DescendantPolynomial(t)

    __rmul__ = __mul__

    def __repr__(self):
        return "DescendantPolynomial(%r)" % (self.terms,)

    def check(self, lam):
        prof = column_profile(lam)
        for m in self.terms:
            for n, r in m:
                if not (prof.lo <= n <= prof.hi and 1 <= r <= prof.v(n)):
                    raise ValueError("generator g%d,%d not defined for %s" % (n, r, lam))


# ----------------------------------------------------------------------
# Macdonald operators

def pair_factor(lam, b, b2, D, ctx):
    """(hbar zeta_{b2} - zeta_b)/(zeta_{b2} - zeta_b) expanded in the
    positive direction: with u = zeta_b/zeta_{b2} this is (hbar - u)/(1 - u),
    rewritten in 1/u when u has negative degree."""
    u = zeta_box_ratio(lam, b, b2)
    if u.degree == 0:
        raise AssertionError("degenerate zeta ratio for %r, %r" % (b, b2))
    if u.degree > 0:
        return ratio_factor(u, D, ctx, 1 / ctx.hbar, 1).scale(ctx.hbar)
    return ratio_factor(u.inverse(), D, ctx, ctx.hbar, 1)


def _content_boxes(lam, n, r):
    prof = column_profile(lam)
    if not prof.lo <= n <= prof.hi:
        raise ValueError("node %d outside the content range of %s" % (n, lam))
    if not 1 <= r <= prof.v(n):
        raise ValueError("rank %d out of range 1..%d" % (r, prof.v(n)))
    return lam.boxes_of_content(n)


def macdonald_apply(lam, n, r, f, ctx=None, shift=p_box, with_beta=True):
    """T^{n,r} f = hbar^{r(r-1)/2 + beta(n)} sum_I prod coeff * prod_{b in I} p_b f."""
    ctx = _ctx(ctx)
    C = _content_boxes(lam, n, r)
    D = f.cap
    out = TruncatedSeries(f.nvars, D)
    for I in combinations(C, r):
        e = [0] * f.nvars
        for b in I:
            e = [x + y for x, y in zip(e, shift_vector(lam, shift(lam, b)))]
        term = f.q_shift(e, ctx)
        for b in I:
            for b2 in C:
                if b2 not in I:
                    term = term * pair_factor(lam, b, b2, D, ctx)
        out = out + term
    pw = r * (r - 1) // 2 + (beta(n) if with_beta else 0)
    return out.scale(ctx.hbar ** pw)


def descendant_vertex(lam, tau, D, ctx=None, V=None):
    """T(tau) applied to the vertex function.

    Within a monomial the operators are composed node by node, the lowest
    content acting first.
    """
    ctx = _ctx(ctx)
    tau.check(lam)
    if V is None:
        V = vertex_product(lam, D, ctx)
    out = TruncatedSeries(V.nvars, D)
    for mono, c in tau.terms.items():
        f = V
        for n, r in sorted(mono):
            f = macdonald_apply(lam, n, r, f, ctx)
        out = out + f.scale(c)
    return out


def descendant_localization(lam, tau, D, ctx=None):
    """Fixed-point sum with tau inserted; nodes must be >= 0."""
    tau.check(lam)
    for m in tau.terms:
        for n, r in m:
            if n < 0:
                raise ValueError("fixed-point insertion is implemented for nodes >= 0")
    return vertex_localization(lam, D, ctx, insertion=tau)


# ----------------------------------------------------------------------
# capped vertex

def slice_factor_value(x, hbar):
    return (1 - x) / (1 - hbar * x)


def pair_factor_value(u, hbar):
    return (hbar - u) / (1 - u)


@dataclass
class CappedTerm:
    subset: tuple
    pairs: tuple      # (b, b2): factor (hbar zeta_b2 - zeta_b)/(zeta_b2 - zeta_b)
    slices: tuple     # b2: factor (1 - z_b2)/(1 - hbar z_b2)


@dataclass
class CappedVertexExpression:
    lam: Partition
    n: int
    r: int
    prefactor_h: int
    terms: list

    def pair_monomial(self, b, b2):
        return zeta_box_ratio(self.lam, b, b2)

    def slice_monomial(self, b2):
        return z_box(self.lam, b2)

    def evaluate(self, zvals, ctx=None, with_prefactor=True):
        """Exact value at z_i = zvals[i - lo]."""
        ctx = _ctx(ctx)
        h = ctx.hbar
        tot = Fraction(0)
        for t in self.terms:
            val = Fraction(1)
            for b, b2 in t.pairs:
                u = self.pair_monomial(b, b2).evaluate(zvals, h, ctx.q)
                if u == 1:
                    raise PoleError("pair factor %r/%r has a pole" % (tuple(b), tuple(b2)))
                val *= pair_factor_value(u, h)
            for b2 in t.slices:
                x = self.slice_monomial(b2).evaluate(zvals, h, ctx.q)
                if h * x == 1:
                    raise PoleError("slice factor at %r has a pole" % (tuple(b2),))
                val *= slice_factor_value(x, h)
            tot += val
        if with_prefactor:
            tot *= h ** self.prefactor_h
        return tot

    def expand(self, D, ctx=None, with_prefactor=True):
        """Expansion around z = 0 in the positive chamber."""
        ctx = _ctx(ctx)
        n = nvars(self.lam)
        out = TruncatedSeries(n, D)
        for t in self.terms:
            s = TruncatedSeries.one(n, D)
            for b, b2 in t.pairs:
                s = s * pair_factor(self.lam, b, b2, D, ctx)
            for b2 in t.slices:
                s = s * ratio_factor(self.slice_monomial(b2), D, ctx, 1, ctx.hbar)
            out = out + s
        if with_prefactor:
            out = out.scale(ctx.hbar ** self.prefactor_h)
        return out

    def to_json(self):
        def bx(b):
            c, h, _, _ = box_stats(self.lam, b)
            return "%d:%d" % (c, h)
        return {
            "prefactor": {"h": self.prefactor_h},
            "terms": [{"subset": [bx(b) for b in t.subset],
                       "coeff_factors": [[bx(b), bx(b2)] for b, b2 in t.pairs],
                       "slice_factors": [bx(b) for b in t.slices]}
                      for t in self.terms],
        }


def capped_expression(lam, n, r):
    C = _content_boxes(lam, n, r)
    terms = []
    for I in combinations(C, r):
        pairs = tuple((b, b2) for b in I for b2 in C if b2 not in I)
        slices = tuple(b2 for b in I for b2 in slice_boxes(lam, b))
        terms.append(CappedTerm(tuple(I), pairs, slices))
    return CappedVertexExpression(lam, n, r, r * (r - 1) // 2 + beta(n), terms)


def capped_expand(lam, n, r, D, ctx=None):
    return capped_expression(lam, n, r).expand(D, ctx)


def capped_evaluate(lam, n, r, zvals, ctx=None):
    return capped_expression(lam, n, r).evaluate(zvals, ctx)


# ----------------------------------------------------------------------
# gluing matrix

def gluing(lam, D, ctx=None):
    """prod over boxes of (1 - z_b)/(1 - hbar z_b)."""
    ctx = _ctx(ctx)
    out = TruncatedSeries.one(nvars(lam), D)
    for b in lam.boxes():
        out = out * ratio_factor(z_box(lam, b), D, ctx, 1, ctx.hbar)
    return out


def gluing_eval(lam, zvals, ctx=None):
    ctx = _ctx(ctx)
    val = Fraction(1)
    for b in lam.boxes():
        x = z_box(lam, b).evaluate(zvals, ctx.hbar, ctx.q)
        if ctx.hbar * x == 1:
            raise PoleError("gluing factor at box %r has a pole" % (tuple(b),))
        val *= slice_factor_value(x, ctx.hbar)
    return val


# ----------------------------------------------------------------------
# redundant flag varieties

def flag_dimensions(lam, n):
    """(framing, dims): framing v_n at the square node, then v_{n+1}, ..."""
    prof = column_profile(lam)
    return prof.v(n), [prof.v(i) for i in range(n + 1, prof.hi + 1)]


def _gpoch_ratio(acc, x, d, q, num):
    p = qpochhammer(x, d, q)
    return acc * p if num else acc / p


def flag_vertex(lam, n, D, avals, ctx=None):
    """Vertex function of the flag variety obtained by keeping the nodes
    to the right of n and framing them by v_n, with equivariant
    parameters a_1..a_{v_n}.  Series in z_{n+1}, ..., z_hi."""
    ctx = _ctx(ctx)
    q, h = ctx.q, ctx.hbar
    prof = column_profile(lam)
    framing, dims = flag_dimensions(lam, n)
    a = [Fraction(x) for x in avals]
    if len(a) != framing:
        raise ValueError("need %d equivariant parameters, got %d" % (framing, len(a)))
    nodes = list(range(n + 1, prof.hi + 1))
    v = prof.v
    idx = [(i, j) for i in nodes for j in range(1, v(i) + 1)]
    out = {}
    for fs in _degree_tuples(len(idx), D):
        f = dict(zip(idx, fs))
        acc = PochhammerValue()
        if nodes:
            i = nodes[0]
            for j in range(1, framing + 1):
                for k in range(1, v(i) + 1):
                    x = a[k - 1] / a[j - 1]
                    acc = _gpoch_ratio(acc, h * x, f[i, k], q, True)
                    acc = _gpoch_ratio(acc, q * x, f[i, k], q, False)
        for i in nodes[:-1]:
            for j in range(1, v(i) + 1):
                for k in range(1, v(i + 1) + 1):
                    x = a[k - 1] / a[j - 1]
                    dd = f[i + 1, k] - f[i, j]
                    acc = _gpoch_ratio(acc, h * x, dd, q, True)
                    acc = _gpoch_ratio(acc, q * x, dd, q, False)
        for i in nodes:
            for j in range(1, v(i) + 1):
                for k in range(1, v(i) + 1):
                    x = a[k - 1] / a[j - 1]
                    dd = f[i, k] - f[i, j]
                    acc = _gpoch_ratio(acc, q * x, dd, q, True)
                    acc = _gpoch_ratio(acc, h * x, dd, q, False)
        if acc.is_zero:
            continue
        if acc.is_pole:
            raise PoleError("equivariant parameters collide at degree %r" % (fs,))
        e = tuple(sum(f[i, j] for j in range(1, v(i) + 1)) for i in nodes)
        out[e] = out.get(e, 0) + acc.value
    return TruncatedSeries(len(nodes), D, out)


def flag_apply(lam, n, r, f, avals, ctx=None):
    """The operator T_r on series in z_{n+1}..z_hi, with each shift p_b
    rescaled by a_h / hbar^{h-1}, h the height of b."""
    ctx = _ctx(ctx)
    if n < 0:
        raise ValueError("flag operators are implemented for nodes >= 0")
    prof = column_profile(lam)
    C = _content_boxes(lam, n, r)
    off = n + 1 - prof.lo
    full = TruncatedSeries(prof.nvars, f.cap,
                           {(0,) * off + e: c for e, c in f.terms.items()})
    out = TruncatedSeries(prof.nvars, f.cap)
    for I in combinations(C, r):
        e = [0] * prof.nvars
        pref = Fraction(1)
        for b in I:
            e = [x + y for x, y in zip(e, shift_vector(lam, p_box(lam, b)))]
            hb = box_stats(lam, b)[1]
            pref *= Fraction(avals[hb - 1]) / ctx.hbar ** (hb - 1)
        term = full.q_shift(e, ctx).scale(pref)
        for b in I:
            for b2 in C:
                if b2 not in I:
                    term = term * pair_factor(lam, b, b2, f.cap, ctx)
        out = out + term
    out = out.scale(ctx.hbar ** (r * (r - 1) // 2))
    res = {}
    for e, c in out.terms.items():
        if any(e[:off]):
            raise AssertionError("flag operator left the flag variables")
        res[e[off:]] = c
    return TruncatedSeries(f.nvars, f.cap, res)


def series_json(s):
    return s.to_json()


__all__ = [
    "beta", "vertex_product", "vertex_localization", "box_qde_defect",
    "DescendantPolynomial", "macdonald_apply", "descendant_vertex",
    "descendant_localization", "pair_factor", "capped_expression",
    "capped_expand", "capped_evaluate", "CappedVertexExpression", "gluing",
    "gluing_eval", "flag_vertex", "flag_apply", "flag_dimensions",
    "elementary", "fixed_point_weights", "frac_str",
]
