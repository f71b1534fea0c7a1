"""
Exact truncated power series in the Kahler variables, with q and hbar
specialized to rationals, and q-Pochhammer symbols.
"""

from fractions import Fraction
from itertools import product


class GuardError(ValueError):
    pass


class PoleError(ZeroDivisionError):
    pass


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def frac_str(x):
    x = as_fraction(x)
    return "%d/%d" % (x.numerator, x.denominator)


class SpecializationContext(object):
    """A point (q, hbar) that is generic enough for every formula here.

    The guard rejects hbar^a q^b = 1 for |a|, |b| <= bound unless a = b = 0,
    so the only vanishing factor 1 - hbar^a q^b that can show up is the
    trivial one.
    """

    def __init__(self, q=Fraction(3, 7), hbar=Fraction(5, 11), bound=24):
        self.q = as_fraction(q)
        self.hbar = as_fraction(hbar)
        self.bound = bound
        for x, name in ((self.q, "q"), (self.hbar, "hbar")):
            if x in (0, 1, -1):
                raise GuardError("%s must avoid 0 and +-1" % name)
        hp = {a: self.hbar ** a for a in range(-bound, bound + 1)}
        qp = {b: self.q ** b for b in range(-bound, bound + 1)}
        for a, b in product(hp, qp):
            if (a, b) != (0, 0) and hp[a] * qp[b] == 1:
                raise GuardError("hbar^%d q^%d = 1" % (a, b))

    def __repr__(self):
        return "SpecializationContext(q=%s, hbar=%s)" % (self.q, self.hbar)

    def monomial(self, xh, xq):
        return self.hbar ** xh * self.q ** xq

    def hq(self):
        return self.hbar / self.q


DEFAULT_CONTEXT = None


def default_context():
    global DEFAULT_CONTEXT
    if DEFAULT_CONTEXT is None:
        DEFAULT_CONTEXT = SpecializationContext()
    return DEFAULT_CONTEXT


# ----------------------------------------------------------------------
# q-Pochhammer symbols

class PochhammerValue(object):
    """value * 0^order.

    A product of Pochhammer symbols can contain trivial factors (1 - 1)
    in numerator (order > 0) or denominator (order < 0) positions; keeping
    them apart from the nonzero part lets products cancel them exactly.
    """
    __slots__ = ("value", "order")

    def __init__(self, value=Fraction(1), order=0):
        self.value = value
        self.order = order

    def __mul__(self, other):
        return PochhammerValue(self.value * other.value, self.order + other.order)

    def __truediv__(self, other):
        return PochhammerValue(self.value / other.value, self.order - other.order)

    @property
    def is_zero(self):
        return self.order > 0

    @property
    def is_pole(self):
        return self.order < 0

    def resolve(self):
        if self.order > 0:
            return Fraction(0)
        if self.order < 0:
            raise PoleError("vanishing factor in a denominator")
        return self.value

    def __repr__(self):
        if self.order:
            return "PochhammerValue(%s, order=%d)" % (self.value, self.order)
        return "PochhammerValue(%s)" % self.value


ZERO = PochhammerValue(Fraction(1), 1)


def qpochhammer(x, d, q):
    """(x)_d = prod_{k<d} (1 - x q^k), extended to d < 0 by
    (x)_d = 1 / prod_{k=1}^{-d} (1 - x q^{-k})."""
    val = Fraction(1)
    order = 0
    if d >= 0:
        for k in range(d):
            t = 1 - x * q ** k
            if t == 0:
                order += 1
            else:
                val *= t
    else:
        for k in range(1, -d + 1):
            t = 1 - x * q ** (-k)
            if t == 0:
                order -= 1
            else:
                val /= t
    return PochhammerValue(val, order)


def pochhammer(x_h, x_q, d, ctx):
    """(x)_d at x = hbar^x_h q^x_q."""
    return qpochhammer(ctx.monomial(x_h, x_q), d, ctx.q)


# ----------------------------------------------------------------------
# truncated series

def grlex_key(e):
    return (sum(e), tuple(-x for x in e))


class TruncatedSeries(object):
    """Power series in n variables, exact rational coefficients, total
    degree <= cap.  Variable k stands for z_{lo+k}."""

    __slots__ = ("nvars", "cap", "terms")

    def __init__(self, nvars, cap, terms=None):
        if cap < 0:
            raise ValueError("negative degree cap")
        self.nvars = nvars
        self.cap = cap
        t = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != nvars or min(e, default=0) < 0:
                raise ValueError("bad exponent %r" % (e,))
            if sum(e) <= cap and c != 0:
                t[e] = t.get(e, 0) + Fraction(c)
        self.terms = {e: c for e, c in t.items() if c != 0}

    @classmethod
    def _raw(cls, nvars, cap, terms):
        s = cls.__new__(cls)
        s.nvars = nvars
        s.cap = cap
        s.terms = terms
        return s

    @classmethod
    def one(cls, nvars, cap):
        return cls.constant(nvars, cap, 1)

    @classmethod
    def constant(cls, nvars, cap, c):
        c = Fraction(c)
        return cls._raw(nvars, cap, {(0,) * nvars: c} if c else {})

    @classmethod
    def monomial(cls, e, c, cap):
        return cls(len(e), cap, {tuple(e): c})

    def _same(self, other):
        if self.nvars != other.nvars:
            raise ValueError("variable count mismatch: %d vs %d" % (self.nvars, other.nvars))
        if self.cap != other.cap:
            raise ValueError("degree cap mismatch: %d vs %d" % (self.cap, other.cap))

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.nvars == other.nvars and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return "TruncatedSeries(%d, %d, %r)" % (self.nvars, self.cap, self.items())

    def items(self):
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]))

    def coeff(self, e):
        return self.terms.get(tuple(e), Fraction(0))

    def constant_term(self):
        return self.coeff((0,) * self.nvars)

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            other = TruncatedSeries.constant(self.nvars, self.cap, other)
        self._same(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return TruncatedSeries._raw(self.nvars, self.cap, t)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self.nvars, self.cap, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, a):
        a = Fraction(a)
        if a == 0:
            return TruncatedSeries._raw(self.nvars, self.cap, {})
        return TruncatedSeries._raw(self.nvars, self.cap, {e: c * a for e, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        self._same(other)
        cap = self.cap
        t = {}
        b_items = [(e, sum(e), c) for e, c in other.terms.items()]
        for ea, ca in self.terms.items():
            da = sum(ea)
            for eb, db, cb in b_items:
                if da + db > cap:
                    continue
                e = tuple(x + y for x, y in zip(ea, eb))
                t[e] = t.get(e, 0) + ca * cb
        return TruncatedSeries._raw(self.nvars, cap, {e: c for e, c in t.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        r = TruncatedSeries.one(self.nvars, self.cap)
        for _ in range(k):
            r = r * self
        return r

    def invert(self):
        c0 = self.constant_term()
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        u = self.scale(1 / c0)
        t = u - 1            # u = 1 + t, t has no constant term
        r = TruncatedSeries.one(self.nvars, self.cap)
        pw = TruncatedSeries.one(self.nvars, self.cap)
        for _ in range(self.cap):
            pw = pw * (-t)
            if pw.is_zero():
                break
            r = r + pw
        return r.scale(1 / c0)

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.invert()
        return self.scale(1 / Fraction(other))

    def q_shift(self, e, ctx):
        """z_i -> q^{e_i} z_i."""
        q = ctx.q
        return TruncatedSeries._raw(
            self.nvars, self.cap,
            {d: c * q ** sum(x * y for x, y in zip(e, d)) for d, c in self.terms.items()})

    def truncate(self, cap):
        return TruncatedSeries(self.nvars, min(cap, self.cap), self.terms)

    def evaluate(self, zvals):
        tot = 0
        for e, c in self.terms.items():
            m = c
            for z, k in zip(zvals, e):
                if k:
                    m = m * z ** k
            tot = tot + m
        return tot

    def to_json(self):
        return [{"exp": list(e), "coeff": frac_str(c)} for e, c in self.items()]


def series_add(a, b):
    return a + b


def series_mul(a, b):
    return a * b


def series_scale(a, c):
    return a.scale(c)


def series_invert(a):
    return a.invert()


def q_shift(a, e, ctx):
    return a.q_shift(e, ctx)


def _mono_scalar(m, ctx):
    c = m.coefficient(ctx.hbar, ctx.q)
    if m.degree <= 0 or min(m.zexp) < 0:
        raise ValueError("monomial must have nonnegative exponents and positive degree")
    return c


def geometric_factor(m, cap, ctx, power=-1, coef=1):
    """(1 - coef * m)^power for power = +1 or -1, m a BoxMonomial."""
    c = _mono_scalar(m, ctx) * Fraction(coef)
    n = len(m.zexp)
    if power == 1:
        return TruncatedSeries(n, cap, {(0,) * n: 1, m.zexp: -c})
    if power != -1:
        raise ValueError("power must be +1 or -1")
    terms = {}
    for d in range(cap // m.degree + 1):
        terms[tuple(d * x for x in m.zexp)] = c ** d
    return TruncatedSeries(n, cap, terms)


def ratio_factor(m, cap, ctx, a, b):
    """(1 - a m)/(1 - b m)."""
    return geometric_factor(m, cap, ctx, 1, a) * geometric_factor(m, cap, ctx, -1, b)


def box_factor(m, cap, ctx):
    """prod_{i>=0} (1 - hbar m q^i)/(1 - m q^i) = sum_d (hbar)_d/(q)_d m^d."""
    c = _mono_scalar(m, ctx)
    n = len(m.zexp)
    terms = {}
    coef = Fraction(1)
    for d in range(cap // m.degree + 1):
        terms[tuple(d * x for x in m.zexp)] = coef * c ** d
        coef *= (1 - ctx.hbar * ctx.q ** d) / (1 - ctx.q ** (d + 1))
    return TruncatedSeries(n, cap, terms)


# ----------------------------------------------------------------------
# series with integer exponents graded by a weight vector

class GradedSeries(object):
    """Laurent-type series sum c_d z^d with <d, w> <= cap for a weight
    vector w; every stored exponent has <d, w> >= 0."""

    __slots__ = ("weights", "cap", "terms")

    def __init__(self, weights, cap, terms=None):
        self.weights = tuple(weights)
        self.cap = cap
        self.terms = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            g = self.grade(e)
            if g < 0:
                raise ValueError("exponent %r has negative grade" % (e,))
            if g <= cap and c:
                self.terms[e] = self.terms.get(e, 0) + Fraction(c)

    def grade(self, e):
        return sum(x * y for x, y in zip(e, self.weights))

    @classmethod
    def constant(cls, weights, cap, c):
        return cls(weights, cap, {(0,) * len(weights): c})

    def __add__(self, other):
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return GradedSeries(self.weights, self.cap, {e: c for e, c in t.items() if c})

    def __mul__(self, other):
        if not isinstance(other, GradedSeries):
            return GradedSeries(self.weights, self.cap,
                                {e: c * Fraction(other) for e, c in self.terms.items()})
        t = {}
        bi = [(e, self.grade(e), c) for e, c in other.terms.items()]
        for ea, ca in self.terms.items():
            ga = self.grade(ea)
            for eb, gb, cb in bi:
                if ga + gb <= self.cap:
                    e = tuple(x + y for x, y in zip(ea, eb))
                    t[e] = t.get(e, 0) + ca * cb
        return GradedSeries(self.weights, self.cap, {e: c for e, c in t.items() if c})

    def constant_term(self):
        return self.terms.get((0,) * len(self.weights), Fraction(0))

    def evaluate(self, zvals):
        tot = 0
        for e, c in self.terms.items():
            m = complex(c) if isinstance(zvals[0], complex) else float(c)
            for z, k in zip(zvals, e):
                if k:
                    m *= z ** k
            tot += m
        return tot

    def items(self):
        return sorted(self.terms.items(), key=lambda t: (self.grade(t[0]), t[0]))


def graded_geometric(m_exp, x, weights, cap, a0=1, a=1):
    """a0 + a * sum_{k>=1} (x z^m_exp)^k, truncated by grade."""
    g = sum(u * w for u, w in zip(m_exp, weights))
    if g <= 0:
        raise ValueError("monomial must have positive grade")
    terms = {(0,) * len(weights): Fraction(a0)}
    for k in range(1, cap // g + 1):
        terms[tuple(k * u for u in m_exp)] = Fraction(a) * Fraction(x) ** k
    return GradedSeries(weights, cap, terms)
