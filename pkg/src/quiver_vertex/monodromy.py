"""
Floating-point checks of the q-difference equation, its chamber
solutions and their theta-function monodromy.

Branch policy: every fractional power uses the principal logarithm.  The
multivalued factor z^{ln(hbar_C)/ln(q)} of a chamber solution is realized
as prod over negative boxes of exp(-(Log hbar / Log q) Log z_b), which
picks up hbar^{-1} per negative box under z_b -> q z_b, as required for
the solution to satisfy the same equation as the vertex function.
"""

import cmath
import math
from dataclasses import dataclass

from .partitions import z_box


class NonConvergence(RuntimeError):
    pass


@dataclass
class NumericContext:
    q: complex = 0.3
    hbar: complex = 0.55
    tol: float = 1e-8
    N: int = None        # None: adaptive
    max_N: int = 4000

    def __post_init__(self):
        self.q = complex(self.q)
        self.hbar = complex(self.hbar)
        if not 0 < abs(self.q) <= 0.9:
            raise ValueError("need 0 < |q| <= 0.9")
        if self.hbar == 0:
            raise ValueError("hbar must be nonzero")

    def start_N(self):
        """Smallest N with |q|^N < tol^2."""
        if self.N is not None:
            return self.N
        return max(8, int(math.ceil(2 * math.log(self.tol) / math.log(abs(self.q)))) + 1)


def adaptive(fn, ctx):
    """Evaluate fn(N), growing N until two successive values agree to tol/10."""
    if ctx.N is not None:
        return fn(ctx.N), ctx.N
    N = ctx.start_N()
    prev = fn(N)
    while True:
        N2 = N + max(8, N // 2)
        if N2 > ctx.max_N:
            raise NonConvergence("no convergence up to N = %d" % ctx.max_N)
        cur = fn(N2)
        if abs(cur - prev) <= ctx.tol / 10 * max(1.0, abs(cur)):
            return cur, N2
        N, prev = N2, cur


def phi(x, q, N):
    """prod_{i=0}^{N-1} (1 - x q^i)."""
    p = 1 + 0j
    qi = 1 + 0j
    for _ in range(N):
        p *= 1 - x * qi
        qi *= q
    return p


def theta(z, ctx, N=None):
    """(z^{1/2} - z^{-1/2}) prod_{i=1}^{N} (1 - z q^i)(1 - q^i / z)."""
    z = complex(z)
    if z == 0:
        raise ZeroDivisionError("theta is undefined at 0")
    if N is None:
        N = ctx.start_N()
    s = cmath.sqrt(z)
    p = s - 1 / s
    qi = ctx.q
    for _ in range(N):
        p *= (1 - z * qi) * (1 - qi / z)
        qi *= ctx.q
    return p


def box_values(lam, zvals, ctx):
    out = {}
    for b in lam.boxes():
        out[b] = z_box(lam, b).evaluate([complex(z) for z in zvals], ctx.hbar, ctx.q)
    return out


def positive_factor(x, ctx, N):
    return phi(ctx.hbar * x, ctx.q, N) / phi(x, ctx.q, N)


def negative_factor(x, ctx, N):
    return phi(ctx.q / x, ctx.q, N) / phi(ctx.q / (ctx.hbar * x), ctx.q, N)


def _exponent(ctx):
    return cmath.log(ctx.hbar) / cmath.log(ctx.q)


def prefactor(lam, C, zvals, ctx):
    c = _exponent(ctx)
    zb = box_values(lam, zvals, ctx)
    p = 1 + 0j
    for b in C.negative_boxes():
        p *= cmath.exp(-c * cmath.log(zb[b]))
    return p


def analytic_part(lam, C, zvals, ctx, N):
    zb = box_values(lam, zvals, ctx)
    p = 1 + 0j
    for b, x in zb.items():
        p *= positive_factor(x, ctx, N) if C.signs_box[b] > 0 else negative_factor(x, ctx, N)
    return p


def psi(lam, C, zvals, ctx, N):
    return prefactor(lam, C, zvals, ctx) * analytic_part(lam, C, zvals, ctx, N)


def _theta_block(lam, C, zb, ctx, N):
    p = 1 + 0j
    for b, x in zb.items():
        p *= theta(x, ctx, N) if C.signs_box[b] < 0 else theta(x * ctx.hbar, ctx, N)
    return p


def monodromy_ratio(lam, C1, C2, zvals, ctx):
    """Psi_{C1} / Psi_{C2}."""
    return adaptive(lambda N: psi(lam, C1, zvals, ctx, N) / psi(lam, C2, zvals, ctx, N), ctx)[0]


def monodromy_formula(lam, C1, C2, zvals, ctx):
    """(-hbar^{1/2})^{p1-p2} z^{...} prod theta(z_b) prod theta(z_b hbar) / (same for C2)."""
    zb = box_values(lam, zvals, ctx)
    pre = (-cmath.sqrt(ctx.hbar)) ** (C1.p - C2.p) \
        * prefactor(lam, C1, zvals, ctx) / prefactor(lam, C2, zvals, ctx)
    return adaptive(lambda N: pre * _theta_block(lam, C1, zb, ctx, N)
                    / _theta_block(lam, C2, zb, ctx, N), ctx)[0]


def analytic_monodromy(lam, C1, C2, zvals, ctx):
    """Ratio of analytic parts F_{C1} / F_{C2}."""
    return adaptive(lambda N: analytic_part(lam, C1, zvals, ctx, N)
                    / analytic_part(lam, C2, zvals, ctx, N), ctx)[0]


def analytic_monodromy_formula(lam, C1, C2, zvals, ctx):
    zb = box_values(lam, zvals, ctx)
    pre = (-cmath.sqrt(ctx.hbar)) ** (C1.p - C2.p)
    return adaptive(lambda N: pre * _theta_block(lam, C1, zb, ctx, N)
                    / _theta_block(lam, C2, zb, ctx, N), ctx)[0]


def stab(lam, C, zvals, ctx, N):
    """prod_{negative} theta(z_b) prod_{positive} theta(1/(z_b hbar))."""
    zb = box_values(lam, zvals, ctx)
    p = 1 + 0j
    for b, x in zb.items():
        p *= theta(x, ctx, N) if C.signs_box[b] < 0 else theta(1 / (x * ctx.hbar), ctx, N)
    return p


def stab_ratio(lam, C1, C2, zvals, ctx):
    """Stab_{C2}^{-1} Stab_{C1}."""
    return adaptive(lambda N: stab(lam, C1, zvals, ctx, N) / stab(lam, C2, zvals, ctx, N), ctx)[0]


def stab_arguments(lam, C):
    """Theta arguments of Stab_C as (box, kind): kind "z" for z_b and
    "dual" for 1/(z_b hbar)."""
    return [(b, "z" if C.signs_box[b] < 0 else "dual") for b in lam.boxes()]


def tangent_weights(lam):
    """The tangent character at the fixed point of the dual variety:
    z_b and 1/(z_b hbar) for every box."""
    return [(b, k) for b in lam.boxes() for k in ("z", "dual")]


def qde_residual(lam, b, zvals, ctx, C=None):
    """|F(q x) - (1 - x)/(1 - hbar x) F(x)| / |rhs| for the factor F of box b
    in the solution attached to chamber C (default: the vertex function),
    x = z_b; the multivalued prefactor is included for negative boxes."""
    x = box_values(lam, zvals, ctx)[b]
    if x == 0:
        return 0.0
    neg = C is not None and C.signs_box[b] < 0
    c = _exponent(ctx)

    def F(y, N):
        if not neg:
            return positive_factor(y, ctx, N)
        return cmath.exp(-c * cmath.log(y)) * negative_factor(y, ctx, N)

    def res(N):
        rhs = (1 - x) / (1 - ctx.hbar * x) * F(x, N)
        if abs(rhs) < 1e-300:
            raise ZeroDivisionError("right-hand side vanishes")
        return abs(F(ctx.q * x, N) - rhs) / abs(rhs)

    if ctx.N is not None:
        return res(ctx.N)
    return adaptive(res, ctx)[0]


def lattice_shift(zvals, i, q):
    z = list(zvals)
    z[i] = z[i] * q
    return z


def periodicity_defect(lam, C1, C2, zvals, i, ctx):
    """|R(z with z_i -> q z_i) / R(z) - 1|."""
    r0 = monodromy_ratio(lam, C1, C2, zvals, ctx)
    r1 = monodromy_ratio(lam, C1, C2, lattice_shift(zvals, i, ctx.q), ctx)
    return abs(r1 / r0 - 1)


def cocycle_defect(lam, C1, C2, C3, zvals, ctx):
    a = monodromy_ratio(lam, C1, C2, zvals, ctx)
    b = monodromy_ratio(lam, C2, C3, zvals, ctx)
    c = monodromy_ratio(lam, C1, C3, zvals, ctx)
    return abs(a * b - c) / max(1.0, abs(c))


def rel_diff(a, b):
    return abs(a - b) / max(1.0, abs(b))


def sample_points(lam, rng, count, nvars, ctx, rmin=0.6, rmax=1.4, margin=1e-3):
    """Seeded complex sample points kept away from theta zeros."""
    out = []
    while len(out) < count:
        z = [cmath.rect(rng.uniform(rmin, rmax), rng.uniform(-1.0, 1.0)) for _ in range(nvars)]
        zb = box_values(lam, z, ctx)
        ok = True
        for x in zb.values():
            for y in (x, x * ctx.hbar):
                k = round(math.log(abs(y)) / math.log(abs(ctx.q)))
                if abs(y - ctx.q ** k) < margin:
                    ok = False
        if ok:
            out.append(z)
    return out


def format_complex(z):
    z = complex(z)
    return "%.17g%+.17gi" % (z.real, z.imag)


def parse_complex(text):
    t = text.strip().replace(" ", "").replace("i", "j")
    return complex(t)
