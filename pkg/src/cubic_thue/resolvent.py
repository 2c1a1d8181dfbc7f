"""Resolvent forms and the logarithmic (t, s) coordinates of a point.

Root labelling: with theta_min < theta_mid < theta_max the roots of F(x, 1),
we set (rho, rho', rho'') = (theta_min, theta_max, theta_mid).  Under this
labelling xi_1 = rho + w rho' + w^2 rho'' (scaled to left roots a*theta)
satisfies xi^3 - eta^3 = 3 sqrt(-3D) F with sqrt(-3D) on the positive
imaginary axis, together with xi^3 + eta^3 = G and xi eta = H.

The three resolvent pairs are indexed so that pair k is
(w^(2k) xi, w^k eta).  Then |1 - eta_k/xi_k| = |w^k - eta/xi| and the
index minimising |w^k - eta/xi| is the index with smallest |q_k|.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
from mpmath import mp

from . import numerics as nx
from .errors import (
    NegativeArgument,
    NonPositiveDiscriminant,
    OriginPoint,
    ReducibleForm,
    TieUnresolvable,
)
from .forms import BinaryCubicForm, discriminant, hessian, is_irreducible
from .numerics import DEFAULT_PREC, RootTriple

GUARD_BITS = 32


def tolerance(prec_bits: int):
    """Absolute slack 2^(8 - prec/2) used by every identity and inequality check."""
    return mp.ldexp(mp.mpf(1), 8 - prec_bits // 2)


@dataclass(frozen=True)
class ResolventData:
    form: BinaryCubicForm
    roots: RootTriple
    labeled: tuple  # (rho, rho', rho'') as roots of F(x, 1)
    xi_coeffs: tuple
    eta_coeffs: tuple
    disc: int
    prec_bits: int

    @property
    def work_prec(self) -> int:
        return self.prec_bits + GUARD_BITS

    def xi(self, x, y):
        with mp.workprec(self.work_prec):
            return self.xi_coeffs[0] * x + self.xi_coeffs[1] * y

    def eta(self, x, y):
        with mp.workprec(self.work_prec):
            return self.eta_coeffs[0] * x + self.eta_coeffs[1] * y


@dataclass(frozen=True)
class PointEvaluation:
    point: tuple
    u: tuple
    p: object
    q: object
    t: object
    s: object
    related_index: int
    q_abs: tuple  # |q_k| for the three resolvent pairs
    form_value: int
    hessian_value: int
    prec_bits: int

    @property
    def log_vector(self):
        with mp.workprec(self.prec_bits + GUARD_BITS):
            return tuple(mp.log(abs(v)) for v in self.u)

    @property
    def norm(self):
        """||u|| = sqrt(t^2 + s^2)."""
        with mp.workprec(self.prec_bits + GUARD_BITS):
            return mp.sqrt(self.t**2 + self.s**2)

    def to_json(self, digits: int) -> dict:
        fmt = lambda v: mpmath.nstr(v, digits, strip_zeros=False)  # noqa: E731
        return {
            "x": str(self.point[0]),
            "y": str(self.point[1]),
            "related_index": str(self.related_index),
            "t": fmt(self.t),
            "s": fmt(self.s),
            "p": fmt(self.p),
            "q": fmt(self.q),
            "u": [fmt(v) for v in self.u],
            "digits": str(digits),
        }


def _omega():
    return mp.expjpi(mp.mpf(2) / 3)


def build_resolvent(F: BinaryCubicForm, prec_bits: int = DEFAULT_PREC) -> ResolventData:
    prec_bits = nx.check_prec(prec_bits)
    D = discriminant(F)
    if D <= 0:
        raise NonPositiveDiscriminant(f"resolvent forms need D > 0, got {D}")
    if not is_irreducible(F):
        raise ReducibleForm(f"{F} is reducible over Q")
    a, b, c, d = F.coeffs
    roots = nx.cubic_real_roots(a, b, c, d, prec_bits + GUARD_BITS, check_irreducible=False)
    lo, mid, hi = roots.roots
    labeled = (lo, hi, mid)
    with mp.workprec(prec_bits + GUARD_BITS):
        w = _omega()
        w2 = w * w
        left = [a * r for r in labeled]
        right = [-mp.mpf(d) / r for r in labeled]
        xi = (left[0] + w * left[1] + w2 * left[2], right[0] + w * right[1] + w2 * right[2])
        eta = (left[0] + w2 * left[1] + w * left[2], right[0] + w2 * right[1] + w * right[2])
    return ResolventData(F, roots, labeled, xi, eta, D, prec_bits)


def _pair_values(R: ResolventData, x, y):
    """(xi_k, eta_k) at (x, y) for k = 0, 1, 2."""
    xi = R.xi(x, y)
    eta = R.eta(x, y)
    w = _omega()
    return [(w ** (2 * k) * xi, w**k * eta) for k in range(3)]


def _pq(xi, eta):
    r2 = mp.sqrt(2)
    p = (eta + xi) / r2
    q = mp.mpc(0, 1) * (eta - xi) / r2
    return p.real, q.real


def _related(q_abs, prec_bits, strict):
    order = sorted(range(3), key=lambda k: (q_abs[k], k))
    best = order[0]
    if strict and abs(q_abs[order[1]] - q_abs[best]) <= tolerance(prec_bits):
        raise TieUnresolvable(f"|q_{best}| and |q_{order[1]}| agree to working precision")
    return best


def eval_point(R: ResolventData, x: int, y: int, k: int | None = None,
               strict: bool = False) -> PointEvaluation:
    """Evaluate p, q, u, t, s at (x, y) for the related pair (or pair ``k``)."""
    if x == 0 and y == 0:
        raise OriginPoint("(0, 0) has no logarithmic coordinates")
    x, y = int(x), int(y)
    with mp.workprec(R.work_prec):
        pairs = _pair_values(R, x, y)
        pq = [_pq(xi, eta) for xi, eta in pairs]
        q_abs = tuple(abs(q) for _, q in pq)
        related = _related(q_abs, R.prec_bits, strict)
        idx = related if k is None else k
        p, q = pq[idx]
        scale = mp.power(R.disc, mp.mpf(-1) / 6)
        r2, r6 = mp.sqrt(2), mp.sqrt(6)
        u1 = scale * (q / r6 + p / r2)
        u2 = scale * (q / r6 - p / r2)
        u3 = -scale * 2 * q / r6
        t = -r6 / 2 * mp.log(abs(u3))
        s = (mp.log(abs(u1)) - mp.log(abs(u2))) / r2
    return PointEvaluation(
        point=(x, y),
        u=(u1, u2, u3),
        p=p,
        q=q,
        t=t,
        s=s,
        related_index=related,
        q_abs=q_abs,
        form_value=R.form(x, y),
        hessian_value=hessian(R.form)(x, y),
        prec_bits=R.prec_bits,
    )


def classify_related(R: ResolventData, x: int, y: int, strict: bool = False) -> int:
    """Index k of the resolvent pair (w^(2k) xi, w^k eta) related to (x, y).

    Ties are broken toward the smallest k; with ``strict`` a certified tie
    raises :class:`TieUnresolvable` instead.
    """
    return eval_point(R, x, y, strict=strict).related_index


def u_from_roots(R: ResolventData, x: int, y: int, k: int = 0) -> tuple:
    """u_1, u_2, u_3 from root differences for pair k.

    Pair k uses the labels (rho, rho', rho'') cyclically shifted by k.
    """
    a = R.form.a
    lab = R.labeled
    r, rp, rpp = lab[k % 3], lab[(k + 1) % 3], lab[(k + 2) % 3]
    with mp.workprec(R.work_prec):
        scale = mp.power(R.disc, mp.mpf(-1) / 6) * a
        return (
            scale * (r - rpp) * (x - rp * y),
            scale * (rp - r) * (x - rpp * y),
            scale * (rpp - rp) * (x - r * y),
        )


def g_function(t, prec_bits: int = DEFAULT_PREC):
    """g(t) = sqrt(2) asinh(exp(-sqrt(6) t / 2) / 2); |s| = g(t) on solutions."""
    with mp.workprec(prec_bits + GUARD_BITS):
        t = mp.mpf(t)
        if t < 0:
            raise NegativeArgument(f"g is defined for t >= 0, got {mpmath.nstr(t, 8)}")
        return mp.sqrt(2) * mp.asinh(mp.exp(-mp.sqrt(6) * t / 2) / 2)


def g_expr(t):
    """g as an expression tree for :func:`numerics.eval_to_error`."""
    return nx.sqrt(2) * nx.asinh(nx.exp(-nx.sqrt(6) * nx.as_expr(t) / 2) / 2)


def triple_norm(ev: PointEvaluation):
    """|| (log|u1/u2|, log|u2/u3|, log|u3/u1|) ||, which equals sqrt(3) ||u||."""
    l1, l2, l3 = ev.log_vector
    with mp.workprec(ev.prec_bits + GUARD_BITS):
        return mp.sqrt((l1 - l2) ** 2 + (l2 - l3) ** 2 + (l3 - l1) ** 2)


def hessian_bound(t, s, D, literal_exponent: bool = False, prec_bits: int = DEFAULT_PREC):
    """Upper bound for H at a point with coordinates (t, s).

    (1/2) D^(1/3) (e^(2t/sqrt6)(e^(2s/sqrt2) + e^(-2s/sqrt2) + 2)/2 + (3/2) e^(-4t/sqrt6)).
    ``literal_exponent`` uses e^(-4t/6) in the last term instead.
    """
    with mp.workprec(prec_bits + GUARD_BITS):
        t, s = mp.mpf(t), mp.mpf(s)
        r2, r6 = mp.sqrt(2), mp.sqrt(6)
        last = mp.exp(-4 * t / 6) if literal_exponent else mp.exp(-4 * t / r6)
        inner = mp.exp(2 * t / r6) * (mp.exp(2 * s / r2) + mp.exp(-2 * s / r2) + 2) / 2
        return mp.cbrt(D) / 2 * (inner + mp.mpf(3) / 2 * last)
