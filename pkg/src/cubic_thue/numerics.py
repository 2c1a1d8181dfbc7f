"""Arbitrary-precision kernel.

Real quantities are carried as :class:`mpmath.mpf` values computed under an
explicit working precision.  Two services live here:

* certified isolation of the three real roots of an integer cubic with
  positive discriminant (exact Sturm counting over the rationals, Newton
  refinement, exact sign certification of the final intervals);
* :func:`eval_to_error`, which evaluates a small expression tree in
  interval arithmetic, doubling the precision until the enclosure is
  narrower than the requested error.
"""

from __future__ import annotations

import math
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv, mp

from .errors import (
    DegenerateLeadingCoefficient,
    DivisionNearZero,
    LogOfNonPositive,
    NonPositiveDiscriminant,
    PrecisionExhausted,
    ReduciblePolynomial,
)

DEFAULT_PREC = 256
MIN_PREC = 64
MAX_PREC = 16384


def check_prec(prec_bits: int) -> int:
    prec_bits = int(prec_bits)
    if not MIN_PREC <= prec_bits <= MAX_PREC:
        raise ValueError(f"prec_bits must lie in [{MIN_PREC}, {MAX_PREC}], got {prec_bits}")
    return prec_bits


def mpf_to_fraction(x) -> Fraction:
    """Exact rational value of a finite mpf."""
    raw = x._mpf_ if isinstance(x, mp.mpf) else mp.mpf(x)._mpf_
    num, den = mpmath.libmp.to_rational(raw)
    return Fraction(int(num), int(den))


@contextmanager
def ivprec(prec_bits: int):
    """Temporarily set the precision of the interval context."""
    saved = iv.prec
    iv.prec = prec_bits
    try:
        yield
    finally:
        iv.prec = saved


def cubic_discriminant(a: int, b: int, c: int, d: int) -> int:
    return 18 * a * b * c * d + b * b * c * c - 27 * a * a * d * d - 4 * a * c**3 - 4 * b**3 * d


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small = [k for k in range(1, math.isqrt(n) + 1) if n % k == 0]
    return sorted(set(small + [n // k for k in small]))


def rational_roots(a: int, b: int, c: int, d: int) -> list[Fraction]:
    """Rational roots of ax^3+bx^2+cx+d by the rational root theorem."""
    if a == 0:
        raise DegenerateLeadingCoefficient("leading coefficient is zero")
    if d == 0:
        found = {Fraction(0)}
        # remaining quadratic a x^2 + b x + c
        found.update(r for r in _quadratic_rational_roots(a, b, c))
        return sorted(found)
    roots = set()
    for p in _divisors(d):
        for q in _divisors(a):
            for r in (Fraction(p, q), Fraction(-p, q)):
                if _peval((a, b, c, d), r) == 0:
                    roots.add(r)
    return sorted(roots)


def _quadratic_rational_roots(a, b, c):
    disc = b * b - 4 * a * c
    if disc < 0:
        return []
    s = math.isqrt(disc)
    if s * s != disc:
        return []
    return [Fraction(-b + s, 2 * a), Fraction(-b - s, 2 * a)]


def _peval(coeffs, x):
    acc = 0
    for co in coeffs:
        acc = acc * x + co
    return acc


def _sign(v) -> int:
    return (v > 0) - (v < 0)


def _polyrem(num, den):
    """Remainder of num by den, coefficients highest degree first."""
    num = [Fraction(v) for v in num]
    while len(num) >= len(den):
        if num[0] == 0:
            num.pop(0)
            continue
        factor = num[0] / den[0]
        for i in range(len(den)):
            num[i] -= factor * den[i]
        num.pop(0)
    while len(num) > 1 and num[0] == 0:
        num.pop(0)
    return num


def _sturm_sequence(coeffs):
    seq = [[Fraction(v) for v in coeffs]]
    n = len(coeffs) - 1
    seq.append([Fraction(v * (n - i)) for i, v in enumerate(coeffs[:-1])])
    while len(seq[-1]) > 1 or seq[-1][0] != 0:
        rem = _polyrem(seq[-2], seq[-1])
        if all(v == 0 for v in rem):
            break
        seq.append([-v for v in rem])
        if len(rem) == 1:
            break
    return seq


def _variations(seq, x) -> int:
    signs = [_sign(_peval(p, x)) for p in seq]
    signs = [s for s in signs if s != 0]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


@dataclass(frozen=True)
class RootTriple:
    """Three certified real roots of a cubic, ascending.

    ``half_widths[i]`` is a certified radius: the exact root lies in
    ``[roots[i] - half_widths[i], roots[i] + half_widths[i]]``.
    """

    roots: tuple
    half_widths: tuple
    prec_bits: int
    coeffs: tuple  # (a, b, c, d) of a x^3 + b x^2 + c x + d

    def intervals(self):
        return [(r - h, r + h) for r, h in zip(self.roots, self.half_widths)]

    def iv_roots(self):
        """The roots as mpmath interval objects at the stored precision."""
        with ivprec(self.prec_bits + 16):
            return [iv.mpf([r - h, r + h]) for r, h in zip(self.roots, self.half_widths)]


def _isolate(coeffs) -> list[tuple[Fraction, Fraction]]:
    a = coeffs[0]
    bound = 1 + max(abs(Fraction(c, a)) for c in coeffs[1:])
    seq = _sturm_sequence(coeffs)

    def count(lo, hi):
        return _variations(seq, lo) - _variations(seq, hi)

    pending = [(-bound, bound)]
    isolated = []
    while pending:
        lo, hi = pending.pop()
        n = count(lo, hi)
        if n == 0:
            continue
        if n == 1:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        # keep the split point off exact rational roots
        shift = (hi - lo) / 7
        while _peval(coeffs, mid) == 0:
            mid += shift
            shift /= 3
        pending.append((lo, mid))
        pending.append((mid, hi))
    return sorted(isolated)


def _refine(coeffs, lo: Fraction, hi: Fraction, prec_bits: int):
    """Shrink an isolating interval (lo, hi] to a certified mpf ball."""
    # exact bisection until Newton is safe
    flo = _peval(coeffs, lo)
    if flo == 0:
        # only possible for rational roots; lo is excluded from (lo, hi]
        lo = lo + (hi - lo) / 1024
        flo = _peval(coeffs, lo)
    for _ in range(60):
        if hi - lo <= Fraction(1, 1 << 30) * max(1, abs(lo), abs(hi)):
            break
        mid = (lo + hi) / 2
        fm = _peval(coeffs, mid)
        if fm == 0:
            return mp.mpf(mid.numerator) / mid.denominator, mp.mpf(0)
        if _sign(fm) == _sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    a, b, c, d = coeffs
    with mp.workprec(prec_bits + 64):
        x = (mp.mpf(lo.numerator) / lo.denominator + mp.mpf(hi.numerator) / hi.denominator) / 2
        for _ in range(2 * int(math.log2(prec_bits)) + 8):
            fx = ((a * x + b) * x + c) * x + d
            dfx = (3 * a * x + 2 * b) * x + c
            if dfx == 0:
                break
            step = fx / dfx
            x -= step
            if step == 0 or abs(step) < mp.ldexp(max(1, abs(x)), -(prec_bits + 48)):
                break
    scale = max(Fraction(1), abs(mpf_to_fraction(x)))
    for extra in (8, 4, 0, -8, -32):
        delta = Fraction(1, 1 << max(prec_bits - extra, 1)) * scale
        xr = mpf_to_fraction(x)
        left, right = xr - delta, xr + delta
        if left < lo or right > hi:
            continue
        if _sign(_peval(coeffs, left)) * _sign(_peval(coeffs, right)) < 0:
            with mp.workprec(prec_bits + 64):
                return +x, mp.mpf(delta.numerator) / delta.denominator
    # Newton failed to land; fall back to the exact bisection interval
    with mp.workprec(prec_bits + 64):
        lo_m = mp.mpf(lo.numerator) / lo.denominator
        hi_m = mp.mpf(hi.numerator) / hi.denominator
        return (lo_m + hi_m) / 2, (hi_m - lo_m) / 2


def cubic_real_roots(a: int, b: int, c: int, d: int, prec_bits: int = DEFAULT_PREC,
                     check_irreducible: bool = True) -> RootTriple:
    """Certified real roots of ``a x^3 + b x^2 + c x + d``, ascending.

    The half-width of each returned interval is at most
    ``2**(9 - prec_bits) * max(1, |root|)`` when Newton converges, far inside the contract
    ``2**(-prec_bits/2) * max(1, |root|)``.
    """
    prec_bits = check_prec(prec_bits)
    a, b, c, d = int(a), int(b), int(c), int(d)
    if a == 0:
        raise DegenerateLeadingCoefficient("leading coefficient is zero")
    if cubic_discriminant(a, b, c, d) <= 0:
        raise NonPositiveDiscriminant(f"discriminant of ({a},{b},{c},{d}) is not positive")
    if check_irreducible and rational_roots(a, b, c, d):
        raise ReduciblePolynomial(f"({a},{b},{c},{d}) has a rational root")
    coeffs = (a, b, c, d)
    intervals = _isolate(coeffs)
    if len(intervals) != 3:  # pragma: no cover - positive discriminant guarantees three
        raise NonPositiveDiscriminant("root isolation did not find three real roots")
    roots, widths = [], []
    for lo, hi in intervals:
        r, h = _refine(coeffs, lo, hi, prec_bits)
        roots.append(r)
        widths.append(h)
    return RootTriple(tuple(roots), tuple(widths), prec_bits, coeffs)


# ---------------------------------------------------------------------------
# adaptive-precision expression evaluation


class _Uncertain(Exception):
    """Raised during enclosure when the current precision cannot decide."""

    def __init__(self, kind):
        super().__init__(kind)
        self.kind = kind


class Expr:
    """Arithmetic term over exact or high-precision leaves."""

    def enclose(self, prec: int):  # pragma: no cover - abstract
        raise NotImplementedError

    def __add__(self, other):
        return _Bin("+", self, as_expr(other))

    def __radd__(self, other):
        return _Bin("+", as_expr(other), self)

    def __sub__(self, other):
        return _Bin("-", self, as_expr(other))

    def __rsub__(self, other):
        return _Bin("-", as_expr(other), self)

    def __mul__(self, other):
        return _Bin("*", self, as_expr(other))

    def __rmul__(self, other):
        return _Bin("*", as_expr(other), self)

    def __truediv__(self, other):
        return _Bin("/", self, as_expr(other))

    def __rtruediv__(self, other):
        return _Bin("/", as_expr(other), self)

    def __neg__(self):
        return _Un("neg", self)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise TypeError("only non-negative integer powers are supported")
        return _Pow(self, n)


class Const(Expr):
    def __init__(self, value):
        if isinstance(value, float) and not math.isfinite(value):
            raise ValueError("leaves must be finite")
        self.value = value

    def enclose(self, prec):
        v = self.value
        if isinstance(v, Fraction):
            return iv.mpf(v.numerator) / iv.mpf(v.denominator)
        if isinstance(v, str):
            return iv.mpf(v)
        if isinstance(v, (int, float)):
            return iv.mpf(v)
        if isinstance(v, iv.mpf):
            return v
        # mpf leaves are exact binary values
        m = mp.mpf(v)
        return iv.mpf([m, m])

    def __repr__(self):
        return f"Const({self.value!r})"


def as_expr(x) -> Expr:
    return x if isinstance(x, Expr) else Const(x)


class _Bin(Expr):
    def __init__(self, op, left, right):
        self.op, self.left, self.right = op, left, right

    def enclose(self, prec):
        lv = self.left.enclose(prec)
        rv = self.right.enclose(prec)
        if self.op == "+":
            return lv + rv
        if self.op == "-":
            return lv - rv
        if self.op == "*":
            return lv * rv
        if rv.a <= 0 <= rv.b:
            raise _Uncertain("div")
        return lv / rv


class _Pow(Expr):
    def __init__(self, base, n):
        self.base, self.n = base, n

    def enclose(self, prec):
        return self.base.enclose(prec) ** self.n


def _point(x):
    return iv.mpf([x, x])


def _sinh_point(x):
    ex = iv.exp(_point(x))
    return (ex - 1 / ex) / 2


def _asinh_point(x):
    if x < 0:
        return -_asinh_point(-x)
    p = _point(x)
    return iv.log(p + iv.sqrt(p * p + 1))


class _Un(Expr):
    def __init__(self, op, arg):
        self.op, self.arg = op, arg

    def enclose(self, prec):
        v = self.arg.enclose(prec)
        op = self.op
        if op == "neg":
            return -v
        if op == "abs":
            return abs(v)
        if op == "exp":
            return iv.exp(v)
        if op == "log":
            if v.b <= 0:
                raise LogOfNonPositive("log of a non-positive value")
            if v.a <= 0:
                raise _Uncertain("log")
            return iv.log(v)
        if op == "sqrt":
            if v.b < 0:
                raise LogOfNonPositive("sqrt of a negative value")
            if v.a < 0:
                raise _Uncertain("sqrt")
            return iv.sqrt(v)
        if op == "sinh":
            # monotone: enclose each endpoint separately
            return iv.mpf([_sinh_point(v.a).a, _sinh_point(v.b).b])
        if op == "asinh":
            return iv.mpf([_asinh_point(v.a).a, _asinh_point(v.b).b])
        raise ValueError(op)  # pragma: no cover


class _LogFixedPoint(Expr):
    def __init__(self, k):
        self.k = k

    def enclose(self, prec):
        k = self.k.enclose(prec)
        if k.a <= mpmath.e**2:
            raise ValueError("log_fixed_point needs K > e^2")
        lk = iv.log(k)
        y = iv.mpf([lk.a, 2 * lk.b])
        width = None
        for _ in range(400):
            nxt = lk + iv.log(y)
            # intersect with the previous enclosure
            y = iv.mpf([max(nxt.a, y.a), min(nxt.b, y.b)])
            if width is not None and y.delta >= width:
                break
            width = y.delta
        return y


def exp(x):
    return _Un("exp", as_expr(x))


def log(x):
    return _Un("log", as_expr(x))


def sqrt(x):
    return _Un("sqrt", as_expr(x))


def sinh(x):
    return _Un("sinh", as_expr(x))


def asinh(x):
    return _Un("asinh", as_expr(x))


def fabs(x):
    return _Un("abs", as_expr(x))


def log_fixed_point(k):
    """log of the largest solution x of ``x = K log x``; needs K > e^2.

    Equivalently the largest y with ``y = log K + log y``.  ``x / log x <= K``
    holds for ``x > e`` exactly when ``log x`` is at most this value.
    """
    return _LogFixedPoint(as_expr(k))


def enclose(expr: Expr, prec_bits: int):
    """Interval enclosure of ``expr`` at a fixed precision."""
    with ivprec(prec_bits):
        return expr.enclose(prec_bits)


def eval_to_error(expr: Expr, abs_err, start_prec: int = DEFAULT_PREC,
                  max_prec: int = MAX_PREC):
    """Value of ``expr`` within ``abs_err`` of the truth, as an mpf.

    The working precision starts at ``start_prec`` and doubles until the
    interval enclosure is narrower than ``abs_err``.
    """
    expr = as_expr(expr)
    abs_err = mp.mpf(abs_err) if not isinstance(abs_err, str) else mp.mpf(abs_err)
    if abs_err <= 0:
        raise ValueError("abs_err must be positive")
    prec = check_prec(start_prec)
    last = None
    while prec <= max_prec:
        try:
            with ivprec(prec):
                box = expr.enclose(prec)
                lo, hi = box.a, box.b
        except _Uncertain as exc:
            last = exc.kind
        else:
            with mp.workprec(prec):
                lo_m, hi_m = mp.mpf(lo), mp.mpf(hi)
                if hi_m - lo_m <= abs_err:
                    return (lo_m + hi_m) / 2
            last = "width"
        prec *= 2
    if last == "div":
        raise DivisionNearZero("a divisor encloses zero at maximal precision")
    if last in ("log", "sqrt"):
        raise LogOfNonPositive("argument of log/sqrt encloses zero at maximal precision")
    raise PrecisionExhausted(f"enclosure wider than {mpmath.nstr(abs_err, 5)} at {max_prec} bits")


def certified_sign(expr: Expr, start_prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC) -> int:
    """Sign of ``expr``; 0 only if the enclosure still contains 0 at ``max_prec``."""
    expr = as_expr(expr)
    prec = start_prec
    while prec <= max_prec:
        try:
            with ivprec(prec):
                box = expr.enclose(prec)
        except _Uncertain:
            prec *= 2
            continue
        if box.a > 0:
            return 1
        if box.b < 0:
            return -1
        prec *= 2
    return 0
