"""Exact arithmetic on integral binary cubic forms.

Forms are stored as coefficient tuples; ``BinaryCubicForm(a, b, c, d)`` is
``a x^3 + b x^2 y + c x y^2 + d y^3``.  Everything here is integer-exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import NonPositiveDiscriminant, NotUnimodular
from .numerics import cubic_discriminant, rational_roots


@dataclass(frozen=True)
class BinaryCubicForm:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        for name in "abcd":
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                object.__setattr__(self, name, int(v))
        if not any(self.coeffs):
            raise ValueError("the zero form is not a binary cubic form")

    @property
    def coeffs(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __call__(self, x, y):
        return ((self.a * x + self.b * y) * x + self.c * y * y) * x + self.d * y**3

    @property
    def is_monic(self) -> bool:
        return self.a == 1

    def to_json(self) -> dict:
        return {k: str(v) for k, v in zip("abcd", self.coeffs)}

    @classmethod
    def from_json(cls, obj) -> "BinaryCubicForm":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(*(int(obj[k]) for k in "abcd"))

    def __str__(self):
        return "({}, {}, {}, {})".format(*self.coeffs)


@dataclass(frozen=True)
class QuadraticForm:
    A: int
    B: int
    C: int

    def __call__(self, x, y):
        return self.A * x * x + self.B * x * y + self.C * y * y

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    @property
    def is_reduced(self) -> bool:
        return self.C >= self.A >= abs(self.B)

    def to_json(self) -> dict:
        return {"A": str(self.A), "B": str(self.B), "C": str(self.C)}


@dataclass(frozen=True)
class UnimodularMap:
    """(x, y) -> (a1 x + a2 y, a3 x + a4 y)."""

    a1: int
    a2: int
    a3: int
    a4: int

    @property
    def det(self) -> int:
        return self.a1 * self.a4 - self.a2 * self.a3

    def check(self) -> "UnimodularMap":
        if self.det not in (1, -1):
            raise NotUnimodular(f"determinant {self.det} is not +-1")
        return self

    def compose(self, other: "UnimodularMap") -> "UnimodularMap":
        """Matrix product self * other, i.e. substitute ``other`` into ``self``."""
        return UnimodularMap(
            self.a1 * other.a1 + self.a2 * other.a3,
            self.a1 * other.a2 + self.a2 * other.a4,
            self.a3 * other.a1 + self.a4 * other.a3,
            self.a3 * other.a2 + self.a4 * other.a4,
        )

    def inverse(self) -> "UnimodularMap":
        det = self.check().det
        return UnimodularMap(self.a4 * det, -self.a2 * det, -self.a3 * det, self.a1 * det)

    def __call__(self, x, y):
        return (self.a1 * x + self.a2 * y, self.a3 * x + self.a4 * y)

    def to_json(self) -> dict:
        return {f"a{i}": str(v) for i, v in enumerate((self.a1, self.a2, self.a3, self.a4), 1)}


IDENTITY = UnimodularMap(1, 0, 0, 1)


# binary forms as coefficient lists, x-degree descending


def _mul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, u in enumerate(p):
        if u:
            for j, v in enumerate(q):
                out[i + j] += u * v
    return out


def _add(p, q):
    return [u + v for u, v in zip(p, q)]


def _scale(p, k):
    return [k * u for u in p]


def discriminant(F: BinaryCubicForm) -> int:
    return cubic_discriminant(*F.coeffs)


def hessian(F: BinaryCubicForm) -> QuadraticForm:
    a, b, c, d = F.coeffs
    return QuadraticForm(b * b - 3 * a * c, b * c - 9 * a * d, c * c - 3 * b * d)


def g_covariant(F: BinaryCubicForm) -> tuple[int, int, int, int]:
    """Coefficients of G = F_x H_y - F_y H_x.

    Returned as a plain tuple since G vanishes identically when D = 0, and
    :class:`BinaryCubicForm` rejects the zero form.
    """
    a, b, c, d = F.coeffs
    H = hessian(F)
    fx = [3 * a, 2 * b, c]
    fy = [b, 2 * c, 3 * d]
    hx = [2 * H.A, H.B]
    hy = [H.B, 2 * H.C]
    return tuple(_add(_mul(fx, hy), _scale(_mul(fy, hx), -1)))


def eval_binary(coeffs, x, y):
    n = len(coeffs) - 1
    return sum(co * x ** (n - i) * y**i for i, co in enumerate(coeffs))


def syzygy_check(F: BinaryCubicForm) -> bool:
    """4 H^3 == G^2 + 27 D F^2 as polynomials."""
    H = hessian(F)
    h = [H.A, H.B, H.C]
    g = list(g_covariant(F))
    f = list(F.coeffs)
    lhs = _scale(_mul(_mul(h, h), h), 4)
    rhs = _add(_mul(g, g), _scale(_mul(f, f), 27 * discriminant(F)))
    return lhs == rhs


def apply_unimodular(F: BinaryCubicForm, gamma: UnimodularMap) -> BinaryCubicForm:
    """F(a1 x + a2 y, a3 x + a4 y)."""
    gamma.check()
    X = [gamma.a1, gamma.a2]
    Y = [gamma.a3, gamma.a4]
    X2, Y2 = _mul(X, X), _mul(Y, Y)
    terms = (
        _scale(_mul(X2, X), F.a),
        _scale(_mul(X2, Y), F.b),
        _scale(_mul(X, Y2), F.c),
        _scale(_mul(Y2, Y), F.d),
    )
    out = [0, 0, 0, 0]
    for t in terms:
        out = _add(out, t)
    return BinaryCubicForm(*out)


def apply_to_quadratic(H: QuadraticForm, gamma: UnimodularMap) -> QuadraticForm:
    X = [gamma.a1, gamma.a2]
    Y = [gamma.a3, gamma.a4]
    out = _add(_add(_scale(_mul(X, X), H.A), _scale(_mul(X, Y), H.B)), _scale(_mul(Y, Y), H.C))
    return QuadraticForm(*out)


def apply_to_cubic_coeffs(coeffs, gamma: UnimodularMap):
    """Substitution on a possibly-zero cubic coefficient tuple (used for G)."""
    if not any(coeffs):
        return tuple(coeffs)
    return apply_unimodular(BinaryCubicForm(*coeffs), gamma).coeffs


def is_irreducible(F: BinaryCubicForm) -> bool:
    """Irreducibility over Q via the rational root theorem.

    A linear factor is either y (when a = 0) or x - r y with F(r, 1) = 0.
    """
    a, b, c, d = F.coeffs
    if a == 0:
        return False
    return not rational_roots(a, b, c, d)


def _round_div(num: int, den: int) -> int:
    """Nearest integer to num/den (den > 0), ties toward zero."""
    q, r = divmod(num, den)
    if 2 * r > den or (2 * r == den and q < 0):
        q += 1
    return q


def reduce(F: BinaryCubicForm) -> tuple[BinaryCubicForm, UnimodularMap]:
    """Equivalent form whose Hessian satisfies C >= A >= |B|.

    Gauss reduction of the positive definite Hessian; the accumulated map is
    applied to F, so ``apply_unimodular(F, gamma) == F_red``.
    """
    if discriminant(F) <= 0:
        raise NonPositiveDiscriminant(f"reduction needs D > 0, got {discriminant(F)}")
    H = hessian(F)
    gamma = IDENTITY
    while not H.is_reduced:
        if abs(H.B) > H.A:
            # x -> x + k y brings B to 2Ak + B in [-A, A]
            k = _round_div(-H.B, 2 * H.A)
            step = UnimodularMap(1, k, 0, 1)
        elif H.C < H.A:
            step = UnimodularMap(0, -1, 1, 0)
        else:  # pragma: no cover - unreachable for definite forms
            break
        gamma = gamma.compose(step)
        H = apply_to_quadratic(H, step)
    return apply_unimodular(F, gamma), gamma
