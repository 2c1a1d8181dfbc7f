import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from cubic_thue.errors import NonPositiveDiscriminant, NotUnimodular
from cubic_thue.forms import (
    IDENTITY,
    BinaryCubicForm,
    UnimodularMap,
    apply_to_cubic_coeffs,
    apply_to_quadratic,
    apply_unimodular,
    discriminant,
    g_covariant,
    hessian,
    is_irreducible,
    reduce,
    syzygy_check,
)

X, Y = sympy.symbols("x y")

coeff = st.integers(-50, 50)
forms = st.tuples(coeff, coeff, coeff, coeff).filter(any).map(lambda t: BinaryCubicForm(*t))


@st.composite
def positive_forms(draw):
    """Products of three non-proportional linear forms, so D > 0."""
    lin = st.tuples(st.integers(-9, 9), st.integers(-9, 9)).filter(any)
    (p1, q1), (p2, q2), (p3, q3) = draw(st.lists(lin, min_size=3, max_size=3))
    assume(p1 * q2 != p2 * q1 and p1 * q3 != p3 * q1 and p2 * q3 != p3 * q2)
    f = sympy.Poly(sympy.expand((p1 * X + q1 * Y) * (p2 * X + q2 * Y) * (p3 * X + q3 * Y)), X, Y)
    return BinaryCubicForm(*(f.coeff_monomial(X ** (3 - i) * Y**i) for i in range(4)))


@st.composite
def unimodular(draw):
    # products of elementary moves cover SL2(Z) and GL2(Z)
    g = IDENTITY
    for _ in range(draw(st.integers(0, 6))):
        k = draw(st.integers(-4, 4))
        step = draw(st.sampled_from([UnimodularMap(1, k, 0, 1), UnimodularMap(1, 0, k, 1),
                                     UnimodularMap(0, -1, 1, 0), UnimodularMap(1, 0, 0, -1)]))
        g = g.compose(step)
    return g


def _poly(F):
    a, b, c, d = F.coeffs
    return a * X**3 + b * X**2 * Y + c * X * Y**2 + d * Y**3


def _sympy_covariants(F):
    f = _poly(F)
    hess = sympy.Matrix([[f.diff(X, X), f.diff(X, Y)], [f.diff(Y, X), f.diff(Y, Y)]]).det()
    H = sympy.expand(-hess / 4)
    G = sympy.expand(f.diff(X) * H.diff(Y) - f.diff(Y) * H.diff(X))
    D = sympy.discriminant(f.subs(Y, 1), X) if F.a else None
    return sympy.Poly(H, X, Y), sympy.Poly(G, X, Y), D


@pytest.mark.parametrize("co,D,H", [
    ((1, 0, -3, 1), 81, (9, -9, 9)),
    ((1, 1, -2, -1), 49, (7, 7, 7)),
])
def test_named_forms(co, D, H):
    F = BinaryCubicForm(*co)
    assert discriminant(F) == D
    assert (hessian(F).A, hessian(F).B, hessian(F).C) == H
    assert syzygy_check(F)


def test_g_of_the_d81_form():
    assert g_covariant(BinaryCubicForm(1, 0, -3, 1)) == (-27, 162, -81, -27)


@settings(max_examples=80, deadline=None)
@given(forms)
def test_covariants_match_sympy(F):
    H, G, D = _sympy_covariants(F)
    h = hessian(F)
    assert H.as_expr() == sympy.expand(h.A * X**2 + h.B * X * Y + h.C * Y**2)
    g = g_covariant(F)
    assert G.as_expr() == sympy.expand(sum(c * X ** (3 - i) * Y**i for i, c in enumerate(g)))
    if D is not None:
        assert discriminant(F) == D


@settings(max_examples=200, deadline=None)
@given(forms)
def test_hessian_discriminant_and_syzygy(F):
    assert hessian(F).discriminant == -3 * discriminant(F)
    assert syzygy_check(F)


@settings(max_examples=150, deadline=None)
@given(forms, unimodular())
def test_covariance_under_gl2z(F, g):
    Fg = apply_unimodular(F, g)
    assert discriminant(Fg) == discriminant(F)
    assert hessian(Fg) == apply_to_quadratic(hessian(F), g)
    # G picks up the determinant
    want = tuple(g.det * c for c in apply_to_cubic_coeffs(g_covariant(F), g))
    assert g_covariant(Fg) == want
    assert Fg(1, 0) == F(*g(1, 0)) and Fg(2, -3) == F(*g(2, -3))


@settings(max_examples=150, deadline=None)
@given(positive_forms(), unimodular())
def test_reduce_properties(F, g):
    assert discriminant(F) > 0
    red, gamma = reduce(F)
    assert apply_unimodular(F, gamma) == red
    assert hessian(red).is_reduced
    assert discriminant(red) == discriminant(F)
    # idempotent and stable on the orbit: equivalent forms reduce to reduced Hessians too
    assert reduce(red)[0] == red
    assert hessian(reduce(apply_unimodular(F, g))[0]).is_reduced


def test_reduce_of_a_sheared_form():
    F = apply_unimodular(BinaryCubicForm(1, 0, -3, 1), UnimodularMap(1, 5, 0, 1))
    red, gamma = reduce(F)
    h = hessian(red)
    assert (h.A, abs(h.B), h.C) == (9, 9, 9)
    assert abs(gamma.det) == 1


def test_reduce_rejects_negative_discriminant():
    with pytest.raises(NonPositiveDiscriminant):
        reduce(BinaryCubicForm(1, -1, 0, 1))


@settings(max_examples=100, deadline=None)
@given(forms)
def test_irreducibility_matches_sympy(F):
    poly = sympy.Poly(_poly(F), X, Y)
    factors = sympy.factor_list(poly)[1]
    sympy_irreducible = len(factors) == 1 and factors[0][1] == 1 and factors[0][0].total_degree() == 3
    assert is_irreducible(F) == sympy_irreducible


def test_unimodular_map_algebra():
    g = UnimodularMap(2, 1, 1, 1)
    assert g.compose(g.inverse()) == IDENTITY
    with pytest.raises(NotUnimodular):
        UnimodularMap(2, 0, 0, 1).check()
    with pytest.raises(NotUnimodular):
        apply_unimodular(BinaryCubicForm(1, 0, -3, 1), UnimodularMap(2, 0, 0, 1))


def test_zero_form_and_json_roundtrip():
    with pytest.raises(ValueError):
        BinaryCubicForm(0, 0, 0, 0)
    F = BinaryCubicForm(1, -4, 3, 1)
    assert F.to_json() == {"a": "1", "b": "-4", "c": "3", "d": "1"}
    assert BinaryCubicForm.from_json(F.to_json()) == F
    assert BinaryCubicForm.from_json('{"a": "2", "b": "0", "c": "0", "d": "1"}') == BinaryCubicForm(2, 0, 0, 1)
