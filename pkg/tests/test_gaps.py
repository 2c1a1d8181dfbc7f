import math

import pytest
from mpmath import mp

from cubic_thue.errors import SamePoint
from cubic_thue.forms import BinaryCubicForm
from cubic_thue.gaps import (
    class_report,
    disc_bound_checks,
    disc_from_hessian,
    disc_from_t,
    gap_growth_check,
    gap_growth_margin,
    gap_theorem_lower,
    hessian_floor_check,
    pq_gap,
    triangle_area,
)
from cubic_thue.resolvent import build_resolvent, eval_point
from cubic_thue.units import build_lattice, search_units

D81 = BinaryCubicForm(1, 0, -3, 1)
D49 = BinaryCubicForm(1, 1, -2, -1)
D49_SOLS = [(-9, 5), (-1, -1), (-1, 1), (-1, 2), (0, -1), (1, 0), (2, -1), (4, -9), (5, 4)]


def test_gap_theorem_lower_example():
    r6 = math.sqrt(6)
    want = math.sqrt(2) * math.exp(r6 / 2) / (1 + math.exp(-r6 / math.sqrt(5)))
    assert abs(float(gap_theorem_lower(1, 2, 1)) - want) < 1e-13
    assert abs(float(gap_theorem_lower(1, 2, 1)) - 3.6068818834) < 1e-9


def test_gap_theorem_lower_limits():
    t = mp.mpf(3)
    base = mp.sqrt(2) * 2 * mp.exp(mp.sqrt(6) * t / 2)
    assert abs(gap_theorem_lower(t, t, 2) - base / 2) < mp.mpf("1e-10")
    assert abs(gap_theorem_lower(t, 200, 2) - base) < mp.mpf("1e-10")


def test_gap_growth_direct_arithmetic():
    # D = 1: the log D term vanishes
    rhs = 2 * 10 - math.sqrt(6) * math.log(2 + 1 / math.sqrt(2))
    assert abs(float(gap_growth_margin(10, 20, 1)) - (20 - rhs)) < 1e-12
    assert abs(rhs - 17.5606010376) < 1e-9
    assert gap_growth_check(10, 20, 1)
    assert not gap_growth_check(5, 5, 10**12)


def test_disc_from_t():
    b0 = disc_from_t(0)
    assert b0.general == 64 and not b0.refined_applicable
    b5 = disc_from_t(5)
    assert b5.refined_applicable
    assert abs(float(mp.log(b5.general)) - (math.log(64) + 10 * math.sqrt(6))) < 1e-12
    assert abs(float(mp.log(b5.refined)) - (10 * math.sqrt(6) - math.log(2))) < 1e-12
    assert disc_from_t(2).general < disc_from_t(2.5).general


def test_disc_from_hessian_tends_to_the_general_shape():
    # (X/sqrt3)^6 with X -> 2 e^(2t/sqrt6) gives (64/27) e^(2 sqrt6 t)
    t = mp.mpf(30)
    ratio = disc_from_hessian(t) / (mp.mpf(64) / 27 * mp.exp(2 * mp.sqrt(6) * t))
    assert abs(ratio - 1) < mp.mpf("1e-10")
    assert disc_from_hessian(1, literal_exponent=True) > disc_from_hessian(1)


def test_hessian_floor():
    sols81 = [(-3, -2), (-1, -1), (0, 1), (1, 0), (1, 3), (2, -1)]
    assert hessian_floor_check(D81, sols81) == (True, None)
    assert hessian_floor_check(D81, []) == (True, None)
    # F_4 = (1,-5,4,1): H(1,0) = 13 < sqrt(3*257)/2, the single exception
    F4 = BinaryCubicForm(1, -5, 4, 1)
    assert hessian_floor_check(F4, [(0, 1), (1, 0), (4, 1), (1, 1)]) == (True, (1, 0))


def test_hessian_floor_two_violations_fail():
    # H = 13x^2 - 29xy + 31y^2 is below sqrt(771)/2 at (1, 0) and (-1, 0) only
    F4 = BinaryCubicForm(1, -5, 4, 1)
    assert hessian_floor_check(F4, [(1, 0), (-1, 0)]) == (False, (-1, 0))


@pytest.fixture(scope="module")
def d49_classes():
    R = build_resolvent(D49)
    classes = {}
    for p in D49_SOLS:
        ev = eval_point(R, *p)
        classes.setdefault(ev.related_index, []).append(ev)
    return R, classes


def test_pq_gap_identity(d49_classes):
    _, classes = d49_classes
    for evs in classes.values():
        e1, e2 = evs[0], evs[1]
        gap = pq_gap(e1, e2, 49)
        det = abs(e1.point[0] * e2.point[1] - e2.point[0] * e1.point[1])
        with mp.workprec(300):
            floor = mp.sqrt(147)
            assert abs(gap - floor * det) < mp.mpf("1e-60")
            assert gap >= floor - mp.mpf("1e-8")


def test_pq_gap_rejects_same_class(d49_classes):
    R, _ = d49_classes
    e = eval_point(R, 1, 0)
    with pytest.raises(SamePoint):
        pq_gap(e, e, 49)
    with pytest.raises(SamePoint):
        pq_gap(e, eval_point(R, -1, 0), 49)


def test_class_reports_pass_on_d49(d49_classes):
    R, classes = d49_classes
    L = build_lattice(search_units(D49, R.roots, 5), R.roots)
    for k, evs in classes.items():
        assert len(evs) == 3
        rep = class_report(D49, k, evs, L.covolume)
        names = {c.name.split()[0] for c in rep.checks}
        assert {"pq_gap", "gap_growth", "triangle_area", "gap_theorem", "triangle_nondegenerate"} <= names
        assert rep.ok, [c for c in rep.checks if not c.holds]
        ts = [ev.t for ev in rep.points]
        assert ts == sorted(ts)


def test_disc_bound_checks(d49_classes):
    _, classes = d49_classes
    evs = [ev for v in classes.values() for ev in v]
    checks, violations = disc_bound_checks(D49, evs)
    assert all(c.holds for c in checks) and violations == []


def test_triangle_area():
    assert triangle_area([(0, 0), (2, 0), (0, 3)]) == 3
    assert triangle_area([(0, 0), (1, 1), (2, 2)]) == 0
