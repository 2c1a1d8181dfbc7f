"""Gap principles between solutions in (t, s) space.

Every inequality is reported with a signed margin (positive means the
inequality holds with room to spare) and judged against the absolute slack
:func:`resolvent.tolerance`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import NamedTuple

from mpmath import mp, nstr

from .errors import SamePoint
from .forms import BinaryCubicForm, discriminant, hessian
from .resolvent import GUARD_BITS, PointEvaluation, g_function, tolerance
from .numerics import DEFAULT_PREC


class Check(NamedTuple):
    name: str
    holds: bool
    margin: object

    def to_json(self, digits: int) -> dict:
        return {"name": self.name, "holds": self.holds,
                "margin": nstr(self.margin, digits, strip_zeros=False)}


class DiscBounds(NamedTuple):
    general: object
    refined: object
    refined_applicable: bool


@dataclass
class GapReport:
    form: BinaryCubicForm
    related_index: int
    points: list
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_json(self, digits: int) -> dict:
        return {
            "form": self.form.to_json(),
            "related_index": str(self.related_index),
            "points": [[str(v) for v in ev.point] for ev in self.points],
            "t": [nstr(ev.t, digits, strip_zeros=False) for ev in self.points],
            "checks": [c.to_json(digits) for c in self.checks],
        }


def hessian_floor_check(F: BinaryCubicForm, solutions):
    """At most one solution may have H < sqrt(3D)/2.

    Exact: H < sqrt(3D)/2 iff 4 H^2 < 3 D (H >= 0 for D > 0).  Returns
    (passes, exceptional point or None); the exception is the
    lexicographically smallest violating point.
    """
    D = discriminant(F)
    H = hessian(F)
    low = sorted(tuple(pt) for pt in solutions if 4 * H(*pt) ** 2 < 3 * D)
    if not low:
        return True, None
    return len(low) == 1, low[0]


def _same_class(p1, p2):
    return tuple(p1) == tuple(p2) or (p1[0] == -p2[0] and p1[1] == -p2[1])


def pq_gap(e1: PointEvaluation, e2: PointEvaluation, D: int):
    """|p q' - p' q| for two distinct related solutions; at least sqrt(3D)."""
    if _same_class(e1.point, e2.point):
        raise SamePoint(f"{e1.point} and {e2.point} are the same projective solution")
    with mp.workprec(max(e1.prec_bits, e2.prec_bits) + GUARD_BITS):
        return abs(e1.p * e2.q - e2.p * e1.q)


def gap_growth_margin(t, t_next, D: int):
    """t' - (2t + (sqrt6/6) log D - sqrt6 log(2 + 1/sqrt2))."""
    r6 = mp.sqrt(6)
    rhs = 2 * mp.mpf(t) + r6 / 6 * mp.log(D) - r6 * mp.log(2 + 1 / mp.sqrt(2))
    return mp.mpf(t_next) - rhs


def gap_growth_check(t, t_next, D: int, slack=0) -> bool:
    return gap_growth_margin(t, t_next, D) >= -mp.mpf(slack)


def gap_theorem_lower(t, t_prime, vol):
    """Lower bound for t'' given t <= t' and the covolume of the unit lattice."""
    t, t_prime, vol = mp.mpf(t), mp.mpf(t_prime), mp.mpf(vol)
    r6 = mp.sqrt(6)
    return mp.sqrt(2) * vol * mp.exp(r6 * t / 2) / (1 + mp.exp(-r6 * (t_prime - t) / mp.sqrt(5)))


def disc_from_t(t) -> DiscBounds:
    """D <= 64 e^(2 sqrt6 t), and D <= e^(2 sqrt6 t)/2 once t >= 5."""
    t = mp.mpf(t)
    core = mp.exp(2 * mp.sqrt(6) * t)
    return DiscBounds(64 * core, core / 2, t >= 5)


def disc_from_hessian(t, literal_exponent: bool = False, prec_bits: int = DEFAULT_PREC):
    """D bound read off sqrt(3D)/2 <= H <= hessian_bound(t, g(t), D).

    Solving for D gives D <= (X / sqrt3)^6 with X the bracket of the Hessian
    upper bound evaluated at |s| = g(t).
    """
    with mp.workprec(prec_bits + GUARD_BITS):
        t = mp.mpf(t)
        s = g_function(t, prec_bits)
        r2, r6 = mp.sqrt(2), mp.sqrt(6)
        last = mp.exp(-4 * t / 6) if literal_exponent else mp.exp(-4 * t / r6)
        x = mp.exp(2 * t / r6) * (mp.exp(2 * s / r2) + mp.exp(-2 * s / r2) + 2) / 2 + mp.mpf(3) / 2 * last
        return (x / mp.sqrt(3)) ** 6


def triangle_area(points):
    """Area of the triangle spanned by three (t, s) points."""
    (t1, s1), (t2, s2), (t3, s3) = points
    return abs((t2 - t1) * (s3 - s1) - (t3 - t1) * (s2 - s1)) / 2


def class_report(F: BinaryCubicForm, index: int, evaluations, covolume=None,
                 prec_bits: int = DEFAULT_PREC) -> GapReport:
    """All pairwise and triple checks for one relatedness class."""
    D = discriminant(F)
    tol = tolerance(prec_bits)
    pts = sorted(evaluations, key=lambda ev: (ev.t, ev.s, ev.point))
    report = GapReport(F, index, pts)
    with mp.workprec(prec_bits + GUARD_BITS):
        for i in range(len(pts) - 1):
            if pts[i + 1].t - pts[i].t <= tol:
                report.checks.append(Check(f"distinct_t[{i}]", False, pts[i + 1].t - pts[i].t))
        floor = mp.sqrt(3 * D)
        for e1, e2 in combinations(pts, 2):
            tag = f"{e1.point}-{e2.point}"
            gap = pq_gap(e1, e2, D)
            report.checks.append(Check(f"pq_gap {tag}", gap - floor >= -tol, gap - floor))
            det = abs(e1.point[0] * e2.point[1] - e2.point[0] * e1.point[1])
            ident = abs(gap - floor * det)
            report.checks.append(Check(f"pq_identity {tag}", ident <= tol * max(1, gap), -ident))
            m = gap_growth_margin(e1.t, e2.t, D)
            report.checks.append(Check(f"gap_growth {tag}", m >= -tol, m))
        for e1, e2, e3 in combinations(pts, 3):
            tag = f"{e1.point}-{e2.point}-{e3.point}"
            area2 = 2 * triangle_area([(e.t, e.s) for e in (e1, e2, e3)])
            report.checks.append(Check(f"triangle_nondegenerate {tag}", area2 > tol, area2))
            if covolume is not None:
                report.checks.append(Check(f"triangle_area {tag}", area2 - covolume >= -tol,
                                           area2 - covolume))
                low = gap_theorem_lower(e1.t, e2.t, covolume)
                report.checks.append(Check(f"gap_theorem {tag}", e3.t - low >= -tol, e3.t - low))
    return report


def disc_bound_checks(F: BinaryCubicForm, evaluations, prec_bits: int = DEFAULT_PREC):
    """D <= 64 e^(2 sqrt6 t) for all solutions but at most one (refined bound when t >= 5)."""
    D = discriminant(F)
    tol = tolerance(prec_bits)
    checks = []
    violations = []
    with mp.workprec(prec_bits + GUARD_BITS):
        for ev in sorted(evaluations, key=lambda e: e.point):
            bounds = disc_from_t(ev.t)
            margin = bounds.general - D
            if margin < -tol:
                violations.append(ev.point)
            if bounds.refined_applicable:
                rm = bounds.refined - D
                checks.append(Check(f"disc_refined {ev.point}", rm >= -tol, rm))
        checks.append(Check("disc_general_exceptions", len(violations) <= 1,
                            mp.mpf(1 - len(violations))))
    return checks, violations
