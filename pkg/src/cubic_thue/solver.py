"""Exhaustive search for solutions of F(x, y) = +-1 and the per-form analysis."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ReducibleForm, ThueError
from .forms import (
    BinaryCubicForm,
    UnimodularMap,
    discriminant,
    g_covariant,
    hessian,
    is_irreducible,
    reduce,
)
from .gaps import class_report, disc_bound_checks, hessian_floor_check
from .numerics import DEFAULT_PREC, check_prec
from .resolvent import PointEvaluation, build_resolvent, eval_point
from .units import UnitLattice, build_lattice, search_units

DEFAULT_BOX = 1000
DEFAULT_UNIT_BOUND = 10
_INT64_SAFE = 2**62


@dataclass(frozen=True)
class SolutionPoint:
    """A +-class of solutions, stored with y > 0, or y = 0 and x > 0."""

    x: int
    y: int
    value: int
    evaluation: PointEvaluation | None = None

    @property
    def plus_representative(self) -> tuple[int, int]:
        """The member of the class with F = +1."""
        return (self.x, self.y) if self.value == 1 else (-self.x, -self.y)

    def to_json(self, digits: int) -> dict:
        out = {"x": str(self.x), "y": str(self.y), "value": str(self.value)}
        if self.evaluation is not None:
            out["evaluation"] = self.evaluation.to_json(digits)
        return out


def normalize(x: int, y: int) -> tuple[int, int]:
    if y < 0 or (y == 0 and x < 0):
        return -x, -y
    return x, y


def _search_numpy(coeffs, box):
    a, b, c, d = coeffs
    xs = np.arange(-box, box + 1, dtype=np.int64)
    x2, x3 = xs * xs, xs * xs * xs
    hits = []
    for y in range(0, box + 1):
        vals = a * x3 + b * x2 * y + c * xs * (y * y) + d * y**3
        for i in np.flatnonzero(np.abs(vals) == 1):
            hits.append((int(xs[i]), y))
    return hits


def _search_exact(F, box):
    return [(x, y) for y in range(0, box + 1) for x in range(-box, box + 1) if abs(F(x, y)) == 1]


def enumerate_solutions(F: BinaryCubicForm, box: int = DEFAULT_BOX) -> list[SolutionPoint]:
    """Every normalized (x, y) with max(|x|, |y|) <= box and F(x, y) = +-1, sorted."""
    if box < 1:
        raise ValueError("box must be at least 1")
    if sum(abs(v) for v in F.coeffs) * box**3 < _INT64_SAFE:
        raw = _search_numpy(F.coeffs, box)
    else:
        raw = _search_exact(F, box)
    pts = set()
    for x, y in raw:
        nx_, ny = normalize(x, y)
        if abs(nx_) <= box:
            pts.add((nx_, ny))
    out = []
    for x, y in sorted(pts):
        v = F(x, y)  # exact re-check
        if abs(v) != 1:  # pragma: no cover - guarded by the int64 bound
            raise AssertionError(f"search returned a non-solution {(x, y)}")
        out.append(SolutionPoint(x, y, v))
    return out


def plus_solutions(sols) -> list[tuple[int, int]]:
    """F = +1 representatives of every class, sorted."""
    return sorted(s.plus_representative for s in sols)


def family_form(name: str, parameter: int) -> BinaryCubicForm:
    """``thomas_g1``: x^3 + n x^2 y - (n+3) x y^2 + y^3; ``f_m``: x^3 - (m+1) x^2 y + m x y^2 + y^3."""
    n = int(parameter)
    if name in ("thomas_g1", "thomas"):
        return BinaryCubicForm(1, n, -(n + 3), 1)
    if name in ("f_m", "fm"):
        return BinaryCubicForm(1, -(n + 1), n, 1)
    raise ValueError(f"unknown family {name!r}")


def minimal_solution(evaluations):
    """Smallest ||u||, ties broken by (t, s, x, y)."""
    if not evaluations:
        return None
    return min(evaluations, key=lambda ev: (ev.norm, ev.t, ev.s, ev.point))


@dataclass
class FormAnalysis:
    form: BinaryCubicForm
    discriminant: int
    box: int
    prec_bits: int
    solutions: list
    reduced: BinaryCubicForm | None = None
    reduction_map: UnimodularMap | None = None
    classes: dict = field(default_factory=dict)
    gap_reports: list = field(default_factory=list)
    form_checks: list = field(default_factory=list)
    hessian_floor: tuple | None = None
    minimal: PointEvaluation | None = None
    lattice: UnitLattice | None = None
    lattice_note: str | None = None

    @property
    def plus_count(self) -> int:
        # each +-class holds exactly one point with F = +1
        return len(self.solutions)

    @property
    def value_counts(self) -> dict:
        pos = sum(1 for s in self.solutions if s.value == 1)
        return {"+1": pos, "-1": len(self.solutions) - pos}

    @property
    def checks_ok(self) -> bool:
        floor_ok = self.hessian_floor is None or self.hessian_floor[0]
        return floor_ok and all(c.holds for c in self.form_checks) and all(r.ok for r in self.gap_reports)

    def to_json(self, digits: int | None = None) -> dict:
        digits = digits or max(15, int(self.prec_bits * 0.30103) - 10)
        out = {
            "form": self.form.to_json(),
            "discriminant": str(self.discriminant),
            "box": str(self.box),
            "prec_bits": str(self.prec_bits),
            "count_note": "within search box",
            "count_F_eq_1": str(self.plus_count),
            "count_abs_F_eq_1": str(len(self.solutions)),
            "normalized_value_counts": {k: str(v) for k, v in self.value_counts.items()},
            "solutions": [s.to_json(digits) for s in self.solutions],
        }
        if self.reduced is not None:
            out["reduced"] = {"form": self.reduced.to_json(), "map": self.reduction_map.to_json()}
            out["G"] = [str(v) for v in g_covariant(self.form)]
            h = hessian(self.form)
            out["H"] = h.to_json()
        if self.classes:
            out["related_classes"] = {
                str(k): [[str(v) for v in pt] for pt in pts] for k, pts in sorted(self.classes.items())
            }
        if self.hessian_floor is not None:
            passes, exc = self.hessian_floor
            out["hessian_floor"] = {"passes": passes,
                                    "exception": None if exc is None else [str(v) for v in exc]}
        if self.minimal is not None:
            out["minimal_solution"] = [str(v) for v in self.minimal.point]
        if self.gap_reports:
            out["gap_reports"] = [r.to_json(digits) for r in self.gap_reports]
        if self.form_checks:
            out["form_checks"] = [c.to_json(digits) for c in self.form_checks]
        if self.lattice is not None:
            out["unit_lattice"] = self.lattice.to_json(digits)
        if self.lattice_note:
            out["unit_lattice_note"] = self.lattice_note
        out["checks_ok"] = self.checks_ok
        out["digits"] = str(digits)
        return out


def unit_lattice_for(F: BinaryCubicForm, roots, unit_bound: int = DEFAULT_UNIT_BOUND):
    """Unit lattice of Z[theta] for monic F, else (None, reason)."""
    if not F.is_monic:
        return None, "unit search needs a monic form"
    try:
        return build_lattice(search_units(F, roots, unit_bound), roots), None
    except ThueError as exc:
        return None, f"{exc.code}: {exc.detail}"


def analyze_form(F: BinaryCubicForm, box: int = DEFAULT_BOX, prec_bits: int = DEFAULT_PREC,
                 unit_bound: int = DEFAULT_UNIT_BOUND, gaps: bool = True) -> FormAnalysis:
    """Reduction, enumeration, resolvent coordinates, relatedness and gap checks."""
    prec_bits = check_prec(prec_bits)
    if not is_irreducible(F):
        raise ReducibleForm(f"{F} is reducible over Q")
    D = discriminant(F)
    sols = enumerate_solutions(F, box)
    analysis = FormAnalysis(F, D, box, prec_bits, sols)
    if D < 0:
        return analysis
    analysis.reduced, analysis.reduction_map = reduce(F)
    R = build_resolvent(F, prec_bits)
    evaluated = []
    plus_evals = []
    for s in sols:
        ev = eval_point(R, *s.plus_representative)
        plus_evals.append(ev)
        evaluated.append(SolutionPoint(s.x, s.y, s.value, ev))
    analysis.solutions = evaluated
    for ev in plus_evals:
        analysis.classes.setdefault(ev.related_index, []).append(ev)
    analysis.minimal = minimal_solution(plus_evals)
    analysis.hessian_floor = hessian_floor_check(F, [ev.point for ev in plus_evals])
    analysis.lattice, analysis.lattice_note = unit_lattice_for(F, R.roots, unit_bound)
    if gaps:
        cov = analysis.lattice.covolume if analysis.lattice is not None else None
        for k in sorted(analysis.classes):
            analysis.gap_reports.append(class_report(F, k, analysis.classes[k], cov, prec_bits))
        analysis.form_checks, _ = disc_bound_checks(F, plus_evals, prec_bits)
    analysis.classes = {k: sorted(ev.point for ev in v) for k, v in analysis.classes.items()}
    return analysis
