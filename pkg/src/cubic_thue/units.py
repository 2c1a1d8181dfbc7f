"""Units of Z[theta], their logarithmic embedding and the unit lattice.

Embedding order is the ascending order of the roots theta of F(x, 1).  The
trace-zero plane is given orthonormal coordinates (t, s) along
beta = (1, 1, -2)/sqrt(6) and alpha = (1, -1, 0)/sqrt(2).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from mpmath import mp, nstr

from .errors import EmptySearch, RankDeficient, ZeroElement
from .forms import BinaryCubicForm
from .numerics import RootTriple

_GUARD = 32
_MAX_DENOMINATOR = 10**6


@dataclass(frozen=True, order=True)
class OrderElement:
    """e0 + e1 theta + e2 theta^2."""

    e0: int
    e1: int
    e2: int

    @property
    def coords(self):
        return (self.e0, self.e1, self.e2)

    def is_zero(self):
        return self.e0 == 0 and self.e1 == 0 and self.e2 == 0


def _mult_matrix(coeffs):
    """Matrix of multiplication by theta on (1, theta, theta^2), by columns."""
    a, b, c, d = (Fraction(v) for v in coeffs)
    return [
        [Fraction(0), Fraction(0), -d / a],
        [Fraction(1), Fraction(0), -c / a],
        [Fraction(0), Fraction(1), -b / a],
    ]


def _matmul(m, n):
    return [[sum(m[i][k] * n[k][j] for k in range(3)) for j in range(3)] for i in range(3)]


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def element_norm(e: OrderElement, coeffs) -> Fraction:
    """Exact norm N(e) = det of multiplication by e; an integer when F is monic."""
    m = _mult_matrix(coeffs)
    m2 = _matmul(m, m)
    mat = [
        [e.e0 * (i == j) + e.e1 * m[i][j] + e.e2 * m2[i][j] for j in range(3)]
        for i in range(3)
    ]
    return _det3(mat)


def embeddings(e: OrderElement, roots: RootTriple):
    with mp.workprec(roots.prec_bits + _GUARD):
        return tuple(e.e0 + e.e1 * r + e.e2 * r * r for r in roots.roots)


def log_embed(e: OrderElement, roots: RootTriple):
    """(log|sigma_1(e)|, log|sigma_2(e)|, log|sigma_3(e)|)."""
    if e.is_zero():
        raise ZeroElement("the zero element has no logarithmic embedding")
    with mp.workprec(roots.prec_bits + _GUARD):
        return tuple(mp.log(abs(v)) for v in embeddings(e, roots))


def plane_coords(v):
    """Orthonormal (t, s) coordinates of the projection of v onto x+y+z = 0."""
    r2, r6 = mp.sqrt(2), mp.sqrt(6)
    return ((v[0] + v[1] - 2 * v[2]) / r6, (v[0] - v[1]) / r2)


def from_plane(t, s):
    r2, r6 = mp.sqrt(2), mp.sqrt(6)
    return (t / r6 + s / r2, t / r6 - s / r2, -2 * t / r6)


def search_units(F: BinaryCubicForm, roots: RootTriple, coeff_bound: int) -> list[OrderElement]:
    """All e0 + e1 theta + e2 theta^2 with |e_i| <= coeff_bound and norm +-1, except +-1.

    Norms are computed exactly.  The result is sorted lexicographically.
    """
    if not F.is_monic:
        raise ValueError("unit search runs in Z[theta] and needs a monic form")
    if coeff_bound < 1:
        raise EmptySearch(f"coefficient box of radius {coeff_bound} is empty")
    _, b, c, d = F.coeffs
    m = [[0, 0, -d], [1, 0, -c], [0, 1, -b]]
    m2 = [[sum(m[i][k] * m[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    rng = range(-coeff_bound, coeff_bound + 1)
    found = []
    for e0, e1, e2 in product(rng, rng, rng):
        if e1 == 0 and e2 == 0:
            continue  # rational integers: only +-1 have norm +-1
        mat = [
            [e0 * (i == j) + e1 * m[i][j] + e2 * m2[i][j] for j in range(3)]
            for i in range(3)
        ]
        if abs(_det3(mat)) == 1:
            found.append(OrderElement(e0, e1, e2))
    if not found:
        raise EmptySearch(f"no units with coefficients bounded by {coeff_bound}")
    return found


@dataclass(frozen=True)
class UnitLattice:
    generators: tuple
    basis: tuple  # two log-vectors in the plane x + y + z = 0
    covolume: object
    prec_bits: int

    @property
    def plane_basis(self):
        with mp.workprec(self.prec_bits + _GUARD):
            return tuple(plane_coords(b) for b in self.basis)

    @property
    def basis_norms(self):
        with mp.workprec(self.prec_bits + _GUARD):
            return tuple(mp.sqrt(sum(x * x for x in b)) for b in self.basis)

    @property
    def angle(self):
        (x1, y1), (x2, y2) = self.plane_basis
        with mp.workprec(self.prec_bits + _GUARD):
            n1, n2 = self.basis_norms
            return mp.acos((x1 * x2 + y1 * y2) / (n1 * n2))

    def to_json(self, digits: int) -> dict:
        fmt = lambda v: nstr(v, digits, strip_zeros=False)  # noqa: E731
        return {
            "generators": str(len(self.generators)),
            "basis": [[fmt(x) for x in b] for b in self.basis],
            "covolume": fmt(self.covolume),
            "digits": str(digits),
        }


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def _to_fraction(x, tol) -> Fraction:
    f = Fraction(int(mp.nint(x * 10**30)), 10**30).limit_denominator(_MAX_DENOMINATOR)
    if abs(x - mp.mpf(f.numerator) / f.denominator) > tol:
        raise RankDeficient("log-vectors do not lie in a common lattice at working precision")
    return f


def gauss_reduce(u, v):
    """Lagrange-Gauss reduction of a 2-D basis: ||u|| <= ||v|| <= ||v +- u||."""
    if _dot(u, u) > _dot(v, v):
        u, v = v, u
    while True:
        k = int(mp.nint(_dot(u, v) / _dot(u, u)))
        if k:
            v = (v[0] - k * u[0], v[1] - k * u[1])
        if _dot(v, v) < _dot(u, u):
            u, v = v, u
            continue
        return u, v


def build_lattice(units, roots: RootTriple) -> UnitLattice:
    """Reduced basis and covolume of the lattice generated by the units' log-vectors."""
    prec = roots.prec_bits
    with mp.workprec(prec + _GUARD):
        tol = mp.ldexp(mp.mpf(1), -(prec // 2))
        vecs = []
        for u in units:
            pc = plane_coords(log_embed(u, roots))
            if mp.sqrt(_dot(pc, pc)) > tol:
                vecs.append(pc)
        if not vecs:
            raise RankDeficient("no unit of infinite order among the inputs")
        vecs.sort(key=lambda w: _dot(w, w))
        b1 = vecs[0]
        b2 = None
        for w in vecs[1:]:
            if abs(_cross(b1, w)) > tol * mp.sqrt(_dot(b1, b1) * _dot(w, w)):
                b2 = w
                break
        if b2 is None:
            raise RankDeficient("all units are multiplicatively dependent")
        det = _cross(b1, b2)
        # rational coordinates of every generator over (b1, b2)
        rows = []
        for w in vecs:
            c1 = _cross(w, b2) / det
            c2 = _cross(b1, w) / det
            rows.append((_to_fraction(c1, tol), _to_fraction(c2, tol)))
        den = 1
        for c1, c2 in rows:
            den = math.lcm(den, c1.denominator, c2.denominator)
        cols = [(int(c1 * den), int(c2 * den)) for c1, c2 in rows]
        # two-row Hermite normal form by extended gcd
        cur = (0, 0)
        second = 0
        for v in cols:
            if cur[0] == 0 and v[0] == 0:
                second = math.gcd(second, cur[1], v[1])
                cur = (0, 0)
                continue
            g, s, t = _egcd(cur[0], v[0])
            new = (s * cur[0] + t * v[0], s * cur[1] + t * v[1])
            p, q = v[0] // g, cur[0] // g
            other = p * cur[1] - q * v[1]
            second = math.gcd(second, other)
            cur = new
        if cur[0] == 0 or second == 0:
            raise RankDeficient("generated lattice has rank < 2")
        w1 = tuple((cur[0] * b1[i] + cur[1] * b2[i]) / den for i in range(2))
        w2 = tuple(second * b2[i] / den for i in range(2))
        r1, r2 = gauss_reduce(w1, w2)
        covolume = abs(_cross(r1, r2))
        basis = (from_plane(*r1), from_plane(*r2))
    return UnitLattice(tuple(units), basis, covolume, prec)


def _egcd(a, b):
    """(g, s, t) with s a + t b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def abs_log_height(e: OrderElement, roots: RootTriple):
    """Absolute logarithmic height of an algebraic integer of Z[theta].

    (1/6) (sum |log|sigma_i(e)|| + log|N(e)|); the norm term collects the
    non-archimedean places by the product formula.
    """
    if e.is_zero():
        raise ZeroElement("height of zero is undefined")
    if roots.coeffs[0] != 1:
        raise ValueError("heights are computed for elements of Z[theta] with theta integral")
    norm = element_norm(e, roots.coeffs)
    logs = log_embed(e, roots)
    with mp.workprec(roots.prec_bits + _GUARD):
        return (sum(abs(v) for v in logs) + mp.log(abs(norm.numerator))) / 6


def decompose_log(target, L: UnitLattice):
    """Closest lattice point m b1 + n b2 to ``target``; returns (m, n, residual)."""
    with mp.workprec(L.prec_bits + _GUARD):
        pt = plane_coords(target)
        (p1, p2) = L.plane_basis
        det = _cross(p1, p2)
        c1 = _cross(pt, p2) / det
        c2 = _cross(p1, pt) / det
        m0, n0 = int(mp.floor(c1)), int(mp.floor(c2))
        best = None
        for m in (m0 - 1, m0, m0 + 1, m0 + 2):
            for n in (n0 - 1, n0, n0 + 1, n0 + 2):
                r = (pt[0] - m * p1[0] - n * p2[0], pt[1] - m * p1[1] - n * p2[1])
                dist = _dot(r, r)
                if best is None or dist < best[0]:
                    best = (dist, m, n)
        _, m, n = best
        b1, b2 = L.basis
        residual = tuple(target[i] - m * b1[i] - n * b2[i] for i in range(3))
    return m, n, residual


def l1(v):
    return sum(abs(x) for x in v)


def l2(v):
    return mp.sqrt(sum(x * x for x in v))


def louboutin_bound(D: int):
    """Upper bound (sqrt(3)/8) sqrt(D) log^2 D for the covolume."""
    return mp.sqrt(3) / 8 * mp.sqrt(D) * mp.log(D) ** 2


def root_ratio_constant(labeled):
    """|(rho - rho'') / (rho' - rho)| for labelled roots (rho, rho', rho'')."""
    r, rp, rpp = labeled
    return abs((r - rpp) / (rp - r))


def lambda1_height_bound(u0_norm, D: int):
    """Bound (1/6)(3 ||u(x0, y0)|| + log D) for the height of the root-ratio constant."""
    return (3 * mp.mpf(u0_norm) + mp.log(D)) / 6


def parse_units_json(text: str) -> list[OrderElement]:
    """Units supplied externally as a JSON list of integer triples."""
    data = json.loads(text)
    return [OrderElement(*(int(v) for v in triple)) for triple in data]
