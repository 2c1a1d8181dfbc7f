"""Matveev's lower bound and the threshold computations built on it.

The inequality solved for each branch is

    c * K1 * (2/sqrt3) * A1 * Lg  >=  sqrt2 * exp(sqrt6 t / 2) / (1 + exp(-sqrt6 t / sqrt5))

where Vol(Lambda) has been cancelled from both sides, K1 = (2/sqrt6) C(3) C0 d^2
and ``Lg`` bounds log x for x = 96.27... t''/A3 subject to x / log x <= K2 A1 A2.
Three ways of bounding that logarithm are offered:

``relaxed``  Lg = e/(e-1) log(K2 A1 A2), the closed form;
``sharp``    Lg = log x*, x* the largest root of x = K2 A1 A2 log x;
``omitted``  c = 1 with the relaxed logarithm, i.e. the e/(e-1) factor dropped.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mp, nstr

from . import numerics as nx
from .errors import NoCrossing
from .gaps import disc_from_hessian, disc_from_t
from .numerics import DEFAULT_PREC

BRANCHES = ("theorem11_pass1", "theorem11_pass2", "theorem12_nonmonic")
BRANCH_ALIASES = {"pass1": BRANCHES[0], "pass2": BRANCHES[1], "nonmonic": BRANCHES[2]}
LOG_STEPS = ("relaxed", "sharp", "omitted")
VOL_POLICIES = ("cancel", "louboutin")

# literal decimals as printed alongside the derivation
PAPER_CONSTANTS = {
    "combined": "1.5036e11",
    "K1": "1.2276e11",
    "W0_factor": "25.6708",
    "B_factor": "96.2751",
    "K2": "1.1892e13",
    "pass1_K1": "4.8484e11",
    "pass1_K2": "2.8184e14",
}
PAPER_T = {BRANCHES[0]: "27.91", BRANCHES[1]: "27.5321", BRANCHES[2]: "28.38"}
PAPER_D = {BRANCHES[0]: "5.31e59", BRANCHES[1]: "1.4e57", BRANCHES[2]: "9e58"}

HEIGHT_SLACK = "1.0016"  # ||u|| <= 1.0016 t once t >= 5
LAMBDA2_FACTOR = "6.01"  # ||tau(lambda_2)|| <= 6.01 t
PASS1_DISC = "5.31e59"
BRACKET = ("0.1", "1e4")
T_TOL = "1e-4"


@dataclass(frozen=True)
class MatveevInput:
    n: int
    d: int
    A: tuple
    B: object

    def __post_init__(self):
        if self.n < 2 or self.d < 1:
            raise ValueError("need n >= 2 and d >= 1")
        if len(self.A) != self.n:
            raise ValueError(f"expected {self.n} values A_j, got {len(self.A)}")
        if any(mp.mpf(a) <= 0 for a in self.A):
            raise ValueError("every A_j must be positive")
        if mp.mpf(self.B) < 1:
            raise ValueError("B must be at least 1")


def _cn_expr(n: int):
    e = nx.exp(1)
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    return nx.as_expr(16) / fact * e**n * (2 * n + 2) * (n + 2) * nx.as_expr(4 * n + 4) ** (n + 1) * (e * n / 2)


def _c0_expr(n: int, d: int):
    # log(e^(4.4n+7) n^5.5 d^2 log(en)) expanded to avoid huge intermediates
    a = nx.as_expr("4.4") * n + 7
    return a + nx.as_expr("5.5") * nx.log(n) + 2 * nx.log(d) + nx.log(1 + nx.log(n))


def _w0_factor_expr(d: int):
    """1.5 e d log(e d), so that W0 = log(factor * B)."""
    return nx.as_expr("1.5") * nx.exp(1) * d * (1 + nx.log(d))


def _value(expr, prec_bits):
    return nx.eval_to_error(expr, mp.ldexp(1, -(prec_bits - 16)), start_prec=prec_bits)


def matveev_constants(n: int, d: int, prec_bits: int = DEFAULT_PREC):
    """(C(n), C0(n, d))."""
    if n < 2 or d < 1:
        raise ValueError("need n >= 2 and d >= 1")
    with mp.workprec(prec_bits):
        cn = nx.eval_to_error(_cn_expr(n), 1, start_prec=prec_bits)
        # C(n) is large; certify to a relative error instead
        cn = nx.eval_to_error(_cn_expr(n), cn * mp.ldexp(1, -(prec_bits - 16)), start_prec=prec_bits)
        c0 = _value(_c0_expr(n, d), prec_bits)
    return cn, c0


def matveev_lower_bound(inp: MatveevInput, prec_bits: int = DEFAULT_PREC):
    """-C(n) C0 W0 d^2 Omega with W0 = log(1.5 e B d log(e d))."""
    cn, c0 = matveev_constants(inp.n, inp.d, prec_bits)
    with mp.workprec(prec_bits):
        w0 = mp.log(_value(_w0_factor_expr(inp.d), prec_bits) * mp.mpf(inp.B))
        omega = mp.fprod(mp.mpf(a) for a in inp.A)
        return -cn * c0 * w0 * inp.d**2 * omega


def b1_parameter(t_dd):
    """B1 = 3 (1.0016)(t'' + t''/4)."""
    t_dd = mp.mpf(t_dd)
    return 3 * mp.mpf(HEIGHT_SLACK) * (t_dd + t_dd / 4)


@dataclass(frozen=True)
class DerivedConstants:
    C_n: object
    C0: object
    combined: object  # C(3) C0 d^2
    K1: object  # (2/sqrt6) combined
    W0_factor: object
    B_factor: object  # W0_factor * 3 (1.0016) (5/4)
    K2: object  # K1 * B_factor
    pass1_K1: object  # K1 * 1.0016 (3/2 + sqrt6)
    pass1_K2: object  # K2 * 1.0016 (3/2 + sqrt6) * 6.01

    def as_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def derived_constants(prec_bits: int = DEFAULT_PREC) -> DerivedConstants:
    cn, c0 = matveev_constants(3, 3, prec_bits)
    with mp.workprec(prec_bits):
        combined = cn * c0 * 9
        k1 = 2 / mp.sqrt(6) * combined
        w = _value(_w0_factor_expr(3), prec_bits)
        slack = mp.mpf(HEIGHT_SLACK)
        bfac = w * 3 * slack * mp.mpf(5) / 4
        k2 = k1 * bfac
        a1c = slack * (mp.mpf(3) / 2 + mp.sqrt(6))
        return DerivedConstants(cn, c0, combined, k1, w, bfac, k2, k1 * a1c,
                                k2 * a1c * mp.mpf(LAMBDA2_FACTOR))


def literal_constants(prec_bits: int = DEFAULT_PREC) -> dict:
    with mp.workprec(prec_bits):
        return {k: mp.mpf(v) for k, v in PAPER_CONSTANTS.items()}


def log_step_check(k, prec_bits: int = DEFAULT_PREC):
    """For x/log x <= K (K > e^2): compare the sharp log x* with e/(e-1) log K.

    Returns (log x*, e/(e-1) log K, holds).
    """
    sharp = _value(nx.log_fixed_point(k), prec_bits)
    e = nx.exp(1)
    relaxed = _value(e / (e - 1) * nx.log(k), prec_bits)
    return sharp, relaxed, sharp <= relaxed


def _rhs(t):
    r6 = nx.sqrt(6)
    return nx.sqrt(2) * nx.exp(r6 * t / 2) / (1 + nx.exp(-r6 * t / nx.sqrt(5)))


def _a1(branch, t):
    r6 = nx.sqrt(6)
    if branch == BRANCHES[1]:
        return nx.as_expr("1.5") * t + nx.log(nx.as_expr(PASS1_DISC)) / 2
    return nx.as_expr(HEIGHT_SLACK) * (nx.as_expr("1.5") + r6) * t


def _a2(policy, t, prec_bits):
    if policy == "cancel":
        return nx.as_expr(LAMBDA2_FACTOR) * t
    r6 = nx.sqrt(6)
    a2 = nx.exp(r6 * t / 2) * (nx.log(nx.as_expr("0.5")) + 2 * r6 * t) / 4
    # a larger A_j keeps Matveev's bound valid; floor at 1 where the estimate is vacuous
    if nx.certified_sign(a2 - 1, start_prec=prec_bits) <= 0:
        return nx.as_expr(1)
    return a2


def _inequality(branch, policy, log_step, use_literal, t, prec_bits):
    """LHS - RHS of the branch inequality as an expression in t."""
    t = nx.as_expr(t)
    e = nx.exp(1)
    consts = literal_constants(prec_bits) if use_literal else derived_constants(prec_bits).as_dict()
    factor = e / (e - 1) if log_step != "omitted" else nx.as_expr(1)
    if use_literal and branch == BRANCHES[0] and policy == "cancel":
        k1 = nx.as_expr(consts["pass1_K1"])
        k2 = nx.as_expr(consts["pass1_K2"])
        a1, k = t, k2 * t * t
    else:
        a1 = _a1(branch, t)
        a2 = _a2(policy, t, prec_bits)
        k1 = nx.as_expr(consts["K1"])
        k = nx.as_expr(consts["K2"]) * a1 * a2
    if log_step == "sharp":
        lg = nx.log_fixed_point(k)
        factor = nx.as_expr(1)
    else:
        lg = nx.log(k)
    lhs = factor * k1 * (2 / nx.sqrt(3)) * a1 * lg
    return lhs, _rhs(t)


def _default_log_step(branch):
    return "sharp" if branch == BRANCHES[1] else "relaxed"


def _default_policy(branch):
    return "louboutin" if branch == BRANCHES[2] else "cancel"


@dataclass
class ThresholdReport:
    branch: str
    vol_policy: str
    log_step: str
    paper_constants_mode: bool
    constants: dict
    t_star: object
    bracket: tuple
    iterations: int
    lhs: object
    rhs: object
    d_general: object = None
    d_star: object = None
    d_hessian: object = None
    paper_t: object = None
    paper_d: object = None
    ratios: dict = field(default_factory=dict)

    def to_json(self, digits: int = 12) -> dict:
        fmt = lambda v: nstr(v, digits, strip_zeros=False)  # noqa: E731
        return {
            "branch": self.branch,
            "vol_policy": self.vol_policy,
            "log_step": self.log_step,
            "paper_constants_mode": self.paper_constants_mode,
            "t_star": fmt(self.t_star),
            "bracket": [fmt(b) for b in self.bracket],
            "iterations": str(self.iterations),
            "lhs_at_t_star": fmt(self.lhs),
            "rhs_at_t_star": fmt(self.rhs),
            "d_star": fmt(self.d_star),
            "d_general": fmt(self.d_general),
            "d_hessian": fmt(self.d_hessian),
            "paper_t": PAPER_T[self.branch],
            "paper_d": PAPER_D[self.branch],
            "ratios": {k: fmt(v) for k, v in sorted(self.ratios.items())},
            "constants": {k: fmt(v) for k, v in sorted(self.constants.items())},
            "digits": str(digits),
        }


def solve_t_threshold(branch: str, vol_policy: str | None = None, paper_constants: bool = False,
                      log_step: str | None = None, prec_bits: int = DEFAULT_PREC) -> ThresholdReport:
    """Largest t for which the branch inequality still holds.

    Monotone bisection on [0.1, 1e4] with certified signs, stopped once the
    bracket is narrower than 1e-4.  The inequality holds at the returned
    ``t_star`` (lower end) and fails at the upper end of ``bracket``.
    """
    branch = BRANCH_ALIASES.get(branch, branch)
    if branch not in BRANCHES:
        raise ValueError(f"unknown branch {branch!r}")
    vol_policy = vol_policy or _default_policy(branch)
    log_step = log_step or _default_log_step(branch)
    if vol_policy not in VOL_POLICIES:
        raise ValueError(f"unknown volume policy {vol_policy!r}")
    if log_step not in LOG_STEPS:
        raise ValueError(f"unknown log step {log_step!r}")

    def holds(t):
        lhs, rhs = _inequality(branch, vol_policy, log_step, paper_constants, t, prec_bits)
        return nx.certified_sign(lhs - rhs, start_prec=prec_bits) >= 0

    with mp.workprec(prec_bits):
        lo, hi = mp.mpf(BRACKET[0]), mp.mpf(BRACKET[1])
        tol = mp.mpf(T_TOL)
        if not holds(lo) or holds(hi):
            raise NoCrossing(f"{branch}: inequality does not change sign on [{BRACKET[0]}, {BRACKET[1]}]")
        steps = 0
        while hi - lo > tol:
            mid = (lo + hi) / 2
            if holds(mid):
                lo = mid
            else:
                hi = mid
            steps += 1
        lhs, rhs = _inequality(branch, vol_policy, log_step, paper_constants, lo, prec_bits)
        err = tol / 10
        lhs_v = nx.eval_to_error(lhs, err, start_prec=prec_bits)
        rhs_v = nx.eval_to_error(rhs, err, start_prec=prec_bits)
        consts = (literal_constants(prec_bits) if paper_constants
                  else derived_constants(prec_bits).as_dict())
        report = ThresholdReport(branch, vol_policy, log_step, paper_constants, consts,
                                 lo, (lo, hi), steps, lhs_v, rhs_v)
        bounds = disc_from_t(lo)
        report.d_general = bounds.general
        report.d_star = bounds.refined
        report.d_hessian = disc_from_hessian(lo, prec_bits=prec_bits)
        report.paper_t = mp.mpf(PAPER_T[branch])
        report.paper_d = mp.mpf(PAPER_D[branch])
        report.ratios = {
            "t_star/paper_t": lo / report.paper_t,
            "d_star/paper_d": report.d_star / report.paper_d,
            "d_general/paper_d": report.d_general / report.paper_d,
            "d_hessian/paper_d": report.d_hessian / report.paper_d,
        }
    return report



def thresholds_report(paper_constants: bool = False, prec_bits: int = DEFAULT_PREC) -> list:
    return [solve_t_threshold(b, paper_constants=paper_constants, prec_bits=prec_bits)
            for b in BRANCHES]
