import json
import math

import pytest
from mpmath import mp

from cubic_thue import matveev as mv
from cubic_thue.errors import NoCrossing


def _cn_float(n):
    return 16 / math.factorial(n) * math.e**n * (2 * n + 2) * (n + 2) * (4 * n + 4) ** (n + 1) * (math.e * n / 2)


def _c0_float(n, d):
    return math.log(math.exp(4.4 * n + 7) * n**5.5 * d**2 * math.log(math.e * n))


def test_constants_against_float_oracle():
    cn, c0 = mv.matveev_constants(3, 3)
    assert abs(float(cn) / _cn_float(3) - 1) < 1e-13
    assert abs(float(c0) - _c0_float(3, 3)) < 1e-12
    assert abs(float(cn) - 5.72503e8) / 5.72503e8 < 1e-5


def test_cn_increasing():
    vals = [mv.matveev_constants(n, 3)[0] for n in range(2, 7)]
    assert all(a < b for a, b in zip(vals, vals[1:]))


def test_combined_coefficients_against_printed_decimals():
    c = mv.derived_constants()
    assert abs(c.combined / mp.mpf("1.5036e11") - 1) < mp.mpf("0.002")
    assert abs(c.K1 / mp.mpf("1.2276e11") - 1) < mp.mpf("0.001")
    assert abs(c.W0_factor - mp.mpf("25.6708")) < mp.mpf("1e-4")
    # the printed 96.2751, 1.1892e13 and 4.8484e11 drift by at most half a percent
    assert abs(c.B_factor / mp.mpf("96.2751") - 1) < mp.mpf("0.005")
    assert abs(c.K2 / mp.mpf("1.1892e13") - 1) < mp.mpf("0.005")
    assert abs(c.pass1_K1 / mp.mpf("4.8484e11") - 1) < mp.mpf("0.005")
    assert abs(c.pass1_K2 / mp.mpf("2.8184e14") - 1) < mp.mpf("0.005")


def test_lower_bound_plug_in():
    inp = mv.MatveevInput(3, 3, (1, 1, 1), 1)
    w = 1.5 * math.e * 3 * math.log(3 * math.e)
    want = -_cn_float(3) * _c0_float(3, 3) * math.log(w) * 9
    assert abs(float(mv.matveev_lower_bound(inp)) / want - 1) < 1e-12


def test_lower_bound_scaling_and_monotonicity():
    base = mv.matveev_lower_bound(mv.MatveevInput(3, 3, (1, 2, 3), 5))
    doubled = mv.matveev_lower_bound(mv.MatveevInput(3, 3, (1, 4, 3), 5))
    assert abs(doubled / base - 2) < mp.mpf("1e-30")
    assert mv.matveev_lower_bound(mv.MatveevInput(3, 3, (1, 2, 3), 50)) < base


def test_input_validation():
    with pytest.raises(ValueError):
        mv.MatveevInput(1, 3, (1,), 1)
    with pytest.raises(ValueError):
        mv.MatveevInput(2, 3, (1, 0), 1)
    with pytest.raises(ValueError):
        mv.MatveevInput(2, 3, (1, 1), mp.mpf("0.5"))


def test_b1_parameter():
    assert mv.b1_parameter(4) == 3 * mp.mpf("1.0016") * 5


def _oracle_threshold(a1, a2, k1, k2, factor):
    """Plain float bisection of factor*K1*(2/sqrt3)*A1*log(K2 A1 A2) = sqrt2 e^(sqrt6 t/2)/(1+e^(-sqrt6 t/sqrt5))."""
    r6 = math.sqrt(6)

    def phi(t):
        lhs = factor * k1 * (2 / math.sqrt(3)) * a1(t) * math.log(k2 * a1(t) * a2(t))
        return lhs - math.sqrt(2) * math.exp(r6 * t / 2) / (1 + math.exp(-r6 * t / math.sqrt(5)))

    lo, hi = 5.0, 60.0
    for _ in range(80):
        mid = (lo + hi) / 2
        lo, hi = (mid, hi) if phi(mid) >= 0 else (lo, mid)
    return lo


def test_pass1_matches_float_oracle():
    c = mv.derived_constants()
    a1 = lambda t: 1.0016 * (1.5 + math.sqrt(6)) * t  # noqa: E731
    want = _oracle_threshold(a1, lambda t: 6.01 * t, float(c.K1), float(c.K2), math.e / (math.e - 1))
    rep = mv.solve_t_threshold("pass1")
    assert abs(float(rep.t_star) - want) < 2e-4
    assert abs(rep.t_star / mp.mpf("27.91") - 1) < mp.mpf("0.01")


def test_nonmonic_matches_float_oracle():
    c = mv.derived_constants()
    r6 = math.sqrt(6)
    a1 = lambda t: 1.0016 * (1.5 + r6) * t  # noqa: E731
    a2 = lambda t: math.exp(r6 * t / 2) * (math.log(0.5) + 2 * r6 * t) / 4  # noqa: E731
    want = _oracle_threshold(a1, a2, float(c.K1), float(c.K2), math.e / (math.e - 1))
    rep = mv.solve_t_threshold("nonmonic")
    assert abs(float(rep.t_star) - want) < 2e-4
    assert abs(rep.t_star / mp.mpf("28.38") - 1) < mp.mpf("0.01")


def test_pass2_log_steps():
    c = mv.derived_constants()
    a1 = lambda t: 1.5 * t + math.log(5.31e59) / 2  # noqa: E731
    omitted = _oracle_threshold(a1, lambda t: 6.01 * t, float(c.K1), float(c.K2), 1.0)
    rep = mv.solve_t_threshold("pass2", log_step="omitted")
    assert abs(float(rep.t_star) - omitted) < 2e-4
    # the value as printed is reproduced only without the e/(e-1) factor
    assert abs(rep.t_star - mp.mpf("27.5321")) < mp.mpf("0.002")
    sharp = mv.solve_t_threshold("pass2")
    relaxed = mv.solve_t_threshold("pass2", log_step="relaxed")
    assert sharp.log_step == "sharp"
    assert omitted < sharp.t_star < relaxed.t_star
    assert abs(sharp.t_star / mp.mpf("27.5321") - 1) < mp.mpf("0.01")
    assert abs(relaxed.t_star / mp.mpf("27.5321") - 1) > mp.mpf("0.01")


def test_bracket_certification():
    rep = mv.solve_t_threshold("pass1")
    lo, hi = rep.bracket
    assert hi - lo <= mp.mpf("1e-4") and lo == rep.t_star
    assert rep.lhs >= rep.rhs


def test_log_step_on_solved_fixed_point():
    rep = mv.solve_t_threshold("pass1")
    c = mv.derived_constants()
    t = rep.t_star
    k = c.K2 * mp.mpf("1.0016") * (mp.mpf(3) / 2 + mp.sqrt(6)) * t * mp.mpf("6.01") * t
    sharp, relaxed, holds = mv.log_step_check(k)
    assert holds and sharp < relaxed


def test_paper_constants_mode_within_one_percent():
    for b in mv.BRANCHES:
        derived = mv.solve_t_threshold(b)
        literal = mv.solve_t_threshold(b, paper_constants=True)
        assert abs(literal.t_star / derived.t_star - 1) < mp.mpf("0.01")


def test_no_crossing(monkeypatch):
    monkeypatch.setattr(mv, "BRACKET", ("0.1", "1"))
    with pytest.raises(NoCrossing):
        mv.solve_t_threshold("pass1")


def test_unknown_options():
    with pytest.raises(ValueError):
        mv.solve_t_threshold("pass9")
    with pytest.raises(ValueError):
        mv.solve_t_threshold("pass1", log_step="exact")


def test_report_json_is_deterministic_and_stringly():
    a = [r.to_json() for r in mv.thresholds_report()]
    b = [r.to_json() for r in mv.thresholds_report()]
    assert json.dumps(a) == json.dumps(b)
    assert a[0]["paper_d"] == "5.31e59" and a[1]["paper_d"] == "1.4e57" and a[2]["paper_d"] == "9e58"
    for r in a:
        assert isinstance(r["t_star"], str) and isinstance(r["d_star"], str)
