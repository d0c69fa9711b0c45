import json
import math
import random

import mpmath
import pytest

from contlog.bounds import (
    length_bound_floor,
    length_bound_holds,
    log2_bracket,
    log2_interval,
    mersenne_expansion,
    t_bound_holds,
    tightness_check,
    verify_L_bound,
    verify_mersenne,
    verify_T_bound,
)
from contlog.clog import expand, measure_L, measure_T
from contlog.ratcore import PreconditionError


@pytest.fixture(autouse=True)
def high_precision():
    with mpmath.workdps(200):
        yield


def mp_log2(p):
    return mpmath.log(p, 2)


@pytest.mark.parametrize("n, terms", [(4, (3, 0, 2, 0, 1, 1)), (2, (1, 1)), (3, (2, 0, 1, 1))])
def test_mersenne_expansion(n, terms):
    assert mersenne_expansion(n).terms == terms


def test_mersenne_expansion_closed_form_arithmetic():
    for n in range(2, 65):
        e = mersenne_expansion(n)
        assert len(e) == 2 * n - 2
        assert sum(e) == n * (n - 1) // 2 + 1


def test_mersenne_expansion_rejects_small():
    with pytest.raises(PreconditionError):
        mersenne_expansion(1)


def test_verify_mersenne():
    r = verify_mersenne(5)
    assert r.ok and r.checked == 4
    assert measure_L(31) == 8 and measure_T(31) == 11
    r = verify_mersenne(2)
    assert r.ok and r.checked == 1 and expand(3).terms == (1, 1)
    r = verify_mersenne(64)
    assert r.ok and r.checked == 63
    assert r.excluded and "n=1" in r.notes[0]


def test_log2_bracket_against_mpmath():
    rng = random.Random(3)
    for _ in range(300):
        p = rng.randrange(1, 2 ** 80)
        d = rng.choice([1, 2, 8, 64])
        a = log2_bracket(p, d)
        x = mp_log2(p) * d
        assert a <= x < a + 1


def test_log2_interval_against_mpmath():
    rng = random.Random(4)
    ps = [3, 5, 96, 2 ** 300 + 1, 2 ** 300 - 1] + [rng.randrange(2, 2 ** 200) for _ in range(50)]
    for p in ps:
        for prec in (32, 128):
            lo, hi = log2_interval(p, prec)
            x = mp_log2(p)
            assert mpmath.mpf(lo.numerator) / lo.denominator <= x <= mpmath.mpf(hi.numerator) / hi.denominator
            frac = x - (p.bit_length() - 1)
            width = mpmath.mpf((hi - lo).numerator) / (hi - lo).denominator
            assert width <= 8 * frac * mpmath.mpf(2) ** -prec


def test_length_bound_helpers():
    assert length_bound_holds(4, 96) and length_bound_holds(1, 1) and length_bound_holds(2, 1)
    assert not length_bound_holds(3, 1)
    for p in range(1, 3000):
        assert length_bound_floor(p) == int(mpmath.floor(2 * mp_log2(p) + 2))
        L = length_bound_floor(p)
        assert length_bound_holds(L, p) and not length_bound_holds(L + 1, p)


def test_t_bound_against_mpmath():
    rng = random.Random(5)
    cases = [(6, 96), (1, 2), (4, 2), (3, 2), (12, 4), (11, 3)]
    for _ in range(500):
        p = rng.randrange(2, 2 ** 40)
        b = mp_log2(p)
        g = b * (2 * b + 2)
        near = int(mpmath.floor(g))
        cases += [(near, p), (near + 1, p), (near - 1, p)]
    for T, p in cases:
        b = mp_log2(p)
        assert t_bound_holds(T, p)[0] == (T < b * (2 * b + 2)), (T, p)


def test_exact_where_double_precision_misrounds():
    p = 2 ** 256 - 1
    assert math.log2(p) == 256.0  # the float answer is wrong
    # 2 log2 p + 2 is just below 514, so L = 514 violates the bound
    assert not length_bound_holds(514, p)
    assert length_bound_holds(513, p)
    assert 514 <= 2 * math.log2(p) + 2  # float would have accepted it

    p = 2 ** 256 + 1
    assert math.log2(p) == 256.0
    # log2 p > 256 so T = 256 * 514 still satisfies the strict bound
    T = 256 * 514
    assert t_bound_holds(T, p) == (True, True)
    assert not T < math.log2(p) * (2 * math.log2(p) + 2)
    assert t_bound_holds(T, 2 ** 256)[0] is False


def test_t_bound_rejects_p1():
    with pytest.raises(PreconditionError):
        t_bound_holds(0, 1)


def test_verify_L_bound_small():
    r = verify_L_bound(16)
    assert r.ok and r.checked == 16 * 17 // 2
    assert verify_L_bound(1).checked == 1
    assert 4 <= 2 * mp_log2(96) + 2


def test_verify_L_bound_witness_is_tightest():
    N = 60
    r = verify_L_bound(N)
    slack = {(p, q): 2 * mp_log2(p) + 2 - measure_L(p, q)
             for p in range(1, N + 1) for q in range(1, p + 1)}
    best = min(slack.values())
    assert slack[r.max_slack_witness] == best


def test_verify_T_bound_small():
    r = verify_T_bound(40)
    assert r.ok and r.checked == 40 * 41 // 2 - 1
    assert r.excluded[0][:2] == (1, 1)
    slack = {(p, q): mp_log2(p) * (2 * mp_log2(p) + 2) - measure_T(p, q)
             for p in range(2, 41) for q in range(1, p + 1)}
    assert slack[r.max_slack_witness] == min(slack.values())


def test_parallel_matches_serial():
    assert verify_L_bound(60, jobs=2) == verify_L_bound(60)
    assert verify_T_bound(60, jobs=2) == verify_T_bound(60)


def test_tightness():
    r = tightness_check(64)
    assert r.ok and r.checked == 63
    for n in (2, 5):
        p = 2 ** n - 1
        assert measure_L(p) >= 2 * mp_log2(p) - 2
    assert r.max_slack_witness == (2 ** 64 - 1, 1)


def test_report_serialization():
    r = verify_T_bound(8)
    rec = json.loads(r.json())
    assert rec["report"] == "verify-t" and rec["violations"] == []
    assert rec["excluded"][0][:2] == ["1", "1"]
    assert r.summary().startswith("checked=35 violations=0 witness=(")


def test_preconditions():
    for fn, arg in [(verify_L_bound, 0), (verify_T_bound, 1), (verify_mersenne, 1), (tightness_check, 1)]:
        with pytest.raises(PreconditionError):
            fn(arg)
