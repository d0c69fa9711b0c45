import json
import random

import pytest

from contlog.audit import (
    PAIR_K_K,
    PAIR_K_ZERO,
    SINGLE_ZERO,
    TRAILING,
    AuditError,
    audit_trace,
    potential,
    theorem5_bound,
)
from contlog.clog import StepRecord, StepTrace, trace
from contlog.ratcore import PreconditionError, RationalPair


@pytest.mark.parametrize("p, q, f", [(96, 7, 9265), (1, 1, 2), (56, 40, 4736)])
def test_potential(p, q, f):
    assert potential(p, q) == f


def test_potential_random_big():
    rng = random.Random(1)
    for _ in range(10_000):
        p, q = rng.getrandbits(256), rng.getrandbits(256)
        assert potential(p, q) == p * p + q * q


def groups(report):
    return [(g.kind, g.terms, g.f_before, g.f_after) for g in report.groups]


def test_audit_96_7():
    r = audit_trace(trace(96, 7))
    assert groups(r) == [(PAIR_K_ZERO, (3, 0), 9265, 1856), (PAIR_K_K, (1, 2), 1856, 256)]
    assert r.ok and r.step_bound == 14 and r.length == 4


def test_audit_7():
    r = audit_trace(trace(7, 1))
    assert groups(r) == [(PAIR_K_ZERO, (2, 0), 50, 10), (PAIR_K_K, (1, 1), 10, 1)]
    assert r.ok


def test_audit_1():
    r = audit_trace(trace(1, 1))
    assert r.checked_groups == []
    assert [g.kind for g in r.groups] == [TRAILING]
    assert r.ok and r.step_bound == 2


def test_audit_single_zero_and_trailing():
    # 3/2 = <0,1>: a checked zero followed by the last term
    r = audit_trace(trace(3, 2))
    assert [g.kind for g in r.groups] == [SINGLE_ZERO, TRAILING]
    assert r.groups[0].f_before == 13 and r.groups[0].f_after == 5
    # 5 = <2,2>: both terms >= 1
    r = audit_trace(trace(5, 1))
    assert [g.kind for g in r.groups] == [PAIR_K_K]


def test_audit_all_small_pairs_and_lemma4_evenness():
    for p in range(1, 200):
        for q in range(1, p + 1):
            t = trace(p, q)
            r = audit_trace(t)
            assert r.ok, (p, q, r.failures)
            assert r.length <= r.step_bound
            ks = t.expansion.terms
            for i in range(len(ks) - 1):
                if ks[i] >= 1 and ks[i + 1] >= 1:
                    nxt = t.steps[i + 1]
                    p2 = nxt.before.q << nxt.k
                    q2 = nxt.before.p - p2
                    assert p2 % 2 == 0 and q2 % 2 == 0


def test_audit_rejects_reduced_trace():
    with pytest.raises(PreconditionError):
        audit_trace(trace(96, 7, reduce=True))


def test_audit_malformed_trace_reports_index():
    t = trace(96, 7)
    steps = list(t.steps)
    steps[1] = StepRecord(1, steps[1].before, steps[1].after)
    with pytest.raises(AuditError) as exc:
        audit_trace(StepTrace(t.input, steps))
    assert exc.value.index == 1

    steps = list(t.steps)
    steps[2] = StepRecord(1, RationalPair(41, 16), RationalPair(32, 9))
    with pytest.raises(AuditError) as exc:
        audit_trace(StepTrace(t.input, steps))
    assert exc.value.index == 2

    with pytest.raises(AuditError):
        audit_trace(StepTrace(t.input, t.steps[:3]))


def test_audit_serialization():
    r = audit_trace(trace(96, 7))
    text = r.text()
    assert "pair-k-then-zero" in text and "theorem5: L=4 <= bound=14: ok" in text
    recs = [json.loads(line) for line in r.jsonl().splitlines()]
    assert [x["record"] for x in recs] == ["group", "group", "summary"]
    assert recs[0]["kind"] == PAIR_K_ZERO and recs[0]["f_after"] == "1856"
    assert recs[-1]["lemma4_ok"] is True


@pytest.mark.parametrize("p, bound", [(96, 16), (1, 4), (31, 12)])
def test_theorem5_bound(p, bound):
    assert theorem5_bound(p) == bound


def test_theorem5_bound_rejects():
    with pytest.raises(PreconditionError):
        theorem5_bound(3, 4)
