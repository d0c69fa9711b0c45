"""Potential-function audit of a run: f(p, q) = p**2 + q**2.

Checks on a raw trace:

* every step strictly lowers f;
* grouping the terms left to right, a lone 0 at least halves f, and a term
  k >= 1 together with its successor cuts f by more than a factor of 4
  (after halving the pair when both terms are >= 1, which also requires
  that pair to be even);
* the number of terms is at most floor(log2 f(input)) + 1.

All comparisons are integer comparisons.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .clog import StepRecord, StepTrace
from .ratcore import PreconditionError, RationalPair

SINGLE_ZERO = "single-zero"
PAIR_K_ZERO = "pair-k-then-zero"
PAIR_K_K = "pair-k-then-k"
TRAILING = "trailing-ungrouped"


class AuditError(Exception):
    """The trace is not a faithful run of the algorithm."""

    def __init__(self, index: int, message: str):
        super().__init__(f"step {index}: {message}")
        self.index = index


def potential(p: int, q: int) -> int:
    return p * p + q * q


@dataclass(frozen=True)
class GroupedStep:
    kind: str
    start: int
    span: int
    terms: tuple[int, ...]
    f_before: int
    f_after: int
    ok: bool


@dataclass
class AuditReport:
    input: RationalPair
    groups: list[GroupedStep]
    length: int
    lemma1_ok: bool = True
    lemma2_ok: bool = True
    lemma3_ok: bool = True
    lemma4_ok: bool = True
    theorem5_ok: bool = True
    step_bound: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.lemma1_ok and self.lemma2_ok and self.lemma3_ok
                and self.lemma4_ok and self.theorem5_ok)

    @property
    def checked_groups(self) -> list[GroupedStep]:
        return [g for g in self.groups if g.kind != TRAILING]

    def text(self) -> str:
        lines = [f"audit {self.input}  L={self.length}  f={potential(*self.input)}"]
        for g in self.groups:
            terms = ",".join(map(str, g.terms))
            status = "ok" if g.ok else "FAIL"
            lines.append(f"  [{g.start}] {g.kind:<20} ({terms})  f {g.f_before} -> {g.f_after}  {status}")
        for name in ("lemma1", "lemma2", "lemma3", "lemma4"):
            lines.append(f"  {name}: {'ok' if getattr(self, name + '_ok') else 'FAIL'}")
        lines.append(f"  theorem5: L={self.length} <= bound={self.step_bound}: "
                     f"{'ok' if self.theorem5_ok else 'FAIL'}")
        lines.extend(f"  failure: {msg}" for msg in self.failures)
        return "\n".join(lines)

    def records(self) -> list[dict]:
        """One structured record per group, followed by a summary record."""
        head = {"p": str(self.input.p), "q": str(self.input.q)}
        out = []
        for g in self.groups:
            rec = dict(head, record="group", **asdict(g))
            rec["terms"] = list(g.terms)
            rec["f_before"], rec["f_after"] = str(g.f_before), str(g.f_after)
            out.append(rec)
        out.append(dict(head, record="summary", L=self.length, step_bound=self.step_bound,
                        lemma1_ok=self.lemma1_ok, lemma2_ok=self.lemma2_ok,
                        lemma3_ok=self.lemma3_ok, lemma4_ok=self.lemma4_ok,
                        theorem5_ok=self.theorem5_ok, failures=list(self.failures)))
        return out

    def jsonl(self) -> str:
        return "\n".join(json.dumps(r, sort_keys=True) for r in self.records())


def _raw_after(rec: StepRecord) -> tuple[int, int]:
    """Successor pair as the paper's formulas give it; (p, 0) on termination."""
    p, q = rec.before
    head = q << rec.k
    return head, p - head


def _validate(t: StepTrace) -> None:
    if not t.steps:
        raise AuditError(0, "empty trace")
    if t.steps[0].before != t.input:
        raise AuditError(0, "first record does not start at the input")
    for i, rec in enumerate(t.steps):
        p, q = rec.before
        if rec.reduced:
            raise PreconditionError("audit_trace needs an unreduced trace (reduce=False)")
        if q < 1 or p < q:
            raise AuditError(i, f"state ({p}, {q}) is not >= 1")
        if not (q << rec.k) <= p < (q << (rec.k + 1)):
            raise AuditError(i, f"k={rec.k} is not floor(log2({p}/{q}))")
        a_p, a_q = _raw_after(rec)
        last = i == len(t.steps) - 1
        if a_q == 0:
            if rec.after is not None or not last:
                raise AuditError(i, "exact power of two must terminate the run")
        else:
            if rec.after is None or last:
                raise AuditError(i, "run terminated on a non-terminal state")
            if (rec.after.p, rec.after.q) != (a_p, a_q):
                raise AuditError(i, f"successor {rec.after} != ({a_p}, {a_q})")
            if t.steps[i + 1].before != rec.after:
                raise AuditError(i + 1, "record does not continue from its predecessor")


def audit_trace(t: StepTrace) -> AuditReport:
    _validate(t)
    steps = t.steps
    n = len(steps)
    f0 = potential(*t.input)
    report = AuditReport(input=t.input, groups=[], length=n)

    for i, rec in enumerate(steps):
        f_before = potential(*rec.before)
        f_after = potential(*_raw_after(rec))
        if not f_after < f_before:
            report.lemma1_ok = False
            report.failures.append(f"lemma1 at step {i}: {f_after} >= {f_before}")

    i = 0
    while i < n:
        rec = steps[i]
        f_before = potential(*rec.before)
        if i == n - 1:
            report.groups.append(GroupedStep(TRAILING, i, 1, (rec.k,), f_before,
                                             potential(*_raw_after(rec)), True))
            i += 1
        elif rec.k == 0:
            f_after = potential(*_raw_after(rec))
            ok = 2 * f_after <= f_before
            if not ok:
                report.lemma2_ok = False
                report.failures.append(f"lemma2 at step {i}: 2*{f_after} > {f_before}")
            report.groups.append(GroupedStep(SINGLE_ZERO, i, 1, (0,), f_before, f_after, ok))
            i += 1
        else:
            nxt = steps[i + 1]
            p2, q2 = _raw_after(nxt)
            if nxt.k == 0:
                f_after = potential(p2, q2)
                ok = 4 * f_after < f_before
                if not ok:
                    report.lemma3_ok = False
                    report.failures.append(f"lemma3 at step {i}: 4*{f_after} >= {f_before}")
                kind = PAIR_K_ZERO
            else:
                even = p2 % 2 == 0 and q2 % 2 == 0
                f_after = potential(p2 >> 1, q2 >> 1)
                ok = even and 4 * f_after < f_before
                if not even:
                    report.failures.append(f"lemma4 at step {i}: ({p2}, {q2}) not both even")
                elif not ok:
                    report.failures.append(f"lemma4 at step {i}: 4*{f_after} >= {f_before}")
                if not ok:
                    report.lemma4_ok = False
                kind = PAIR_K_K
            report.groups.append(GroupedStep(kind, i, 2, (rec.k, nxt.k), f_before, f_after, ok))
            i += 2

    # L <= log2(f) + 1 iff L <= floor(log2 f) + 1 = bit_length(f)
    report.step_bound = f0.bit_length()
    report.theorem5_ok = n <= report.step_bound
    if not report.theorem5_ok:
        report.failures.append(f"theorem5: L={n} > {report.step_bound}")
    return report


def theorem5_bound(p: int, q: int = 1) -> int:
    """Integer over-approximation 2*bitlen(p) + 2 of 2*log2(p) + 2."""
    if q < 1 or p < q:
        raise PreconditionError(f"theorem5_bound needs p >= q >= 1, got ({p}, {q})")
    return 2 * p.bit_length() + 2
