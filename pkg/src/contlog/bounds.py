"""Exhaustive checks of the step-count bounds and the Mersenne worst case.

No floating point: ``L <= 2 log2 p + 2`` becomes 2**(L-2) <= p**2, and the
quadratic T bound is first tried against the integer sandwich
floor(log2 p) <= log2 p < floor(log2 p) + 1, then against rigorous rational
bounds on log2 p of increasing precision until the answer is forced.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .clog import Expansion, _run, expand
from .ratcore import PreconditionError


@dataclass
class BoundReport:
    name: str
    cutoff: int
    checked: int = 0
    violations: list[tuple] = field(default_factory=list)
    max_slack_witness: Optional[tuple[int, int]] = None
    excluded: list[tuple] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    refined: int = 0

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        w = "none" if self.max_slack_witness is None else "({},{})".format(*self.max_slack_witness)
        line = f"checked={self.checked} violations={len(self.violations)} witness={w}"
        if self.excluded:
            line += " excluded=" + ";".join("({},{})".format(*e[:2]) for e in self.excluded)
        return line

    def record(self) -> dict:
        return {
            "report": self.name,
            "cutoff": self.cutoff,
            "checked": self.checked,
            "violations": [[str(x) for x in v] for v in self.violations],
            "max_slack_witness": None if self.max_slack_witness is None
            else [str(x) for x in self.max_slack_witness],
            "excluded": [[str(x) for x in e] for e in self.excluded],
            "notes": list(self.notes),
            "refined": self.refined,
        }

    def json(self) -> str:
        return json.dumps(self.record(), sort_keys=True)


# -- exact log2 comparisons -------------------------------------------------

def log2_bracket(p: int, d: int) -> int:
    """The a with a/d <= log2(p) < (a+1)/d, for p >= 1."""
    return (p ** d).bit_length() - 1


def is_pow2(p: int) -> bool:
    return p > 0 and p & (p - 1) == 0


def length_bound_holds(L: int, p: int) -> bool:
    """L <= 2 log2(p) + 2, i.e. 2**(L-2) <= p**2."""
    return L <= 2 or (1 << (L - 2)) <= p * p


def length_bound_floor(p: int) -> int:
    """floor(2 log2(p) + 2)."""
    return (p * p).bit_length() + 1


def _ln_bounds(n: int, m: int, prec: int) -> tuple[Fraction, Fraction]:
    """Rational lo <= ln(n/m) <= hi for n >= m >= 1, relative width ~2**-prec.

    Uses ln x = 2 atanh(y), y = (x-1)/(x+1); partial sums are lower bounds
    and the tail is bounded by the next term over (1 - y**2).
    """
    if n == m:
        return Fraction(0), Fraction(0)
    y = Fraction(n - m, n + m)
    y2 = y * y
    term, s, j = y, Fraction(0), 0
    while True:
        s += term / (2 * j + 1)
        term *= y2
        j += 1
        tail = term / ((2 * j + 1) * (1 - y2))
        if tail * (1 << prec) <= s:
            return 2 * s, 2 * (s + tail)


@lru_cache(maxsize=None)
def _ln2_bounds(prec: int) -> tuple[Fraction, Fraction]:
    return _ln_bounds(2, 1, prec)


def log2_interval(p: int, prec: int) -> tuple[Fraction, Fraction]:
    """Rational bounds lo <= log2(p) <= hi; the fractional part is known to
    relative precision about 2**-prec, so p near a power of two stays cheap."""
    e = p.bit_length() - 1
    lx_lo, lx_hi = _ln_bounds(p, 1 << e, prec + 2)
    l2_lo, l2_hi = _ln2_bounds(prec + 2)
    return e + lx_lo / l2_hi, e + lx_hi / l2_lo


def _g(x) -> Fraction:
    return 2 * x * x + 2 * x


def t_bound_holds(T: int, p: int) -> tuple[bool, bool]:
    """Decide T < log2(p) * (2 log2(p) + 2) exactly for p >= 2.

    Returns ``(holds, refined)``; ``refined`` is False when the integer
    sandwich floor(log2 p) <= log2 p < floor(log2 p) + 1 already settles it.
    """
    if p < 2:
        raise PreconditionError("the T bound is only meaningful for p >= 2")
    a = p.bit_length() - 1
    if is_pow2(p):
        return T < _g(a), False
    # g(x) = 2x^2 + 2x is increasing on x > 0
    if T < _g(a):
        return True, False
    if T >= _g(a + 1):
        return False, False
    prec = 64
    while True:
        lo, hi = log2_interval(p, prec)
        if T < _g(lo):
            return True, True
        if T >= _g(hi):
            return False, True
        # log2 p is irrational here, so g(log2 p) != T and this terminates
        prec *= 2


def _t_slack_interval(p: int, T: int, prec: int) -> tuple[Fraction, Fraction]:
    """Bounds on log2(p)(2 log2(p) + 2) - T."""
    if is_pow2(p):
        v = _g(p.bit_length() - 1) - T
        return Fraction(v), Fraction(v)
    lo, hi = log2_interval(p, prec)
    return _g(lo) - T, _g(hi) - T


def _t_slack_less(c1: tuple, c2: tuple, max_prec: int = 1 << 10) -> bool:
    """Is the T-bound slack of candidate c1 strictly below that of c2?

    Candidates are (p, q, T). Unresolved near-ties fall back to (p, q) order.
    """
    prec = 32
    while prec <= max_prec:
        lo1, hi1 = _t_slack_interval(c1[0], c1[2], prec)
        lo2, hi2 = _t_slack_interval(c2[0], c2[2], prec)
        if hi1 < lo2:
            return True
        if hi2 < lo1:
            return False
        if lo1 == hi1 and lo2 == hi2:
            return c1[:2] < c2[:2]
        prec *= 2
    return c1[:2] < c2[:2]


def _l_slack_less(c1: tuple, c2: tuple) -> bool:
    """Is 2 log2 p1 + 2 - L1 < 2 log2 p2 + 2 - L2? Ties go to smaller (p, q)."""
    p1, q1, L1 = c1
    p2, q2, L2 = c2
    lhs = p1 * p1 << L2
    rhs = p2 * p2 << L1
    return lhs < rhs or (lhs == rhs and (p1, q1) < (p2, q2))


# -- range scans ------------------------------------------------------------

def _scan_L(p_lo: int, p_hi: int) -> tuple[int, list, Optional[tuple]]:
    checked, violations, best = 0, [], None
    for p in range(p_lo, p_hi):
        for q in range(1, p + 1):
            L = len(_run(p, q, True))
            checked += 1
            if not length_bound_holds(L, p):
                violations.append((p, q, L, length_bound_floor(p)))
            cand = (p, q, L)
            if best is None or _l_slack_less(cand, best):
                best = cand
    return checked, violations, best


def _scan_T(p_lo: int, p_hi: int) -> tuple[int, list, list, int]:
    """Per p, keep the q with the largest T; cross-p comparison happens later."""
    checked, violations, per_p, refined = 0, [], [], 0
    for p in range(max(p_lo, 2), p_hi):
        top = None
        for q in range(1, p + 1):
            T = sum(_run(p, q, True))
            checked += 1
            holds, ref = t_bound_holds(T, p)
            refined += ref
            if not holds:
                violations.append((p, q, T, f"log2({p})*(2*log2({p})+2)"))
            if top is None or T > top[2]:
                top = (p, q, T)
        per_p.append(top)
    return checked, violations, per_p, refined


def _chunks(lo: int, hi: int, jobs: int) -> list[tuple[int, int]]:
    """Split [lo, hi) into pieces of roughly equal pair count (~p each)."""
    n = max(1, jobs) * 4
    total = sum(range(lo, hi)) or 1
    out, start, acc = [], lo, 0
    for p in range(lo, hi):
        acc += p
        if acc >= total / n * (len(out) + 1) and p + 1 < hi:
            out.append((start, p + 1))
            start = p + 1
    out.append((start, hi))
    return [c for c in out if c[0] < c[1]]


def _map(fn, chunks, jobs: int):
    if jobs <= 1 or len(chunks) == 1:
        return [fn(*c) for c in chunks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, *zip(*chunks)))


def verify_L_bound(N: int, jobs: int = 1) -> BoundReport:
    """L(p/q) <= 2 log2 p + 2 for all 1 <= q <= p <= N."""
    if N < 1:
        raise PreconditionError("verify_L_bound needs N >= 1")
    report = BoundReport("verify-l", N)
    best = None
    for checked, violations, cand in _map(_scan_L, _chunks(1, N + 1, jobs), jobs):
        report.checked += checked
        report.violations.extend(violations)
        if cand is not None and (best is None or _l_slack_less(cand, best)):
            best = cand
    report.violations.sort()
    report.max_slack_witness = best[:2] if best else None
    return report


def verify_T_bound(N: int, jobs: int = 1) -> BoundReport:
    """T(p/q) < log2(p)(2 log2(p) + 2) for all 1 <= q <= p <= N with p >= 2.

    The point p = q = 1 (bound 0, T = 0) is listed in ``excluded``.
    """
    if N < 2:
        raise PreconditionError("verify_T_bound needs N >= 2")
    report = BoundReport("verify-t", N)
    report.excluded.append((1, 1, 0, 0))
    report.notes.append("p=q=1 excluded: the strict bound reads 0 < 0 while T(1) = 0")
    candidates = []
    for checked, violations, per_p, refined in _map(_scan_T, _chunks(1, N + 1, jobs), jobs):
        report.checked += checked
        report.violations.extend(violations)
        report.refined += refined
        candidates.extend(per_p)
    report.violations.sort(key=lambda v: v[:2])
    best = None
    for cand in candidates:
        if best is None or _t_slack_less(cand, best):
            best = cand
    report.max_slack_witness = best[:2] if best else None
    return report


# -- the 2**n - 1 family ----------------------------------------------------

def mersenne_expansion(n: int) -> Expansion:
    """Closed form <n-1, 0, n-2, 0, ..., 2, 0, 1, 1> for 2**n - 1."""
    if n < 2:
        raise PreconditionError("the closed form needs n >= 2")
    terms = []
    for e in range(n - 1, 1, -1):
        terms += [e, 0]
    terms += [1, 1]
    return Expansion(tuple(terms))


def verify_mersenne(n_max: int) -> BoundReport:
    """expand(2**n - 1) against the closed form, L = 2n-2, T = n(n-1)/2 + 1."""
    if n_max < 2:
        raise PreconditionError("verify_mersenne needs n_max >= 2")
    report = BoundReport("mersenne", n_max)
    got1 = expand(1)
    report.excluded.append((1, 1, str(got1), "L=0,T=1"))
    report.notes.append(
        f"n=1: input 1 expands to {got1} (L={len(got1)}, T={sum(got1)}); "
        "the formulas give L=2n-2=0 and T=n(n-1)/2+1=1, so n=1 is reported, not checked"
    )
    for n in range(2, n_max + 1):
        p = (1 << n) - 1
        got = expand(p)
        want = mersenne_expansion(n)
        report.checked += 1
        L, T = len(got), sum(got)
        if got != want:
            report.violations.append((p, 1, str(got), str(want)))
        if L != 2 * n - 2:
            report.violations.append((p, 1, f"L={L}", f"L={2 * n - 2}"))
        if T != n * (n - 1) // 2 + 1:
            report.violations.append((p, 1, f"T={T}", f"T={n * (n - 1) // 2 + 1}"))
    return report


def tightness_check(n_max: int) -> BoundReport:
    """L(2**n - 1) >= 2 log2(2**n - 1) - 2, i.e. 2**(L+2) >= p**2."""
    if n_max < 2:
        raise PreconditionError("tightness_check needs n_max >= 2")
    report = BoundReport("tightness", n_max)
    best = None
    for n in range(2, n_max + 1):
        p = (1 << n) - 1
        L = len(_run(p, 1, True))
        report.checked += 1
        if (1 << (L + 2)) < p * p:
            report.violations.append((p, 1, L, f"2*log2({p})-2"))
        # margin L + 2 - 2 log2 p; smaller margin <=> 2**(L+2) / p**2 smaller
        if best is None or (1 << (L + 2)) * best[1] ** 2 < (1 << (best[2] + 2)) * p * p:
            best = (n, p, L)
    report.max_slack_witness = (best[1], 1)
    return report
