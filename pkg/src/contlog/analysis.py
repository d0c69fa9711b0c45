"""Empirical experiments: average-case sweeps, the sequence L(n), and a
comparison against the ordinary (Euclidean) continued fraction."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Context, Decimal
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional

from .clog import _run
from .ratcore import PreconditionError

SWEEP_Q_LIMIT = 1 << 20

SWEEP_COLUMNS = ["q", "count", "mean_L", "var_L", "max_L", "mean_T", "max_T", "mean_L_over_log2q"]
COMPARE_COLUMNS = ["band", "p_min", "p_max", "count", "mean_cf_len", "max_cf_len",
                   "mean_L", "max_L", "mean_T", "max_T"]


def render(x: Optional[Fraction], places: int = 6) -> str:
    """Exact rational to a fixed number of decimals, round-half-even."""
    if x is None:
        return ""
    scale = 10 ** places
    r = round(Fraction(x) * scale)
    sign = "-" if r < 0 else ""
    r = abs(r)
    return f"{sign}{r // scale}.{r % scale:0{places}d}"


@dataclass(frozen=True)
class SweepRow:
    q: int
    count: int
    sum_L: int
    sum_L2: int
    max_L: int
    sum_T: int
    max_T: int

    @property
    def mean_L(self) -> Optional[Fraction]:
        return Fraction(self.sum_L, self.count) if self.count else None

    @property
    def var_L(self) -> Optional[Fraction]:
        """Population variance."""
        if not self.count:
            return None
        m = self.mean_L
        return Fraction(self.sum_L2, self.count) - m * m

    @property
    def mean_T(self) -> Optional[Fraction]:
        return Fraction(self.sum_T, self.count) if self.count else None

    def mean_L_over_log2q(self, places: int = 6) -> str:
        if not self.count or self.q < 2:
            return ""
        ctx = Context(prec=50)
        log2q = ctx.divide(ctx.ln(Decimal(self.q)), ctx.ln(Decimal(2)))
        m = self.mean_L
        ratio = ctx.divide(ctx.divide(Decimal(m.numerator), Decimal(m.denominator)), log2q)
        return str(ratio.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_EVEN))

    def csv_fields(self) -> list[str]:
        return [
            str(self.q), str(self.count), render(self.mean_L), render(self.var_L),
            str(self.max_L) if self.count else "", render(self.mean_T),
            str(self.max_T) if self.count else "", self.mean_L_over_log2q(),
        ]


def sweep_row(q: int, coprime_only: bool = True) -> SweepRow:
    count = sL = sL2 = mL = sT = mT = 0
    for p in range(q + 1, 2 * q):
        if coprime_only and gcd(p, q) != 1:
            continue
        terms = _run(p, q, True)
        L, T = len(terms), sum(terms)
        count += 1
        sL += L
        sL2 += L * L
        sT += T
        mL = max(mL, L)
        mT = max(mT, T)
    return SweepRow(q, count, sL, sL2, mL, sT, mT)


def _sweep_chunk(q_lo: int, q_hi: int, coprime_only: bool) -> list[SweepRow]:
    return [sweep_row(q, coprime_only) for q in range(q_lo, q_hi)]


def _split(lo: int, hi: int, pieces: int) -> list[tuple[int, int]]:
    """Split [lo, hi) so that pieces carry similar total work (work ~ index)."""
    total = sum(range(lo, hi)) or 1
    out, start, acc = [], lo, 0
    for i in range(lo, hi):
        acc += i
        if acc >= total / pieces * (len(out) + 1) and i + 1 < hi:
            out.append((start, i + 1))
            start = i + 1
    out.append((start, hi))
    return [c for c in out if c[0] < c[1]]


def sweep_stats(q_min: int, q_max: int, coprime_only: bool = True, jobs: int = 1) -> list[SweepRow]:
    """One row per q in [q_min, q_max], over p with q < p < 2q."""
    if q_min < 1 or q_max < q_min:
        raise PreconditionError(f"empty q range [{q_min}, {q_max}]")
    if q_max > SWEEP_Q_LIMIT:
        raise PreconditionError(f"q_max {q_max} exceeds the sweep limit 2**20")
    chunks = _split(q_min, q_max + 1, max(1, jobs) * 4)
    if jobs <= 1:
        parts = [_sweep_chunk(a, b, coprime_only) for a, b in chunks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_sweep_chunk, *zip(*chunks), [coprime_only] * len(chunks)))
    rows = [r for part in parts for r in part]
    rows.sort(key=lambda r: r.q)
    return rows


def sweep_csv(rows: Iterable[SweepRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_COLUMNS)
    for r in rows:
        w.writerow(r.csv_fields())
    return buf.getvalue()


def sequence_L(N: int) -> list[int]:
    """[L(1), ..., L(N)]."""
    if N < 1:
        raise PreconditionError("sequence_L needs N >= 1")
    return [len(_run(n, 1, True)) for n in range(1, N + 1)]


# -- ordinary continued fractions -------------------------------------------

@dataclass(frozen=True)
class CFExpansion:
    terms: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.terms)

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.terms)) + "]"


def cf_expand(p: int, q: int) -> CFExpansion:
    """Euclidean partial quotients of p/q."""
    if q < 1:
        raise PreconditionError("q must be >= 1")
    if p < q:
        raise PreconditionError(f"cf_expand needs p >= q, got ({p}, {q})")
    terms = []
    while q:
        a, r = divmod(p, q)
        terms.append(a)
        p, q = q, r
    return CFExpansion(tuple(terms))


def cf_evaluate(cf: CFExpansion | Iterable[int]) -> tuple[int, int]:
    terms = cf.terms if isinstance(cf, CFExpansion) else tuple(cf)
    if not terms:
        raise PreconditionError("empty continued fraction")
    num, den = terms[-1], 1
    for a in reversed(terms[:-1]):
        num, den = a * num + den, num
    g = gcd(num, den)
    return num // g, den // g


def compare_pair(p: int, q: int) -> tuple[int, int, int]:
    """(CF length, L, T) for p/q."""
    terms = _run(p, q, True)
    return len(cf_expand(p, q)), len(terms), sum(terms)


def _compare_band(b: int, p_lo: int, p_hi: int) -> list:
    count = s_cf = m_cf = s_L = m_L = s_T = m_T = 0
    for p in range(p_lo, p_hi + 1):
        for q in range(1, p + 1):
            c, L, T = compare_pair(p, q)
            count += 1
            s_cf += c
            s_L += L
            s_T += T
            m_cf, m_L, m_T = max(m_cf, c), max(m_L, L), max(m_T, T)
    return [b, p_lo, p_hi, count, Fraction(s_cf, count), m_cf,
            Fraction(s_L, count), m_L, Fraction(s_T, count), m_T]


def compare_cf(N: int, jobs: int = 1) -> list[list]:
    """Aggregate CF length vs L vs T over 1 <= q <= p <= N, one row per
    bit-length band of p (band b holds 2**(b-1) <= p < 2**b)."""
    if N < 2:
        raise PreconditionError("compare_cf needs N >= 2")
    bands = [(b, 1 << (b - 1), min((1 << b) - 1, N)) for b in range(1, N.bit_length() + 1)]
    if jobs <= 1:
        return [_compare_band(*band) for band in bands]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_compare_band, *zip(*bands)))


def compare_csv(rows: Iterable[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COMPARE_COLUMNS)
    for row in rows:
        w.writerow([render(x) if isinstance(x, Fraction) else str(x) for x in row])
    return buf.getvalue()
