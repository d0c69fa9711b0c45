"""The continued logarithm algorithm on rational inputs p/q >= 1.

One step maps (p, q) with 2**k q <= p < 2**(k+1) q to (2**k q, p - 2**k q),
emitting k; when p == 2**k q the run stops after emitting k.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence

from .ratcore import (
    PreconditionError,
    RationalPair,
    floor_log2_ratio,
    parse_nat,
    reduce_pow2,
)


@dataclass(frozen=True)
class Expansion:
    terms: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "terms", tuple(self.terms))
        if not self.terms:
            raise PreconditionError("an expansion needs at least one term")
        if any(not isinstance(t, int) or t < 0 for t in self.terms):
            raise PreconditionError(f"expansion terms must be naturals: {self.terms}")

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __str__(self) -> str:
        return "<" + ",".join(map(str, self.terms)) + ">"

    @property
    def is_canonical(self) -> bool:
        return len(self.terms) == 1 or self.terms[-1] >= 1

    @classmethod
    def parse(cls, text: str) -> "Expansion":
        """Parse ``<3,0,1,2>``; the angle brackets are optional."""
        t = text.strip()
        if t.startswith("<") and t.endswith(">"):
            t = t[1:-1]
        elif t.startswith("<") or t.endswith(">"):
            raise PreconditionError(f"unbalanced brackets in {text!r}")
        if not t.strip():
            raise PreconditionError("empty expansion")
        return cls(tuple(parse_nat(part) for part in t.split(",")))


@dataclass(frozen=True)
class StepRecord:
    """One emission. ``after`` is None on the terminal step.

    When ``reduced`` is set, ``after`` is the raw successor with the common
    power of two already divided out.
    """

    k: int
    before: RationalPair
    after: Optional[RationalPair]
    reduced: bool = False

    @property
    def terminal(self) -> bool:
        return self.after is None


@dataclass(frozen=True)
class StepTrace:
    input: RationalPair
    steps: tuple[StepRecord, ...]
    expansion: Expansion = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        object.__setattr__(self, "expansion", Expansion(tuple(s.k for s in self.steps)))

    def lines(self) -> list[str]:
        """``step k p q p' q'`` records; the terminal record has q' = 0."""
        out = []
        for s in self.steps:
            b = s.before
            if s.after is None:
                a_p, a_q = b.q << s.k, 0
            else:
                a_p, a_q = s.after.p, s.after.q
            line = f"step {s.k} {b.p} {b.q} {a_p} {a_q}"
            if s.reduced:
                line += " reduced"
            out.append(line)
        return out

    @classmethod
    def parse(cls, lines: Iterable[str]) -> "StepTrace":
        steps = []
        for n, raw in enumerate(lines):
            fields = raw.split()
            if not fields:
                continue
            reduced = fields[-1] == "reduced"
            if reduced:
                fields = fields[:-1]
            if len(fields) != 6 or fields[0] != "step":
                raise PreconditionError(f"line {n + 1}: malformed trace record {raw!r}")
            k, p, q, p2, q2 = (parse_nat(x) for x in fields[1:])
            after = None if q2 == 0 else RationalPair(p2, q2)
            steps.append(StepRecord(k, RationalPair(p, q), after, reduced))
        if not steps:
            raise PreconditionError("empty trace")
        return cls(steps[0].before, steps)


def _check_input(p: int, q: int) -> None:
    if not isinstance(p, int) or not isinstance(q, int) or q < 1 or p < q:
        raise PreconditionError(f"the algorithm needs p >= q >= 1, got ({p}, {q})")


def step(state: RationalPair | tuple[int, int]) -> tuple[int, Optional[RationalPair]]:
    """Apply one step: ``(k, next_state)`` or ``(k, None)`` at termination."""
    p, q = state
    _check_input(p, q)
    k = floor_log2_ratio(p, q)
    head = q << k
    if head == p:
        return k, None
    nxt = (head, p - head)
    # p < 2**(k+1) q gives head > p - head
    assert nxt[0] > nxt[1] >= 1, f"state invariant broken at ({p}, {q})"
    return k, RationalPair(*nxt)


def _run(p: int, q: int, reduce: bool) -> list[int]:
    _check_input(p, q)
    terms = []
    f = p * p + q * q
    while True:
        k = p.bit_length() - q.bit_length()
        head = q << k
        if head > p:
            k -= 1
            head >>= 1
        terms.append(k)
        if head == p:
            return terms
        p, q = head, p - head
        if reduce:
            p, q = reduce_pow2(p, q)
        f_next = p * p + q * q
        if f_next >= f:
            raise AssertionError(f"potential did not decrease at ({p}, {q})")
        f = f_next


def expand(p: int, q: int = 1, reduce: bool = True) -> Expansion:
    """Continued logarithm expansion of p/q.

    >>> str(expand(96, 7))
    '<3,0,1,2>'
    """
    return Expansion(tuple(_run(p, q, reduce)))


def trace(p: int, q: int = 1, reduce: bool = False) -> StepTrace:
    """Full per-step record of the run. Defaults to raw (unreduced) pairs."""
    _check_input(p, q)
    state = RationalPair(p, q)
    records = []
    while True:
        k, nxt = step(state)
        reduced = False
        if nxt is not None and reduce:
            rp, rq = reduce_pow2(nxt.p, nxt.q)
            if (rp, rq) != (nxt.p, nxt.q):
                nxt, reduced = RationalPair(rp, rq), True
        records.append(StepRecord(k, state, nxt, reduced))
        if nxt is None:
            return StepTrace(RationalPair(p, q), records)
        state = nxt


def evaluate(e: Expansion | Sequence[int]) -> RationalPair:
    """Inverse of expand: fold the nested form back into p/q in lowest terms."""
    terms = e.terms if isinstance(e, Expansion) else tuple(e)
    if not terms:
        raise PreconditionError("cannot evaluate an empty expansion")
    if any(t < 0 for t in terms):
        raise PreconditionError("expansion terms must be naturals")
    a, b = 1 << terms[-1], 1
    for k in reversed(terms[:-1]):
        a, b = (a + b) << k, a
    a, b = reduce_pow2(a, b)
    g = gcd(a, b)
    return RationalPair(a // g, b // g)


def measure_L(p: int, q: int = 1) -> int:
    """Number of terms in the expansion of p/q."""
    return len(_run(p, q, True))


def measure_T(p: int, q: int = 1) -> int:
    """Sum of the terms (total number of halvings)."""
    return sum(_run(p, q, True))


def measures(p: int, q: int = 1) -> tuple[int, int]:
    terms = _run(p, q, True)
    return len(terms), sum(terms)
