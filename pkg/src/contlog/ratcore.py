"""Exact natural-number helpers: power-of-two ratios and 2-adic reduction.

Python ints are already arbitrary precision, so ``Nat`` is just ``int >= 0``.
Everything here is integer-only; no floats are involved anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional


class PreconditionError(ValueError):
    """Raised when an operation is called outside its documented domain."""


@dataclass(frozen=True)
class RationalPair:
    """The pair (p, q) standing for p/q. Not necessarily in lowest terms."""

    p: int
    q: int

    def __post_init__(self) -> None:
        if self.p < 0 or self.q < 1:
            raise PreconditionError(f"invalid pair ({self.p}, {self.q}): need p >= 0, q >= 1")

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"

    def __iter__(self):
        yield self.p
        yield self.q


def _check_nat(*values: int) -> None:
    for v in values:
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise PreconditionError(f"expected a natural number, got {v!r}")


def v2(n: int) -> int:
    """2-adic valuation of n > 0."""
    if n <= 0:
        raise PreconditionError("v2 is defined for n >= 1")
    return (n & -n).bit_length() - 1


def floor_log2_ratio(p: int, q: int) -> int:
    """Return the k >= 0 with 2**k * q <= p < 2**(k+1) * q.

    Bit lengths give k to within one; a single comparison fixes it.
    """
    _check_nat(p, q)
    if q == 0 or p < q:
        raise PreconditionError(f"floor_log2_ratio needs p >= q >= 1, got ({p}, {q})")
    k = p.bit_length() - q.bit_length()
    if (q << k) > p:
        k -= 1
    return k


def pow2_multiple_exponent(p: int, q: int) -> Optional[int]:
    """k if p == 2**k * q exactly, else None."""
    _check_nat(p, q)
    if q == 0:
        raise PreconditionError("q must be >= 1")
    if p < q:
        return None
    k = p.bit_length() - q.bit_length()
    return k if (q << k) == p else None


def reduce_pow2(p: int, q: int) -> tuple[int, int]:
    """Divide out the largest common power of two of p and q."""
    _check_nat(p, q)
    if p == 0 or q == 0:
        raise PreconditionError("reduce_pow2 needs p, q >= 1")
    s = v2(p | q)
    return p >> s, q >> s


def parse_nat(text: str) -> int:
    """Parse a base-10 digit string into a natural number."""
    t = text.strip()
    if not t or not t.isascii() or not t.isdigit():
        raise PreconditionError(f"malformed natural number literal: {text!r}")
    return int(t)
