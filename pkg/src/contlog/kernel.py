"""Rank profile of the k-kernel of an integer sequence.

For depth e the kernel contributes the k**e subsequences m -> s(k**e m + r),
0 <= r < k**e, truncated to m = 1..M. A sequence is k-regular exactly when
the span of its kernel is finitely generated, so a rank that keeps growing
with e is (heuristic) evidence against regularity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Optional, Sequence

from .analysis import sequence_L
from .ratcore import PreconditionError

DEFAULT_CEILING = 10 ** 7


def _primitive(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
            if g == 1:
                return v
    return [x // g for x in v] if g > 1 else v


class RowSpace:
    """Incremental row echelon basis over Q, kept in primitive integer rows.

    Elimination is fraction-free: v <- (a/g) v - (b/g) row with g = gcd(a, b),
    followed by division by the content of v.
    """

    def __init__(self, width: int):
        self.width = width
        self.pivots: dict[int, list[int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add(self, vec: Sequence[int]) -> bool:
        """Insert a row; True if it enlarged the span."""
        if len(vec) != self.width:
            raise ValueError("row has the wrong width")
        v = list(vec)
        col = 0
        while True:
            while col < self.width and v[col] == 0:
                col += 1
            if col == self.width:
                return False
            row = self.pivots.get(col)
            if row is None:
                if v[col] < 0:
                    v = [-x for x in v]
                self.pivots[col] = _primitive(v)
                return True
            a, b = row[col], v[col]
            g = gcd(a, b)
            a, b = a // g, b // g
            v[col:] = [a * x - b * y for x, y in zip(v[col:], row[col:])]
            v = _primitive(v)


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    if not rows:
        return 0
    space = RowSpace(len(rows[0]))
    for r in rows:
        space.add(r)
    return space.rank


@dataclass
class KernelReport:
    k: int
    depths: list[int] = field(default_factory=list)
    rows: list[int] = field(default_factory=list)
    ranks: list[int] = field(default_factory=list)
    truncation_length: int = 0
    stabilized: bool = False
    sequence_name: str = "L"

    def text(self) -> str:
        lines = [
            f"# k-kernel rank profile: s={self.sequence_name}, k={self.k}, M={self.truncation_length}",
            "# rows are m -> s(k^e*m + r) for m = 1..M (m starts at 1 so every index is >= 1)",
            "# 'stabilized' is a heuristic: the rank did not grow over the last depth",
            f"{'depth':>5} {'rows':>6} {'rank':>6}",
        ]
        for e, n, r in zip(self.depths, self.rows, self.ranks):
            lines.append(f"{e:>5} {n:>6} {r:>6}")
        lines.append(f"stabilized (heuristic): {'yes' if self.stabilized else 'no'}")
        return "\n".join(lines)


def kernel_rank_profile(
    k: int,
    max_depth: int,
    M: int,
    seq: Optional[Callable[[int], int] | Sequence[int]] = None,
    ceiling: int = DEFAULT_CEILING,
    name: Optional[str] = None,
) -> KernelReport:
    """Cumulative rank of the kernel rows of depth 0..max_depth.

    ``seq`` is a callable n -> s(n) or a list holding s(1), s(2), ...;
    by default s = L (the continued logarithm length of n).
    """
    if k < 2:
        raise PreconditionError("k must be >= 2")
    if max_depth < 0:
        raise PreconditionError("max_depth must be >= 0")
    if M < 16:
        raise PreconditionError("M must be >= 16")
    # largest index used is k^e*M + k^e - 1 < k^e*(M+1)
    need = k ** max_depth * (M + 1)
    if need > ceiling:
        raise PreconditionError(f"needs {need} sequence terms, above the ceiling {ceiling}")

    if seq is None:
        values = sequence_L(need)
        name = name or "L"
    elif callable(seq):
        values = [seq(n) for n in range(1, need + 1)]
    else:
        values = list(seq)
        if len(values) < need:
            raise PreconditionError(f"sequence has {len(values)} terms, needs {need}")

    report = KernelReport(k=k, truncation_length=M, sequence_name=name or "s")
    space = RowSpace(M)
    n_rows = 0
    for e in range(max_depth + 1):
        step = k ** e
        for r in range(step):
            space.add([values[step * m + r - 1] for m in range(1, M + 1)])
        n_rows += step
        report.depths.append(e)
        report.rows.append(n_rows)
        report.ranks.append(space.rank)
    report.stabilized = len(report.ranks) >= 2 and report.ranks[-1] == report.ranks[-2]
    return report
