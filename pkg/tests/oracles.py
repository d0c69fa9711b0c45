"""Slow, independent reference computations used as test oracles.

None of these share code with the package.
"""

from fractions import Fraction


def gmap_expansion(p, q):
    """Iterate x -> x/2 (x >= 2), x -> 1/(x-1) (1 < x < 2) until x == 1.

    Each run of halvings between inversions is one term.
    """
    x = Fraction(p, q)
    terms = []
    k = 0
    while True:
        if x == 1:
            terms.append(k)
            return terms
        if x >= 2:
            x /= 2
            k += 1
        else:
            terms.append(k)
            k = 0
            x = 1 / (x - 1)


def nested_value(terms):
    """2^k0 (1 + 1/(2^k1 (1 + ... 1/2^kn)))"""
    x = Fraction(2) ** terms[-1]
    for k in reversed(terms[:-1]):
        x = Fraction(2) ** k * (1 + 1 / x)
    return x


def doubling_log2(p, q):
    """Largest k with 2^k q <= p, by repeated doubling."""
    k = 0
    while q * 2 ** (k + 1) <= p:
        k += 1
    return k


def halving_v2(n):
    e = 0
    while n % 2 == 0:
        n //= 2
        e += 1
    return e


def fraction_rank(rows):
    """Rank over Q with Fraction Gaussian elimination, column by column."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    ncols = len(m[0]) if m else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank
