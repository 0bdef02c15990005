"""Closed-form law moments and the non-crossing partition oracle.

Fuss-Catalan and Fuss-Narayana numbers, a brute-force enumerator of
non-crossing partitions with block sizes multiple of q, and moment series
builders for the semicircular, free Poisson, Marchenko-Pastur and Delta_t
families.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def fuss_catalan(p: int, k: int) -> int:
    """k-th Fuss-Catalan number of order p: binom(pk, k)/((p-1)k+1)."""
    if k == 0:
        return 1
    num = math.comb(p * k, k)
    den = (p - 1) * k + 1
    assert num % den == 0
    return num // den


def fuss_narayana(q, n: int, b: int):
    """F_q^b(n) = (1/b) binom(n-1, b-1) binom(qn, b-1).

    q may be a half-integer, in which case the value is zero for odd n and
    otherwise equals F_{2q}^b(n/2), matching the count of non-crossing
    partitions of [qn] with blocks of size multiple of q.
    """
    q = Fraction(q)
    if q.denominator == 2:
        if n % 2:
            return Fraction(0)
        return fuss_narayana(2 * q, n // 2, b)
    if q.denominator != 1:
        raise ValueError("q must be an integer or half-integer")
    if n == 0:
        return Fraction(1) if b == 0 else Fraction(0)
    if b <= 0 or b > n:
        return Fraction(0)
    return Fraction(math.comb(n - 1, b - 1) * math.comb(int(q * n), b - 1), b)


def _nc_partitions(elements, sizes):
    """Yield non-crossing partitions of the tuple `elements` (in increasing
    order) whose block sizes all lie in `sizes`."""
    if not elements:
        yield []
        return
    first, rest = elements[0], elements[1:]
    for size in sizes:
        if size > len(elements):
            continue
        # choose the rest of the block containing `first`
        for combo in itertools.combinations(rest, size - 1):
            block = (first,) + combo
            # the block cuts the remainder into independent gaps
            gaps = []
            bounds = list(block) + [elements[-1] + 1]
            for lo, hi in zip(bounds, bounds[1:]):
                gap = tuple(e for e in rest if lo < e < hi and e not in block)
                gaps.append(gap)
            for parts in _product_partitions(gaps, sizes):
                yield [block] + parts


def _product_partitions(gaps, sizes):
    if not gaps:
        yield []
        return
    head, tail = gaps[0], gaps[1:]
    for first in _nc_partitions(head, sizes):
        for rest in _product_partitions(tail, sizes):
            yield first + rest


def enumerate_nc_multiple(q, n: int):
    """All non-crossing partitions of [qn] with every block size an integer
    multiple of q.  Brute-force oracle; empty for odd n when q is a
    half-integer."""
    q = Fraction(q)
    qn = q * n
    if qn.denominator != 1:
        return []
    qn = int(qn)
    sizes = []
    mult = q
    while mult <= qn:
        if mult.denominator == 1:
            sizes.append(int(mult))
        mult += q
    elements = tuple(range(1, qn + 1))
    return [tuple(sorted(map(tuple, parts))) for parts in _nc_partitions(elements, sizes)]


# ---------------------------------------------------------------------------
# law moment series

def semicircular_moments(p: int, K: int):
    """Moments of the order-p semicircular law: F_p(n/2) at even n."""
    return tuple(
        Fraction(fuss_catalan(p, n // 2)) if n % 2 == 0 else Fraction(0)
        for n in range(K + 1)
    )


def free_poisson_moments(order: int, t, K: int):
    """Moments of the order-`order` free Poisson law of parameter t:
    m_n = sum_b F_{order/2}^b(n) t^b.  Works for odd orders through the
    half-integer rule (odd moments vanish)."""
    t = Fraction(t)
    q = Fraction(order, 2)
    out = [Fraction(1)]
    for n in range(1, K + 1):
        out.append(sum((fuss_narayana(q, n, b) * t ** b for b in range(1, n + 1)), Fraction(0)))
    return tuple(out)


def delta_moments(p: int, t, K: int):
    """Moments of Delta_t at even order p: m_n = F_{p/2}(n) t^n."""
    if p % 2:
        raise ValueError("Delta_t needs an even order")
    t = Fraction(t)
    return tuple(Fraction(fuss_catalan(p // 2, n)) * t ** n for n in range(K + 1))


def dilate_moments(coeffs, c):
    """Dilation by c: m_n -> c^n m_n."""
    c = Fraction(c)
    return tuple(m * c ** n for n, m in enumerate(coeffs))


def marchenko_pastur_moments(p: int, tau, K: int, dilation=None):
    """Moments of the order-p Marchenko-Pastur law: the free Poisson of
    parameter 1/tau dilated.  The dilation factor defaults to tau^{p/2},
    which reproduces the classical MP moments at p = 2."""
    if p % 2:
        raise ValueError("the Marchenko-Pastur law needs an even order")
    tau = Fraction(tau)
    if dilation is None:
        dilation = tau ** (p // 2)
    return dilate_moments(free_poisson_moments(p, 1 / tau, K), dilation)
