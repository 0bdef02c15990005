"""Truncated formal power series: moments, cumulants, and transforms.

Everything works coefficientwise over exact rationals (floats pass through
for Monte Carlo interop).  The central relation is

    m_n = sum_{s=1}^{n} kappa_s [z^{n-s}] M(z)^{sp/2}

equivalently M(z) = C(z M(z)^{p/2}), with a formal square root of M when p
is odd.  All operations truncate at the series length; nothing extends
silently.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .laws import dilate_moments, fuss_catalan, free_poisson_moments, semicircular_moments

DEFAULT_K = 12


def _mul(a, b, K):
    out = [0] * (K + 1)
    for i, x in enumerate(a[: K + 1]):
        if not x:
            continue
        for j, y in enumerate(b[: K + 1 - i]):
            if y:
                out[i + j] += x * y
    return out


def _pow(a, e, K):
    out = [1] + [0] * K
    base = list(a[: K + 1])
    while e:
        if e & 1:
            out = _mul(out, base, K)
        base = _mul(base, base, K)
        e >>= 1
    return out


def _inv(a, K):
    """Multiplicative inverse of a series with a_0 = 1."""
    out = [Fraction(1)] + [0] * K
    for n in range(1, K + 1):
        out[n] = -sum(a[i] * out[n - i] for i in range(1, n + 1) if i < len(a))
    return out


def _sqrt(a, K):
    """Formal square root of a series with a_0 = 1."""
    out = [Fraction(1)] + [0] * K
    for n in range(1, K + 1):
        acc = a[n] if n < len(a) else 0
        acc -= sum(out[i] * out[n - i] for i in range(1, n))
        out[n] = acc / 2
    return out


def _compose(f, g, K):
    """f(g(z)) truncated; g must have zero constant term."""
    if g[0]:
        raise ValueError("composition needs a zero constant term")
    out = [0] * (K + 1)
    out[0] = f[0]
    gp = [1] + [0] * K
    for s in range(1, min(len(f), K + 1)):
        gp = _mul(gp, g, K)
        if f[s]:
            for j, y in enumerate(gp):
                out[j] += f[s] * y
    return out


def _half_power(m, p, K):
    """M(z)^{p/2}: integer power for even p, sqrt-then-power for odd p."""
    if p % 2 == 0:
        return _pow(m, p // 2, K)
    return _pow(_sqrt(m, K), p, K)


class MomentSeries:
    """Truncated moment sequence (m_0 .. m_K) of a law of order p."""

    def __init__(self, order, coeffs):
        coeffs = tuple(Fraction(x) if isinstance(x, int) else x for x in coeffs)
        if not coeffs or coeffs[0] != 1:
            raise ValueError("moment series must start with m_0 = 1")
        self.order = order
        self.coeffs = coeffs

    @property
    def truncation(self):
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return (
            isinstance(other, MomentSeries)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return "MomentSeries(p=%d, %s)" % (self.order, list(self.coeffs))


class CumulantSeries:
    """Truncated free cumulant sequence (kappa_0 .. kappa_K), kappa_0 = 1."""

    def __init__(self, order, coeffs):
        coeffs = tuple(Fraction(x) if isinstance(x, int) else x for x in coeffs)
        if not coeffs or coeffs[0] != 1:
            raise ValueError("cumulant series must start with kappa_0 = 1")
        self.order = order
        self.coeffs = coeffs

    @property
    def truncation(self):
        return len(self.coeffs) - 1

    def __eq__(self, other):
        return (
            isinstance(other, CumulantSeries)
            and self.order == other.order
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return "CumulantSeries(p=%d, %s)" % (self.order, list(self.coeffs))


class LaurentSeries:
    """A pole coefficient (the z^{-1} term) plus nonnegative powers up to K."""

    def __init__(self, pole, coeffs):
        self.pole = pole
        self.coeffs = tuple(coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, LaurentSeries)
            and self.pole == other.pole
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return "LaurentSeries(pole=%s, %s)" % (self.pole, list(self.coeffs))


def _check_parity(order, coeffs, what):
    if order % 2:
        for s in range(1, len(coeffs), 2):
            if coeffs[s]:
                raise ValueError(
                    "odd order %d needs vanishing odd %s (index %d)" % (order, what, s)
                )


def moments_from_cumulants(c: CumulantSeries) -> MomentSeries:
    """Triangular recursion m_n = sum_s kappa_s [z^{n-s}] M^{sp/2}."""
    p = c.order
    kap = c.coeffs
    K = c.truncation
    _check_parity(p, kap, "cumulants")
    m = [Fraction(1)] + [0] * K
    for n in range(1, K + 1):
        h = _half_power(m, p, n - 1)
        hp = [1] + [0] * (n - 1)
        total = 0
        for s in range(1, n):
            hp = _mul(hp, h, n - 1)
            if kap[s]:
                total += kap[s] * hp[n - s]
        total += kap[n]
        m[n] = total
    return MomentSeries(p, m)


def cumulants_from_moments(m: MomentSeries) -> CumulantSeries:
    """Inverse triangular solve of the same recursion."""
    p = m.order
    mm = m.coeffs
    K = m.truncation
    _check_parity(p, mm, "moments")
    h = _half_power(list(mm), p, K)
    powers = [[1] + [0] * K]
    for _ in range(K):
        powers.append(_mul(powers[-1], h, K))
    kap = [Fraction(1)] + [0] * K
    for n in range(1, K + 1):
        kap[n] = mm[n] - sum(
            kap[s] * powers[s][n - s] for s in range(1, n) if kap[s]
        )
    return CumulantSeries(p, kap)


def verify_functional(m: MomentSeries, c: CumulantSeries) -> bool:
    """Check M(z) = C(z M(z)^{p/2}) to the common truncation."""
    if m.order != c.order:
        raise ValueError("orders differ")
    K = min(m.truncation, c.truncation)
    h = _half_power(list(m.coeffs), m.order, K)
    arg = [0] + h[:K]
    composed = _compose(list(c.coeffs), arg, K)
    return all(composed[n] == m.coeffs[n] for n in range(K + 1))


def r_transform(c: CumulantSeries):
    """R(z) = (C(z) - 1)/z: coefficient n is kappa_{n+1}."""
    return tuple(c.coeffs[1:])


def q_transform(c: CumulantSeries):
    """Q(z) = (C(z)^{p/2} - 1)/z, even orders only."""
    if c.order % 2:
        raise ValueError("the Q-transform needs an even order")
    K = c.truncation
    cp = _pow(list(c.coeffs), c.order // 2, K)
    return tuple(cp[1:])


def free_convolve(a: MomentSeries, b: MomentSeries) -> MomentSeries:
    """Tensorial free convolution: cumulants add."""
    if a.order != b.order:
        raise ValueError("orders differ")
    if a.order % 2:
        raise ValueError("free convolution is defined for even orders")
    ca = cumulants_from_moments(a)
    cb = cumulants_from_moments(b)
    K = min(ca.truncation, cb.truncation)
    summed = [Fraction(1)] + [
        ca.coeffs[n] + cb.coeffs[n] for n in range(1, K + 1)
    ]
    return moments_from_cumulants(CumulantSeries(a.order, summed))


def cauchy_transform(m: MomentSeries) -> LaurentSeries:
    """G(z) = (1/z) M(1/z)^{p/2} as a Laurent series in 1/z: the pole
    coefficient is 1 and coefficient n holds the 1/z^{n+1} term."""
    K = m.truncation
    h = _half_power(list(m.coeffs), m.order, K)
    return LaurentSeries(Fraction(0), h)


def cauchy_pair_check(m: MomentSeries, c: CumulantSeries | None = None) -> bool:
    """Check K(G(z)) = z to the truncation, with K(u) = 1/u + Q(u).

    Working in w = 1/z: G = w H(w) with H = M^{p/2}, so the identity reads
    H^{-1}/w + Q(w H) = 1/w as a truncated Laurent series in w.  Q is built
    from c when given, otherwise from the cumulants of m itself; an
    independent c makes the check sensitive to mismatched pairs.
    """
    if m.order % 2:
        raise ValueError("the Cauchy pair check needs an even order")
    if c is None:
        c = cumulants_from_moments(m)
    elif c.order != m.order:
        raise ValueError("orders differ")
    K = min(m.truncation, c.truncation)
    h = _half_power(list(m.coeffs), m.order, K)
    q = list(q_transform(c))
    arg = [0] + h[:K]
    q_at_g = _compose(q, arg, K - 1)
    hinv = _inv(h, K)
    # 1/(wH) = w^{-1} + hinv[1] + hinv[2] w + ...; require cancellation
    if hinv[0] != 1:
        return False
    for n in range(K - 1):
        if hinv[n + 1] + q_at_g[n] != 0:
            return False
    return True


def clt_rescale(c: CumulantSeries, k: int) -> CumulantSeries:
    """Free CLT rescaling kappa_n -> k^{1 - n/2} kappa_n for n >= 1.

    Needs kappa_1 = 0 and kappa_2 = 1.  Exact when k is a perfect square or
    every odd cumulant vanishes; otherwise falls back to floats.
    """
    if c.coeffs[1] != 0 or c.coeffs[2] != 1:
        raise ValueError("CLT rescaling needs kappa_1 = 0 and kappa_2 = 1")
    root = math.isqrt(k)
    exact_root = root * root == k
    out = [Fraction(1)]
    for n in range(1, c.truncation + 1):
        x = c.coeffs[n]
        if not x:
            out.append(x)
        elif n % 2 == 0:
            out.append(x * Fraction(1, k) ** (n // 2 - 1))
        elif exact_root:
            out.append(x * Fraction(k, root ** n))
        else:
            out.append(float(x) * k ** (1 - n / 2))
    return CumulantSeries(c.order, out)


def poisson_limit_check(order: int, t_values, K: int = DEFAULT_K):
    """Cumulants of (b_{p,t} - t 1_p)/sqrt(t) for each t on the grid.

    Returns rows (t, kappas, ok) where ok means kappa_2 = 1 and
    kappa_n = t^{1-n/2} for 3 <= n <= K.
    """
    if order % 2:
        raise ValueError("the Poisson limit check needs an even order")
    from .laws import delta_moments

    rows = []
    for t in t_values:
        t = Fraction(t)
        delta_kap = cumulants_from_moments(
            MomentSeries(order, delta_moments(order, t, K))
        ).coeffs
        diff = [Fraction(1)] + [Fraction(t) - delta_kap[n] for n in range(1, K + 1)]
        root2 = _rational_sqrt(t)
        kap = [Fraction(1)]
        for n in range(1, K + 1):
            if root2 is not None:
                kap.append(diff[n] / root2 ** n)
            elif n % 2 == 0:
                kap.append(diff[n] / t ** (n // 2))
            else:
                kap.append(float(diff[n]) / float(t) ** (n / 2))
        ok = kap[1] == 0 and kap[2] == 1
        for n in range(3, K + 1):
            ok = ok and _close(kap[n], _expected_poisson(t, n, root2))
        rows.append((t, tuple(kap), ok))
    return rows


def _rational_sqrt(t: Fraction):
    """sqrt(t) when it is rational, else None."""
    rn, rd = math.isqrt(t.numerator), math.isqrt(t.denominator)
    if rn * rn == t.numerator and rd * rd == t.denominator:
        return Fraction(rn, rd)
    return None


def _expected_poisson(t: Fraction, n: int, root):
    """t^{1 - n/2}, exact whenever possible."""
    if n % 2 == 0:
        return t ** (1 - n // 2)
    if root is not None:
        return root ** (2 - n)
    return float(t) ** (1 - n / 2)


def _close(a, b, tol=1e-12):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return abs(float(a) - float(b)) <= tol


def exp_bound_check(m: MomentSeries, M) -> bool:
    """Exponential-bound sanity: if |kappa_n| <= M^n then |m_n| <= (2^p M)^n,
    and if |m_n| <= M^n then |kappa_n| <= (4^p M)^n, to the truncation."""
    M = Fraction(M)
    p = m.order
    kap = cumulants_from_moments(m).coeffs
    ok = True
    if all(abs(kap[n]) <= M ** n for n in range(1, len(kap))):
        ok = ok and all(
            abs(m.coeffs[n]) <= (Fraction(2 ** p) * M) ** n
            for n in range(1, len(m.coeffs))
        )
    if all(abs(m.coeffs[n]) <= M ** n for n in range(1, len(m.coeffs))):
        ok = ok and all(
            abs(kap[n]) <= (Fraction(4 ** p) * M) ** n for n in range(1, len(kap))
        )
    return ok


# convenience builders tying laws to series objects

def semicircular_series(p: int, K: int = DEFAULT_K) -> MomentSeries:
    return MomentSeries(p, semicircular_moments(p, K))


def free_poisson_series(order: int, t, K: int = DEFAULT_K) -> MomentSeries:
    return MomentSeries(order, free_poisson_moments(order, t, K))


def dilated_series(base: MomentSeries, c) -> MomentSeries:
    return MomentSeries(base.order, dilate_moments(base.coeffs, c))
