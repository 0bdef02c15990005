from fractions import Fraction

import pytest

from tensorfree.distributions import (
    cumulant_n,
    cumulant_of_map,
    eval_map,
    free_poisson_on_maps,
    free_sum,
    identity_on_maps,
    moment_n,
    multicycle_weight,
    semicircular_on_maps,
    zero_on_maps,
)
from tensorfree.laws import fuss_catalan, fuss_narayana
from tensorfree.maps import bn, bouquet, melon, multicycle

T = Fraction(1, 3)


@pytest.mark.parametrize(
    "p,n", [(2, 2), (2, 4), (2, 6), (3, 2), (4, 2), (2, 8), (3, 4)]
)
def test_semicircular_sums_are_fuss_catalan(p, n):
    assert moment_n(semicircular_on_maps(p), n) == fuss_catalan(p, n // 2)


def test_melon_cumulant_value():
    a4 = semicircular_on_maps(4)
    assert cumulant_of_map(a4, melon(4)) == Fraction(1, 6)


def test_eval_counts_nested_melon_unions():
    # the 4-cycle at p=2 dominates two non-crossing pair partitions
    a2 = semicircular_on_maps(2)
    assert eval_map(a2, multicycle(2, 4)) == 2
    # a single melon at p=3 has cumulant weight 1/2, and nothing else below
    a3 = semicircular_on_maps(3)
    assert eval_map(a3, melon(3)) == Fraction(1, 2)


def test_odd_order_is_moment_rule_only():
    a3 = semicircular_on_maps(3)
    assert a3.representation == "moment-rule"
    with pytest.raises(ValueError):
        cumulant_of_map(a3, melon(3))


def test_cumulant_via_moebius_matches_rule():
    # a moment-rule shadow of a_4 must recover the same per-map cumulants
    # through Moebius inversion
    from tensorfree.distributions import MapDistribution, component_is_melon

    a4 = semicircular_on_maps(4)
    shadow = MapDistribution(
        4,
        "a4-shadow",
        lambda cyc, pr, root: Fraction(1, 6) if component_is_melon(cyc, pr) else Fraction(0),
        representation="moment-rule",
    )
    for b in bn(4, 2):
        assert eval_map(shadow, b) == eval_map(a4, b)
        assert cumulant_of_map(shadow, b) == cumulant_of_map(a4, b)


@pytest.mark.parametrize("t", [Fraction(1), T, Fraction(2)])
def test_free_poisson_cumulants_are_t(t):
    nu = free_poisson_on_maps(4, t)
    for n in (1, 2, 3):
        assert cumulant_n(nu, n) == t


@pytest.mark.parametrize("t", [Fraction(1), T])
def test_free_poisson_moments_order4(t):
    nu = free_poisson_on_maps(4, t)
    assert moment_n(nu, 1) == t
    assert moment_n(nu, 2) == t + 2 * t ** 2
    assert moment_n(nu, 3) == t + 6 * t ** 2 + 5 * t ** 3


def test_free_poisson_order6():
    nu = free_poisson_on_maps(6, T)
    assert cumulant_n(nu, 1) == T
    assert cumulant_n(nu, 2) == T
    assert moment_n(nu, 2) == T + 3 * T ** 2


def test_free_poisson_order2_matches_narayana():
    nu = free_poisson_on_maps(2, T)
    for n in range(1, 5):
        want = sum(
            fuss_narayana(1, n, b) * T ** b for b in range(1, n + 1)
        )
        assert moment_n(nu, n) == want


def test_root_multicycle_class_counts():
    import math

    for p in (2, 4):
        for n in (1, 2, 3):
            if p * n > 16:
                continue
            count = 0
            for b in bn(p, n):
                comps = b.components()
                if len(comps) != 1:
                    continue
                hit = multicycle_weight(comps[0][0], comps[0][1], True)
                if hit is not None and hit[0] == n and hit[1] == 1:
                    count += 1
            assert count == math.factorial(p // 2) ** n


def test_identity_element_moments():
    t = Fraction(3)
    one = identity_on_maps(4, t)
    assert cumulant_n(one, 1) == t
    assert cumulant_n(one, 2) == 0
    for n in (1, 2, 3):
        assert moment_n(one, n) == fuss_catalan(2, n) * t ** n


def test_identity_bouquet_rule():
    one = identity_on_maps(4, 1)
    assert cumulant_of_map(one, bouquet(4)) == Fraction(1, 3)


def test_zero_distribution():
    z = zero_on_maps(4)
    assert moment_n(z, 1) == 0
    assert moment_n(z, 2) == 0
    assert moment_n(z, 0) == 1


def test_free_sum_adds_cumulants():
    s = free_sum(free_poisson_on_maps(4, 1), identity_on_maps(4, 2))
    assert cumulant_n(s, 1) == 3


def test_order_mismatch_rejected():
    with pytest.raises(ValueError):
        eval_map(semicircular_on_maps(4), melon(3))
    with pytest.raises(ValueError):
        free_sum(semicircular_on_maps(4), free_poisson_on_maps(6, 1))


def test_odd_order_free_poisson_rejected_on_maps():
    with pytest.raises(ValueError):
        free_poisson_on_maps(3, 1)
