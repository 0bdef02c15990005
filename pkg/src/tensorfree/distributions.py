"""Distributions on trace maps and their free cumulants.

A distribution assigns a rational to every map, multiplicatively over
connected components.  The built-ins are defined by cumulant rules on
connected components; evaluation sums cumulant products over the down-set,
and per-map cumulants invert that sum through the Moebius function.

Component cumulant rules distinguish the root component (the one holding
half-edge 1, whose root vertex has a frozen rotation) from the others, where
the multicycle test is averaged over the free per-vertex rotations.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import factorial

from .maps import CombMap, bn, multicycle
from .poset import down_set, moebius

_comp_cache: dict = {}
_eval_cache: dict = {}


# ---------------------------------------------------------------------------
# component shape tests

def component_is_melon(cycles, pairing) -> bool:
    """Two vertices joined entirely by parallel edges."""
    if len(cycles) != 2:
        return False
    left = set(cycles[0])
    return all((h in left) != (pairing[h] in left) for h in cycles[0])


def component_is_bouquet(cycles, pairing) -> bool:
    return len(cycles) == 1


def _arcs(cycle, rot, half):
    rotated = cycle[rot:] + cycle[:rot]
    return set(rotated[:half]), set(rotated[half:])


def _cyclic_arrangement_exists(arcs, pairing):
    """Is there a cyclic vertex order where each out-arc pairs onto the next
    vertex's in-arc?  arcs is a list of (in_set, out_set) per vertex."""
    k = len(arcs)
    if k == 1:
        in_a, out_a = arcs[0]
        return {pairing[h] for h in out_a} == in_a
    for order in itertools.permutations(range(1, k)):
        seq = (0,) + order
        if all(
            {pairing[h] for h in arcs[seq[i]][1]} == arcs[seq[(i + 1) % k]][0]
            for i in range(k)
        ):
            return True
    return False


@lru_cache(maxsize=None)
def _reference_count(p: int, k: int) -> int:
    """Number of rotation assignments under which the literal multicycle of
    length k passes the arc test; normalizes non-root weights."""
    ref = multicycle(p, k)
    cycles, pairing = ref.components()[0]
    half = p // 2
    hits = 0
    for rots in itertools.product(range(p), repeat=k):
        arcs = [_arcs(cycles[i], rots[i], half) for i in range(k)]
        if _cyclic_arrangement_exists(arcs, pairing):
            hits += 1
    return hits


def multicycle_weight(cycles, pairing, has_root):
    """Return (length, weight) when the component is a multicycle.

    Root components qualify outright (weight 1) if some choice of non-root
    rotations and vertex arrangement matches arcs, with the root vertex's arc
    split frozen to its stored cyclic order.  Components away from the root
    have no frozen vertex; their weight is the number of rotation
    assignments that admit a matching arrangement, normalized by the count
    for a literal multicycle of the same shape, which is what makes the
    value independent of the representative.  Returns None otherwise.
    """
    k = len(cycles)
    degs = {len(c) for c in cycles}
    if len(degs) != 1:
        return None
    p = degs.pop()
    if p % 2:
        return None
    half = p // 2
    if has_root:
        root_idx = next(i for i, c in enumerate(cycles) if min(c) == min(min(c) for c in cycles))
        free = [i for i in range(k) if i != root_idx]
        for rots in itertools.product(range(p), repeat=len(free)):
            rot_of = dict(zip(free, rots))
            rot_of[root_idx] = 0
            arcs = [_arcs(cycles[i], rot_of[i], half) for i in range(k)]
            if _cyclic_arrangement_exists(arcs, pairing):
                return k, Fraction(1)
        return None
    hits = 0
    for rots in itertools.product(range(p), repeat=k):
        arcs = [_arcs(cycles[i], rots[i], half) for i in range(k)]
        if _cyclic_arrangement_exists(arcs, pairing):
            hits += 1
    if hits == 0:
        return None
    return k, Fraction(hits, _reference_count(p, k))


# ---------------------------------------------------------------------------
# distributions

class MapDistribution:
    """A rational-valued functional on trace maps of a fixed order.

    comp_rule(cycles, pairing, has_root) gives the free cumulant of one
    connected component; values on maps follow by down-set summation.
    """

    def __init__(self, order, name, comp_rule, representation="cumulant-rule"):
        self.order = order
        self.name = name
        self.representation = representation
        self._comp_rule = comp_rule

    def component_cumulant(self, cycles, pairing, has_root) -> Fraction:
        key = (self.name, cycles, tuple(sorted(pairing.items())), has_root)
        hit = _comp_cache.get(key)
        if hit is None:
            hit = Fraction(self._comp_rule(cycles, pairing, has_root))
            _comp_cache[key] = hit
        return hit

    def __repr__(self):
        return "MapDistribution(%s)" % self.name


def _check_order(dist: MapDistribution, cmap: CombMap):
    if any(d != dist.order for d in cmap.degrees):
        raise ValueError(
            "map degrees %s do not match distribution order %d"
            % (cmap.degrees, dist.order)
        )


def cumulant_product(dist: MapDistribution, cmap: CombMap) -> Fraction:
    """Product of component cumulants of one map (kappa of the map)."""
    total = Fraction(1)
    for cycles, pairing in cmap.components():
        has_root = any(1 in c for c in cycles)
        total *= dist.component_cumulant(cycles, pairing, has_root)
        if not total:
            return Fraction(0)
    return total


def eval_map(dist: MapDistribution, cmap: CombMap) -> Fraction:
    """Value of the distribution on a map: sum of cumulant products over the
    down-set."""
    _check_order(dist, cmap)
    key = (dist.name, cmap.key())
    hit = _eval_cache.get(key)
    if hit is None:
        hit = sum((cumulant_product(dist, b) for b in down_set(cmap)), Fraction(0))
        _eval_cache[key] = hit
    return hit


def cumulant_of_map(dist: MapDistribution, cmap: CombMap) -> Fraction:
    """Free cumulant of one map, by rule or by Moebius inversion."""
    _check_order(dist, cmap)
    if dist.representation == "cumulant-rule":
        return cumulant_product(dist, cmap)
    if any(d % 2 for d in cmap.degrees):
        raise ValueError("per-map cumulants are only defined for even degrees")
    return sum(
        (moebius(b, cmap) * eval_map(dist, b) for b in down_set(cmap)),
        Fraction(0),
    )


def moment_n(dist: MapDistribution, n: int) -> Fraction:
    """n-th moment: sum of values over the connected rooted maps B_n."""
    if n == 0:
        return Fraction(1)
    return sum((eval_map(dist, b) for b in bn(dist.order, n)), Fraction(0))


def cumulant_n(dist: MapDistribution, n: int) -> Fraction:
    """n-th aggregate cumulant: sum of per-map cumulants over B_n."""
    if n == 0:
        return Fraction(1)
    return sum((cumulant_of_map(dist, b) for b in bn(dist.order, n)), Fraction(0))


def free_sum(a: MapDistribution, b: MapDistribution) -> MapDistribution:
    """Distribution of the free sum: cumulant rules add on connected maps."""
    if a.order != b.order:
        raise ValueError("orders differ")
    if a.representation != "cumulant-rule" or b.representation != "cumulant-rule":
        raise ValueError("free_sum needs cumulant-rule distributions")
    if a.order % 2:
        raise ValueError("free_sum is defined for even orders")

    def rule(cycles, pairing, has_root):
        return a.component_cumulant(cycles, pairing, has_root) + b.component_cumulant(
            cycles, pairing, has_root
        )

    return MapDistribution(a.order, "(%s+%s)" % (a.name, b.name), rule)


# ---------------------------------------------------------------------------
# built-ins

def semicircular_on_maps(p: int) -> MapDistribution:
    """The Wigner limit distribution: cumulant 1/(p-1)! on every melon."""
    w = Fraction(1, factorial(p - 1))

    def rule(cycles, pairing, has_root):
        return w if component_is_melon(cycles, pairing) else Fraction(0)

    rep = "cumulant-rule" if p % 2 == 0 else "moment-rule"
    return MapDistribution(p, "a_%d" % p, rule, representation=rep)


def free_poisson_on_maps(order: int, t) -> MapDistribution:
    """The free Poisson distribution: cumulant t/((order/2)!)^len on
    multicycles of length len, weighted as described in multicycle_weight."""
    if order % 2:
        raise ValueError("the map-level free Poisson needs an even order")
    t = Fraction(t)
    base = Fraction(1, factorial(order // 2))

    def rule(cycles, pairing, has_root):
        hit = multicycle_weight(cycles, pairing, has_root)
        if hit is None:
            return Fraction(0)
        length, weight = hit
        return t * base ** length * weight

    return MapDistribution(order, "b_%d_%s" % (order, t), rule)


def identity_on_maps(order: int, t) -> MapDistribution:
    """t times the identity element: cumulant t/((p-1)(p-3)...1) on every
    bouquet, zero elsewhere."""
    if order % 2:
        raise ValueError("the identity element needs an even order")
    t = Fraction(t)
    dd = 1
    for x in range(order - 1, 0, -2):
        dd *= x
    w = Fraction(1, dd)

    def rule(cycles, pairing, has_root):
        return t * w if component_is_bouquet(cycles, pairing) else Fraction(0)

    return MapDistribution(order, "t1_%d_%s" % (order, t), rule)


def zero_on_maps(order: int) -> MapDistribution:
    """The point mass at zero: every cumulant vanishes."""

    def rule(cycles, pairing, has_root):
        return Fraction(0)

    return MapDistribution(order, "delta0_%d" % order, rule)


def moment_cumulant_table(dist: MapDistribution, n_max: int):
    """Rows (n, m_n, kappa_n); kappa_n is None when not defined."""
    rows = []
    for n in range(n_max + 1):
        try:
            kap = cumulant_n(dist, n)
        except ValueError:
            kap = None
        rows.append((n, moment_n(dist, n), kap))
    return rows
