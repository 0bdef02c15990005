"""The non-crossing poset on trace maps sharing a vertex permutation.

b' is covered by b when they differ by one switch and gamma(b') = gamma(b)+1;
the order is the transitive closure.  Down-sets, Moebius values, minimal
elements and melonic recognition all live here.
"""

from __future__ import annotations

from .maps import CombMap, switch_covers

_down_cache: dict = {}
_moebius_cache: dict = {}


def down_set(cmap: CombMap):
    """All maps b' <= cmap (including cmap), deduplicated by pairing."""
    key = cmap.key()
    hit = _down_cache.get(key)
    if hit is not None:
        return list(hit)
    seen = {cmap.pairing: cmap}
    frontier = [cmap]
    while frontier:
        nxt = []
        for b in frontier:
            for child in switch_covers(b):
                if child.pairing not in seen:
                    seen[child.pairing] = child
                    nxt.append(child)
        frontier = nxt
    result = sorted(seen.values(), key=lambda b: (b.gamma, b.pairing))
    _down_cache[key] = result
    return list(result)


def leq(lower: CombMap, upper: CombMap) -> bool:
    if lower.cycles != upper.cycles:
        return False
    return any(b.pairing == lower.pairing for b in down_set(upper))


def moebius(lower: CombMap, upper: CombMap) -> int:
    """Moebius value of the interval [lower, upper]."""
    if not leq(lower, upper):
        raise ValueError("maps are not comparable")
    return _moebius(lower.cycles, lower.pairing, upper)


def _moebius(cycles, lower_pairing, upper: CombMap) -> int:
    if lower_pairing == upper.pairing:
        return 1
    key = (cycles, lower_pairing, upper.pairing)
    hit = _moebius_cache.get(key)
    if hit is not None:
        return hit
    # interval elements strictly below upper that dominate lower
    total = 0
    for mid in down_set(upper):
        if mid.pairing == upper.pairing:
            continue
        if any(b.pairing == lower_pairing for b in down_set(mid)):
            total += _moebius(cycles, lower_pairing, mid)
    val = -total
    _moebius_cache[key] = val
    return val


def minimal_elements(cmap: CombMap):
    """Maps below cmap with nothing below them."""
    out = []
    for b in down_set(cmap):
        if not switch_covers(b):
            out.append(b)
    return out


def is_melon_union(cmap: CombMap) -> bool:
    """True when every connected component is two vertices joined by p
    parallel edges."""
    for cycles, pairing in cmap.components():
        if len(cycles) != 2:
            return False
        left = set(cycles[0])
        if any((h in left) == (pairing[h] in left) for h in cycles[0]):
            return False
    return True


def is_melonic(cmap: CombMap) -> bool:
    """True iff some element of the down-set is a disjoint union of melons."""
    return any(is_melon_union(b) for b in down_set(cmap))


def poset_adjacency(cmap: CombMap):
    """Cover-edge adjacency of the down-set, JSON-friendly, for debugging."""
    nodes = down_set(cmap)
    index = {b.pairing: i for i, b in enumerate(nodes)}
    covers = []
    for i, b in enumerate(nodes):
        for child in switch_covers(b):
            covers.append([index[child.pairing], i])
    return {
        "nodes": [list(b.pairing[1:]) for b in nodes],
        "gamma": [b.gamma for b in nodes],
        "covers": sorted(covers),
    }
