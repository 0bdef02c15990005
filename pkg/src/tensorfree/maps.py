"""Trace maps as permutation pairs.

A trace map is a pair (pi, alpha): pi groups half-edges into vertices with a
cyclic order, alpha is a fixed-point-free involution pairing half-edges into
edges.  Half-edges are labeled 1..m.  For the p-regular families used in
enumeration, pi is fixed to the canonical cycles ((v-1)p+1, ..., vp).

Rooted equivalence: two maps with the same canonical pi are equivalent when
one is obtained from the other by relabeling half-edges through a permutation
that permutes non-root vertex blocks, rotates the cyclic order at non-root
vertices, and fixes half-edge 1 (the rotation of the root vertex is frozen).
"""

from __future__ import annotations

import itertools
import json
import os
from functools import lru_cache


class Permutation:
    """A permutation of {1, ..., size}, stored as a tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images):
        images = tuple(images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError("images must be a bijection of 1..%d" % len(images))
        self.images = images

    @classmethod
    def identity(cls, size):
        return cls(range(1, size + 1))

    @classmethod
    def from_cycles(cls, size, cycles):
        images = list(range(1, size + 1))
        for cyc in cycles:
            cyc = list(cyc)
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                images[a - 1] = b
        return cls(images)

    @property
    def size(self):
        return len(self.images)

    def __call__(self, i):
        return self.images[i - 1]

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return "Permutation(%r)" % (self.images,)

    def inverse(self):
        inv = [0] * self.size
        for i, j in enumerate(self.images, start=1):
            inv[j - 1] = i
        return Permutation(inv)


class CombMap:
    """Immutable trace map: vertex cycles plus an edge pairing.

    cycles: tuple of cycles, each a tuple of half-edge ids with the cycle
    minimum first, cycles sorted by minimum.  pairing: tuple of length m+1
    with pairing[0] = 0 and pairing[h] the partner of half-edge h.
    """

    __slots__ = ("cycles", "pairing", "_gamma", "_vertex_of")

    def __init__(self, cycles, pairing):
        self.cycles = cycles
        self.pairing = pairing
        self._gamma = None
        self._vertex_of = None

    @property
    def m(self):
        return len(self.pairing) - 1

    @property
    def n_vertices(self):
        return len(self.cycles)

    @property
    def degrees(self):
        return tuple(len(c) for c in self.cycles)

    @property
    def vertex_of(self):
        """Map from half-edge id to 0-based vertex index (index 0 unused)."""
        if self._vertex_of is None:
            vo = [0] * (self.m + 1)
            for v, cyc in enumerate(self.cycles):
                for h in cyc:
                    vo[h] = v
            self._vertex_of = tuple(vo)
        return self._vertex_of

    @property
    def gamma(self):
        """Number of connected components of the underlying multigraph."""
        if self._gamma is None:
            parent = list(range(self.n_vertices))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            vo = self.vertex_of
            for h in range(1, self.m + 1):
                a, b = find(vo[h]), find(vo[self.pairing[h]])
                if a != b:
                    parent[a] = b
            self._gamma = sum(1 for v in range(self.n_vertices) if find(v) == v)
        return self._gamma

    def edges(self):
        """Edges as sorted (min, max) half-edge pairs, sorted."""
        return tuple(
            (h, self.pairing[h]) for h in range(1, self.m + 1) if h < self.pairing[h]
        )

    def with_pairing(self, pairing):
        return CombMap(self.cycles, tuple(pairing))

    def components(self):
        """Split into connected components.

        Returns a list of (vertex_cycles, pairing_dict) with original labels,
        ordered by the smallest half-edge in the component.
        """
        vo = self.vertex_of
        seen = [False] * self.n_vertices
        out = []
        for v0 in range(self.n_vertices):
            if seen[v0]:
                continue
            stack, comp = [v0], []
            seen[v0] = True
            while stack:
                v = stack.pop()
                comp.append(v)
                for h in self.cycles[v]:
                    w = vo[self.pairing[h]]
                    if not seen[w]:
                        seen[w] = True
                        stack.append(w)
            comp.sort()
            cycles = tuple(self.cycles[v] for v in comp)
            pairing = {h: self.pairing[h] for cyc in cycles for h in cyc}
            out.append((cycles, pairing))
        out.sort(key=lambda c: c[0][0][0])
        return out

    def key(self):
        return (self.cycles, self.pairing)

    def __eq__(self, other):
        return isinstance(other, CombMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "CombMap(cycles=%r, pairing=%r)" % (self.cycles, self.pairing)


def build_map(cycles, pairs):
    """Validate and build a CombMap from raw cycles and edge pairs."""
    cycles = [tuple(c) for c in cycles]
    half_edges = [h for c in cycles for h in c]
    m = len(half_edges)
    if sorted(half_edges) != list(range(1, m + 1)):
        raise ValueError("cycles must partition 1..m")
    pairing = [0] * (m + 1)
    for a, b in pairs:
        if not (1 <= a <= m and 1 <= b <= m):
            raise ValueError("half-edge out of range: (%d, %d)" % (a, b))
        if a == b:
            raise ValueError("pairing has a fixed point at %d" % a)
        if pairing[a] or pairing[b]:
            raise ValueError("half-edge paired twice")
        pairing[a], pairing[b] = b, a
    if any(pairing[h] == 0 for h in range(1, m + 1)):
        raise ValueError("pairing is not a perfect matching")
    norm = []
    for c in cycles:
        i = c.index(min(c))
        norm.append(c[i:] + c[:i])
    norm.sort(key=lambda c: c[0])
    return CombMap(tuple(norm), tuple(pairing))


def canonical_cycles(p, n):
    """The fixed vertex permutation: vertex v owns (v-1)p+1 .. vp."""
    return tuple(tuple(range((v - 1) * p + 1, v * p + 1)) for v in range(1, n + 1))


# ---------------------------------------------------------------------------
# named families

def melon(p, sigma=None):
    """Two vertices joined by p parallel edges, i paired with p + sigma(i)."""
    if sigma is None:
        sigma = Permutation.identity(p)
    if sigma.size != p:
        raise ValueError("sigma must have size p")
    pairs = [(i, p + sigma(i)) for i in range(1, p + 1)]
    return build_map(canonical_cycles(p, 2), pairs)


def bouquet(p, sigma=None):
    """One vertex with p/2 self-loops: sigma(2i-1) paired with sigma(2i)."""
    if p % 2:
        raise ValueError("bouquet requires even degree")
    if sigma is None:
        sigma = Permutation.identity(p)
    if sigma.size != p:
        raise ValueError("sigma must have size p")
    pairs = [(sigma(2 * i - 1), sigma(2 * i)) for i in range(1, p // 2 + 1)]
    return build_map(canonical_cycles(p, 1), pairs)


def multicycle(p, n, sigmas=None):
    """A cyclic chain of n vertices with p/2 edges between neighbors.

    Vertex i sends its last p/2 half-edges to the first p/2 half-edges of
    vertex i+1 (cyclically), matched through sigmas[i].  Length 1 gives a
    bouquet whose loops join the two halves of the vertex.
    """
    if p % 2:
        raise ValueError("multicycle requires even degree")
    h = p // 2
    if sigmas is None:
        sigmas = [Permutation.identity(h)] * n
    if len(sigmas) != n or any(s.size != h for s in sigmas):
        raise ValueError("need n permutations of size p/2")
    pairs = []
    for i in range(n):
        j = (i + 1) % n
        for r in range(1, h + 1):
            pairs.append((i * p + h + r, j * p + sigmas[i](r)))
    return build_map(canonical_cycles(p, n), pairs)


def odd_multicycle(p, n, sigmas=None):
    """Odd-degree analogue: 2n vertices joined alternately by (p+1)/2 and
    (p-1)/2 edges.  Length 1 is a melon of degree p."""
    if p % 2 == 0:
        raise ValueError("odd_multicycle requires odd degree")
    k = 2 * n
    h1 = (p + 1) // 2
    h2 = p - h1
    if sigmas is None:
        sigmas = [Permutation.identity(h1 if i % 2 == 0 else h2) for i in range(k)]
    pairs = []
    for i in range(k):
        j = (i + 1) % k
        # even step sends h1 edges, odd step sends h2; arcs laid out so each
        # vertex's degree totals p
        if i % 2 == 0:
            out = range(i * p + h2 + 1, i * p + p + 1)
            into = range(j * p + 1, j * p + h1 + 1)
        else:
            out = range(i * p + h1 + 1, i * p + p + 1)
            into = range(j * p + 1, j * p + h2 + 1)
        out, into = list(out), list(into)
        s = sigmas[i]
        for r in range(len(out)):
            pairs.append((out[r], into[s(r + 1) - 1]))
    return build_map(canonical_cycles(p, k), pairs)


# ---------------------------------------------------------------------------
# switches

def switch(cmap, edge1, edge2, variant):
    """Rewire two edges {a,b}, {c,d} into {a,d},{c,b} (variant 0) or
    {a,c},{b,d} (variant 1), with each edge normalized to (min, max) and
    edge1 the one with the smaller minimum."""
    e1 = tuple(sorted(edge1))
    e2 = tuple(sorted(edge2))
    if e1 == e2:
        raise ValueError("switch needs two distinct edges")
    if e1[0] > e2[0]:
        e1, e2 = e2, e1
    a, b = e1
    c, d = e2
    pairing = list(cmap.pairing)
    if pairing[a] != b or pairing[c] != d:
        raise ValueError("not edges of this map")
    if variant == 0:
        new = [(a, d), (c, b)]
    elif variant == 1:
        new = [(a, c), (b, d)]
    else:
        raise ValueError("variant must be 0 or 1")
    for x, y in new:
        pairing[x], pairing[y] = y, x
    return cmap.with_pairing(pairing)


def switch_covers(cmap):
    """All maps obtained by one switch that increases gamma by exactly 1."""
    out = []
    g = cmap.gamma
    edges = cmap.edges()
    for e1, e2 in itertools.combinations(edges, 2):
        for variant in (0, 1):
            child = switch(cmap, e1, e2, variant)
            if child.gamma == g + 1:
                out.append(child)
    return out


# ---------------------------------------------------------------------------
# canonical codes

def _is_canonical_pi(cmap):
    degs = set(cmap.degrees)
    if len(degs) != 1:
        return False
    p = degs.pop()
    return cmap.cycles == canonical_cycles(p, cmap.n_vertices)


def canonical_pairing(cmap):
    """Lexicographically minimal pairing over the rooted equivalence group.

    Requires canonical pi and a connected map.  Greedy relabeling: walk new
    labels in order; the first arrival at an unvisited non-root vertex claims
    the next vertex block with its rotation anchored at the arrival half-edge.
    The root block (half-edges 1..p) is fixed pointwise.
    """
    if not _is_canonical_pi(cmap):
        raise ValueError("canonical_pairing needs the canonical vertex cycles")
    if cmap.gamma != 1:
        raise ValueError("canonical_pairing needs a connected map")
    p = cmap.degrees[0]
    m = cmap.m
    pairing = cmap.pairing
    new = [0] * (m + 1)   # old label -> new label
    old = [0] * (m + 1)   # new label -> old label
    for i in range(1, p + 1):
        new[i] = old[i] = i
    next_base = p
    vo = cmap.vertex_of
    out = [0] * (m + 1)
    for t in range(1, m + 1):
        h = old[t]
        assert h, "map not connected"
        img = pairing[h]
        if not new[img]:
            cyc = cmap.cycles[vo[img]]
            pos = cyc.index(img)
            for j in range(p):
                o = cyc[(pos + j) % p]
                new[o] = next_base + j + 1
                old[next_base + j + 1] = o
            next_base += p
        out[t] = new[img]
    return tuple(out)


def canonical_code(cmap):
    """Byte code identifying the rooted class of a connected p-regular map."""
    pairing = canonical_pairing(cmap)
    m = cmap.m
    if m < 256:
        return bytes(pairing[1:])
    return b"".join(h.to_bytes(2, "big") for h in pairing[1:])


def equivalence_group(p, n):
    """All relabelings of the rooted group, as image tuples of length np.

    Non-root vertices may be permuted and rotated; the root block 1..p is
    fixed pointwise.  Intended for brute-force checks at small sizes.
    """
    m = n * p
    others = list(range(1, n))
    for perm in itertools.permutations(others):
        for rots in itertools.product(range(p), repeat=n - 1):
            phi = [0] * (m + 1)
            for i in range(1, p + 1):
                phi[i] = i
            for idx, v in enumerate(others):
                target = perm[idx]
                r = rots[idx]
                for j in range(p):
                    phi[v * p + 1 + j] = target * p + 1 + (j + r) % p
            yield tuple(phi)


def brute_canonical_pairing(cmap):
    """Orbit minimum over the full equivalence group (oracle for tests)."""
    if not _is_canonical_pi(cmap):
        raise ValueError("needs canonical vertex cycles")
    p = cmap.degrees[0]
    n = cmap.n_vertices
    best = None
    for phi in equivalence_group(p, n):
        relab = [0] * (cmap.m + 1)
        for h in range(1, cmap.m + 1):
            relab[phi[h]] = phi[cmap.pairing[h]]
        t = tuple(relab)
        if best is None or t < best:
            best = t
    return best


# ---------------------------------------------------------------------------
# enumeration

ENUMERATION_CAP = 16
CONVENTION_VERSION = "v1"


def _pairings(m):
    """Fixed-point-free involutions of 1..m as pairing tuples."""
    slots = list(range(1, m + 1))

    def rec(free):
        if not free:
            yield []
            return
        a = free[0]
        for i in range(1, len(free)):
            b = free[i]
            rest = free[1:i] + free[i + 1:]
            for tail in rec(rest):
                yield [(a, b)] + tail

    for pairs in rec(slots):
        pairing = [0] * (m + 1)
        for a, b in pairs:
            pairing[a], pairing[b] = b, a
        yield tuple(pairing)


def _cache_dir():
    return os.environ.get(
        "TENSORFREE_CACHE",
        os.path.join(os.path.expanduser("~"), ".cache", "tensorfree"),
    )


def _atlas_path(p, n, cache_dir=None):
    base = cache_dir or _cache_dir()
    return os.path.join(base, "atlas_%s" % CONVENTION_VERSION, "p%d_n%d.json" % (p, n))


def atlas_records(maps, p, n):
    """JSON-ready records for the enumeration cache."""
    return [
        {
            "p": p,
            "n": n,
            "cycles": [list(c) for c in b.cycles],
            "pairing": list(b.pairing[1:]),
            "gamma": b.gamma,
            "code": list(canonical_pairing(b)[1:]),
        }
        for b in maps
    ]


def enumerate_Bn(p, n, cache_dir=None, use_cache=True):
    """One representative per rooted class of connected p-regular maps with
    n vertices, sorted by canonical pairing.  Results are cached on disk."""
    m = p * n
    if m % 2:
        return []
    if m > ENUMERATION_CAP:
        raise ValueError("enumeration cap exceeded: p*n = %d > %d" % (m, ENUMERATION_CAP))
    path = _atlas_path(p, n, cache_dir)
    if use_cache and os.path.exists(path):
        with open(path) as fh:
            records = json.load(fh)
        cycles = canonical_cycles(p, n)
        return [CombMap(cycles, tuple([0] + rec["pairing"])) for rec in records]

    cycles = canonical_cycles(p, n)
    seen = {}
    for pairing in _pairings(m):
        cand = CombMap(cycles, pairing)
        if cand.gamma != 1:
            continue
        code = canonical_pairing(cand)
        if code not in seen:
            seen[code] = CombMap(cycles, code)
    reps = [seen[c] for c in sorted(seen)]
    if use_cache:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        payload = json.dumps(atlas_records(reps, p, n), sort_keys=True, separators=(",", ":"))
        with open(path, "w") as fh:
            fh.write(payload)
    return reps


@lru_cache(maxsize=None)
def _bn_cached(p, n):
    return tuple(enumerate_Bn(p, n))


def bn(p, n):
    """Memoized enumeration (shared across distribution evaluations)."""
    return _bn_cached(p, n)
