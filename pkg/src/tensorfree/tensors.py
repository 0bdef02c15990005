"""Dense real tensors and trace-invariant evaluation.

Tensors are immutable N^p arrays with all legs of the same dimension.
Trace invariants b(T) = N^{-gamma} sum over index assignments are computed
through a greedy contraction plan rather than naive loops; the naive
evaluator is kept as a cross-check oracle for small N.
"""

from __future__ import annotations

import itertools
import json
import math

import numpy as np

from .maps import CombMap

_plan_cache: dict = {}


class DenseTensor:
    """A real tensor with p legs of dimension N."""

    def __init__(self, data, symmetric=False):
        data = np.asarray(data, dtype=float)
        if data.ndim == 0:
            raise ValueError("tensors need at least one leg")
        if len(set(data.shape)) != 1:
            raise ValueError("all legs must share one dimension")
        if not np.all(np.isfinite(data)):
            raise ValueError("entries must be finite")
        self.data = data
        self.data.setflags(write=False)
        self.symmetric = bool(symmetric)

    @property
    def order(self):
        return self.data.ndim

    @property
    def dim(self):
        return self.data.shape[0]

    def check_symmetric(self, rng=None, samples=6, tol=1e-10):
        """Spot-check leg-permutation invariance on sampled permutations."""
        p = self.order
        perms = list(itertools.permutations(range(p)))
        if rng is not None and len(perms) > samples:
            idx = rng.choice(len(perms), size=samples, replace=False)
            perms = [perms[i] for i in idx]
        return all(
            np.allclose(self.data, self.data.transpose(perm), atol=tol)
            for perm in perms
        )


def permute_legs(t: DenseTensor, sigma) -> DenseTensor:
    """T^sigma with entries T^sigma_i = T_{i_sigma(1)..i_sigma(p)}."""
    if sigma.size != t.order:
        raise ValueError("permutation size must equal the tensor order")
    axes = [sigma(k) - 1 for k in range(1, t.order + 1)]
    return DenseTensor(t.data.transpose(axes), symmetric=t.symmetric)


def symmetrize_pair(t1: DenseTensor, t2: DenseTensor) -> DenseTensor:
    """The symmetrized tensor product: average of (T1 x T2)^sigma over all
    permutations of the combined legs.  Always fully symmetric."""
    if t1.dim != t2.dim:
        raise ValueError("dimensions differ")
    prod = np.multiply.outer(t1.data, t2.data)
    p = prod.ndim
    acc = np.zeros_like(prod)
    count = 0
    for perm in itertools.permutations(range(p)):
        acc += prod.transpose(perm)
        count += 1
    return DenseTensor(acc / count, symmetric=True)


def conjugate_orthogonal(t: DenseTensor, u) -> DenseTensor:
    """T . U^p: every leg contracted with the matrix U."""
    u = np.asarray(u, dtype=float)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise ValueError("U must be a square matrix")
    if u.shape[0] != t.dim:
        raise ValueError("U must match the tensor dimension")
    data = t.data
    for k in range(t.order):
        data = np.moveaxis(np.tensordot(u, data, axes=(1, k)), 0, k)
    return DenseTensor(data, symmetric=t.symmetric)


# ---------------------------------------------------------------------------
# contraction planning

class ContractionPlan:
    """An ordered recipe for reducing a trace map to a scalar.

    steps: tuples, either ("trace", node, leg_pairs) collapsing internal
    loops or ("merge", a, b, pairs) joining two nodes along shared edges;
    node labels are vertex ids, merged nodes keep the smaller label.
    """

    def __init__(self, steps, peak_entries, flops, gamma):
        self.steps = tuple(steps)
        self.peak_entries = peak_entries
        self.flops = flops
        self.gamma = gamma

    def __repr__(self):
        return "ContractionPlan(%d steps, peak=%d, flops=%d)" % (
            len(self.steps),
            self.peak_entries,
            self.flops,
        )


def plan_contraction(cmap: CombMap, N: int) -> ContractionPlan:
    """Greedy pairwise merge minimizing intermediate entry count, ties broken
    by lowest vertex id.  Memoized per (map, N)."""
    key = (cmap.key(), N)
    hit = _plan_cache.get(key)
    if hit is not None:
        return hit

    pairing = cmap.pairing
    vertex_of = cmap.vertex_of
    # node state: vertex id -> list of open half-edges
    nodes = {v + 1: list(c) for v, c in enumerate(cmap.cycles)}
    steps = []
    peak = max(N ** len(c) for c in cmap.cycles)
    flops = 0

    def loop_pairs(label):
        legs = nodes[label]
        pos = {h: i for i, h in enumerate(legs)}
        out = []
        used = set()
        for h in legs:
            k = pairing[h]
            if k in pos and h < k and h not in used:
                out.append((h, k))
                used.update((h, k))
        return out

    def strip_loops(label):
        nonlocal flops
        pairs = loop_pairs(label)
        if pairs:
            flat = {h for hk in pairs for h in hk}
            flops += N ** len(nodes[label])
            steps.append(("trace", label, tuple(pairs)))
            nodes[label] = [h for h in nodes[label] if h not in flat]

    for label in sorted(nodes):
        strip_loops(label)

    while True:
        candidates = []
        for a, b in itertools.combinations(sorted(nodes), 2):
            shared = sum(1 for h in nodes[a] if pairing[h] in set(nodes[b]))
            if shared == 0:
                continue
            out_legs = len(nodes[a]) + len(nodes[b]) - 2 * shared
            candidates.append((N ** out_legs, a, b, shared))
        if not candidates:
            break
        _, a, b, shared = min(candidates)
        legs_b = set(nodes[b])
        pairs = tuple((h, pairing[h]) for h in nodes[a] if pairing[h] in legs_b)
        flops += N ** (len(nodes[a]) + len(nodes[b]) - shared)
        steps.append(("merge", a, b, pairs))
        merged = [h for h in nodes[a] if pairing[h] not in legs_b]
        merged += [h for h in nodes[b] if pairing[h] not in set(nodes[a])]
        nodes[a] = merged
        del nodes[b]
        peak = max(peak, N ** len(merged))
        strip_loops(a)

    plan = ContractionPlan(steps, peak, flops, cmap.gamma)
    _plan_cache[key] = plan
    return plan


def _execute(plan: ContractionPlan, cmap: CombMap, arrays, N: int) -> float:
    legs = {v + 1: list(c) for v, c in enumerate(cmap.cycles)}
    state = {v + 1: arrays[v] for v in range(len(arrays))}
    for step in plan.steps:
        if step[0] == "trace":
            _, label, pairs = step
            arr = state[label]
            cur = legs[label]
            for h, k in pairs:
                i, j = cur.index(h), cur.index(k)
                arr = np.trace(arr, axis1=i, axis2=j)
                cur = [x for x in cur if x not in (h, k)]
            state[label], legs[label] = arr, cur
        else:
            _, a, b, pairs = step
            ia = [legs[a].index(h) for h, _ in pairs]
            ib = [legs[b].index(k) for _, k in pairs]
            arr = np.tensordot(state[a], state[b], axes=(ia, ib))
            paired = {h for hk in pairs for h in hk}
            legs[a] = [h for h in legs[a] if h not in paired] + [
                h for h in legs[b] if h not in paired
            ]
            state[a] = arr
            del state[b], legs[b]
    total = 1.0
    for label, arr in state.items():
        total *= float(arr)
    return total / N ** plan.gamma


def eval_trace_invariant(cmap: CombMap, tensors) -> float:
    """b(T_1, ..., T_n): the normalized trace invariant of the map."""
    tensors = list(tensors)
    if len(tensors) != cmap.n_vertices:
        raise ValueError("need one tensor per vertex")
    dims = {t.dim for t in tensors}
    if len(dims) != 1:
        raise ValueError("tensors must share one dimension")
    for t, d in zip(tensors, cmap.degrees):
        if t.order != d:
            raise ValueError("tensor order %d does not match degree %d" % (t.order, d))
    N = dims.pop()
    plan = plan_contraction(cmap, N)
    return _execute(plan, cmap, [t.data for t in tensors], N)


def naive_trace_invariant(cmap: CombMap, tensors) -> float:
    """Brute-force nested-loop oracle; only sensible for small N."""
    tensors = list(tensors)
    N = tensors[0].dim
    edges = cmap.edges()
    total = 0.0
    for values in itertools.product(range(N), repeat=len(edges)):
        assign = {}
        for (h, k), v in zip(edges, values):
            assign[h] = assign[k] = v
        prod = 1.0
        for v, cycle in enumerate(cmap.cycles):
            prod *= tensors[v].data[tuple(assign[h] for h in cycle)]
        total += prod
    return total / N ** cmap.gamma


# ---------------------------------------------------------------------------
# binary dump / load

def dump_tensor(t: DenseTensor, path):
    header = json.dumps(
        {"p": t.order, "N": t.dim, "symmetric": t.symmetric}, sort_keys=True
    ).encode()
    with open(path, "wb") as fh:
        fh.write(header + b"\n")
        fh.write(t.data.astype("<f8").tobytes())


def load_tensor(path) -> DenseTensor:
    with open(path, "rb") as fh:
        header = json.loads(fh.readline().decode())
        raw = fh.read()
    p, n = header["p"], header["N"]
    if len(raw) != 8 * n ** p:
        raise ValueError("payload size does not match the header")
    data = np.frombuffer(raw, dtype="<f8").reshape((n,) * p)
    return DenseTensor(data.copy(), symmetric=header["symmetric"])
