"""Seeded Wigner and Wishart tensor ensembles and Monte Carlo estimators.

Wigner tensors are exactly symmetric with one independent draw per index
equivalence class and per-class variance p/P_i before the global
N^{-(p-1)/2} scaling.  Wishart tensors sum k symmetrized rank-one products
of i.i.d. vectors-of-tensors, scaled by N^{-p/2}, with k coupled to the
dimension through k = round(t N^{p/2}).

All randomness flows from a single 64-bit seed through a SeedSequence
spawn tree, so identical configs reproduce identical tensors bit for bit.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from .maps import CombMap, bn, canonical_code
from .tensors import DenseTensor, eval_trace_invariant

_var_cache: dict = {}


class EnsembleConfig:
    """Parameters of a Wigner or Wishart sampler."""

    def __init__(self, family, p, N, entry_law="gaussian", t=None, k=None,
                 p1=None, seed=0):
        if family not in ("wigner", "wishart"):
            raise ValueError("family must be wigner or wishart")
        if entry_law not in ("gaussian", "rademacher"):
            raise ValueError("entry law must be gaussian or rademacher")
        if p < 1 or N < 1:
            raise ValueError("p and N must be positive")
        self.family = family
        self.p = p
        self.N = N
        self.entry_law = entry_law
        self.t = t
        self.seed = seed
        if family == "wishart":
            if k is None:
                if t is None:
                    raise ValueError("wishart needs k or t")
                k = max(1, round(t * N ** (p / 2)))
            if k < 1:
                raise ValueError("wishart rank must be >= 1")
            if p1 is None:
                p1 = (p + 1) // 2
            if p1 < 1 or p1 >= p + 1 or p1 + (p - p1) != p:
                raise ValueError("invalid split")
        self.k = k
        self.p1 = p1

    def to_dict(self):
        return {
            "family": self.family, "p": self.p, "N": self.N,
            "entry_law": self.entry_law, "t": None if self.t is None else float(self.t),
            "k": self.k, "p1": self.p1, "seed": self.seed,
        }


class MonteCarloReport:
    """Mean and standard error of one or more statistics over seeded trials."""

    def __init__(self, config, rows, trials):
        self.config = config
        self.rows = tuple(rows)  # (label, mean, stderr, variance)
        self.trials = trials

    def to_dict(self):
        return {
            "config": self.config.to_dict(),
            "trials": self.trials,
            "statistics": [
                {"statistic": label, "mean": mean, "stderr": err, "variance": var}
                for label, mean, err, var in self.rows
            ],
        }


def _variance_array(p, N):
    """Entries p/P_i: P_i is the orbit size of the index under leg
    permutations, so p/P_i = (prod of multiplicities!) / (p-1)!."""
    key = (p, N)
    hit = _var_cache.get(key)
    if hit is not None:
        return hit
    out = np.empty((N,) * p)
    fact = math.factorial(p - 1)
    for rep in itertools.combinations_with_replacement(range(N), p):
        mult = 1
        for _, grp in itertools.groupby(rep):
            mult *= math.factorial(sum(1 for _ in grp))
        val = mult / fact
        for perm in set(itertools.permutations(rep)):
            out[perm] = val
    out.setflags(write=False)
    _var_cache[key] = out
    return out


def _symmetrize(data):
    p = data.ndim
    acc = np.zeros_like(data)
    for perm in itertools.permutations(range(p)):
        acc += data.transpose(perm)
    return _exact_symmetric(acc / math.factorial(p))


def _exact_symmetric(data):
    """Replace every entry by the one at its sorted index, making the array
    symmetric to the last bit (float summation order differs across an orbit
    otherwise)."""
    p, n = data.ndim, data.shape[0]
    idx = np.indices(data.shape).reshape(p, -1)
    return data[tuple(np.sort(idx, axis=0))].reshape(data.shape)


def sample_wigner(config: EnsembleConfig, rng=None) -> DenseTensor:
    """One Wigner draw: symmetric, class variance p/P_i, scaled by
    N^{-(p-1)/2}."""
    if config.family != "wigner":
        raise ValueError("config is not a wigner config")
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    p, N = config.p, config.N
    base = _symmetrize(rng.normal(size=(N,) * p))
    if config.entry_law == "gaussian":
        # symmetrized iid N(0,1) has entry variance (p/P_i)/p exactly
        pre = math.sqrt(p) * base
    else:
        signs = np.sign(base)
        signs[signs == 0] = 1.0
        pre = signs * np.sqrt(_variance_array(p, N))
    return DenseTensor(pre / N ** ((p - 1) / 2), symmetric=True)


def sample_wishart(config: EnsembleConfig, rng=None) -> DenseTensor:
    """One Wishart draw: N^{-p/2} sum of k symmetrized products x (x) y.

    The sum of the k rank-one products is accumulated as a matrix product
    and symmetrized once; symmetrization is linear, so this equals the sum
    of the per-summand symmetrizations.
    """
    if config.family != "wishart":
        raise ValueError("config is not a wishart config")
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    p, N, k = config.p, config.N, config.k
    p1 = config.p1
    p2 = p - p1
    if p % 2 == 0:
        std1 = std2 = 1 / math.sqrt(math.factorial(p // 2) ** (2 / p))
    else:
        std1 = math.factorial(p1) ** (-1 / (2 * p))
        std2 = math.factorial(p2) ** (-1 / (2 * p))

    def draw(count, order, std):
        if config.entry_law == "gaussian":
            return rng.normal(scale=std, size=(count, N ** order))
        return std * rng.choice([-1.0, 1.0], size=(count, N ** order))

    xs = draw(k, p1, std1)
    ys = xs if (p % 2 == 0 and p1 == p2) else draw(k, p2, std2)
    gram = xs.T @ ys  # sum_l outer(x_l, y_l), flattened
    data = _symmetrize(gram.reshape((N,) * p)) / N ** (p / 2)
    return DenseTensor(data, symmetric=True)


def _sampler(config: EnsembleConfig):
    return sample_wigner if config.family == "wigner" else sample_wishart


def clt_superposition(k: int, config: EnsembleConfig, rng=None) -> DenseTensor:
    """(1/sqrt k) sum of k fresh independent draws."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if rng is None:
        rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    sample = _sampler(config)
    acc = sample(config, rng).data.copy()
    for _ in range(k - 1):
        acc += sample(config, rng).data
    return DenseTensor(acc / math.sqrt(k), symmetric=True)


# ---------------------------------------------------------------------------
# estimators

def _trial_rngs(seed, trials):
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def _stats(values):
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1) if n > 1 else 0.0
    return mean, math.sqrt(var / n), var


def estimate_map(cmap: CombMap, config: EnsembleConfig, trials: int) -> MonteCarloReport:
    """Monte Carlo mean of b(W) over independently seeded draws."""
    if any(d != config.p for d in cmap.degrees):
        raise ValueError("map degrees do not match the ensemble order")
    sample = _sampler(config)
    values = []
    for rng in _trial_rngs(config.seed, trials):
        w = sample(config, rng)
        values.append(eval_trace_invariant(cmap, [w] * cmap.n_vertices))
    mean, err, var = _stats(values)
    label = "map:" + canonical_code(cmap).hex()[:16]
    return MonteCarloReport(config, [(label, mean, err, var)], trials)


def _multigraph_code(cmap: CombMap):
    """Vertex-permutation-minimal adjacency multiset; maps with the same code
    have equal invariants on identical symmetric tensors."""
    n = cmap.n_vertices
    vertex_of = cmap.vertex_of
    adj = [[0] * n for _ in range(n)]
    for h, k in cmap.edges():
        a, b = vertex_of[h] - 1, vertex_of[k] - 1
        adj[a][b] += 1
        if a != b:
            adj[b][a] += 1
    best = None
    for perm in itertools.permutations(range(n)):
        code = tuple(tuple(adj[perm[i]][perm[j]] for j in range(n)) for i in range(n))
        if best is None or code < best:
            best = code
    return best


def estimate_moments(config: EnsembleConfig, n_max: int, trials: int) -> MonteCarloReport:
    """Monte Carlo moments m_n(W) = sum over B_n of b(W), n <= n_max.

    Classes sharing a multigraph are evaluated once per trial and weighted
    by their multiplicity.
    """
    groups = {}
    for n in range(1, n_max + 1):
        byc = {}
        for b in bn(config.p, n):
            code = _multigraph_code(b)
            if code in byc:
                byc[code][1] += 1
            else:
                byc[code] = [b, 1]
        groups[n] = list(byc.values())
    sample = _sampler(config)
    per_n = {n: [] for n in groups}
    for rng in _trial_rngs(config.seed, trials):
        w = sample(config, rng)
        for n, grp in groups.items():
            per_n[n].append(
                math.fsum(
                    count * eval_trace_invariant(b, [w] * b.n_vertices)
                    for b, count in grp
                )
            )
    rows = []
    for n in sorted(per_n):
        mean, err, var = _stats(per_n[n])
        rows.append(("m_%d" % n, mean, err, var))
    return MonteCarloReport(config, rows, trials)
