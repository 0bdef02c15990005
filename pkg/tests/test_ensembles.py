import itertools
import math

import numpy as np
import pytest

from tensorfree.ensembles import (
    EnsembleConfig,
    clt_superposition,
    estimate_map,
    estimate_moments,
    sample_wigner,
    sample_wishart,
)
from tensorfree.maps import melon, multicycle


def exactly_symmetric(data):
    p = data.ndim
    return all(
        np.array_equal(data, data.transpose(perm))
        for perm in itertools.permutations(range(p))
    )


def test_wigner_reproducible_bit_for_bit():
    cfg = EnsembleConfig("wigner", 3, 5, seed=42)
    a = sample_wigner(cfg)
    b = sample_wigner(EnsembleConfig("wigner", 3, 5, seed=42))
    assert np.array_equal(a.data, b.data)
    c = sample_wigner(EnsembleConfig("wigner", 3, 5, seed=43))
    assert not np.array_equal(a.data, c.data)


def test_wishart_reproducible_bit_for_bit():
    cfg = EnsembleConfig("wishart", 4, 4, t=1, seed=7)
    a = sample_wishart(cfg)
    b = sample_wishart(EnsembleConfig("wishart", 4, 4, t=1, seed=7))
    assert np.array_equal(a.data, b.data)


@pytest.mark.parametrize("p", [2, 3, 4])
def test_wigner_exact_symmetry(p):
    w = sample_wigner(EnsembleConfig("wigner", p, 4, seed=1))
    assert exactly_symmetric(w.data)


@pytest.mark.parametrize("p", [3, 4])
def test_wishart_exact_symmetry(p):
    w = sample_wishart(EnsembleConfig("wishart", p, 3, t=1, seed=1))
    assert exactly_symmetric(w.data)


def test_wigner_entry_variances():
    # unscaled class variance is p/P_i: distinct indices give p/p! = 1/(p-1)!,
    # the diagonal gives p/1 = p
    p, N, draws = 3, 4, 20000
    scale = N ** ((p - 1) / 2)
    distinct = np.empty(draws)
    diag = np.empty(draws)
    rngs = [np.random.default_rng(s)
            for s in np.random.SeedSequence(2024).spawn(draws)]
    for i, rng in enumerate(rngs):
        w = sample_wigner(EnsembleConfig("wigner", p, N), rng=rng) .data * scale
        distinct[i] = w[0, 1, 2]
        diag[i] = w[0, 0, 0]
    for sample, want in ((distinct, 1 / 2), (diag, 3.0)):
        var = sample.var(ddof=1)
        stderr = var * math.sqrt(2 / (draws - 1))
        assert abs(var - want) < 5 * stderr


def test_wigner_rademacher_magnitudes():
    w = sample_wigner(
        EnsembleConfig("wigner", 3, 4, entry_law="rademacher", seed=3)
    )
    scaled = np.abs(w.data) * 4 ** 1
    allowed = {math.sqrt(1 / 2), 1.0, math.sqrt(3)}
    for v in scaled.ravel():
        assert any(abs(v - a) < 1e-12 for a in allowed)


def test_wigner_moments_match_wick_oracle():
    # exact Gaussian expectations at p=3, N=4: E m_2 = 3, E m_4 = 45.5625
    cfg = EnsembleConfig("wigner", 3, 4, seed=11)
    rep = estimate_moments(cfg, 4, 400)
    stats = {label: (mean, err) for label, mean, err, _ in rep.rows}
    m2, e2 = stats["m_2"]
    m4, e4 = stats["m_4"]
    assert abs(m2 - 3.0) < 5 * e2
    assert abs(m4 - 45.5625) < 5 * e4


def test_wishart_p2_is_classical_marchenko_pastur():
    # p=2, t=1 is the square Wishart matrix: m_1 -> 1, m_2 -> 2
    cfg = EnsembleConfig("wishart", 2, 24, t=1, seed=5)
    rep = estimate_moments(cfg, 2, 120)
    stats = {label: (mean, err) for label, mean, err, _ in rep.rows}
    m1, e1 = stats["m_1"]
    m2, e2 = stats["m_2"]
    assert abs(m1 - 1.0) < max(5 * e1, 0.1)
    assert abs(m2 - 2.0) < max(5 * e2, 0.25)


def test_wishart_rank_coupling():
    cfg = EnsembleConfig("wishart", 4, 3, t=2)
    assert cfg.k == round(2 * 3 ** 2)
    explicit = EnsembleConfig("wishart", 4, 3, k=7)
    assert explicit.k == 7


def test_wishart_odd_split():
    cfg = EnsembleConfig("wishart", 3, 3, t=1, seed=9)
    assert cfg.p1 == 2
    w = sample_wishart(cfg)
    assert w.data.shape == (3, 3, 3)
    assert exactly_symmetric(w.data)


def test_clt_superposition_single_draw():
    cfg = EnsembleConfig("wigner", 2, 4, seed=8)
    one = clt_superposition(1, cfg)
    direct = sample_wigner(cfg)
    assert np.allclose(one.data, direct.data)


def test_clt_superposition_scaling():
    cfg = EnsembleConfig("wigner", 2, 4, seed=8)
    four = clt_superposition(4, cfg)
    assert np.isfinite(four.data).all()
    with pytest.raises(ValueError):
        clt_superposition(0, cfg)


def test_estimate_map_report_shape():
    cfg = EnsembleConfig("wigner", 2, 4, seed=13)
    rep = estimate_map(melon(2), cfg, 20)
    assert rep.trials == 20
    assert len(rep.rows) == 1
    label, mean, err, var = rep.rows[0]
    assert label.startswith("map:")
    assert err >= 0 and var >= 0
    doc = rep.to_dict()
    assert doc["trials"] == 20
    assert doc["config"]["family"] == "wigner"


def test_estimate_map_rejects_degree_mismatch():
    cfg = EnsembleConfig("wigner", 2, 4)
    with pytest.raises(ValueError):
        estimate_map(melon(3), cfg, 5)


def test_estimate_moments_grouping_consistency():
    # grouped evaluation must agree with summing every class directly
    from tensorfree.maps import bn
    from tensorfree.tensors import eval_trace_invariant

    cfg = EnsembleConfig("wigner", 2, 4, seed=17)
    rep = estimate_moments(cfg, 3, 6)
    rngs = [np.random.default_rng(s)
            for s in np.random.SeedSequence(17).spawn(6)]
    direct = {n: [] for n in (1, 2, 3)}
    for rng in rngs:
        w = sample_wigner(cfg, rng=rng)
        for n in direct:
            direct[n].append(
                math.fsum(eval_trace_invariant(b, [w] * b.n_vertices)
                          for b in bn(2, n))
            )
    for label, mean, _, _ in rep.rows:
        n = int(label.split("_")[1])
        assert abs(mean - math.fsum(direct[n]) / 6) < 1e-12


def test_config_validation():
    with pytest.raises(ValueError):
        EnsembleConfig("ginibre", 2, 4)
    with pytest.raises(ValueError):
        EnsembleConfig("wigner", 2, 4, entry_law="cauchy")
    with pytest.raises(ValueError):
        EnsembleConfig("wishart", 4, 4)  # neither k nor t
    with pytest.raises(ValueError):
        EnsembleConfig("wigner", 0, 4)
    with pytest.raises(ValueError):
        sample_wishart(EnsembleConfig("wigner", 2, 4))
    with pytest.raises(ValueError):
        sample_wigner(EnsembleConfig("wishart", 2, 4, t=1))


def test_estimate_on_multicycle():
    cfg = EnsembleConfig("wigner", 2, 6, seed=19)
    rep = estimate_map(multicycle(2, 2), cfg, 50)
    _, mean, err, _ = rep.rows[0]
    # E tr(W^2)/N -> m_2 = 1 for the matrix semicircle
    assert abs(mean - 1.0) < max(5 * err, 0.2)
