import itertools

import numpy as np
import pytest

from tensorfree.maps import Permutation, bn, bouquet, build_map, melon, multicycle
from tensorfree.tensors import (
    DenseTensor,
    conjugate_orthogonal,
    dump_tensor,
    eval_trace_invariant,
    load_tensor,
    naive_trace_invariant,
    permute_legs,
    plan_contraction,
    symmetrize_pair,
)

rng = np.random.default_rng(20240815)


def random_symmetric(p, n):
    data = rng.normal(size=(n,) * p)
    acc = np.zeros_like(data)
    for perm in itertools.permutations(range(p)):
        acc += data.transpose(perm)
    return DenseTensor(acc / np.math.factorial(p) if hasattr(np, "math") else acc, symmetric=True)


def test_self_loop_is_normalized_trace():
    m = DenseTensor(rng.normal(size=(5, 5)))
    loop = build_map([(1, 2)], [(1, 2)])
    assert np.isclose(eval_trace_invariant(loop, [m]), np.trace(m.data) / 5)


def test_melon_on_identity():
    eye = DenseTensor(np.eye(4), symmetric=True)
    assert np.isclose(eval_trace_invariant(melon(2), [eye, eye]), 1.0)


def test_bouquet_on_basis_vector_power():
    n = 3
    e = np.zeros(n)
    e[0] = 1.0
    t = DenseTensor(np.einsum("i,j,k,l->ijkl", e, e, e, e), symmetric=True)
    assert np.isclose(eval_trace_invariant(bouquet(4), [t]), 1.0 / n)


def test_permute_identity_and_transpose():
    m = DenseTensor(rng.normal(size=(4, 4)))
    assert np.array_equal(permute_legs(m, Permutation.identity(2)).data, m.data)
    assert np.array_equal(permute_legs(m, Permutation((2, 1))).data, m.data.T)


def test_permute_symmetric_invariant():
    t = symmetrize_pair(DenseTensor(rng.normal(size=(3, 3))), DenseTensor(rng.normal(size=(3, 3))))
    for images in itertools.permutations(range(1, 5)):
        assert np.allclose(permute_legs(t, Permutation(images)).data, t.data)


def test_symmetrize_vectors():
    u, v = rng.normal(size=4), rng.normal(size=4)
    out = symmetrize_pair(DenseTensor(u), DenseTensor(v))
    assert np.allclose(out.data, (np.outer(u, v) + np.outer(v, u)) / 2)


def test_symmetrize_nonsymmetric_input_still_symmetric():
    x = DenseTensor(rng.normal(size=(3, 3)))
    out = symmetrize_pair(x, x)
    for perm in itertools.permutations(range(4)):
        assert np.allclose(out.data, out.data.transpose(perm))


def test_symmetrize_dimension_mismatch():
    with pytest.raises(ValueError):
        symmetrize_pair(DenseTensor(np.zeros(3)), DenseTensor(np.zeros(4)))


@pytest.mark.parametrize("p,n", [(2, 1), (2, 2), (2, 3), (3, 2), (4, 1), (4, 2)])
def test_plan_matches_naive(p, n):
    for b in bn(p, n):
        tensors = [DenseTensor(rng.normal(size=(3,) * d)) for d in b.degrees]
        planned = eval_trace_invariant(b, tensors)
        naive = naive_trace_invariant(b, tensors)
        assert abs(planned - naive) <= 1e-12 * (1 + abs(naive))


def test_plan_beats_naive_on_multicycle():
    mc = multicycle(4, 3)
    plan = plan_contraction(mc, 8)
    naive_flops = mc.n_vertices * 8 ** len(mc.edges())
    assert plan.flops < naive_flops
    assert plan.peak_entries <= 8 ** 6


def test_plan_deterministic_and_memoized():
    a = plan_contraction(multicycle(4, 3), 8)
    b = plan_contraction(multicycle(4, 3), 8)
    assert a is b
    assert a.steps == b.steps


def test_multilinearity():
    b = melon(3)
    t1 = DenseTensor(rng.normal(size=(3, 3, 3)))
    t2 = DenseTensor(rng.normal(size=(3, 3, 3)))
    t3 = DenseTensor(rng.normal(size=(3, 3, 3)))
    lhs = eval_trace_invariant(b, [DenseTensor(2 * t1.data + t2.data), t3])
    rhs = 2 * eval_trace_invariant(b, [t1, t3]) + eval_trace_invariant(b, [t2, t3])
    assert np.isclose(lhs, rhs)


def test_disconnected_invariant_is_product():
    joint = build_map([(1, 2), (3, 4)], [(1, 2), (3, 4)])
    loop = build_map([(1, 2)], [(1, 2)])
    m1 = DenseTensor(rng.normal(size=(4, 4)))
    m2 = DenseTensor(rng.normal(size=(4, 4)))
    lhs = eval_trace_invariant(joint, [m1, m2])
    rhs = eval_trace_invariant(loop, [m1]) * eval_trace_invariant(loop, [m2])
    assert np.isclose(lhs, rhs)


def test_conjugate_identity_noop():
    t = DenseTensor(rng.normal(size=(4, 4, 4)))
    out = conjugate_orthogonal(t, np.eye(4))
    assert np.allclose(out.data, t.data)


def test_conjugate_p2_is_umut():
    m = DenseTensor(rng.normal(size=(5, 5)))
    u, _ = np.linalg.qr(rng.normal(size=(5, 5)))
    assert np.allclose(conjugate_orthogonal(m, u).data, u @ m.data @ u.T)


@pytest.mark.parametrize("p", [2, 3])
def test_orthogonal_invariance(p):
    n = 8
    data = rng.normal(size=(n,) * p)
    acc = np.zeros_like(data)
    for perm in itertools.permutations(range(p)):
        acc += data.transpose(perm)
    t = DenseTensor(acc / float(np.prod(range(1, p + 1))), symmetric=True)
    u, _ = np.linalg.qr(rng.normal(size=(n, n)))
    tu = conjugate_orthogonal(t, u)
    for nv in (1, 2, 3):
        if (p * nv) % 2 or p * nv > 16:
            continue
        for b in bn(p, nv):
            ref = eval_trace_invariant(b, [t] * nv)
            got = eval_trace_invariant(b, [tu] * nv)
            assert abs(got - ref) <= 1e-8 * (1 + abs(ref))


def test_degree_mismatch_rejected():
    with pytest.raises(ValueError):
        eval_trace_invariant(melon(3), [DenseTensor(np.zeros((2, 2)))] * 2)


def test_dump_load_roundtrip(tmp_path):
    t = DenseTensor(rng.normal(size=(3, 3, 3)), symmetric=False)
    path = tmp_path / "t.bin"
    dump_tensor(t, path)
    back = load_tensor(path)
    assert np.array_equal(back.data, t.data)
    assert back.symmetric == t.symmetric
    assert back.order == 3 and back.dim == 3


def test_load_rejects_truncated(tmp_path):
    t = DenseTensor(np.zeros((2, 2)))
    path = tmp_path / "t.bin"
    dump_tensor(t, path)
    raw = path.read_bytes()
    path.write_bytes(raw[:-8])
    with pytest.raises(ValueError):
        load_tensor(path)


def test_nonfinite_rejected():
    bad = np.zeros((2, 2))
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        DenseTensor(bad)
