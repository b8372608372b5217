import math

import numpy as np
import pytest

from twonormlab import (
    GramSpace,
    InputError,
    Subspace,
    Vector,
    linearly_dependent,
    reverse_triangle_residual,
    standard_basis,
    two_norm,
)
from twonormlab.sampling import random_gram_space, random_independent_pair


def test_identity_gram_matches_cross_product(r3):
    # for the Euclidean gram in dimension three the pair norm is the
    # cross-product length; |(1,2,3) x (4,5,6)| = |(-3,6,-3)| = sqrt(54)
    x = np.array([1.0, 2.0, 3.0])
    y = np.array([4.0, 5.0, 6.0])
    assert abs(r3.pair_norm(x, y) - math.sqrt(54.0)) < 1e-12


def test_gram_formula_hand_values(skew2):
    # (x.Gx)(y.Gy) - (x.Gy)^2 for G = [[2,1],[1,3]] by hand:
    # basis pair gives 2*3 - 1 = 5, and (1,2),(3,-1) gives 18*15 - 25 = 245
    assert abs(skew2.pair_norm([1, 0], [0, 1]) - math.sqrt(5.0)) < 1e-12
    assert abs(skew2.pair_norm([1, 2], [3, -1]) - math.sqrt(245.0)) < 1e-12


def test_pair_norm_matches_raw_determinant_on_random_pairs():
    rng = np.random.default_rng(3)
    for _ in range(50):
        sp = random_gram_space(rng, int(rng.integers(2, 6)))
        G = np.asarray(sp.gram)
        x = rng.normal(size=sp.dim)
        y = rng.normal(size=sp.dim)
        raw = (x @ G @ x) * (y @ G @ y) - (x @ G @ y) ** 2
        expect = math.sqrt(max(raw, 0.0))
        got = sp.pair_norm(x, y)
        assert abs(got - expect) <= 1e-9 * max(1.0, expect)


def test_symmetry_and_scaling():
    rng = np.random.default_rng(11)
    sp = random_gram_space(rng, 4)
    x = rng.normal(size=4)
    y = rng.normal(size=4)
    assert sp.pair_norm(x, y) == pytest.approx(sp.pair_norm(y, x), rel=1e-12)
    assert sp.pair_norm(3.5 * x, y) == pytest.approx(3.5 * sp.pair_norm(x, y), rel=1e-12)
    assert sp.pair_norm(-x, y) == pytest.approx(sp.pair_norm(x, y), rel=1e-12)


def test_dependent_pairs_vanish():
    rng = np.random.default_rng(5)
    for _ in range(20):
        sp = random_gram_space(rng, int(rng.integers(2, 6)))
        x = rng.normal(size=sp.dim)
        t = rng.normal()
        p, scale = sp.pair_norm_scale(x, t * x)
        assert p <= 1e-9 * max(scale, 1.0)


def test_translation_invariance_along_partner():
    # adding a multiple of y to x never changes the pair norm
    rng = np.random.default_rng(7)
    sp = random_gram_space(rng, 5)
    x = rng.normal(size=5)
    y = rng.normal(size=5)
    base = sp.pair_norm(x, y)
    for t in (-2.0, 0.5, 10.0):
        assert sp.pair_norm(x + t * y, y) == pytest.approx(base, rel=1e-10)


def test_reverse_triangle_residual_nonnegative():
    rng = np.random.default_rng(13)
    worst = 0.0
    for _ in range(300):
        sp = random_gram_space(rng, int(rng.integers(2, 5)))
        x = Vector(sp, rng.normal(size=sp.dim))
        y = Vector(sp, rng.normal(size=sp.dim))
        z = Vector(sp, rng.normal(size=sp.dim))
        worst = min(worst, reverse_triangle_residual(x, y, z))
    assert worst >= -1e-12


def test_pair_norm_grad_matches_finite_differences():
    rng = np.random.default_rng(17)
    for _ in range(25):
        sp = random_gram_space(rng, int(rng.integers(2, 6)))
        x = rng.normal(size=sp.dim)
        y = rng.normal(size=sp.dim)
        p, g = sp.pair_norm_grad(x, y)
        assert p == pytest.approx(sp.pair_norm(x, y), rel=1e-12)
        h = 1e-6
        for j in range(sp.dim):
            e = np.zeros(sp.dim)
            e[j] = h
            fd = (sp.pair_norm(x + e, y) - sp.pair_norm(x - e, y)) / (2.0 * h)
            assert g[j] == pytest.approx(fd, rel=2e-5, abs=2e-5)


def test_pair_norm_grad_zero_at_kink():
    sp = GramSpace(np.eye(3))
    p, g = sp.pair_norm_grad(np.array([2.0, 0.0, 0.0]), np.array([1.0, 0.0, 0.0]))
    assert p == 0.0
    assert np.all(g == 0.0)


def test_batched_norms_agree_with_scalar():
    rng = np.random.default_rng(19)
    sp = random_gram_space(rng, 4)
    X = rng.normal(size=(40, 4))
    y = rng.normal(size=4)
    many = sp.pair_norm_many(X, y)
    for i in range(X.shape[0]):
        assert many[i] == pytest.approx(sp.pair_norm(X[i], y), rel=1e-12)
    Y = rng.normal(size=(40, 4))
    rows = sp.pair_norm_rows(X, Y)
    for i in range(X.shape[0]):
        assert rows[i] == pytest.approx(sp.pair_norm(X[i], Y[i]), rel=1e-12)


def test_kernel_matrix_spans_partner_line(r3):
    b = np.array([1.0, 2.0, -1.0])
    K = r3.kernel_matrix(b)
    assert K.shape[1] >= 1
    for j in range(K.shape[1]):
        p, scale = r3.pair_norm_scale(K[:, j], b)
        assert p <= 1e-9 * max(scale, 1.0)


def test_gram_validation_rejects_bad_input():
    with pytest.raises(InputError):
        GramSpace(np.array([[1.0, 2.0], [3.0, 4.0]]))
    with pytest.raises(InputError):
        GramSpace(np.array([[1.0, 2.0], [2.0, 1.0]]))
    with pytest.raises(InputError):
        GramSpace(np.ones((2, 3)))


def test_unvalidated_indefinite_gram_still_evaluates():
    sp = GramSpace(np.array([[1.0, 2.0], [2.0, 1.0]]), validate=False)
    val = sp.pair_norm([1.0, 0.0], [0.0, 1.0])
    assert np.isfinite(val)
    assert val >= 0.0


def test_vector_arithmetic_and_space_guard(r3, skew2):
    x = Vector(r3, [1.0, 2.0, 3.0])
    y = Vector(r3, [0.5, -1.0, 0.0])
    assert np.allclose((x + y).coords, [1.5, 1.0, 3.0])
    assert np.allclose((x - y).coords, [0.5, 3.0, 3.0])
    assert np.allclose((2.0 * x).coords, [2.0, 4.0, 6.0])
    assert np.allclose((-x).coords, [-1.0, -2.0, -3.0])
    with pytest.raises(InputError):
        _ = x + Vector(skew2, [1.0, 0.0])
    assert two_norm(x, y) == pytest.approx(r3.pair_norm(x.coords, y.coords))


def test_linearly_dependent_detector():
    rng = np.random.default_rng(23)
    sp = random_gram_space(rng, 3)
    x, y = random_independent_pair(rng, sp)
    assert not linearly_dependent(x, y)
    assert linearly_dependent(x, x * -2.5)
    assert linearly_dependent(x, sp.zero())


def test_subspace_membership():
    sp = GramSpace(np.eye(4))
    basis = [Vector(sp, [1, 0, 0, 0]), Vector(sp, [0, 1, 0, 0])]
    W = Subspace(sp, basis)
    assert W.nbasis == 2
    assert not W.is_full
    assert W.contains(Vector(sp, [2.0, -3.0, 0.0, 0.0]))
    assert not W.contains(Vector(sp, [0.0, 0.0, 1.0, 0.0]))
    with pytest.raises(InputError):
        Subspace(sp, basis + [Vector(sp, [1, 1, 0, 0])])


def test_standard_basis(r3):
    e = standard_basis(r3)
    assert len(e) == 3
    assert np.allclose(np.column_stack([v.coords for v in e]), np.eye(3))
