import math

import numpy as np
import pytest

from twonormlab import (
    GramSpace,
    InputError,
    ProductSpace,
    Vector,
    is_cauchy,
    product,
    split_cauchy,
    split_vector,
)
from twonormlab.sampling import random_gram_space


def test_pair_norm_is_component_sum(prod22):
    # identity factors: left pair area 1, right pair area 1, sum 2
    x = np.array([1.0, 0.0, 0.0, 1.0])
    y = np.array([0.0, 1.0, 1.0, 0.0])
    assert prod22.pair_norm(x, y) == pytest.approx(2.0, abs=1e-12)


def test_component_sum_on_random_pairs():
    rng = np.random.default_rng(37)
    left = random_gram_space(rng, 3)
    right = random_gram_space(rng, 2)
    ps = product(left, right)
    for _ in range(40):
        x = rng.normal(size=5)
        y = rng.normal(size=5)
        expect = left.pair_norm(x[:3], y[:3]) + right.pair_norm(x[3:], y[3:])
        assert ps.pair_norm(x, y) == pytest.approx(expect, rel=1e-12)


def test_degenerate_only_when_both_components_degenerate(prod22):
    # left components dependent, right independent: the sum is positive
    x = np.array([1.0, 0.0, 1.0, 0.0])
    y = np.array([2.0, 0.0, 0.0, 1.0])
    assert prod22.pair_norm(x, y) == pytest.approx(1.0, abs=1e-12)
    # dependent on both sides vanishes
    y2 = np.array([2.0, 0.0, 3.0, 0.0])
    assert prod22.pair_norm(x, y2) <= 1e-12


def test_split_vector_roundtrip(prod22):
    v = Vector(prod22, [1.0, 2.0, 3.0, 4.0])
    lv, rv = split_vector(v)
    assert np.allclose(lv.coords, [1.0, 2.0])
    assert np.allclose(rv.coords, [3.0, 4.0])
    assert lv.space is prod22.left and rv.space is prod22.right
    with pytest.raises(InputError):
        split_vector(Vector(GramSpace(np.eye(2)), [1.0, 0.0]))


def _product_sequence(ps, left_tail, right_tail, terms=50):
    # component n-th terms decay (Cauchy) or oscillate (not Cauchy)
    seq = []
    for n in range(1, terms + 1):
        lc = left_tail(n) * np.ones(ps.left.dim)
        rc = right_tail(n) * np.ones(ps.right.dim)
        seq.append(Vector(ps, np.concatenate([lc, rc])))
    return seq


def test_split_cauchy_conjunction(prod22):
    # geometric decay settles well below the 1e-6 gap tolerance inside a
    # 50-term window; a harmonic tail would not
    decay = lambda n: 2.0 ** (-n)
    flip = lambda n: (-1.0) ** n

    both = _product_sequence(prod22, decay, decay)
    l_only = _product_sequence(prod22, decay, flip)
    r_only = _product_sequence(prod22, flip, decay)
    neither = _product_sequence(prod22, flip, flip)

    assert split_cauchy(both) == (True, True)
    assert split_cauchy(l_only) == (True, False)
    assert split_cauchy(r_only) == (False, True)
    assert split_cauchy(neither) == (False, False)

    # the product sequence is Cauchy exactly when both components are
    assert is_cauchy(both)
    assert not is_cauchy(l_only)
    assert not is_cauchy(r_only)
    assert not is_cauchy(neither)


def test_split_cauchy_needs_probes_for_both_factors(prod22):
    seq = _product_sequence(prod22, lambda n: 2.0 ** (-n), lambda n: 2.0 ** (-n))
    with pytest.raises(InputError):
        split_cauchy(seq, probes=[Vector(prod22, [1.0, 0.0, 0.0, 0.0])])


def test_product_requires_spaces():
    with pytest.raises(InputError):
        ProductSpace(GramSpace(np.eye(2)), "not a space")


def test_nested_product_norm():
    rng = np.random.default_rng(41)
    a = random_gram_space(rng, 2)
    b = random_gram_space(rng, 2)
    c = random_gram_space(rng, 2)
    nested = product(product(a, b), c)
    x = rng.normal(size=6)
    y = rng.normal(size=6)
    expect = (
        a.pair_norm(x[:2], y[:2])
        + b.pair_norm(x[2:4], y[2:4])
        + c.pair_norm(x[4:], y[4:])
    )
    assert nested.pair_norm(x, y) == pytest.approx(expect, rel=1e-12)
