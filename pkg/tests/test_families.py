import numpy as np
import pytest

from twonormlab import (
    BLinearFunctional,
    FunctionalFamily,
    GramSpace,
    InputError,
    TotalSet,
    UnboundedFunctionalError,
    Vector,
    functional_norm,
    pointwise_bound,
    standard_basis,
    uniform_bound,
    weakstar_criterion,
    weakstar_limit,
)
from twonormlab.sampling import (
    blowup_sequence,
    convergent_sequence,
    oscillating_sequence,
    random_bounded_functional,
    random_gram_space,
    random_vector,
)


def _r3_with_anchor():
    sp = GramSpace(np.eye(3))
    return sp, Vector(sp, [0.0, 0.0, 1.0])


def _family(rng, sp, b, size):
    members = tuple(random_bounded_functional(rng, sp, b=b) for _ in range(size))
    return FunctionalFamily(members)


def test_family_construction_guards():
    sp, b = _r3_with_anchor()
    with pytest.raises(InputError):
        FunctionalFamily(())
    T = BLinearFunctional(sp, b, [1.0, 0.0, 0.0])
    other_b = BLinearFunctional(sp, Vector(sp, [0.0, 1.0, 0.0]), [1.0, 0.0, 0.0])
    with pytest.raises(InputError):
        FunctionalFamily((T, other_b))
    fam = FunctionalFamily.from_coeffs(sp, b, [[1.0, 0.0, 0.0], [0.0, 2.0, 0.0]], label="pair")
    assert len(fam) == 2
    assert fam.label == "pair"
    assert fam.space is sp


def test_total_set_rank_check():
    sp, b = _r3_with_anchor()
    e = standard_basis(sp)
    assert TotalSet((e[0], e[1])).is_total_for(b)
    assert not TotalSet((e[0],)).is_total_for(b)
    assert TotalSet((e[0], e[1], e[2])).is_total_for(Vector(sp, [1.0, 1.0, 1.0]))


def test_pointwise_bound_never_exceeds_uniform_bound():
    rng = np.random.default_rng(97)
    for _ in range(10):
        sp = random_gram_space(rng, int(rng.integers(2, 5)))
        b = random_vector(rng, sp)
        fam = _family(rng, sp, b, int(rng.integers(2, 7)))
        probes = [random_vector(rng, sp) for _ in range(12)]
        pw = pointwise_bound(fam, probes)
        un = uniform_bound(fam)
        assert pw <= un + 1e-9 * max(1.0, un)


def test_pointwise_bound_approaches_uniform_with_rich_probes():
    rng = np.random.default_rng(101)
    sp = random_gram_space(rng, 3)
    b = random_vector(rng, sp)
    fam = _family(rng, sp, b, 4)
    probes = [random_vector(rng, sp) for _ in range(4000)]
    pw = pointwise_bound(fam, probes)
    un = uniform_bound(fam)
    assert pw <= un + 1e-9
    assert pw >= 0.9 * un


def test_uniform_bound_is_max_member_norm():
    sp, b = _r3_with_anchor()
    fam = FunctionalFamily.from_coeffs(sp, b, [[3.0, 4.0, 0.0], [1.0, 0.0, 0.0]])
    assert uniform_bound(fam) == pytest.approx(5.0, rel=1e-12)
    assert uniform_bound(fam) == pytest.approx(
        max(functional_norm(T) for T in fam.members), rel=1e-12
    )


def test_kernel_probe_requires_vanishing():
    sp, b = _r3_with_anchor()
    fam = FunctionalFamily.from_coeffs(sp, b, [[1.0, 2.0, 0.0]])
    # anchor-direction probe contributes nothing but must be tolerated
    assert pointwise_bound(fam, [b]) == 0.0
    bad = FunctionalFamily(
        (BLinearFunctional(sp, b, np.array([0.0, 0.0, 1.0]), None),)
    )
    with pytest.raises(UnboundedFunctionalError):
        pointwise_bound(bad, [b])


def test_weakstar_limit_recovers_coefficients():
    rng = np.random.default_rng(103)
    sp = random_gram_space(rng, 4)
    b = random_vector(rng, sp)
    seq = convergent_sequence(rng, sp, b, window=400)
    limit = weakstar_limit(seq)
    assert limit is not None
    # the harmonic tail pins the limit to the last window coefficients
    assert np.allclose(limit.coeffs, seq[-1].coeffs, atol=1e-2)
    probes = [random_vector(rng, sp) for _ in range(5)]
    assert weakstar_limit(seq, probes=probes) is not None


def test_weakstar_limit_rejects_oscillation():
    rng = np.random.default_rng(107)
    sp = random_gram_space(rng, 3)
    b = random_vector(rng, sp)
    seq = oscillating_sequence(rng, sp, b, window=400)
    assert weakstar_limit(seq) is None


def test_weakstar_criterion_verdicts():
    rng = np.random.default_rng(109)
    sp = random_gram_space(rng, 3)
    b = random_vector(rng, sp)
    total = TotalSet(tuple(standard_basis(sp)))
    conv = convergent_sequence(rng, sp, b, window=400)
    osc = oscillating_sequence(rng, sp, b, window=400)
    blow = blowup_sequence(rng, sp, b, window=400)
    assert weakstar_criterion(conv, total) == "convergent"
    assert weakstar_criterion(osc, total) == "fails_cauchy_on_total"
    assert weakstar_criterion(blow, total) == "fails_norm_bound"


def test_norm_bound_verdict_reported_first():
    # blowup sequences also fail the Cauchy condition; the norm-bound
    # verdict must win
    rng = np.random.default_rng(113)
    sp = random_gram_space(rng, 3)
    b = random_vector(rng, sp)
    total = TotalSet(tuple(standard_basis(sp)))
    blow = blowup_sequence(rng, sp, b, window=300)
    vals = [float(np.abs(T.coeffs).max()) for T in blow]
    assert vals[-1] > vals[0]
    assert weakstar_criterion(blow, total) == "fails_norm_bound"


def test_linear_growth_detected_without_quarter_ratio():
    # norms n, n+1, ..., 4n have last-to-first quarter ratio 4 for every
    # window, yet the monotone rising tail must still be flagged
    sp, b = _r3_with_anchor()
    rows = [[float(n), 0.0, 0.0] for n in range(1, 401)]
    seq = [BLinearFunctional(sp, b, r) for r in rows]
    total = TotalSet((standard_basis(sp)[0], standard_basis(sp)[1]))
    assert weakstar_criterion(seq, total) == "fails_norm_bound"


def test_weakstar_criterion_total_set_guard():
    sp, b = _r3_with_anchor()
    seq = [BLinearFunctional(sp, b, [1.0 / n, 0.0, 0.0]) for n in range(1, 101)]
    thin = TotalSet((standard_basis(sp)[0],))
    with pytest.raises(InputError):
        weakstar_criterion(seq, thin)


def test_weakstar_limit_rejects_restricted_domains():
    sp, b = _r3_with_anchor()
    from twonormlab import Subspace

    W = Subspace(sp, [Vector(sp, [1.0, 0.0, 0.0])])
    T = BLinearFunctional(sp, b, [1.0, 0.0, 0.0], W)
    with pytest.raises(InputError):
        weakstar_limit([T] * 10)
