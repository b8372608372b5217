import numpy as np
import pytest

from twonormlab import GramSpace, ProductSpace, check_axioms
from twonormlab.sampling import random_gram_space

AXIOM_IDS = (
    "N1-dependent-vanish",
    "N1-zero-implies-dependent",
    "N2-symmetry",
    "N3-homogeneity",
    "N4-triangle",
)


def test_report_covers_all_axioms(r3):
    report = check_axioms(r3, samples=200, seed=0)
    assert tuple(c.axiom for c in report.checks) == AXIOM_IDS
    assert report.passed


def test_random_spd_spaces_pass():
    rng = np.random.default_rng(29)
    for _ in range(8):
        sp = random_gram_space(rng, int(rng.integers(2, 7)))
        report = check_axioms(sp, samples=400, seed=int(rng.integers(1 << 30)))
        assert report.passed, [c.to_dict() for c in report.checks if not c.passed]


def test_product_space_passes(prod22):
    report = check_axioms(prod22, samples=400, seed=3)
    assert report.passed


def test_indefinite_gram_fails_dependent_vanish():
    # eigenvalues 3 and -1; clamped evaluation gives dependent pairs a
    # spurious positive norm, which the forward N1 check must flag
    sp = GramSpace(np.array([[1.0, 2.0], [2.0, 1.0]]), validate=False)
    report = check_axioms(sp, samples=400, seed=1)
    assert not report.passed
    failed = {c.axiom for c in report.checks if not c.passed}
    assert "N1-dependent-vanish" in failed


def test_report_serializes(r3):
    d = check_axioms(r3, samples=50, seed=5).to_dict()
    assert d["space"] == {"kind": "gram", "dim": 3}
    assert d["passed"] is True
    assert len(d["axioms"]) == 5
    for entry in d["axioms"]:
        assert set(entry) == {"axiom", "passed", "worst_residual", "samples", "note"}


def test_seed_reproducibility(skew2):
    a = check_axioms(skew2, samples=150, seed=77).to_dict()
    b = check_axioms(skew2, samples=150, seed=77).to_dict()
    assert a == b


def test_nested_product_passes():
    rng = np.random.default_rng(31)
    inner = ProductSpace(random_gram_space(rng, 2), random_gram_space(rng, 2))
    outer = ProductSpace(inner, random_gram_space(rng, 3))
    report = check_axioms(outer, samples=300, seed=9)
    assert report.passed
