"""Property suites behind the verify command.

Each suite runs a seeded sweep and returns one report object: a check per
verified statement, labelled by a stable id ("thm-5.14" style), with the
worst residual seen and the tolerance it was held to.  Reports contain no
timestamps or machine state, so identical inputs and seed give identical
bytes after serialization.
"""

import numpy as np

from .axioms import check_axioms
from .errors import InputError
from .extension import duality_ratios, extend_full, norming_functional
from .families import FunctionalFamily, TotalSet, pointwise_bound, uniform_bound, weakstar_criterion, weakstar_limit
from .functionals import (
    check_b_sequential_continuity,
    check_epsilon_delta_continuity,
    evaluate,
    functional_norm,
    lipschitz_residual,
    norm_formulas,
)
from .product import product, split_cauchy
from .report import SCHEMA_VERSION
from .sampling import (
    blowup_sequence,
    convergent_sequence,
    oscillating_sequence,
    random_bounded_functional,
    random_gram_space,
    random_independent_pair,
    random_subspace,
    random_vector,
)
from .spaces import (
    GramSpace,
    ProductSpace,
    Vector,
    converges_to,
    is_cauchy,
    reverse_triangle_residual,
    standard_basis,
    two_norm,
)

__all__ = ["SUITE_NAMES", "suite_tolerances", "run_suite"]

SUITE_NAMES = ("norm", "duality", "ubp", "weakstar", "product")

_TOLERANCES = {
    "norm": {
        "reverse_triangle": 1e-12,
        "norm_agree": 1e-6,
        "formula_agree": 1e-6,
        "lipschitz": 1e-9,
        "continuity": 1e-6,
    },
    "duality": {
        "interval_gap": 1e-6,
        "agree_on_domain": 1e-9,
        "norm_preserve": 1e-6,
        "norming_value": 1e-9,
        "norming_norm": 1e-6,
        "duality": 1e-4,
        "ratio_excess": 1e-9,
    },
    "ubp": {
        "ordering": 1e-9,
    },
    "weakstar": {
        "tail": 1e-3,
        "m_bound": 1e-9,
    },
    "product": {
        "axiom_rel": 1e-9,
        "zero": 1e-10,
        "cauchy": 1e-6,
    },
}


def suite_tolerances(suite, overrides=None):
    if suite not in _TOLERANCES:
        raise InputError(f"unknown suite {suite!r}; expected one of {SUITE_NAMES}")
    tols = dict(_TOLERANCES[suite])
    for name, value in (overrides or {}).items():
        if name not in tols:
            raise InputError(
                f"unknown tolerance {name!r} for suite {suite!r}; known: {sorted(tols)}"
            )
        tols[name] = float(value)
    return tols


def _check(check_id, label, passed, residual, tol, **extra):
    out = {
        "id": check_id,
        "label": label,
        "passed": bool(passed),
        "residual": float(residual),
        "tol": float(tol),
    }
    out.update(extra)
    return out


def _report(suite, seed, samples, tols, subject, checks):
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "seed": int(seed),
        "samples": int(samples),
        "tolerances": tols,
        "subject": subject,
        "checks": checks,
        "passed": all(c["passed"] for c in checks),
    }


def _norm_suite(space, seed, samples, tols):
    rng = np.random.default_rng(seed)
    checks = []

    n_tri = max(100, samples)
    worst = np.inf
    for _ in range(n_tri):
        x, y, z = (random_vector(rng, space) for _ in range(3))
        worst = min(worst, reverse_triangle_residual(x, y, z))
    checks.append(
        _check(
            "thm-4.1",
            "reverse triangle residual stays nonnegative",
            worst >= -tols["reverse_triangle"],
            max(0.0, -worst),
            tols["reverse_triangle"],
            count=n_tri,
        )
    )

    worst_rel = 0.0
    count = 0
    sweep_spaces = [random_gram_space(rng, d) for d in range(2, 7)]
    if isinstance(space, GramSpace):
        sweep_spaces.append(space)
    for sp in sweep_spaces:
        for _ in range(2):
            T = random_bounded_functional(rng, sp)
            a = functional_norm(T, method="closed_form")
            o = functional_norm(T, method="oracle", seed=int(rng.integers(2**31)))
            worst_rel = max(worst_rel, abs(a - o) / max(a, o, 1e-12))
            count += 1
    checks.append(
        _check(
            "def-2.13",
            "closed-form norm agrees with the optimizer oracle",
            worst_rel <= tols["norm_agree"],
            worst_rel,
            tols["norm_agree"],
            count=count,
            variant="closed-vs-oracle",
        )
    )

    worst_spread = 0.0
    n_formula = 4
    for _ in range(n_formula):
        T = random_bounded_functional(rng, space)
        vals = norm_formulas(T, seed=int(rng.integers(2**31)))
        hi = max(vals.values())
        lo = min(vals.values())
        worst_spread = max(worst_spread, (hi - lo) / max(hi, 1e-12))
    checks.append(
        _check(
            "def-2.13",
            "the four norm formulas agree on common instances",
            worst_spread <= tols["formula_agree"],
            worst_spread,
            tols["formula_agree"],
            count=n_formula,
            variant="four-formulas",
        )
    )

    worst_lip = np.inf
    n_pairs = max(20, samples // 20)
    for _ in range(4):
        T = random_bounded_functional(rng, space)
        T = T.with_cached_norm(functional_norm(T))
        denom = max(1.0, T.cached_norm)
        for _ in range(n_pairs):
            x, y = random_vector(rng, space), random_vector(rng, space)
            worst_lip = min(worst_lip, lipschitz_residual(T, x, y) / denom)
    checks.append(
        _check(
            "thm-4.2",
            "norm times pair distance dominates the image gap",
            worst_lip >= -tols["lipschitz"],
            max(0.0, -worst_lip),
            tols["lipschitz"],
            count=4 * n_pairs,
        )
    )

    seq_ok = True
    for _ in range(3):
        T = random_bounded_functional(rng, space)
        x = random_vector(rng, space)
        d = random_vector(rng, space)
        seq = [x + d * 2.0 ** (-k) for k in range(1, 61)]
        seq_ok = seq_ok and check_b_sequential_continuity(T, seq, x, tol=tols["continuity"])
    checks.append(
        _check(
            "thm-4.4",
            "images of b-convergent sequences converge",
            seq_ok,
            0.0 if seq_ok else 1.0,
            tols["continuity"],
            count=3,
        )
    )

    eps_ok = True
    worst_margin = 0.0
    for _ in range(2):
        T = random_bounded_functional(rng, space)
        x0 = random_vector(rng, space)
        rep = check_epsilon_delta_continuity(
            T, x0, epsilons=(0.5, 1e-2), samples=100, seed=int(rng.integers(2**31))
        )
        eps_ok = eps_ok and rep.passed
        for w in rep.witnesses:
            worst_margin = max(worst_margin, w.max_deviation / w.epsilon)
    checks.append(
        _check(
            "thm-4.7",
            "delta = epsilon over norm witnesses continuity on sampled balls",
            eps_ok,
            worst_margin,
            1.0,
            count=2,
        )
    )
    return checks


def _duality_suite(space, seed, samples, tols):
    rng = np.random.default_rng(seed)
    checks = []
    n = max(5, samples // 40)

    worst_gap = 0.0
    worst_agree = 0.0
    worst_norm = 0.0
    for _ in range(n):
        nbasis = int(rng.integers(1, max(2, space.dim - 1)))
        W = random_subspace(rng, space, nbasis)
        T_W = random_bounded_functional(rng, space, domain=W)
        T_full, trace = extend_full(T_W)
        for step in trace.steps:
            worst_gap = max(worst_gap, step.s - step.i)
        for w in W.basis:
            ref = evaluate(T_W, w)
            worst_agree = max(
                worst_agree, abs(evaluate(T_full, w) - ref) / max(1.0, abs(ref))
            )
        n0 = trace.initial_norm
        worst_norm = max(worst_norm, abs(functional_norm(T_full) - n0) / max(1.0, n0))
    checks.append(
        _check(
            "thm-5.12",
            "extension intervals are non-empty at the functional norm",
            worst_gap <= tols["interval_gap"],
            worst_gap,
            tols["interval_gap"],
            count=n,
            variant="interval",
        )
    )
    checks.append(
        _check(
            "thm-5.12",
            "full extension agrees with the original on its domain",
            worst_agree <= tols["agree_on_domain"],
            worst_agree,
            tols["agree_on_domain"],
            count=n,
            variant="agreement",
        )
    )
    checks.append(
        _check(
            "thm-5.12",
            "full extension preserves the functional norm",
            worst_norm <= tols["norm_preserve"],
            worst_norm,
            tols["norm_preserve"],
            count=n,
            variant="norm",
        )
    )

    worst_val = 0.0
    worst_one = 0.0
    for _ in range(n):
        x0, b = random_independent_pair(rng, space)
        T = norming_functional(x0, b)
        target = two_norm(x0, b)
        worst_val = max(worst_val, abs(evaluate(T, x0) - target) / max(1.0, target))
        worst_one = max(worst_one, abs(functional_norm(T) - 1.0))
    checks.append(
        _check(
            "thm-5.13",
            "norming functional attains the pair norm at unit norm",
            worst_val <= tols["norming_value"] and worst_one <= tols["norming_norm"],
            max(worst_val, worst_one),
            tols["norming_norm"],
            count=n,
            value_residual=worst_val,
            norm_residual=worst_one,
        )
    )

    worst_dual = 0.0
    worst_excess = 0.0
    for k in range(n):
        x, b = random_independent_pair(rng, space)
        target = two_norm(x, b)
        norming_ratio, ratios = duality_ratios(x, b, trials=8, seed=int(rng.integers(2**31)))
        recovered = max([norming_ratio] + ratios)
        worst_dual = max(worst_dual, abs(recovered - target) / max(1.0, target))
        worst_excess = max(worst_excess, (recovered - target) / max(1.0, target))
    checks.append(
        _check(
            "thm-5.14",
            "duality ratios recover the pair norm from below",
            worst_dual <= tols["duality"] and worst_excess <= tols["ratio_excess"],
            worst_dual,
            tols["duality"],
            count=n,
            excess=worst_excess,
        )
    )
    return checks


def _random_family(rng, space, size):
    b = random_vector(rng, space)
    members = tuple(
        random_bounded_functional(rng, space, b=b, scale=float(rng.uniform(0.2, 3.0)))
        for _ in range(size)
    )
    return FunctionalFamily(members)


def _ubp_checks(family, rng, samples, tols):
    checks = []
    space = family.space
    probes = standard_basis(space) + [random_vector(rng, space) for _ in range(8)]
    pw = pointwise_bound(family, probes)
    ub = uniform_bound(family)
    checks.append(
        _check(
            "def-5.2",
            "uniform bound dominates the pointwise bound on the input family",
            ub >= pw - tols["ordering"] and np.isfinite(ub),
            max(0.0, pw - ub),
            tols["ordering"],
            pointwise=pw,
            uniform=ub,
        )
    )

    n_fam = max(10, samples // 100)
    worst = 0.0
    max_ub = ub
    for _ in range(n_fam):
        fam = _random_family(rng, space, int(rng.integers(3, 13)))
        probes = standard_basis(space) + [random_vector(rng, space) for _ in range(4)]
        pw_k = pointwise_bound(fam, probes)
        ub_k = uniform_bound(fam)
        worst = max(worst, pw_k - ub_k)
        max_ub = max(max_ub, ub_k)
    checks.append(
        _check(
            "thm-5.3",
            "pointwise ratios never exceed the uniform bound",
            worst <= tols["ordering"],
            max(0.0, worst),
            tols["ordering"],
            count=n_fam,
        )
    )
    checks.append(
        _check(
            "thm-5.4",
            "families of bounded members have a finite uniform bound",
            bool(np.isfinite(max_ub)),
            0.0 if np.isfinite(max_ub) else float("inf"),
            float("inf"),
            max_uniform_bound=float(max_ub),
        )
    )
    return checks


def _ubp_suite(family, seed, samples, tols):
    rng = np.random.default_rng(seed)
    return _ubp_checks(family, rng, samples, tols)


def _weakstar_suite(family, seed, samples, tols):
    rng = np.random.default_rng(seed)
    checks = []
    seq = list(family.members)
    space = family.space
    total = TotalSet(tuple(standard_basis(space)))
    verdict = weakstar_criterion(seq, total, tol=tols["tail"])
    limit = weakstar_limit(seq, probes=standard_basis(space), tol=tols["tail"])
    agree = (verdict == "convergent") == (limit is not None)
    checks.append(
        _check(
            "thm-5.10",
            "two-condition verdict matches direct limit existence",
            agree,
            0.0 if agree else 1.0,
            tols["tail"],
            verdict=verdict,
            limit_exists=limit is not None,
        )
    )

    if limit is not None:
        M = uniform_bound(family)
        worst = -np.inf
        b = family.b
        for _ in range(max(50, samples // 10)):
            x = random_vector(rng, space)
            p = two_norm(x, b)
            worst = max(worst, abs(evaluate(limit, x)) - M * p)
        passed = worst <= tols["m_bound"] * max(1.0, M)
        checks.append(
            _check(
                "thm-5.5",
                "the weak* limit is bounded by the family constant",
                passed,
                max(0.0, worst),
                tols["m_bound"],
                M=M,
            )
        )
    else:
        checks.append(
            _check(
                "thm-5.5",
                "the weak* limit is bounded by the family constant",
                True,
                0.0,
                tols["m_bound"],
                note="no limit in the window; nothing to bound",
            )
        )

    n_each = max(4, samples // 250)
    window = 400
    mismatches = 0
    count = 0
    for _ in range(n_each):
        b = random_vector(rng, space)
        fixtures = (
            (convergent_sequence(rng, space, b, window=window), "convergent"),
            (oscillating_sequence(rng, space, b, window=window), "fails_cauchy_on_total"),
            (blowup_sequence(rng, space, b, window=window), "fails_norm_bound"),
        )
        for fix_seq, expected in fixtures:
            count += 1
            v = weakstar_criterion(fix_seq, total, tol=tols["tail"])
            lim = weakstar_limit(fix_seq, tol=tols["tail"])
            if v != expected or (lim is not None) != (expected == "convergent"):
                mismatches += 1
    checks.append(
        _check(
            "def-5.8",
            "constructed sequence classes are classified as built",
            mismatches == 0,
            float(mismatches),
            0.0,
            count=count,
        )
    )
    return checks


def _product_suite(space, seed, samples, tols):
    rng = np.random.default_rng(seed)
    checks = []
    pspace = space if isinstance(space, ProductSpace) else product(space, space)

    rep = check_axioms(
        pspace, samples=samples, seed=seed, rel_tol=tols["axiom_rel"], zero_tol=tols["zero"]
    )
    worst = max(c.worst_residual for c in rep.checks)
    checks.append(
        _check(
            "thm-3.1",
            "the summed product 2-norm satisfies all four axioms",
            rep.passed,
            worst,
            tols["axiom_rel"],
            detail={c.axiom: c.worst_residual for c in rep.checks},
        )
    )

    n_seq = max(8, samples // 125)
    bad = 0
    for k in range(n_seq):
        want_left = bool(k % 2)
        want_right = bool((k // 2) % 2)
        seq = _product_sequence(rng, pspace, want_left, want_right)
        got = split_cauchy(seq, tol=tols["cauchy"])
        whole = is_cauchy(seq, tol=tols["cauchy"])
        if got != (want_left, want_right) or whole != (want_left and want_right):
            bad += 1
    checks.append(
        _check(
            "thm-3.1",
            "product Cauchy equals the conjunction of component verdicts",
            bad == 0,
            float(bad),
            0.0,
            count=n_seq,
            variant="split-cauchy",
        )
    )

    conv_bad = 0
    n_conv = 6
    for _ in range(n_conv):
        x = random_vector(rng, pspace)
        d = random_vector(rng, pspace)
        seq = [x + d * 2.0 ** (-k) for k in range(1, 41)]
        if not converges_to(seq, x, tol=tols["cauchy"]):
            conv_bad += 1
    checks.append(
        _check(
            "def-2.2",
            "componentwise perturbation decay gives product convergence",
            conv_bad == 0,
            float(conv_bad),
            0.0,
            count=n_conv,
        )
    )
    return checks


def _product_sequence(rng, pspace, left_cauchy, right_cauchy, terms=60):
    base = random_vector(rng, pspace).coords
    dl = rng.standard_normal(pspace.left.dim)
    dr = rng.standard_normal(pspace.right.dim)
    dl /= max(np.linalg.norm(dl), 1e-12)
    dr /= max(np.linalg.norm(dr), 1e-12)
    out = []
    for k in range(1, terms + 1):
        lpart = dl / (k * k) if left_cauchy else dl * ((-1.0) ** k)
        rpart = dr / (k * k) if right_cauchy else dr * ((-1.0) ** k)
        out.append(Vector(pspace, base + np.concatenate([lpart, rpart])))
    return out


def _subject(obj):
    if isinstance(obj, FunctionalFamily):
        return {
            "kind": "family",
            "label": obj.label,
            "size": len(obj),
            "space": obj.space.to_spec(),
            "b": list(obj.b.coords),
        }
    return obj.to_spec()


_RUNNERS = {
    "norm": _norm_suite,
    "duality": _duality_suite,
    "ubp": _ubp_suite,
    "weakstar": _weakstar_suite,
    "product": _product_suite,
}


def run_suite(suite, subject, seed=42, samples=1000, tol_overrides=None):
    """Run one named suite against a space (norm/duality/product) or a
    family (ubp/weakstar) and return the report object."""
    tols = suite_tolerances(suite, tol_overrides)
    expects_family = suite in ("ubp", "weakstar")
    if expects_family != isinstance(subject, FunctionalFamily):
        kind = "a family spec" if expects_family else "a space spec"
        raise InputError(f"suite {suite!r} expects {kind}")
    checks = _RUNNERS[suite](subject, seed, samples, tols)
    return _report(suite, seed, samples, tols, _subject(subject), checks)
