"""Randomized verification of the four 2-norm axioms.

Residuals are reported relative to the natural magnitude scale of each
sampled tuple (the product of intrinsic vector lengths), so tolerances are
dimensionless.  Failures are recorded in the report, never raised: the
checker is meant to be pointed at deliberately broken spaces as well.
"""

from dataclasses import dataclass, field

import numpy as np

from .spaces import DEPENDENCE_RTOL

__all__ = ["AxiomCheck", "AxiomReport", "check_axioms"]

_FLOOR = np.finfo(float).tiny


@dataclass(frozen=True)
class AxiomCheck:
    axiom: str
    passed: bool
    worst_residual: float
    samples: int
    note: str = ""

    def to_dict(self):
        return {
            "axiom": self.axiom,
            "passed": self.passed,
            "worst_residual": self.worst_residual,
            "samples": self.samples,
            "note": self.note,
        }


@dataclass(frozen=True)
class AxiomReport:
    space_kind: str
    dim: int
    samples: int
    seed: int
    rel_tol: float
    zero_tol: float
    checks: tuple = field(default_factory=tuple)

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_dict(self):
        return {
            "space": {"kind": self.space_kind, "dim": self.dim},
            "samples": self.samples,
            "seed": self.seed,
            "tolerances": {"rel_tol": self.rel_tol, "zero_tol": self.zero_tol},
            "axioms": [c.to_dict() for c in self.checks],
            "passed": self.passed,
        }


def check_axioms(space, samples=1000, seed=42, rel_tol=1e-9, zero_tol=DEPENDENCE_RTOL):
    """Sample random tuples and measure worst-case axiom residuals.

    N1 is checked in both directions: constructed dependent pairs must give
    a vanishing norm (forward), and sampled pairs whose norm tests as zero
    must actually be rank deficient (reverse, judged by the singular value
    ratio of the coordinate matrix).  N2 through N4 are plain relative
    residuals over ``samples`` random tuples each.
    """
    rng = np.random.default_rng(seed)
    n = space.dim
    X = rng.standard_normal((samples, n))
    Y = rng.standard_normal((samples, n))
    Z = rng.standard_normal((samples, n))

    checks = []

    # N1 forward: dependent pairs by construction, including zero vectors
    lam = rng.normal(0.0, 2.0, samples)
    Xd = X.copy()
    Yd = lam[:, None] * X
    ncut = min(5, samples)
    Yd[:ncut] = 0.0
    Xd[ncut : 2 * ncut] = 0.0
    Yd[ncut : 2 * ncut] = Y[ncut : 2 * ncut]
    vals, scales = space.pair_norm_rows(Xd, Yd, with_scale=True)
    res = vals / np.maximum(scales, _FLOOR)
    worst = float(res.max())
    checks.append(
        AxiomCheck(
            "N1-dependent-vanish",
            worst <= rel_tol,
            worst,
            samples,
            "norm of constructed dependent pairs, relative to scale",
        )
    )

    # N1 reverse: a vanishing norm must mean a rank-deficient pair
    vals, scales = space.pair_norm_rows(X, Y, with_scale=True)
    flagged = np.flatnonzero(vals <= zero_tol * np.maximum(scales, _FLOOR))
    worst_ratio = 0.0
    for i in flagged:
        sv = np.linalg.svd(np.column_stack([X[i], Y[i]]), compute_uv=False)
        if sv[0] > 0.0:
            worst_ratio = max(worst_ratio, float(sv[1] / sv[0]))
    checks.append(
        AxiomCheck(
            "N1-zero-implies-dependent",
            worst_ratio <= zero_tol,
            worst_ratio,
            samples,
            "singular value ratio of pairs whose norm tested as zero",
        )
    )

    # N2: symmetry
    v_xy, scales = space.pair_norm_rows(X, Y, with_scale=True)
    v_yx = space.pair_norm_rows(Y, X)
    worst = float((np.abs(v_xy - v_yx) / np.maximum(scales, _FLOOR)).max())
    checks.append(AxiomCheck("N2-symmetry", worst <= rel_tol, worst, samples))

    # N3: absolute homogeneity in the first slot
    alphas = rng.normal(0.0, 2.0, samples)
    v_scaled = space.pair_norm_rows(alphas[:, None] * X, Y)
    target = np.abs(alphas) * v_xy
    denom = np.maximum(np.abs(alphas) * scales, _FLOOR)
    worst = float((np.abs(v_scaled - target) / denom).max())
    checks.append(AxiomCheck("N3-homogeneity", worst <= rel_tol, worst, samples))

    # N4: triangle inequality in the second slot
    v_sum = space.pair_norm_rows(X, Y + Z)
    v_y, s_y = space.pair_norm_rows(X, Y, with_scale=True)
    v_z, s_z = space.pair_norm_rows(X, Z, with_scale=True)
    excess = (v_sum - v_y - v_z) / np.maximum(s_y + s_z, _FLOOR)
    worst = float(excess.max())
    checks.append(AxiomCheck("N4-triangle", worst <= rel_tol, worst, samples))

    return AxiomReport(
        space_kind=space.kind,
        dim=space.dim,
        samples=samples,
        seed=seed,
        rel_tol=rel_tol,
        zero_tol=zero_tol,
        checks=tuple(checks),
    )
