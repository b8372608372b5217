"""Bounded b-linear functionals and their operator norms.

A b-linear functional is linear in its first slot and evaluated with the
second slot frozen at an anchor vector b; it is represented here by an
ambient coefficient vector c with ``T(x, b) = c . x`` on a domain subspace
W (the whole space when omitted).  Boundedness means ``|T(x,b)| <= M ||x,b||``
on W for some M, which in finite dimension is equivalent to c vanishing on
the kernel of ``x -> ||x, b||`` intersected with W.

Two independent routes compute the norm:

* ``closed_form`` (gram spaces): with ``Mq = (b^T G b) G - (G b)(G b)^T``
  the squared norm is ``c^T Mq^+ c``, transported into domain coordinates
  for restricted domains.
* ``oracle``: numerical maximization of ``|T(x,b)| / ||x,b||`` over unit
  directions of a complement of the kernel inside W, by seeded grid search
  plus local refinement on the sphere.

The two agreeing is one of the package's standing acceptance checks.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import (
    DomainError,
    InputError,
    PreconditionError,
    UnboundedFunctionalError,
)
from .spaces import (
    DEPENDENCE_RTOL,
    GramSpace,
    Subspace,
    Vector,
    converges_to,
    two_norm,
)

__all__ = [
    "BLinearFunctional",
    "evaluate",
    "is_bounded",
    "functional_norm",
    "norm_formulas",
    "lipschitz_residual",
    "check_b_sequential_continuity",
    "check_epsilon_delta_continuity",
    "WitnessCheck",
    "ContinuityReport",
]


class BLinearFunctional:
    """Coefficient representation of a b-linear functional.

    Instances are value objects; ``with_cached_norm`` returns a new one
    rather than mutating.  ``cached_norm`` is advisory and is re-derivable
    through :func:`functional_norm` at any time.
    """

    __slots__ = ("space", "b", "coeffs", "domain", "cached_norm")

    def __init__(self, space, b, coeffs, domain=None, cached_norm=None):
        if not isinstance(b, Vector):
            b = Vector(space, b)
        if b.space != space:
            raise InputError("anchor vector belongs to a different space")
        if not np.any(b.coords != 0.0):
            raise InputError("anchor vector must be nonzero")
        c = np.asarray(coeffs, dtype=float)
        if c.shape != (space.dim,):
            raise InputError(f"expected {space.dim} coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise InputError("coefficients must be finite")
        if domain is not None:
            if not isinstance(domain, Subspace):
                raise InputError("domain must be a Subspace or None")
            if domain.space != space:
                raise InputError("domain belongs to a different space")
        self.space = space
        self.b = b
        cc = c.copy()
        cc.flags.writeable = False
        self.coeffs = cc
        self.domain = domain
        self.cached_norm = None if cached_norm is None else float(cached_norm)

    def with_cached_norm(self, value):
        return BLinearFunctional(self.space, self.b, self.coeffs, self.domain, value)

    def domain_matrix(self):
        if self.domain is None:
            return np.eye(self.space.dim)
        return np.asarray(self.domain.matrix)

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self):
        dom = "full" if self.domain is None else f"dim {self.domain.nbasis}"
        return f"BLinearFunctional(dim={self.space.dim}, domain={dom})"


def _orthonormal_columns(M):
    """Orthonormal basis of the column space of M."""
    if M.shape[1] == 0:
        return M
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return np.zeros((M.shape[0], 0))
    r = int((s > max(M.shape) * np.finfo(float).eps * s[0]).sum())
    return u[:, :r]


def _domain_quotient(space, b_arr, B):
    """Split span(B) into kernel and complement parts.

    Returns ``(A, KW)`` where KW spans ``ker ||., b|| cap span(B)`` and A
    spans a complement of it inside span(B); the seminorm restricted to
    span(A) is a genuine norm away from zero.
    """
    n, k = B.shape
    if k == 0:
        return np.zeros((n, 0)), np.zeros((n, 0))
    K = space.kernel_matrix(b_arr)
    M = np.hstack([B, -K])
    _, s, vt = np.linalg.svd(M, full_matrices=True)
    tol = max(M.shape) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    rank = int((s > tol).sum())
    null_basis = vt[rank:].T
    Ucoef = null_basis[:k, :]
    if Ucoef.shape[1]:
        uu, ss, _ = np.linalg.svd(Ucoef, full_matrices=True)
        r = int((ss > k * np.finfo(float).eps * (ss[0] if ss.size else 0.0)).sum())
        ker_dirs = uu[:, :r]
        comp = uu[:, r:]
    else:
        ker_dirs = np.zeros((k, 0))
        comp = np.eye(k)
    return B @ comp, B @ ker_dirs


def evaluate(T, x):
    """Value ``T(x, b)``; raises :class:`DomainError` outside the domain."""
    if not isinstance(x, Vector):
        raise InputError("evaluate expects a Vector")
    if x.space != T.space:
        raise InputError("vector belongs to a different space")
    if T.domain is not None and not T.domain.is_full and not T.domain.contains(x):
        raise DomainError("vector lies outside the functional's domain")
    return float(T.coeffs @ x.coords)


def is_bounded(T, zero_tol=DEPENDENCE_RTOL):
    """Whether ``|T(x,b)| <= M ||x,b||`` holds on the domain for some M.

    Tested as c vanishing on the seminorm kernel intersected with the
    domain, each kernel basis vector judged relative to ``|c| |k|``.
    """
    c = T.coeffs
    cn = float(np.linalg.norm(c))
    if cn == 0.0:
        return True
    _, KW = _domain_quotient(T.space, T.b.coords, T.domain_matrix())
    for col in KW.T:
        kn = float(np.linalg.norm(col))
        if abs(float(c @ col)) > zero_tol * cn * max(kn, np.finfo(float).tiny):
            return False
    return True


def _closed_form_norm(T):
    space = T.space
    if not isinstance(space, GramSpace):
        raise InputError("closed-form norm requires a gram space")
    G = space.gram
    b = T.b.coords
    gb = G @ b
    Mq = float(b @ gb) * G - np.outer(gb, gb)
    B = T.domain_matrix()
    S = B.T @ Mq @ B
    v = B.T @ T.coeffs
    val2 = float(v @ np.linalg.pinv(S, rcond=1e-12, hermitian=True) @ v)
    return math.sqrt(max(val2, 0.0))


def _complete_orthonormal(d):
    """Orthonormal basis of the hyperplane orthogonal to unit vector d."""
    u, _, _ = np.linalg.svd(d.reshape(-1, 1), full_matrices=True)
    return u[:, 1:]


def _sphere_refine(obj, d0, maxfev):
    """Maximize ``obj`` over unit directions starting from d0.

    Runs Nelder-Mead in tangent charts of shrinking extent; the chart keeps
    the problem well conditioned despite the objective's scale invariance.
    """
    q = d0.size
    best_v = obj(d0)
    best_d = d0
    if q == 1:
        return best_v, best_d
    for scale in (0.3, 0.03, 0.003):
        Q = _complete_orthonormal(best_d)
        anchor = best_d

        def chart(w):
            v = anchor + Q @ w
            nv = float(np.linalg.norm(v))
            if nv == 0.0:
                return np.inf
            return -obj(v / nv)

        simplex = np.vstack([np.zeros(q - 1), scale * np.eye(q - 1)])
        res = minimize(
            chart,
            np.zeros(q - 1),
            method="Nelder-Mead",
            options={
                "maxfev": maxfev,
                "xatol": 1e-12,
                "fatol": 1e-14,
                "initial_simplex": simplex,
            },
        )
        v = anchor + Q @ res.x
        v /= float(np.linalg.norm(v))
        val = obj(v)
        if val > best_v:
            best_v, best_d = val, v
    return best_v, best_d


def _ratio_setup(T):
    A, _ = _domain_quotient(T.space, T.b.coords, T.domain_matrix())
    return A


def _grid_directions(q, m, seed):
    rng = np.random.default_rng(seed)
    D = rng.standard_normal((m, q))
    norms = np.linalg.norm(D, axis=1)
    D = D[norms > 0.0] / norms[norms > 0.0, None]
    return np.vstack([np.eye(q), D])


def _ratio_max(space, b_arr, A, c, budget, seed):
    """Supremum of ``|c.x| / ||x,b||`` over the complement spanned by A."""
    q = A.shape[1]

    def one(v):
        x = A @ v
        den = space.pair_norm(x, b_arr)
        if den == 0.0:
            return 0.0
        return abs(float(c @ x)) / den

    if q == 1:
        d = np.ones(1)
        return one(d), A @ d / space.pair_norm(A @ d, b_arr)
    m = min(4096, max(64, budget // 2))
    D = _grid_directions(q, m, seed)
    X = D @ A.T
    num = np.abs(X @ c)
    den = space.pair_norm_many(X, b_arr)
    vals = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), 0.0)
    order = np.argsort(vals)[::-1]
    best_v = float(vals[order[0]])
    best_d = D[order[0]]
    refine_budget = max(120 * q, (budget - m) // 2)
    for idx in order[:2]:
        v, d = _sphere_refine(one, D[idx], refine_budget)
        if v > best_v:
            best_v, best_d = v, d
    x = A @ best_d
    return best_v, x / space.pair_norm(x, b_arr)


def functional_norm(T, method="auto", budget=10000, seed=0):
    """Operator norm of a bounded functional.

    ``method`` is ``closed_form``, ``oracle``, or ``auto`` (closed form on
    gram spaces, oracle otherwise).  The zero subspace has norm 0 by
    convention.  Raises :class:`UnboundedFunctionalError` for unbounded
    input rather than returning infinity.
    """
    if not is_bounded(T):
        raise UnboundedFunctionalError("functional is unbounded; it has no finite norm")
    B = T.domain_matrix()
    if B.shape[1] == 0:
        return 0.0
    if method == "auto":
        method = "closed_form" if isinstance(T.space, GramSpace) else "oracle"
    if method == "closed_form":
        return _closed_form_norm(T)
    if method != "oracle":
        raise InputError(f"unknown norm method {method!r}")
    A = _ratio_setup(T)
    if A.shape[1] == 0:
        return 0.0
    val, _ = _ratio_max(T.space, T.b.coords, A, T.coeffs, budget, seed)
    return val


def norm_formulas(T, budget=10000, seed=0):
    """The four textbook norm expressions, each evaluated numerically.

    Returns a dict with keys ``inf_constant`` (smallest admissible Lipschitz
    constant, by feasibility bisection), ``sup_ball`` (supremum over the
    closed unit slice ``||x,b|| <= 1``), ``sup_sphere`` (supremum over the
    slice boundary), and ``sup_ratio``.  They agree up to search error for
    any bounded functional.
    """
    if not is_bounded(T):
        raise UnboundedFunctionalError("functional is unbounded")
    space, b_arr, c = T.space, T.b.coords, T.coeffs
    A = _ratio_setup(T)
    q = A.shape[1]
    if q == 0:
        return {"inf_constant": 0.0, "sup_ball": 0.0, "sup_sphere": 0.0, "sup_ratio": 0.0}

    sup_ratio, _ = _ratio_max(space, b_arr, A, c, budget, seed)

    def normalized_value(v):
        x = A @ v
        den = space.pair_norm(x, b_arr)
        if den == 0.0:
            return 0.0
        return abs(float(c @ (x / den)))

    m = min(2048, max(64, budget // 4))
    D = _grid_directions(q, m, seed)
    X = D @ A.T
    den = space.pair_norm_many(X, b_arr)
    good = den > 0.0
    Xhat = X[good] / den[good, None]
    sphere_vals = np.abs(Xhat @ c)
    d0 = D[good][int(np.argmax(sphere_vals))] if sphere_vals.size else np.eye(q)[0]
    sup_sphere, d_sphere = _sphere_refine(normalized_value, d0, max(120 * q, budget // 4))
    sup_sphere = max(sup_sphere, float(sphere_vals.max(initial=0.0)))

    # ball route: radial fractions of the unit slice, best lands on the rim
    fractions = np.array([0.25, 0.5, 0.75, 1.0])
    ball_grid = float(max((rho * sphere_vals).max(initial=0.0) for rho in fractions))
    rim, _ = _sphere_refine(normalized_value, d_sphere, max(60 * q, budget // 8))
    sup_ball = max(ball_grid, rim)

    # inf route: bisection on M over the pooled direction set
    directions = np.vstack([D, d_sphere.reshape(1, -1)])
    Xall = directions @ A.T
    num_all = np.abs(Xall @ c)
    den_all = space.pair_norm_many(Xall, b_arr)
    keep = den_all > 0.0
    num_all, den_all = num_all[keep], den_all[keep]
    hi = max(1.0, 2.0 * float((num_all / den_all).max(initial=0.0)), 2.0 * sup_ratio)
    lo = 0.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if np.any(num_all - mid * den_all > 0.0):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * max(1.0, hi):
            break
    inf_constant = 0.5 * (lo + hi)

    return {
        "inf_constant": inf_constant,
        "sup_ball": sup_ball,
        "sup_sphere": sup_sphere,
        "sup_ratio": sup_ratio,
    }


def lipschitz_residual(T, x, y):
    """``||T|| ||x - y, b|| - |T(x,b) - T(y,b)|``; nonnegative up to rounding."""
    norm = T.cached_norm if T.cached_norm is not None else functional_norm(T)
    gap = abs(evaluate(T, x) - evaluate(T, y))
    return norm * two_norm(x - y, T.b) - gap


def check_b_sequential_continuity(T, seq, x, tol=1e-6, tail=None):
    """Images of a b-convergent sequence must converge, with rate ``||T||``.

    Precondition failures (unbounded functional, or a sequence that does not
    converge to x in the b probe) raise :class:`PreconditionError`; the
    return value reports only the continuity conclusion itself.
    """
    if not is_bounded(T):
        raise PreconditionError("functional is unbounded")
    seq = list(seq)
    if not seq:
        raise InputError("sequence must be non-empty")
    if not converges_to(seq, x, probes=[T.b], tol=tol, tail=tail):
        raise PreconditionError("sequence does not converge to x along the anchor probe")
    norm = T.cached_norm if T.cached_norm is not None else functional_norm(T)
    k = max(1, len(seq) // 10) if tail is None else int(tail)
    thresh = norm * tol + 1e-12 * max(1.0, norm)
    target = evaluate(T, x)
    return all(abs(evaluate(T, s) - target) <= thresh for s in seq[-k:])


@dataclass(frozen=True)
class WitnessCheck:
    epsilon: float
    delta: float
    max_deviation: float
    samples: int
    passed: bool

    def to_dict(self):
        return {
            "epsilon": self.epsilon,
            "delta": self.delta,
            "max_deviation": self.max_deviation,
            "samples": self.samples,
            "passed": self.passed,
        }


@dataclass(frozen=True)
class ContinuityReport:
    witnesses: tuple

    @property
    def passed(self):
        return all(w.passed for w in self.witnesses)

    def to_dict(self):
        return {"witnesses": [w.to_dict() for w in self.witnesses], "passed": self.passed}


def check_epsilon_delta_continuity(T, x0, epsilons, samples=200, seed=0):
    """Continuity at x0 with the explicit witness ``delta = epsilon / ||T||``.

    For each epsilon the directional ball ``{x : ||x - x0, b|| < delta}`` is
    sampled, including excursions along b itself (the ball is unbounded in
    that direction), and the image spread ``|T(x) - T(x0)|`` is compared
    against epsilon.  A zero-norm functional takes ``delta = 1``.
    """
    if not is_bounded(T):
        raise PreconditionError("functional is unbounded")
    norm = T.cached_norm if T.cached_norm is not None else functional_norm(T)
    space = T.space
    b_arr = T.b.coords
    rng = np.random.default_rng(seed)
    B = T.domain_matrix()
    base = evaluate(T, x0)
    b_in_domain = T.domain is None or T.domain.contains(T.b)
    witnesses = []
    for eps in epsilons:
        eps = float(eps)
        if eps <= 0.0:
            raise InputError("epsilon values must be positive")
        delta = eps / norm if norm > 0.0 else 1.0
        raw = rng.standard_normal((samples, B.shape[1])) @ B.T
        p_u, scale_u = space.pair_norm_many(raw, b_arr, with_scale=True)
        good = p_u > 1e-12 * np.maximum(scale_u, 1.0)
        U = raw[good]
        p_u = p_u[good]
        r = rng.uniform(0.0, 0.999 * delta, U.shape[0])
        X = x0.coords + U * (r / p_u)[:, None]
        if b_in_domain:
            X = X + rng.normal(0.0, 3.0, X.shape[0])[:, None] * b_arr
        devs = np.abs(X @ T.coeffs - base)
        max_dev = float(devs.max(initial=0.0))
        witnesses.append(
            WitnessCheck(eps, delta, max_dev, int(U.shape[0]), max_dev < eps)
        )
    return ContinuityReport(tuple(witnesses))
