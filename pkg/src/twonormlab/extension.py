"""Constructive norm-preserving extension of bounded b-linear functionals.

One extension step adjoins a direction x0 to the domain W.  Every
admissible value at x0 is controlled by the interval [s, i] with

    s = sup_{x in W} ( T(x,b) - M ||x + x0, b|| )
    i = inf_{x in W} ( T(x,b) + M ||x + x0, b|| )

which is non-empty whenever M is at least the norm of T on W.  Picking
alpha in [s, i] and setting ``T0(x + t x0, b) = T(x, b) - t alpha`` yields
an extension whose norm stays at most M; running steps across a completion
of W (with M frozen at the initial norm) produces a full-space extension
with the norm preserved.

Both objectives are concave (linear minus a convex seminorm composite) and
their suprema are frequently approached only asymptotically, so the solver
is the adaptive-radius engine from :mod:`twonormlab.optimize`, run over a
complement of the seminorm kernel inside W where the objective is neither
flat nor redundant.
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateAnchorError,
    InfeasibleExtensionError,
    InputError,
    UnboundedFunctionalError,
    UnboundedObjectiveError,
)
from .functionals import (
    BLinearFunctional,
    _domain_quotient,
    evaluate,
    functional_norm,
    is_bounded,
)
from .optimize import maximize_concave
from .spaces import DEPENDENCE_RTOL, Subspace, Vector, linearly_dependent, two_norm

__all__ = [
    "ExtensionStep",
    "ExtensionTrace",
    "interval",
    "extend_one_step",
    "extend_full",
    "norming_functional",
    "recover_two_norm",
    "duality_ratios",
    "default_completion",
]

ALPHA_RULES = ("midpoint", "lower", "upper")


@dataclass(frozen=True)
class ExtensionStep:
    adjoined: tuple
    s: float
    i: float
    alpha: float
    norm_after: float

    def to_dict(self):
        return {
            "adjoined": list(self.adjoined),
            "s": self.s,
            "i": self.i,
            "alpha": self.alpha,
            "norm_after": self.norm_after,
        }


@dataclass(frozen=True)
class ExtensionTrace:
    initial_norm: float
    alpha_rule: str
    steps: tuple
    final_coeffs: tuple

    def to_dict(self):
        return {
            "initial_norm": self.initial_norm,
            "alpha_rule": self.alpha_rule,
            "steps": [s.to_dict() for s in self.steps],
            "final_coeffs": list(self.final_coeffs),
        }


def _resolved_norm(T):
    return T.cached_norm if T.cached_norm is not None else functional_norm(T)


def _alpha_from(s, i, rule):
    if rule == "midpoint":
        return 0.5 * (s + i)
    if rule == "lower":
        return s
    if rule == "upper":
        return i
    raise InputError(f"unknown alpha rule {rule!r}; expected one of {ALPHA_RULES}")


def interval(T_W, x0, M, improve_tol=1e-9, radius_cap=1e8, slope_tol=1e-9):
    """Admissible extension values [s, i] for adjoining x0 at constant M.

    Requires a bounded T_W on a proper domain, x0 outside that domain, and
    M at least the norm of T_W (up to a 1e-9 grace).  When x0 lies in the
    seminorm kernel the objective is exactly 1-homogeneous with its optimum
    at the origin, so the endpoints are written down directly instead of
    letting the ladder ride a float-flat ray to the cap.
    """
    if not is_bounded(T_W):
        raise UnboundedFunctionalError("cannot extend an unbounded functional")
    if T_W.domain is None or T_W.domain.is_full:
        raise InputError("domain is already the whole space; nothing to adjoin")
    space = T_W.space
    if not isinstance(x0, Vector):
        x0 = Vector(space, x0)
    if x0.space != space:
        raise InputError("x0 belongs to a different space")
    W = T_W.domain
    if W.contains(x0, rtol=1e-8):
        raise InputError("x0 already lies in the domain (within tolerance)")
    M = float(M)
    norm_w = _resolved_norm(T_W)
    if M < norm_w - 1e-9:
        raise InfeasibleExtensionError(
            f"extension constant {M:.12g} is below the functional norm {norm_w:.12g}"
        )
    b_arr = T_W.b.coords
    x0c = x0.coords
    p_x0, scale_x0 = space.pair_norm_scale(x0c, b_arr)
    if p_x0 <= DEPENDENCE_RTOL * max(scale_x0, np.finfo(float).tiny):
        return -M * p_x0, M * p_x0
    # every admissible value lies within M * ||x0, b|| of zero, so when
    # that bound is below resolution the outer interval is returned as is
    # rather than running a solve whose answer could not matter
    if M * p_x0 < 1e-9:
        return -M * p_x0, M * p_x0

    # solve in normalized coordinates: substituting x -> p(x0) * x and
    # dividing the objective by M puts the anchor at unit seminorm and the
    # seminorm weight at one, so the solver's cap undershoot and the
    # cancellation noise in the objective stay near 1e-8 in units of the
    # problem's own scale instead of growing with M * ||x0, b||
    x0n = x0c / p_x0
    A, _ = _domain_quotient(space, b_arr, np.asarray(W.matrix))
    # rescale each direction to unit seminorm as well: otherwise a
    # direction carrying seminorm kappa per unit coordinate grows both
    # objective terms like kappa * radius, and at the radius cap their
    # difference drowns in kappa-times-larger cancellation noise
    col_p = np.array([space.pair_norm(A[:, j], b_arr) for j in range(A.shape[1])])
    A = A / np.where(col_p > 0.0, col_p, 1.0)
    q = A.shape[1]
    ch = T_W.coeffs / M
    cAh = A.T @ ch

    def f_sup(u):
        x = A @ u
        return float(ch @ x) - space.pair_norm(x + x0n, b_arr)

    def fg_sup(u):
        x = A @ u
        p, g = space.pair_norm_grad(x + x0n, b_arr)
        return float(ch @ x) - p, cAh - A.T @ g

    def f_inf(u):
        x = A @ u
        return -float(ch @ x) - space.pair_norm(x + x0n, b_arr)

    def fg_inf(u):
        x = A @ u
        p, g = space.pair_norm_grad(x + x0n, b_arr)
        return -float(ch @ x) - p, -cAh - A.T @ g

    try:
        s_hat = maximize_concave(
            f_sup,
            q,
            improve_tol=improve_tol,
            radius_cap=radius_cap,
            slope_tol=slope_tol,
            fg=fg_sup,
        ).value
        i_hat = -maximize_concave(
            f_inf,
            q,
            improve_tol=improve_tol,
            radius_cap=radius_cap,
            slope_tol=slope_tol,
            fg=fg_inf,
        ).value
    except UnboundedObjectiveError as exc:
        raise InfeasibleExtensionError(
            f"no admissible extension value: {exc}"
        ) from exc
    s = M * p_x0 * s_hat
    i = M * p_x0 * i_hat
    if s > i + 1e-6 * max(1.0, abs(s), abs(i), M * p_x0):
        raise InfeasibleExtensionError(
            f"extension interval is empty: s = {s:.12g} exceeds i = {i:.12g}"
        )
    return s, i


def _adjoin(T, x0, value_at_x0):
    space = T.space
    B = np.asarray(T.domain.matrix)
    Bn = np.column_stack([B, x0.coords])
    vals = np.append(T.coeffs @ B, value_at_x0)
    coeffs, *_ = np.linalg.lstsq(Bn.T, vals, rcond=None)
    dom = Subspace(space, list(T.domain.basis) + [x0])
    out = BLinearFunctional(space, T.b, coeffs, dom)
    return out.with_cached_norm(functional_norm(out))


def extend_one_step(T_W, x0, M, alpha_rule="midpoint", **solver_kw):
    """Extend to the span of the domain and x0, value at x0 set by alpha.

    The extension satisfies ``T0(x + t x0, b) = T_W(x, b) - t alpha`` with
    alpha chosen from the interval by ``alpha_rule``; its norm is at most M
    and equals the norm of T_W when M equals it.
    """
    s, i = interval(T_W, x0, M, **solver_kw)
    alpha = _alpha_from(s, i, alpha_rule)
    if not isinstance(x0, Vector):
        x0 = Vector(T_W.space, x0)
    return _adjoin(T_W, x0, -alpha)


def default_completion(W):
    """Gram-Schmidt completion of the domain basis against the standard basis."""
    space = W.space
    n = space.dim
    if W.nbasis:
        Q, _ = np.linalg.qr(np.asarray(W.matrix))
    else:
        Q = np.zeros((n, 0))
    out = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = 1.0
        r = e - Q @ (Q.T @ e)
        r = r - Q @ (Q.T @ r)
        nr = float(np.linalg.norm(r))
        if nr > 1e-10:
            r /= nr
            out.append(Vector(space, r))
            Q = np.column_stack([Q, r])
    return out


def extend_full(T_W, completion_order=None, alpha_rule="midpoint", **solver_kw):
    """Extend step by step to the whole space with M frozen at the norm.

    A valid completion makes the domain basis, the completion vectors, and
    the anchor jointly span everything; when the completion leaves exactly
    the anchor direction uncovered, one forced final step along b is
    appended (its interval collapses to {0}, as any bounded functional
    vanishes on the anchor).  Returns the full-space functional and the
    step trace.
    """
    if not is_bounded(T_W):
        raise UnboundedFunctionalError("cannot extend an unbounded functional")
    space = T_W.space
    norm0 = _resolved_norm(T_W)
    if T_W.domain is None or T_W.domain.is_full:
        full = BLinearFunctional(space, T_W.b, T_W.coeffs, None, cached_norm=norm0)
        return full, ExtensionTrace(norm0, alpha_rule, (), tuple(T_W.coeffs))
    _alpha_from(0.0, 0.0, alpha_rule)

    if completion_order is None:
        completion = default_completion(T_W.domain)
    else:
        completion = [
            v if isinstance(v, Vector) else Vector(space, v) for v in completion_order
        ]
    try:
        spanned = Subspace(space, list(T_W.domain.basis) + completion)
    except InputError as exc:
        raise InputError(f"completion_order is not independent of the domain: {exc}") from exc
    if not spanned.is_full:
        aug = np.column_stack([spanned.matrix, T_W.b.coords])
        sv = np.linalg.svd(aug, compute_uv=False)
        rank = int((sv > DEPENDENCE_RTOL * sv[0]).sum())
        if rank < space.dim:
            raise InputError(
                "completion_order does not span the space, even together with the anchor"
            )

    T = T_W if T_W.cached_norm is not None else T_W.with_cached_norm(norm0)
    steps = []
    remaining = list(completion)
    while remaining or not T.domain.is_full:
        if remaining:
            x0 = remaining.pop(0)
        else:
            x0 = T_W.b
        # M stays at the initial norm; taking the running norm when float
        # error nudges it a hair above norm0 keeps every step feasible
        # without loosening any tolerance downstream
        M_step = max(norm0, T.cached_norm)
        s, i = interval(T, x0, M_step, **solver_kw)
        alpha = _alpha_from(s, i, alpha_rule)
        T = _adjoin(T, x0, -alpha)
        steps.append(ExtensionStep(tuple(x0.coords), s, i, alpha, T.cached_norm))
    full = BLinearFunctional(space, T_W.b, T.coeffs, None, cached_norm=T.cached_norm)
    return full, ExtensionTrace(norm0, alpha_rule, tuple(steps), tuple(T.coeffs))


def norming_functional(x0, b, alpha_rule="midpoint", **solver_kw):
    """Unit-norm functional attaining ``T(x0, b) = ||x0, b||``.

    Starts from ``T(t x0, b) = t ||x0, b||`` on the line through x0 (norm
    exactly one) and extends to the whole space with the norm preserved.
    Raises :class:`DegenerateAnchorError` when x0 and b are dependent, since
    then every bounded functional vanishes at x0.
    """
    if not isinstance(x0, Vector) or not isinstance(b, Vector):
        raise InputError("norming_functional expects Vectors")
    if x0.space != b.space:
        raise InputError("x0 and b belong to different spaces")
    if linearly_dependent(x0, b):
        raise DegenerateAnchorError("x0 is linearly dependent on the anchor")
    space = x0.space
    val = two_norm(x0, b)
    c0 = x0.coords * (val / float(x0.coords @ x0.coords))
    T_W = BLinearFunctional(space, b, c0, Subspace(space, [x0]))
    T, _ = extend_full(T_W, alpha_rule=alpha_rule, **solver_kw)
    return T


def duality_ratios(x, b, trials=20, seed=42):
    """Norming-functional ratio and random bounded-trial ratios at x.

    Each ratio ``|T(x,b)| / ||T||`` is a lower bound for ``||x, b||``; the
    norming functional attains it.  Trial seeds derive from ``[seed, k]``
    so results are order independent and reproducible.
    """
    if not isinstance(x, Vector) or not isinstance(b, Vector):
        raise InputError("duality_ratios expects Vectors")
    if x.space != b.space:
        raise InputError("x and b belong to different spaces")
    space = x.space
    Tn = norming_functional(x, b)
    nn = functional_norm(Tn)
    norming_ratio = abs(evaluate(Tn, x)) / nn
    K = space.kernel_matrix(b.coords)
    Kq, _, _ = np.linalg.svd(K, full_matrices=False)
    ratios = []
    for k in range(trials):
        rng = np.random.default_rng([seed, k])
        raw = rng.standard_normal(space.dim)
        c = raw - Kq @ (Kq.T @ raw)
        if float(np.linalg.norm(c)) <= 1e-12:
            continue
        Tk = BLinearFunctional(space, b, c)
        nk = functional_norm(Tk)
        if nk <= 0.0:
            continue
        ratios.append(abs(float(c @ x.coords)) / nk)
    return norming_ratio, ratios


def recover_two_norm(x, b, trials=20, seed=42):
    """Reconstruct ``||x, b||`` as the best duality ratio.

    Returns exactly 0 for x dependent on b (every bounded functional
    vanishes there, matching the vanishing norm).
    """
    if linearly_dependent(x, b):
        return 0.0
    norming_ratio, ratios = duality_ratios(x, b, trials=trials, seed=seed)
    return max([norming_ratio] + ratios)
