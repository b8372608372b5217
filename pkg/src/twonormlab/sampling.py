"""Seeded generators for spaces, functionals, and sequence fixtures.

Everything takes an explicit numpy Generator so sweeps are reproducible
from a single seed.  Gram matrices are drawn with eigenvalues in a
moderate band; tolerance contracts elsewhere assume reasonably
conditioned inputs and the generators are where that assumption is kept.
"""

import numpy as np

from .errors import InputError
from .functionals import BLinearFunctional
from .spaces import GramSpace, Subspace, Vector

__all__ = [
    "random_gram_space",
    "random_vector",
    "random_independent_pair",
    "random_subspace",
    "random_bounded_functional",
    "convergent_sequence",
    "oscillating_sequence",
    "blowup_sequence",
]


def random_gram_space(rng, dim, eig_low=0.5, eig_high=3.0):
    """SPD gram space with spectrum in [eig_low, eig_high]."""
    if dim < 2:
        raise InputError("gram spaces need dim >= 2")
    Q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    eigs = rng.uniform(eig_low, eig_high, dim)
    G = (Q * eigs) @ Q.T
    return GramSpace((G + G.T) / 2.0)


def random_vector(rng, space, scale=1.0):
    return Vector(space, scale * rng.standard_normal(space.dim))


def random_independent_pair(rng, space, min_ratio=1e-3):
    """Pair (x, b) kept comfortably far from linear dependence."""
    for _ in range(100):
        x = rng.standard_normal(space.dim)
        b = rng.standard_normal(space.dim)
        sv = np.linalg.svd(np.column_stack([x, b]), compute_uv=False)
        if sv[0] > 0 and sv[1] / sv[0] > min_ratio:
            return Vector(space, x), Vector(space, b)
    raise InputError("failed to draw an independent pair")


def random_subspace(rng, space, nbasis):
    if not 0 <= nbasis <= space.dim:
        raise InputError("subspace dimension out of range")
    if nbasis == 0:
        return Subspace(space, [])
    Q, _ = np.linalg.qr(rng.standard_normal((space.dim, nbasis)))
    return Subspace(space, [Vector(space, Q[:, j]) for j in range(nbasis)])


def random_bounded_functional(rng, space, b=None, domain=None, scale=1.0):
    """Bounded functional: coefficients projected off the seminorm kernel.

    Projection is against the kernel intersected with the domain span, the
    exact set boundedness quantifies over, so the draw is bounded by
    construction even on product spaces with block kernels.
    """
    if b is None:
        b = random_vector(rng, space)
    b_arr = b.coords if isinstance(b, Vector) else np.asarray(b, dtype=float)
    bvec = b if isinstance(b, Vector) else Vector(space, b_arr)
    c = scale * rng.standard_normal(space.dim)
    K = space.kernel_matrix(b_arr)
    if domain is not None and not domain.is_full:
        B = np.asarray(domain.matrix)
        stacked = np.column_stack([B, -K]) if K.shape[1] else B
        if K.shape[1]:
            ns = _nullspace(stacked)
            KW = B @ ns[: B.shape[1]] if ns.shape[1] else np.zeros((space.dim, 0))
        else:
            KW = np.zeros((space.dim, 0))
    else:
        KW = K
    if KW.shape[1]:
        Q, _, _ = np.linalg.svd(KW, full_matrices=False)
        keep = int((np.linalg.svd(KW, compute_uv=False) > 1e-12).sum())
        Q = Q[:, :keep]
        c = c - Q @ (Q.T @ c)
    return BLinearFunctional(space, bvec, c, domain)


def _nullspace(A, rtol=1e-12):
    _, sv, Vt = np.linalg.svd(A, full_matrices=True)
    tol = rtol * (sv[0] if sv.size else 0.0)
    rank = int((sv > tol).sum())
    return Vt[rank:].T


def _seq_members(space, bvec, rows):
    return [BLinearFunctional(space, bvec, row) for row in rows]


def convergent_sequence(rng, space, b, window=1000, decay="harmonic"):
    """Coefficient sequence c_n = c_inf + d/n (or 2^-n), off-kernel limit."""
    T_inf = random_bounded_functional(rng, space, b=b)
    d = random_bounded_functional(rng, space, b=b).coeffs
    n = np.arange(1, window + 1)
    if decay == "harmonic":
        steps = 1.0 / n
    elif decay == "geometric":
        steps = 0.5 ** np.minimum(n, 60)
    else:
        raise InputError(f"unknown decay {decay!r}")
    rows = T_inf.coeffs[None, :] + steps[:, None] * d[None, :]
    return _seq_members(space, T_inf.b, rows)


def oscillating_sequence(rng, space, b, window=1000):
    """Sign-flipping component along a bounded direction; no weak* limit."""
    base = random_bounded_functional(rng, space, b=b)
    d = random_bounded_functional(rng, space, b=b).coeffs
    nd = np.linalg.norm(d)
    if nd < 1e-9:
        d = base.coeffs.copy()
        nd = np.linalg.norm(d)
    d = d / max(nd, 1e-12)
    signs = np.where(np.arange(window) % 2 == 0, 1.0, -1.0)
    amp = max(1.0, float(np.linalg.norm(base.coeffs)))
    rows = base.coeffs[None, :] + amp * signs[:, None] * d[None, :]
    return _seq_members(space, base.b, rows)


def blowup_sequence(rng, space, b, window=1000, power=1.0):
    """Norms grow like n**power; fails the bounded-norm condition."""
    d = random_bounded_functional(rng, space, b=b)
    dc = d.coeffs
    if np.linalg.norm(dc) < 1e-9:
        dc = np.ones(space.dim)
        K = space.kernel_matrix(d.b.coords)
        Q, _, _ = np.linalg.svd(K, full_matrices=False)
        dc = dc - Q @ (Q.T @ dc)
    n = np.arange(1, window + 1, dtype=float)
    rows = (n**power)[:, None] * dc[None, :]
    return _seq_members(space, d.b, rows)
