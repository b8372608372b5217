"""Product spaces and componentwise Cauchy analysis.

The summed pair norm makes product convergence exactly componentwise:
probing a product pair against ``(z, 0)`` isolates the left component and
``(0, t)`` the right one, so the default standard basis probes split
cleanly into the two factors.
"""

import numpy as np

from .errors import InputError
from .spaces import ProductSpace, Vector, is_cauchy, standard_basis

__all__ = ["product", "split_vector", "split_cauchy"]


def product(left, right):
    """Product of two 2-normed spaces with concatenated coordinates."""
    return ProductSpace(left, right)


def split_vector(x):
    """Component vectors of a product-space vector."""
    if not isinstance(x, Vector) or not isinstance(x.space, ProductSpace):
        raise InputError("split_vector expects a vector of a product space")
    xl, xr = x.space.split(x.coords)
    return Vector(x.space.left, xl), Vector(x.space.right, xr)


def split_cauchy(seq, probes=None, tol=1e-6, tail=None):
    """Per-component Cauchy verdicts of a product-space sequence.

    Probes are split by their nonzero parts: a probe supported on the left
    factor only constrains the left component sequence, and symmetrically
    for the right.  Returns ``(left_is_cauchy, right_is_cauchy)``.
    """
    seq = list(seq)
    if not seq:
        raise InputError("sequence must be non-empty")
    space = seq[0].space
    if not isinstance(space, ProductSpace):
        raise InputError("split_cauchy expects vectors of a product space")
    for s in seq:
        if s.space != space:
            raise InputError("sequence vectors belong to different spaces")
    if probes is None:
        probes = standard_basis(space)
    left_probes = []
    right_probes = []
    for p in probes:
        pl, pr = space.split(np.asarray(p.coords if isinstance(p, Vector) else p, dtype=float))
        if np.any(pl != 0.0):
            left_probes.append(Vector(space.left, pl))
        if np.any(pr != 0.0):
            right_probes.append(Vector(space.right, pr))
    if not left_probes or not right_probes:
        raise InputError("probes must cover both factors of the product")
    left_seq = []
    right_seq = []
    for s in seq:
        sl, sr = space.split(s.coords)
        left_seq.append(Vector(space.left, sl))
        right_seq.append(Vector(space.right, sr))
    return (
        is_cauchy(left_seq, left_probes, tol=tol, tail=tail),
        is_cauchy(right_seq, right_probes, tol=tol, tail=tail),
    )
