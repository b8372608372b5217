"""Boundedness of functional families and b-weak* convergence of sequences.

A family collects bounded b-linear functionals over one space and one
anchor.  Pointwise boundedness asks for a constant per probe; uniform
boundedness asks for one constant in the functional norm, and at finite
scale the two are linked by the ordering ``uniform_bound >= pointwise
ratio`` everywhere.  Sequences are finite windows; their weak* behaviour
is judged by tail stabilization, with the two-condition criterion (norm
window bounded, Cauchy on a total set) evaluated independently of the
direct coefficient-limit construction so the two routes can be compared.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, UnboundedFunctionalError
from .functionals import BLinearFunctional, evaluate, functional_norm, is_bounded
from .spaces import DEPENDENCE_RTOL, GramSpace, Vector

__all__ = [
    "FunctionalFamily",
    "TotalSet",
    "pointwise_bound",
    "uniform_bound",
    "weakstar_limit",
    "weakstar_criterion",
]

_GROWTH_FACTOR = 10.0
_GROWTH_TAIL_RISE = 0.05


def _check_members(members):
    if not members:
        raise InputError("family needs at least one member")
    first = members[0]
    for T in members[1:]:
        if T.space != first.space:
            raise InputError("family members live in different spaces")
        if not np.array_equal(T.b.coords, first.b.coords):
            raise InputError("family members use different anchors")


@dataclass(frozen=True)
class FunctionalFamily:
    """Non-empty collection of b-linear functionals over one (space, b)."""

    members: tuple
    label: str = ""

    def __post_init__(self):
        members = tuple(self.members)
        object.__setattr__(self, "members", members)
        _check_members(members)

    @property
    def space(self):
        return self.members[0].space

    @property
    def b(self):
        return self.members[0].b

    def __len__(self):
        return len(self.members)

    @classmethod
    def from_coeffs(cls, space, b, coeff_rows, label=""):
        bvec = b if isinstance(b, Vector) else Vector(space, b)
        members = tuple(
            BLinearFunctional(space, bvec, row) for row in np.atleast_2d(coeff_rows)
        )
        return cls(members, label)


@dataclass(frozen=True)
class TotalSet:
    """Probe vectors whose span, together with an anchor, covers the space."""

    vectors: tuple
    space: object = field(default=None)

    def __post_init__(self):
        vectors = tuple(self.vectors)
        if not vectors:
            raise InputError("total set needs at least one vector")
        space = self.space if self.space is not None else vectors[0].space
        for v in vectors:
            if not isinstance(v, Vector):
                raise InputError("total set entries must be Vectors")
            if v.space != space:
                raise InputError("total set vectors live in different spaces")
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "space", space)

    def matrix(self):
        return np.column_stack([v.coords for v in self.vectors])

    def is_total_for(self, b):
        b_arr = b.coords if isinstance(b, Vector) else np.asarray(b, dtype=float)
        aug = np.column_stack([self.matrix(), b_arr])
        sv = np.linalg.svd(aug, compute_uv=False)
        rank = int((sv > DEPENDENCE_RTOL * max(sv[0], np.finfo(float).tiny)).sum())
        return rank == self.space.dim


def _require_bounded(members):
    for k, T in enumerate(members):
        if not is_bounded(T):
            raise UnboundedFunctionalError(f"member {k} is unbounded")


def _member_norms(members):
    """Norms of all members, batched when they share a closed form.

    Full-domain members of a Gram space share one seminorm matrix, so a
    single pseudo-inverse covers the whole family.
    """
    space = members[0].space
    if isinstance(space, GramSpace) and all(T.domain is None for T in members):
        G = space.gram
        b_arr = members[0].b.coords
        Gb = G @ b_arr
        Mq = float(b_arr @ Gb) * G - np.outer(Gb, Gb)
        P = np.linalg.pinv(Mq, rcond=1e-12, hermitian=True)
        C = np.stack([T.coeffs for T in members])
        vals = np.einsum("ij,jk,ik->i", C, P, C)
        return np.sqrt(np.maximum(vals, 0.0))
    return np.array([functional_norm(T) for T in members])


def pointwise_bound(family, probes, zero_tol=1e-10):
    """Smallest K with |T(x,b)| <= K ||x,b|| over all members and probes.

    Probes inside the seminorm kernel contribute nothing (bounded members
    vanish there, which is re-checked rather than assumed).
    """
    _require_bounded(family.members)
    space = family.space
    b_arr = family.b.coords
    best = 0.0
    for x in probes:
        xv = x if isinstance(x, Vector) else Vector(space, x)
        p, scale = space.pair_norm_scale(xv.coords, b_arr)
        vals = np.array([abs(evaluate(T, xv)) for T in family.members])
        if p <= zero_tol * max(scale, np.finfo(float).tiny):
            cmax = max(float(np.linalg.norm(T.coeffs)) for T in family.members)
            if vals.max(initial=0.0) > 1e-9 * max(1.0, cmax * float(np.linalg.norm(xv.coords))):
                raise UnboundedFunctionalError(
                    "member does not vanish on a kernel probe"
                )
            continue
        best = max(best, float(vals.max()) / p)
    return best


def uniform_bound(family):
    """Largest member norm; finite for families of bounded functionals."""
    _require_bounded(family.members)
    return float(_member_norms(family.members).max())


def _tail_slice(m):
    return slice(m - max(1, m // 4), m)


def weakstar_limit(seq, probes=None, tol=1e-3):
    """Coefficient-limit functional of a finite sequence window, if stable.

    The tail (last quarter) must stabilize per coordinate within tol of
    the final coefficient vector; optional probes add the same tail test
    on the evaluated values.  The returned limit is checked to be bounded,
    as the limit of bounded functionals must be.  Returns None when no
    stable limit emerges from the window.
    """
    seq = list(seq)
    _check_members(seq)
    _require_bounded(seq)
    for T in seq:
        if T.domain is not None:
            raise InputError("weak* sequences take full-domain functionals")
    space = seq[0].space
    bvec = seq[0].b
    C = np.stack([T.coeffs for T in seq])
    tail = C[_tail_slice(len(seq))]
    last = C[-1]
    dev = float(np.abs(tail - last).max())
    if dev > tol * max(1.0, float(np.abs(last).max())):
        return None
    if probes is not None:
        for x in probes:
            xv = x if isinstance(x, Vector) else Vector(space, x)
            vals = tail @ xv.coords
            if float(np.abs(vals - vals[-1]).max()) > tol * max(1.0, abs(float(vals[-1]))):
                return None
    limit = BLinearFunctional(space, bvec, last)
    if not is_bounded(limit):
        raise UnboundedFunctionalError("stabilized limit fails the boundedness test")
    return limit.with_cached_norm(functional_norm(limit))


def _norm_window_bounded(norms):
    """Judge a finite norm window as bounded or escaping.

    Escape means the last-quarter peak dwarfs the first-quarter peak, or
    the tail keeps climbing by a visible margin; either pattern marks
    growth that a longer window would not cap.
    """
    m = len(norms)
    q = max(1, m // 4)
    head = float(norms[:q].max())
    tail = norms[_tail_slice(m)]
    tail_max = float(tail.max())
    if head > 0.0 and tail_max >= _GROWTH_FACTOR * head:
        return False
    if len(tail) >= 2:
        nondecreasing = bool(np.all(np.diff(tail) >= -1e-12 * max(1.0, tail_max)))
        base = float(tail[0])
        if nondecreasing and base > 0.0 and (tail_max - base) / base > _GROWTH_TAIL_RISE:
            return False
    return True


def weakstar_criterion(seq, total, tol=1e-3):
    """Two-condition weak* verdict over a finite window.

    Condition (a): the member-norm window stays bounded.  Condition (b):
    the evaluations at every total-set vector are tail-Cauchy.  Verdicts
    are "convergent", "fails_norm_bound", or "fails_cauchy_on_total",
    with (a) reported first when both fail.
    """
    seq = list(seq)
    _check_members(seq)
    _require_bounded(seq)
    space = seq[0].space
    bvec = seq[0].b
    if not isinstance(total, TotalSet):
        total = TotalSet(tuple(total))
    if total.space != space:
        raise InputError("total set lives in a different space")
    if not total.is_total_for(bvec):
        raise InputError("total set does not span the space together with the anchor")

    norms = _member_norms(seq)
    if not _norm_window_bounded(norms):
        return "fails_norm_bound"

    b_arr = bvec.coords
    for w in total.vectors:
        p, scale = space.pair_norm_scale(w.coords, b_arr)
        if p <= DEPENDENCE_RTOL * max(scale, np.finfo(float).tiny):
            continue
        vals = np.array([evaluate(T, w) for T in seq])
        tail = vals[_tail_slice(len(seq))]
        spread = float(tail.max() - tail.min())
        if spread > tol * max(1.0, float(np.abs(tail).max())):
            return "fails_cauchy_on_total"
    return "convergent"
