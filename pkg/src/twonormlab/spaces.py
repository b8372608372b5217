"""Finite-dimensional linear 2-normed spaces.

A 2-norm assigns to each pair of vectors an area-like quantity ``||x, y||``
satisfying four axioms: it vanishes exactly when the pair is linearly
dependent, it is symmetric, absolutely homogeneous in each slot, and obeys
the triangle inequality in the second slot.  The concrete realization here
is the Gram-determinant form

    ||x, y||^2 = <x,x> <y,y> - <x,y>^2

for a symmetric positive-definite inner-product matrix, together with the
sum construction on products of two such spaces.

All value classes are immutable in use: coordinate arrays are stored with
the writeable flag cleared, and every operation returns new objects, so
instances can be shared freely across threads.
"""

import math

import numpy as np

from .errors import InputError

__all__ = [
    "DEPENDENCE_RTOL",
    "TwoNormSpace",
    "GramSpace",
    "ProductSpace",
    "Vector",
    "Subspace",
    "Ball",
    "two_norm",
    "in_ball",
    "linearly_dependent",
    "reverse_triangle_residual",
    "converges_to",
    "is_cauchy",
    "standard_basis",
]

# Relative threshold below which the second singular value of [x y] counts
# as zero, i.e. the pair counts as linearly dependent.  The zero test for
# the 2-norm value uses the same relative scale.
DEPENDENCE_RTOL = 1e-10


def _readonly(a):
    out = np.array(a, dtype=float, copy=True)
    out.flags.writeable = False
    return out


def _area_from_factors(u, v):
    """Parallelogram area of two vectors given in orthonormal coordinates.

    Evaluated as base times height: the smaller vector is projected off the
    larger one first.  Unlike the raw Gram-determinant difference this keeps
    the error at machine precision relative to |u||v| even for nearly
    dependent pairs.
    """
    uu = float(u @ u)
    vv = float(v @ v)
    if uu == 0.0 or vv == 0.0:
        return 0.0
    if uu >= vv:
        base, other, bb = u, v, uu
    else:
        base, other, bb = v, u, vv
    w = other - ((base @ other) / bb) * base
    return math.sqrt(bb) * math.sqrt(float(w @ w))


class TwoNormSpace:
    """Common interface of the two space kinds (``gram`` and ``product``)."""

    dim = 0
    kind = ""

    # raw-coordinate engine ------------------------------------------------

    def pair_norm(self, x, y):
        """2-norm of a coordinate pair, as plain float arrays."""
        raise NotImplementedError

    def pair_norm_scale(self, x, y):
        """Pair norm together with its natural magnitude scale.

        The scale is the product of the two intrinsic vector lengths (summed
        over components for product spaces); residual and zero tests divide
        by it so tolerances stay relative.
        """
        raise NotImplementedError

    def pair_norm_many(self, X, y, with_scale=False):
        """Vectorized ``pair_norm`` of each row of ``X`` against a fixed ``y``."""
        raise NotImplementedError

    def pair_norm_rows(self, X, Y, with_scale=False):
        """Vectorized ``pair_norm`` of matching rows of ``X`` and ``Y``."""
        raise NotImplementedError

    def kernel_matrix(self, b):
        """Basis (as columns) of the kernel of ``x -> ||x, b||``.

        For a gram space with nonzero ``b`` this is the line through ``b``;
        for products it is the direct sum of the component kernels, which is
        strictly larger than the line through ``b``.
        """
        raise NotImplementedError

    def to_spec(self):
        """JSON-serializable description, round-trippable by the file loader."""
        raise NotImplementedError

    # conveniences ---------------------------------------------------------

    def vector(self, coords):
        return Vector(self, coords)

    def zero(self):
        return Vector(self, np.zeros(self.dim))

    def basis_vector(self, i):
        e = np.zeros(self.dim)
        e[i] = 1.0
        return Vector(self, e)

    def __ne__(self, other):
        return not self.__eq__(other)


class GramSpace(TwoNormSpace):
    """2-normed space induced by an SPD inner product on R^dim.

    With ``<x,y> = x^T G y`` the pair norm is the area of the parallelogram
    spanned by the images of x and y under any factor of G.  The constructor
    factors G by Cholesky once; evaluation then runs through the factor,
    which is what keeps constructed dependent pairs at ~1e-15 relative
    instead of the ~1e-8 the raw determinant difference produces.

    ``validate=False`` skips the symmetry and definiteness checks so that a
    deliberately broken matrix can still be loaded and fed to the axiom
    checker; evaluation then falls back to the clamped raw formula.
    """

    kind = "gram"

    def __init__(self, gram, validate=True):
        g = np.array(gram, dtype=float, copy=True)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise InputError(f"gram matrix must be square, got shape {g.shape}")
        if g.shape[0] < 2:
            raise InputError("a 2-normed space needs dimension >= 2")
        if not np.all(np.isfinite(g)):
            raise InputError("gram matrix contains non-finite entries")
        if validate:
            if not np.allclose(g, g.T, rtol=1e-12, atol=1e-12 * max(1.0, float(np.abs(g).max()))):
                raise InputError("gram matrix is not symmetric")
            eigs = np.linalg.eigvalsh(0.5 * (g + g.T))
            if eigs[0] <= 1e-12 * max(1.0, float(eigs[-1])):
                raise InputError(
                    f"gram matrix is not positive definite (smallest eigenvalue {eigs[0]:.3e})"
                )
        self.dim = g.shape[0]
        self.gram = _readonly(g)
        try:
            # lower-triangular L with G = L L^T; factor coordinates are L^T x
            self._lt = np.linalg.cholesky(0.5 * (g + g.T)).T
        except np.linalg.LinAlgError:
            self._lt = None

    def pair_norm(self, x, y):
        if self._lt is not None:
            return _area_from_factors(self._lt @ x, self._lt @ y)
        return self._raw_pair_norm(x, y)[0]

    def pair_norm_scale(self, x, y):
        if self._lt is not None:
            u = self._lt @ x
            v = self._lt @ y
            return _area_from_factors(u, v), math.sqrt(float(u @ u) * float(v @ v))
        return self._raw_pair_norm(x, y)

    def _raw_pair_norm(self, x, y):
        # indefinite fallback: clamp the radicand, so broken matrices yield
        # zero areas on open sets and the axiom checker can see it
        g = self.gram
        xx = float(x @ g @ x)
        yy = float(y @ g @ y)
        xy = float(x @ g @ y)
        rad = xx * yy - xy * xy
        scale = math.sqrt(abs(xx) * abs(yy)) + abs(xy)
        return math.sqrt(rad) if rad > 0.0 else 0.0, scale

    def pair_norm_grad(self, x, y):
        """Pair norm and its gradient in the first argument.

        The gradient is zero at the kernel kink (a valid subgradient for
        the concave composites the optimizer feeds this to).
        """
        if self._lt is None:
            return self._raw_pair_norm(x, y)[0], np.zeros(self.dim)
        u = self._lt @ x
        v = self._lt @ y
        p = _area_from_factors(u, v)
        scale = math.sqrt(float(u @ u) * float(v @ v))
        if p <= 1e-14 * max(scale, np.finfo(float).tiny):
            return p, np.zeros(self.dim)
        g = self._lt.T @ (float(v @ v) * u - float(u @ v) * v) / p
        return p, g

    def pair_norm_many(self, X, y, with_scale=False):
        X = np.asarray(X, dtype=float)
        if self._lt is None:
            vals = np.empty(X.shape[0])
            scales = np.empty(X.shape[0])
            for i, row in enumerate(X):
                vals[i], scales[i] = self._raw_pair_norm(row, y)
            return (vals, scales) if with_scale else vals
        U = X @ self._lt.T
        v = self._lt @ y
        vv = float(v @ v)
        uu = np.einsum("ij,ij->i", U, U)
        if vv == 0.0:
            vals = np.zeros(X.shape[0])
            scales = np.zeros(X.shape[0])
        else:
            W = U - np.outer((U @ v) / vv, v)
            vals = math.sqrt(vv) * np.sqrt(np.einsum("ij,ij->i", W, W))
            scales = np.sqrt(uu * vv)
        return (vals, scales) if with_scale else vals

    def pair_norm_rows(self, X, Y, with_scale=False):
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        if self._lt is None:
            vals = np.empty(X.shape[0])
            scales = np.empty(X.shape[0])
            for i in range(X.shape[0]):
                vals[i], scales[i] = self._raw_pair_norm(X[i], Y[i])
            return (vals, scales) if with_scale else vals
        U = X @ self._lt.T
        V = Y @ self._lt.T
        uu = np.einsum("ij,ij->i", U, U)
        vv = np.einsum("ij,ij->i", V, V)
        uv = np.einsum("ij,ij->i", U, V)
        safe_uu = np.where(uu > 0.0, uu, 1.0)
        W = V - (uv / safe_uu)[:, None] * U
        vals = np.sqrt(uu) * np.sqrt(np.einsum("ij,ij->i", W, W))
        vals[uu == 0.0] = 0.0
        vals[vv == 0.0] = 0.0
        if with_scale:
            return vals, np.sqrt(uu * vv)
        return vals

    def kernel_matrix(self, b):
        b = np.asarray(b, dtype=float)
        if float(b @ b) == 0.0:
            return np.eye(self.dim)
        return b.reshape(-1, 1).copy()

    def to_spec(self):
        return {"kind": "gram", "dim": self.dim, "gram": self.gram.tolist()}

    def __eq__(self, other):
        return (
            isinstance(other, GramSpace)
            and self.dim == other.dim
            and np.array_equal(self.gram, other.gram)
        )

    def __hash__(self):
        return hash(("gram", self.dim, self.gram.tobytes()))

    def __repr__(self):
        return f"GramSpace(dim={self.dim})"


class ProductSpace(TwoNormSpace):
    """Product of two 2-normed spaces with the summed pair norm.

    Coordinates are the concatenation of left then right coordinates, and

        ||(x1,y1), (x2,y2)|| = ||x1,x2||_left + ||y1,y2||_right.
    """

    kind = "product"

    def __init__(self, left, right):
        if not isinstance(left, TwoNormSpace) or not isinstance(right, TwoNormSpace):
            raise InputError("product factors must be TwoNormSpace instances")
        self.left = left
        self.right = right
        self.dim = left.dim + right.dim

    def split(self, x):
        return x[: self.left.dim], x[self.left.dim :]

    def pair_norm(self, x, y):
        xl, xr = self.split(x)
        yl, yr = self.split(y)
        return self.left.pair_norm(xl, yl) + self.right.pair_norm(xr, yr)

    def pair_norm_scale(self, x, y):
        xl, xr = self.split(x)
        yl, yr = self.split(y)
        nl, sl = self.left.pair_norm_scale(xl, yl)
        nr, sr = self.right.pair_norm_scale(xr, yr)
        return nl + nr, sl + sr

    def pair_norm_many(self, X, y, with_scale=False):
        X = np.asarray(X, dtype=float)
        k = self.left.dim
        if with_scale:
            vl, sl = self.left.pair_norm_many(X[:, :k], y[:k], with_scale=True)
            vr, sr = self.right.pair_norm_many(X[:, k:], y[k:], with_scale=True)
            return vl + vr, sl + sr
        return self.left.pair_norm_many(X[:, :k], y[:k]) + self.right.pair_norm_many(
            X[:, k:], y[k:]
        )

    def pair_norm_rows(self, X, Y, with_scale=False):
        X = np.asarray(X, dtype=float)
        Y = np.asarray(Y, dtype=float)
        k = self.left.dim
        if with_scale:
            vl, sl = self.left.pair_norm_rows(X[:, :k], Y[:, :k], with_scale=True)
            vr, sr = self.right.pair_norm_rows(X[:, k:], Y[:, k:], with_scale=True)
            return vl + vr, sl + sr
        return self.left.pair_norm_rows(X[:, :k], Y[:, :k]) + self.right.pair_norm_rows(
            X[:, k:], Y[:, k:]
        )

    def pair_norm_grad(self, x, y):
        xl, xr = self.split(x)
        yl, yr = self.split(y)
        pl, gl = self.left.pair_norm_grad(xl, yl)
        pr, gr = self.right.pair_norm_grad(xr, yr)
        return pl + pr, np.concatenate([gl, gr])

    def kernel_matrix(self, b):
        b = np.asarray(b, dtype=float)
        kl = self.left.kernel_matrix(b[: self.left.dim])
        kr = self.right.kernel_matrix(b[self.left.dim :])
        out = np.zeros((self.dim, kl.shape[1] + kr.shape[1]))
        out[: self.left.dim, : kl.shape[1]] = kl
        out[self.left.dim :, kl.shape[1] :] = kr
        return out

    def to_spec(self):
        return {"kind": "product", "left": self.left.to_spec(), "right": self.right.to_spec()}

    def __eq__(self, other):
        return (
            isinstance(other, ProductSpace)
            and self.left == other.left
            and self.right == other.right
        )

    def __hash__(self):
        return hash(("product", hash(self.left), hash(self.right)))

    def __repr__(self):
        return f"ProductSpace({self.left!r}, {self.right!r})"


class Vector:
    """A point of a concrete 2-normed space, with elementwise arithmetic."""

    __slots__ = ("space", "coords")

    def __init__(self, space, coords):
        c = np.asarray(coords, dtype=float)
        if c.shape != (space.dim,):
            raise InputError(f"expected {space.dim} coordinates, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise InputError("vector coordinates must be finite")
        self.space = space
        self.coords = _readonly(c)

    def _check_mate(self, other):
        if not isinstance(other, Vector):
            raise InputError(f"expected a Vector, got {type(other).__name__}")
        if self.space != other.space:
            raise InputError("vectors belong to different spaces")

    def __add__(self, other):
        self._check_mate(other)
        return Vector(self.space, self.coords + other.coords)

    def __sub__(self, other):
        self._check_mate(other)
        return Vector(self.space, self.coords - other.coords)

    def __mul__(self, alpha):
        return Vector(self.space, self.coords * float(alpha))

    __rmul__ = __mul__

    def __neg__(self):
        return Vector(self.space, -self.coords)

    def __repr__(self):
        return f"Vector({np.array2string(self.coords, precision=6)})"


def _as_coords(space, x):
    if isinstance(x, Vector):
        if x.space != space:
            raise InputError("vector belongs to a different space")
        return x.coords
    c = np.asarray(x, dtype=float)
    if c.shape != (space.dim,):
        raise InputError(f"expected {space.dim} coordinates, got shape {c.shape}")
    return c


class Subspace:
    """Linear subspace given by an independent spanning list.

    An empty basis is the zero subspace.  Independence is enforced at
    construction through the smallest-over-largest singular value ratio of
    the basis matrix.
    """

    __slots__ = ("space", "basis", "matrix")

    def __init__(self, space, basis):
        vecs = [v if isinstance(v, Vector) else Vector(space, v) for v in basis]
        for v in vecs:
            if v.space != space:
                raise InputError("basis vector belongs to a different space")
        self.space = space
        self.basis = tuple(vecs)
        if vecs:
            m = np.column_stack([v.coords for v in vecs])
            sv = np.linalg.svd(m, compute_uv=False)
            if sv[0] == 0.0 or sv[-1] <= DEPENDENCE_RTOL * sv[0]:
                raise InputError("subspace basis is not linearly independent")
            self.matrix = _readonly(m)
        else:
            self.matrix = _readonly(np.zeros((space.dim, 0)))

    @property
    def nbasis(self):
        return self.matrix.shape[1]

    @property
    def is_full(self):
        return self.nbasis == self.space.dim

    def coords_of(self, x):
        """Least-squares coefficients of x in this basis, plus the residual."""
        c = _as_coords(self.space, x)
        if self.nbasis == 0:
            return np.zeros(0), float(np.linalg.norm(c))
        u, *_ = np.linalg.lstsq(self.matrix, c, rcond=None)
        res = float(np.linalg.norm(self.matrix @ u - c))
        return u, res

    def contains(self, x, rtol=1e-8):
        c = _as_coords(self.space, x)
        _, res = self.coords_of(c)
        return res <= rtol * max(1.0, float(np.linalg.norm(c)))

    def __repr__(self):
        return f"Subspace(dim={self.nbasis} of {self.space.dim})"


class Ball:
    """Directional ball ``{x : ||x - center, direction|| < radius}``.

    Geometrically a slab: membership never constrains movement along the
    direction vector itself, so the set is unbounded.
    """

    __slots__ = ("center", "direction", "radius", "open")

    def __init__(self, center, direction, radius, open=True):
        if not isinstance(center, Vector) or not isinstance(direction, Vector):
            raise InputError("ball center and direction must be Vectors")
        if center.space != direction.space:
            raise InputError("ball center and direction belong to different spaces")
        if float(np.linalg.norm(direction.coords)) == 0.0:
            raise InputError("ball direction must be nonzero")
        radius = float(radius)
        if not radius > 0.0:
            raise InputError("ball radius must be positive")
        self.center = center
        self.direction = direction
        self.radius = radius
        self.open = bool(open)

    def __repr__(self):
        kind = "open" if self.open else "closed"
        return f"Ball({kind}, radius={self.radius})"


def two_norm(x, y):
    """``||x, y||`` for two vectors of the same space."""
    if not isinstance(x, Vector) or not isinstance(y, Vector):
        raise InputError("two_norm expects Vector arguments")
    if x.space != y.space:
        raise InputError("vectors belong to different spaces")
    return x.space.pair_norm(x.coords, y.coords)


def in_ball(ball, x):
    """Membership test for a directional ball."""
    if not isinstance(ball, Ball):
        raise InputError("in_ball expects a Ball")
    d = two_norm(x - ball.center, ball.direction)
    return d < ball.radius if ball.open else d <= ball.radius


def linearly_dependent(x, y, rtol=DEPENDENCE_RTOL):
    """True when the pair spans at most a line.

    Decided in ambient coordinates: the second singular value of the column
    matrix [x y] must not exceed ``rtol`` times the largest.
    """
    if isinstance(x, Vector) and isinstance(y, Vector):
        if x.space != y.space:
            raise InputError("vectors belong to different spaces")
        xc, yc = x.coords, y.coords
    else:
        xc = np.asarray(x, dtype=float)
        yc = np.asarray(y, dtype=float)
    sv = np.linalg.svd(np.column_stack([xc, yc]), compute_uv=False)
    return sv[0] == 0.0 or sv[1] <= rtol * sv[0]


def reverse_triangle_residual(x, y, z):
    """``||x - y, z|| - | ||x,z|| - ||y,z|| |``; nonnegative up to rounding."""
    return two_norm(x - y, z) - abs(two_norm(x, z) - two_norm(y, z))


def standard_basis(space):
    return [space.basis_vector(i) for i in range(space.dim)]


def _tail_count(n, tail):
    if tail is None:
        tail = max(1, n // 10)
    tail = int(tail)
    if tail < 1 or tail > n:
        raise InputError(f"tail length {tail} invalid for a sequence of {n} terms")
    return tail


def _resolve_probes(space, probes):
    if probes is None:
        probes = standard_basis(space)
    probes = list(probes)
    if not probes:
        raise InputError("probe set must be non-empty")
    return probes


def converges_to(seq, x, probes=None, tol=1e-6, tail=None):
    """Finite-window convergence surrogate for ``x_n -> x``.

    True when, for every probe y, the last ``tail`` values of
    ``||x_n - x, y||`` all lie below ``tol``.  Probes default to the
    standard basis, which in finite dimension decides convergence against
    every vector.
    """
    seq = list(seq)
    if not seq:
        raise InputError("sequence must be non-empty")
    k = _tail_count(len(seq), tail)
    probes = _resolve_probes(x.space, probes)
    diffs = np.stack([(s - x).coords for s in seq[-k:]])
    for p in probes:
        if np.any(x.space.pair_norm_many(diffs, p.coords) >= tol):
            return False
    return True


def is_cauchy(seq, probes=None, tol=1e-6, tail=None):
    """Finite-window Cauchy surrogate: all pairwise tail gaps below ``tol``.

    Checks ``||x_n - x_m, y||`` over every pair from the last ``tail``
    terms, for every probe y.
    """
    seq = list(seq)
    if not seq:
        raise InputError("sequence must be non-empty")
    k = min(_tail_count(len(seq), tail), 40)
    space = seq[0].space
    probes = _resolve_probes(space, probes)
    tail_coords = [s.coords for s in seq[-k:]]
    pairs = [
        tail_coords[i] - tail_coords[j]
        for i in range(k)
        for j in range(i + 1, k)
    ]
    if not pairs:
        return True
    P = np.stack(pairs)
    for p in probes:
        if np.any(space.pair_norm_many(P, p.coords) >= tol):
            return False
    return True
