"""Linear algebra of Minkowski space R^{n,1} and the hyperboloid model.

Coordinate 0 is timelike and the form is ``J = diag(-1, 1, ..., 1)``.
Vectors and matrices are plain numpy arrays; :class:`Isometry` and
:class:`Hyperplane` wrap them with validation and a canonical form.
"""

from __future__ import annotations

import dataclasses
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm

__all__ = [
    "Tolerances",
    "DEFAULT_TOL",
    "IsometryError",
    "DegenerateSubspace",
    "Isometry",
    "Hyperplane",
    "IsometryCheck",
    "minkowski_form",
    "minkowski_inner",
    "vector_kind",
    "basepoint",
    "as_hpoint",
    "is_isometry",
    "reflect_in_hyperplane",
    "bisector_reflection",
    "lie_algebra_basis",
    "random_isometry",
    "numerical_rank",
    "column_space",
    "j_orthonormalize",
    "j_complement",
]


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every module.

    tol_form bounds ``||M^T J M - J||_F``, tol_rank is the relative
    singular-value cutoff and tol_recon bounds reconstruction errors.
    """

    tol_form: float = 1e-9
    tol_rank: float = 1e-8
    tol_recon: float = 1e-8

    def __post_init__(self):
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            if not (value > 0 and np.isfinite(value)):
                raise ValueError(f"{field.name} must be strictly positive, got {value!r}")

    def replace(self, **changes) -> "Tolerances":
        return dataclasses.replace(self, **changes)

    @classmethod
    def from_env(cls, var: str = "KINVOL_TOL") -> "Tolerances":
        """Defaults, with tol_recon overridden by ``$KINVOL_TOL`` when set."""
        raw = os.environ.get(var)
        if not raw:
            return cls()
        return cls(tol_recon=float(raw))


DEFAULT_TOL = Tolerances()


class IsometryError(ValueError):
    """A matrix does not represent an isometry of hyperbolic space."""


class DegenerateSubspace(ValueError):
    """A span is J-degenerate (or the vectors are dependent)."""


def minkowski_form(n: int) -> np.ndarray:
    if n < 1:
        raise ValueError(f"dimension must be positive, got {n}")
    J = np.eye(n + 1)
    J[0, 0] = -1.0
    return J


def minkowski_inner(x, y) -> float:
    """Return ``-x0*y0 + sum_{i>=1} xi*yi``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    return float(x[1:] @ y[1:] - x[0] * y[0])


def _form_matrix(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    """Gram matrix ``X^T J Y`` for column stacks X, Y."""
    return X[1:].T @ Y[1:] - np.outer(X[0], Y[0])


def vector_kind(x, tol: float = 1e-12) -> str:
    """'timelike', 'spacelike' or 'null' by the sign of <x, x>."""
    x = np.asarray(x, dtype=float)
    q = minkowski_inner(x, x)
    scale = max(float(x @ x), 1.0)
    if abs(q) <= tol * scale:
        return "null"
    return "timelike" if q < 0 else "spacelike"


def basepoint(n: int) -> np.ndarray:
    o = np.zeros(n + 1)
    o[0] = 1.0
    return o


def as_hpoint(x, tol: float = 1e-9) -> np.ndarray:
    """Validate that x lies on the upper sheet of the hyperboloid."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 3:
        raise ValueError(f"expected a point of R^(n,1) with n >= 2, got shape {x.shape}")
    if x[0] <= 0 or abs(minkowski_inner(x, x) + 1.0) > tol * max(1.0, x[0] ** 2):
        raise ValueError("point is not on the upper hyperboloid sheet")
    return x


@dataclass(frozen=True)
class IsometryCheck:
    ok: bool
    residual: float
    upper_sheet: bool

    def __bool__(self):
        return self.ok


def is_isometry(M, tol: Tolerances = DEFAULT_TOL) -> IsometryCheck:
    """Membership test for O+(n,1): form preserved and sheet preserved."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 3:
        return IsometryCheck(False, float("inf"), False)
    if not np.all(np.isfinite(M)):
        return IsometryCheck(False, float("inf"), False)
    J = minkowski_form(M.shape[0] - 1)
    residual = float(np.linalg.norm(M.T @ J @ M - J))
    upper = bool(M[0, 0] > 0)
    return IsometryCheck(residual <= tol.tol_form and upper, residual, upper)


class Isometry:
    """An element of Mob(n) realised as an (n+1)x(n+1) Lorentz matrix.

    The matrix is copied and made read-only. Construction validates
    membership unless ``check=False`` (used when loading files whose
    contents are certified later).
    """

    __slots__ = ("matrix", "residual")

    def __init__(self, matrix, tol: Tolerances = DEFAULT_TOL, check: bool = True):
        M = np.array(matrix, dtype=float)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 3:
            raise IsometryError(f"expected a square matrix of size n+1 >= 3, got {M.shape}")
        result = is_isometry(M, tol)
        if check and not result.ok:
            raise IsometryError(
                f"not an isometry: form residual {result.residual:.3e}, "
                f"upper sheet preserved={result.upper_sheet}"
            )
        M.setflags(write=False)
        self.matrix = M
        self.residual = result.residual

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1

    @property
    def orientation(self) -> int:
        return 1 if np.linalg.det(self.matrix) > 0 else -1

    def inverse(self) -> "Isometry":
        J = minkowski_form(self.n)
        return Isometry(J @ self.matrix.T @ J, check=False)

    def __matmul__(self, other):
        if isinstance(other, Isometry):
            return Isometry(self.matrix @ other.matrix, check=False)
        return self.matrix @ np.asarray(other, dtype=float)

    def __eq__(self, other):
        return isinstance(other, Isometry) and np.array_equal(self.matrix, other.matrix)

    __hash__ = None

    def distance_to(self, other) -> float:
        other = other.matrix if isinstance(other, Isometry) else np.asarray(other)
        return float(np.linalg.norm(self.matrix - other))

    def __repr__(self):
        return f"Isometry(n={self.n}, orientation={self.orientation:+d})"

    @classmethod
    def identity(cls, n: int) -> "Isometry":
        return cls(np.eye(n + 1))


def _canonical_sign(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    scale = np.max(np.abs(v))
    for x in v:
        if abs(x) > tol * scale:
            return v if x > 0 else -v
    return v


class Hyperplane:
    """A hyperplane of H^n given by its spacelike unit normal.

    The normal is determined up to sign; it is stored with its first
    nonzero coordinate positive so that equal hyperplanes compare equal.
    """

    __slots__ = ("normal",)

    def __init__(self, normal, tol: float = 1e-9):
        w = np.array(normal, dtype=float)
        if w.ndim != 1 or w.size < 3:
            raise ValueError(f"normal must be a vector of length n+1 >= 3, got shape {w.shape}")
        q = minkowski_inner(w, w)
        if abs(q - 1.0) > tol:
            raise ValueError(f"normal must satisfy <w,w> = 1, got {q!r}")
        w = _canonical_sign(w)
        w.setflags(write=False)
        self.normal = w

    @classmethod
    def from_vector(cls, v, tol: float = 1e-12) -> "Hyperplane":
        """Normalise an arbitrary spacelike vector."""
        v = np.asarray(v, dtype=float)
        q = minkowski_inner(v, v)
        if q <= tol * max(float(v @ v), 1.0):
            raise ValueError(f"normal is not spacelike: <v,v> = {q!r}")
        return cls(v / np.sqrt(q))

    @property
    def n(self) -> int:
        return self.normal.size - 1

    def isclose(self, other: "Hyperplane", atol: float = 1e-9) -> bool:
        a, b = self.normal, other.normal
        return bool(min(np.linalg.norm(a - b), np.linalg.norm(a + b)) <= atol)

    def __eq__(self, other):
        return isinstance(other, Hyperplane) and np.array_equal(self.normal, other.normal)

    __hash__ = None

    def __repr__(self):
        return f"Hyperplane({np.array2string(self.normal, precision=6)})"


def _reflection_matrix(w: np.ndarray) -> np.ndarray:
    Jw = w.copy()
    Jw[0] = -Jw[0]
    return np.eye(w.size) - 2.0 * np.outer(w, Jw)


def reflect_in_hyperplane(w: Hyperplane) -> Isometry:
    """Reflection ``x -> x - 2<x,w> w`` in the hyperplane with normal w."""
    if not isinstance(w, Hyperplane):
        w = Hyperplane(w)
    return Isometry(_reflection_matrix(w.normal))


def bisector_reflection(p, q, tol: float = 1e-12) -> Isometry:
    """The reflection exchanging two distinct points of H^n."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    d = p - q
    nrm2 = minkowski_inner(d, d)
    if nrm2 <= tol:
        raise ValueError("points coincide; the perpendicular bisector is undefined")
    return reflect_in_hyperplane(Hyperplane(d / np.sqrt(nrm2)))


def lie_algebra_basis(n: int) -> np.ndarray:
    """Basis of so(n,1) as a (n(n+1)/2, n+1, n+1) array.

    Rotations ``E_ij - E_ji`` (1 <= i < j <= n) come first, then boosts
    ``E_0i + E_i0``.
    """
    pairs, signs = lie_basis_indices(n)
    N = n + 1
    basis = np.zeros((len(pairs), N, N))
    for t, ((a, b), s) in enumerate(zip(pairs, signs)):
        basis[t, a, b] = 1.0
        basis[t, b, a] = -s
    return basis


def lie_basis_indices(n: int) -> tuple[list[tuple[int, int]], list[float]]:
    """Index pairs (a, b) and signs s with basis element ``E_ab - s E_ba``."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    signs = [1.0] * len(pairs)
    pairs += [(0, i) for i in range(1, n + 1)]
    signs += [-1.0] * n
    return pairs, signs


def random_isometry(n: int, orientation: int = 1, seed: int = 0, norm_cap: float = 2.0) -> Isometry:
    """Deterministic random element of Mob(n) with the given orientation.

    Samples standard normal coordinates in so(n,1), rescales so that the
    Frobenius norm is at most ``norm_cap`` and exponentiates. Orientation -1
    post-composes with the reflection ``diag(1, -1, 1, ..., 1)``.
    """
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    if orientation not in (1, -1):
        raise ValueError(f"orientation must be +1 or -1, got {orientation!r}")
    rng = np.random.default_rng(seed)
    coeffs = rng.standard_normal(n * (n + 1) // 2)
    X = np.tensordot(coeffs, lie_algebra_basis(n), axes=1)
    norm = np.linalg.norm(X)
    if norm > norm_cap:
        X *= norm_cap / norm
    M = expm(X)
    if orientation == -1:
        M[:, 1] = -M[:, 1]
    return Isometry(M)


def numerical_rank(M, tol_rank: float = DEFAULT_TOL.tol_rank) -> int:
    """Number of singular values above ``tol_rank * sigma_max``."""
    M = np.asarray(M, dtype=float)
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    if s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol_rank * s[0]))


def column_space(M, tol_rank: float = DEFAULT_TOL.tol_rank) -> np.ndarray:
    """Orthonormal (Euclidean) basis of the column space, as columns."""
    U, s, _ = np.linalg.svd(np.asarray(M, dtype=float))
    if s.size == 0 or s[0] == 0.0:
        return U[:, :0]
    r = int(np.count_nonzero(s > tol_rank * s[0]))
    return U[:, :r]


def j_orthonormalize(vectors: Sequence, tol: float = 1e-9) -> list[np.ndarray]:
    """Gram-Schmidt for the Minkowski form, with pivoting.

    At every step the remaining vector with the largest scale-free ratio
    ``|<v,v>| / |v|^2`` is taken next (ties keep input order). When every
    remaining vector is null but two of them pair nondegenerately, their
    sum is used instead. Output vectors are pairwise J-orthogonal with
    self-products +1 or -1.

    Raises DegenerateSubspace if the span is J-degenerate or the vectors
    are linearly dependent.
    """
    rest = [np.array(v, dtype=float) for v in vectors]
    if not rest:
        return []
    scale = max(float(np.linalg.norm(v)) for v in rest)
    if scale == 0.0:
        raise DegenerateSubspace("all input vectors are zero")
    out = []
    while rest:
        norms = np.array([float(np.linalg.norm(v)) for v in rest])
        if norms.min() <= tol * scale:
            raise DegenerateSubspace("input vectors are linearly dependent")
        V = np.column_stack(rest)
        G = _form_matrix(V, V)
        ratio = np.abs(np.diag(G)) / norms**2
        best = float(ratio.max())
        if best <= tol:
            off = np.abs(G) / np.outer(norms, norms)
            np.fill_diagonal(off, 0.0)
            a, b = np.unravel_index(int(np.argmax(off)), off.shape)
            if off[a, b] <= tol:
                raise DegenerateSubspace("span is J-degenerate")
            rest[a] = rest[a] + rest[b]
            continue
        i = int(np.flatnonzero(ratio >= best * (1.0 - 1e-12))[0])
        v = rest.pop(i)
        q = minkowski_inner(v, v)
        eps = 1.0 if q > 0 else -1.0
        u = v / np.sqrt(abs(q))
        out.append(u)
        rest = [x - eps * minkowski_inner(x, u) * u for x in rest]
    return out


def j_complement(vectors: Sequence, n: int | None = None, tol_rank: float = DEFAULT_TOL.tol_rank) -> np.ndarray:
    """Euclidean-orthonormal basis (columns) of the J-orthogonal complement."""
    V = np.atleast_2d(np.asarray(vectors, dtype=float))
    if V.size == 0:
        return np.eye(n + 1)
    JV = V.copy()
    JV[:, 0] = -JV[:, 0]
    _, s, Vh = np.linalg.svd(JV)
    r = int(np.count_nonzero(s > tol_rank * s[0])) if s.size and s[0] > 0 else 0
    return Vh[r:].T
