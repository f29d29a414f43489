"""k-involutions of H^n and the diagonal sign families D(n, k)."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from .minkowski import (
    DEFAULT_TOL,
    DegenerateSubspace,
    Isometry,
    Tolerances,
    column_space,
    is_isometry,
    j_complement,
    j_orthonormalize,
    minkowski_form,
    random_isometry,
)

__all__ = [
    "InvolutionError",
    "NotInvolution",
    "NoFixedPoint",
    "KInvolution",
    "SignVector",
    "canonical_k_involution",
    "classify_involution",
    "involution_from_frame",
    "random_k_involution",
    "signvec_product",
    "embed_signvector",
    "sign_patterns",
]


class InvolutionError(ValueError):
    pass


class NotInvolution(InvolutionError):
    """The isometry is not of order exactly two."""


class NoFixedPoint(InvolutionError):
    """The +1 eigenspace has no timelike vector, so nothing in H^n is fixed."""


@dataclass(frozen=True, eq=False)
class KInvolution:
    """An involution whose fixed set in H^n has codimension k.

    ``minus_basis`` holds k J-orthonormal spacelike rows spanning the -1
    eigenspace; ``plus_basis`` holds n+1-k J-orthonormal rows spanning the
    +1 eigenspace with the timelike vector first. Both are None for
    involutions read from a file and not yet certified.
    """

    iso: Isometry
    k: int
    minus_basis: np.ndarray | None = None
    plus_basis: np.ndarray | None = None

    @property
    def matrix(self) -> np.ndarray:
        return self.iso.matrix

    @property
    def n(self) -> int:
        return self.iso.n

    def __repr__(self):
        return f"KInvolution(n={self.n}, k={self.k})"


def _frame_matrix(minus: np.ndarray, N: int) -> np.ndarray:
    """``I - 2 sum_i f_i (J f_i)^T`` for J-orthonormal spacelike rows f_i."""
    JF = minus.copy()
    JF[:, 0] = -JF[:, 0]
    return np.eye(N) - 2.0 * minus.T @ JF


def _sorted_plus(vectors: list[np.ndarray]) -> np.ndarray:
    timelike = [v for v in vectors if v[1:] @ v[1:] - v[0] ** 2 < 0]
    spacelike = [v for v in vectors if v[1:] @ v[1:] - v[0] ** 2 >= 0]
    if len(timelike) != 1:
        raise NoFixedPoint(
            f"+1 eigenspace has {len(timelike)} timelike directions; expected exactly one"
        )
    if timelike[0][0] < 0:
        timelike[0] = -timelike[0]
    return np.array(timelike + spacelike)


def involution_from_frame(minus_vectors, tol: Tolerances = DEFAULT_TOL) -> KInvolution:
    """The involution acting as -1 on span(minus_vectors) and +1 on its J-complement.

    ``minus_vectors`` must be J-orthonormal and spacelike (rows).
    """
    F = np.atleast_2d(np.asarray(minus_vectors, dtype=float))
    N = F.shape[1]
    k = F.shape[0]
    J = minkowski_form(N - 1)
    gram = F @ J @ F.T
    if np.linalg.norm(gram - np.eye(k)) > 1e3 * tol.tol_form:
        raise DegenerateSubspace("frame is not J-orthonormal and spacelike")
    plus = j_orthonormalize(list(j_complement(F, tol_rank=tol.tol_rank).T), tol=tol.tol_form)
    return KInvolution(Isometry(_frame_matrix(F, N), tol), k, F, _sorted_plus(plus))


def canonical_k_involution(n: int, positions: Iterable[int]) -> KInvolution:
    """Diagonal involution with -1 at the given spatial coordinates (1-based)."""
    pos = sorted(set(int(p) for p in positions))
    if not pos:
        raise ValueError("positions must be nonempty")
    if pos[0] < 1 or pos[-1] > n:
        raise ValueError(f"positions must lie in 1..{n}, got {pos}")
    diag = np.ones(n + 1)
    diag[pos] = -1.0
    eye = np.eye(n + 1)
    plus = [i for i in range(n + 1) if diag[i] > 0]
    return KInvolution(Isometry(np.diag(diag)), len(pos), eye[pos], eye[plus])


def classify_involution(g, tol: Tolerances = DEFAULT_TOL) -> KInvolution:
    """Recognise a k-involution and recover its adapted eigenbases.

    Raises NotInvolution when ``g^2 != I`` or ``g = I`` and NoFixedPoint when
    the +1 eigenspace misses H^n.
    """
    iso = g if isinstance(g, Isometry) else Isometry(g, tol)
    if not is_isometry(iso.matrix, tol):
        raise NotInvolution("input is not an isometry of H^n")
    M = iso.matrix
    I = np.eye(M.shape[0])
    err = np.linalg.norm(M @ M - I)
    if err > tol.tol_recon:
        raise NotInvolution(f"||g^2 - I|| = {err:.3e} exceeds {tol.tol_recon:.1e}")
    if np.linalg.norm(M - I) <= tol.tol_recon:
        raise NotInvolution("the identity is not an involution")
    minus_cols = column_space((I - M) / 2.0, tol.tol_rank)
    plus_cols = column_space((I + M) / 2.0, tol.tol_rank)
    if minus_cols.shape[1] + plus_cols.shape[1] != M.shape[0]:
        raise NotInvolution("eigenspaces of g do not span R^(n,1)")
    try:
        minus = j_orthonormalize(list(minus_cols.T), tol=tol.tol_form)
        plus = j_orthonormalize(list(plus_cols.T), tol=tol.tol_form)
    except DegenerateSubspace as exc:
        raise NotInvolution(f"eigenspace is J-degenerate: {exc}") from exc
    plus_sorted = _sorted_plus(plus)
    if any(v[1:] @ v[1:] - v[0] ** 2 < 0 for v in minus):
        raise NoFixedPoint("-1 eigenspace is not spacelike")
    return KInvolution(iso, len(minus), np.array(minus), plus_sorted)


def random_k_involution(n: int, k: int, seed: int = 0) -> KInvolution:
    """A sample ``U D U^-1`` from the conjugacy class S_k."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"k must lie in 1..{n - 1}, got {k}")
    U = random_isometry(n, 1, seed).matrix
    D = canonical_k_involution(n, range(1, k + 1))
    J = minkowski_form(n)
    alpha = U @ D.matrix @ J @ U.T @ J
    return KInvolution(Isometry(alpha), k, (U @ D.minus_basis.T).T, (U @ D.plus_basis.T).T)


@dataclass(frozen=True)
class SignVector:
    """An element of Z_2^n, written multiplicatively as a tuple of +-1."""

    signs: tuple[int, ...]

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (1, -1) for s in signs):
            raise ValueError(f"entries must be +1 or -1, got {self.signs}")
        object.__setattr__(self, "signs", signs)

    @property
    def weight(self) -> int:
        return sum(1 for s in self.signs if s == -1)

    def __len__(self):
        return len(self.signs)

    def __mul__(self, other: "SignVector") -> "SignVector":
        return signvec_product(self, other)

    @classmethod
    def from_minus(cls, n: int, positions: Iterable[int]) -> "SignVector":
        """Vector with -1 at the given 1-based positions."""
        pos = set(positions)
        return cls(tuple(-1 if j in pos else 1 for j in range(1, n + 1)))

    def minus_positions(self) -> list[int]:
        return [j for j, s in enumerate(self.signs, start=1) if s == -1]


def signvec_product(a: SignVector, b: SignVector) -> SignVector:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return SignVector(tuple(x * y for x, y in zip(a.signs, b.signs)))


def embed_signvector(v: SignVector) -> KInvolution:
    if v.weight == 0:
        raise ValueError("the identity sign vector is not an involution")
    return canonical_k_involution(len(v), v.minus_positions())


def sign_patterns(n: int, k: int) -> list[SignVector]:
    """All of D(n, k): the C(n, k) sign vectors of weight k."""
    return [SignVector.from_minus(n, c) for c in combinations(range(1, n + 1), k)]


def product(vectors: Sequence[SignVector]) -> SignVector:
    it = iter(vectors)
    acc = next(it)
    for v in it:
        acc = acc * v
    return acc
