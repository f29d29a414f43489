"""Constructive factorisation of isometries into k-involutions.

The pipeline: write g as at most n+1 reflections, pair consecutive
reflections into two half-turns each, and rewrite half-turns (and a final
leftover reflection when g reverses orientation) as k-involutions using
the sign-vector identities of :func:`odd_split_signs` and
:func:`halfturn_split_signs` expressed in adapted frames.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .bounds import upper_bound_for
from .involutions import (
    InvolutionError,
    KInvolution,
    SignVector,
    classify_involution,
    involution_from_frame,
)
from .minkowski import (
    DEFAULT_TOL,
    Hyperplane,
    Isometry,
    Tolerances,
    as_hpoint,
    basepoint,
    bisector_reflection,
    is_isometry,
    minkowski_inner,
)

__all__ = [
    "FactorizationError",
    "ParityError",
    "UnsupportedK",
    "DimensionTooSmall",
    "IdenticalHyperplanes",
    "FactorizationResult",
    "Check",
    "VerificationReport",
    "odd_split_signs",
    "halfturn_split_signs",
    "reflections_of",
    "cancel_adjacent",
    "orthogonal_hyperplane",
    "reflection_pair_to_halfturns",
    "split_reflection_odd",
    "split_halfturn",
    "factor_into_k_involutions",
    "verify_factorization",
    "compose",
]

_SKIP = 1e-12


class FactorizationError(ValueError):
    pass


class ParityError(FactorizationError):
    """Even-codimension involutions cannot produce an orientation-reversing isometry."""


class UnsupportedK(FactorizationError):
    pass


class DimensionTooSmall(FactorizationError):
    pass


class IdenticalHyperplanes(FactorizationError):
    pass


class DegenerateCommonPerpendicular(FactorizationError):
    pass


# -- sign-vector identities -------------------------------------------------


def odd_split_signs(n: int, k: int) -> list[SignVector]:
    """k elements of D(n, k) whose product is ``[-1, 1, ..., 1]`` (k odd).

    ``C_i`` is -1 on coordinates ``1..k+1`` except ``i+1``.
    """
    if k % 2 == 0 or not 1 <= k <= n - 1:
        raise ValueError(f"need odd k in 1..{n - 1}, got {k}")
    return [SignVector.from_minus(n, (j for j in range(1, k + 2) if j != i + 1)) for i in range(1, k + 1)]


def halfturn_split_signs(n: int, k: int) -> tuple[SignVector, SignVector]:
    """R, S in D(n, k) with ``R * S = [-1, -1, 1, ..., 1]``."""
    if not 1 <= k <= n - 1:
        raise ValueError(f"need k in 1..{n - 1}, got {k}")
    R = SignVector.from_minus(n, range(2, k + 2))
    S = SignVector.from_minus(n, [1, *range(3, k + 2)])
    return R, S


# -- reflections --------------------------------------------------------------


def compose(matrices, N: int) -> np.ndarray:
    return reduce(np.matmul, matrices, np.eye(N))


def _householder_normals(Q: np.ndarray) -> list[np.ndarray]:
    """Unit vectors w_1..w_m with ``Q = H(w_1) ... H(w_m)``, H(w) = I - 2ww^T."""
    A = Q.copy()
    n = A.shape[0]
    normals = []
    for j in range(n):
        v = A[:, j]
        d = v.copy()
        d[j] -= 1.0
        nd = np.linalg.norm(d)
        if nd <= _SKIP:
            continue
        w = d / nd
        A = A - 2.0 * np.outer(w, w @ A)
        normals.append(w)
    return normals


def reflections_of(g: Isometry, basepoint_: np.ndarray | None = None) -> list[Hyperplane]:
    """At most n+1 hyperplanes whose reflections compose (left to right) to g.

    If g moves the basepoint o, the first hyperplane bisects o and g(o);
    the rest factor the point stabiliser part by Householder steps.
    """
    if not isinstance(g, Isometry):
        g = Isometry(g)
    n = g.n
    o = basepoint(n) if basepoint_ is None else as_hpoint(basepoint_)
    M = g.matrix
    out: list[Hyperplane] = []
    go = M @ o
    if np.linalg.norm(go - o) > _SKIP:
        sigma = bisector_reflection(o, go)
        out.append(Hyperplane(_bisector_normal(o, go)))
        M = sigma.matrix @ M
    # conjugate by a reflection T taking o to e_0 so the stabiliser is the O(n) block
    T = _swap_with_origin(o)
    inner = T @ M @ T
    for w in _householder_normals(inner[1:, 1:]):
        out.append(Hyperplane.from_vector(T @ np.concatenate(([0.0], w))))
    return out


def _bisector_normal(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    d = p - q
    return d / np.sqrt(minkowski_inner(d, d))


def _swap_with_origin(o: np.ndarray) -> np.ndarray:
    e0 = basepoint(o.size - 1)
    if np.linalg.norm(o - e0) <= _SKIP:
        return np.eye(o.size)
    return bisector_reflection(o, e0).matrix


def cancel_adjacent(hyperplanes: list[Hyperplane], atol: float = 1e-9) -> list[Hyperplane]:
    """Drop adjacent equal pairs, whose reflections multiply to the identity."""
    stack: list[Hyperplane] = []
    for h in hyperplanes:
        if stack and stack[-1].isclose(h, atol):
            stack.pop()
        else:
            stack.append(h)
    return stack


# -- half-turns ------------------------------------------------------------


def orthogonal_hyperplane(u: Hyperplane, v: Hyperplane) -> Hyperplane:
    """A hyperplane perpendicular to both u and v.

    Solves ``<w,u> = <w,v> = 0`` and returns the most spacelike unit
    solution (top eigenvector of the form restricted to the solution space).
    """
    n = u.n
    if v.n != n:
        raise ValueError(f"dimension mismatch: {n} vs {v.n}")
    if n < 3:
        raise DimensionTooSmall("a common perpendicular hyperplane needs n >= 3")
    if u.isclose(v, 1e-9):
        raise IdenticalHyperplanes("hyperplanes coincide")
    A = np.array([u.normal, v.normal])
    A[:, 0] = -A[:, 0]
    _, s, Vh = np.linalg.svd(A)
    if s[1] <= 1e-12 * s[0]:
        raise IdenticalHyperplanes("normals are parallel")
    N = Vh[2:].T
    G = N[1:].T @ N[1:] - np.outer(N[0], N[0])
    evals, evecs = np.linalg.eigh(G)
    if evals[-1] <= 0:
        raise DegenerateCommonPerpendicular("no spacelike common perpendicular")
    w = N @ evecs[:, -1] / np.sqrt(evals[-1])
    return Hyperplane(w)


def reflection_pair_to_halfturns(a: Hyperplane, b: Hyperplane, tol: Tolerances = DEFAULT_TOL):
    """Half-turns h, k' with ``h k' = sigma_a sigma_b``."""
    c = orthogonal_hyperplane(a, b)
    h = involution_from_frame([a.normal, c.normal], tol)
    k = involution_from_frame([c.normal, b.normal], tol)
    return h, k


# -- k-involutions from reflections and half-turns ----------------------------


def _spacelike_fixed(inv: KInvolution, count: int) -> np.ndarray:
    spacelike = inv.plus_basis[1:]
    if count > len(spacelike):
        raise UnsupportedK(f"need {count} fixed spacelike directions, only {len(spacelike)} exist")
    return spacelike[:count]


def split_reflection_odd(rho: Hyperplane, k: int, tol: Tolerances = DEFAULT_TOL) -> list[KInvolution]:
    """Write the reflection in rho as k k-involutions (k odd)."""
    n = rho.n
    if k % 2 == 0:
        raise ParityError(f"k={k} is even; an odd number of reflections cannot come from it")
    if not 1 <= k <= n - 1:
        raise UnsupportedK(f"k must lie in 1..{n - 1}, got {k}")
    sigma = involution_from_frame([rho.normal], tol)
    if k == 1:
        return [sigma]
    # C_i is -1 on {w, f_1, ..., f_k} minus f_i
    frame = np.vstack([rho.normal, _spacelike_fixed(sigma, k)])
    return [involution_from_frame(np.delete(frame, i, axis=0), tol) for i in range(1, k + 1)]


def split_halfturn(h: KInvolution, k_target: int, tol: Tolerances = DEFAULT_TOL) -> tuple[KInvolution, KInvolution]:
    """Write a half-turn as R S with R, S both k_target-involutions."""
    if h.k != 2:
        raise ValueError(f"expected a half-turn, got codimension {h.k}")
    n = h.n
    if not 1 <= k_target <= n - 1:
        raise UnsupportedK(f"k must lie in 1..{n - 1}, got {k_target}")
    e1, e2 = h.minus_basis
    fixed = _spacelike_fixed(h, k_target - 1)
    R = involution_from_frame(np.vstack([e2, *fixed]) if len(fixed) else [e2], tol)
    S = involution_from_frame(np.vstack([e1, *fixed]) if len(fixed) else [e1], tol)
    return R, S


# -- full pipeline --------------------------------------------------------------


@dataclass
class FactorizationResult:
    factors: list[KInvolution]
    target: Isometry
    residual: float
    k: int
    bound: int
    declared_length: int | None = None

    @property
    def length(self) -> int:
        return len(self.factors)

    def product(self) -> np.ndarray:
        return compose([f.matrix for f in self.factors], self.target.n + 1)


def factor_into_k_involutions(g, k: int, tol: Tolerances = DEFAULT_TOL) -> FactorizationResult:
    """Factor g into k-involutions within the constructive length bound.

    Raises ParityError for even k with orientation-reversing g,
    UnsupportedK for k outside 1..n-1.
    """
    if not isinstance(g, Isometry):
        g = Isometry(g, tol)
    n = g.n
    if not 1 <= k <= n - 1:
        raise UnsupportedK(f"k must lie in 1..{n - 1} for n={n}, got {k}")
    orientation = g.orientation
    if k % 2 == 0 and orientation == -1:
        raise ParityError(
            f"k={k} is even but the target reverses orientation; "
            "k is necessarily odd for orientation-reversing isometries"
        )
    bound = upper_bound_for(n, k, orientation)
    N = n + 1

    def finish(factors):
        residual = float(np.linalg.norm(compose([f.matrix for f in factors], N) - g.matrix))
        return FactorizationResult(factors, g, residual, k, bound)

    if np.linalg.norm(g.matrix - np.eye(N)) <= tol.tol_recon:
        return finish([])
    try:
        own = classify_involution(g, tol)
    except InvolutionError:
        own = None
    if own is not None and own.k == k:
        return finish([own])

    planes = cancel_adjacent(reflections_of(g))
    if k == 1:
        return finish([involution_from_frame([p.normal], tol) for p in planes])
    if n < 3:
        raise DimensionTooSmall("pairing reflections into half-turns needs n >= 3")

    factors: list[KInvolution] = []
    npairs = len(planes) // 2
    for i in range(npairs):
        h1, h2 = reflection_pair_to_halfturns(planes[2 * i], planes[2 * i + 1], tol)
        if k == 2:
            factors += [h1, h2]
        else:
            for h in (h1, h2):
                factors += split_halfturn(h, k, tol)
    if len(planes) % 2:
        factors += split_reflection_odd(planes[-1], k, tol)
    return finish(factors)


# -- certification ------------------------------------------------------------


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class VerificationReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, detail: str = ""):
        self.checks.append(Check(name, bool(passed), detail))

    def lines(self) -> list[str]:
        return [f"{'PASS' if c.passed else 'FAIL'} {c.name}{': ' + c.detail if c.detail else ''}" for c in self.checks]


def verify_factorization(r: FactorizationResult, tol: Tolerances = DEFAULT_TOL) -> VerificationReport:
    """Recompute every claim of a factorisation; never raises on bad data."""
    report = VerificationReport()
    target = r.target.matrix
    N = target.shape[0]
    tcheck = is_isometry(target, tol)
    report.add("target.isometry", tcheck.ok, f"residual {tcheck.residual:.3e}")
    for i, f in enumerate(r.factors):
        M = f.matrix
        if M.shape != target.shape:
            report.add(f"factor[{i}].shape", False, f"{M.shape} vs {target.shape}")
            continue
        try:
            got = classify_involution(Isometry(M, tol, check=False), tol)
        except (InvolutionError, ValueError) as exc:
            report.add(f"factor[{i}].involution", False, f"NotInvolution: {exc}")
            continue
        report.add(f"factor[{i}].involution", True)
        report.add(
            f"factor[{i}].codimension",
            got.k == r.k and f.k == r.k,
            f"classified {got.k}, declared {f.k}, expected {r.k}",
        )
    if all(f.matrix.shape == target.shape for f in r.factors):
        residual = float(np.linalg.norm(compose([f.matrix for f in r.factors], N) - target))
        report.add("residual", residual <= tol.tol_recon, f"{residual:.3e} (tol {tol.tol_recon:.1e})")
    n = N - 1
    try:
        bound = upper_bound_for(n, r.k, 1 if np.linalg.det(target) > 0 else -1)
        report.add("bound", r.bound == bound, f"declared {r.bound}, expected {bound}")
    except ValueError as exc:
        report.add("bound", False, str(exc))
    report.add("length", len(r.factors) <= r.bound, f"{len(r.factors)} <= {r.bound}")
    if r.declared_length is not None:
        report.add(
            "declared_length",
            r.declared_length == len(r.factors),
            f"declared {r.declared_length}, found {len(r.factors)}",
        )
    parity_ok = (-1) ** (r.k * len(r.factors)) == (1 if np.linalg.det(target) > 0 else -1)
    report.add("parity", parity_ok)
    return report
