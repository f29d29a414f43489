"""Rank experiments for the conjugation orbit and the product map.

The product map sends a tuple of involutions to their product. Its
differential at a tuple is assembled in closed form from commutators with
a basis of so(n,1); the rank of that matrix is compared against the
dimension count.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from . import kernels
from .bounds import dim_mob, dim_Sk, lower_bound
from .involutions import random_k_involution
from .minkowski import DEFAULT_TOL, lie_algebra_basis, numerical_rank

__all__ = [
    "RankReport",
    "slot_seed",
    "sample_tuple",
    "differential_matrix",
    "orbit_tangent_rank",
    "product_map_rank",
    "product_map_rank_at",
    "rank_cap",
    "rank_experiment",
    "measure_zero_consistency",
]

FD_STEP = 1e-6


@dataclass
class RankReport:
    n: int
    k_list: list[int]
    trials: int
    ranks: list[int]
    cap: int
    tol_rank: float
    seeds: list[int] = field(default_factory=list)
    violations: list[int] = field(default_factory=list)
    vacuous: bool = False

    @property
    def m(self) -> int:
        return len(self.k_list)

    @property
    def domain_dim(self) -> int:
        return sum(dim_Sk(self.n, k) for k in self.k_list)

    @property
    def target_dim(self) -> int:
        return dim_mob(self.n)

    @property
    def deficient(self) -> bool:
        """True when the domain is smaller than Mob(n), forcing rank deficiency."""
        return self.domain_dim < self.target_dim

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k_list": list(self.k_list),
            "trials": self.trials,
            "ranks": list(self.ranks),
            "cap": self.cap,
            "violations": list(self.violations),
            "tol_rank": self.tol_rank,
            "seeds": list(self.seeds),
            "domain_dim": self.domain_dim,
            "target_dim": self.target_dim,
            "vacuous": self.vacuous,
        }


def slot_seed(seed: int, slot: int) -> int:
    return int(np.random.SeedSequence([seed, slot]).generate_state(1)[0])


def sample_tuple(n: int, k_list: Sequence[int], seed: int) -> list[np.ndarray]:
    return [random_k_involution(n, k, slot_seed(seed, i)).matrix for i, k in enumerate(k_list)]


def _prefix_suffix(alphas):
    N = alphas[0].shape[0]
    I = np.eye(N)
    prefix = [I]
    for a in alphas[:-1]:
        prefix.append(prefix[-1] @ a)
    suffix = [I]
    for a in reversed(alphas[1:]):
        suffix.append(a @ suffix[-1])
    return prefix, suffix[::-1]


def differential_matrix(alphas: Sequence[np.ndarray], method: str = "closed") -> np.ndarray:
    """Stacked images of the product map's differential, one row per direction.

    ``method="closed"`` uses commutators; ``method="fd"`` uses central
    finite differences of the conjugation curves with step 1e-6.
    """
    alphas = [np.asarray(a, dtype=float) for a in alphas]
    prefix, suffix = _prefix_suffix(alphas)
    if method == "closed":
        return np.vstack([kernels.commutator_images(prefix[i], a, suffix[i]) for i, a in enumerate(alphas)])
    if method != "fd":
        raise ValueError(f"unknown method {method!r}")
    N = alphas[0].shape[0]
    rows = []
    for i, a in enumerate(alphas):
        for X in lie_algebra_basis(N - 1):
            gp, gm = expm(FD_STEP * X), expm(-FD_STEP * X)
            plus = prefix[i] @ gp @ a @ gm @ suffix[i]
            minus = prefix[i] @ gm @ a @ gp @ suffix[i]
            rows.append(((plus - minus) / (2 * FD_STEP)).ravel())
    return np.array(rows)


def orbit_tangent_rank(n: int, k: int, seed: int = 0, tol_rank: float = DEFAULT_TOL.tol_rank) -> int:
    """Rank of ``X -> X alpha - alpha X`` at a random k-involution alpha."""
    alpha = random_k_involution(n, k, seed).matrix
    I = np.eye(n + 1)
    return numerical_rank(kernels.commutator_images(I, alpha, I), tol_rank)


def rank_cap(n: int, k_list: Sequence[int]) -> int:
    return min(sum(dim_Sk(n, k) for k in k_list), dim_mob(n))


def product_map_rank_at(alphas: Sequence[np.ndarray], tol_rank: float = DEFAULT_TOL.tol_rank, method: str = "closed") -> int:
    return numerical_rank(differential_matrix(alphas, method), tol_rank)


def product_map_rank(n: int, k_list: Sequence[int], seed: int = 0, tol_rank: float = DEFAULT_TOL.tol_rank) -> int:
    """Rank of the product map's differential at a random tuple."""
    for k in k_list:
        if not 1 <= k <= n - 1:
            raise ValueError(f"each k must lie in 1..{n - 1}, got {k}")
    if not k_list:
        raise ValueError("k_list must be nonempty")
    return product_map_rank_at(sample_tuple(n, k_list, seed), tol_rank)


def rank_experiment(
    n: int,
    k_list: Sequence[int],
    trials: int = 20,
    seed: int = 0,
    tol_rank: float = DEFAULT_TOL.tol_rank,
    jobs: int = 1,
) -> RankReport:
    """Run independent trials (seeds seed, seed+1, ...) and merge in trial order."""
    k_list = list(k_list)
    seeds = [seed + t for t in range(trials)]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            ranks = list(pool.map(lambda s: product_map_rank(n, k_list, s, tol_rank), seeds))
    else:
        ranks = [product_map_rank(n, k_list, s, tol_rank) for s in seeds]
    cap = rank_cap(n, k_list)
    violations = [t for t, r in enumerate(ranks) if r > cap]
    return RankReport(n, k_list, trials, ranks, cap, tol_rank, seeds, violations)


def measure_zero_consistency(
    n: int,
    k: int,
    seed_count: int = 20,
    seed: int = 0,
    tol_rank: float = DEFAULT_TOL.tol_rank,
    jobs: int = 1,
) -> RankReport:
    """Products of ``m = lower_bound(n, k) - 1`` k-involutions never fill Mob(n).

    Every sampled rank must be at most ``m k (n-k+1) < n(n+1)/2``. When
    m < 1 nothing is sampled and the report is marked vacuous.
    """
    m = lower_bound(n, k) - 1
    if m < 1:
        return RankReport(n, [], 0, [], 0, tol_rank, vacuous=True)
    report = rank_experiment(n, [k] * m, seed_count, seed, tol_rank, jobs)
    limit = m * dim_Sk(n, k)
    assert limit < dim_mob(n)
    report.violations = [t for t, r in enumerate(report.ranks) if r > limit or r >= dim_mob(n)]
    return report
