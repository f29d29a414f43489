"""Closed-form length bounds, manifold dimensions and the Phi(n) proxy.

Everything here is exact integer or rational arithmetic; floats appear
only in the normalised ratio of :func:`phi_asymptotic_check`.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import kernels

__all__ = [
    "BoundsRow",
    "dim_Sk",
    "dim_Gk",
    "dim_mob",
    "lower_bound",
    "upper_bound",
    "upper_bound_for",
    "stabilizer_dim_identity",
    "bounds_row",
    "bounds_table",
    "phi_numerator",
    "phi_proxy",
    "phi_asymptotic_check",
    "bounds_csv",
    "phi_csv",
]


def _check(n: int, k: int):
    if n < 2 or not 1 <= k <= n - 1:
        raise ValueError(f"need n >= 2 and 1 <= k <= n-1, got n={n}, k={k}")


def dim_mob(n: int) -> int:
    return n * (n + 1) // 2


def dim_Sk(n: int, k: int) -> int:
    """Dimension of the conjugacy class of k-involutions."""
    _check(n, k)
    return k * (n - k + 1)


def dim_Gk(n: int, k: int) -> int:
    """Dimension of the space of totally geodesic k-planes."""
    _check(n, k)
    return (n - k) * (k + 1)


def lower_bound(n: int, k: int) -> int:
    """``ceil(n(n+1) / (2k(n-k+1)))``."""
    _check(n, k)
    return -(-(n * (n + 1)) // (2 * k * (n - k + 1)))


def upper_bound(n: int, k: int) -> int:
    _check(n, k)
    return 2 * n + 4 if k % 2 == 0 else 2 * n + 2 + k


def upper_bound_for(n: int, k: int, orientation: int) -> int:
    """Bound for a single target: 2n+4 if it preserves orientation, else 2n+2+k."""
    _check(n, k)
    if orientation == 1:
        return 2 * n + 4
    if k % 2 == 0:
        raise ValueError("no orientation-reversing element is a product of even-codimension involutions")
    return 2 * n + 2 + k


def stabilizer_dim_identity(n: int, k: int) -> tuple[int, int]:
    """(dim Stab(alpha), dim Mob(n)); their difference is dim S_k."""
    _check(n, k)
    stab = (n - k) * (n - k + 1) // 2 + k * (k - 1) // 2
    total = dim_mob(n)
    assert total - stab == dim_Sk(n, k)
    return stab, total


@dataclass(frozen=True)
class BoundsRow:
    n: int
    k: int
    dim_Sk: int
    dim_Gk: int
    lower: int
    upper: int
    parity: str
    admits2: bool


def bounds_row(n: int, k: int) -> BoundsRow:
    lo = lower_bound(n, k)
    return BoundsRow(
        n=n,
        k=k,
        dim_Sk=dim_Sk(n, k),
        dim_Gk=dim_Gk(n, k),
        lower=lo,
        upper=upper_bound(n, k),
        parity="even" if k % 2 == 0 else "odd",
        admits2=lo <= 2,
    )


def bounds_table(n_max: int, n_min: int = 2) -> list[BoundsRow]:
    return [bounds_row(n, k) for n in range(n_min, n_max + 1) for k in range(1, n)]


def phi_numerator(n: int) -> int:
    """#{k in 1..n-1 : n(n+1) <= 4k(n-k+1)}, i.e. lower bound at most 2."""
    if n < 2:
        raise ValueError(f"n must be at least 2, got {n}")
    return kernels.count_length_two(n)


def phi_proxy(n: int) -> Fraction:
    """Upper estimate of Phi(n): the numerator over n conjugacy classes.

    Note that Fraction reduces; use :func:`phi_numerator` for the raw count.
    """
    return Fraction(phi_numerator(n), n)


def phi_asymptotic_check(n_max: int, n_min: int = 2) -> list[tuple[int, int, int, float]]:
    """Rows (n, numerator, denominator, numerator/sqrt(n+1)).

    The normalised ratio equals ``phi_proxy(n) * n / sqrt(n + 1)``.
    """
    counts = kernels.count_length_two_table(n_max)
    return [(n, int(counts[n]), n, int(counts[n]) / math.sqrt(n + 1)) for n in range(n_min, n_max + 1)]


def bounds_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "k", "dim_Sk", "dim_Gk", "lower", "upper", "parity", "admits2"])
    for r in rows:
        d = asdict(r)
        d["admits2"] = "true" if r.admits2 else "false"
        w.writerow(d.values())
    return buf.getvalue()


def phi_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "numerator", "denominator", "normalized_ratio"])
    for n, num, den, ratio in rows:
        w.writerow([n, num, den, format(ratio, ".17g")])
    return buf.getvalue()
