"""Factor isometries of hyperbolic n-space into k-involutions.

Isometries are (n+1)x(n+1) Lorentz matrices preserving the upper sheet of
the hyperboloid ``-x0^2 + x1^2 + ... + xn^2 = -1``.
"""

from .bounds import (
    BoundsRow,
    bounds_table,
    dim_Gk,
    dim_Sk,
    lower_bound,
    phi_asymptotic_check,
    phi_proxy,
    stabilizer_dim_identity,
    upper_bound,
)
from .experiments import (
    RankReport,
    measure_zero_consistency,
    orbit_tangent_rank,
    product_map_rank,
)
from .factorization import (
    DimensionTooSmall,
    FactorizationResult,
    ParityError,
    UnsupportedK,
    factor_into_k_involutions,
    orthogonal_hyperplane,
    reflection_pair_to_halfturns,
    reflections_of,
    split_halfturn,
    split_reflection_odd,
    verify_factorization,
)
from .involutions import (
    KInvolution,
    NoFixedPoint,
    NotInvolution,
    SignVector,
    canonical_k_involution,
    classify_involution,
    embed_signvector,
    random_k_involution,
    signvec_product,
)
from .kernels import BACKEND
from .minkowski import (
    Hyperplane,
    Isometry,
    Tolerances,
    bisector_reflection,
    is_isometry,
    j_orthonormalize,
    minkowski_inner,
    numerical_rank,
    random_isometry,
    reflect_in_hyperplane,
)

__version__ = "0.1.0"
