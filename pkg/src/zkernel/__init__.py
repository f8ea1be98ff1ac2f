"""Determinantal ensembles on the quadratic half-lattice.

Weights and measures on signatures, the finite orthogonal-polynomial
system, closed-form correlation kernels with an independent dense-solve
oracle, the continuum hypergeometric-kernel limit, and exact sampling.
"""

__version__ = "0.1.0"

from .errors import (
    ConstraintError,
    DivergenceError,
    DomainError,
    NearDegenerateWarning,
    PoleError,
    SizeError,
    SolveError,
    SpectrumError,
    SubsetError,
    ZKernelError,
)
from .specfun import (
    GammaRatio,
    KernelValue,
    SeriesSpec,
    gamma_ratio,
    identity_residual,
    l_function,
    pfq,
    pfq_value,
    pochhammer,
    w76,
)
from .zmeasure import (
    Params,
    PointConfig,
    classify_pair,
    enumerate_degenerate,
    frobenius,
    from_frobenius,
    is_admissible,
    map_l,
    map_o,
    p_prime,
    partition_s_n,
    prob,
    weight_w,
)
from .orthopoly import (
    LatticeWeight,
    monic_p,
    norm_h,
    orthogonality_residual,
    squared_norm_H,
    weight_W,
    wilson_neretin_Q,
)
from .kernels import (
    DiscreteKernel,
    RSBundle,
    g_factor,
    kernel_L,
    kernel_O,
    p_n_tilde,
    psi_geq,
    psi_less,
    r_geq,
    r_less,
    residue_at,
    s_geq,
    s_less,
)
from .drhp import (
    TruncatedLMatrix,
    asymptotic_check,
    build_l_matrix,
    kernel_via_resolvent,
    residue_check,
)
from .scaling import (
    BoundaryPoint,
    ContinuumKernel,
    boundary_map_i,
    convergence_study,
    kernel_P,
    nearest_lattice,
    psi_gt1,
    psi_lt1,
    r_gt1,
    r_lt1,
    s_gt1,
    s_lt1,
)
from .sampling import (
    FiniteKernelMatrix,
    SampleBatch,
    complement_config,
    dpp_sample,
    empirical_correlations,
    racah_weight,
)
