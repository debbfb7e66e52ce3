"""Explicit bounds for counting ideals in imaginary quadratic fields.

S(X) = sum_{n <= X} (1 * chi)(n) counts ideals of norm at most X in
Q[sqrt(d)]; this package computes it exactly, certifies explicit error
bounds for S(X) - X L(1, chi) over real X, and evaluates the constants
the bounds are built from.
"""

from .character import (
    CharacterConsistencyError,
    QuadraticCharacter,
    SQUAREFREE_D_TO_19,
    character_for_modulus,
    fundamental_discriminant,
    kronecker,
    l_series,
    omega_chi,
    partial_char_sum,
    quadratic_character,
)
from .constants import (
    PUBLISHED_TABLE,
    ConstantEstimate,
    TableRow,
    c0_of_d,
    c_five_quarters,
    c_three_quarters,
    dedekind_sum2_bound,
    dedekind_sum_bound,
    reproduce_table,
)
from .convolution import (
    ConvolutionTable,
    MainTerm,
    ScanReport,
    SieveOverflowError,
    convolution_values,
    hyperbola_point,
    iter_blocks,
    scan_error,
    sieve_block,
)
from .special_functions import (
    BesselEval,
    LemmaViolation,
    bessel_integral_0,
    bessel_integral_1,
    bessel_j,
    krasikov_gap,
    zeta,
    zeta_partial,
)
from .voronoi import (
    first_approx_check,
    main_theorem_check,
    main_theorem_scan,
    main_threshold,
    smoothed_sum,
    t_bound,
    t_bound_scan,
    t_kernel,
    voronoi_smooth_check,
    voronoi_tail_bound,
)

__version__ = "0.1.0"
