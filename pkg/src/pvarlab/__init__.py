"""pvarlab: moduli of p-variation for sampled functions.

Computes the modulus of p-variation by exact dynamic programming, realizes
the (L-infinity, BV_p) K-functional sandwich by free-knot spline
approximation, evaluates uniform-convergence criteria for Fourier series,
and decides (and witnesses) embeddings of generalized-variation and
symmetric sequence spaces.
"""

from ._kernels import backend_name
from .embeddings import (
    CriterionReport,
    LambdaSequence,
    OrliczFunction,
    PhiSequence,
    Witness,
    WitnessBudget,
    corollary_criteria,
    embedding_criterion,
    exp_orlicz,
    phi_partial_inverse,
    power_orlicz,
    var_phi,
    witness_generate,
    wu_bound_check,
)
from .fourier import (
    ConvergenceSequences,
    FourierCoeffs,
    OmegaLog,
    OmegaPower,
    Unif2Report,
    coeff_decay_report,
    convergence_sequences,
    convergence_sweep,
    fejer_kernel,
    fejer_kernel_integral,
    fejer_mean,
    fourier_coeffs,
    modulus_of_continuity,
    nikolskii_bound_check,
    omega_of,
    partial_sum,
    q_sequence,
    sine_integral_lower,
    theta,
    unif2_verdicts,
)
from .kfunctional import (
    KSandwich,
    PLFunction,
    bracket_count,
    kfunctional_bounds,
    kfunctional_sweep,
    pl_interpolate,
    select_knots,
    varp_pl,
)
from .modulus import (
    ModulusOfVariation,
    ModulusValidation,
    epsilon_p,
    epsilon_p_table,
    validate_modulus,
)
from .sampled import SampledFunction, extrema_reduce
from .seqspaces import (
    dual_harmonic_estimate,
    fundamental_sequence,
    lorentz_norm,
    marcinkiewicz_norm,
    modular_norm,
    orlicz_norm,
    rearrange,
)
from .variation import (
    IntervalSelection,
    pvariation_bruteforce,
    pvariation_dp,
    pvariation_profile,
    vpnu_norm,
)

__version__ = "0.1.0"
