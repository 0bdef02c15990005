"""tensorfree: a workbench for tensorial free probability.

Exact moments and free cumulants on combinatorial trace maps, truncated
series transforms and free convolution, dense trace-invariant evaluation,
and seeded Wigner/Wishart Monte Carlo ensembles.
"""

from .maps import (
    CombMap,
    Permutation,
    bouquet,
    build_map,
    bn,
    enumerate_Bn,
    melon,
    multicycle,
    odd_multicycle,
)
from .poset import down_set, is_melonic, moebius
from .distributions import (
    MapDistribution,
    cumulant_of_map,
    cumulant_n,
    eval_map,
    free_poisson_on_maps,
    free_sum,
    identity_on_maps,
    moment_n,
    semicircular_on_maps,
    zero_on_maps,
)
from .series import (
    CumulantSeries,
    LaurentSeries,
    MomentSeries,
    cauchy_pair_check,
    clt_rescale,
    cumulants_from_moments,
    free_convolve,
    free_poisson_series,
    moments_from_cumulants,
    semicircular_series,
    q_transform,
    r_transform,
    verify_functional,
)
from .laws import enumerate_nc_multiple, fuss_catalan, fuss_narayana
from .tensors import (
    DenseTensor,
    conjugate_orthogonal,
    eval_trace_invariant,
    permute_legs,
    plan_contraction,
    symmetrize_pair,
)
from .ensembles import (
    EnsembleConfig,
    MonteCarloReport,
    clt_superposition,
    estimate_map,
    estimate_moments,
    sample_wigner,
    sample_wishart,
)

__version__ = "0.1.0"
