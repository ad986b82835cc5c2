"""Exact sampling of determinantal point processes.

The rejection sampler in :mod:`fastdpp.projection` draws a projection DPP of
rank ``m`` over ``n`` items in O(nm + m^3 log m) expected time, against
O(nm^2) for the classical sequential algorithm. General DPPs, fixed-size
DPPs and L-ensembles reduce to projection DPPs through
:mod:`fastdpp.mixture`.
"""
from .alias import AliasTable, alias_draw, build_alias
from .config import DEFAULT_TOLERANCES, Tolerances
from .errors import *  # noqa: F401,F403
from .linalg import (
    GramSchmidtBasis,
    SpectralDecomposition,
    eigendecompose_sym,
    gram_schmidt_append,
    orthonormalize,
    randomized_range_finder,
    read_matrix,
    write_matrix,
)
from .mixture import (
    MixtureDPP,
    elementary_symmetric,
    kernel_from_lensemble,
    lensemble_from_features,
    mixture_from_kernel,
    partial_leverage_update,
    sample_dpp,
    sample_eigenvector_subset,
    sample_fixed_size_subset,
)
from .projection import (
    LeverageScores,
    PreparedSampler,
    SampleTrace,
    acceptance_ratio,
    leverage_scores,
    prepare,
    sample_rejection,
    sample_repeated,
    sample_standard,
)
from .thinning import (
    StratifiedSpec,
    ThinningResult,
    coupon_collector_experiment,
    iid_leverage_sample,
    stratified_basis,
    thin,
)

__version__ = "0.1.0"
