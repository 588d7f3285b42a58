"""Spectrum-free spectral graph processing.

Apply arbitrary 1D filters to graph Laplacians through Chebyshev,
Pade/rational and Chebyshev-rational recursions that reduce to sparse SPD
solves, verified against a dense generalized eigendecomposition oracle.
"""

from ._errors import (
    ArgumentError,
    DefinitenessError,
    DimensionError,
    InputError,
    NumericalError,
    ParseError,
    RankError,
    SingularFilterError,
    SizeCapError,
    SolverError,
    SpectraFreeError,
    ValidationError,
)
from .cheb_filters import ChebSeries, apply_cheb_filter, cheb_coeffs_fast, cheb_eval, cheb_nodes
from .filters import FilterSpec, parse_filter
from .graph_core import (
    Graph,
    LaplacianPair,
    build_from_edge_list,
    build_from_mesh,
    dijkstra_distances,
    farthest_point_sampling,
    is_connected,
    laplacian,
)
from .methods import MethodEngine, parse_method
from .rational_filters import (
    ChebRationalSeries,
    RationalFilter,
    apply_cheb_rational_series,
    apply_rational_filter,
    cheb_rational_coeffs,
    cheb_rational_eval,
    pade_from_taylor,
    rational_from_cheb_series,
)
from .sparse_linalg import (
    SolveReport,
    SparseMatrix,
    cg_solve,
    prefactorize,
    read_matrix_market,
    spmv,
    write_matrix_market,
)
from .spectral_oracle import (
    EigenSystem,
    apply_filter_truncated,
    convolution,
    default_fourier_grid,
    dense_eigen,
    fourier_based_filter,
    spectral_distance,
    spectral_kernel_matrix,
    spectral_wavelet,
)
from .spectrum_tools import (
    DensityMoments,
    PseudoSpectrumQuery,
    characteristic_polynomial,
    conditioning_estimate,
    lambda_max_bound,
    power_lambda_max,
    pseudo_spectrum_membership,
    pseudo_spectrum_scan,
    smooth_density,
    spectral_density_moments,
)

__version__ = "0.1.0"
