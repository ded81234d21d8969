"""Curvature identities of four-dimensional metrics.

Jet-exact curvature assembly for a catalog of closed-form metrics, the
pointwise quadratic curvature identity and its trace, generalized
Gauss-Bonnet quadrature, first metric variations with finite-difference
oracles, and curvature-adapted orthonormal frames.
"""

__version__ = "0.1.0"

from .catalog import CATALOG_NAMES, CatalogEntry, catalog_entries, catalog_metric
from .curvature import (
    CurvaturePack,
    CurvatureJets,
    SymmetryReport,
    check_riemann_symmetries,
    christoffel,
    covariant_derivative,
    curvature_pack,
)
from .errors import (
    CatalogError,
    ConfigError,
    CurvkitError,
    DegenerateMetricError,
    DomainError,
    FrameSearchError,
    JetOrderError,
    SignatureError,
)
from .errors import ConvergenceError
from .fields import Box, MetricField, SymJet2, evaluate_metric_jet
from .frames import (
    ChernSearchResult,
    FrameRotation,
    SingerThorpeReport,
    chern_basis_search,
    chern_expansion_check,
    chern_objective,
    frame_components,
    orthonormal_frame,
    rotate_curvature,
    singer_thorpe_check,
)
from .identities import (
    IdentityReport,
    ThreeDimReport,
    einstein_residual,
    gauss_bonnet_integrand,
    identity_residual,
    identity_trace_check,
    three_dim_norm_identity,
    three_dim_reconstruct,
    weakly_einstein_residual,
)
from .jets import ScalarJet
from .quadrature import (
    Atlas,
    ChartGrid,
    EulerResult,
    atlas_for,
    chart_grid,
    euler_characteristic,
    integrate_scalar,
    volume,
)
from .variation import (
    DeformationField,
    FdResult,
    IntegralVariationRecord,
    christoffel_derivative,
    deformation_analytic,
    deformation_fd,
    fd_oracle,
    integral_variation_check,
    integral_variation_suite,
    inverse_metric_derivative,
    ricci_derivative,
    riemann_derivative,
    scalar_derivative,
    variation_integrands,
    volume_element_derivative,
)

__all__ = [
    "CATALOG_NAMES",
    "Atlas",
    "Box",
    "CatalogEntry",
    "CatalogError",
    "ChartGrid",
    "ChernSearchResult",
    "ConfigError",
    "ConvergenceError",
    "CurvaturePack",
    "CurvatureJets",
    "CurvkitError",
    "DeformationField",
    "DegenerateMetricError",
    "DomainError",
    "EulerResult",
    "FdResult",
    "FrameRotation",
    "FrameSearchError",
    "IdentityReport",
    "IntegralVariationRecord",
    "JetOrderError",
    "MetricField",
    "ScalarJet",
    "SignatureError",
    "SingerThorpeReport",
    "SymJet2",
    "SymmetryReport",
    "ThreeDimReport",
    "atlas_for",
    "catalog_entries",
    "catalog_metric",
    "chart_grid",
    "check_riemann_symmetries",
    "chern_basis_search",
    "chern_expansion_check",
    "chern_objective",
    "christoffel",
    "christoffel_derivative",
    "covariant_derivative",
    "curvature_pack",
    "deformation_analytic",
    "deformation_fd",
    "einstein_residual",
    "euler_characteristic",
    "evaluate_metric_jet",
    "fd_oracle",
    "frame_components",
    "gauss_bonnet_integrand",
    "identity_residual",
    "identity_trace_check",
    "integral_variation_check",
    "integral_variation_suite",
    "integrate_scalar",
    "inverse_metric_derivative",
    "orthonormal_frame",
    "ricci_derivative",
    "riemann_derivative",
    "rotate_curvature",
    "scalar_derivative",
    "singer_thorpe_check",
    "three_dim_norm_identity",
    "three_dim_reconstruct",
    "variation_integrands",
    "volume",
    "volume_element_derivative",
    "weakly_einstein_residual",
    "__version__",
]
