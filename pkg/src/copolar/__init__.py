"""Copolar pseudo-cones and numerical audits of their duality identities."""

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("artifact")
except PackageNotFoundError:
    __version__ = "0.1.0"

from .cone import Cone, GnomonicChart, dual, footprint_chart, interior_contains
from .errors import (
    CopolarError,
    Degenerate,
    DegenerateSupport,
    EmptyFootprint,
    NoiseBudgetExceeded,
    NonFinite,
    NotOnBoundary,
    NumericError,
    OutsideCone,
    ParseError,
    RankDeficient,
    Singular,
    UnknownAudit,
)
from .pseudocone import (
    FAMILIES,
    PseudoCone,
    calabi,
    copolar,
    from_membership,
    hyperbola,
    linear_image,
    make_family,
    perturbed_hyperbola,
    shifted_cone,
    truncated_cone,
)
from .report import AuditReport
from .duality import (
    audit_equivariance,
    audit_involution,
    audit_legendre,
    audit_radial_support,
    htilde,
    legendre,
    ratio_support,
    scale_saddle,
)
from .diffgeo import (
    BoundaryChart,
    ExponentialChart,
    affine_sphere_reports,
    check_gauge_equality,
    check_product_identity,
    crucial_map,
    crucial_map_hessian,
    crucial_pair_reports,
    equiaffine_support,
    gauss_curvature,
)
from .centroaffine import ca_metric, check_tensor_identities, christoffel, cubic_form
from .scenario import Scenario, load_scenario
from .runner import RunReport, run_scenario, write_outputs

__all__ = [name for name in dir() if not name.startswith("_") and name not in {"version", "PackageNotFoundError"}]
