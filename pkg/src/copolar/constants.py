"""Default tolerances and grid sizes, kept in one place."""

import numpy as np

EPS = float(np.finfo(float).eps)

# numkit
DEFAULT_RICHARDSON_LEVELS = 2
CAP_SCAN_POINTS = {2: 96, 3: 256}
CAP_SCAN_POINTS_HIGH_DIM = 512
CAP_RESTARTS = 3
CAP_TOL = 1e-12

# pseudocone
INTERIOR_MARGIN = 0.05
FD_RICHARDSON_LEVELS = 4
BISECTION_LOWER = 1e-8
BISECTION_RTOL = 1e-12
SUPPORT_DEGENERACY_TOL = 1e-12

# duality
LEGENDRE_RADIUS = 4.0
LEGENDRE_DOUBLINGS = 2
SHELL_RADII = (1.0, 3.0)

# diffgeo / centroaffine noise budgets
ANALYTIC_BUDGET = 1e-8
FD_CURVATURE_BUDGET = 1e-4
FD_PRODUCT_BUDGET = 1e-4
BOUNDARY_TOL = 1e-8
CRUCIAL_PAIR_TOL = 1e-9

# audit tolerances keyed by (audit id, derivative mode)
AUDIT_TOLERANCES = {
    ("involution", "analytic"): 1e-8,
    ("involution", "fd"): 1e-8,
    ("involution", "set"): 1e-6,
    ("eq1_1", "analytic"): 1e-9,
    ("eq1_1", "fd"): 1e-9,
    ("eq1_1", "set"): 1e-9,
    ("eq2_1n", "analytic"): 1e-8,
    ("eq2_1n", "fd"): 1e-7,
    ("eq3_2", "analytic"): 1e-7,
    ("eq3_2", "fd"): 1e-6,
    ("crucial_pair", "analytic"): 1e-9,
    ("crucial_pair", "fd"): 1e-9,
    ("crucial_inverse", "analytic"): 1e-7,
    ("crucial_inverse", "fd"): 1e-7,
    ("crucial_hessian", "analytic"): 1e-8,
    ("crucial_hessian", "fd"): 1e-5,
    ("eq4_1", "analytic"): 1e-5,
    ("eq4_1", "fd"): 1e-4,
    ("affine_sphere", "analytic"): 1e-5,
    ("affine_sphere", "fd"): 1e-2,
    ("eq5_1", "analytic"): 1e-8,
    ("eq5_1", "fd"): 1e-4,
    ("eq5_2", "analytic"): 1e-8,
    ("eq5_2", "fd"): 1e-3,
    ("equivariance", "analytic"): 1e-8,
    ("equivariance", "fd"): 1e-8,
}

EQUIVARIANCE_MATRICES = (
    ((2.0, 1.0), (0.0, 1.0)),
    ((1.0, 0.5), (0.3, 1.0)),
    ((3.0, 0.0), (0.0, 0.5)),
    ((0.0, 1.0), (1.0, 0.0)),
    ((1.0, -0.2), (0.4, 2.0)),
)
