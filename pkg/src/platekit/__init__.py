"""Boundary-data equivalence between the Kirchhoff-Love plate and 2D elasticity."""

from .boundary_data import (
    ElastDirichlet,
    ElastNeumann,
    GaugeReport,
    InadmissibleDataError,
    PlateDirichlet,
    PlateNeumann,
    admissibility,
    equal_mod_gauge,
    normalize,
)
from .curve import ClosedCurve
from .dichotomy import build_M, classify_field, coeffs_from_compliance
from .manufactured import eval_all_boundary_data, plate_kernel_basis
from .poly import PolyField
from .tensor4 import (
    IsotropicModuli,
    Tensor4,
    apply,
    convexity_margin,
    duality,
    isotropic_compliance,
    isotropic_plate,
    moduli_convert,
    rotate2,
)
from .transforms import (
    displacement_to_moments,
    moments_to_displacement,
    plate_dirichlet_to_traction,
    plate_neumann_via_psi,
    traction_to_plate_dirichlet,
)

__version__ = "0.1.0"
