"""Integer chains on cell complexes, concave-weighted masses, and the
boundary-constrained minimization problems built from them: flat norms,
partial spanning problems, polyhedral slicing, and the sunflower family of
worked scenarios.
"""

from .complexes import Cell, CellComplex, Chain, Cochain, ValidationReport, boundary, pair, validate
from .errors import (
    DegenerateSliceError,
    DomainError,
    ParseError,
    PPlateauError,
    SearchSpaceError,
)
from .flatnorm import (
    FlatCertificate,
    certificates_agree,
    enumerate_flat_integral,
    flat_distance_integral,
    flat_norm_real,
    h_flat_distance,
    verify_real_certificate,
)
from .functionals import (
    EnergyValue,
    Integrand,
    IntegrandReport,
    alpha_mass,
    comass,
    energy,
    h_mass,
    mass,
    validate_integrand,
)
from .slicer import (
    McEstimate,
    PolyhedralChain,
    ZeroCurrent,
    cone,
    cone_mass_bound,
    embed_chain,
    mc_h_mass,
    poly_boundary,
    poly_h_mass,
    poly_mass,
    slice_chain,
)
from .solver import (
    CertifyReport,
    Problem,
    Solution,
    certify,
    derive_bounds,
    exhaustive_oracle,
    solve,
)
from .subcurrent import (
    BoundaryBox,
    boundary_box,
    check_limit_closure,
    is_subcurrent,
    is_subcurrent_cellwise,
)
from .sunflower import (
    PetalClasses,
    RegimeThresholds,
    SunflowerScenario,
    active_regimes,
    as_problem,
    build_sunflower,
    classify_petals,
    closed_form_solutions,
    thresholds,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryBox",
    "Cell",
    "CellComplex",
    "CertifyReport",
    "Chain",
    "Cochain",
    "DegenerateSliceError",
    "DomainError",
    "EnergyValue",
    "FlatCertificate",
    "Integrand",
    "IntegrandReport",
    "McEstimate",
    "ParseError",
    "PetalClasses",
    "PolyhedralChain",
    "PPlateauError",
    "Problem",
    "RegimeThresholds",
    "SearchSpaceError",
    "Solution",
    "SunflowerScenario",
    "ValidationReport",
    "ZeroCurrent",
    "active_regimes",
    "alpha_mass",
    "as_problem",
    "boundary",
    "boundary_box",
    "build_sunflower",
    "certificates_agree",
    "certify",
    "check_limit_closure",
    "classify_petals",
    "closed_form_solutions",
    "comass",
    "cone",
    "cone_mass_bound",
    "derive_bounds",
    "embed_chain",
    "energy",
    "enumerate_flat_integral",
    "exhaustive_oracle",
    "flat_distance_integral",
    "flat_norm_real",
    "h_flat_distance",
    "h_mass",
    "is_subcurrent",
    "is_subcurrent_cellwise",
    "mass",
    "mc_h_mass",
    "pair",
    "poly_boundary",
    "poly_h_mass",
    "poly_mass",
    "slice_chain",
    "solve",
    "thresholds",
    "validate",
    "validate_integrand",
    "verify_real_certificate",
]
