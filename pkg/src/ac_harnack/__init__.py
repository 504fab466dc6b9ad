"""Allen-Cahn on flat tori: solver plus Harnack-inequality verification."""

from .errors import (
    ACHarnackError,
    AdmissibilityError,
    CFLViolationError,
    ConfigError,
    ConfinementError,
    FloorError,
)
from .grid import ScalarField, TorusGrid, geodesic_distance, gradient_sq, laplacian
from .params import (
    DerivedConstants,
    HarnackParams,
    beta_admissible_max,
    derive_constants,
    phi,
    phi_deriv,
    phi_floor_check,
    phi_integral,
    phi_ode_residual,
)
from .solver import (
    EPS_FLOOR,
    SchemeConfig,
    Trajectory,
    auto_dt,
    discrete_energy,
    evolve,
    generate_ic,
    step_explicit,
    step_imex,
)
from .verify import (
    VerificationReport,
    classical_harnack_rhs_paper,
    classical_harnack_rhs_tight,
    harnack_quantity,
    log_field,
    p_terms,
    u_evolution_residual,
    verify_classical,
    verify_differential,
)
from .waves import (
    WaveProfile,
    corollary_bound_gap,
    modica_bound_gap,
    polynomial_comparison,
    shoot_standing_wave,
    tanh_profile,
    traveling_wave_residual,
)

__version__ = "0.1.0"
