"""Dynamically consistent NSFD discretization of the SICA HIV/AIDS model."""

from .exceptions import (
    ConfigError,
    HorizonTooShort,
    InvalidParameters,
    LengthMismatch,
    NoEndemicEquilibrium,
    NonpositiveCompartment,
    NonpositiveStep,
    NumericalFailure,
    SICAError,
    TrajectoryTooShort,
    ZeroPopulation,
)
from .model import (
    DerivedConstants,
    Equilibrium,
    EquilibriumKind,
    ModelParams,
    State,
    basic_reproduction_number,
    derived_constants,
    dfe,
    endemic_equilibrium,
    force_of_infection,
    rhs,
)
from .nsfd import (
    Denominator,
    LyapunovSeries,
    Trajectory,
    gronwall_bound,
    lyapunov_dfe,
    lyapunov_ee,
    nsfd_step,
    psi,
    simulate,
)
from .presets import CAPE_VERDE, INITIAL_CONDITIONS
from .stability import (
    CharPoly4,
    Polynomial,
    StabilityReport,
    char_poly_dfe,
    dfe_local_stability,
    inners,
    jacobian_dfe,
    roots_inside_unit_disk_oracle,
    schur_cohn,
)
from .reference import Scheme, positivity_scan, reference_step
from .data import cumulative_cases, fit_metrics, load_cape_verde
from .estimator import SICATransformer

__version__ = "0.1.0"
