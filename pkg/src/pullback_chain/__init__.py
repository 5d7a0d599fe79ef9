"""Certified pullback attractors of random tridiagonal Markov chains."""

from .attractor import (
    AttractorPoint,
    ConvergenceTrace,
    attractor_path,
    equivariance_defects,
    forward_tracking_report,
    periodic_attractor,
    pullback_point,
    subdominant_spectral_bound,
)
from .chain_model import (
    BandParameters,
    RateBounds,
    SimplexSlice,
    build_generator,
    build_transition,
    positivity_floor,
    stationary_distribution,
)
from .cocycle import CocycleProduct, cocycle_matrix, verify_band_structure, verify_dissipativity
from .driving import EnvironmentDriver, constant_driver, env_at, periodic_driver, random_driver, shift, transition_at
from .errors import (
    ConfigError,
    DimensionError,
    InvalidParameterError,
    StepTooLargeError,
    UnconvergedError,
)
from .hilbert import (
    birkhoff_ratio,
    hilbert_distance,
    project_to_simplex,
    projective_diameter,
    simplex_image_diameter,
)

__version__ = "0.1.0"
