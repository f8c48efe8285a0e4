"""Scatterer size estimation from amplitudes continued to complex directions.

The package couples forward solvers (Dirichlet sphere by partial waves,
potentials by Born or Lippmann-Schwinger) with a log-slope estimator that
recovers support functions ``sup_D v.y`` and widths.
"""
from .errors import (
    ConfigError,
    DomainError,
    GeometryError,
    InsideObstacle,
    NegativeB,
    NoConvergence,
    NonOrthogonal,
    NonUnit,
    NumericalError,
    NyquistViolation,
    OffSurface,
    ScatsizeError,
    TooFewPoints,
    ZeroAmplitude,
)
from .geometry import (
    E1,
    E2,
    E3,
    AxisBox,
    Ball,
    RealDirection,
    UnionOfBalls,
    VarietyDirection,
    make_variety_direction,
    real_direction,
    support_extent,
    width,
)
from .special_functions import LogComplex
from .forward_obstacle import (
    SphereObstacle,
    amplitude_via_surface_integral,
    mie_coefficients,
    obstacle_amplitude,
    scattered_field,
    sphere_amplitude,
    translation_phase,
)
from .forward_potential import (
    AnalyticPotential,
    FieldGrid,
    GaussianProfile,
    VoxelPotential,
    amplitude_from_H,
    born_amplitude,
    rasterize,
    solve_lippmann_schwinger,
)
from .estimator import (
    AmplitudeLadder,
    PotentialModel,
    SizeEstimate,
    WidthEstimate,
    compute_ladder,
    default_b_grid,
    estimate_extent,
    estimate_width,
    fit_extent,
    lemma1_oracle,
    sweep_widths,
)

__version__ = "0.1.0"
