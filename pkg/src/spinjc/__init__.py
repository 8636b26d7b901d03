"""Spinorized Jaynes-Cummings model.

Rewrites the field mode of the M-atom Jaynes-Cummings model as a second
SU(2) spin (the inverse Holstein-Primakoff map), diagonalizes the model
blockwise using its conserved quantities, and analyzes the classical
limit of the reduced rotating and counter-rotating Hamiltonians.
"""

__version__ = "0.1.0"

from .errors import NumericalError, TruncationWarning
from .spin_algebra import (
    Basis,
    BosonOps,
    BosonizedSpin,
    HalfInteger,
    OperatorMatrix,
    SpinOps,
    SpinorizedBoson,
    commutator,
    hp_bosonize,
    hp_roundtrip_report,
    hp_spinorize,
    make_boson_operators,
    make_spin_operators,
)
from .mjc_model import (
    ModelParams,
    ProductBasis,
    SymmetryBlock,
    build_h_bosonic,
    build_h_two_spin,
    counter_blocks,
    restrict,
    rotating_blocks,
)
from .spectra import (
    Approximation,
    GroundExpectation,
    ObservableCurve,
    SecondDifference,
    SpectralCurve,
    Spectrum,
    blockwise_spectrum,
    eigh,
    ground_expectation_number,
    second_difference,
    spectrum_scan,
)
from .classical import (
    ClassicalParams,
    Contour,
    FixedPoint,
    LAMBDA_PRIME_CRITICAL,
    LiebReport,
    PhasePoint,
    Trajectory,
    canonical_inverse,
    canonical_transform,
    classical_energy_offset,
    critical_coupling_scan,
    find_fixed_points,
    grad,
    h_counter,
    h_full,
    h_rotating,
    hessian,
    integrate_orbit,
    lambda_from_coupling,
    lambda_from_coupling_finite_j,
    lieb_limit_check,
    reduced_h_grid,
    separatrix_energy,
    trace_contours,
)
