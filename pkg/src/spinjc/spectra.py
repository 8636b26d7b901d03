"""Diagonalization, spectral scans over coupling grids, and curvature
diagnostics.

Blockwise diagonalization uses the conserved quantity of the chosen
approximation (rotating: g' = 0, counter: g = 0); "full" diagonalizes the
whole matrix.  Merged eigenvalue lists are deterministic: ties are broken
by the block's conserved value.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import NumericalError, TruncationWarning
from .mjc_model import (
    ModelParams,
    ProductBasis,
    SymmetryBlock,
    build_h_bosonic,
    counter_blocks,
    restrict,
    rotating_blocks,
)
from .spin_algebra import OperatorMatrix

__all__ = [
    "Approximation",
    "Spectrum",
    "SpectralCurve",
    "ObservableCurve",
    "GroundExpectation",
    "SecondDifference",
    "eigh",
    "blockwise_spectrum",
    "ground_expectation_number",
    "spectrum_scan",
    "second_difference",
]

SYMMETRY_TOL = 1e-12
DEGENERACY_GAP = 1e-10


class Approximation(str, Enum):
    ROTATING = "rotating"
    COUNTER = "counter"
    FULL = "full"


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues, optional eigenvectors (columns), and, for
    blockwise results, the conserved value each eigenvalue came from."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    source_dim: int
    block_values: np.ndarray | None = None


@dataclass(frozen=True)
class SpectralCurve:
    coupling_grid: np.ndarray
    energies: np.ndarray  # shape (len(grid), n_levels), each row ascending
    which_coupling: str  # "g" or "gprime"


@dataclass(frozen=True)
class ObservableCurve:
    coupling_grid: np.ndarray
    values: np.ndarray  # ground-state <eps·a†a> per grid point
    which_coupling: str


@dataclass(frozen=True)
class GroundExpectation:
    value: float
    energy: float
    degenerate: bool
    candidates: tuple[float, ...]


@dataclass(frozen=True)
class SecondDifference:
    couplings: np.ndarray  # interior grid points
    values: np.ndarray  # (y[i+1] - 2 y[i] + y[i-1]) / h^2
    peak_coupling: float  # interior argmax of |values|
    peak_value: float


def eigh(h: OperatorMatrix | np.ndarray, want_vectors: bool = True) -> Spectrum:
    """Spectrum of a real symmetric matrix.

    Rejects non-symmetric input (max |H - H^T| > 1e-12).  Backed by
    LAPACK via numpy; any solver meeting the residual contract
    ||Hv - λv|| <= 1e-10·max(1, ||H||_inf) would do.
    """
    m = h.entries if isinstance(h, OperatorMatrix) else np.asarray(h, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise ValueError("eigh needs a square matrix of dimension >= 1")
    asym = np.abs(m - m.T).max()
    if asym > SYMMETRY_TOL:
        raise ValueError(f"matrix is not symmetric: max |H - H^T| = {asym:.3e}")
    try:
        if want_vectors:
            w, v = np.linalg.eigh(m)
        else:
            w, v = np.linalg.eigvalsh(m), None
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver did not converge: {exc}") from exc
    return Spectrum(eigenvalues=w, eigenvectors=v, source_dim=m.shape[0])


def _check_approximation(params: ModelParams, approximation: Approximation):
    approximation = Approximation(approximation)
    if approximation is Approximation.ROTATING and params.gprime != 0:
        raise ValueError("rotating approximation requires gprime = 0")
    if approximation is Approximation.COUNTER and params.g != 0:
        raise ValueError("counter approximation requires g = 0")
    return approximation


def _blocks_for(params: ModelParams, approximation: Approximation):
    basis = ProductBasis(params.j1, params.j2)
    if approximation is Approximation.ROTATING:
        return basis, rotating_blocks(basis)
    if approximation is Approximation.COUNTER:
        return basis, counter_blocks(basis)
    return basis, [SymmetryBlock(0.0, tuple(range(basis.dim)))]


def _diagonalize_blocks(params, approximation, want_vectors):
    """Per-block spectra of the Hamiltonian, plus the basis used."""
    basis, blocks = _blocks_for(params, approximation)
    h = build_h_bosonic(params)
    out = []
    for block in blocks:
        sub = restrict(h, block)
        out.append((block, eigh(sub, want_vectors=want_vectors)))
    return basis, out


def blockwise_spectrum(
    params: ModelParams,
    approximation: Approximation | str,
    want_vectors: bool = False,
) -> Spectrum:
    """Merge per-block eigenvalues into one ascending spectrum.

    Each eigenvalue carries its block's conserved value; ties in energy
    are broken by conserved value ascending, so the output is
    deterministic.  Eigenvectors, when kept, are embedded in the full
    product basis.
    """
    approximation = _check_approximation(params, approximation)
    basis, per_block = _diagonalize_blocks(params, approximation, want_vectors)
    rows = []
    for block, spec in per_block:
        for i, w in enumerate(spec.eigenvalues):
            rows.append((w, block.conserved_value, block, spec, i))
    rows.sort(key=lambda r: (r[0], r[1]))
    eigenvalues = np.array([r[0] for r in rows])
    block_values = np.array([r[1] for r in rows])
    vectors = None
    if want_vectors:
        vectors = np.zeros((basis.dim, len(rows)))
        for col, (_, _, block, spec, i) in enumerate(rows):
            vectors[np.asarray(block.indices), col] = spec.eigenvectors[:, i]
    return Spectrum(
        eigenvalues=eigenvalues,
        eigenvectors=vectors,
        source_dim=basis.dim,
        block_values=block_values,
    )


def ground_expectation_number(
    params: ModelParams, approximation: Approximation | str
) -> GroundExpectation:
    """Ground-state <eps·a†a>, with a†a read off the product-basis index.

    If the ground state is degenerate (gap < 1e-10) the minimum over the
    returned degenerate basis is reported, flagged, with all candidate
    values attached.  Warns when the occupation approaches the Fock
    cutoff (> 0.8·2·j2), where results are no longer truncation-converged.
    """
    approximation = _check_approximation(params, approximation)
    basis, per_block = _diagonalize_blocks(params, approximation, True)
    occupations = basis.occupations()
    e0 = min(spec.eigenvalues[0] for _, spec in per_block)
    candidates = []
    for block, spec in per_block:
        idx = np.asarray(block.indices)
        for i, w in enumerate(spec.eigenvalues):
            if w - e0 >= DEGENERACY_GAP:
                break
            vec = spec.eigenvectors[:, i]
            candidates.append(
                params.epsilon * float(occupations[idx] @ (vec * vec))
            )
    value = min(candidates)
    if value / params.epsilon > 0.8 * params.j2.twice_value:
        warnings.warn(
            f"ground-state occupation {value / params.epsilon:.2f} is close to "
            f"the Fock cutoff {params.j2.twice_value}; increase j2",
            TruncationWarning,
            stacklevel=2,
        )
    return GroundExpectation(
        value=value,
        energy=e0,
        degenerate=len(candidates) > 1,
        candidates=tuple(candidates),
    )


def spectrum_scan(
    params: ModelParams,
    coupling_values,
    approximation: Approximation | str,
    which_coupling: str | None = None,
) -> tuple[SpectralCurve, ObservableCurve]:
    """Blockwise spectrum and ground-state <eps·a†a> at each coupling.

    The varied coupling defaults to g for the rotating approximation and
    g' for the counter one; "full" requires which_coupling explicitly.
    """
    approximation = Approximation(approximation)
    grid = np.asarray(list(coupling_values), dtype=float)
    if grid.size == 0:
        raise ValueError("empty coupling grid")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("coupling grid must be strictly increasing")
    if which_coupling is None:
        if approximation is Approximation.ROTATING:
            which_coupling = "g"
        elif approximation is Approximation.COUNTER:
            which_coupling = "gprime"
        else:
            raise ValueError("which_coupling is required for the full approximation")
    if which_coupling not in ("g", "gprime"):
        raise ValueError("which_coupling must be 'g' or 'gprime'")

    energies = []
    observables = []
    for c in grid:
        point = params.with_coupling(**{which_coupling: float(c)})
        try:
            spec = blockwise_spectrum(point, approximation)
            obs = ground_expectation_number(point, approximation)
        except (ValueError, NumericalError) as exc:
            raise type(exc)(
                f"scan failed at {which_coupling} = {c}: {exc}"
            ) from exc
        energies.append(spec.eigenvalues)
        observables.append(obs.value)
    return (
        SpectralCurve(
            coupling_grid=grid,
            energies=np.vstack(energies),
            which_coupling=which_coupling,
        ),
        ObservableCurve(
            coupling_grid=grid,
            values=np.array(observables),
            which_coupling=which_coupling,
        ),
    )


def second_difference(grid, values) -> SecondDifference:
    """Central second differences on a uniform grid, plus the interior
    argmax of their magnitude (the curvature-peak coupling)."""
    grid = np.asarray(grid, dtype=float)
    values = np.asarray(values, dtype=float)
    if grid.ndim != 1 or grid.size < 3 or grid.shape != values.shape:
        raise ValueError("need matching 1-d arrays with at least 3 points")
    steps = np.diff(grid)
    h = steps[0]
    if h <= 0 or np.abs(steps - h).max() > 1e-9 * max(1.0, abs(h)):
        raise ValueError("grid must be uniform and increasing")
    d2 = (values[2:] - 2 * values[1:-1] + values[:-2]) / h**2
    peak = int(np.argmax(np.abs(d2)))
    return SecondDifference(
        couplings=grid[1:-1],
        values=d2,
        peak_coupling=float(grid[1:-1][peak]),
        peak_value=float(d2[peak]),
    )
