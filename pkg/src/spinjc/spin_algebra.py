"""SU(2) spin operators, truncated boson operators, and the
Holstein-Primakoff map in both directions.

Conventions:

* Spin matrices act on the basis |m>, m = -J..+J ascending, so row/column
  index r corresponds to m = r - J.
* Boson matrices act on the Fock basis |n>, n = 0..n_max ascending, with a
  hard truncation: a† annihilates the top state |n_max>.
* Bosonizing a spin identifies n = J - m (the occupation counts down from
  m = +J), which reverses the index order.
* Spinorizing a boson identifies n = J + m (the occupation counts up from
  m = -J), which preserves the index order, so the spinorized matrices
  equal the truncated boson matrices entry for entry.

All matrices are real and dense; J- and a are always exact transposes of
J+ and a†.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

__all__ = [
    "Basis",
    "HalfInteger",
    "OperatorMatrix",
    "SpinOps",
    "BosonOps",
    "BosonizedSpin",
    "SpinorizedBoson",
    "make_spin_operators",
    "make_boson_operators",
    "hp_bosonize",
    "hp_spinorize",
    "commutator",
]


class Basis(str, Enum):
    SPIN_ASCENDING_M = "spin_ascending_m"
    FOCK_ASCENDING_N = "fock_ascending_n"
    PRODUCT_FIELD_MAJOR = "product_field_major"


@dataclass(frozen=True, order=True)
class HalfInteger:
    """An integer or half-integer spin length J, stored exactly as 2J."""

    twice_value: int

    def __post_init__(self):
        if isinstance(self.twice_value, bool) or not isinstance(
            self.twice_value, (int, np.integer)
        ):
            raise TypeError("twice_value must be an integer")
        if self.twice_value < 0:
            raise ValueError("twice_value must be >= 0")

    @classmethod
    def from_value(cls, value: float) -> "HalfInteger":
        """Build from a float like 0.5 or 25; rejects non-half-integers."""
        twice = round(2 * float(value))
        if abs(2 * float(value) - twice) > 1e-9:
            raise ValueError(f"{value!r} is not an integer or half-integer")
        return cls(int(twice))

    @property
    def value(self) -> float:
        return self.twice_value / 2

    @property
    def dim(self) -> int:
        """Dimension 2J + 1 of the spin-J representation."""
        return self.twice_value + 1

    def __float__(self) -> float:
        return self.value

    def __str__(self) -> str:
        if self.twice_value % 2:
            return f"{self.twice_value}/2"
        return str(self.twice_value // 2)


@dataclass(frozen=True)
class OperatorMatrix:
    """Dense real square matrix with a basis tag.  Immutable."""

    entries: np.ndarray
    basis_tag: Basis

    def __post_init__(self):
        m = np.array(self.entries, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("operator matrix must be square")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator matrix entries must be finite")
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def T(self) -> "OperatorMatrix":
        return OperatorMatrix(self.entries.T, self.basis_tag)


@dataclass(frozen=True)
class SpinOps:
    """Jz, J+, J- on the ascending-m basis of a spin j."""

    j: HalfInteger
    jz: OperatorMatrix
    jplus: OperatorMatrix
    jminus: OperatorMatrix


@dataclass(frozen=True)
class BosonOps:
    """a, a†, a†a on the Fock basis truncated at occupation n_max."""

    n_max: int
    a: OperatorMatrix
    adag: OperatorMatrix
    number: OperatorMatrix


@dataclass(frozen=True)
class BosonizedSpin:
    """Spin operators realized on the Fock basis (n = J - m)."""

    j: HalfInteger
    jz: OperatorMatrix
    jplus: OperatorMatrix
    jminus: OperatorMatrix


@dataclass(frozen=True)
class SpinorizedBoson:
    """Boson operators realized on the ascending-m spin basis (n = J + m)."""

    j: HalfInteger
    a: OperatorMatrix
    adag: OperatorMatrix
    number: OperatorMatrix


def make_spin_operators(j: HalfInteger) -> SpinOps:
    """Matrix representation of Jz, J+, J- for spin j.

    <m+1| J+ |m> = sqrt(J(J+1) - m(m+1)); J- is the transpose of J+.
    j = 0 yields 1x1 zero matrices.
    """
    dim = j.dim
    jval = j.value
    m = np.arange(dim) - jval
    jz = np.diag(m)
    jplus = np.zeros((dim, dim))
    if dim > 1:
        coeff = np.sqrt(jval * (jval + 1) - m[:-1] * (m[:-1] + 1))
        jplus[np.arange(1, dim), np.arange(dim - 1)] = coeff
    tag = Basis.SPIN_ASCENDING_M
    return SpinOps(
        j=j,
        jz=OperatorMatrix(jz, tag),
        jplus=OperatorMatrix(jplus, tag),
        jminus=OperatorMatrix(jplus.T, tag),
    )


def make_boson_operators(n_max: int) -> BosonOps:
    """Truncated a, a†, a†a with occupations 0..n_max.

    The truncation is hard: the column of a† at n_max is zero, so
    a†|n_max> = 0 and [a, a†] = 1 everywhere except the top state.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    dim = n_max + 1
    adag = np.zeros((dim, dim))
    adag[np.arange(1, dim), np.arange(dim - 1)] = np.sqrt(np.arange(1, dim))
    tag = Basis.FOCK_ASCENDING_N
    return BosonOps(
        n_max=n_max,
        a=OperatorMatrix(adag.T, tag),
        adag=OperatorMatrix(adag, tag),
        number=OperatorMatrix(np.diag(np.arange(dim, dtype=float)), tag),
    )


def _inverse_sqrt_diag(values: np.ndarray) -> np.ndarray:
    """Pseudo-inverse square root of a nonnegative diagonal: zeros stay zero."""
    positive = values > 0
    out = np.zeros_like(values, dtype=float)
    out[positive] = 1.0 / np.sqrt(values[positive])
    return out


def hp_bosonize(j: HalfInteger) -> BosonizedSpin:
    """Spin operators built from truncated bosons on the Fock basis.

    Jz = J·1 - a†a, J+ = sqrt(2J·1 - a†a)·a, J- = a†·sqrt(2J·1 - a†a),
    with n_max = 2J.  Reversing the index order (n = J - m) recovers
    make_spin_operators(j) exactly.
    """
    if j.twice_value < 1:
        raise ValueError("hp_bosonize requires j >= 1/2")
    jval = j.value
    bos = make_boson_operators(j.twice_value)
    n_diag = np.diag(bos.number.entries)
    root = np.diag(np.sqrt(np.maximum(2 * jval - n_diag, 0.0)))
    jz = jval * np.eye(j.dim) - bos.number.entries
    jplus = root @ bos.a.entries
    tag = Basis.FOCK_ASCENDING_N
    return BosonizedSpin(
        j=j,
        jz=OperatorMatrix(jz, tag),
        jplus=OperatorMatrix(jplus, tag),
        jminus=OperatorMatrix(jplus.T, tag),
    )


def hp_spinorize(j2: HalfInteger) -> SpinorizedBoson:
    """Boson operators built from a spin j2 on the ascending-m basis.

    a†a = J·1 + Jz, a† = J+·(J·1 - Jz)^(-1/2), a = (J·1 - Jz)^(-1/2)·J-,
    where the inverse square root of the diagonal operator is a
    pseudo-inverse (zero where J - m vanishes), so a† annihilates the top
    state.  With n = J + m the matrices equal make_boson_operators(2·j2).
    """
    if j2.twice_value < 1:
        raise ValueError("hp_spinorize requires j2 >= 1/2")
    jval = j2.value
    spin = make_spin_operators(j2)
    depth = jval - np.diag(spin.jz.entries)  # J - m, zero at the top state
    inv_root = np.diag(_inverse_sqrt_diag(depth))
    adag = spin.jplus.entries @ inv_root
    number = jval * np.eye(j2.dim) + spin.jz.entries
    tag = Basis.SPIN_ASCENDING_M
    return SpinorizedBoson(
        j=j2,
        a=OperatorMatrix(adag.T, tag),
        adag=OperatorMatrix(adag, tag),
        number=OperatorMatrix(number, tag),
    )


def commutator(a: OperatorMatrix, b: OperatorMatrix) -> OperatorMatrix:
    """AB - BA."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return OperatorMatrix(
        a.entries @ b.entries - b.entries @ a.entries, a.basis_tag
    )


def hp_roundtrip_report(j_max: HalfInteger) -> dict:
    """Worst residuals of the operator-algebra identities for all spin
    lengths 1/2, 1, ..., j_max.

    Checks the SU(2) commutators, the bosonization round trip (index
    reversal n = J - m), and the spinorization round trip (n = J + m).
    All residuals are <= 1e-12 by construction; this is the self-check
    behind the spin-check CLI command.
    """
    if j_max.twice_value < 1:
        raise ValueError("j_max must be >= 1/2")
    worst_comm = 0.0
    worst_boson = 0.0
    worst_spin = 0.0
    for twice in range(1, j_max.twice_value + 1):
        j = HalfInteger(twice)
        ops = make_spin_operators(j)
        two_jz = 2 * ops.jz.entries
        worst_comm = max(
            worst_comm,
            np.abs(commutator(ops.jz, ops.jplus).entries - ops.jplus.entries).max(),
            np.abs(commutator(ops.jz, ops.jminus).entries + ops.jminus.entries).max(),
            np.abs(commutator(ops.jplus, ops.jminus).entries - two_jz).max(),
        )
        rev = slice(None, None, -1)
        bosonized = hp_bosonize(j)
        worst_boson = max(
            worst_boson,
            np.abs(bosonized.jz.entries[rev, rev] - ops.jz.entries).max(),
            np.abs(bosonized.jplus.entries[rev, rev] - ops.jplus.entries).max(),
        )
        spinorized = hp_spinorize(j)
        boson = make_boson_operators(twice)
        worst_spin = max(
            worst_spin,
            np.abs(spinorized.adag.entries - boson.adag.entries).max(),
            np.abs(spinorized.number.entries - boson.number.entries).max(),
        )
    return {
        "j_max": j_max.value,
        "max_su2_commutator_residual": float(worst_comm),
        "max_bosonize_roundtrip_residual": float(worst_boson),
        "max_spinorize_roundtrip_residual": float(worst_spin),
    }
