"""The M-atom Jaynes-Cummings Hamiltonian and its symmetry blocks.

The model couples a pseudo-spin j1 (M = 2·j1 two-level atoms, splitting
epsilon) to a single field mode, truncated at occupation n_max = 2·j2.
Two equivalent builders are provided:

* build_h_bosonic   -- field factor as truncated boson operators,
* build_h_two_spin  -- field factor spinorized into a second spin j2.

Both act on the field-major product basis and agree entry for entry; the
constant epsilon·j2 appearing in the two-spin form is not an extra shift,
since a†a = j2 + J2z already carries it.

With g' = 0 the number-plus-inversion observable a†a + J1z is conserved;
with g = 0 the difference a†a - J1z is.  The corresponding index
partitions allow blockwise diagonalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .spin_algebra import (
    Basis,
    HalfInteger,
    OperatorMatrix,
    make_boson_operators,
    make_spin_operators,
    _inverse_sqrt_diag,
)

__all__ = [
    "ModelParams",
    "ProductBasis",
    "SymmetryBlock",
    "build_h_bosonic",
    "build_h_two_spin",
    "rotating_blocks",
    "counter_blocks",
    "restrict",
]


@dataclass(frozen=True)
class ModelParams:
    """Couplings and spin sizes.  Only g, g' are stored; the collective
    parameterization G, G' with g = G/sqrt(M) is accepted via
    from_collective()."""

    epsilon: float
    g: float
    gprime: float
    j1: HalfInteger
    j2: HalfInteger

    def __post_init__(self):
        if not self.epsilon > 0:
            raise ValueError("epsilon must be > 0")
        if self.g < 0 or self.gprime < 0:
            raise ValueError("couplings must be >= 0")
        if self.j1.twice_value < 1 or self.j2.twice_value < 1:
            raise ValueError("j1 and j2 must be >= 1/2")

    @classmethod
    def from_collective(
        cls,
        epsilon: float,
        big_g: float,
        big_gprime: float,
        m_atoms: int,
        j2: HalfInteger,
    ) -> "ModelParams":
        """Collective couplings G, G' for M atoms; g = G/sqrt(M), j1 = M/2."""
        if m_atoms < 1:
            raise ValueError("m_atoms must be >= 1")
        root = math.sqrt(m_atoms)
        return cls(
            epsilon=epsilon,
            g=big_g / root,
            gprime=big_gprime / root,
            j1=HalfInteger(m_atoms),
            j2=j2,
        )

    @property
    def n_max(self) -> int:
        """Fock truncation of the field mode."""
        return self.j2.twice_value

    def with_coupling(self, *, g: float | None = None, gprime: float | None = None):
        kw = {}
        if g is not None:
            kw["g"] = g
        if gprime is not None:
            kw["gprime"] = gprime
        return replace(self, **kw)


@dataclass(frozen=True)
class ProductBasis:
    """Field-major product basis: index = n·(2j1+1) + (m1+j1)."""

    j1: HalfInteger
    j2: HalfInteger

    @property
    def dim(self) -> int:
        return self.j1.dim * self.j2.dim

    def encode(self, n: int, m1: float) -> int:
        r = round(m1 + self.j1.value)
        if not (0 <= n <= self.j2.twice_value):
            raise ValueError(f"n={n} outside 0..{self.j2.twice_value}")
        if not (0 <= r < self.j1.dim) or abs(r - (m1 + self.j1.value)) > 1e-9:
            raise ValueError(f"m1={m1} invalid for j1={self.j1}")
        return n * self.j1.dim + r

    def decode(self, index: int) -> tuple[int, float]:
        if not (0 <= index < self.dim):
            raise ValueError(f"index {index} outside 0..{self.dim - 1}")
        n, r = divmod(index, self.j1.dim)
        return n, r - self.j1.value

    def occupations(self) -> np.ndarray:
        """Field occupation n per basis index."""
        return np.repeat(np.arange(self.j2.dim), self.j1.dim)

    def inversions(self) -> np.ndarray:
        """Atomic quantum number m1 per basis index."""
        return np.tile(np.arange(self.j1.dim) - self.j1.value, self.j2.dim)


@dataclass(frozen=True)
class SymmetryBlock:
    """Product-basis indices sharing one conserved-quantity eigenvalue."""

    conserved_value: float
    indices: tuple[int, ...] = field(default_factory=tuple)

    @property
    def size(self) -> int:
        return len(self.indices)


def _blocks_by(basis: ProductBasis, key: np.ndarray) -> list[SymmetryBlock]:
    order = {}
    for idx, k in enumerate(key):
        order.setdefault(float(k), []).append(idx)
    return [
        SymmetryBlock(conserved_value=k, indices=tuple(order[k]))
        for k in sorted(order)
    ]


def rotating_blocks(basis: ProductBasis) -> list[SymmetryBlock]:
    """Partition by k = n + m1 (conserved when g' = 0)."""
    return _blocks_by(basis, basis.occupations() + basis.inversions())


def counter_blocks(basis: ProductBasis) -> list[SymmetryBlock]:
    """Partition by k = n - m1 (conserved when g = 0)."""
    return _blocks_by(basis, basis.occupations() - basis.inversions())


def build_h_bosonic(params: ModelParams) -> OperatorMatrix:
    """H = eps·a†a + eps·J1z + g(a J1+ + a† J1-) + g'(a† J1+ + a J1-)
    on the field-major product basis, field mode truncated at 2·j2."""
    bos = make_boson_operators(params.n_max)
    spin = make_spin_operators(params.j1)
    eye_f = np.eye(params.j2.dim)
    eye_a = np.eye(params.j1.dim)
    a, adag, num = bos.a.entries, bos.adag.entries, bos.number.entries
    jz, jp, jm = spin.jz.entries, spin.jplus.entries, spin.jminus.entries
    h = (
        params.epsilon * (np.kron(num, eye_a) + np.kron(eye_f, jz))
        + params.g * (np.kron(a, jp) + np.kron(adag, jm))
        + params.gprime * (np.kron(adag, jp) + np.kron(a, jm))
    )
    return OperatorMatrix(h, Basis.PRODUCT_FIELD_MAJOR)


def build_h_two_spin(params: ModelParams) -> OperatorMatrix:
    """The same Hamiltonian with the field factor written as a second spin:

    H = eps·j2·1 + eps(J1z + J2z)
        + g [(j2·1 - J2z)^(-1/2) J2- J1+  +  J2+ (j2·1 - J2z)^(-1/2) J1-]
        + g'[J2+ (j2·1 - J2z)^(-1/2) J1+  +  (j2·1 - J2z)^(-1/2) J2- J1-]

    with the pseudo-inverse convention on the root.  Equals
    build_h_bosonic(params) entrywise.
    """
    s2 = make_spin_operators(params.j2)
    spin = make_spin_operators(params.j1)
    j2val = params.j2.value
    depth = j2val - np.diag(s2.jz.entries)
    inv_root = np.diag(_inverse_sqrt_diag(depth))
    f_lower = inv_root @ s2.jminus.entries  # acts like a
    f_raise = s2.jplus.entries @ inv_root  # acts like a†
    eye_f = np.eye(params.j2.dim)
    eye_a = np.eye(params.j1.dim)
    jz, jp, jm = spin.jz.entries, spin.jplus.entries, spin.jminus.entries
    h = (
        params.epsilon * j2val * np.eye(params.j1.dim * params.j2.dim)
        + params.epsilon * (np.kron(eye_f, jz) + np.kron(s2.jz.entries, eye_a))
        + params.g * (np.kron(f_lower, jp) + np.kron(f_raise, jm))
        + params.gprime * (np.kron(f_raise, jp) + np.kron(f_lower, jm))
    )
    return OperatorMatrix(h, Basis.PRODUCT_FIELD_MAJOR)


def restrict(h: OperatorMatrix, block: SymmetryBlock) -> OperatorMatrix:
    """Submatrix of h on the block's indices."""
    idx = np.asarray(block.indices, dtype=int)
    if idx.size and (idx.min() < 0 or idx.max() >= h.dim):
        raise ValueError("block index out of range")
    return OperatorMatrix(h.entries[np.ix_(idx, idx)], h.basis_tag)
