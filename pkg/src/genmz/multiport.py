"""Symmetric d-mode multiports generated by polynomials in the shift operator.

Each multiport is ``S_d = exp(i pi * s * P(X))`` where ``P`` is a real
polynomial in the shift ``X`` with symmetric coefficients (so ``P(X)`` is
Hermitian) and ``s`` is a scalar prefactor. Coefficients are kept exact
(rationals, plus a square-root factor for d = 5) until evaluation.

Viewed through the Jordan-Schwinger map ``M -> sum_ij a_i^dag M_ij a_j``,
``P(X)`` becomes a quadratic mode-coupling Hamiltonian; ``pair_couplings``
reads the couplings off the matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import NotHermitianError, UnsupportedDimensionError
from .hw import weyl_operator
from .numerics import (
    DEFAULT_TOL,
    as_square,
    hermiticity_residual,
    matrix_exponential,
    unitarity_residual,
)

SYMMETRY_TOL = 1e-9
F = Fraction


@dataclass(frozen=True)
class MultiportSpec:
    """Exact description of a symmetric multiport generator.

    The generator is ``i * pi * prefactor * sqrt(surd) * sum_k c_k X^k``
    with ``coefficients = {k: c_k}``.
    """

    dim: int
    coefficients: dict[int, Fraction]
    prefactor: Fraction = Fraction(1)
    surd: int = 1

    def scale(self) -> float:
        return float(self.prefactor) * math.sqrt(self.surd)

    def generator_coefficients(self) -> list[tuple[int, float]]:
        """(power, c) pairs such that the generator is ``i * sum_k c X^k``."""
        s = math.pi * self.scale()
        return [(k, s * float(c)) for k, c in sorted(self.coefficients.items())]


MULTIPORTS: dict[int, MultiportSpec] = {
    2: MultiportSpec(2, {1: F(1)}, prefactor=F(1, 4)),
    3: MultiportSpec(3, {1: F(1), 2: F(1)}, prefactor=F(2, 9)),
    4: MultiportSpec(4, {1: F(1), 2: F(1), 3: F(1)}, prefactor=F(1, 4)),
    5: MultiportSpec(5, {1: F(1), 2: F(-1), 3: F(-1), 4: F(1)}, prefactor=F(4, 25), surd=5),
    6: MultiportSpec(6, {1: F(1, 3), 2: F(1, 9), 3: F(1, 12), 4: F(1, 9), 5: F(1, 3)}),
}


def multiport_spec(d: int) -> MultiportSpec:
    try:
        return MULTIPORTS[d]
    except KeyError:
        raise UnsupportedDimensionError(
            f"no symmetric multiport construction for d={d}; supported: {sorted(MULTIPORTS)}"
        ) from None


def generator_hamiltonian(d: int) -> np.ndarray:
    """The Hermitian polynomial ``P(X)``, i.e. the generator without ``i pi s``."""
    spec = multiport_spec(d)
    H = np.zeros((d, d), dtype=complex)
    for k, c in spec.coefficients.items():
        H += float(c) * weyl_operator("X", d, k)
    return H


def symmetric_multiport(d: int) -> np.ndarray:
    """The symmetric multiport ``S_d`` for d in 2..6."""
    spec = multiport_spec(d)
    G = np.zeros((d, d), dtype=complex)
    for k, c in spec.generator_coefficients():
        G += 1j * c * weyl_operator("X", d, k)
    return matrix_exponential(G)


def symmetry_residual(U) -> float:
    """max_jk | |U_jk|^2 - 1/d |; zero exactly for a symmetric multiport."""
    M = as_square(U)
    res = unitarity_residual(M)
    if res > SYMMETRY_TOL:
        raise NotHermitianError(f"input is not unitary (residual {res:.3g})")
    d = M.shape[0]
    return float(np.max(np.abs(np.abs(M) ** 2 - 1.0 / d)))


@dataclass
class CouplingTable:
    """Pair couplings of a Hermitian d x d matrix under the Jordan-Schwinger map.

    ``couplings`` holds ``(i, j, c_ij)`` with ``i < j`` for the term
    ``c_ij a_i^dag a_j + conj(c_ij) a_j^dag a_i``; ``diagonal`` holds
    ``(i, h_ii)``. Only nonzero entries are stored. Mode indices are 0-based.
    """

    dim: int
    couplings: list[tuple[int, int, complex]] = field(default_factory=list)
    diagonal: list[tuple[int, float]] = field(default_factory=list)

    def to_matrix(self) -> np.ndarray:
        H = np.zeros((self.dim, self.dim), dtype=complex)
        for i, j, c in self.couplings:
            H[i, j] = c
            H[j, i] = np.conj(c)
        for i, v in self.diagonal:
            H[i, i] = v
        return H


def pair_couplings(H, tol: float = DEFAULT_TOL) -> CouplingTable:
    M = as_square(H)
    if hermiticity_residual(M) > tol:
        raise NotHermitianError("pair_couplings needs a Hermitian matrix")
    d = M.shape[0]
    couplings = [
        (i, j, complex(M[i, j])) for i in range(d) for j in range(i + 1, d) if M[i, j] != 0
    ]
    diagonal = [(i, float(M[i, i].real)) for i in range(d) if M[i, i] != 0]
    return CouplingTable(d, couplings, diagonal)


@dataclass
class SymmetricFormReport:
    """Outcome of testing a table against ``sum_{i<j} e^{i phi_ij}(a_i^dag a_j + h.c.)``.

    When ``is_symmetric_form`` holds, ``values`` maps each pair to its phase
    in [0, 2 pi); otherwise it maps each pair to the coupling modulus.
    """

    is_symmetric_form: bool
    values: dict[tuple[int, int], float]


def symmetric_form_check(table: CouplingTable, tol: float = DEFAULT_TOL) -> SymmetricFormReport:
    unit = all(abs(abs(c) - 1.0) <= tol for _, _, c in table.couplings)
    zero_diag = all(abs(v) <= tol for _, v in table.diagonal)
    if unit and zero_diag:
        phases = {}
        for i, j, c in table.couplings:
            phi = math.atan2(c.imag, c.real) % (2 * math.pi)
            # 2 pi and 0 are the same coupling
            if abs(phi - 2 * math.pi) <= tol:
                phi = 0.0
            phases[(i, j)] = phi
        return SymmetricFormReport(True, phases)
    return SymmetricFormReport(False, {(i, j): abs(c) for i, j, c in table.couplings})


def ring_distance(i: int, j: int, d: int) -> int:
    k = (j - i) % d
    return min(k, d - k)
