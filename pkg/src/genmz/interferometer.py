"""Generalised Mach-Zehnder interferometer built from two symmetric multiports.

The interferometer on d modes is ``U(alpha) = S_d F(alpha) S_d^dag``, where
``F`` is a diagonal layer of single-mode phase shifts. The phase labelled
``alpha[m]`` (0-based here; ``alpha_{m+1}`` in the usual notation) sits on
mode ``PHASE_MODE[d][m]``. For d = 4 the Heisenberg-Weyl form of the phase
layer, ``exp(i alpha . z)`` with ``z = (1/4) K (1, Z, Z^2, Z^3)``, places
label m on mode ``-m mod 4``; that assignment is the one under which the
station matrix and the outcome distributions take their closed forms, so
it is adopted here. Every other d uses the identity assignment.

Generators ``h_m`` satisfy ``U(alpha) = exp(i sum_m alpha_m h_m)`` up to a
global phase. After the preparation unitary ``U_d`` (d = 3, 4) every
``h_m`` is diagonal, which is what lets the collective Hamiltonians be
handled through d numbers each instead of d^N x d^N matrices.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import ConsistencyError, DomainError, UnsupportedDimensionError
from .hw import omega, weyl_operator
from .multiport import MULTIPORTS, symmetric_multiport
from .numerics import (
    dagger,
    hermitian_part,
    hermiticity_residual,
    matrix_exponential,
    unitary_distance,
)

TWO_PI = 2.0 * math.pi

PHASE_MODE: dict[int, tuple[int, ...]] = {d: tuple(range(d)) for d in MULTIPORTS}
PHASE_MODE[4] = (0, 3, 2, 1)

GENERATOR_DIMS = (2, 3, 4)
PREPARATION_DIMS = (3, 4)


@dataclass(frozen=True)
class PhaseVector:
    """d phase shifts in radians, stored wrapped to [0, 2 pi)."""

    angles: tuple[float, ...]

    def __init__(self, angles: Iterable[float]):
        wrapped = tuple(float(a) % TWO_PI for a in angles)
        if len(wrapped) < 2:
            raise DomainError("a phase vector needs at least two angles")
        if not all(math.isfinite(a) for a in wrapped):
            raise DomainError("phase angles must be finite")
        object.__setattr__(self, "angles", wrapped)

    @property
    def dim(self) -> int:
        return len(self.angles)

    def array(self) -> np.ndarray:
        return np.array(self.angles)

    def __len__(self) -> int:
        return len(self.angles)

    def __iter__(self):
        return iter(self.angles)

    def __getitem__(self, m):
        return self.angles[m]


def _phases(alpha) -> np.ndarray:
    if isinstance(alpha, PhaseVector):
        return alpha.array()
    a = np.asarray(alpha, dtype=float)
    if a.ndim != 1 or len(a) < 2:
        raise DomainError(f"expected a 1-d vector of at least two phases, got shape {a.shape}")
    return a


def _mode_map(d: int) -> tuple[int, ...]:
    try:
        return PHASE_MODE[d]
    except KeyError:
        raise UnsupportedDimensionError(f"no interferometer for d={d}") from None


def phase_layer(alpha) -> np.ndarray:
    """Diagonal phase-shift layer with ``alpha[m]`` on mode ``PHASE_MODE[d][m]``."""
    a = _phases(alpha)
    d = len(a)
    modes = _mode_map(d)
    diag = np.empty(d, dtype=complex)
    for m, mode in enumerate(modes):
        diag[mode] = cmath.exp(1j * a[m])
    return np.diag(diag)


def phase_layer_weyl(alpha) -> np.ndarray:
    """The same phase layer written through clock operators (d = 2, 3, 4).

    d = 2: exp[(1+Z)/2 i a_1 + (1-Z)/2 i a_2].
    d = 3: exp[(i/3)(a_1 (Z+Z^2) + a_2 (w^2 Z + w Z^2) + a_3 (w Z + w^2 Z^2))].
    d = 4: exp[i sum_m a_m z_m], z = (1/4) K (1, Z, Z^2, Z^3), K_mn = w^(mn).
    The result equals ``phase_layer`` up to a global phase.
    """
    a = _phases(alpha)
    d = len(a)
    I = np.eye(d, dtype=complex)
    Z = [weyl_operator("Z", d, k) for k in range(d)]
    w = omega(d)
    if d == 2:
        G = 0.5 * (I + Z[1]) * a[0] + 0.5 * (I - Z[1]) * a[1]
    elif d == 3:
        G = (
            a[0] * (Z[1] + Z[2])
            + a[1] * (w**2 * Z[1] + w * Z[2])
            + a[2] * (w * Z[1] + w**2 * Z[2])
        ) / 3.0
    elif d == 4:
        G = np.zeros((4, 4), dtype=complex)
        for m in range(4):
            z_m = sum(w ** (m * n) * Z[n] for n in range(4)) / 4.0
            G += a[m] * z_m
    else:
        raise UnsupportedDimensionError(f"no Weyl-basis phase layer for d={d}")
    return matrix_exponential(1j * G)


def mz_unitary(alpha) -> np.ndarray:
    """``S_d F(alpha) S_d^dag`` for d in 2..6."""
    a = _phases(alpha)
    S = symmetric_multiport(len(a))
    return S @ phase_layer(a) @ dagger(S)


@dataclass
class GeneratorSet:
    """Hermitian generators of the interferometer, one per phase label.

    ``source`` records how the set was obtained: ``"weyl"`` for the closed
    Heisenberg-Weyl formulas, ``"constructive"`` for
    ``S_d (P_mode - I/d) S_d^dag``.
    """

    dim: int
    hamiltonians: list[np.ndarray]
    source: str

    def generate(self, alpha) -> np.ndarray:
        a = _phases(alpha)
        G = sum(a_m * h for a_m, h in zip(a, self.hamiltonians))
        return matrix_exponential(1j * G)


def _weyl_generators(d: int) -> list[np.ndarray]:
    I = np.eye(d, dtype=complex)
    w = omega(d)
    Y = [weyl_operator("Y", d, k) for k in range(d)]
    if d == 2:
        # XZ is anti-Hermitian for d = 2; the Hermitian Pauli-y is i XZ
        Yh = 1j * Y[1]
        return [0.5 * (I + Yh), 0.5 * (I - Yh)]
    if d == 3:
        return [
            (w * Y[1] + w**2 * Y[2]) / 3.0,
            (Y[1] + Y[2]) / 3.0,
            (w**2 * Y[1] + w * Y[2]) / 3.0,
        ]
    # d == 4; "Re" is the Hermitian part, "*" entrywise conjugation
    Y1, Y2, Y3 = Y[1], Y[2], Y[3]
    re1, re3 = hermitian_part(Y1), hermitian_part(Y3)
    eta = cmath.sqrt(2 / w)
    theta = cmath.sqrt(2 * w)
    mu = 2 * w * (1 - 1j / cmath.sqrt(2 * w))
    nu = 2 * w * (1 - 1 / cmath.sqrt(2 * w))
    return [
        w / 4 * (Y1 - Y2 + Y3 - eta * re1 - theta * re3),
        w / 4 * (-Y1 + Y2 - Y3 + eta * re1 + eta * re3),
        w / 4 * (dagger(Y1) + np.conj(Y3) - Y2 - mu * re1 + nu * re3),
        w / 4 * (Y1 + Y3 - np.conj(Y2) - mu * re1 + nu * re3),
    ]


def _constructive_generators(d: int) -> list[np.ndarray]:
    S = symmetric_multiport(d)
    hs = []
    for mode in _mode_map(d):
        P = np.zeros((d, d), dtype=complex)
        P[mode, mode] = 1.0
        hs.append(S @ (P - np.eye(d) / d) @ dagger(S))
    return hs


# fixed probe phases for the exp-consistency test of a candidate generator set
_PROBES = np.random.default_rng(20211).uniform(0.0, TWO_PI, size=(8, 6))


def generator_residual(gens: GeneratorSet, probes: np.ndarray | None = None) -> float:
    """Worst ``unitary_distance(mz_unitary(a), exp(i sum a_m h_m))`` over probe points."""
    d = gens.dim
    pts = _PROBES[:, :d] if probes is None else np.asarray(probes)
    if any(hermiticity_residual(h) > 1e-10 for h in gens.hamiltonians):
        return math.inf
    return max(unitary_distance(mz_unitary(a), gens.generate(a)) for a in pts)


def phase_generators(d: int) -> GeneratorSet:
    """Generators ``h_m`` for d in {2, 3, 4}.

    The Heisenberg-Weyl formulas are tried first; if they are not
    Hermitian or fail to reproduce the interferometer, the constructive
    set is returned instead.
    """
    if d not in GENERATOR_DIMS:
        raise UnsupportedDimensionError(f"generators are only available for d in {GENERATOR_DIMS}")
    candidate = GeneratorSet(d, _weyl_generators(d), "weyl")
    if generator_residual(candidate) <= 1e-9:
        return candidate
    fallback = GeneratorSet(d, _constructive_generators(d), "constructive")
    if generator_residual(fallback) > 1e-9:
        raise ConsistencyError(f"constructive generators for d={d} do not reproduce the interferometer")
    return fallback


def preparation_unitary(d: int) -> np.ndarray:
    """State-preparation multiport ``U_d`` applied to each GHZ party."""
    if d == 3:
        w = omega(3)
        return np.array([[1, 1, 1], [w**2, 1, w], [1, w**2, w]], dtype=complex) / math.sqrt(3)
    if d == 4:
        return np.array(
            [[-1, -1, 1, 1], [1, -1, 1, -1], [1, -1, -1, 1], [1, 1, 1, 1]], dtype=complex
        ) / 2.0
    raise UnsupportedDimensionError(f"preparation unitary only for d in {PREPARATION_DIMS}")


def station_matrix(alpha) -> np.ndarray:
    """Per-station single-photon evolution ``U(alpha) U_d``."""
    a = _phases(alpha)
    return mz_unitary(a) @ preparation_unitary(len(a))


def station_matrix_closed(alpha) -> np.ndarray:
    """Explicit entrywise form of the station matrix (d = 3, 4).

    Includes the displayed prefactor ``exp(-i sum(alpha) / d)``; it differs
    from ``station_matrix`` by the global phase ``exp(i sum(alpha) / d)``.
    """
    a = _phases(alpha)
    d = len(a)
    e = np.exp(1j * a)
    if d == 3:
        w = omega(3)
        M = np.array(
            [
                [e[1], e[2], e[0]],
                [w**2 * e[1], e[2], w * e[0]],
                [e[1], w**2 * e[2], w * e[0]],
            ]
        ) / math.sqrt(3)
    elif d == 4:
        M = np.array(
            [
                [-e[0], -e[1], e[2], e[3]],
                [e[0], -e[1], e[2], -e[3]],
                [e[0], -e[1], -e[2], e[3]],
                [e[0], e[1], e[2], e[3]],
            ]
        ) / 2.0
    else:
        raise UnsupportedDimensionError(f"station matrix only for d in {PREPARATION_DIMS}")
    return M * cmath.exp(-1j * a.sum() / d)


def rotated_eigenvalues(d: int) -> np.ndarray:
    """``lam[m, j]``: j-th diagonal entry of ``U_d^dag h_m U_d``."""
    return _rotated_eigenvalues(d).copy()


@functools.lru_cache(maxsize=None)
def _rotated_eigenvalues(d: int) -> np.ndarray:
    U = preparation_unitary(d)
    lam = np.empty((d, d))
    for m, h in enumerate(phase_generators(d).hamiltonians):
        D = dagger(U) @ h @ U
        off = D - np.diag(np.diag(D))
        if np.max(np.abs(off)) > 1e-10:
            raise ConsistencyError(f"U_{d} does not diagonalise h_{m + 1}")
        lam[m] = np.diag(D).real
    return lam


def collective_eigenvalue(d: int, m: int, j: int, N: int) -> float:
    """Eigenvalue of the collective ``H_m = sum_k h_m^(k)`` on ``U_d^{(x)N}|j...j>``."""
    if d not in PREPARATION_DIMS:
        raise UnsupportedDimensionError(f"collective eigenvalues only for d in {PREPARATION_DIMS}")
    if not (0 <= m < d and 0 <= j < d):
        raise DomainError(f"indices out of range for d={d}: m={m}, j={j}")
    if N < 0:
        raise DomainError("N must be non-negative")
    return N * float(_rotated_eigenvalues(d)[m, j])
