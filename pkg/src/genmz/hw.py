"""Heisenberg-Weyl (generalised Pauli) operators for a d-level system.

    X = sum_i |i><i+1|      (indices mod d)
    Z = sum_i w^i |i><i|    w = exp(2 i pi / d)
    Y = X Z

``Y^k`` always means ``(XZ)^k``; for d > 2 that differs from ``X^k Z^k``
by powers of w.
"""

from __future__ import annotations

import cmath
import math
from enum import Enum

import numpy as np

from .errors import DomainError


class Kind(str, Enum):
    X = "X"
    Z = "Z"
    Y = "Y"


def _check_dim(d: int) -> None:
    if int(d) != d or d < 2:
        raise DomainError(f"qudit dimension must be an integer >= 2, got {d!r}")


def omega(d: int) -> complex:
    """Primitive d-th root of unity exp(2 i pi / d)."""
    _check_dim(d)
    # exact values where cheap, so that omega(4) == 1j holds bit-for-bit
    exact = {2: -1.0 + 0j, 4: 1j}
    if d in exact:
        return exact[d]
    return cmath.exp(2j * math.pi / d)


def shift(d: int) -> np.ndarray:
    _check_dim(d)
    X = np.zeros((d, d), dtype=complex)
    for i in range(d):
        X[i, (i + 1) % d] = 1.0
    return X


def clock(d: int) -> np.ndarray:
    _check_dim(d)
    # w^i via exact angles keeps Z^d == I to rounding
    return np.diag([cmath.exp(2j * math.pi * i / d) for i in range(d)]).astype(complex)


def weyl_operator(kind: Kind | str, d: int, power: int = 1) -> np.ndarray:
    """Matrix of ``kind**power`` in the computational basis."""
    _check_dim(d)
    if int(power) != power or power < 0:
        raise DomainError(f"power must be a non-negative integer, got {power!r}")
    kind = Kind(kind)
    if kind is Kind.X:
        base = shift(d)
    elif kind is Kind.Z:
        base = clock(d)
    else:
        base = shift(d) @ clock(d)
    return np.linalg.matrix_power(base, int(power))
