"""Exact N-photon outcome distributions for the d = 3 and d = 4 schemes.

An outcome is a count vector ``(c_0, ..., c_{d-1})``: how many of the N
stations (or, in the single-interferometer reading with a NOON input, how
many photons) registered a click in each local mode. Every individual
click sequence with the same counts has the same probability, so tables
carry a per-sequence probability and the multinomial multiplicity.

Two independent routes compute the per-sequence probability:

* ``probability_closed`` evaluates the cosine closed forms;
* ``probability_oracle`` multiplies station-matrix amplitudes directly,
  ``(1/d) |sum_j prod_i M[i, j]^{c_i}|^2``.

Both closed forms are the expansion of ``|sum_k exp(i phi_k)|^2 / d^(N+1)``
for branch phases ``phi_k = N alpha_k + (count-dependent offset)``;
``branch_phases`` exposes that representation, which the Fisher module
uses because it stays accurate near zero-probability outcomes.
"""

from __future__ import annotations

import csv
import functools
import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConsistencyError, DomainError, UnsupportedDimensionError
from .interferometer import PhaseVector, _phases, station_matrix

CLOSED_DIMS = (3, 4)
NEGATIVE_TOL = 1e-12


def _check_closed_dim(d: int) -> None:
    if d not in CLOSED_DIMS:
        raise UnsupportedDimensionError(f"closed-form distributions exist only for d in {CLOSED_DIMS}")


def _compositions(N: int, d: int):
    if d == 1:
        yield (N,)
        return
    for first in range(N, -1, -1):
        for rest in _compositions(N - first, d - 1):
            yield (first,) + rest


def enumerate_counts(d: int, N: int) -> list[tuple[int, ...]]:
    """All count vectors of N clicks over d modes, first entry descending."""
    if d < 2:
        raise DomainError("d must be at least 2")
    if N < 0:
        raise DomainError("N must be non-negative")
    return list(_compositions(N, d))


@functools.lru_cache(maxsize=64)
def count_table(d: int, N: int) -> tuple[np.ndarray, tuple[int, ...]]:
    """Counts as an (K, d) int array plus exact multiplicities, in enumeration order."""
    counts = enumerate_counts(d, N)
    arr = np.array(counts, dtype=np.int64).reshape(len(counts), d)
    arr.setflags(write=False)
    return arr, tuple(multinomial(N, c) for c in counts)


def multinomial(N: int, counts: Sequence[int]) -> int:
    """Exact multinomial coefficient N! / prod(c_i!)."""
    if any(c < 0 for c in counts) or sum(counts) != N:
        raise DomainError(f"counts {tuple(counts)} do not sum to N={N}")
    out, left = 1, N
    for c in counts:
        out *= math.comb(left, c)
        left -= c
    return out


def _check_counts(counts, alpha) -> tuple[np.ndarray, np.ndarray]:
    c = np.asarray(counts, dtype=np.int64)
    a = _phases(alpha)
    if c.shape[-1] != len(a):
        raise DomainError(f"count vector of length {c.shape[-1]} for {len(a)} phases")
    if np.any(c < 0):
        raise DomainError("counts must be non-negative")
    _check_closed_dim(len(a))
    return c, a


def branch_offsets(counts) -> np.ndarray:
    """Count-dependent offsets of the branch phases, shape (..., d), in [0, 2 pi)."""
    c = np.asarray(counts, dtype=np.int64)
    d = c.shape[-1]
    _check_closed_dim(d)
    off = np.zeros(c.shape, dtype=float)
    if d == 3:
        j, dd = c[..., 1], c[..., 2]
        off[..., 1] = (2 * math.pi / 3) * ((j - dd) % 3)
        off[..., 2] = (2 * math.pi / 3) * ((dd - j) % 3)
    else:
        z, j, dd, t = c[..., 0], c[..., 1], c[..., 2], c[..., 3]
        off[..., 1] = math.pi * ((dd + j) % 2)
        off[..., 2] = math.pi * ((dd - z) % 2)
        off[..., 3] = math.pi * ((j - z) % 2)
    return off


def branch_phases(counts, alpha) -> np.ndarray:
    """``phi_k = N alpha_k + offset_k`` so that ``p = |sum_k e^{i phi_k}|^2 / d^(N+1)``."""
    c, a = _check_counts(counts, alpha)
    N = c.sum(axis=-1, keepdims=True)
    return N * a + branch_offsets(c)


def cosine_terms(counts, alpha) -> list[tuple[np.ndarray, int, int]]:
    """Terms ``(x, u, v)`` of the closed form ``d + sum 2 cos(x)``.

    Each argument is ``x = offset(counts) + N (alpha_u - alpha_v)``, which
    is all the gradient needs.
    """
    c, a = _check_counts(counts, alpha)
    N = c.sum(axis=-1)
    # integer parts are reduced mod 3 (mod 2) first; cos only sees them mod 2 pi
    if len(a) == 3:
        j, dd = c[..., 1], c[..., 2]
        t = 2 * math.pi / 3
        spec = [
            (t * ((dd - j) % 3), 0, 1),
            (t * ((j - dd) % 3), 0, 2),
            (2 * t * ((j - dd) % 3), 1, 2),
        ]
    else:
        z, j, dd = c[..., 0], c[..., 1], c[..., 2]
        pi = math.pi
        spec = [
            (pi * ((dd + j) % 2), 1, 0),
            (pi * ((dd - z) % 2), 2, 0),
            (pi * ((j - z) % 2), 3, 0),
            (pi * ((j + z) % 2), 1, 2),
            (pi * ((dd + z) % 2), 1, 3),
            (pi * ((dd - j) % 2), 2, 3),
        ]
    return [(off + N * (a[u] - a[v]), u, v) for off, u, v in spec]


def _cosine_bracket(c: np.ndarray, a: np.ndarray) -> np.ndarray:
    """``d^(N+1) p`` as the cosine sum."""
    out = float(len(a))
    for x, _, _ in cosine_terms(c, a):
        out = out + 2 * np.cos(x)
    return out


def probability_closed(counts, alpha) -> float | np.ndarray:
    """Per-sequence probability from the cosine closed form.

    ``counts`` may be a single vector or an (K, d) array. Rounding
    negatives down to -1e-12 are clamped to zero; anything more negative
    means the formula was mis-evaluated and raises ``ConsistencyError``.
    """
    c, a = _check_counts(counts, alpha)
    d = len(a)
    N = c.sum(axis=-1)
    p = _cosine_bracket(c, a) / np.power(float(d), N + 1)
    if np.any(p < -NEGATIVE_TOL):
        raise ConsistencyError(f"closed-form probability is negative ({np.min(p):.3g})")
    p = np.clip(p, 0.0, 1.0)
    return float(p) if np.ndim(p) == 0 else p


def probability_oracle(counts, alpha) -> float:
    """Per-sequence probability by direct amplitude products on the station matrix."""
    c, a = _check_counts(counts, alpha)
    if c.ndim != 1:
        raise DomainError("the oracle evaluates one count vector at a time")
    M = station_matrix(a)
    d = len(a)
    amp = 0j
    for j in range(d):
        term = 1.0 + 0j
        for i in range(d):
            term *= M[i, j] ** int(c[i])
        amp += term
    return abs(amp) ** 2 / d


def probability_sequence(sequence: Sequence[int], alpha) -> float:
    """Oracle probability of one ordered click sequence ``(i_1, ..., i_N)``."""
    a = _phases(alpha)
    d = len(a)
    _check_closed_dim(d)
    M = station_matrix(a)
    amp = sum(np.prod([M[i, j] for i in sequence]) for j in range(d))
    return abs(amp) ** 2 / d


@dataclass(frozen=True)
class OutcomeRow:
    counts: tuple[int, ...]
    multiplicity: int
    p_sequence: float
    p_total: float


@dataclass
class OutcomeDistribution:
    d: int
    N: int
    phases: PhaseVector
    rows: list[OutcomeRow]

    def total(self) -> float:
        return math.fsum(r.p_total for r in self.rows)

    def to_csv(self, fmt=lambda x: format(x, ".17g")) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"c{i}" for i in range(self.d)] + ["multiplicity", "p_sequence", "p_total"])
        for r in self.rows:
            w.writerow([*r.counts, r.multiplicity, fmt(r.p_sequence), fmt(r.p_total)])
        return buf.getvalue()


def distribution_table(d: int, N: int, alpha) -> OutcomeDistribution:
    """Full outcome table in enumeration order; rows sum to one."""
    _check_closed_dim(d)
    if N < 1:
        raise DomainError("N must be at least 1")
    a = _phases(alpha)
    if len(a) != d:
        raise DomainError(f"{len(a)} phases given for d={d}")
    C, W = count_table(d, N)
    p = probability_closed(C, a)
    rows = [
        OutcomeRow(tuple(int(x) for x in c), w, float(pk), float(w * pk))
        for c, w, pk in zip(C, W, p)
    ]
    dist = OutcomeDistribution(d, N, PhaseVector(a), rows)
    if abs(dist.total() - 1.0) > 1e-9:
        raise ConsistencyError(f"distribution not normalised (sum {dist.total():.12g})")
    return dist
