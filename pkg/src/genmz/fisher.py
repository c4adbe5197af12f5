"""Classical and quantum Fisher information for the d = 3, 4 schemes.

The classical matrix is

    F_ij(alpha) = sum_counts  mult(counts) * d_i p * d_j p / p

with ``p`` the per-sequence probability. It is evaluated through the
branch-phasor form ``p = |S|^2 / d^(N+1)``, ``S = sum_k exp(i phi_k)``, so
that each term becomes ``4 Re(conj(S) dS_i) Re(conj(S) dS_j) / |S|^2``.
That expression is bounded and numerically stable even for outcomes whose
probability is tiny.

At an exact zero of ``S`` the term is 0/0. If the derivatives ``dS_i``
are all parallel in the complex plane the limit is direction independent,
``4 r_i r_j`` with ``dS_i = r_i e^{i psi}``, and it is used. Otherwise the
Fisher matrix is genuinely discontinuous at that point and
``SingularSupportError`` is raised (batch routines flag the point).

All phases are 0-based labels: ``alpha[m]`` is the m-th phase. The full
matrix always has the uniform shift ``(1, ..., 1)`` as a null vector, so
only (d-1)-subsets with a known reference phase are estimable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .distribution import _check_closed_dim, branch_offsets, cosine_terms, count_table
from .errors import DomainError, SingularSupportError
from .interferometer import PhaseVector, _phases, rotated_eigenvalues

ZERO_AMPLITUDE = 1e-9
COLLINEAR_TOL = 1e-9
SINGULAR_CONDITION = 1e12
# complex work-array budget per chunk (points x outcomes)
WORK_BUDGET = 2_000_000


def probability_gradient(counts, alpha) -> np.ndarray:
    """Analytic partial derivatives of the closed-form per-sequence probability."""
    c = np.asarray(counts, dtype=np.int64)
    a = _phases(alpha)
    d = len(a)
    N = c.sum(axis=-1)
    grad = np.zeros(c.shape[:-1] + (d,))
    for x, u, v in cosine_terms(c, a):
        s = 2.0 * N * np.sin(x)
        grad[..., u] -= s
        grad[..., v] += s
    return grad / np.power(float(d), N + 1)[..., None]


def _fisher_chunk(d, N, alphas, params, offsets, weights):
    """Fisher matrices for a chunk of phase points.

    Returns ``(F, bad)`` with F of shape (P, k, k) over ``params`` and
    ``bad`` flagging points that hit a non-removable zero.
    """
    phi = N * alphas[:, None, :] + offsets[None, :, :]
    E = np.exp(1j * phi)  # (P, K, d)
    S = E.sum(axis=-1)  # (P, K)
    dS = 1j * N * E[..., params]  # (P, K, k)
    mod = np.abs(S)
    zero = mod <= ZERO_AMPLITUDE

    unit = np.where(zero, 1.0, S / np.where(zero, 1.0, mod))
    r = np.real(np.conj(unit)[..., None] * dS)  # Re(conj(S^) dS) = d|S|

    bad = np.zeros(len(alphas), dtype=bool)
    if np.any(zero):
        pz, kz = np.nonzero(zero)
        g = dS[pz, kz]  # (Z, k)
        lead = g[np.arange(len(g)), np.argmax(np.abs(g), axis=-1)]
        scale = np.abs(lead)
        phase = np.where(scale > 0, lead / np.where(scale > 0, scale, 1.0), 1.0)
        rot = g * np.conj(phase)[:, None]
        collinear = np.max(np.abs(rot.imag), axis=-1) <= COLLINEAR_TOL * np.maximum(scale, 1.0)
        r[pz, kz] = rot.real
        bad[np.unique(pz[~collinear])] = True

    # each term 4 (d|S|)^2 weighted by mult / d^(N+1)
    F = 4.0 * np.einsum("k,pki,pkj->pij", weights, r, r)
    return F, bad


def fisher_matrices(d: int, N: int, alphas, params: Sequence[int] | None = None):
    """Fisher matrices at many phase points at once.

    ``alphas`` has shape (P, d). Returns ``(F, bad)`` where F is
    (P, k, k) restricted to ``params`` (all d phases by default).
    """
    _check_closed_dim(d)
    if N < 1:
        raise DomainError("N must be at least 1")
    A = np.atleast_2d(np.asarray(alphas, dtype=float))
    if A.shape[1] != d:
        raise DomainError(f"expected phase points of length {d}, got {A.shape[1]}")
    params = list(range(d)) if params is None else list(params)
    C, W = count_table(d, N)
    offsets = branch_offsets(C)
    denom = d ** (N + 1)
    # exact integer weights meet floating point only here
    weights = np.array([w / denom for w in W])
    chunk = max(1, WORK_BUDGET // len(C))
    Fs, bads = [], []
    for start in range(0, len(A), chunk):
        F, bad = _fisher_chunk(d, N, A[start : start + chunk], params, offsets, weights)
        Fs.append(F)
        bads.append(bad)
    return np.concatenate(Fs), np.concatenate(bads)


def fim_full(d: int, N: int, alpha) -> np.ndarray:
    """Full d x d classical Fisher matrix (singular by construction)."""
    a = _phases(alpha)
    if len(a) != d:
        raise DomainError(f"{len(a)} phases given for d={d}")
    F, bad = fisher_matrices(d, N, a[None, :])
    if bad[0]:
        raise SingularSupportError(
            "a zero-probability outcome has a direction-dependent Fisher contribution here"
        )
    return F[0]


def invert_small(A) -> tuple[np.ndarray, np.ndarray]:
    """Adjugate inverse of a batch of 1x1, 2x2 or 3x3 matrices; returns (inverse, det)."""
    A = np.asarray(A, dtype=float)
    n = A.shape[-1]
    if n == 1:
        det = A[..., 0, 0]
        adj = np.ones_like(A)
    elif n == 2:
        det = A[..., 0, 0] * A[..., 1, 1] - A[..., 0, 1] * A[..., 1, 0]
        adj = np.empty_like(A)
        adj[..., 0, 0] = A[..., 1, 1]
        adj[..., 1, 1] = A[..., 0, 0]
        adj[..., 0, 1] = -A[..., 0, 1]
        adj[..., 1, 0] = -A[..., 1, 0]
    elif n == 3:
        r0, r1, r2 = A[..., 0, :], A[..., 1, :], A[..., 2, :]
        cols = np.stack([np.cross(r1, r2), np.cross(r2, r0), np.cross(r0, r1)], axis=-1)
        det = np.einsum("...i,...i->...", r0, cols[..., :, 0])
        adj = cols
    else:
        raise DomainError("invert_small handles sizes 1..3 only")
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = adj / det[..., None, None]
    return inv, det


def condition_numbers(F) -> np.ndarray:
    """Spectral condition number of symmetric matrices; inf when not positive definite."""
    ev = np.linalg.eigvalsh(np.asarray(F))
    lo, hi = ev[..., 0], np.abs(ev).max(axis=-1)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(lo > 0, hi / np.where(lo > 0, lo, 1.0), np.inf)


@dataclass(frozen=True)
class EstimationScenario:
    """Which phases are estimated and which one is the known reference."""

    d: int
    N: int
    phases: PhaseVector
    reference: int
    interest: tuple[int, ...] = field(default=())
    repetitions: int = 1

    def __post_init__(self):
        _check_closed_dim(self.d)
        if self.N < 1:
            raise DomainError("N must be at least 1")
        if self.phases.dim != self.d:
            raise DomainError(f"{self.phases.dim} phases given for d={self.d}")
        if not 0 <= self.reference < self.d:
            raise DomainError(f"reference index {self.reference} out of range")
        expected = tuple(m for m in range(self.d) if m != self.reference)
        if not self.interest:
            object.__setattr__(self, "interest", expected)
        elif tuple(sorted(self.interest)) != expected:
            raise DomainError("interest set must be every phase except the reference")

    @classmethod
    def create(cls, d: int, N: int, phases, reference: int | None = None) -> "EstimationScenario":
        return cls(d, N, PhaseVector(phases), d - 1 if reference is None else reference)


@dataclass
class FisherReport:
    scenario: EstimationScenario
    full_matrix: np.ndarray | None
    interest_submatrix: np.ndarray | None
    inverse_interest: np.ndarray | None
    trace_inverse: float | None
    condition_number: float
    singular: bool

    def to_dict(self) -> dict:
        s = self.scenario

        def mat(M):
            return None if M is None else [[float(x) for x in row] for row in M]

        return {
            "d": s.d,
            "N": s.N,
            "phases": list(s.phases.angles),
            "interest": list(s.interest),
            "reference": s.reference,
            "fim": mat(self.full_matrix),
            "fim_interest": mat(self.interest_submatrix),
            "inverse": mat(self.inverse_interest),
            "trace_inverse": self.trace_inverse,
            "condition": self.condition_number,
            "singular": self.singular,
        }


def fim_interest(scenario: EstimationScenario) -> FisherReport:
    """Fisher submatrix of the interest phases and the trace of its inverse.

    This is the Cramer-Rao quantity when the reference phase is known.
    Singularity is reported through ``singular``, never raised.
    """
    s = scenario
    a = s.phases.array()
    F_all, bad_all = fisher_matrices(s.d, s.N, a[None, :])
    full = None if bad_all[0] else F_all[0]
    F_sub, bad = fisher_matrices(s.d, s.N, a[None, :], params=s.interest)
    if bad[0]:
        return FisherReport(s, full, None, None, None, math.inf, True)
    block = F_sub[0]
    cond = float(condition_numbers(block))
    if not cond < SINGULAR_CONDITION:
        return FisherReport(s, full, block, None, None, cond, True)
    inv, _ = invert_small(block)
    return FisherReport(s, full, block, inv, float(np.trace(inv)), cond, False)


def interest_traces(d: int, N: int, alphas, reference: int | None = None):
    """Vectorised ``trace((F_II)^-1)`` over many phase points.

    Returns ``(trace, singular)``; singular points carry ``nan``.
    """
    ref = d - 1 if reference is None else reference
    params = [m for m in range(d) if m != ref]
    F, bad = fisher_matrices(d, N, alphas, params=params)
    cond = condition_numbers(F)
    singular = bad | ~(cond < SINGULAR_CONDITION)
    inv, _ = invert_small(F)
    with np.errstate(invalid="ignore"):
        tr = np.trace(inv, axis1=-2, axis2=-1)
    return np.where(singular, np.nan, tr), singular


@dataclass
class NuisanceReport:
    """Attempt at the block of the inverse full matrix (unknown reference)."""

    singular: bool
    condition_number: float
    null_direction: np.ndarray | None
    block: np.ndarray | None


def fim_nuisance_block(scenario: EstimationScenario) -> NuisanceReport:
    s = scenario
    try:
        F = fim_full(s.d, s.N, s.phases)
    except SingularSupportError:
        return NuisanceReport(True, math.inf, None, None)
    ev, V = np.linalg.eigh(F)
    cond = float(condition_numbers(F))
    if cond < SINGULAR_CONDITION:
        G = np.linalg.inv(F)
        idx = np.ix_(s.interest, s.interest)
        return NuisanceReport(False, cond, None, G[idx])
    v = V[:, 0]
    v = v * np.sign(v[np.argmax(np.abs(v))])
    return NuisanceReport(True, cond, v, None)


def qfim_optimal_state(d: int, N: int) -> np.ndarray:
    """QFIM ``4 (<H_m H_n> - <H_m><H_n>)`` on the optimal GHZ-type probe.

    After the preparation rotation each collective ``H_m`` is diagonal on
    the d GHZ components with eigenvalue ``N lam[m, j]``, and the probe
    weights the components uniformly.
    """
    _check_closed_dim(d)
    if N < 0:
        raise DomainError("N must be non-negative")
    ev = N * rotated_eigenvalues(d)  # (m, j)
    second = ev @ ev.T / d
    first = ev.mean(axis=1)
    return 4.0 * (second - np.outer(first, first))


def mean_qfi_bound_check(d: int, N: int) -> tuple[float, float, bool]:
    """``(1/d) tr F^Q <= (4/d) sum_m <H_m^2>``; returns (lhs, rhs, holds)."""
    Q = qfim_optimal_state(d, N)
    ev = N * rotated_eigenvalues(d)
    lhs = float(np.trace(Q)) / d
    rhs = 4.0 / d * float(np.sum(ev**2) / d)
    return lhs, rhs, lhs <= rhs + 1e-12 * max(1.0, abs(rhs))


def optimal_state_eigencheck(d: int, N: int) -> tuple[bool, float]:
    """Whether every GHZ component has the same ``sum_m H_m^2`` eigenvalue."""
    _check_closed_dim(d)
    ev = N * rotated_eigenvalues(d)
    per_component = np.sum(ev**2, axis=0)
    value = float(per_component[0])
    same = bool(np.all(np.abs(per_component - value) <= 1e-10 * max(1.0, abs(value))))
    return same, value


def quantum_interest_trace(d: int, N: int, reference: int | None = None) -> float:
    """Quantum Cramer-Rao value ``trace((Q_II)^-1)`` for the optimal probe.

    Lower-bounds the classical ``trace((F_II)^-1)`` of any measurement.
    """
    ref = d - 1 if reference is None else reference
    if not 0 <= ref < d:
        raise DomainError(f"reference index {ref} out of range")
    if N < 1:
        raise DomainError("N must be at least 1")
    keep = [m for m in range(d) if m != ref]
    Q = qfim_optimal_state(d, N)[np.ix_(keep, keep)]
    return float(np.trace(np.linalg.inv(Q)))
