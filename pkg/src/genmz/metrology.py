"""Precision analysis: closed forms, optimum search, sweeps, landscape, Monte Carlo.

Throughout, the last phase is the reference and is held at zero; the
quantity of interest is ``trace((F_II)^-1)`` from ``fisher.interest_traces``.
That quantity is periodic with period 2 pi / N in every phase, so searches
run over the fundamental cell ``[0, 2 pi / N)^(d-1)``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .distribution import _check_closed_dim
from .errors import DomainError, PoleError
from .fisher import interest_traces
from .interferometer import PhaseVector

POLE_TOL = 1e-12
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
MC_CHUNK = 8192


def worker_count() -> int:
    """Thread cap from ``GENMZ_THREADS`` (0 or unset means one per CPU)."""
    raw = os.environ.get("GENMZ_THREADS", "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"GENMZ_THREADS must be an integer, got {raw!r}") from None
    if n < 0:
        raise DomainError("GENMZ_THREADS must be >= 0")
    return n or (os.cpu_count() or 1)


def _ordered_map(fn, items):
    items = list(items)
    n = min(worker_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def equal_phase_trace(d: int, N: int, alpha: float) -> float:
    """Closed form of ``trace((F_II)^-1)`` when every estimated phase equals ``alpha``.

    d = 3: (3 + cos(N a) - cos(2 N a)) csc^2(N a) / N^2
    d = 4: (3 / (2 N^2)) (3 + cos(N a)) sec^2(N a / 2)
    """
    _check_closed_dim(d)
    if N < 1:
        raise DomainError("N must be at least 1")
    x = N * alpha
    if d == 3:
        s = math.sin(x)
        if abs(s) < POLE_TOL:
            raise PoleError(f"csc(N alpha) diverges at alpha={alpha!r}")
        return (3 + math.cos(x) - math.cos(2 * x)) / (s * s) / N**2
    c = math.cos(x / 2)
    if abs(c) < POLE_TOL:
        raise PoleError(f"sec(N alpha / 2) diverges at alpha={alpha!r}")
    return 1.5 / N**2 * (3 + math.cos(x)) / (c * c)


def _full_point(x, d: int) -> np.ndarray:
    a = np.zeros(d)
    a[: d - 1] = x
    return a


def trace_at(d: int, N: int, estimated) -> float:
    """``trace((F_II)^-1)`` with reference phase 0; ``inf`` where singular."""
    pts = np.atleast_2d(np.asarray(estimated, dtype=float))
    full = np.zeros((len(pts), d))
    full[:, : d - 1] = pts
    tr, sing = interest_traces(d, N, full)
    out = np.where(sing, np.inf, tr)
    return float(out[0]) if np.ndim(estimated) == 1 else out


def _golden_section(f, lo: float, hi: float, iters: int):
    a, b = lo, hi
    c = b - GOLDEN * (b - a)
    e = a + GOLDEN * (b - a)
    fc, fe = f(c), f(e)
    for _ in range(iters):
        if fc <= fe:
            b, e, fe = e, c, fc
            c = b - GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, e, fe
            e = a + GOLDEN * (b - a)
            fe = f(e)
    return (c, fc) if fc <= fe else (e, fe)


@dataclass
class SearchResult:
    phases: PhaseVector
    trace_inverse: float
    grid_best: float
    evaluations: int


def optimal_phase_search(
    d: int,
    N: int,
    grid_resolution: int | None = None,
    refine_iters: int = 40,
    line_iters: int = 60,
) -> SearchResult:
    """Grid search over the fundamental cell, then coordinate descent.

    Each refinement round runs a golden-section line search along every
    coordinate in a window of half-width ``h`` around the current point;
    ``h`` starts at the grid spacing and halves after a round without
    improvement. Only improving moves are accepted, so the result is never
    worse than the best grid point. Fully deterministic.
    """
    _check_closed_dim(d)
    if N < 1:
        raise DomainError("N must be at least 1")
    k = d - 1
    if grid_resolution is None:
        grid_resolution = 48 if d == 3 else 12
    period = 2 * math.pi / N
    axis = np.arange(grid_resolution) * (period / grid_resolution)
    grid = np.stack(np.meshgrid(*([axis] * k), indexing="ij"), axis=-1).reshape(-1, k)
    values = trace_at(d, N, grid)
    evaluations = len(grid)
    i0 = int(np.argmin(values))
    x = grid[i0].copy()
    fx = float(values[i0])
    grid_best = fx

    h = period / grid_resolution
    for _ in range(refine_iters):
        improved = False
        for i in range(k):

            def along(t, i=i):
                y = x.copy()
                y[i] = t
                return trace_at(d, N, y)

            t, ft = _golden_section(along, x[i] - h, x[i] + h, line_iters)
            evaluations += line_iters + 2
            if ft < fx:
                if fx - ft > 1e-15 * abs(fx):
                    improved = True
                x[i], fx = t, ft
        if not improved:
            h *= 0.5
            if h < 1e-12 * period:
                break
    x = np.mod(x, period)
    return SearchResult(PhaseVector(_full_point(x, d)), fx, grid_best, evaluations)


@dataclass
class ScalingRow:
    N: int
    trace_inverse: float
    scaled: float
    phases_at_optimum: PhaseVector


def scaling_sweep(d: int, N_list, **search_kw) -> list[ScalingRow]:
    """Optimum ``trace((F_II)^-1)`` and ``N^2`` times it for each N."""
    _check_closed_dim(d)

    def one(N):
        r = optimal_phase_search(d, int(N), **search_kw)
        return ScalingRow(int(N), r.trace_inverse, N * N * r.trace_inverse, r.phases)

    return _ordered_map(one, N_list)


@dataclass
class LandscapeGrid:
    """Trace values over ``(alpha_1, alpha_2) = (2 pi i / R, 2 pi j / R)`` for d = 3."""

    N: int
    resolution: int
    axis: np.ndarray
    values: np.ndarray  # nan on singular cells
    singular: np.ndarray

    def argmin(self) -> tuple[int, int]:
        flat = np.where(self.singular, np.inf, self.values)
        i, j = np.unravel_index(int(np.argmin(flat)), flat.shape)
        return int(i), int(j)

    def minimum(self) -> float:
        return float(np.nanmin(self.values))

    def rows(self):
        for i, a1 in enumerate(self.axis):
            for j, a2 in enumerate(self.axis):
                yield float(a1), float(a2), float(self.values[i, j]), bool(self.singular[i, j])


def landscape_grid(N: int, resolution: int) -> LandscapeGrid:
    if N < 1 or resolution < 1:
        raise DomainError("N and resolution must be positive")
    axis = np.arange(resolution) * (2 * math.pi / resolution)
    A1, A2 = np.meshgrid(axis, axis, indexing="ij")
    pts = np.stack([A1.ravel(), A2.ravel(), np.zeros(A1.size)], axis=-1)
    blocks = np.array_split(pts, max(1, len(pts) // MC_CHUNK))
    parts = _ordered_map(lambda b: interest_traces(3, N, b), blocks)
    tr = np.concatenate([p[0] for p in parts]).reshape(resolution, resolution)
    sing = np.concatenate([p[1] for p in parts]).reshape(resolution, resolution)
    return LandscapeGrid(N, resolution, axis, tr, sing)


@dataclass
class MonteCarloResult:
    N: int
    samples: int
    seed: int
    excluded: int
    median: float


def _draw_chunk(seed: int, index: int, size: int) -> np.ndarray:
    # one independent Philox stream per chunk index
    bitgen = np.random.Philox(np.random.SeedSequence([seed, index]))
    return np.random.Generator(bitgen).uniform(0.0, 2 * math.pi, size=(size, 2))


def monte_carlo_median(N: int, samples: int, seed: int = 0) -> MonteCarloResult:
    """Median of ``trace((F_II)^-1)`` for uniformly drawn (alpha_1, alpha_2), d = 3.

    Draws are generated in fixed-size chunks, each from its own stream
    keyed by ``(seed, chunk index)``, so the result does not depend on how
    chunks are scheduled. Singular draws are dropped and counted.
    """
    if samples < 1:
        raise DomainError("samples must be at least 1")
    if N < 1:
        raise DomainError("N must be at least 1")
    sizes = [min(MC_CHUNK, samples - s) for s in range(0, samples, MC_CHUNK)]

    def work(item):
        idx, size = item
        ab = _draw_chunk(seed, idx, size)
        pts = np.concatenate([ab, np.zeros((size, 1))], axis=1)
        return interest_traces(3, N, pts)

    parts = _ordered_map(work, list(enumerate(sizes)))
    tr = np.concatenate([p[0] for p in parts])
    sing = np.concatenate([p[1] for p in parts])
    kept = np.sort(tr[~sing])
    median = float(np.median(kept)) if len(kept) else math.nan
    return MonteCarloResult(N, samples, seed, int(sing.sum()), median)
