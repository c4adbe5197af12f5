"""Fast invariant checks across every module, used by ``genmz selfcheck``.

Each check returns ``(ok, detail)``. Sizes are kept small so the whole
suite runs in a few seconds; the pytest suite covers the same ground
more exhaustively.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import distribution as dist
from . import fisher, hw, interferometer as ifm, metrology, multiport, numerics

Check = Callable[[], "tuple[bool, str]"]
_rng = lambda: np.random.default_rng(12345)  # noqa: E731


def _numerics() -> tuple[bool, str]:
    rng = _rng()
    worst = 0.0
    for d in range(2, 7):
        A = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        H = A + A.conj().T
        U = numerics.matrix_exponential(1j * H)
        w, V = numerics.hermitian_eigensystem(H)
        worst = max(
            worst,
            numerics.unitarity_residual(U),
            float(np.max(np.abs(U - (V * np.exp(1j * w)) @ V.conj().T))),
        )
    return worst <= 1e-10, f"max residual {worst:.2e}"


def _weyl() -> tuple[bool, str]:
    worst = 0.0
    for d in range(2, 7):
        X, Z = hw.weyl_operator("X", d), hw.weyl_operator("Z", d)
        worst = max(worst, float(np.max(np.abs(X @ Z - hw.omega(d) * Z @ X))))
        worst = max(worst, float(np.max(np.abs(hw.weyl_operator("X", d, d) - np.eye(d)))))
        worst = max(worst, float(np.max(np.abs(hw.weyl_operator("Z", d, d) - np.eye(d)))))
    return worst <= 1e-12, f"max residual {worst:.2e}"


def _multiports() -> tuple[bool, str]:
    worst_sym = worst_uni = 0.0
    for d in multiport.MULTIPORTS:
        S = multiport.symmetric_multiport(d)
        worst_sym = max(worst_sym, multiport.symmetry_residual(S))
        worst_uni = max(worst_uni, numerics.unitarity_residual(S))
    ok = worst_sym <= 1e-9 and worst_uni <= 1e-10
    return ok, f"symmetry {worst_sym:.2e}, unitarity {worst_uni:.2e}"


def _couplings() -> tuple[bool, str]:
    r5 = multiport.symmetric_form_check(multiport.pair_couplings(multiport.generator_hamiltonian(5)))
    r6 = multiport.symmetric_form_check(multiport.pair_couplings(multiport.generator_hamiltonian(6)))
    ok5 = r5.is_symmetric_form and all(
        math.isclose(phi, 0.0 if multiport.ring_distance(i, j, 5) == 1 else math.pi, abs_tol=1e-10)
        for (i, j), phi in r5.values.items()
    )
    want6 = {1: 1 / 3, 2: 1 / 9, 3: 1 / 12}
    ok6 = (not r6.is_symmetric_form) and all(
        math.isclose(v, want6[multiport.ring_distance(i, j, 6)], abs_tol=1e-12)
        for (i, j), v in r6.values.items()
    )
    return ok5 and ok6, f"H5 symmetric={r5.is_symmetric_form}, H6 symmetric={r6.is_symmetric_form}"


def _generators() -> tuple[bool, str]:
    rng = _rng()
    worst = 0.0
    for d in ifm.GENERATOR_DIMS:
        gens = ifm.phase_generators(d)
        pts = rng.uniform(0, 2 * math.pi, size=(20, d))
        worst = max(worst, ifm.generator_residual(gens, pts))
    return worst <= 1e-9, f"max exp-consistency distance {worst:.2e}"


def _spectra() -> tuple[bool, str]:
    want = {2: [0, 1], 3: [-1 / 3, -1 / 3, 2 / 3], 4: [-1 / 4, -1 / 4, -1 / 4, 3 / 4]}
    worst = 0.0
    for d, ev in want.items():
        for h in ifm.phase_generators(d).hamiltonians:
            w, _ = numerics.hermitian_eigensystem(h)
            worst = max(worst, float(np.max(np.abs(w - ev))))
    return worst <= 1e-10, f"max eigenvalue error {worst:.2e}"


def _stations() -> tuple[bool, str]:
    rng = _rng()
    worst = 0.0
    for d in ifm.PREPARATION_DIMS:
        for a in rng.uniform(0, 2 * math.pi, size=(20, d)):
            worst = max(
                worst, numerics.unitary_distance(ifm.station_matrix(a), ifm.station_matrix_closed(a))
            )
    return worst <= 1e-9, f"max distance {worst:.2e}"


def _distributions() -> tuple[bool, str]:
    rng = _rng()
    worst = worst_norm = 0.0
    for d in dist.CLOSED_DIMS:
        for N in range(1, 5):
            C, W = dist.count_table(d, N)
            for a in rng.uniform(0, 2 * math.pi, size=(5, d)):
                pc = dist.probability_closed(C, a)
                po = np.array([dist.probability_oracle(c, a) for c in C])
                worst = max(worst, float(np.max(np.abs(pc - po))))
                worst_norm = max(worst_norm, abs(math.fsum(w * p for w, p in zip(W, pc)) - 1.0))
    ok = worst <= 1e-10 and worst_norm <= 1e-9
    return ok, f"closed vs oracle {worst:.2e}, normalisation {worst_norm:.2e}"


def _fisher() -> tuple[bool, str]:
    rng = _rng()
    worst_null = 0.0
    min_eig = math.inf
    for d in dist.CLOSED_DIMS:
        for a in rng.uniform(0, 2 * math.pi, size=(10, d)):
            F = fisher.fim_full(d, 5, a)
            worst_null = max(worst_null, float(np.max(np.abs(F @ np.ones(d)))))
            min_eig = min(min_eig, float(np.linalg.eigvalsh(F)[0]))
    ok = worst_null <= 1e-8 and min_eig >= -1e-9
    return ok, f"|F 1| {worst_null:.2e}, min eigenvalue {min_eig:.2e}"


def _gradients() -> tuple[bool, str]:
    rng = _rng()
    worst = 0.0
    h = 1e-6
    for d in dist.CLOSED_DIMS:
        C, _ = dist.count_table(d, 4)
        for a in rng.uniform(0, 2 * math.pi, size=(5, d)):
            g = fisher.probability_gradient(C, a)
            for m in range(d):
                e = np.zeros(d)
                e[m] = h
                fd = (dist.probability_closed(C, a + e) - dist.probability_closed(C, a - e)) / (2 * h)
                worst = max(worst, float(np.max(np.abs(fd - g[:, m]))))
    return worst <= 1e-7, f"max |analytic - finite difference| {worst:.2e}"


def _qfim() -> tuple[bool, str]:
    N = 3
    Q3 = fisher.qfim_optimal_state(3, N)
    Q4 = fisher.qfim_optimal_state(4, N)
    want3 = N**2 * (np.full((3, 3), -4 / 9) + np.eye(3) * (12 / 9))
    ok = np.allclose(Q3, want3, atol=1e-10) and math.isclose(np.trace(Q4), 3 * N**2, rel_tol=1e-12)
    return bool(ok), f"tr Q3 = {np.trace(Q3):.6g}, tr Q4 = {np.trace(Q4):.6g}"


def _optimum() -> tuple[bool, str]:
    r3 = metrology.optimal_phase_search(3, 2)
    r4 = fisher.interest_traces(4, 2, np.zeros((1, 4)))[0][0]
    want3 = (6 + math.sqrt(3)) / 8
    ok = math.isclose(r3.trace_inverse, want3, rel_tol=1e-6) and math.isclose(r4, 1.5, rel_tol=1e-9)
    return ok, f"d=3 N=2 {r3.trace_inverse:.10g} (want {want3:.10g}); d=4 N=2 at 0: {r4:.10g}"


def _equal_phase() -> tuple[bool, str]:
    rng = _rng()
    worst = 0.0
    for d in dist.CLOSED_DIMS:
        for N in (1, 3):
            for x in rng.uniform(0.1, 2 * math.pi - 0.1, size=5):
                pt = np.full(d, x)
                pt[-1] = 0.0
                tr = fisher.interest_traces(d, N, pt[None, :])[0][0]
                ref = metrology.equal_phase_trace(d, N, x)
                worst = max(worst, abs(tr - ref) / abs(ref))
    return worst <= 1e-8, f"max relative mismatch {worst:.2e}"


CHECKS: list[tuple[str, Check]] = [
    ("numerics: exp(iH) unitary and equal to spectral form", _numerics),
    ("hw-algebra: XZ = wZX, X^d = Z^d = I", _weyl),
    ("multiport: S_2..S_6 symmetric and unitary", _multiports),
    ("multiport: H5 / H6 Jordan-Schwinger couplings", _couplings),
    ("interferometer: exp(i sum a h) reproduces U(a)", _generators),
    ("interferometer: generator spectra", _spectra),
    ("interferometer: station matrices match closed forms", _stations),
    ("distribution: closed form equals amplitude oracle", _distributions),
    ("fisher: F 1 = 0 and F positive semidefinite", _fisher),
    ("fisher: analytic gradients", _gradients),
    ("fisher: optimal-state QFIM", _qfim),
    ("metrology: optimum traces", _optimum),
    ("metrology: equal-phase closed forms", _equal_phase),
]


def run_all() -> list[tuple[str, bool, str]]:
    results = []
    for name, check in CHECKS:
        try:
            ok, detail = check()
        except Exception as exc:  # a crash is a failed check, reported not raised
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append((name, bool(ok), detail))
    return results
