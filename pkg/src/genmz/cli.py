"""Command-line front end: ``genmz <command> [options]``.

Data goes to stdout (or ``--out FILE``), diagnostics to stderr. Floats are
written with 17 significant digits so identical invocations give
byte-identical output.

Label conventions follow the physics: phases and the reference are
numbered 1..d (alpha_1 .. alpha_d), Jordan-Schwinger modes 1..d
(a_1 .. a_d), while count vectors index detector modes 0..d-1.

Exit codes: 0 success, 2 usage or domain error, 3 numerical-consistency
failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from typing import Sequence

import numpy as np

from . import distribution as dist
from . import fisher, interferometer as ifm, metrology, multiport, numerics, selfcheck
from .errors import ConsistencyError, DomainError, GenMZError, NotHermitianError, SingularSupportError

EXIT_OK, EXIT_USAGE, EXIT_CONSISTENCY = 0, 2, 3
MAX_N = 4096


def fmt(x) -> str:
    return format(float(x), ".17g")


def _json_value(v, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if v is None:
        return "null"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        x = float(v)
        if math.isnan(x):
            return "NaN"
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return fmt(x)
    if isinstance(v, complex):
        return _json_value([v.real, v.imag], indent, level)
    if isinstance(v, str):
        out = v.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [f'{pad}"{k}": {_json_value(x, indent, level + 1)}' for k, x in v.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(v, (list, tuple, np.ndarray)):
        seq = list(v)
        if not seq:
            return "[]"
        # numeric rows stay on one line
        if all(not isinstance(x, (dict, list, tuple, np.ndarray, complex)) for x in seq):
            return "[" + ", ".join(_json_value(x, indent, level + 1) for x in seq) + "]"
        items = [pad + _json_value(x, indent, level + 1) for x in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(v).__name__}")


def to_json(obj, indent: int = 2) -> str:
    """Deterministic JSON; keys keep insertion order, floats use 17 digits."""
    return _json_value(obj, indent, 0) + "\n"


def to_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()


def _complex_matrix(M) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(M)]


# ---- argument parsing ---------------------------------------------------------


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _float_list(text: str) -> list[float]:
    try:
        vals = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _int_list(text: str) -> list[int]:
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="FILE", help="write data here instead of stdout")

    p = _Parser(prog="genmz", description="Generalized Mach-Zehnder multiphase estimation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cmd(name, help_):
        return sub.add_parser(name, help=help_, parents=[common])

    def add_d(sp, choices):
        sp.add_argument("--d", type=int, required=True, help=f"number of modes, one of {choices}")

    def add_n(sp):
        sp.add_argument("--n", type=int, required=True, help="number of stations / photons N")

    def add_phases(sp):
        sp.add_argument("--phases", type=_float_list, required=True, help="alpha_1,...,alpha_d")
        sp.add_argument("--degrees", action="store_true", help="phases are given in degrees")

    sp = cmd("multiport", "symmetric multiport S_d and its symmetry residual")
    add_d(sp, "2..6")
    sp.add_argument("--couplings", action="store_true", help="include the Jordan-Schwinger table")

    sp = cmd("hamiltonian", "generator polynomial P(X) of S_d with its coupling table")
    add_d(sp, "2..6")

    sp = cmd("unitary", "generalized Mach-Zehnder unitary and generator residual")
    add_d(sp, "2..6")
    add_phases(sp)

    sp = cmd("prob", "outcome distribution table (CSV)")
    add_d(sp, "3,4")
    add_n(sp)
    add_phases(sp)

    sp = cmd("fim", "Fisher report for the interest phases (JSON)")
    add_d(sp, "3,4")
    add_n(sp)
    add_phases(sp)
    sp.add_argument("--reference", type=int, default=None, help="reference phase label 1..d (default d)")

    sp = cmd("qfim", "quantum Fisher matrix of the optimal probe (JSON)")
    add_d(sp, "3,4")
    add_n(sp)

    sp = cmd("optimum", "minimise trace((F_II)^-1) over the estimated phases (JSON)")
    add_d(sp, "3,4")
    add_n(sp)
    sp.add_argument("--grid", type=int, default=None, help="grid points per axis")

    sp = cmd("scaling", "optimum trace and N^2 times it for a list of N (CSV)")
    add_d(sp, "3,4")
    sp.add_argument("--n-list", type=_int_list, required=True, help="e.g. 2,4,8,16")
    sp.add_argument("--grid", type=int, default=None, help="grid points per axis")

    sp = cmd("landscape", "d=3 trace landscape over (alpha_1, alpha_2) (CSV)")
    add_n(sp)
    sp.add_argument("--res", type=int, required=True, help="grid points per axis")

    sp = cmd("montecarlo", "median trace over uniformly random d=3 phases (CSV)")
    add_n(sp)
    sp.add_argument("--samples", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)

    cmd("selfcheck", "run the invariant suite; exit 3 on any failure")
    return p


# ---- validation -----------------------------------------------------------------


def _need_d(d: int, allowed) -> None:
    if d not in allowed:
        raise DomainError(f"--d {d} not supported here; choose from {sorted(allowed)}")


def _need_n(N: int) -> None:
    if not 1 <= N <= MAX_N:
        raise DomainError(f"--n must be in 1..{MAX_N}, got {N}")


def _phase_arg(args) -> np.ndarray:
    a = np.asarray(args.phases, dtype=float)
    if len(a) != args.d:
        raise DomainError(f"--phases has {len(a)} values but --d is {args.d}")
    if not np.all(np.isfinite(a)):
        raise DomainError("--phases must be finite")
    return np.deg2rad(a) if args.degrees else a


# ---- commands -------------------------------------------------------------------


def _coupling_rows(d: int) -> tuple[list, bool]:
    table = multiport.pair_couplings(multiport.generator_hamiltonian(d))
    report = multiport.symmetric_form_check(table)
    rows = []
    for i, j, c in table.couplings:
        row = {
            "i": i + 1,
            "j": j + 1,
            "ring_distance": multiport.ring_distance(i, j, d),
            "re": c.real,
            "im": c.imag,
            "modulus": abs(c),
        }
        if report.is_symmetric_form:
            row["phase"] = report.values[(i, j)]
        rows.append(row)
    return rows, report.is_symmetric_form


def cmd_multiport(args) -> str:
    _need_d(args.d, multiport.MULTIPORTS)
    spec = multiport.multiport_spec(args.d)
    S = multiport.symmetric_multiport(args.d)
    out = {
        "d": args.d,
        "prefactor": str(spec.prefactor),
        "surd": spec.surd,
        "matrix": _complex_matrix(S),
        "symmetry_residual": multiport.symmetry_residual(S),
        "unitarity_residual": numerics.unitarity_residual(S),
    }
    if args.couplings:
        rows, sym = _coupling_rows(args.d)
        out["symmetric_form"] = sym
        out["couplings"] = rows
    return to_json(out)


def cmd_hamiltonian(args) -> str:
    _need_d(args.d, multiport.MULTIPORTS)
    spec = multiport.multiport_spec(args.d)
    rows, sym = _coupling_rows(args.d)
    return to_json(
        {
            "d": args.d,
            "coefficients": {str(k): str(c) for k, c in sorted(spec.coefficients.items())},
            "prefactor": str(spec.prefactor),
            "surd": spec.surd,
            "matrix": _complex_matrix(multiport.generator_hamiltonian(args.d)),
            "symmetric_form": sym,
            "couplings": rows,
        }
    )


def cmd_unitary(args) -> str:
    _need_d(args.d, multiport.MULTIPORTS)
    a = _phase_arg(args)
    U = ifm.mz_unitary(a)
    out = {
        "d": args.d,
        "phases": list(a),
        "matrix": _complex_matrix(U),
        "unitarity_residual": numerics.unitarity_residual(U),
    }
    if args.d in ifm.GENERATOR_DIMS:
        gens = ifm.phase_generators(args.d)
        out["generator_source"] = gens.source
        out["generator_residual"] = numerics.unitary_distance(U, gens.generate(a))
    return to_json(out)


def cmd_prob(args) -> str:
    _need_d(args.d, dist.CLOSED_DIMS)
    _need_n(args.n)
    return dist.distribution_table(args.d, args.n, _phase_arg(args)).to_csv(fmt)


def cmd_fim(args) -> str:
    _need_d(args.d, dist.CLOSED_DIMS)
    _need_n(args.n)
    a = _phase_arg(args)
    ref = args.d if args.reference is None else args.reference
    if not 1 <= ref <= args.d:
        raise DomainError(f"--reference must be a phase label in 1..{args.d}")
    report = fisher.fim_interest(fisher.EstimationScenario.create(args.d, args.n, a, ref - 1))
    out = report.to_dict()
    out["phases"] = list(a)
    out["interest"] = [m + 1 for m in report.scenario.interest]
    out["reference"] = ref
    return to_json(out)


def cmd_qfim(args) -> str:
    _need_d(args.d, dist.CLOSED_DIMS)
    _need_n(args.n)
    Q = fisher.qfim_optimal_state(args.d, args.n)
    lhs, rhs, holds = fisher.mean_qfi_bound_check(args.d, args.n)
    same, value = fisher.optimal_state_eigencheck(args.d, args.n)
    return to_json(
        {
            "d": args.d,
            "N": args.n,
            "qfim": Q.tolist(),
            "trace": float(np.trace(Q)),
            "interest_trace_inverse": fisher.quantum_interest_trace(args.d, args.n),
            "mean_qfi": lhs,
            "mean_qfi_bound": rhs,
            "bound_holds": holds,
            "eigenstate_of_sum_h2": same,
            "sum_h2_eigenvalue": value,
        }
    )


def cmd_optimum(args) -> str:
    _need_d(args.d, dist.CLOSED_DIMS)
    _need_n(args.n)
    r = metrology.optimal_phase_search(args.d, args.n, grid_resolution=args.grid)
    return to_json(
        {
            "d": args.d,
            "N": args.n,
            "phases": list(r.phases),
            "trace_inverse": r.trace_inverse,
            "scaled": args.n**2 * r.trace_inverse,
            "grid_best": r.grid_best,
            "evaluations": r.evaluations,
        }
    )


def cmd_scaling(args) -> str:
    _need_d(args.d, dist.CLOSED_DIMS)
    for N in args.n_list:
        _need_n(N)
    rows = metrology.scaling_sweep(args.d, args.n_list, grid_resolution=args.grid)
    header = ["N", "trace_inverse", "scaled"] + [f"alpha{m + 1}" for m in range(args.d)]
    return to_csv(header, ([r.N, r.trace_inverse, r.scaled, *r.phases_at_optimum] for r in rows))


def cmd_landscape(args) -> str:
    _need_n(args.n)
    if not 1 <= args.res <= 2048:
        raise DomainError("--res must be in 1..2048")
    g = metrology.landscape_grid(args.n, args.res)
    return to_csv(["alpha1", "alpha2", "trace_inverse", "singular"], (
        (a1, a2, v, int(s)) for a1, a2, v, s in g.rows()
    ))


def cmd_montecarlo(args) -> str:
    _need_n(args.n)
    if args.samples < 1:
        raise DomainError("--samples must be positive")
    if args.seed < 0:
        raise DomainError("--seed must be non-negative")
    r = metrology.monte_carlo_median(args.n, args.samples, args.seed)
    return to_csv(["N", "samples", "seed", "excluded", "median"], [
        (r.N, r.samples, r.seed, r.excluded, r.median)
    ])


def cmd_selfcheck(args) -> str:
    results = selfcheck.run_all()
    lines = [f"{'PASS' if ok else 'FAIL'}  {name}: {detail}" for name, ok, detail in results]
    failed = sum(not ok for _, ok, _ in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    text = "\n".join(lines) + "\n"
    if failed:
        raise _SelfcheckFailed(text)
    return text


class _SelfcheckFailed(Exception):
    pass


COMMANDS = {
    "multiport": cmd_multiport,
    "hamiltonian": cmd_hamiltonian,
    "unitary": cmd_unitary,
    "prob": cmd_prob,
    "fim": cmd_fim,
    "qfim": cmd_qfim,
    "optimum": cmd_optimum,
    "scaling": cmd_scaling,
    "landscape": cmd_landscape,
    "montecarlo": cmd_montecarlo,
    "selfcheck": cmd_selfcheck,
}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    out = getattr(args, "out", None)
    try:
        _emit(COMMANDS[args.command](args), out)
    except _SelfcheckFailed as exc:
        _emit(str(exc), out)
        return EXIT_CONSISTENCY
    except (ConsistencyError, SingularSupportError, NotHermitianError) as exc:
        print(f"genmz: numerical consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (DomainError, GenMZError) as exc:
        print(f"genmz: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"genmz: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
