"""Command-line driver: constants/bounds, experiment tables, verification.

Subcommands
-----------
``bounds PATH``
    Load a system bundle (Matrix Market blocks plus manifest), print its
    exact constants, every closed-form bound, and the inclusion set.
``table``
    Reproduce the preconditioned-MINRES experiment tables for a model
    problem family: one row per swept parameter (mesh size, frequency, or
    cost parameter) with the measured spectral interval, the theoretical
    interval, the observed iteration count, and the theoretical bound.
``verify SUITE``
    Run a named randomized verification suite and print a JSON summary.
``export``
    Assemble a model problem and write it as a Matrix Market bundle plus a
    plain-text mesh listing.

Experiment configuration can come from a JSON file (``--config``); any
command-line flag overrides the file.  Output is deterministic: intervals
are printed with three decimals, counts as integers.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bounds as bnd
from . import mmio, verify
from .fem import build_mesh, parabolic_kkt, parabolic_reduced, stokes_system
from .krylov import estimate_intervals, minres_solve
from .saddle import BrezziConstants, babuska_constants, brezzi_constants

FLAVORS = ("parabolic-kkt", "parabolic-reduced", "stokes")


@dataclass
class ExperimentConfig:
    """Declarative description of one experiment table."""

    flavor: str = "stokes"
    levels: list[int] = field(default_factory=lambda: [4])
    nu: list[float] = field(default_factory=lambda: [1.0])
    omega: list[float] = field(default_factory=lambda: [1.0])
    eps: float = 1e-8
    maxit: int = 600
    fmt: str = "csv"
    out: str | None = None

    def __post_init__(self):
        if self.flavor not in FLAVORS:
            raise ValueError(f"unknown flavor {self.flavor!r}; choose from {FLAVORS}")
        if not (self.levels and self.nu and self.omega):
            raise ValueError("levels, nu and omega must be nonempty")
        if not (0.0 < self.eps < 1.0):
            raise ValueError(f"eps must be in (0, 1), got {self.eps}")
        sweeps = [len(self.levels) > 1, len(self.nu) > 1, len(self.omega) > 1]
        if sum(sweeps) > 1:
            raise ValueError("exactly one of levels/nu/omega may be swept per table")


@dataclass(frozen=True)
class TableRow:
    """One experiment-table row."""

    parameter_name: str
    parameter_value: float
    computed_lo: float
    computed_hi: float
    theory_lo: float
    theory_hi: float
    iterations: int
    iteration_bound: int


_BUILDERS = {
    "parabolic-kkt": parabolic_kkt,
    "parabolic-reduced": parabolic_reduced,
    "stokes": stokes_system,
}


def theoretical_interval(flavor: str) -> tuple[float, float]:
    """Parameter-independent positive spectral interval of a model family.

    The endpoints come from the robust-preconditioner theorems: the Stokes
    family uses the cubic bound with (alpha, beta, a_norm) = (1/sqrt(3), 1, 1)
    and the sharp norm bound (1 + sqrt(5))/2; the full parabolic optimality
    system uses the eigenvalue-range constants (2 - sqrt(2), sqrt(2)/2, 0, 1);
    the reduced parabolic system has the symmetric interval [1/sqrt(3), 1].
    """
    if flavor == "stokes":
        return (
            bnd.gamma_opt_general(1.0 / math.sqrt(3.0), 1.0, 1.0),
            bnd.b_norm_upper(1.0, 1.0),
        )
    if flavor == "parabolic-kkt":
        constants = BrezziConstants(
            alpha=2.0 - math.sqrt(2.0),
            beta=math.sqrt(2.0) / 2.0,
            a_norm=1.0,
            b_norm=1.0,
            lambda_min_a=0.0,
            lambda_max_a=1.0,
        )
        inc = bnd.inclusion_set(constants)
        return (inc.mu3, inc.mu4)
    if flavor == "parabolic-reduced":
        return (1.0 / math.sqrt(3.0), 1.0)
    raise ValueError(f"unknown flavor {flavor!r}")


def run_table(config: ExperimentConfig) -> list[TableRow]:
    """Compute all rows of an experiment table.

    Per row: the observed iteration count comes from a MINRES solve with
    the model right-hand side; the measured interval from a separate
    spectral-estimation run with a generic probe vector (the model
    right-hand side can have exactly zero weight on symmetry classes that
    contain the extreme eigenvalues, which would hide them from the solve's
    own Lanczos data).
    """
    build = _BUILDERS[config.flavor]
    theory_lo, theory_hi = theoretical_interval(config.flavor)
    k_bound = bnd.minres_iteration_bound(theory_lo, theory_hi, config.eps)

    if len(config.nu) > 1:
        sweep = [("nu", nu, config.levels[0], nu, config.omega[0]) for nu in config.nu]
    elif len(config.omega) > 1:
        sweep = [
            ("omega", om, config.levels[0], config.nu[0], om) for om in config.omega
        ]
    else:
        sweep = [
            ("h", 2.0 ** (-level), level, config.nu[0], config.omega[0])
            for level in config.levels
        ]

    rows = []
    for name, value, level, nu, omega in sweep:
        problem = build(build_mesh(level), nu, omega)
        report = minres_solve(
            problem.operator(),
            problem.preconditioner(),
            problem.rhs,
            eps=config.eps,
            maxit=config.maxit,
        )
        estimate = estimate_intervals(problem.operator(), problem.preconditioner())
        rows.append(
            TableRow(
                parameter_name=name,
                parameter_value=value,
                computed_lo=estimate.pos_lo,
                computed_hi=estimate.pos_hi,
                theory_lo=theory_lo,
                theory_hi=theory_hi,
                iterations=report.iterations,
                iteration_bound=k_bound,
            )
        )
    return rows


def format_table(rows: list[TableRow], fmt: str) -> str:
    header = [
        rows[0].parameter_name if rows else "param",
        "computed_lo",
        "computed_hi",
        "theory_lo",
        "theory_hi",
        "iterations",
        "iteration_bound",
    ]
    body = [
        [
            f"{row.parameter_value:g}",
            f"{row.computed_lo:.3f}",
            f"{row.computed_hi:.3f}",
            f"{row.theory_lo:.3f}",
            f"{row.theory_hi:.3f}",
            str(row.iterations),
            str(row.iteration_bound),
        ]
        for row in rows
    ]
    if fmt == "csv":
        lines = [",".join(header)] + [",".join(line) for line in body]
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = [
            "| " + " | ".join(header) + " |",
            "|" + "|".join("---" for _ in header) + "|",
        ]
        lines += ["| " + " | ".join(line) + " |" for line in body]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_bounds(args) -> int:
    try:
        sys_, ip = mmio.load_bundle(args.bundle)
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot load bundle: {exc}", file=sys.stderr)
        return 2
    lines = []
    try:
        bab = babuska_constants(sys_, ip)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    lines.append(f"gamma = {bab.gamma:.12g}")
    lines.append(f"B_norm = {bab.b_norm:.12g}")
    if sys_.has_zero_c and sys_.n > sys_.m:
        bc = brezzi_constants(sys_, ip)
        for key, value in bc.as_dict().items():
            lines.append(f"{key} = {value:.12g}")
        gamma_opt = bnd.gamma_opt_general(bc.alpha, bc.beta, bc.a_norm)
        lines.append(f"gamma_classical = {bnd.gamma_classical(bc.alpha, bc.beta, bc.a_norm):.12g}")
        lines.append(f"gamma_simple = {bnd.gamma_simple(bc.alpha, bc.beta, bc.a_norm):.12g}")
        lines.append(f"gamma_opt = {gamma_opt:.12g}")
        lines.append(f"B_norm_upper = {bnd.b_norm_upper(bc.a_norm, bc.b_norm):.12g}")
        inc = bnd.inclusion_set(bc)
        lines.append(
            f"inclusion = [{inc.mu1:.12g}, {inc.mu2:.12g}] u [{inc.mu3:.12g}, {inc.mu4:.12g}]"
        )
        if bc.lambda_min_a <= 0.0:
            lines.append(
                f"mu3_simple = {bnd.mu3_simple(bc.alpha, bc.beta, bc.lambda_min_a, bc.lambda_max_a):.12g}"
            )
        sharp = abs(bab.gamma - gamma_opt) <= 1e-8 * gamma_opt
        lines.append(f"sharpness = {'sharp' if sharp else 'strict'}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def _parse_list(text: str, cast) -> list:
    return [cast(tok) for tok in text.split(",") if tok.strip()]


def cmd_table(args) -> int:
    values: dict = {}
    if args.config:
        values.update(json.loads(Path(args.config).read_text()))
    if args.flavor:
        values["flavor"] = args.flavor
    if args.levels:
        values["levels"] = _parse_list(args.levels, int)
    if args.nu:
        values["nu"] = _parse_list(args.nu, float)
    if args.omega:
        values["omega"] = _parse_list(args.omega, float)
    if args.eps is not None:
        values["eps"] = args.eps
    if args.maxit is not None:
        values["maxit"] = args.maxit
    if args.format:
        values["fmt"] = args.format
    if args.out:
        values["out"] = args.out
    if "format" in values:  # config files may use the flag spelling
        values["fmt"] = values.pop("format")
    try:
        config = ExperimentConfig(**values)
    except (TypeError, ValueError) as exc:
        print(f"error: bad configuration: {exc}", file=sys.stderr)
        return 2
    rows = run_table(config)
    _emit(format_table(rows, config.fmt), config.out)
    return 0


def cmd_verify(args) -> int:
    try:
        results = verify.run_all() if args.suite == "all" else [verify.run_suite(args.suite)]
    except KeyError as exc:
        print(f"error: {exc.args[0]}", file=sys.stderr)
        return 2
    text = json.dumps(results, indent=2, default=float) + "\n"
    _emit(text, args.out)
    return 0 if all(r["passed"] for r in results) else 1


def cmd_export(args) -> int:
    if args.flavor not in _BUILDERS:
        print(f"error: unknown flavor {args.flavor!r}", file=sys.stderr)
        return 2
    mesh = build_mesh(args.level)
    problem = _BUILDERS[args.flavor](mesh, args.nu, args.omega)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    mmio.save_bundle(out, problem.saddle_system(), problem.inner_product())
    np.save(out / "rhs.npy", problem.rhs)
    (out / "mesh.txt").write_text(mesh.to_text())
    print(f"wrote bundle to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="saddlebounds",
        description="stability constants, spectral bounds and MINRES "
        "experiments for saddle-point systems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="constants and bounds of a bundle")
    p_bounds.add_argument("bundle", help="bundle directory (manifest.json inside)")
    p_bounds.add_argument("--out", help="write output to this file")
    p_bounds.set_defaults(func=cmd_bounds)

    p_table = sub.add_parser("table", help="run an experiment table")
    p_table.add_argument("--config", help="JSON config file")
    p_table.add_argument("--flavor", choices=FLAVORS)
    p_table.add_argument("--levels", help="comma-separated refinement levels")
    p_table.add_argument("--nu", help="comma-separated cost parameters")
    p_table.add_argument("--omega", help="comma-separated frequencies")
    p_table.add_argument("--eps", type=float)
    p_table.add_argument("--maxit", type=int)
    p_table.add_argument("--format", choices=("csv", "markdown"))
    p_table.add_argument("--out")
    p_table.set_defaults(func=cmd_table)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument(
        "suite", help="suite name (%s) or 'all'" % ", ".join(sorted(verify.SUITES))
    )
    p_verify.add_argument("--out")
    p_verify.set_defaults(func=cmd_verify)

    p_export = sub.add_parser("export", help="export a model problem bundle")
    p_export.add_argument("--flavor", required=True, choices=FLAVORS)
    p_export.add_argument("--level", type=int, default=2)
    p_export.add_argument("--nu", type=float, default=1.0)
    p_export.add_argument("--omega", type=float, default=1.0)
    p_export.add_argument("--out", required=True)
    p_export.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
