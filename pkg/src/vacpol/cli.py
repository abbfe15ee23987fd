"""Command-line front end: tabulates the library's quantities as CSV or JSON.

Exit codes: 0 success, 2 invalid input, 3 numerical failure.  Output is
written to a temporary file and renamed, so a failed run leaves nothing.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .bound_states import direct_shift, hydrogenic_state, modified_cusp, numerov_eigensolve, perturbative_shift
from .context import ALPHA, EvalAccuracy, PhysicalContext
from .errors import DomainError, VacpolError
from .field_equation import (
    appendix_asymptotes,
    cardano_real_root,
    field_correction_slope,
    nonlinear_deviation,
    physical_coefficients,
    root_residual,
)
from .fourier import (
    uehling_spectral_closed,
    uehling_spectral_corrected,
    uehling_spectral_oracle,
    wk_spectral_closed,
    wk_spectral_corrected,
    wk_spectral_oracle,
)
from .o21_algebra import build_generators, hausdorff_residual, hydrogen_spectrum_from_algebra, verify_commutators
from .potentials import total_potential
from .scattering import add_on_potential, differential_cross_section, integrate_phase
from .typo_ledger import build_typo_ledger

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3
COMMANDS = ("potential", "spectrum", "phase", "cross-section", "cusp", "bound", "algebra", "field", "typo-ledger")


class _ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _ArgumentError(message)


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _jsonable(x):
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, np.integer):
        return int(x)
    return x


def _grid(lo: float, hi: float, count: int, spacing: str) -> list[float]:
    if count < 2:
        raise DomainError(f"count must be at least 2, got {count}")
    if not lo < hi:
        raise DomainError(f"grid minimum {lo} must be below maximum {hi}")
    if spacing == "log":
        if not lo > 0:
            raise DomainError("log spacing needs a positive minimum")
        return [float(v) for v in np.geomspace(lo, hi, count)]
    return [float(v) for v in np.linspace(lo, hi, count)]


def _pmap(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _context(args) -> PhysicalContext:
    acc = EvalAccuracy(rel_tol=args.rel_tol)
    if (args.q1 is None) != (args.q2 is None):
        raise DomainError("--q1 and --q2 must be given together")
    return PhysicalContext(alpha=args.alpha, Q=args.Q, q1=args.q1, q2=args.q2, accuracy=acc)


def _length(args, ctx, value):
    return value * ctx.alpha if args.units == "alpha" else value


def _wavenumber(args, ctx, value):
    return value / ctx.alpha if args.units == "alpha" else value


def _r_label(args):
    return "r_over_alpha" if args.units == "alpha" else "r"


def _k_label(args):
    return "k_times_alpha" if args.units == "alpha" else "k"


# ---- commands: each returns (columns, rows, diagnostics, extra json) ----------


def cmd_potential(args, ctx):
    grid = _grid(args.rmin, args.rmax, args.count, args.spacing)

    def row(g):
        s = total_potential(_length(args, ctx, g), ctx)
        return [g, s.coulomb, s.uehling, s.wichmann_kroll, s.total, "closed_form"]

    return [_r_label(args), "coulomb", "uehling", "wichmann_kroll", "total", "source"], _pmap(row, grid, args.workers), {}, None


def cmd_spectrum(args, ctx):
    grid = _grid(args.kmin, args.kmax, args.count, args.spacing)

    def row(g):
        k = _wavenumber(args, ctx, g)
        u_p, u_c = uehling_spectral_closed(k, ctx), uehling_spectral_corrected(k, ctx)
        w_p, w_c = wk_spectral_closed(k, ctx), wk_spectral_corrected(k, ctx)
        if args.skip_oracle:
            u_o = w_o = math.nan
        else:
            u_o, w_o = uehling_spectral_oracle(k, ctx), wk_spectral_oracle(k, ctx)
        rel = lambda a, b: abs(a - b) / abs(b) if b else math.nan  # noqa: E731
        return [g, u_p, u_o, u_c, rel(u_p, u_o), rel(u_c, u_o), w_p, w_o, w_c, rel(w_p, w_o), rel(w_c, w_o), "closed_form;oracle;corrected"]

    cols = [
        _k_label(args),
        "u_closed_form",
        "u_oracle",
        "u_corrected",
        "u_closed_form_rel_discrepancy",
        "u_corrected_rel_discrepancy",
        "w_closed_form",
        "w_oracle",
        "w_corrected",
        "w_closed_form_rel_discrepancy",
        "w_corrected_rel_discrepancy",
        "source",
    ]
    return cols, _pmap(row, grid, args.workers), {}, None


def cmd_phase(args, ctx):
    if args.ell_max < 0:
        raise DomainError(f"--ell-max must be nonnegative, got {args.ell_max}")
    V = add_on_potential(ctx, args.potential)

    def row(ell):
        tr = integrate_phase(V, ell, args.k, ctx)
        return [ell, args.k, tr.eta, tr.delta_inf, tr.error_estimate, tr.tail_estimate, tr.converged, "oracle"]

    rows = _pmap(row, list(range(args.ell_max + 1)), args.workers)
    return ["ell", "k", "eta", "delta", "error_estimate", "tail_estimate", "converged", "source"], rows, {}, None


def cmd_cross_section(args, ctx):
    delta0 = args.delta0
    diag = {}
    if delta0 is None:
        tr = integrate_phase(add_on_potential(ctx, args.potential), 0, args.k, ctx)
        delta0 = tr.delta_inf
        diag["delta0_error_estimate"] = tr.error_estimate
    diag["delta0"] = delta0
    a_c = args.a_c if args.a_c is not None else 1.0 / abs(ctx.charge_product)
    grid = _grid(args.thetamin, args.thetamax, args.count, "linear")

    def row(theta):
        p = differential_cross_section(theta, args.k, delta0, a_c, ctx)
        c, i, v = p.components
        return [theta, p.dsigma, c, i, v, p.amplitude_squared, p.relative_discrepancy, "closed_form"]

    cols = ["theta", "dsigma", "coulomb", "interference", "vacuum_polarization", "amplitude_squared", "relative_discrepancy", "source"]
    return cols, _pmap(row, grid, args.workers), diag, None


def cmd_cusp(args, ctx):
    rep = modified_cusp(args.Q, args.C, args.f, ctx)
    d = asdict(rep)
    return list(d) + ["source"], [list(d.values()) + ["closed_form"]], {}, None


def _require_positive(name: str, value: int):
    if value < 1:
        raise DomainError(f"--{name} must be at least 1, got {value}")


def cmd_bound(args, ctx):
    _require_positive("n-max", args.n_max)
    states = [(n, ell) for n in range(1, args.n_max + 1) for ell in range(n)]

    def row(nl):
        n, ell = nl
        st = hydrogenic_state(n, ell, args.Q)
        e_c = numerov_eigensolve(n, ell, args.Q, "coulomb", ctx=ctx).energy
        e_t = numerov_eigensolve(n, ell, args.Q, "total", ctx=ctx).energy
        pert = perturbative_shift(st, "both", ctx.with_charge(args.Q))
        return [n, ell, st.energy, e_c, e_t, e_t - e_c, pert, "oracle"]

    cols = ["n", "ell", "energy_analytic", "energy_numerov_coulomb", "energy_numerov_total", "direct_shift", "perturbative_shift", "source"]
    return cols, _pmap(row, states, args.workers), {}, None


def cmd_algebra(args, ctx):
    _require_positive("n-max", args.n_max)
    rep = build_generators(args.ell, args.N)
    report = verify_commutators(rep)
    diag = asdict(report)
    diag["hausdorff_plus"] = hausdorff_residual(args.ell, args.N, args.beta, 1)
    diag["hausdorff_minus"] = hausdorff_residual(args.ell, args.N, args.beta, -1)
    rows = []
    for n in range(1, args.n_max + 1):
        e = hydrogen_spectrum_from_algebra(args.Q, n)
        rows.append([n, e, -args.Q**2 / (2.0 * n * n), "closed_form"])
    return ["n", "energy_algebra", "energy_analytic", "source"], rows, diag, None


def cmd_field(args, ctx):
    grid = _grid(args.rmin, args.rmax, args.count, args.spacing)

    def row(g):
        r = _length(args, ctx, g)
        c = physical_coefficients(r, ctx)
        y = cardano_real_root(c)
        return [g, y, -ctx.charge_product / c.r**2, nonlinear_deviation(c), field_correction_slope(r, ctx), root_residual(c, y), "closed_form"]

    p = physical_coefficients(1.0, ctx).p
    diag = {}
    for regime in ("small", "large"):
        a = appendix_asymptotes(regime, p, ctx.charge_product * p)
        diag[f"{regime}_r_fitted_exponent"] = a.fitted_exponent
        diag[f"{regime}_r_limit"] = a.limit_value
        diag[f"{regime}_r_predicted_limit"] = a.predicted_limit
    cols = [_r_label(args), "field", "coulomb_field", "nonlinear_deviation", "psi_slope", "residual", "source"]
    return cols, _pmap(row, grid, args.workers), diag, None


def cmd_typo_ledger(args, ctx):
    ledger = build_typo_ledger(ctx, k_count=args.k_count)
    rows = []
    for e in ledger.entries + ledger.corrected_checks:
        tag = "corrected" if e in ledger.corrected_checks else "closed_form"
        for s in e.samples:
            rows.append([e.id, s.point, s.printed, s.reference, s.relative_discrepancy, tag])
    return ["id", "point", "value", "reference", "relative_discrepancy", "source"], rows, {}, ledger.to_dict()


_HANDLERS = {
    "potential": cmd_potential,
    "spectrum": cmd_spectrum,
    "phase": cmd_phase,
    "cross-section": cmd_cross_section,
    "cusp": cmd_cusp,
    "bound": cmd_bound,
    "algebra": cmd_algebra,
    "field": cmd_field,
    "typo-ledger": cmd_typo_ledger,
}


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value file; command-line flags override it")
    p.add_argument("--output", default="-", help="output path, '-' for stdout")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--Q", type=float, default=1.0)
    p.add_argument("--q1", type=float, default=None)
    p.add_argument("--q2", type=float, default=None)
    p.add_argument("--alpha", type=float, default=ALPHA)
    p.add_argument("--units", choices=("atomic", "alpha"), default="atomic", help="grid units for r and k")
    p.add_argument("--rel-tol", type=float, default=1e-12)
    p.add_argument("--workers", type=int, default=1)


def _r_grid(p, rmin, rmax):
    p.add_argument("--rmin", type=float, default=rmin)
    p.add_argument("--rmax", type=float, default=rmax)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--spacing", choices=("linear", "log"), default="log")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="vacpol", description="Vacuum-polarization corrected two-charge interaction tables.")
    parser.add_argument("--version", action="version", version=f"vacpol {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("potential", help="Coulomb, Uehling, Wichmann-Kroll and total potential on an r grid")
    _common(p)
    _r_grid(p, 1e-4, 30.0)

    p = sub.add_parser("spectrum", help="spectral functions: closed form, oracle, corrected")
    _common(p)
    p.add_argument("--kmin", type=float, default=0.01)
    p.add_argument("--kmax", type=float, default=20.0)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--spacing", choices=("linear", "log"), default="log")
    p.add_argument("--skip-oracle", action="store_true")

    p = sub.add_parser("phase", help="variable-phase shifts for l = 0..ell-max")
    _common(p)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--ell-max", type=int, default=2)
    p.add_argument("--potential", choices=("uehling", "wichmann_kroll", "both"), default="uehling")

    p = sub.add_parser("cross-section", help="interference cross-section over theta")
    _common(p)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--delta0", type=float, default=None, help="s-wave shift; computed when omitted")
    p.add_argument("--a-c", type=float, default=None, help="Coulomb length a_C; default 1/|charge product|")
    p.add_argument("--potential", choices=("uehling", "wichmann_kroll", "both"), default="uehling")
    p.add_argument("--thetamin", type=float, default=0.1)
    p.add_argument("--thetamax", type=float, default=math.pi)
    p.add_argument("--count", type=int, default=30)

    p = sub.add_parser("cusp", help="modified electron-nucleus cusp")
    _common(p)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--f", type=float, default=None, help="Wichmann-Kroll cusp factor; default 1/(1 + C^2)")

    p = sub.add_parser("bound", help="hydrogenic levels with vacuum-polarization shifts")
    _common(p)
    p.add_argument("--n-max", type=int, default=2)

    p = sub.add_parser("algebra", help="O(2,1) generator checks and spectrum")
    _common(p)
    p.add_argument("--ell", type=int, default=0)
    p.add_argument("--N", type=int, default=12)
    p.add_argument("--beta", type=float, default=0.1)
    p.add_argument("--n-max", type=int, default=5)

    p = sub.add_parser("field", help="Cardano root of the nonlinear field equation")
    _common(p)
    _r_grid(p, 1e-3, 1e3)

    p = sub.add_parser("typo-ledger", help="printed-formula discrepancy report")
    _common(p)
    p.add_argument("--k-count", type=int, default=6)
    return parser


def _read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise DomainError(f"cannot read config file {path}: {exc}") from exc
    for num, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"{path}:{num}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        cfg = _read_config(args.config)
        sub = parser._subparsers._group_actions[0].choices[args.command]
        known = {a.dest: a for a in sub._actions}
        tokens = []
        for key, value in cfg.items():
            if key not in known or key in ("config", "help"):
                raise DomainError(f"unknown config key {key!r} for command {args.command}")
            action = known[key]
            if isinstance(action, argparse._StoreTrueAction):
                if value.lower() in ("1", "true", "yes"):
                    tokens.append(action.option_strings[0])
            else:
                tokens += [action.option_strings[0], value]
        # file values first, then the command line so flags win
        args = parser.parse_args([args.command] + tokens + list(argv[1:]))
    return args


def _config_echo(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("config", "output")}


def render(args, columns, rows, diagnostics, extra) -> str:
    config = _config_echo(args)
    if args.format == "json":
        doc = {
            "config": config,
            "results": [dict(zip(columns, r)) for r in rows],
            "diagnostics": diagnostics,
        }
        if extra is not None:
            doc["typo_ledger"] = extra
        doc["version"] = __version__
        return json.dumps(_jsonable(doc), indent=2) + "\n"
    buf = io.StringIO()
    buf.write(f"# vacpol {__version__}\n")
    buf.write("# config: " + "; ".join(f"{k}={_fmt(v)}" for k, v in config.items()) + "\n")
    for k, v in diagnostics.items():
        buf.write(f"# {k}: {_fmt(v)}\n")
    buf.write(",".join(columns) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) for v in r) + "\n")
    return buf.getvalue()


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".vacpol-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the result ordinary umask permissions
        mask = os.umask(0)
        os.umask(mask)
        os.chmod(tmp, 0o666 & ~mask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        if args.workers < 1:
            raise DomainError("--workers must be at least 1")
        ctx = _context(args)
        columns, rows, diagnostics, extra = _HANDLERS[args.command](args, ctx)
        text = render(args, columns, rows, diagnostics, extra)
        _write(args.output, text)
    except _ArgumentError as exc:
        print(f"vacpol: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except DomainError as exc:
        print(f"vacpol: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (VacpolError, ArithmeticError) as exc:
        print(f"vacpol: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    return EXIT_OK


def main() -> None:
    sys.exit(run())
