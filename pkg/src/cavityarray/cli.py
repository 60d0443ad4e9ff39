"""
Command-line front end.

Exit codes: 0 success, 1 computation or I/O error, 2 usage error.
"""

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bath_oracle, hamiltonian, mode_overlap, scattering_oracle, transport
from .core import ParameterError, derive_rates, params_from_mapping, read_config
from .output import atomic_write, csv_text, fmt, svg_line_chart

SUBCOMMANDS = ("dispersion", "spectrum", "tmax", "zeta", "oracle-compare",
               "bath-validate", "overlap")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str
    params: object
    output: Path = None
    format: str = "csv"
    svg: Path = None
    options: dict = field(default_factory=dict)


def _add_array_flags(p):
    p.add_argument("--config", type=Path, help="key = value parameter file")
    p.add_argument("--n", type=int, dest="n_cavities", help="number of cavities N")
    p.add_argument("--q", type=float, dest="q_factor", help="quality factor Q = 2 omega_c / gamma")
    p.add_argument("--xi", type=float, help="hopping scale xi = 2 alpha omega_c")
    p.add_argument("--alpha", type=float, help="overlap integral alpha")
    p.add_argument("--omega-c", type=float, dest="omega_c", help="cavity frequency (default 1)")
    p.add_argument("--period", type=float, help="lattice period L (default 1)")
    p.add_argument("--out", type=Path, help="CSV output file (default: standard output)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cavityarray",
        description="Band structure, transmission and bath checks for dissipative "
                    "coupled-cavity arrays.")
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")
    sub.required = True

    p = sub.add_parser("dispersion", help="complex mode frequencies (n, k_n_L, omega_re, omega_im)")
    _add_array_flags(p)

    p = sub.add_parser("spectrum", help="total transmission T(omega)")
    _add_array_flags(p)
    p.add_argument("--points", type=int, default=801)
    p.add_argument("--kind", choices=("discrete", "continuous"), default="continuous")
    p.add_argument("--svg", type=Path, help="also draw the curve to this SVG file")

    for name, text in (("tmax", "peak transmission"), ("zeta", "array quality factor")):
        p = sub.add_parser(name, help=text + " (exact, first_order, zeta)")
        _add_array_flags(p)

    p = sub.add_parser("oracle-compare", help="exact chain scattering vs product formula")
    _add_array_flags(p)
    p.add_argument("--points", type=int, default=801)
    p.add_argument("--svg", type=Path, help="also draw the deviation curve to this SVG file")

    p = sub.add_parser("bath-validate", help="discretised-bath decay vs golden rule")
    p.add_argument("--config", type=Path, help="key = value file (only q_factor, omega_c used)")
    p.add_argument("--q", type=float, dest="q_factor", help="quality factor setting gamma")
    p.add_argument("--omega-c", type=float, dest="omega_c")
    p.add_argument("--out", type=Path, help="CSV of t, P, residual")
    p.add_argument("--shape", choices=("flat", "tilt", "file"), default="flat")
    p.add_argument("--table", type=Path, help="CSV with columns omega,value (rho |eta|^2) for --shape file")
    p.add_argument("--tilt", type=float, default=0.8,
                   help="relative change of rho |eta|^2 at the band edges for --shape tilt")
    p.add_argument("--band-width", type=float, default=200.0, help="band width in units of gamma")
    p.add_argument("--modes", type=int, default=4000, help="number of bath modes M")
    p.add_argument("--times", type=int, default=200, help="samples in the fit window")

    p = sub.add_parser("overlap", help="1D defect mode and overlap integral alpha")
    p.add_argument("--profile", type=Path, required=True,
                   help="CSV with columns x, eps_single, eps_periodic")
    p.add_argument("--period", type=float, required=True, help="array period in x units")
    p.add_argument("--omega-max", type=float, help="highest mode frequency to examine")
    p.add_argument("--out", type=Path)
    return parser


def _array_params(ns):
    values = read_config(ns.config) if ns.config else {}
    if ns.alpha is not None and ns.xi is not None:
        raise UsageError("--alpha and --xi are mutually exclusive")
    if ns.alpha is not None or ns.xi is not None:
        values.pop("alpha", None)
        values.pop("xi", None)
    for key in ("n_cavities", "q_factor", "xi", "alpha", "omega_c", "period"):
        val = getattr(ns, key, None)
        if val is not None:
            values[key] = val
    return params_from_mapping(values)


def _bath_spec(ns):
    values = read_config(ns.config) if ns.config else {}
    omega_c = ns.omega_c if ns.omega_c is not None else values.get("omega_c", 1.0)
    q = ns.q_factor if ns.q_factor is not None else values.get("q_factor")
    if q is None:
        raise UsageError("missing required parameter: q_factor (--q)")
    gamma = 2.0 * omega_c / q
    width = ns.band_width * gamma
    if ns.shape == "flat":
        return bath_oracle.BathSpec.flat_for_gamma(gamma, width, omega_c)
    if ns.shape == "tilt":
        if not abs(ns.tilt) < 1:
            raise UsageError("--tilt must lie in (-1, 1)")
        level = gamma / np.pi
        slope = ns.tilt * level / (width / 2)
        return bath_oracle.BathSpec(
            density=bath_oracle.SpectralShape.tilt(slope, level - slope * omega_c),
            coupling=bath_oracle.SpectralShape.flat(1.0),
            omega_min=omega_c - width / 2, omega_max=omega_c + width / 2, omega_c=omega_c)
    if ns.table is None:
        raise UsageError("--shape file requires --table")
    try:
        data = np.genfromtxt(ns.table, delimiter=",", names=True)
        omega, value = data["omega"], data["value"]
    except (OSError, ValueError) as exc:
        raise UsageError("cannot read bath table %s: %s" % (ns.table, exc))
    return bath_oracle.BathSpec(
        density=bath_oracle.SpectralShape.tabulated(omega, value),
        coupling=bath_oracle.SpectralShape.flat(1.0),
        omega_min=float(omega[0]), omega_max=float(omega[-1]), omega_c=omega_c)


def parse_args(argv):
    """Resolve ``argv`` into a ``RunConfig``; usage problems exit with code 2."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        if ns.subcommand == "overlap":
            params = ns.profile
        elif ns.subcommand == "bath-validate":
            params = _bath_spec(ns)
        else:
            params = _array_params(ns)
    except (UsageError, ParameterError, OSError) as exc:
        parser.error(str(exc))
    svg = getattr(ns, "svg", None)
    options = {k: v for k, v in vars(ns).items()
               if k in ("points", "kind", "modes", "times", "period", "omega_max")}
    return RunConfig(subcommand=ns.subcommand, params=params, output=ns.out,
                     format="csv+svg" if svg else "csv", svg=svg, options=options)


def _emit(config, text):
    if config.output is None:
        sys.stdout.write(text)
    else:
        atomic_write(config.output, text)


def _label(params):
    rates = derive_rates(params)
    return "N=%d  Q=%s  xi=%s" % (params.n_cavities, fmt(params.q_factor), fmt(rates.xi))


def _run_dispersion(config):
    params = config.params
    rows = [(n, k * params.period, w.real, w.imag)
            for n, k, w in hamiltonian.complex_band(params)]
    _emit(config, csv_text(["n", "k_n_L", "omega_re", "omega_im"], rows))


def _run_spectrum(config):
    params = config.params
    curve = transport.spectrum(params, config.options["kind"], config.options["points"])
    _emit(config, csv_text(["omega", "T"], zip(curve.omega, curve.transmission)))
    if config.svg:
        atomic_write(config.svg, svg_line_chart(
            curve.omega, curve.transmission, title="Transmission  " + _label(params),
            xlabel="omega / omega_c", ylabel="T"))


def _run_tmax(config):
    params = config.params
    tm = transport.t_max(params)
    zeta = derive_rates(params).zeta
    first = tm.first_order if config.subcommand == "tmax" else transport.t_max_from_zeta(zeta)
    _emit(config, csv_text(["exact", "first_order", "zeta"], [(tm.exact, first, zeta)]))


def _run_oracle(config):
    params = config.params
    table = scattering_oracle.deviation_sweep(params, config.options["points"])
    rows = table.rows() + [("max", "", "", table.max_deviation)]
    _emit(config, csv_text(["omega", "T_exact", "T_product", "deviation"], rows))
    summary = "max_midband_deviation=%s\n" % fmt(table.max_midband_deviation)
    (sys.stderr if config.output is None else sys.stdout).write(summary)
    if config.svg:
        atomic_write(config.svg, svg_line_chart(
            table.omega[table.midband], table.deviation[table.midband],
            title="Exact vs product transmission  " + _label(params),
            xlabel="omega / omega_c", ylabel="relative deviation"))


def _run_bath(config):
    spec = config.params
    report = bath_oracle.run_decay_experiment(spec, config.options["modes"],
                                              config.options["times"])
    if config.output is not None:
        atomic_write(config.output, csv_text(
            ["t", "P", "residual"], zip(report.times, report.survival, report.residual)))
    lines = [
        ("gamma_fit", report.gamma_fit),
        ("gamma_golden", report.gamma_golden),
        ("ratio", report.ratio),
        ("relative_error", report.relative_error),
        ("lamb_shift", report.lamb_shift),
        ("lamb_shift_over_gamma", report.lamb_shift / report.gamma_golden),
        ("max_norm_error", report.max_norm_error),
    ]
    sys.stdout.write("".join("%s=%s\n" % (k, fmt(v)) for k, v in lines))


def _run_overlap(config):
    try:
        data = np.genfromtxt(config.params, delimiter=",", names=True)
        x, eps0, eps = data["x"], data["eps_single"], data["eps_periodic"]
    except (OSError, ValueError) as exc:
        raise ParameterError("cannot read profile %s: %s" % (config.params, exc))
    h = x[1] - x[0]
    cells = config.options["period"] / h
    if abs(cells - round(cells)) > 1e-6:
        raise ParameterError("period is not a whole number of grid cells")
    profile = mode_overlap.DielectricProfile1D(x=x, eps_single=eps0, eps_periodic=eps,
                                               period=int(round(cells)))
    mode, alpha = mode_overlap.coupling_from_profile(
        profile, omega_max=config.options.get("omega_max"))
    _emit(config, csv_text(["omega_c", "participation_ratio", "alpha"],
                           [(mode.frequency, mode.participation_ratio, alpha)]))


_RUNNERS = {
    "dispersion": _run_dispersion,
    "spectrum": _run_spectrum,
    "tmax": _run_tmax,
    "zeta": _run_tmax,
    "oracle-compare": _run_oracle,
    "bath-validate": _run_bath,
    "overlap": _run_overlap,
}


def run(config):
    """Execute a resolved config; returns the process exit code."""
    try:
        _RUNNERS[config.subcommand](config)
    except (ParameterError, ValueError, ArithmeticError, np.linalg.LinAlgError, OSError) as exc:
        sys.stderr.write("cavityarray %s: error: %s\n" % (config.subcommand, exc))
        return 1
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
