"""Command-line front end: reproducible experiments, CSV/JSON reports.

Every output embeds a config hash, the seed, and the package version, and
reruns with the same configuration are byte-identical. Thread count and
output paths are deliberately excluded from the hashed configuration:
they must never change results.
"""

import argparse
import math
import sys

import numpy as np

from . import analysis, interval, lacunary, lattice, rng, serialize, spectral
from . import stochastic, tiling
from ._version import __version__
from .errors import DegenerateBound, InputError, ToralDecayError
from .spectral import TrigPolynomial

ULAM_MODULUS_GRID = [float(d) for d in np.logspace(-4, -1, 25)]


def _load_function(path):
    try:
        return TrigPolynomial.load(path)
    except OSError as exc:
        raise InputError("cannot read function file %s: %s" % (path, exc)) from exc
    except ValueError as exc:
        raise InputError("bad function file %s: %s" % (path, exc)) from exc


def _matrix(args):
    return lattice.parse_matrix(args.matrix)


def _print(text):
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_json(obj, path=None):
    text = serialize.render_json(obj)
    if path:
        serialize.write_json(path, obj)
    _print(text)


def cmd_matrix_info(args):
    matrix = _matrix(args)
    digits = lattice.digit_set(matrix)
    info = {
        "d": matrix.dim,
        "q": matrix.det_abs,
        "lambda": matrix.lambda_min,
        "digits": [list(g) for g in digits.digits],
    }
    _emit_json(info, args.out)
    return 0


def cmd_digits(args):
    matrix = _matrix(args)
    digits = lattice.digit_set(matrix)
    _emit_json([list(g) for g in digits.digits], args.out)
    return 0


def cmd_tile(args):
    matrix = _matrix(args)
    digits = lattice.digit_set(matrix)
    tile = tiling.tile_points(matrix, digits, args.level)
    config = {
        "subcommand": "tile",
        "matrix": args.matrix,
        "level": args.level,
        "samples": args.samples,
        "seed": args.seed,
    }
    if args.points_out:
        cols = ["x%d" % (i + 1) for i in range(matrix.dim)]
        rows = [[float(v) for v in p] for p in tile.points]
        serialize.write_csv(args.points_out, cols, rows, config, seed=args.seed)
    stats = tiling.check_tiling(tile, args.samples, args.seed, threads=args.threads)
    coverage = {
        "cell_radius": stats.cell_radius,
        "fraction_one": stats.fraction_one,
        "histogram": {str(k): v for k, v in sorted(stats.histogram.items())},
        "level": stats.level,
        "samples": stats.samples,
        "seed": stats.seed,
        "window": stats.window,
        "config": serialize.config_hash(config),
        "version": __version__,
    }
    if args.self_affinity:
        coverage["self_affinity_mismatch"] = tiling.check_self_affinity(tile)
    _emit_json(coverage, args.coverage_out)
    return 0


def cmd_transfer(args):
    matrix = _matrix(args)
    f = _load_function(args.function)
    config = {
        "subcommand": "transfer",
        "matrix": args.matrix,
        "function": "hash:" + serialize.config_hash(sorted(map(str, f.coeffs.items()))),
        "steps": args.steps,
        "emit": args.emit,
    }
    if args.emit == "coeffs":
        g = spectral.transfer_fourier(f, matrix, args.steps)
        entries = [
            {"k": list(k), "re": float(c.real), "im": float(c.imag)}
            for k, c in sorted(g.coeffs.items())
        ]
        _emit_json(entries, args.out)
        return 0
    if args.emit == "modulus":
        radii = [matrix.lambda_min ** (-n) for n in range(1, args.steps + 1)]
        curve = spectral.modulus(f, 2, radii)
        rows = list(zip(curve.radii, curve.values))
        text = serialize.render_csv(["delta", "omega"], rows, config)
        if args.out:
            serialize.write_csv(args.out, ["delta", "omega"], rows, config)
        _print(text)
        return 0
    centered = abs(f.mean()) > 0
    fc = f.centered() if centered else f
    lam = matrix.lambda_min
    rows = []
    for n in range(1, args.steps + 1):
        g = spectral.transfer_fourier(fc, matrix, n)
        l2 = spectral.norm(g, 2)
        lo, hi = spectral.sup_norm_bracket(g)
        omega = spectral.modulus_value(fc, 2, lam ** (-n), saturate=True)
        if omega <= 0.0 and l2 > 1e-12:
            raise DegenerateBound("modulus vanished while the norm did not")
        ratio = l2 / omega if omega > 0 else 0.0
        rows.append([n, l2, lo, hi, omega, ratio])
    cols = ["n", "norm_L2", "norm_sup_lower", "norm_sup_upper", "omega_L2", "bound_ratio"]
    footer = ["centered: %s" % ("true" if centered else "false")]
    text = serialize.render_csv(cols, rows, config, footer=footer)
    if args.out:
        serialize.write_csv(args.out, cols, rows, config, footer=footer)
    _print(text)
    return 0


def _fit_footer(rows):
    """Footer lines with the fitted model for rows of (n, value)."""
    positive = [(n, v) for n, v in rows if v > 0 and n >= 1]
    if len(positive) < 8:
        return ["fit: null"]
    fit = analysis.fit_rate(positive)
    payload = {
        "model": fit.model,
        "param": fit.param,
        "amplitude": fit.amplitude,
        "residual": fit.residual,
    }
    import json

    return ["fit: " + json.dumps(payload, sort_keys=True)]


def cmd_decay(args):
    matrix = _matrix(args)
    f = _load_function(args.f)
    g = _load_function(args.g)
    config = {
        "subcommand": "decay",
        "matrix": args.matrix,
        "nmax": args.nmax,
        "mode": args.mode,
        "mc_samples": args.mc_samples,
        "seed": args.seed,
    }
    if args.mc_samples:
        if args.mode != "correlation":
            raise InputError("--mc-samples applies only to correlation mode")
        fc = f.centered()
        lam = matrix.lambda_min
        g_norm = spectral.norm(g, 2)
        rows = []
        for n in range(1, args.nmax + 1):
            value = abs(
                analysis.correlation(
                    f, g, matrix, n, mc_samples=args.mc_samples,
                    seed=args.seed, threads=args.threads,
                )
            )
            bound = g_norm * spectral.modulus_value(fc, 2, lam ** (-n), saturate=True)
            rows.append([n, value, bound, value / bound if bound > 0 else 0.0])
    else:
        report = analysis.decay_report(f, g, matrix, args.nmax, mode=args.mode)
        rows = [[r.n, r.value, r.bound, r.ratio] for r in report.rows]
    cols = ["n", "value", "bound", "ratio"]
    footer = _fit_footer([(r[0], r[1]) for r in rows])
    text = serialize.render_csv(cols, rows, config, seed=args.seed, footer=footer)
    if args.out:
        serialize.write_csv(args.out, cols, rows, config, seed=args.seed, footer=footer)
    if args.plot_out:
        report_rows = [analysis.DecayRow(r[0], r[1], r[2], r[3]) for r in rows]
        emit_plotdata(
            analysis.DecayReport(report_rows, args.mode, 2, 0.0, True), args.plot_out
        )
    _print(text)
    return 0


def cmd_lacunary(args):
    matrix = _matrix(args)
    h = tuple(int(v) for v in args.h.replace(",", " ").split())
    if args.design:
        targets = serialize.read_targets_csv(args.design)
        coeffs = lacunary.design_for_rate(targets, norm=args.design_norm)
        spec = lacunary.LacunarySpec(h, matrix, "explicit", coeffs)
        family = "explicit(designed)"
    elif args.family == "explicit":
        coeffs = [float(v) for v in args.param.replace(",", " ").split()]
        spec = lacunary.LacunarySpec(h, matrix, "explicit", coeffs)
        family = "explicit"
    else:
        spec = lacunary.LacunarySpec(
            h, matrix, args.family, float(args.param), truncation=args.truncation
        )
        family = args.family
    build_k = (
        spec.truncation
        if spec.truncation is not None
        else max(64, args.nmax + 32)
    )
    built = lacunary.lacunary_build(
        lacunary.LacunarySpec(h, matrix, spec.family, spec.param, truncation=build_k)
    )
    config = {
        "subcommand": "lacunary",
        "matrix": args.matrix,
        "h": list(h),
        "family": family,
        "param": str(spec.param),
        "nmax": args.nmax,
        "truncation": spec.truncation,
        "build_truncation": build_k,
    }
    rows = []
    for n in range(0, args.nmax + 1):
        l2_tail, l1_tail = lacunary.tail_norms(spec, n)
        bounds = lacunary.modulus_bounds_prop2(spec, n)
        measured = spectral.norm(spectral.transfer_fourier(built, matrix, n), 2)
        rows.append([n, l2_tail, l1_tail, bounds.sup_bound, bounds.l2_bound, measured])
    cols = ["n", "l2_tail", "l1_tail", "prop2_sup_bound", "prop2_l2_bound", "measured_l2_norm"]
    footer = _fit_footer([(r[0], r[1]) for r in rows])
    if args.design:
        footer.append("designed_coefficients: %d terms" % len(spec.param))
    text = serialize.render_csv(cols, rows, config, footer=footer)
    if args.out:
        serialize.write_csv(args.out, cols, rows, config, footer=footer)
    _print(text)
    return 0


def cmd_clt(args):
    matrix = _matrix(args)
    f = _load_function(args.f)
    experiment = stochastic.birkhoff_samples(
        f, matrix, args.horizon, args.samples, args.seed, threads=args.threads
    )
    config = {
        "subcommand": "clt",
        "matrix": args.matrix,
        "horizon": args.horizon,
        "samples": args.samples,
        "seed": args.seed,
    }
    payload = {
        "sigma2": experiment.sigma2,
        "ks": experiment.ks_stat,
        "sample_mean": experiment.sample_mean,
        "sample_var": experiment.sample_var,
        "config": serialize.config_hash(config),
        "seed": args.seed,
        "version": __version__,
    }
    if args.samples_out:
        rows = [[i, float(v)] for i, v in enumerate(experiment.samples)]
        serialize.write_csv(
            args.samples_out, ["index", "value"], rows, config, seed=args.seed
        )
    _emit_json(payload, args.out)
    return 0


def cmd_ulam(args):
    if args.op == "decay":
        truncation = args.truncation if args.truncation else 10**6
        report = interval.uvn_decay_norms(args.nmax, truncation)
        config = {
            "subcommand": "ulam",
            "op": "decay",
            "nmax": args.nmax,
            "truncation": truncation,
        }
        rows = [[r.n, r.value, r.ratio] for r in report.rows]
        cols = ["n", "norm", "pow2_ratio"]
        footer = _fit_footer([(r.n, r.value) for r in report.rows])
        text = serialize.render_csv(cols, rows, config, footer=footer)
        if args.out:
            serialize.write_csv(args.out, cols, rows, config, footer=footer)
        _print(text)
        return 0
    if args.op == "modulus":
        result = interval.uvn_modulus_sqrt_delta(ULAM_MODULUS_GRID)
        config = {"subcommand": "ulam", "op": "modulus", "grid": "1e-4..1e-1/25"}
        rows = list(zip(result.curve.radii, result.curve.values))
        footer = ["fitted_exponent: %r" % result.exponent]
        text = serialize.render_csv(["delta", "omega"], rows, config, footer=footer)
        if args.out:
            serialize.write_csv(args.out, ["delta", "omega"], rows, config, footer=footer)
        _print(text)
        return 0
    report = interval.lyapunov_clt(
        args.horizon, args.samples, args.seed, threads=args.threads
    )
    config = {
        "subcommand": "ulam",
        "op": "lyapunov",
        "horizon": args.horizon,
        "samples": args.samples,
        "seed": args.seed,
    }
    payload = {
        "sigma2": report.sigma2,
        "ks": report.ks_stat,
        "mean_log_derivative": report.mean_log_derivative,
        "sample_mean": report.sample_mean,
        "sample_var": report.sample_var,
        "config": serialize.config_hash(config),
        "seed": args.seed,
        "version": __version__,
    }
    _emit_json(payload, args.out)
    return 0


def emit_plotdata(report, path):
    """Two-column plot data plus a JSON sidecar with the fitted model.

    DecayReport rows become (log_n, log_value) over positive entries;
    a ModulusCurve becomes (delta, omega). Empty reports are an error
    and no file is written.
    """
    if isinstance(report, analysis.DecayReport):
        rows = [
            [math.log(r.n), math.log(r.value)]
            for r in report.rows
            if r.n >= 1 and r.value > 0
        ]
        if not rows:
            raise InputError("report has no positive rows to plot")
        cols = ["log_n", "log_value"]
        fit = report.fit
        if fit is None and len(rows) >= 8:
            fit = analysis.fit_rate([(r.n, r.value) for r in report.rows])
        sidecar = {
            "model": fit.model if fit else None,
            "param": fit.param if fit else None,
            "amplitude": fit.amplitude if fit else None,
            "residual": fit.residual if fit else None,
        }
    elif isinstance(report, spectral.ModulusCurve):
        if not report.radii:
            raise InputError("empty modulus curve")
        rows = [[d, v] for d, v in zip(report.radii, report.values)]
        cols = ["delta", "omega"]
        sidecar = {"norm_index": report.norm_index, "points": len(rows)}
    else:
        raise InputError("cannot plot %r" % type(report).__name__)
    config = {"plotdata": cols}
    serialize.write_csv(path, cols, rows, config)
    serialize.write_json(str(path) + ".fit.json", sidecar)
    return path


def build_parser():
    parser = argparse.ArgumentParser(
        prog="toraldecay",
        description="Correlation-decay experiments for expanding toral endomorphisms.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def add_common(p, seed=False, threads=False):
        if seed:
            p.add_argument("--seed", type=int, default=0, help="64-bit RNG seed")
        if threads:
            p.add_argument(
                "--threads", type=int, default=None,
                help="worker threads (default: TORAL_DECAY_THREADS or cpu count)",
            )

    p = sub.add_parser("matrix-info", help="spectrum, determinant, digit set")
    p.add_argument("--matrix", required=True)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_matrix_info)

    p = sub.add_parser("digits", help="coset representatives as JSON")
    p.add_argument("--matrix", required=True)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_digits)

    p = sub.add_parser("tile", help="self-affine tile cloud and coverage check")
    p.add_argument("--matrix", required=True)
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--samples", type=int, default=10**4)
    p.add_argument("--points-out")
    p.add_argument("--coverage-out")
    p.add_argument("--self-affinity", action="store_true")
    add_common(p, seed=True, threads=True)
    p.set_defaults(handler=cmd_tile)

    p = sub.add_parser("transfer", help="iterate the transfer operator")
    p.add_argument("--matrix", required=True)
    p.add_argument("--function", required=True, help="TrigPolynomial JSON file")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--emit", choices=["coeffs", "norms", "modulus"], default="norms")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_transfer)

    p = sub.add_parser("decay", help="correlation decay against the modulus bound")
    p.add_argument("--matrix", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--g", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--mode", choices=["correlation", "transfer_norm"],
                   default="correlation")
    p.add_argument("--mc-samples", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--plot-out")
    add_common(p, seed=True, threads=True)
    p.set_defaults(handler=cmd_decay)

    p = sub.add_parser("lacunary", help="lacunary tails, bounds, measured norms")
    p.add_argument("--matrix", required=True)
    p.add_argument("--h", required=True, help="base frequency, e.g. '1,0'")
    p.add_argument("--family", choices=list(lacunary.FAMILIES), default="power")
    p.add_argument("--param", default="2.0",
                   help="family parameter, or coefficient list for explicit")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--design", help="CSV of target tail values")
    p.add_argument("--design-norm", choices=["sup", "l2"], default="sup")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_lacunary)

    p = sub.add_parser("clt", help="Birkhoff-sum CLT experiment")
    p.add_argument("--matrix", required=True)
    p.add_argument("--f", required=True)
    p.add_argument("--horizon", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--samples-out")
    add_common(p, seed=True, threads=True)
    p.set_defaults(handler=cmd_clt)

    p = sub.add_parser("ulam", help="tent/Ulam-von Neumann experiments")
    p.add_argument("--op", choices=["decay", "modulus", "lyapunov"], required=True)
    p.add_argument("--nmax", type=int, default=12)
    p.add_argument("--truncation", type=int, default=None)
    p.add_argument("--horizon", type=int, default=2000)
    p.add_argument("--samples", type=int, default=5000)
    p.add_argument("--out")
    add_common(p, seed=True, threads=True)
    p.set_defaults(handler=cmd_ulam)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ToralDecayError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
