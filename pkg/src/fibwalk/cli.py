"""Command-line entry point.

Exit codes: 0 success, 2 usage error, 3 numerical-validation failure,
4 I/O failure. Every command computes its results before touching the
output directory, so a rejected invocation leaves no files behind.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import analysis, io, tracemap, walk
from .errors import (
    CapacityExceededError,
    DegenerateSeriesError,
    DivergenceError,
    InsufficientDataError,
    InvalidInvariantError,
    LogDomainError,
    NormalizationError,
)
from .schedule import fibonacci_word, schedule_for_horizon

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

OUT_DIR_ENV = "FIBWALK_OUT_DIR"
NORM_DRIFT_TOL = 1e-10
ORBIT_DRIFT_TOL = 1e-6


class UsageError(Exception):
    pass


class NumericalError(Exception):
    pass


def _angle(text):
    try:
        return io.parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _chirality(text):
    try:
        return io.parse_chirality(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _angle_list(text):
    return [_angle(t) for t in str(text).split(",") if t.strip()]


def _default_out_dir():
    return os.environ.get(OUT_DIR_ENV, ".")


def _write_outputs(out_dir, files, manifest, manifest_name):
    """Write ``{name: text}`` files plus the manifest into ``out_dir``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest.outputs = sorted(files) + [manifest_name]
    for name, text in files.items():
        io.write_text(out / name, text)
    io.write_text(out / manifest_name, manifest.to_json())
    return [str(out / n) for n in manifest.outputs]


# -- walk ---------------------------------------------------------------------


def cmd_walk(args):
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    if args.record_every < 1:
        raise UsageError("--record-every must be >= 1")
    try:
        res, sched = walk.run_walk(
            args.theta1, args.theta2, args.steps, args.schedule, args.chirality, args.record_every
        )
    except NormalizationError as exc:
        raise UsageError(str(exc)) from None
    drift = abs(res.state.norm() - 1.0)
    if drift > NORM_DRIFT_TOL:
        raise NumericalError(f"norm drifted by {drift:.3g} (tolerance {NORM_DRIFT_TOL})")

    files = {"sigma.csv": io.format_csv(["t", "sigma"], zip(res.times, res.sigma))}
    if args.schedule == "fibonacci":
        files["schedule.txt"] = sched.to_text()
    fit = None
    try:
        fit = analysis.fit_power_law(analysis.SeriesRecord(res.times, res.sigma))
    except (InsufficientDataError, LogDomainError):
        pass
    manifest = io.RunManifest(
        command="walk",
        params={
            "theta1": args.theta1,
            "theta2": args.theta2,
            "steps": args.steps,
            "schedule": args.schedule,
            "chirality": list(args.chirality),
            "record_every": args.record_every,
        },
        generation_index=sched.generation_index,
        notes={
            "final_norm_drift": drift,
            "schedule_is_prefix": sched.is_prefix,
            "fit": fit.to_dict() if fit else None,
        },
    )
    written = _write_outputs(args.out_dir, files, manifest, "walk_manifest.json")
    if fit:
        print(f"exponent={fit.exponent:.6f} r2={fit.r_squared:.6f} window={list(fit.window)}")
    return written


# -- poincare -----------------------------------------------------------------


def cmd_poincare(args):
    if args.n_orbits < 1 or args.n_iters < 1:
        raise UsageError("--n-orbits and --n-iters must be positive")
    if not 0 <= args.transient <= args.n_iters:
        raise UsageError("--transient must lie in [0, n_iters]")
    try:
        sec = tracemap.poincare_section(args.invariant, args.n_orbits, args.n_iters, args.transient, args.seed)
    except InvalidInvariantError as exc:
        raise UsageError(str(exc)) from None
    except DivergenceError as exc:
        raise NumericalError(str(exc)) from None
    header = ["orbit_id", "x", "z"]
    as_rows = lambda arr: ((int(r[0]), r[1], r[2]) for r in arr)  # noqa: E731
    files = {
        "poincare_front.csv": io.format_csv(header, as_rows(sec.front)),
        "poincare_back.csv": io.format_csv(header, as_rows(sec.back)),
    }
    meta = dict(sec.metadata)
    meta["front_points"] = int(len(sec.front))
    meta["back_points"] = int(len(sec.back))
    manifest = io.RunManifest(
        command="poincare",
        params={k: meta.pop(k) for k in ("C", "n_orbits", "n_iters", "transient")},
        hemisphere_convention=meta.pop("hemispheres"),
        seed=meta.pop("seed"),
        notes=meta,
    )
    return _write_outputs(args.out_dir, files, manifest, "poincare_manifest.json")


# -- orbit --------------------------------------------------------------------


def cmd_orbit(args):
    if args.n < 0:
        raise UsageError("-n must be >= 0")
    try:
        rec = tracemap.orbit_from_angles(args.theta1, args.theta2, args.phi2, args.n)
    except DivergenceError as exc:
        raise NumericalError(str(exc)) from None
    cs = rec.invariants
    rows = ((k, *rec.points[k], cs[k]) for k in range(len(rec)))
    files = {"orbit.csv": io.format_csv(["k", "x", "y", "z", "C"], rows)}
    manifest = io.RunManifest(
        command="orbit",
        params={"theta1": args.theta1, "theta2": args.theta2, "phi2": args.phi2, "n": args.n},
        notes={
            "C0": rec.C0,
            "C_closed_form": float(tracemap.invariant_closed_form(args.theta1, args.phi2)),
            "max_drift": rec.max_drift,
        },
    )
    written = _write_outputs(args.out_dir, files, manifest, "orbit_manifest.json")
    print(f"C0={rec.C0:.17g} max_drift={rec.max_drift:.3g}")
    if rec.max_drift > ORBIT_DRIFT_TOL:
        raise NumericalError(f"invariant drift {rec.max_drift:.3g} exceeds {ORBIT_DRIFT_TOL}")
    return written


# -- fit ----------------------------------------------------------------------


def _read_series(path, time_col, value_col):
    cols = io.read_csv(path)
    names = list(cols)
    t = cols[time_col] if time_col in cols else cols[names[0]]
    v = cols[value_col] if value_col in cols else cols[names[1]]
    return analysis.SeriesRecord(t, v, {"source": str(path)})


def cmd_fit(args):
    try:
        series = _read_series(args.input, args.time_column, args.value_column)
    except (ValueError, IndexError) as exc:
        raise UsageError(f"cannot parse {args.input}: {exc}") from None
    window = None
    if args.t_min is not None or args.t_max is not None:
        lo, hi = analysis.default_window(series.times) if len(series) else (0.0, 0.0)
        window = (args.t_min if args.t_min is not None else lo, args.t_max if args.t_max is not None else hi)
    try:
        fit = analysis.fit_power_law(series, window)
    except (InsufficientDataError, LogDomainError) as exc:
        raise NumericalError(str(exc)) from None
    text = io.dump_json({"input": str(args.input), **fit.to_dict()})
    if args.out:
        io.write_text(args.out, text)
    sys.stdout.write(text)
    return [args.out] if args.out else []


# -- correlate ----------------------------------------------------------------


def cmd_correlate(args):
    if args.max_lag < 1:
        raise UsageError("--max-lag must be >= 1")
    try:
        cols = io.read_csv(args.input)
        xs = cols["x"]
    except (KeyError, ValueError) as exc:
        raise UsageError(f"cannot read x column from {args.input}: {exc}") from None
    try:
        rep = analysis.decay_report(xs, args.max_lag)
    except (DegenerateSeriesError, InsufficientDataError) as exc:
        raise NumericalError(str(exc)) from None
    files = {
        "correlogram.csv": io.format_csv(["tau", "rho"], zip(rep.lags, rep.rho)),
        "decay_report.json": io.dump_json({"input": str(args.input), **rep.summary()}),
    }
    manifest = io.RunManifest(command="correlate", params={"input": str(args.input), "max_lag": args.max_lag})
    written = _write_outputs(args.out_dir, files, manifest, "correlate_manifest.json")
    s = rep.summary()
    print(
        f"power_law r2={s['power_law']['r_squared']:.4f} exponential r2={s['exponential']['r_squared']:.4f} "
        f"mid_lag_max|rho|={rep.mid_lag_max:.4f}"
    )
    return written


# -- sweep --------------------------------------------------------------------


def _sweep_point(job):
    theta1, theta2, T, chirality, record_every = job
    res, _ = walk.run_walk(theta1, theta2, T, "fibonacci", chirality, record_every)
    fit = analysis.fit_power_law(analysis.SeriesRecord(res.times, res.sigma))
    base, _ = walk.run_walk(theta1, theta2, T, "constant1", chirality, record_every)
    bfit = analysis.fit_power_law(analysis.SeriesRecord(base.times, base.sigma))
    return fit, bfit


def cmd_sweep(args):
    if args.steps < 1:
        raise UsageError("--steps must be >= 1")
    grid = args.angles
    if len(grid) < 2:
        raise UsageError("--angles needs at least two values")
    jobs = [(t1, t2, args.steps, args.chirality, args.record_every) for t1 in grid for t2 in grid if t1 != t2]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_point, jobs))
    else:
        results = [_sweep_point(j) for j in jobs]
    rows = [
        (j[0], j[1], f.exponent, f.r_squared, b.exponent) for j, (f, b) in zip(jobs, results)
    ]
    files = {
        "sweep.csv": io.format_csv(["theta1", "theta2", "exponent", "r2", "baseline_exponent"], rows),
        "sweep_summary.json": io.dump_json(
            {
                "min_exponent": min(r[2] for r in rows),
                "max_exponent": max(r[2] for r in rows),
                "sub_ballistic_pairs": sum(1 for r in rows if 0.5 < r[2] < 1.0),
                "n_pairs": len(rows),
            }
        ),
    }
    manifest = io.RunManifest(
        command="sweep",
        params={
            "angles": grid,
            "steps": args.steps,
            "chirality": list(args.chirality),
            "record_every": args.record_every,
        },
        generation_index=schedule_for_horizon(args.steps).generation_index,
    )
    return _write_outputs(args.out_dir, files, manifest, "sweep_manifest.json")


# -- word ---------------------------------------------------------------------


def cmd_word(args):
    if (args.index is None) == (args.horizon is None):
        raise UsageError("give exactly one of --index or --horizon")
    if args.index is not None:
        if args.index < 1:
            raise UsageError("--index must be >= 1")
        sched = fibonacci_word(args.index)
    else:
        if args.horizon < 0:
            raise UsageError("--horizon must be >= 0")
        sched = schedule_for_horizon(args.horizon)
    sys.stdout.write(sched.to_text())
    return []


# -- parser -------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="fibwalk", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="flat key=value file supplying defaults for the subcommand")
    sub = parser.add_subparsers(dest="command", required=True)

    def out_dir(p):
        p.add_argument("--out-dir", default=_default_out_dir(), help=f"output directory (env {OUT_DIR_ENV})")

    p = sub.add_parser("walk", help="evolve the walk and write sigma(t)")
    p.add_argument("--theta1", type=_angle, default="pi/4")
    p.add_argument("--theta2", type=_angle, default="pi/3")
    p.add_argument("--steps", "-T", type=int, default=1000)
    p.add_argument("--schedule", choices=walk.SCHEDULE_MODES, default="fibonacci")
    p.add_argument("--chirality", type=_chirality, default="0.7071067811865476,0.7071067811865476j")
    p.add_argument("--record-every", type=int, default=1)
    out_dir(p)
    p.set_defaults(func=cmd_walk)

    p = sub.add_parser("poincare", help="Poincare section point clouds on an invariant surface")
    p.add_argument("--invariant", "-C", type=float, required=False, default=None)
    p.add_argument("--n-orbits", type=int, default=50)
    p.add_argument("--n-iters", type=int, default=2000)
    p.add_argument("--transient", type=int, default=tracemap.DEFAULT_TRANSIENT)
    p.add_argument("--seed", type=int, default=0)
    out_dir(p)
    p.set_defaults(func=cmd_poincare)

    p = sub.add_parser("orbit", help="iterate the trace map from physical parameters")
    p.add_argument("--theta1", type=_angle, default="pi/3")
    p.add_argument("--theta2", type=_angle, default="pi/4")
    p.add_argument("--phi2", type=_angle, default="pi/6")
    p.add_argument("-n", type=int, default=1000)
    out_dir(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("fit", help="power-law fit of a t,value CSV")
    p.add_argument("input")
    p.add_argument("--t-min", type=float, default=None)
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--time-column", default="t")
    p.add_argument("--value-column", default="sigma")
    p.add_argument("--out", default=None, help="also write the JSON result here")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("correlate", help="autocorrelation and decay report of an orbit CSV")
    p.add_argument("input")
    p.add_argument("--max-lag", type=int, default=200)
    out_dir(p)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("sweep", help="exponent fits over a grid of coin angle pairs")
    p.add_argument("--angles", type=_angle_list, default="pi/12,pi/6,pi/4,pi/3,5pi/12")
    p.add_argument("--steps", "-T", type=int, default=8192)
    p.add_argument("--chirality", type=_chirality, default="0.7071067811865476,0.7071067811865476j")
    p.add_argument("--record-every", type=int, default=1)
    p.add_argument("--jobs", type=int, default=1)
    out_dir(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("word", help="print a Fibonacci coin word as a line of 1/2 characters")
    p.add_argument("--index", "-k", type=int, default=None)
    p.add_argument("--horizon", "-T", type=int, default=None)
    p.set_defaults(func=cmd_word)
    return parser


def _apply_config(parser, argv):
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        cfg = io.load_config(known.config)
    except OSError as exc:
        parser.exit(EXIT_IO, f"fibwalk: cannot read config: {exc}\n")
    except ValueError as exc:
        parser.error(str(exc))
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    cmd = next((a for a in argv if a in sub.choices), None)
    if cmd is None:
        return
    subparser = sub.choices[cmd]
    dests = {a.dest for a in subparser._actions}
    unknown = sorted(set(cfg) - dests)
    if unknown:
        parser.error(f"unknown config keys for '{cmd}': {', '.join(unknown)}")
    subparser.set_defaults(**cfg)


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    _apply_config(parser, argv)
    args = parser.parse_args(argv)
    if args.command == "poincare" and args.invariant is None:
        parser.error("poincare requires --invariant/-C")
    try:
        args.func(args)
    except UsageError as exc:
        print(f"fibwalk {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericalError, CapacityExceededError) as exc:
        print(f"fibwalk {args.command}: numerical validation failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"fibwalk {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
