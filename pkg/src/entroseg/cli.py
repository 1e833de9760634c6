"""Command-line interface: ``entroseg <subcommand> ...``.

Exit status is 0 on success, 1 when the input is rejected or a
computation fails, and 2 on usage errors.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import core, entropy, experiments, fbm, segmentation
from .core import SignalError

log_quiet = False


def _clean(obj):
    """Make ``obj`` strict-JSON friendly (NaN/inf become null)."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    return obj


def _emit_json(args, payload):
    text = json.dumps(_clean(payload), indent=2)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _open_out(args):
    return open(args.out, "w", newline="") if args.out else sys.stdout


def _info(msg):
    if not log_quiet:
        print(msg, file=sys.stderr)


def _load_signal(args):
    if getattr(args, "test_signal", False):
        return core.piecewise_test_signal()
    if args.input is None:
        raise SignalError("no input CSV given")
    if args.input == "-":
        return core.read_signal_csv(sys.stdin)
    return core.read_signal_csv(args.input)


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


# ---------------------------------------------------------------------------
# subcommands


def cmd_entropy(args):
    if args.demo:
        rep = entropy.entropy_linear_mean_check(args.std, args.n, args.trials, args.seed, args.noise)
        _emit_json(args, {"std": rep.std, "n": rep.n, "trials": rep.trials, "kind": rep.kind,
                          "mean_gap": rep.mean_gap, "max_gap": rep.max_gap})
        if args.svg:
            from .plots import plot_entropy
            s = entropy.noise_signal(args.std, args.n, core.trial_seeds(args.seed, 1)[0], args.noise)
            e = entropy.entropy_transform(s)
            plot_entropy(s.x, s.y, e.h, args.svg)
        return 0
    s = _load_signal(args)
    e = entropy.entropy_transform(s)
    stats = {"mean_abs_diff": e.stats.mean_abs_diff, "std_abs_diff": e.stats.std_abs_diff,
             "fitted_slope": entropy.fitted_slope(e)}
    if args.format == "json":
        _emit_json(args, {"x": e.x, "h": e.h, "stats": stats})
    else:
        fh = _open_out(args)
        try:
            core.write_columns_csv(fh, ("x", "h"), e.x, e.h)
        finally:
            if fh is not sys.stdout:
                fh.close()
        if args.stats:
            with open(args.stats, "w") as sfh:
                json.dump(_clean(stats), sfh, indent=2)
        else:
            _info(json.dumps(_clean(stats)))
    if args.svg:
        from .plots import plot_entropy
        plot_entropy(s.x, s.y, e.h, args.svg)
    return 0


def cmd_segment(args):
    s = _load_signal(args)
    x, y = s.x, s.y
    if args.entropy:
        y = entropy.entropy_transform(s).h
    cfg = segmentation.SegmentationConfig(args.r2, args.max_lines, args.min_len, args.direction)
    status = 0
    try:
        segs = segmentation.segment(x, y, cfg)
    except segmentation.TooManyLines as exc:
        print(f"error: {exc}", file=sys.stderr)
        segs = exc.segments
        status = 1
    hough = segmentation.to_hough(segs)
    labelled = segmentation.classify(hough, args.short_frac)
    labels = [lab for _, lab in labelled]
    rep = segmentation.report(segs, labelled, cfg, entropy=args.entropy, short_frac=args.short_frac)
    if args.format == "json":
        _emit_json(args, rep)
    else:
        fh = _open_out(args)
        try:
            cols = ["start", "end", "a", "b", "r2", "error", "alpha_deg", "length", "position", "label"]
            fh.write(",".join(cols) + "\n")
            for row in rep["segments"]:
                fh.write(",".join(str(row[c]) for c in cols) + "\n")
        finally:
            if fh is not sys.stdout:
                fh.close()
    if args.svg:
        from .plots import plot_segments
        plot_segments(x, y, segs, hough, labels, args.svg)
    return status


def cmd_fbm(args):
    if args.schedule:
        sched = fbm.HurstSchedule.parse(args.schedule)
        s = fbm.gen_piecewise_fbm(sched, args.seed)
    else:
        if args.hurst is None:
            raise SignalError("give --hurst or --schedule")
        norm = fbm.Normalization(args.normalization)
        s = fbm.gen_fbm(fbm.FbmSpec(args.hurst, args.n, args.variance, args.seed, norm))
    if args.format == "json":
        _emit_json(args, {"x": s.x, "y": s.y})
        return 0
    fh = _open_out(args)
    try:
        core.write_signal_csv(s, fh)
    finally:
        if fh is not sys.stdout:
            fh.close()
    return 0


def cmd_fracdim(args):
    s = _load_signal(args)
    scan = fbm.box_counting_dimension(s)
    payload = {"scales": scan.scales, "counts": scan.counts, "dimension": scan.dimension,
               "hurst_est": scan.hurst_est, "log_fit_r2": scan.log_fit.r2}
    if len(s) >= 64:
        payload["variance_scaling_hurst"] = fbm.variance_scaling_hurst(s)
    _emit_json(args, payload)
    return 0


def cmd_sweep(args):
    base = core.read_signal_csv(args.input) if args.input else core.piecewise_test_signal()
    res = experiments.noise_sweep(base, _floats(args.stds), _floats(args.rm2_grid),
                                  args.target_lines, args.trials, args.seed)
    rows = [{"noise_std": r.noise_std, "optimal_rm2": r.optimal_rm2, "lines_found": r.lines_found,
             "max_slope_err": r.max_slope_err, "success_rates": list(r.success_rates)}
            for r in res.rows]
    _emit_json(args, {"rows": rows, "rm2_grid": list(res.rm2_grid), "target_lines": res.target_lines,
                      "trials": res.trials, "seed": args.seed})
    if args.svg:
        from .plots import plot_sweep
        plot_sweep(res, args.svg)
    return 0


def cmd_tangent(args):
    cfg = segmentation.SegmentationConfig(args.r2)
    st = experiments.tangent_vs_hurst(_floats(args.hursts), args.block_len, args.trials, cfg, args.seed)
    f = st.fit
    _emit_json(args, {
        "samples": [list(p) for p in st.samples],
        "medians": [{"hurst": h, "tangent": t,
                     "oracle": float(experiments.tangent_oracle(h, args.block_len))}
                    for h, t in st.medians().items()],
        "fit": {"a": f.a, "b": f.b, "r2": f.r2, "converged": f.converged,
                "iterations": f.iterations, "a_ci": list(f.a_ci), "b_ci": list(f.b_ci)},
        "block_len": args.block_len, "trials": args.trials, "seed": args.seed,
    })
    if args.svg:
        from .plots import plot_tangent
        plot_tangent(st, args.svg)
    return 0


def cmd_beam(args):
    cfg = segmentation.SegmentationConfig(args.r2)
    fx = experiments.make_beam_fixture(args.severity, None if args.noise == 0 else args.seed,
                                       noise=args.noise)
    rep = experiments.run_beam_study(fx, cfg, args.short_frac)
    payload = rep.to_dict()
    payload.update({"severity": args.severity, "seed": args.seed, "noise": args.noise})
    if args.trials > 1:
        hits = []
        for ss in core.trial_seeds(args.seed, args.trials):
            r = experiments.run_beam_study(
                experiments.make_beam_fixture(args.severity, ss, noise=args.noise), cfg, args.short_frac)
            hits.append(r.nearest_singularity_distance)
        payload["trial_distances"] = hits
    _emit_json(args, payload)
    if args.svg:
        from .plots import plot_beam
        plot_beam(fx, rep, entropy.entropy_transform(fx.signal).h, args.svg)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--svg", help="also write an SVG figure here")
    common.add_argument("--quiet", action="store_true")

    p = argparse.ArgumentParser(prog="entroseg", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("entropy", parents=[common], help="cumulative absolute difference curve")
    e.add_argument("input", nargs="?")
    e.add_argument("--test-signal", action="store_true", help="use the built-in three-branch signal")
    e.add_argument("--stats", help="write the stats JSON here")
    e.add_argument("--demo", action="store_true", help="slope vs mean |diff| on seeded noise")
    e.add_argument("--std", type=float, default=0.1)
    e.add_argument("--n", type=int, default=100)
    e.add_argument("--trials", type=int, default=200)
    e.add_argument("--noise", choices=["gaussian", "uniform"], default="gaussian")
    e.set_defaults(func=cmd_entropy, default_format="csv")

    s = sub.add_parser("segment", parents=[common], help="detect line segments")
    s.add_argument("input", nargs="?")
    s.add_argument("--test-signal", action="store_true", help="use the built-in three-branch signal")
    s.add_argument("--r2", type=float, default=0.998)
    s.add_argument("--max-lines", type=int, default=1000)
    s.add_argument("--min-len", type=int, default=2)
    s.add_argument("--entropy", action="store_true", help="segment the entropy curve")
    s.add_argument("--short-frac", type=float, default=0.25)
    s.add_argument("--direction", choices=["left", "right"], default="left")
    s.set_defaults(func=cmd_segment, default_format="json")

    f = sub.add_parser("fbm", parents=[common], help="synthesise (piecewise) fBm")
    f.add_argument("--hurst", type=float)
    f.add_argument("--n", type=int, default=1024)
    f.add_argument("--variance", type=float, default=1.0)
    f.add_argument("--normalization", choices=[m.value for m in fbm.Normalization],
                   default="unit_step")
    f.add_argument("--schedule", help="e.g. 0.3:64,0.5:64,0.7:64,0.9:64")
    f.set_defaults(func=cmd_fbm, default_format="csv")

    d = sub.add_parser("fracdim", parents=[common], help="box-counting dimension")
    d.add_argument("input")
    d.set_defaults(func=cmd_fracdim, default_format="json")

    w = sub.add_parser("sweep", parents=[common], help="optimal R^2 vs noise level")
    w.add_argument("input", nargs="?", help="base signal CSV (default: three-branch signal)")
    w.add_argument("--stds", default="0,0.01,0.02,0.05,0.1,0.2,0.3,0.4,0.5")
    w.add_argument("--rm2-grid", default="0.9,0.95,0.97,0.98,0.99,0.995,0.998,0.999")
    w.add_argument("--target-lines", type=int, default=4)
    w.add_argument("--trials", type=int, default=50)
    w.set_defaults(func=cmd_sweep, default_format="json")

    t = sub.add_parser("tangent-study", parents=[common], help="entropy tangent vs Hurst exponent")
    t.add_argument("--hursts", default="0.3,0.4,0.5,0.6,0.7,0.8,0.9")
    t.add_argument("--block-len", type=int, default=64)
    t.add_argument("--trials", type=int, default=30)
    t.add_argument("--r2", type=float, default=0.988)
    t.set_defaults(func=cmd_tangent, default_format="json")

    b = sub.add_parser("beam", parents=[common], help="cantilever damage localisation")
    b.add_argument("--severity", type=float, default=0.05)
    b.add_argument("--noise", type=float, default=1e-5, help="noise std relative to mode amplitude")
    b.add_argument("--r2", type=float, default=0.999)
    b.add_argument("--short-frac", type=float, default=0.25)
    b.add_argument("--trials", type=int, default=1)
    b.set_defaults(func=cmd_beam, default_format="json")
    return p


def main(argv=None) -> int:
    global log_quiet
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    log_quiet = args.quiet
    if args.format is None:
        args.format = args.default_format
    if args.format == "csv" and args.func in (cmd_fracdim, cmd_sweep, cmd_tangent, cmd_beam):
        print(f"error: {args.command} writes JSON only", file=sys.stderr)
        return 2
    if args.svg and args.func in (cmd_fbm, cmd_fracdim):
        print(f"error: {args.command} has no plot output", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (SignalError, ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
