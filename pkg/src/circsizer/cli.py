"""Command-line interface: significance maps from files or simulated data.

Subcommands:

    circsizer density    --input data.csv | --scenario D2 --n 200
    circsizer regression --input data.csv | --scenario R1 --n 200
    circsizer simulate   --scenario D2 --n 200 --out sample.csv

Progress goes to stderr; results go to the requested output files and a
feature summary to stdout.  Exit status is 0 iff every requested output
was written.
"""

import argparse
import dataclasses
import os
import sys

import numpy as np

from . import dataio, simgen
from .inference import BootstrapConfig, substream
from .render import RenderSpec, render_svg
from .sizer import (
    DEFAULT_ESS_THRESHOLD,
    DEFAULT_NGRID_DENSITY,
    DEFAULT_NGRID_REGRESSION,
    SmoothingGrid,
    build_map,
    default_nu_grid,
    detect_all_features,
)

__all__ = ["main", "parse_nu_spec"]


def parse_nu_spec(text):
    """Parse a nu grid: '1,5,10' or 'min:max:count' or 'min:max:count:log'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            raise ValueError(f"bad nu spec {text!r}; use lo:hi:count[:log]")
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
        if len(parts) == 4:
            return np.geomspace(lo, hi, count)
        return np.linspace(lo, hi, count)
    vals = np.array([float(v) for v in text.split(",")])
    if vals.size == 0:
        raise ValueError("empty nu spec")
    return vals


def _add_common(p, mode):
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", help="CSV file to ingest")
    src.add_argument("--scenario", help="simulated scenario name (e.g. D2, R1)")
    p.add_argument("--n", type=int, default=200, help="sample size for --scenario")
    p.add_argument("--nu", default=None, help="nu grid: list or lo:hi:count[:log]")
    ngrid_default = DEFAULT_NGRID_DENSITY if mode == "density" else DEFAULT_NGRID_REGRESSION
    p.add_argument("--ngrid", type=int, default=ngrid_default)
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--B", type=int, default=500)
    p.add_argument("--B2", type=int, default=250)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ess-threshold", type=float, default=DEFAULT_ESS_THRESHOLD)
    p.add_argument("--out-json", required=True, help="map output path (JSON)")
    p.add_argument("--out-svg", default=None, help="optional rendered map (SVG)")
    p.add_argument("--labels", type=int, choices=(1, 2, 3, 4), default=3)
    p.add_argument("--convention", choices=("compass", "math"), default="compass",
                   help="display convention for the SVG and ingest default")
    p.add_argument("--angle-unit", choices=("degrees", "radians"), default="degrees")
    p.add_argument("--angle-column", default="angle")
    p.add_argument("--response-column", default="response")
    p.add_argument("--lag", type=int, default=None, help="row-lag decorrelation subsampling")
    p.add_argument("--sentinel", type=float, default=None,
                   help="raw angle value marking unusable rows (dropped)")
    p.add_argument("--workers", type=int, default=max(1, os.cpu_count() or 1))


def _load_data(args, mode):
    if args.input is not None:
        spec = dataio.IngestSpec(
            angle_column=args.angle_column,
            response_column=args.response_column if mode == "regression" else None,
            angle_unit=args.angle_unit,
            angle_convention=args.convention,
            lag=args.lag,
            sentinel=args.sentinel,
        )
        data = dataio.ingest(args.input, spec)
        provenance = {"source": "file", "path": args.input}
    elif mode == "density":
        spec = simgen.scenario(args.scenario)
        data = simgen.sample_mixture(spec, args.n, substream(args.seed, 0))
        provenance = {
            "source": "scenario",
            "scenario": args.scenario,
            "standin": spec.standin,
            "n": args.n,
        }
    else:
        model = simgen.regression_scenario(args.scenario)
        data = simgen.sample_regression(model, args.n, substream(args.seed, 0))
        provenance = {
            "source": "scenario",
            "scenario": args.scenario,
            "standin": model.standin,
            "n": args.n,
        }
    return data, provenance


def _print_features(sizer_map):
    for feats in detect_all_features(sizer_map):
        peaks = ", ".join(f"{p:.3f}" for p in feats.peaks) or "-"
        troughs = ", ".join(f"{t:.3f}" for t in feats.troughs) or "-"
        print(
            f"nu={feats.nu:g}: {len(feats.peaks)} peak(s) [{peaks}], "
            f"{len(feats.troughs)} trough(s) [{troughs}]"
        )


def _run_map(args, mode):
    data, provenance = _load_data(args, mode)
    nu_grid = parse_nu_spec(args.nu) if args.nu else default_nu_grid()
    grid = SmoothingGrid(args.ngrid, nu_grid)
    config = BootstrapConfig(alpha=args.alpha, B=args.B, B2=args.B2, seed=args.seed)
    print(
        f"building {mode} map: {nu_grid.size} nu values x {args.ngrid} angles, "
        f"B={args.B}" + (f", B2={args.B2}" if mode == "regression" else ""),
        file=sys.stderr,
    )
    sizer_map = build_map(
        data, mode, grid, config, ess_threshold=args.ess_threshold, workers=args.workers
    )
    # workers deliberately not echoed: it must not affect output bytes
    provenance["run"] = {
        "mode": mode,
        "nu_grid": [float(v) for v in nu_grid],
        "ngrid": args.ngrid,
        "alpha": args.alpha,
        "B": args.B,
        "B2": args.B2,
        "seed": args.seed,
        "ess_threshold": args.ess_threshold,
        "angle_unit": args.angle_unit,
        "convention": args.convention,
        "lag": args.lag,
    }
    sizer_map = dataclasses.replace(sizer_map, provenance=provenance)

    dataio.export_map(sizer_map, args.out_json)
    print(f"wrote {args.out_json}", file=sys.stderr)
    if args.out_svg:
        spec = RenderSpec(label_type=args.labels, display_convention=args.convention)
        with open(args.out_svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(sizer_map, spec))
        print(f"wrote {args.out_svg}", file=sys.stderr)
    _print_features(sizer_map)
    return 0


def _run_simulate(args):
    names = simgen.scenario_names()
    rng = substream(args.seed, 0)
    if args.scenario in names:
        sample = simgen.sample_mixture(simgen.scenario(args.scenario), args.n, rng)
        rows = [(a,) for a in sample.angles]
        header = ["angle"]
    else:
        try:
            model = simgen.regression_scenario(args.scenario)
        except KeyError:
            valid = ", ".join(names + ["R1"])
            print(
                f"error: unknown scenario {args.scenario!r}; valid names: {valid}",
                file=sys.stderr,
            )
            return 1
        sample = simgen.sample_regression(model, args.n, rng)
        rows = list(zip(sample.angles, sample.responses))
        header = ["angle", "response"]
    header += ["scenario", "seed"]
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            vals = [repr(float(v)) for v in row] + [args.scenario, str(args.seed)]
            fh.write(",".join(vals) + "\n")
    print(f"wrote {args.out} ({len(rows)} rows)", file=sys.stderr)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="circsizer",
        description="Scale-space significance maps for circular data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_den = sub.add_parser("density", help="significance map of a circular density")
    _add_common(p_den, "density")

    p_reg = sub.add_parser(
        "regression", help="significance map of a circular-covariate regression"
    )
    _add_common(p_reg, "regression")

    p_sim = sub.add_parser("simulate", help="write a simulated sample as CSV")
    p_sim.add_argument("--scenario", required=True)
    p_sim.add_argument("--n", type=int, default=200)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", required=True)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return _run_simulate(args)
        if args.command in ("density", "regression"):
            return _run_map(args, args.command)
        raise AssertionError(args.command)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename}", file=sys.stderr)
        return 1
    except (KeyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
