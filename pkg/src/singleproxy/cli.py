"""Command-line entry point: ``singleproxy {simulate,fit,evaluate,benchmark}``.

Exit codes: 0 success, 1 usage error, 2 data/input error, 3 numerical failure.
"""

import argparse
import csv
import sys

import numpy as np

from . import experiment, krr, skpv, spmmr
from .data import STAGE1, load_csv, save_csv, split_indices
from .errors import DataError, DimensionError, NotPSDError, SingularMatrixError
from .kernels import Bandwidths, median_heuristic
from .serialize import dumps, file_sha256, load_json, model_from_dict, model_to_dict, save_json
from .structural import curve_mse, percentile_grid, structural_curve
from .synth import PHI_CHOICES, SynthConfig, generate, true_structural

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _str_list(text):
    return [s.strip() for s in text.split(",") if s.strip()]


def cmd_simulate(args):
    cfg = SynthConfig(n=args.n, noise_sigma=args.noise, seed=args.seed, phi=args.phi)
    d, u = generate(cfg, return_confounder=True)
    save_csv(d, args.out, u=u if args.debug_u else None)
    return EXIT_OK


def _bandwidths(args, d):
    """Explicit bandwidths where given, scaled median heuristic for the rest."""
    given = {"sigma_a": args.sigma_a, "sigma_y": args.sigma_y, "sigma_w": args.sigma_w}
    columns = {"sigma_a": d.a, "sigma_y": d.y, "sigma_w": d.w}
    values = {
        name: value if value is not None else args.bandwidth_scale * median_heuristic(columns[name])
        for name, value in given.items()
    }
    return Bandwidths(**values)


def cmd_fit(args):
    d = load_csv(args.data, STAGE1)
    bw = _bandwidths(args, d)
    stage_indices = None
    if args.split is not None:
        if args.method != "skpv":
            raise UsageError("--split only applies to --method skpv")
        stage_indices = split_indices(len(d), args.split, args.seed)
    if args.method == "krr":
        model = krr.fit_krr(d.a, d.y, lam=args.lam, sigma_a=bw.sigma_a)
    elif args.method == "skpv":
        if stage_indices is None:
            model = skpv.fit_skpv(d, lam=args.lam, eta=args.eta, bw=bw)
        else:
            d1 = d.subset(stage_indices[0])
            d2 = d.subset(stage_indices[1]).stage_two()
            model = skpv.fit_skpv(d1, d2, lam=args.lam, eta=args.eta, bw=bw)
    else:
        model = spmmr.fit_spmmr(d, eta=args.eta, bw=bw)
    obj = model_to_dict(model, bandwidths=bw, data_sha256=file_sha256(args.data), stage_indices=stage_indices)
    save_json(obj, args.out)
    return EXIT_OK


def _grid(args, model, data):
    if args.grid_min is not None or args.grid_max is not None:
        if args.grid_min is None or args.grid_max is None:
            raise UsageError("--grid-min and --grid-max go together")
        if args.grid_num == 1:
            return np.array([args.grid_min])
        return np.linspace(args.grid_min, args.grid_max, args.grid_num)
    if data is not None:
        return percentile_grid(data.a, num=args.grid_num)
    anchors = model.anchors if isinstance(model, krr.KrrModel) else (
        model.stage2_a if isinstance(model, skpv.SkpvModel) else model.anchors_a
    )
    return percentile_grid(anchors, num=args.grid_num)


def cmd_evaluate(args):
    model = model_from_dict(load_json(args.model))
    data = load_csv(args.data, STAGE1) if args.data else None
    grid = _grid(args, model, data)
    proxies = data.w if data is not None else None
    curve = structural_curve(model, proxies, grid)
    columns = [curve.grid, curve.values]
    header = ["a", "f_hat"]
    truth = None
    if args.truth == "synthetic":
        truth = true_structural(curve.grid)
        columns.append(truth)
        header.append("f_true")
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in zip(*columns):
            writer.writerow([repr(float(v)) for v in row])
    if truth is not None:
        print(f"mse={curve_mse(curve, truth)!r}")
    return EXIT_OK


def cmd_benchmark(args):
    methods = ["regression" if m == "krr" else m for m in args.methods]
    report = experiment.run_benchmark(
        n=args.n, reps=args.reps, noise=args.noise, seed=args.seed, methods=methods,
        lam=args.lam, eta=args.eta, spmmr_eta=args.spmmr_eta, krr_lambda=args.krr_lambda,
        bandwidth_scale=args.bandwidth_scale, phi=args.phi, grid_num=args.grid_num,
        std_mode=args.std, parallelism=args.parallelism, timing=args.timing,
    )
    text = dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    for c in report["cells"]:
        mean = "n/a" if c["mean_mse"] is None else f"{c['mean_mse']:.4f} ({c['std_mse']:.4f})"
        print(f"{c['method']:>10s}  sigma={c['noise']:<4g}  mse={mean}", file=sys.stderr)
    if any(c["replications"] == 0 for c in report["cells"]):
        return EXIT_NUMERIC
    return EXIT_OK


def build_parser():
    p = _Parser(prog="singleproxy", description="Kernel single-proxy causal effect estimation.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("simulate", help="draw synthetic data to CSV")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--noise", type=float, default=0.0)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--phi", choices=PHI_CHOICES, default="cdf")
    s.add_argument("--out", required=True)
    s.add_argument("--debug-u", action="store_true", help="append the hidden confounder as column u")
    s.set_defaults(func=cmd_simulate)

    f = sub.add_parser("fit", help="fit a model to a stage-1 CSV")
    f.add_argument("--method", choices=("krr", "skpv", "spmmr"), required=True)
    f.add_argument("--data", required=True)
    f.add_argument("--lambda", dest="lam", type=float, default=skpv.DEFAULT_LAMBDA)
    f.add_argument("--eta", type=float, default=skpv.DEFAULT_ETA)
    f.add_argument("--sigma-a", type=float)
    f.add_argument("--sigma-y", type=float)
    f.add_argument("--sigma-w", type=float)
    f.add_argument("--bandwidth-scale", type=float, default=1.0,
                   help="multiplier on the median-heuristic bandwidths")
    f.add_argument("--split", type=float, help="stage-1 share of rows (SKPV only)")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--out", required=True)
    f.set_defaults(func=cmd_fit)

    e = sub.add_parser("evaluate", help="structural curve from a saved model")
    e.add_argument("--model", required=True)
    e.add_argument("--data", help="stage-1 CSV supplying proxies and the default grid")
    e.add_argument("--grid-num", type=int, default=100)
    e.add_argument("--grid-min", type=float)
    e.add_argument("--grid-max", type=float)
    e.add_argument("--truth", choices=("synthetic", "none"), default="none")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_evaluate)

    b = sub.add_parser("benchmark", help="noise sweep over synthetic replications")
    b.add_argument("--n", type=int, default=1000)
    b.add_argument("--reps", type=int, default=20)
    b.add_argument("--noise", type=_float_list, default=list(experiment.DEFAULT_NOISE))
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--methods", type=_str_list, default=list(experiment.METHODS))
    b.add_argument("--lambda", dest="lam", type=float, default=skpv.DEFAULT_LAMBDA)
    b.add_argument("--eta", type=float, default=skpv.DEFAULT_ETA)
    b.add_argument("--spmmr-eta", type=float, default=spmmr.DEFAULT_ETA)
    b.add_argument("--krr-lambda", type=float, default=krr.DEFAULT_LAMBDA)
    b.add_argument("--bandwidth-scale", type=float, default=1.0)
    b.add_argument("--phi", choices=PHI_CHOICES, default="cdf")
    b.add_argument("--grid-num", type=int, default=100)
    b.add_argument("--std", choices=("stderr", "raw"), default="stderr")
    b.add_argument("--parallelism", type=int, default=1)
    b.add_argument("--timing", action="store_true", help="record wall-clock time in the report")
    b.add_argument("--out")
    b.set_defaults(func=cmd_benchmark)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"singleproxy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SingularMatrixError, NotPSDError, np.linalg.LinAlgError) as exc:
        print(f"singleproxy: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, DimensionError, OSError, ValueError) as exc:
        print(f"singleproxy: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
