"""Command-line pipeline: simulate -> fit -> summarize -> metrics -> roc.

Every command writes ``manifest.json`` beside its outputs. ``hsghs replay
MANIFEST --out-dir DIR`` re-runs the recorded command with its outputs
redirected to ``DIR``; on the same build the outputs are byte-identical.

Exit codes: 0 success, 1 runtime error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .io import read_csv, read_samples, write_csv, write_json, write_samples
from .metrics import metrics_report
from .sampler import geweke_z, run_chain
from .simulate import simulate_setting
from .summary import (credible_interval, default_threshold_grid, posterior_mean,
                      roc_sweep_bayes, roc_sweep_threshold, select_by_interval)
from .types import Dataset, GibbsConfig, GroundTruth, PosteriorSamples

log = logging.getLogger("hsghs")

OUTPUT_KEYS = ("out_dir", "out_samples", "out_summary", "out")
ROC_LEVELS = np.round(np.arange(1, 100) / 100, 2)


def _manifest(args, outputs, seconds, notes=()):
    params = {k: v for k, v in vars(args).items() if k != "func"}
    return {
        "command": args.command,
        "params": params,
        "seed": params.get("seed"),
        "outputs": [str(o) for o in outputs],
        "wall_clock_seconds": seconds,
        "version": __version__,
        "notes": list(notes),
    }


def cmd_simulate(args):
    t0 = time.perf_counter()
    sim = simulate_setting(args.n, args.p, args.q, structure=args.structure,
                           coef=args.coef, sparsity=args.sparsity,
                           seed=args.seed, rho=args.rho)
    out = Path(args.out_dir)
    files = {"X.csv": sim.X, "Y.csv": sim.Y, "B_true.csv": sim.B0,
             "Omega_true.csv": sim.Omega0, "X_test.csv": sim.X_test,
             "Y_test.csv": sim.Y_test}
    for name, M in files.items():
        write_csv(out / name, M)
    write_json(out / "manifest.json",
               _manifest(args, [out / f for f in files], time.perf_counter() - t0, sim.notes))


def _fit_one(X, Y, config):
    return run_chain(Dataset(X, Y), config)


def _chain_path(path: Path, i: int, chains: int) -> Path:
    return path if chains == 1 else path.with_name(f"{path.stem}.chain{i}{path.suffix}")


def cmd_fit(args):
    t0 = time.perf_counter()
    X, Y = read_csv(args.x), read_csv(args.y)
    ds = Dataset(X, Y)
    configs = [GibbsConfig(burnin=args.burnin, nmc=args.nmc, thin=args.thin,
                           seed=args.seed + i, pd_jitter=args.pd_jitter)
               for i in range(args.chains)]
    if args.chains == 1:
        results = [run_chain(ds, configs[0])]
    else:
        with ProcessPoolExecutor(max_workers=args.chains) as pool:
            results = list(pool.map(_fit_one, [X] * args.chains, [Y] * args.chains, configs))
    out_samples = Path(args.out_samples)
    paths = []
    for i, res in enumerate(results):
        path = _chain_path(out_samples, i, args.chains)
        write_samples(path, res)
        paths.append(path)
    seconds = time.perf_counter() - t0

    merged = PosteriorSamples.merge(results)
    B_hat, Omega_hat = posterior_mean(merged)
    chain_diag = []
    for res in results:
        post = res.loglik[args.burnin:]
        try:
            z = geweke_z(post)
        except ValueError:
            z = None
        chain_diag.append({"seed": res.config.seed,
                           "loglik_mean": float(post.mean()),
                           "loglik_sd": float(post.std(ddof=1)) if post.size > 1 else 0.0,
                           "loglik_geweke_z": z})
    summary = {"dims": {"n": ds.n, "p": ds.p, "q": ds.q},
               "B_hat": B_hat.tolist(), "Omega_hat": Omega_hat.tolist(),
               "chains": chain_diag, "runtime_seconds": seconds,
               "samples": [str(p) for p in paths]}
    write_json(args.out_summary, summary)
    write_json(out_samples.parent / "manifest.json",
               _manifest(args, paths + [Path(args.out_summary)], seconds))


def cmd_summarize(args):
    t0 = time.perf_counter()
    samples = PosteriorSamples.merge([read_samples(p) for p in args.samples])
    B_hat, Omega_hat = posterior_mean(samples, stat=args.stat)
    sel = select_by_interval(credible_interval(samples, args.ci_level))
    out = Path(args.out_dir)
    files = {"Bhat.csv": B_hat, "Omegahat.csv": Omega_hat,
             "B_select.csv": sel.b_selected.astype(int),
             "Omega_select.csv": sel.omega_selected.astype(int)}
    for name, M in files.items():
        write_csv(out / name, M)
    write_json(out / "manifest.json",
               _manifest(args, [out / f for f in files], time.perf_counter() - t0))


def cmd_metrics(args):
    t0 = time.perf_counter()
    truth_dir, est_dir, test_dir = Path(args.truth_dir), Path(args.estimate_dir), Path(args.test_dir)
    truth = GroundTruth(read_csv(truth_dir / "B_true.csv"), read_csv(truth_dir / "Omega_true.csv"))
    report = metrics_report(
        truth,
        read_csv(est_dir / "Bhat.csv"), read_csv(est_dir / "Omegahat.csv"),
        read_csv(truth_dir / "X.csv"),
        read_csv(test_dir / "X_test.csv"), read_csv(test_dir / "Y_test.csv"),
        read_csv(est_dir / "B_select.csv") != 0, read_csv(est_dir / "Omega_select.csv") != 0,
    )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(report.to_json() + "\n")
    write_json(out.parent / "manifest.json", _manifest(args, [out], time.perf_counter() - t0))


def cmd_roc(args):
    t0 = time.perf_counter()
    truth_dir = Path(args.truth_dir)
    truth = GroundTruth(read_csv(truth_dir / "B_true.csv"), read_csv(truth_dir / "Omega_true.csv"))
    out = Path(args.out_dir)
    targets = {"B": truth.b_support, "Omega": truth.omega_support}
    written = []
    if args.mode == "bayes":
        if not args.samples:
            raise ValueError("bayes mode needs --samples")
        samples = PosteriorSamples.merge([read_samples(p) for p in args.samples])
        for target, mask in targets.items():
            pts = roc_sweep_bayes(samples, mask, target, ROC_LEVELS)
            rows = np.column_stack([ROC_LEVELS, np.array(pts)])
            write_csv(out / f"roc_{target}.csv", rows)
            written.append(out / f"roc_{target}.csv")
    else:
        if not args.estimate_dir:
            raise ValueError("threshold mode needs --estimate-dir")
        est_dir = Path(args.estimate_dir)
        estimates = {"B": read_csv(est_dir / "Bhat.csv"), "Omega": read_csv(est_dir / "Omegahat.csv")}
        for target, mask in targets.items():
            grid = default_threshold_grid(estimates[target], target)
            pts = roc_sweep_threshold(estimates[target], mask, grid, target)
            write_csv(out / f"roc_{target}.csv", np.column_stack([grid, np.array(pts)]))
            written.append(out / f"roc_{target}.csv")
    write_json(out / "manifest.json", _manifest(args, written, time.perf_counter() - t0))


def cmd_replay(args):
    manifest = json.loads(Path(args.manifest).read_text())
    params = dict(manifest["params"])
    if args.out_dir is not None:
        new_dir = Path(args.out_dir)
        for key in OUTPUT_KEYS:
            if params.get(key) is None:
                continue
            params[key] = str(new_dir if key == "out_dir" else new_dir / Path(params[key]).name)
    replayed = argparse.Namespace(**params)
    COMMANDS[replayed.command](replayed)


COMMANDS = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "summarize": cmd_summarize,
    "metrics": cmd_metrics,
    "roc": cmd_roc,
}


def _level(text):
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError(f"level must be in (0, 1), got {value}")
    return value


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def build_parser():
    parser = argparse.ArgumentParser(prog="hsghs", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate one simulated data set")
    p.add_argument("--n", type=_positive_int, default=100)
    p.add_argument("--p", type=_positive_int, default=200)
    p.add_argument("--q", type=_positive_int, default=25)
    p.add_argument("--structure", choices=["ar1", "cliques", "star"], default="ar1")
    p.add_argument("--coef", choices=["uniform", "const5"], default="uniform")
    p.add_argument("--sparsity", type=float, default=0.05)
    p.add_argument("--rho", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("fit", help="run the Gibbs sampler")
    p.add_argument("--x", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--burnin", type=int, default=1000)
    p.add_argument("--nmc", type=_positive_int, default=5000)
    p.add_argument("--thin", type=_positive_int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--chains", type=_positive_int, default=1)
    p.add_argument("--pd-jitter", type=float, default=0.0)
    p.add_argument("--out-samples", required=True)
    p.add_argument("--out-summary", required=True)

    p = sub.add_parser("summarize", help="point estimates and interval selection")
    p.add_argument("--samples", nargs="+", required=True)
    p.add_argument("--ci-level", type=_level, default=0.75)
    p.add_argument("--stat", choices=["mean", "median"], default="mean")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("metrics", help="score estimates against the truth")
    p.add_argument("--truth-dir", required=True)
    p.add_argument("--estimate-dir", required=True)
    p.add_argument("--test-dir", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("roc", help="ROC curves for B and Omega")
    p.add_argument("--samples", nargs="+")
    p.add_argument("--estimate-dir")
    p.add_argument("--truth-dir", required=True)
    p.add_argument("--mode", choices=["bayes", "threshold"], default="bayes")
    p.add_argument("--out-dir", required=True)

    p = sub.add_parser("replay", help="re-run a command from its manifest")
    p.add_argument("manifest")
    p.add_argument("--out-dir")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    verbose = args.verbose
    del args.verbose
    try:
        if args.command == "replay":
            cmd_replay(args)
        else:
            COMMANDS[args.command](args)
    except Exception as exc:  # noqa: BLE001 - report and map to exit code 1
        if verbose:
            log.exception("command failed")
        print(f"hsghs {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
