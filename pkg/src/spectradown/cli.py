"""Command-line interface: gen / psd / diagnose / compare / train / eval.

Exit codes: 0 success, 1 domain error (bad files, mismatched grids, ...),
2 usage error. All outputs are written atomically.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import __version__
from .downscaler import (
    evaluate_downscaler,
    forward,
    load_model,
    save_model,
    train_downscaler,
)
from .errors import SpectradownError
from .fields import GridField
from .grdio import atomic_write_text, read_grd
from .loss import LossConfig, total_loss
from .metrics import Ensemble, MetricsReport, crps, mae, rmse, spectral_gap
from .physics import diagnostics_report, mean_radial_spectrum
from .spectral import psd, radial_bin
from .synth import load_manifest, load_spec_toml, make_dataset
from .validation import check_channel


def worker_count() -> int:
    """Parallelism cap from SPECTRA_THREADS (default: machine cores)."""
    env = os.environ.get("SPECTRA_THREADS", "").strip()
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SpectradownError(f"SPECTRA_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _add_loss_flags(parser):
    parser.add_argument("--lambda", dest="psd_lambda", type=float, default=0.1,
                        help="weight of the spectral loss term")
    parser.add_argument("--eps", type=float, default=1e-12,
                        help="floor added inside log(PSD + eps)")
    parser.add_argument("--base-loss", choices=("l1", "l2"), default="l2",
                        help="pixel-space part of the training loss")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectradown",
        description="Spectral-loss training and physics-consistency "
                    "diagnostics for gridded downscaling experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a synthetic paired dataset")
    p_gen.add_argument("--spec", required=True, help="SynthSpec TOML file")
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.add_argument("--n", type=int, default=256, help="number of pairs")
    p_gen.add_argument("--factor", type=int, default=4, help="coarsening factor")

    p_psd = sub.add_parser("psd", help="radial power spectra of a grid file")
    p_psd.add_argument("--in", dest="inputs", required=True, nargs="+",
                       help="GRD1 input file(s)")
    p_psd.add_argument("--bins", type=int, default=None, help="number of annuli")
    p_psd.add_argument("--log-bins", action=argparse.BooleanOptionalAction,
                       default=True, help="log-spaced annuli (default)")
    p_psd.add_argument("--channel", default=None,
                       help="restrict to one channel (name or index)")
    p_psd.add_argument("--mean-over-files", action="store_true",
                       help="average spectra over all input files")
    p_psd.add_argument("--out-dir", default=".", help="where to write psd_<channel>.csv")

    p_diag = sub.add_parser("diagnose", help="physics-consistency spectra truth vs pred")
    p_diag.add_argument("--truth", required=True)
    p_diag.add_argument("--pred", required=True)
    p_diag.add_argument("--method", choices=("spectral", "fd"), default="spectral")
    p_diag.add_argument("--bins", type=int, default=None)
    p_diag.add_argument("--eps", type=float, default=1e-12)
    p_diag.add_argument("--out", default="diagnostics.csv")

    p_cmp = sub.add_parser("compare", help="MAE/RMSE/CRPS and spectral gaps")
    p_cmp.add_argument("--truth", required=True)
    p_cmp.add_argument("--pred", required=True, action="append",
                       help="prediction file; repeat for ensemble members")
    group = p_cmp.add_mutually_exclusive_group()
    group.add_argument("--fair", dest="estimator", action="store_const",
                       const="fair", help="fair CRPS estimator")
    group.add_argument("--standard", dest="estimator", action="store_const",
                       const="standard", help="standard CRPS estimator")
    p_cmp.set_defaults(estimator="auto")
    p_cmp.add_argument("--bins", type=int, default=None)
    p_cmp.add_argument("--eps", type=float, default=1e-12)
    p_cmp.add_argument("--out", default="metrics.csv")

    p_train = sub.add_parser("train", help="fit the toy downscaler")
    p_train.add_argument("--data", required=True, help="training manifest.csv")
    p_train.add_argument("--val-data", default=None, help="validation manifest.csv")
    _add_loss_flags(p_train)
    p_train.add_argument("--epochs", type=int, default=100)
    p_train.add_argument("--lr", type=float, default=0.1)
    p_train.add_argument("--momentum", type=float, default=0.9)
    p_train.add_argument("--batch-size", type=int, default=0, help="0 = full batch")
    p_train.add_argument("--kernel-size", type=int, default=5)
    p_train.add_argument("--seed", type=int, default=7)
    p_train.add_argument("--out", default="model.bin", help="TDS1 model file")
    p_train.add_argument("--history", default="history.csv")

    p_eval = sub.add_parser("eval", help="score a trained model on a dataset")
    p_eval.add_argument("--model", required=True, help="TDS1 model file")
    p_eval.add_argument("--data", required=True, help="manifest.csv to score on")
    _add_loss_flags(p_eval)
    p_eval.add_argument("--bins", type=int, default=None)
    p_eval.add_argument("--metrics", default="metrics.csv")
    p_eval.add_argument("--diagnostics", default="diagnostics.csv")

    return parser


def _check_writable(*paths) -> None:
    """Fail fast (before any compute) if an output location cannot exist."""
    for path in paths:
        parent = os.path.dirname(os.path.abspath(path))
        if not os.path.isdir(parent):
            raise SpectradownError(f"output directory does not exist: {parent}")


def _psd_csv(spectrum) -> str:
    lines = ["k,psd,count"]
    for center, power, count in zip(
        spectrum.bin_centers, spectrum.bin_power, spectrum.bin_counts
    ):
        lines.append(f"{float(center)!r},{float(power)!r},{int(count)}")
    return "\n".join(lines) + "\n"


def cmd_gen(args) -> int:
    spec = load_spec_toml(args.spec)
    _, rows = make_dataset(spec, args.n, args.factor, args.out, workers=worker_count())
    print(f"wrote {len(rows)} pairs and manifest.csv to {args.out}")
    return 0


def cmd_psd(args) -> int:
    fields = [read_grd(path) for path in args.inputs]
    if not args.mean_over_files and len(fields) > 1:
        raise SpectradownError(
            "multiple inputs need --mean-over-files (or run once per file)"
        )
    first = fields[0]
    scale = "log" if args.log_bins else "linear"
    if args.channel is None:
        channels = list(first.channel_names)
    else:
        try:
            requested = int(args.channel)
        except ValueError:
            requested = args.channel
        channels = [first.channel_names[check_channel(first, requested)]]
    os.makedirs(args.out_dir, exist_ok=True)
    for channel in channels:
        spectra = [radial_bin(psd(f, channel), args.bins, scale) for f in fields]
        spectrum = spectra[0] if len(spectra) == 1 else mean_radial_spectrum(spectra)
        out_path = os.path.join(args.out_dir, f"psd_{channel}.csv")
        atomic_write_text(out_path, _psd_csv(spectrum))
        print(f"wrote {out_path}")
    return 0


def cmd_diagnose(args) -> int:
    _check_writable(args.out)
    truth = read_grd(args.truth)
    pred = read_grd(args.pred)
    method = "spectral" if args.method == "spectral" else "central_fd"
    report = diagnostics_report(truth, pred, method=method, n_bins=args.bins, eps=args.eps)
    atomic_write_text(args.out, report.to_csv())
    print(f"wrote {args.out}")
    return 0


def cmd_compare(args) -> int:
    _check_writable(args.out)
    truth = read_grd(args.truth)
    members = tuple(read_grd(path) for path in args.pred)
    ensemble = Ensemble(members=members)
    mean_values = np.mean(ensemble.stacked(), axis=0)
    mean_pred = GridField(values=mean_values, dx=truth.dx, channel_names=truth.channel_names)
    report = MetricsReport(
        mae=mae(mean_pred, truth),
        rmse=rmse(mean_pred, truth),
        crps=crps(ensemble, truth, estimator=args.estimator),
        gaps=spectral_gap(mean_pred, truth, n_bins=args.bins, eps=args.eps),
        n_samples=1,
    )
    atomic_write_text(args.out, report.to_csv())
    print(f"wrote {args.out}")
    return 0


def cmd_train(args) -> int:
    _check_writable(args.out, args.history)
    pairs = load_manifest(args.data)
    val_pairs = load_manifest(args.val_data) if args.val_data else None
    cfg = LossConfig(psd_lambda=args.psd_lambda, epsilon=args.eps, base_loss=args.base_loss)
    params, history = train_downscaler(
        pairs,
        cfg=cfg,
        epochs=args.epochs,
        learning_rate=args.lr,
        momentum=args.momentum,
        batch_size=args.batch_size,
        kernel_size=args.kernel_size,
        seed=args.seed,
        val_pairs=val_pairs,
    )
    save_model(args.out, params)
    atomic_write_text(args.history, history.to_csv())
    final = history.total_loss[-1] if len(history) else float("nan")
    print(f"wrote {args.out} and {args.history} (final loss {final:.6g})")
    return 0


def cmd_eval(args) -> int:
    _check_writable(args.metrics, args.diagnostics)
    params = load_model(args.model)
    pairs = load_manifest(args.data)
    report = evaluate_downscaler(params, pairs, eps=args.eps, n_bins=args.bins)
    atomic_write_text(args.metrics, report.metrics.to_csv())
    atomic_write_text(args.diagnostics, report.diagnostics.to_csv())
    cfg = LossConfig(psd_lambda=args.psd_lambda, epsilon=args.eps, base_loss=args.base_loss)
    losses = [
        total_loss(pair.target, forward(params, pair.input), cfg)[0] for pair in pairs
    ]
    print(f"wrote {args.metrics} and {args.diagnostics} (mean total loss {np.mean(losses):.6g})")
    return 0


COMMANDS = {
    "gen": cmd_gen,
    "psd": cmd_psd,
    "diagnose": cmd_diagnose,
    "compare": cmd_compare,
    "train": cmd_train,
    "eval": cmd_eval,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except SpectradownError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
