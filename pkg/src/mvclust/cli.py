"""Command line front end: ``synth``, ``fit``, ``score``, and ``bench``.

Exit codes are category-coded: 0 success, 2 usage errors (bad flags or
missing arguments, raised by the parser), 3 data or configuration errors
(unreadable or inconsistent dataset files, invalid hyperparameters), 4 trial
failures inside a run, 1 anything unexpected.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .aamvfcm import PruningFitResult
from .amvfcm import HyperParams
from .data import DatasetError, save_dataset
from .harness import (
    ExperimentConfig,
    SynthSource,
    TrialError,
    emit_report,
    render_table,
    report_records,
    run_experiment,
)
from .metrics import score_all
from .snr import DEFAULT_CLAMP
from .synth import NoiseSpec, append_noise, default_benchmark_spec, generate

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_TRIAL = 4
EXIT_UNEXPECTED = 1


def _parse_clamp(text):
    try:
        lo, hi = (float(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'lo,hi' with two numbers, got {text!r}"
        ) from None
    return (lo, hi)


def _parse_beta(text):
    if text == "auto":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'auto' or a number, got {text!r}"
        ) from None


def _common_flags(parser):
    parser.add_argument("--out-dir", type=Path, default=None,
                        help="directory for report and dataset files")
    parser.add_argument("--format", choices=("table", "records"), default="table",
                        help="stdout format for run summaries")
    parser.add_argument("--jobs", type=int, default=1,
                        help="parallel trials (threads)")


def _fit_flags(parser):
    parser.add_argument("--config", required=True, type=Path,
                        help="dataset manifest path")
    parser.add_argument("--clusters", required=True, type=int)
    parser.add_argument("--eta", type=float, default=0.025)
    parser.add_argument("--beta", type=_parse_beta, default=None,
                        help="'auto' (per-view d/n) or a fixed positive value")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--max-iters", type=int, default=100)
    parser.add_argument("--epsilon", type=float, default=1e-6)
    parser.add_argument("--delta-clamp", type=_parse_clamp, default=DEFAULT_CLAMP,
                        metavar="LO,HI")
    parser.add_argument("--normalize", action=argparse.BooleanOptionalAction,
                        default=False, help="min-max normalize views (default off)")
    parser.add_argument("--dump-weights", action="store_true",
                        help="include dispersion ratios and learned weights in the report")
    parser.add_argument("--prune-warmup", type=int, default=0,
                        help="iterations before pruning may start (aamvfcm only)")
    parser.add_argument("--theta-scale", type=float, default=1.0,
                        help="multiplier on the adaptive pruning threshold (aamvfcm only)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mvclust",
        description="Entropy-regularized multi-view fuzzy clustering toolkit",
    )
    parser.add_argument("--version", action="version", version=f"mvclust {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_synth = sub.add_parser("synth", help="generate the synthetic benchmark")
    p_synth.add_argument("--n", required=True, type=int)
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.add_argument("--noise-features", type=int, default=0)
    p_synth.add_argument("--noise-low", type=float, default=0.02)
    p_synth.add_argument("--noise-high", type=float, default=0.05)
    _common_flags(p_synth)

    p_fit = sub.add_parser("fit", help="fit one model on a dataset manifest")
    p_fit.add_argument("--algo", choices=("amvfcm", "aamvfcm"), required=True)
    _fit_flags(p_fit)
    _common_flags(p_fit)

    p_score = sub.add_parser("score", help="compare two label files")
    p_score.add_argument("--truth", required=True, type=Path)
    p_score.add_argument("--pred", required=True, type=Path)
    _common_flags(p_score)

    p_bench = sub.add_parser("bench", help="multi-trial benchmark run")
    p_bench.add_argument("--algo", choices=("amvfcm", "aamvfcm"), required=True)
    p_bench.add_argument("--config", type=Path, default=None,
                         help="dataset manifest path")
    p_bench.add_argument("--synth-n", type=int, default=None,
                         help="use the synthetic benchmark with this sample count")
    p_bench.add_argument("--synth-seed", type=int, default=0)
    p_bench.add_argument("--noise-features", type=int, default=0)
    p_bench.add_argument("--noise-low", type=float, default=0.02)
    p_bench.add_argument("--noise-high", type=float, default=0.05)
    p_bench.add_argument("--clusters", required=True, type=int)
    p_bench.add_argument("--eta", type=float, default=0.025)
    p_bench.add_argument("--beta", type=_parse_beta, default=None)
    p_bench.add_argument("--trials", type=int, default=1)
    p_bench.add_argument("--seed-base", type=int, default=0)
    p_bench.add_argument("--max-iters", type=int, default=100)
    p_bench.add_argument("--epsilon", type=float, default=1e-6)
    p_bench.add_argument("--delta-clamp", type=_parse_clamp, default=DEFAULT_CLAMP,
                         metavar="LO,HI")
    p_bench.add_argument("--normalize", action=argparse.BooleanOptionalAction,
                         default=False)
    p_bench.add_argument("--dump-weights", action="store_true")
    p_bench.add_argument("--prune-warmup", type=int, default=0)
    p_bench.add_argument("--theta-scale", type=float, default=1.0)
    _common_flags(p_bench)
    return parser


def _cmd_synth(args):
    if args.out_dir is None:
        print("synth requires --out-dir", file=sys.stderr)
        return EXIT_USAGE
    spec = default_benchmark_spec(args.n, seed=args.seed)
    dataset = generate(spec)
    if args.noise_features > 0:
        noise = NoiseSpec(args.noise_low, args.noise_high, args.noise_features)
        dataset = append_noise(dataset, noise, seed=args.seed)
    manifest = save_dataset(dataset, args.out_dir)
    print(f"wrote {dataset.n_samples} samples, {dataset.n_views} views "
          f"({'x'.join(str(d) for d in dataset.dims)} columns) to {manifest}")
    return EXIT_OK


def _hyper_from_args(args, seed):
    return HyperParams(
        c=args.clusters,
        eta=args.eta,
        beta=args.beta,
        t_max=args.max_iters,
        epsilon=args.epsilon,
        seed=seed,
        delta_clamp=args.delta_clamp,
    )


def _emit_run(report, args):
    if args.format == "table":
        print(render_table(report), end="")
    else:
        for line in report_records(report):
            print(json.dumps(line, separators=(", ", ": ")))
    if args.out_dir is not None:
        table_path, records_path = emit_report(report, args.out_dir)
        print(f"wrote {table_path} and {records_path}", file=sys.stderr)


def _cmd_fit(args):
    config = ExperimentConfig(
        algorithm=args.algo,
        params=_hyper_from_args(args, args.seed),
        trials=1,
        seed_base=args.seed,
        normalize=args.normalize,
        manifest=str(args.config),
        prune_warmup=args.prune_warmup,
        theta_scale=args.theta_scale,
        jobs=1,
        dump_weights=args.dump_weights,
    )
    report = run_experiment(config)
    _emit_run(report, args)
    result = report.fit_results[0]
    if args.out_dir is not None:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        np.savetxt(out_dir / "predicted_labels.txt", result.hard_labels, fmt="%d")
        if isinstance(result, PruningFitResult):
            _write_filtered(result, out_dir / "filtered")
    return EXIT_OK


def _write_filtered(result: PruningFitResult, out_dir):
    # surviving data plus a sidecar mapping kept columns to original positions
    save_dataset(result.reduced_dataset, out_dir)
    mapping = {
        "views": [
            {
                "original_view": h,
                "columns": [int(j) for j in result.mask.active_columns(h)],
            }
            for h in result.mask.active_views()
        ]
    }
    (Path(out_dir) / "column_map.json").write_text(
        json.dumps(mapping, indent=2) + "\n", encoding="utf-8"
    )


def _cmd_score(args):
    truth = np.loadtxt(args.truth, dtype=int, ndmin=1)
    pred = np.loadtxt(args.pred, dtype=int, ndmin=1)
    scores = score_all(truth, pred)
    for key, value in scores.items():
        print(f"{key}={value:.12g}")
    print(json.dumps(scores, separators=(", ", ": ")))
    return EXIT_OK


def _cmd_bench(args):
    if (args.config is None) == (args.synth_n is None):
        print("bench needs exactly one of --config or --synth-n", file=sys.stderr)
        return EXIT_USAGE
    synth = None
    if args.synth_n is not None:
        synth = SynthSource(
            n=args.synth_n,
            seed=args.synth_seed,
            noise_features=args.noise_features,
            noise_low=args.noise_low,
            noise_high=args.noise_high,
        )
    config = ExperimentConfig(
        algorithm=args.algo,
        params=_hyper_from_args(args, args.seed_base),
        trials=args.trials,
        seed_base=args.seed_base,
        normalize=args.normalize,
        manifest=str(args.config) if args.config is not None else None,
        synth=synth,
        prune_warmup=args.prune_warmup,
        theta_scale=args.theta_scale,
        jobs=args.jobs,
        dump_weights=args.dump_weights,
    )
    report = run_experiment(config)
    _emit_run(report, args)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    handlers = {
        "synth": _cmd_synth,
        "fit": _cmd_fit,
        "score": _cmd_score,
        "bench": _cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except TrialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TRIAL
    except (DatasetError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover
        print(f"unexpected error: {exc}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
