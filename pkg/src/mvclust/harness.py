"""Multi-trial experiment runner with table and line-delimited record reports.

A run is a dataset source (manifest on disk or the bundled synthetic
benchmark), one algorithm, one hyperparameter setting, and a number of trials.
Trial i re-seeds center initialization with ``seed_base + i``; everything else
is shared, so a report is reproducible from its config alone. Wall-clock
times are recorded but kept in dedicated "timing" fields, which are the only
fields allowed to differ between two runs of the same config.
"""

from __future__ import annotations

import dataclasses
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, aamvfcm, amvfcm
from .amvfcm import HyperParams
from .data import load_dataset, minmax_normalize
from .metrics import score_all
from .synth import NoiseSpec, append_noise, default_benchmark_spec, generate

SEED_ENV_VAR = "MVCLUST_SEED"
PRNG_NAME = "numpy.random.default_rng (PCG64)"
METRIC_KEYS = ("ri", "ari", "ji", "fmi", "nmi")


class TrialError(RuntimeError):
    """A single failed trial; carries the trial seed (and iteration if known)."""

    def __init__(self, seed, iteration=None):
        at = f", iteration {iteration}" if iteration is not None else ""
        super().__init__(f"trial with seed {seed} failed{at}")
        self.seed = seed
        self.iteration = iteration


@dataclass(frozen=True)
class SynthSource:
    """Inline synthetic data source: benchmark geometry plus optional noise."""

    n: int
    seed: int = 0
    noise_features: int = 0
    noise_low: float = 0.02
    noise_high: float = 0.05


@dataclass
class ExperimentConfig:
    """Everything needed to reproduce a run. Exactly one data source is set."""

    algorithm: str                      # "amvfcm" or "aamvfcm"
    params: HyperParams
    trials: int = 1
    seed_base: int = 0
    normalize: bool = False
    manifest: str | None = None
    synth: SynthSource | None = None
    prune_warmup: int = 0
    theta_scale: float = 1.0
    jobs: int = 1
    dump_weights: bool = False

    def __post_init__(self):
        if self.algorithm not in ("amvfcm", "aamvfcm"):
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")
        if (self.manifest is None) == (self.synth is None):
            raise ValueError("exactly one of manifest or synth must be given")


@dataclass
class TrialRecord:
    seed: int
    iterations: int
    converged: bool
    final_objective: float
    final_dims: list
    active_views: list
    reduction_pct: float
    metrics: dict | None
    fit_seconds: float
    weights: dict | None = None


@dataclass
class RunReport:
    engine: dict
    config: dict
    trials: list
    aggregates: dict
    total_seconds: float
    fit_results: list = field(default_factory=list, repr=False)


def build_dataset(config: ExperimentConfig):
    """Materialize the configured data source, normalized when requested."""
    if config.manifest is not None:
        dataset = load_dataset(config.manifest)
    else:
        src = config.synth
        dataset = generate(default_benchmark_spec(src.n, seed=src.seed))
        if src.noise_features > 0:
            noise = NoiseSpec(src.noise_low, src.noise_high, src.noise_features)
            dataset = append_noise(dataset, noise, seed=src.seed)
    if config.normalize:
        dataset, _ = minmax_normalize(dataset)
    return dataset


def _run_trial(dataset, config, seed):
    params = dataclasses.replace(config.params, seed=seed)
    tic = time.perf_counter()
    try:
        if config.algorithm == "amvfcm":
            result = amvfcm.fit(dataset, params)
        else:
            result = aamvfcm.fit(
                dataset, params,
                prune_warmup=config.prune_warmup,
                theta_scale=config.theta_scale,
            )
    except Exception as exc:
        raise TrialError(seed, getattr(exc, "iteration", None)) from exc
    elapsed = time.perf_counter() - tic

    if isinstance(result, aamvfcm.PruningFitResult):
        final_dims = result.mask.active_dims
        active_views = result.mask.active_views()
        reduction = result.mask.reduction_pct
    else:
        final_dims = [A.shape[1] for A in result.model.centers]
        active_views = list(range(len(result.model.centers)))
        reduction = 0.0
    metrics = None
    if dataset.labels is not None:
        metrics = score_all(dataset.labels, result.hard_labels)
    weights = None
    if config.dump_weights:
        weights = {
            "delta": [list(map(float, d)) for d in result.delta],
            "feature_weights": [list(map(float, w)) for w in result.model.feature_weights],
            "view_weights": [float(v) for v in result.model.view_weights],
        }
    record = TrialRecord(
        seed=seed,
        iterations=result.iterations,
        converged=result.converged,
        final_objective=float(result.objective_trace[-1]),
        final_dims=final_dims,
        active_views=active_views,
        reduction_pct=reduction,
        metrics=metrics,
        fit_seconds=elapsed,
        weights=weights,
    )
    return record, result


def _stats(values):
    values = list(values)
    return {
        "min": float(min(values)),
        "avg": float(sum(values) / len(values)),
        "max": float(max(values)),
    }


def _resolved_config(config: ExperimentConfig, seed_base):
    p = config.params
    source = (
        {"manifest": str(config.manifest)}
        if config.manifest is not None
        else {"synth": dataclasses.asdict(config.synth)}
    )
    return {
        "algorithm": config.algorithm,
        "trials": config.trials,
        "seed_base": seed_base,
        "normalize": config.normalize,
        "source": source,
        "hyperparams": {
            "c": p.c,
            "eta": p.eta,
            "beta": "auto" if p.beta is None else p.beta,
            "t_max": p.t_max,
            "epsilon": p.epsilon,
            "delta_clamp": list(p.delta_clamp),
        },
        "prune_warmup": config.prune_warmup,
        "theta_scale": config.theta_scale,
        "jobs": config.jobs,
        "dump_weights": config.dump_weights,
    }


def run_experiment(config: ExperimentConfig) -> RunReport:
    """Run all trials and aggregate. Deterministic apart from timing fields.

    The MVCLUST_SEED environment variable, when set, overrides the configured
    seed base; the report's resolved config records the value actually used.
    A failing trial aborts the whole run with a :class:`TrialError` naming its
    seed.
    """
    seed_base = config.seed_base
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        seed_base = int(env)
    dataset = build_dataset(config)
    seeds = [seed_base + i for i in range(config.trials)]

    tic = time.perf_counter()
    if config.jobs > 1:
        with ThreadPoolExecutor(max_workers=config.jobs) as pool:
            outcomes = list(pool.map(lambda s: _run_trial(dataset, config, s), seeds))
    else:
        outcomes = [_run_trial(dataset, config, s) for s in seeds]
    total = time.perf_counter() - tic

    records = [rec for rec, _ in outcomes]
    aggregates = {}
    if records[0].metrics is not None:
        for key in METRIC_KEYS:
            aggregates[key] = _stats(r.metrics[key] for r in records)
    aggregates["iterations"] = _stats(r.iterations for r in records)
    aggregates["reduction_pct"] = _stats(r.reduction_pct for r in records)
    return RunReport(
        engine={"name": "mvclust", "version": __version__, "prng": PRNG_NAME},
        config=_resolved_config(config, seed_base),
        trials=records,
        aggregates=aggregates,
        total_seconds=total,
        fit_results=[res for _, res in outcomes],
    )


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

def _trial_line(rec: TrialRecord) -> dict:
    body = {
        "kind": "trial",
        "seed": rec.seed,
        "iterations": rec.iterations,
        "converged": rec.converged,
        "final_objective": rec.final_objective,
        "final_dims": rec.final_dims,
        "active_views": rec.active_views,
        "reduction_pct": rec.reduction_pct,
        "metrics": rec.metrics,
    }
    if rec.weights is not None:
        body["weights"] = rec.weights
    body["timing"] = {"fit_seconds": rec.fit_seconds}
    return body


def report_records(report: RunReport) -> list:
    """The machine-readable report as a list of dicts (one per output line)."""
    lines = [{"kind": "meta", "engine": report.engine, "config": report.config}]
    lines.extend(_trial_line(rec) for rec in report.trials)
    lines.append({
        "kind": "aggregate",
        "aggregates": report.aggregates,
        "timing": {"total_seconds": report.total_seconds},
    })
    return lines


def strip_timing(records):
    """Copy of parsed report records with every "timing" field removed."""
    out = []
    for rec in records:
        rec = dict(rec)
        rec.pop("timing", None)
        out.append(rec)
    return out


def render_table(report: RunReport) -> str:
    """Human-readable aligned summary of a run."""
    cfg = report.config
    hp = cfg["hyperparams"]
    lines = [
        "mvclust run report",
        f"engine: {report.engine['name']} {report.engine['version']}   "
        f"prng: {report.engine['prng']}",
        f"algorithm: {cfg['algorithm']}   trials: {cfg['trials']}   "
        f"seed_base: {cfg['seed_base']}   normalize: {'on' if cfg['normalize'] else 'off'}",
        f"source: {json.dumps(cfg['source'])}",
        f"c={hp['c']} eta={hp['eta']} beta={hp['beta']} "
        f"t_max={hp['t_max']} epsilon={hp['epsilon']}",
        "",
    ]
    has_metrics = report.trials[0].metrics is not None
    header = f"{'seed':>6} {'iters':>6} {'conv':>5}"
    if has_metrics:
        header += "".join(f" {k:>8}" for k in METRIC_KEYS)
    header += f" {'dims':>10} {'red%':>6} {'secs':>8}"
    lines.append(header)
    for rec in report.trials:
        row = f"{rec.seed:>6} {rec.iterations:>6} {'yes' if rec.converged else 'no':>5}"
        if has_metrics:
            row += "".join(f" {rec.metrics[k]:>8.4f}" for k in METRIC_KEYS)
        dims = "x".join(str(d) for d in rec.final_dims)
        row += f" {dims:>10} {100 * rec.reduction_pct:>6.1f} {rec.fit_seconds:>8.3f}"
        lines.append(row)
    lines.append("")
    lines.append(f"{'metric':<14} {'min':>10} {'avg':>10} {'max':>10}")
    for key, st in report.aggregates.items():
        lines.append(
            f"{key:<14} {st['min']:>10.4f} {st['avg']:>10.4f} {st['max']:>10.4f}"
        )
    lines.append("")
    lines.append(f"total wall time: {report.total_seconds:.3f} s")
    return "\n".join(lines) + "\n"


def emit_report(report: RunReport, out_dir):
    """Write report.txt (table) and report.jsonl (records); return both paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    table_path = out_dir / "report.txt"
    table_path.write_text(render_table(report), encoding="utf-8")
    records_path = out_dir / "report.jsonl"
    with open(records_path, "w", encoding="utf-8") as fh:
        for line in report_records(report):
            fh.write(json.dumps(line, separators=(", ", ": ")) + "\n")
    return table_path, records_path


def parse_records(path):
    """Read a report.jsonl file back into a list of dicts."""
    with open(path, "r", encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]
