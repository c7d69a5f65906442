"""Experiment specification, seeded parallel execution, and CSV/SVG output.

Chains are stepped in fixed-size blocks of 1000; each block draws from its
own noise stream keyed on (seed, config index, block index) and the block
partials are merged in block order, so results are byte-identical for any
worker count.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import quad

from .analysis import GaussianSummary
from .metrics import chi2_histogram, mean_error, w2_gaussian
from .potentials import VALID_POTENTIALS, PotentialModel, builtin_potential
from .rng import RandomSource
from .samplers import ChainState, SamplerConfig, make_stepper

BLOCK_SIZE = 1000

METRICS = ("w2_gaussian", "chi2_hist", "mean_error")


class ConfigError(ValueError):
    """Schema violation in an experiment document; message carries the path."""


@dataclass(frozen=True)
class InitSpec:
    q: float | list = 1.0
    p: float | list = 0.0
    q_std: float = 0.0
    p_std: float = 0.0


@dataclass(frozen=True)
class BenchmarkSpec:
    kind: str = "uld_klmc"
    gamma: float = 2.0
    step: float = 0.0005
    horizon: Optional[float] = None  # defaults to 10x the experiment horizon
    chains: Optional[int] = None


@dataclass(frozen=True)
class ExperimentSpec:
    potential_name: str
    potential_params: dict
    samplers: list  # of (config_id, SamplerConfig)
    chains: int = 10000
    steps: Optional[int] = None
    horizon: Optional[float] = None
    record_every: int = 1
    seed: int = 0
    metric: str = "w2_gaussian"
    reference: str = "closed_form"
    benchmark: Optional[BenchmarkSpec] = None
    init: InitSpec = field(default_factory=InitSpec)
    hist_lo: Optional[float] = None
    hist_hi: Optional[float] = None
    hist_bins: int = 50

    def model(self) -> PotentialModel:
        return builtin_potential(self.potential_name, **self.potential_params)

    def steps_for(self, config: SamplerConfig) -> int:
        if self.steps is not None:
            return self.steps
        return max(1, int(round(self.horizon / config.step)))


@dataclass(frozen=True)
class ResultRow:
    config_id: str
    step: int
    time: float
    value: float
    stderr: Optional[float]
    flag: str


@dataclass(frozen=True)
class ResultSeries:
    metric: str
    rows: list
    grad_evals: dict  # config_id -> int
    diverged: dict  # config_id -> Optional[int] (first bad step)

    def values(self, config_id: str):
        rows = [r for r in self.rows if r.config_id == config_id]
        return (
            np.array([r.time for r in rows]),
            np.array([r.value for r in rows]),
        )

    @property
    def all_diverged(self) -> bool:
        return len(self.diverged) > 0 and all(
            v is not None for v in self.diverged.values()
        )


def _check_keys(obj: dict, allowed: set, where: str):
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' in {where}")


def parse_config(text: str) -> ExperimentSpec:
    """Parse and validate a JSON experiment document.

    Unknown keys are rejected; violations carry path-qualified messages
    (e.g. "sampler[0].step must be > 0").  Defaults are documented in the
    README: chains=10000, record_every=1, seed=0, metric=w2_gaussian,
    reference=closed_form, histogram bins=50.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("top level must be an object")
    _check_keys(
        doc,
        {
            "potential",
            "sampler",
            "chains",
            "steps",
            "horizon",
            "record_every",
            "seed",
            "metric",
            "reference",
            "init",
            "histogram",
        },
        "top level",
    )

    pot = doc.get("potential")
    if not isinstance(pot, dict) or "name" not in pot:
        raise ConfigError("potential must be an object with a 'name'")
    _check_keys(pot, {"name", "params"}, "potential")
    name = pot["name"]
    if name not in VALID_POTENTIALS:
        raise ConfigError(
            f"potential.name '{name}' unknown; valid names: "
            + ", ".join(VALID_POTENTIALS)
        )
    params = pot.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("potential.params must be an object")

    samplers_doc = doc.get("sampler")
    if not isinstance(samplers_doc, list) or not samplers_doc:
        raise ConfigError("sampler must be a non-empty array")
    samplers = []
    for i, entry in enumerate(samplers_doc):
        where = f"sampler[{i}]"
        if not isinstance(entry, dict):
            raise ConfigError(f"{where} must be an object")
        _check_keys(entry, {"id", "kind", "alpha", "gamma", "step"}, where)
        kind = entry.get("kind")
        if kind not in ("hfhr_strang", "uld_klmc", "ula", "hfhr_em"):
            raise ConfigError(f"{where}.kind must be one of hfhr_strang, uld_klmc, ula, hfhr_em")
        step = entry.get("step")
        if not isinstance(step, (int, float)) or step <= 0:
            raise ConfigError(f"{where}.step must be > 0")
        gamma = entry.get("gamma", 1.0)
        if not isinstance(gamma, (int, float)) or (kind != "ula" and gamma <= 0):
            raise ConfigError(f"{where}.gamma must be > 0")
        alpha = entry.get("alpha", 0.0)
        if not isinstance(alpha, (int, float)) or alpha < 0:
            raise ConfigError(f"{where}.alpha must be >= 0")
        default_id = f"{kind}-a{alpha}-g{gamma}-h{step}"
        config_id = entry.get("id", default_id)
        samplers.append(
            (str(config_id), SamplerConfig(kind=kind, step=float(step), gamma=float(gamma), alpha=float(alpha)))
        )
    if len({cid for cid, _ in samplers}) != len(samplers):
        raise ConfigError("sampler ids must be unique")

    steps = doc.get("steps")
    horizon = doc.get("horizon")
    if (steps is None) == (horizon is None):
        raise ConfigError("exactly one of 'steps' or 'horizon' is required")
    if steps is not None and (not isinstance(steps, int) or steps < 1):
        raise ConfigError("steps must be a positive integer")
    if horizon is not None and (not isinstance(horizon, (int, float)) or horizon <= 0):
        raise ConfigError("horizon must be > 0")

    chains = doc.get("chains", 10000)
    if not isinstance(chains, int) or chains < 1:
        raise ConfigError("chains must be a positive integer")
    record_every = doc.get("record_every", 1)
    if not isinstance(record_every, int) or record_every < 1:
        raise ConfigError("record_every must be a positive integer")
    if steps is not None and record_every > steps:
        raise ConfigError("record_every must not exceed steps")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigError("seed must be an integer")
    metric = doc.get("metric", "w2_gaussian")
    if metric not in METRICS:
        raise ConfigError(f"metric must be one of {', '.join(METRICS)}")

    ref_doc = doc.get("reference", {"type": "closed_form"})
    if not isinstance(ref_doc, dict) or "type" not in ref_doc:
        raise ConfigError("reference must be an object with a 'type'")
    benchmark = None
    if ref_doc["type"] == "closed_form":
        _check_keys(ref_doc, {"type"}, "reference")
        reference = "closed_form"
    elif ref_doc["type"] == "benchmark_run":
        _check_keys(ref_doc, {"type", "kind", "gamma", "step", "horizon", "chains"}, "reference")
        reference = "benchmark_run"
        benchmark = BenchmarkSpec(
            kind=ref_doc.get("kind", "uld_klmc"),
            gamma=float(ref_doc.get("gamma", 2.0)),
            step=float(ref_doc.get("step", 0.0005)),
            horizon=ref_doc.get("horizon"),
            chains=ref_doc.get("chains"),
        )
        if benchmark.step <= 0:
            raise ConfigError("reference.step must be > 0")
    else:
        raise ConfigError("reference.type must be 'closed_form' or 'benchmark_run'")

    init_doc = doc.get("init", {})
    if not isinstance(init_doc, dict):
        raise ConfigError("init must be an object")
    _check_keys(init_doc, {"q", "p", "q_std", "p_std"}, "init")
    init = InitSpec(
        q=init_doc.get("q", 1.0),
        p=init_doc.get("p", 0.0),
        q_std=float(init_doc.get("q_std", 0.0)),
        p_std=float(init_doc.get("p_std", 0.0)),
    )

    hist_doc = doc.get("histogram", {})
    if not isinstance(hist_doc, dict):
        raise ConfigError("histogram must be an object")
    _check_keys(hist_doc, {"lo", "hi", "bins"}, "histogram")
    bins = hist_doc.get("bins", 50)
    if not isinstance(bins, int) or bins < 2:
        raise ConfigError("histogram.bins must be an integer >= 2")

    spec = ExperimentSpec(
        potential_name=name,
        potential_params=params,
        samplers=samplers,
        chains=chains,
        steps=steps,
        horizon=horizon,
        record_every=record_every,
        seed=seed,
        metric=metric,
        reference=reference,
        benchmark=benchmark,
        init=init,
        hist_lo=hist_doc.get("lo"),
        hist_hi=hist_doc.get("hi"),
        hist_bins=bins,
    )
    spec.model()  # validates potential params eagerly
    return spec


def _init_block(spec: ExperimentSpec, dim: int, n: int, rng: RandomSource) -> ChainState:
    q = np.broadcast_to(np.atleast_1d(np.asarray(spec.init.q, dtype=float)), (n, dim)).copy()
    p = np.broadcast_to(np.atleast_1d(np.asarray(spec.init.p, dtype=float)), (n, dim)).copy()
    if spec.init.q_std > 0:
        q += spec.init.q_std * rng.normals((n, dim))
    if spec.init.p_std > 0:
        p += spec.init.p_std * rng.normals((n, dim))
    return ChainState(q=q, p=p)


@dataclass
class _BlockResult:
    sums: list  # per record step: (n, sum_q, sum_qq) or samples
    grad_evals: int
    diverged_at: Optional[int]


def _run_block(
    spec: ExperimentSpec,
    model: PotentialModel,
    config: SamplerConfig,
    steps: int,
    record_steps: list,
    stream: int,
    n: int,
    keep_samples: bool,
):
    rng = RandomSource(spec.seed, stream)
    state = _init_block(spec, model.dim, n, rng)
    counter = {"evals": 0}
    grad = model.grad

    def counting_grad(x):
        counter["evals"] += np.shape(x)[0]
        return grad(x)

    counted = PotentialModel(
        name=model.name,
        dim=model.dim,
        eval=model.eval,
        grad=counting_grad,
        smoothness=model.smoothness,
        strong_convexity=model.strong_convexity,
        poincare=model.poincare,
        third_deriv_growth=model.third_deriv_growth,
    )
    stepper = make_stepper(counted, config)
    record_set = set(record_steps)
    out = []

    def snapshot(step_idx):
        if keep_samples:
            out.append((step_idx, state.q.copy()))
        else:
            out.append(
                (step_idx, n, state.q.sum(axis=0), state.q.T @ state.q)
            )

    if 0 in record_set:
        snapshot(0)
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, steps + 1):
            state = stepper(state, rng)
            if not (np.all(np.isfinite(state.q)) and np.all(np.isfinite(state.p))):
                return _BlockResult(sums=out, grad_evals=counter["evals"], diverged_at=k)
            if k in record_set:
                snapshot(k)
    return _BlockResult(sums=out, grad_evals=counter["evals"], diverged_at=None)


def _target_density_1d(model: PotentialModel) -> Callable:
    norm, _ = quad(lambda x: math.exp(-float(model.eval(np.array([x])))), -40.0, 40.0, limit=400)

    def density(xs):
        xs = np.asarray(xs, dtype=float)
        vals = model.eval(xs[..., None])
        return np.exp(-vals) / norm

    return density


def _closed_form_reference(spec: ExperimentSpec, model: PotentialModel):
    if spec.metric == "w2_gaussian":
        if model.quadratic_hessian is None:
            raise ConfigError(
                "closed_form w2_gaussian reference requires a quadratic potential"
            )
        cov = np.linalg.inv(model.quadratic_hessian)
        return GaussianSummary(mean=np.zeros(model.dim), cov=cov)
    if spec.metric == "mean_error":
        if model.target_mean is None:
            raise ConfigError(
                f"potential '{model.name}' has no closed-form mean; use a benchmark_run reference"
            )
        return model.target_mean
    if model.dim != 1:
        raise ConfigError("chi2_hist metric requires a 1D potential")
    return _target_density_1d(model)


def _benchmark_key(spec: ExperimentSpec) -> str:
    payload = {
        "potential": [spec.potential_name, spec.potential_params],
        "benchmark": [
            spec.benchmark.kind,
            spec.benchmark.gamma,
            spec.benchmark.step,
            spec.benchmark.horizon or (10.0 * (spec.horizon or 1.0)),
            spec.benchmark.chains or spec.chains,
        ],
        "seed": spec.seed,
        "init": [spec.init.q, spec.init.p, spec.init.q_std, spec.init.p_std],
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()[:16]


def _benchmark_reference(spec: ExperimentSpec, model: PotentialModel, cache_dir: Optional[str]):
    """Long tiny-step baseline run; the final-half time average estimates the
    target mean (and second moment).  Cached by content hash."""
    key = _benchmark_key(spec)
    cache_path = None
    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)
        cache_path = os.path.join(cache_dir, f"benchmark-{key}.json")
        if os.path.exists(cache_path):
            with open(cache_path) as fh:
                payload = json.load(fh)
            return GaussianSummary(np.array(payload["mean"]), np.array(payload["cov"]))

    bench = spec.benchmark
    horizon = bench.horizon or (10.0 * (spec.horizon or 1.0))
    chains = bench.chains or spec.chains
    config = SamplerConfig(kind=bench.kind, step=bench.step, gamma=bench.gamma, alpha=0.0)
    steps = max(1, int(round(horizon / bench.step)))
    rng = RandomSource(spec.seed, 900_000)
    state = _init_block(spec, model.dim, chains, rng)
    stepper = make_stepper(model, config)
    acc_q = np.zeros(model.dim)
    acc_qq = np.zeros((model.dim, model.dim))
    count = 0
    start = steps // 2
    for k in range(1, steps + 1):
        state = stepper(state, rng)
        if k > start:
            acc_q += state.q.mean(axis=0)
            acc_qq += state.q.T @ state.q / state.q.shape[0]
            count += 1
    mean = acc_q / count
    second = acc_qq / count
    cov = second - np.outer(mean, mean)
    summary = GaussianSummary(mean=mean, cov=0.5 * (cov + cov.T))
    if cache_path is not None:
        with open(cache_path, "w") as fh:
            json.dump({"mean": mean.tolist(), "cov": summary.cov.tolist()}, fh)
    return summary


def _metric_value(spec, reference, n_total, sum_q, sum_qq, samples):
    if spec.metric == "chi2_hist":
        x = samples
        lo = spec.hist_lo
        hi = spec.hist_hi
        if lo is None or hi is None:
            mu, sd = float(x.mean()), float(x.std())
            lo = mu - 6.0 * sd if lo is None else lo
            hi = mu + 6.0 * sd if hi is None else hi
        return chi2_histogram(x, reference, lo, hi, spec.hist_bins), None
    mean = sum_q / n_total
    cov = sum_qq / (n_total - 1) - np.outer(mean, mean) * (n_total / (n_total - 1))
    cov = 0.5 * (cov + cov.T)
    if spec.metric == "mean_error":
        stderr = math.sqrt(max(np.trace(cov), 0.0) / n_total)
        return float(np.linalg.norm(mean - reference)), stderr
    summary = GaussianSummary(mean=mean, cov=cov)
    return w2_gaussian(summary, reference), None


def run_experiment(
    spec: ExperimentSpec, workers: int = 1, cache_dir: Optional[str] = None
) -> ResultSeries:
    """Run every sampler config of the spec and score it against the reference.

    Chains advance in fixed blocks with per-block noise streams; block
    partials merge in block order, so the output is identical for any
    ``workers`` value.  A diverging config is truncated and flagged, not
    fatal to the run.
    """
    model = spec.model()
    if spec.reference == "closed_form":
        reference = _closed_form_reference(spec, model)
    else:
        summary = _benchmark_reference(spec, model, cache_dir)
        if spec.metric == "mean_error":
            reference = summary.mean
        elif spec.metric == "w2_gaussian":
            reference = summary
        else:
            raise ConfigError("benchmark_run reference supports w2_gaussian and mean_error")
    keep_samples = spec.metric == "chi2_hist"

    rows = []
    grad_evals = {}
    diverged = {}
    n_blocks = (spec.chains + BLOCK_SIZE - 1) // BLOCK_SIZE
    for c_idx, (config_id, config) in enumerate(spec.samplers):
        steps = spec.steps_for(config)
        record_steps = sorted(set(range(0, steps + 1, spec.record_every)) | {steps})
        sizes = [
            min(BLOCK_SIZE, spec.chains - b * BLOCK_SIZE) for b in range(n_blocks)
        ]

        def task(b):
            return _run_block(
                spec,
                model,
                config,
                steps,
                record_steps,
                stream=c_idx * 1_000_000 + b,
                n=sizes[b],
                keep_samples=keep_samples,
            )

        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                blocks = list(pool.map(task, range(n_blocks)))
        else:
            blocks = [task(b) for b in range(n_blocks)]

        grad_evals[config_id] = sum(b.grad_evals for b in blocks)
        bad_steps = [b.diverged_at for b in blocks if b.diverged_at is not None]
        first_bad = min(bad_steps) if bad_steps else None
        diverged[config_id] = first_bad

        # merge, in block order, the record steps present in every block
        usable = [
            k
            for k in record_steps
            if all(any(s[0] == k for s in b.sums) for b in blocks)
        ]
        for k in usable:
            # snapshots just before a blow-up can overflow the metric; the
            # row is flagged, so an inf value is fine
            with np.errstate(over="ignore", invalid="ignore"):
                if keep_samples:
                    samples = np.concatenate(
                        [next(s[1] for s in b.sums if s[0] == k) for b in blocks]
                    ).ravel()
                    value, stderr = _metric_value(spec, reference, None, None, None, samples)
                else:
                    n_total = 0
                    sum_q = np.zeros(model.dim)
                    sum_qq = np.zeros((model.dim, model.dim))
                    for b in blocks:
                        _, n, sq, sqq = next(s for s in b.sums if s[0] == k)
                        n_total += n
                        sum_q = sum_q + sq
                        sum_qq = sum_qq + sqq
                    value, stderr = _metric_value(spec, reference, n_total, sum_q, sum_qq, None)
            flag = "diverged" if (first_bad is not None and k == usable[-1]) else ""
            rows.append(
                ResultRow(
                    config_id=config_id,
                    step=k,
                    time=k * config.step,
                    value=float(value),
                    stderr=stderr,
                    flag=flag,
                )
            )
    return ResultSeries(metric=spec.metric, rows=rows, grad_evals=grad_evals, diverged=diverged)


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    best_gamma: Optional[float]
    best_step: Optional[float]
    iterations_mean: float  # inf when every combination fails
    iterations_std: float


def sweep_iteration_complexity(
    model: PotentialModel,
    alphas,
    gammas,
    steps_grid,
    eps: float,
    chains: int = 1000,
    seeds=(0, 1, 2),
    kind: str = "hfhr_strang",
    cap: int = 2000,
    init_q: float = 1.0,
) -> list:
    """Fewest iterations to bring the mean error below eps, per alpha.

    For each alpha the (gamma, h) grid is scanned for the first-hit step
    count; divergent combinations are excluded.  The scan is repeated over
    seeds and the per-seed minima are summarized by mean and standard
    deviation.  An all-divergent alpha reports infinity.
    """
    if eps <= 0:
        raise ValueError("eps must be > 0")
    if model.target_mean is None:
        raise ValueError("sweep requires a potential with a known target mean")
    target = model.target_mean

    def first_hit(config, seed, limit):
        stepper = make_stepper(model, config)
        rng = RandomSource(seed, 0)
        state = ChainState(
            q=np.full((chains, model.dim), float(init_q)),
            p=np.zeros((chains, model.dim)),
        )
        if np.linalg.norm(state.q.mean(axis=0) - target) <= eps:
            return 0
        with np.errstate(over="ignore", invalid="ignore"):
            for k in range(1, limit + 1):
                state = stepper(state, rng)
                if not np.all(np.isfinite(state.q)):
                    return None
                if np.linalg.norm(state.q.mean(axis=0) - target) <= eps:
                    return k
        return None

    table = []
    for alpha in alphas:
        per_seed = []
        best_combo = None
        for seed in seeds:
            best = None
            for gamma in gammas:
                for h in steps_grid:
                    config = SamplerConfig(kind=kind, step=float(h), gamma=float(gamma), alpha=float(alpha))
                    limit = cap if best is None else min(cap, best)
                    k = first_hit(config, seed, limit)
                    if k is not None and (best is None or k < best):
                        best = k
                        if seed == seeds[0]:
                            best_combo = (float(gamma), float(h))
            per_seed.append(best)
        finite = [k for k in per_seed if k is not None]
        if not finite:
            table.append(SweepRow(alpha=float(alpha), best_gamma=None, best_step=None,
                                  iterations_mean=math.inf, iterations_std=math.inf))
        else:
            arr = np.array(finite, dtype=float)
            table.append(
                SweepRow(
                    alpha=float(alpha),
                    best_gamma=best_combo[0] if best_combo else None,
                    best_step=best_combo[1] if best_combo else None,
                    iterations_mean=float(arr.mean()),
                    iterations_std=float(arr.std()),
                )
            )
    return table


CSV_HEADER = "config_id,step,time,metric,value,stderr,flag"


def write_csv(series: ResultSeries, path: str) -> None:
    """Emit rows as CSV with round-trip decimal formatting."""
    lines = [CSV_HEADER]
    for r in series.rows:
        stderr = "" if r.stderr is None else repr(float(r.stderr))
        lines.append(
            f"{r.config_id},{r.step},{repr(float(r.time))},{series.metric},"
            f"{repr(float(r.value))},{stderr},{r.flag}"
        )
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc


def read_csv(path: str) -> list:
    """Round-trip parser for files produced by write_csv."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError(f"{path} is not a result CSV")
    out = []
    for line in lines[1:]:
        cid, step, time, metric, value, stderr, flag = line.split(",")
        out.append(
            ResultRow(
                config_id=cid,
                step=int(step),
                time=float(time),
                value=float(value),
                stderr=None if stderr == "" else float(stderr),
                flag=flag,
            )
        )
    return out


_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def _ticks_linear(lo, hi, n=6):
    span = hi - lo
    if span <= 0:
        return [lo]
    raw = span / (n - 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    step = min(s * mag for s in (1, 2, 5, 10) if s * mag >= raw)
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * span:
        ticks.append(t)
        t += step
    return ticks


def _ticks_decades(lo, hi):
    return [10.0**e for e in range(math.ceil(math.log10(lo) - 1e-12), math.floor(math.log10(hi) + 1e-12) + 1)]


def write_svg_plot(series: ResultSeries, style: str, path: str, title: str = "") -> None:
    """Static SVG: one polyline per config, legend, tick labels, no assets.

    Styles: 'linear', 'semilog-y', 'log-log'.  Log axes require positive
    data and put ticks at decades; log-log uses the same pixels-per-decade
    on both axes so a slope-one series renders at 45 degrees.
    """
    if style not in ("linear", "semilog-y", "log-log"):
        raise ValueError("style must be linear, semilog-y or log-log")
    config_ids = []
    for r in series.rows:
        if r.config_id not in config_ids:
            config_ids.append(r.config_id)
    if not config_ids:
        raise ValueError("empty series")
    data = {cid: series.values(cid) for cid in config_ids}
    logx = style == "log-log"
    logy = style in ("semilog-y", "log-log")
    for cid, (xs, ys) in data.items():
        if logy and np.any(ys <= 0):
            raise ValueError(f"nonpositive values under log scaling in '{cid}'")
        if logx and np.any(xs <= 0):
            raise ValueError(f"nonpositive x values under log scaling in '{cid}'")

    all_x = np.concatenate([v[0] for v in data.values()])
    all_y = np.concatenate([v[1] for v in data.values()])
    fx = np.log10 if logx else (lambda a: np.asarray(a, dtype=float))
    fy = np.log10 if logy else (lambda a: np.asarray(a, dtype=float))
    x_lo, x_hi = float(fx(all_x).min()), float(fx(all_x).max())
    y_lo, y_hi = float(fy(all_y).min()), float(fy(all_y).max())
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0

    width, height = 640, 480
    ml, mr, mt, mb = 70, 160, 30, 50
    plot_w, plot_h = width - ml - mr, height - mt - mb
    if style == "log-log":
        # equal decade scaling on both axes
        per_decade = min(plot_w / (x_hi - x_lo), plot_h / (y_hi - y_lo))
        plot_w = per_decade * (x_hi - x_lo)
        plot_h = per_decade * (y_hi - y_lo)

    def to_px(x, y):
        px = ml + (fx(x) - x_lo) / (x_hi - x_lo) * plot_w
        py = mt + (1.0 - (fy(y) - y_lo) / (y_hi - y_lo)) * plot_h
        return px, py

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="11">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{plot_w:.2f}" height="{plot_h:.2f}" '
        'fill="none" stroke="black"/>',
    ]
    if title:
        parts.append(f'<text x="{ml}" y="{mt - 10}">{title}</text>')

    x_ticks = _ticks_decades(all_x.min(), all_x.max()) if logx else _ticks_linear(all_x.min(), all_x.max())
    y_ticks = _ticks_decades(all_y.min(), all_y.max()) if logy else _ticks_linear(all_y.min(), all_y.max())
    for t in x_ticks:
        px, _ = to_px(t, all_y.max())
        label = f"1e{int(round(math.log10(t)))}" if logx else f"{t:g}"
        parts.append(
            f'<line x1="{px:.2f}" y1="{mt + plot_h:.2f}" x2="{px:.2f}" y2="{mt + plot_h + 5:.2f}" stroke="black"/>'
        )
        parts.append(f'<text x="{px:.2f}" y="{mt + plot_h + 18:.2f}" text-anchor="middle">{label}</text>')
    for t in y_ticks:
        _, py = to_px(all_x.max(), t)
        label = f"1e{int(round(math.log10(t)))}" if logy else f"{t:g}"
        parts.append(f'<line x1="{ml - 5}" y1="{py:.2f}" x2="{ml}" y2="{py:.2f}" stroke="black"/>')
        parts.append(f'<text x="{ml - 8}" y="{py + 4:.2f}" text-anchor="end">{label}</text>')

    for i, cid in enumerate(config_ids):
        xs, ys = data[cid]
        color = _PALETTE[i % len(_PALETTE)]
        pts = " ".join(f"{to_px(x, y)[0]:.3f},{to_px(x, y)[1]:.3f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        ly = mt + 15 + 16 * i
        lx = ml + plot_w + 10
        parts.append(f'<line x1="{lx:.2f}" y1="{ly - 4:.2f}" x2="{lx + 18:.2f}" y2="{ly - 4:.2f}" stroke="{color}" stroke-width="1.5"/>')
        parts.append(f'<text x="{lx + 24:.2f}" y="{ly:.2f}">{cid}</text>')
    parts.append("</svg>")
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write("\n".join(parts) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc


__all__ = [
    "BLOCK_SIZE",
    "ConfigError",
    "InitSpec",
    "BenchmarkSpec",
    "ExperimentSpec",
    "ResultRow",
    "ResultSeries",
    "SweepRow",
    "parse_config",
    "run_experiment",
    "sweep_iteration_complexity",
    "write_csv",
    "read_csv",
    "write_svg_plot",
]
