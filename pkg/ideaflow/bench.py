"""
Benchmark harnesses: noise sweeps on synthetic graphs and NMI tables on
UCR datasets. Result tables are deterministic; runtimes go to their own
table.
"""

import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .baselines import B2_KERNEL, dtw_distance_matrix, dtw_spectral, raw_value_kmeans
from .clustering import nmi
from .config import VARIANTS, RunConfig, SynthConfig
from .evaluation import cluster_series, evaluate_run, series_graph
from .exceptions import ConfigurationError, IdeaFlowError
from .flow import track_idea_flows
from .models import MetricReport
from .synth import generate_graph, generate_ground_truth
from .ucr import load_ucr, stratified_subset

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

DEFAULT_LEVELS = (0.0, 0.2, 0.4, 0.6, 0.8)
METRICS = ('flow_f1', 'flowlead_f1', 'flowleadtime_f1', 'mse', 'nmi_a', 'nmi_b')
UCR_METHODS = ('ours', 'B1', 'B2', 'B3')
PAIRWISE_METHODS = ('ours', 'B2', 'B3')


def _write_csv(frame: pd.DataFrame, path: PathLike) -> None:
    frame.to_csv(path, index=False, float_format='%.10g', lineterminator='\n')


def _write_json(data, path: PathLike) -> None:
    text = json.dumps(data, indent=2, sort_keys=True, default=lambda o: o.item() if hasattr(o, 'item') else str(o))
    Path(path).write_text(text + '\n', encoding='utf-8')


def run_synth_case(
    level: float,
    variant: str,
    seed: int,
    run: RunConfig = RunConfig(),
    base: SynthConfig = SynthConfig()
) -> MetricReport:
    """
    One synthetic dataset: generate, extract flows with the true k, score.

    A dataset whose noisy graph keeps no edge scores zero everywhere.
    """
    cfg = replace(base, noise_level=level, seed=seed, tau_max=run.tau_max)
    truth = generate_ground_truth(cfg)
    graph = generate_graph(truth, cfg)
    flow_cfg = run.flow(k_a=truth.k_a, k_b=truth.k_b, variant=variant, rank=None)

    start = time.perf_counter()
    try:
        report = track_idea_flows(graph, flow_cfg)
    except IdeaFlowError as e:
        logger.warning("L=%.2f %s seed %d: %s", level, variant, seed, e.message)
        return MetricReport(0.0, 0.0, 0.0, None, 0.0, 0.0, time.perf_counter() - start)
    return evaluate_run(report, truth, time.perf_counter() - start)


def _synth_task(args: Tuple) -> MetricReport:
    return run_synth_case(*args)


def synth_bench(
    levels: Sequence[float] = DEFAULT_LEVELS,
    repeats: int = 50,
    variants: Sequence[str] = ('x3',),
    seed: int = 0,
    run: RunConfig = RunConfig(),
    base: SynthConfig = SynthConfig(),
    workers: int = 1
) -> pd.DataFrame:
    """
    Score every (noise level, variant, repeat) case.

    Dataset r of every level and variant uses seed + r, so the cases of
    one repeat share their planted structure.

    Returns:
        One row per case: level, variant, repeat, seed, the metrics and runtime
    """
    for level in levels:
        if not 0.0 <= level < 1.0:
            raise ConfigurationError(f"Noise level must lie in [0, 1), got {level}")
    for variant in variants:
        if variant not in VARIANTS:
            raise ConfigurationError(f"Unknown tensor variant '{variant}'")

    cases = [(level, variant, seed + r) for level in levels for variant in variants for r in range(repeats)]
    tasks = [(level, variant, s, run, base) for level, variant, s in cases]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_synth_task, tasks))
    else:
        results = [_synth_task(task) for task in tasks]

    rows = []
    for (level, variant, s), metrics in zip(cases, results):
        row = {'level': level, 'variant': variant, 'repeat': s - seed, 'seed': s}
        row.update(metrics.to_dict())
        rows.append(row)
        logger.info("L=%.2f %s seed %d: flowleadtime_f1=%.3f nmi=%.3f/%.3f",
                    level, variant, s, metrics.flowleadtime_f1, metrics.nmi_a, metrics.nmi_b)
    return pd.DataFrame(rows)


def summarize_synth(runs: pd.DataFrame) -> Tuple[pd.DataFrame, pd.DataFrame, pd.DataFrame]:
    """
    Aggregate case rows.

    Returns:
        (metrics summary with mean/std per metric, long-format plot data
        with one row per (variant, metric, level), runtime summary)
    """
    runs = runs.astype({m: float for m in METRICS})
    grouped = runs.groupby(['level', 'variant'], sort=True)
    means = grouped[list(METRICS)].mean().add_suffix('_mean')
    stds = grouped[list(METRICS)].std(ddof=0).add_suffix('_std')
    summary = pd.concat([means, stds], axis=1)
    summary = summary[[f"{m}_{stat}" for m in METRICS for stat in ('mean', 'std')]]
    summary['runs'] = grouped.size()
    summary['mse_defined'] = grouped['mse'].count()
    summary = summary.reset_index()

    plot = (
        summary.melt(id_vars=['level', 'variant'],
                     value_vars=[f"{m}_mean" for m in METRICS],
                     var_name='metric', value_name='value')
        .assign(metric=lambda f: f['metric'].str.replace('_mean', '', regex=False))
        .sort_values(['variant', 'metric', 'level'], kind='mergesort')
        .reset_index(drop=True)
    )

    timings = pd.concat([
        grouped['runtime_seconds'].mean().rename('runtime_mean'),
        grouped['runtime_seconds'].std(ddof=0).rename('runtime_std')
    ], axis=1).reset_index()
    return summary, plot, timings


def write_synth_bench(out_dir: PathLike, runs: pd.DataFrame, run: RunConfig, extra: Optional[Dict] = None) -> Dict[str, Path]:
    """Write synth_metrics.csv, synth_plot.csv, synth_timings.csv and synth_config.json"""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    summary, plot, timings = summarize_synth(runs)
    paths = {
        'metrics': out / 'synth_metrics.csv',
        'plot': out / 'synth_plot.csv',
        'timings': out / 'synth_timings.csv',
        'config': out / 'synth_config.json'
    }
    _write_csv(summary, paths['metrics'])
    _write_csv(plot, paths['plot'])
    _write_csv(timings, paths['timings'])
    _write_json({'config': run.to_dict(), **(extra or {})}, paths['config'])
    return paths


def _method_params(method: str, run: RunConfig, k: int, n_series: int, cap: Optional[int]) -> Dict:
    params: Dict = {'n_series': n_series}
    if method in ('ours', 'B3'):
        params.update({'tau_max': run.tau_max, 'variant': run.variant, 'rank': run.rank or 2 * k,
                       'theta_local': run.theta_local, 'theta_global': run.theta_global})
    if method == 'B2':
        params.update({'tau_max': run.tau_max, 'kernel': B2_KERNEL})
    if method in PAIRWISE_METHODS:
        params['max_series'] = cap
    return params


def _method_partitions(method: str, dataset, k: int, runs: int, seed: int, run: RunConfig) -> List[np.ndarray]:
    if method == 'B1':
        return [raw_value_kmeans(dataset.values, k, seed + r, run.restarts).labels for r in range(runs)]
    if method == 'B2':
        distances = dtw_distance_matrix(dataset.values, run.dtw(), run.workers)
        return [dtw_spectral(dataset.values, k, seed + r, distances=distances).labels for r in range(runs)]
    graph = series_graph(dataset.values, 'ours' if method == 'ours' else 'b3', run.dtw(), run.bcc(), run.workers)
    return [
        cluster_series(dataset.values, k, seed=seed + r, variant=run.variant, rank=run.rank,
                       restarts=run.restarts, graph=graph).labels
        for r in range(runs)
    ]


def ucr_bench(
    datasets: Sequence[PathLike],
    methods: Sequence[str] = UCR_METHODS,
    runs: int = 100,
    seed: int = 0,
    run: RunConfig = RunConfig(),
    max_series: Optional[int] = None
) -> pd.DataFrame:
    """
    NMI mean and std per dataset and method.

    A dataset that fails to load, or a method that fails on it, yields a
    row with status 'failed: ...'; other rows proceed.

    Raises:
        ConfigurationError: on an unknown method name
    """
    for method in methods:
        if method not in UCR_METHODS:
            raise ConfigurationError(f"Unknown method '{method}'", suggestion=f"Use one of {', '.join(UCR_METHODS)}")

    rows = []
    for path in datasets:
        name = Path(path).name
        try:
            full = load_ucr(path)
        except IdeaFlowError as e:
            logger.warning("%s: %s", name, e.message)
            rows.extend({'dataset': name, 'method': m, 'params': '{}', 'nmi_mean': None, 'nmi_std': None,
                         'runs': 0, 'status': f"failed: {e.message}"} for m in methods)
            continue

        for method in methods:
            dataset = stratified_subset(full, max_series) if method in PAIRWISE_METHODS else full
            params = _method_params(method, run, full.K, dataset.N, max_series)
            row = {'dataset': full.name, 'method': method, 'params': json.dumps(params, sort_keys=True)}
            try:
                scores = [nmi(labels, dataset.labels) for labels in
                          _method_partitions(method, dataset, full.K, runs, seed, run)]
                row.update({'nmi_mean': float(np.mean(scores)), 'nmi_std': float(np.std(scores)),
                            'runs': runs, 'status': 'ok'})
            except IdeaFlowError as e:
                logger.warning("%s/%s: %s", full.name, method, e.message)
                row.update({'nmi_mean': None, 'nmi_std': None, 'runs': 0, 'status': f"failed: {e.message}"})
            logger.info("%s/%s: %s", full.name, method, row['status'])
            rows.append(row)

    return pd.DataFrame(rows, columns=['dataset', 'method', 'params', 'nmi_mean', 'nmi_std', 'runs', 'status'])


def write_ucr_bench(out_dir: PathLike, table: pd.DataFrame, run: RunConfig) -> Dict[str, Path]:
    """Write ucr_nmi.csv and ucr_nmi.json (rows plus the run configuration)"""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {'csv': out / 'ucr_nmi.csv', 'json': out / 'ucr_nmi.json'}
    _write_csv(table, paths['csv'])
    records = []
    for record in table.to_dict(orient='records'):
        record['params'] = json.loads(record['params'])
        records.append({k: (None if isinstance(v, float) and np.isnan(v) else v) for k, v in record.items()})
    _write_json({'config': run.to_dict(), 'results': records}, paths['json'])
    return paths
