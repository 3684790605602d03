"""Experiment sweeps: cell execution, aggregation, CSV and plot-data emission.

A sweep runs every (policy, horizon, repetition) cell of an experiment and
emits:

* ``<name>_runs.csv``    one row per (cell, repetition, sub-system) plus a
  ``network`` row per repetition;
* ``<name>_summary.csv`` across-repetition means and 95% CI half-widths per
  (policy, horizon, sub-system);
* ``<name>_<policy>_mse_plot.csv`` / ``..._aoi_plot.csv`` long-format series
  over the horizon sweep, one series per sub-system plus the network average.

Cells may be dispatched to a process pool; rows are always merged in
deterministic (policy, horizon, repetition) order, so output bytes depend
only on the config and master seed.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from .config import ExperimentSpec
from .sim import Aggregate, RunResult, SimConfig, aggregate, run

RUNS_COLUMNS = [
    "experiment",
    "policy",
    "H",
    "repetition",
    "subsystem",
    "mse",
    "aoi_mean",
    "tx_count",
    "success_count",
    "nodes_mean",
    "diverged",
]

SUMMARY_COLUMNS = [
    "experiment",
    "policy",
    "H",
    "subsystem",
    "runs",
    "diverged_runs",
    "mse_mean",
    "mse_ci_half",
    "aoi_mean",
    "aoi_ci_half",
    "nodes_mean",
    "nodes_ci_half",
]

PLOT_COLUMNS = ["H", "series", "mean", "ci_half"]


@dataclass
class SweepResult:
    """All rows of one sweep plus the files written (if any)."""

    rows: List[dict]
    summary: List[dict]
    aggregates: Dict[Tuple[str, int], Aggregate]
    files: List[Path]


def _run_cell(args) -> RunResult:
    cfg, repetition, policy, horizon = args
    return run(cfg, repetition, policy=policy, horizon=horizon)


def _result_rows(name: str, policy: str, horizon: int, result: RunResult) -> List[dict]:
    n = len(result.mse)
    rows = []
    for i in range(n):
        rows.append(
            {
                "experiment": name,
                "policy": policy,
                "H": horizon,
                "repetition": result.repetition,
                "subsystem": str(i + 1),
                "mse": result.mse[i],
                "aoi_mean": result.aoi[i],
                "tx_count": result.tx[i],
                "success_count": result.success[i],
                "nodes_mean": result.nodes_mean,
                "diverged": result.diverged,
            }
        )
    rows.append(
        {
            "experiment": name,
            "policy": policy,
            "H": horizon,
            "repetition": result.repetition,
            "subsystem": "network",
            "mse": result.mse_avg,
            "aoi_mean": result.aoi_avg,
            "tx_count": sum(result.tx),
            "success_count": sum(result.success),
            "nodes_mean": result.nodes_mean,
            "diverged": result.diverged,
        }
    )
    return rows


def _summary_rows(
    name: str, policy: str, horizon: int, agg: Aggregate, n_subsystems: int
) -> List[dict]:
    rows = []
    for i in range(n_subsystems):
        rows.append(
            {
                "experiment": name,
                "policy": policy,
                "H": horizon,
                "subsystem": str(i + 1),
                "runs": agg.runs,
                "diverged_runs": agg.diverged_runs,
                "mse_mean": float(agg.mse_mean[i]),
                "mse_ci_half": float(agg.mse_ci[i]),
                "aoi_mean": float(agg.aoi_mean[i]),
                "aoi_ci_half": float(agg.aoi_ci[i]),
                "nodes_mean": agg.nodes_mean,
                "nodes_ci_half": agg.nodes_ci,
            }
        )
    rows.append(
        {
            "experiment": name,
            "policy": policy,
            "H": horizon,
            "subsystem": "network",
            "runs": agg.runs,
            "diverged_runs": agg.diverged_runs,
            "mse_mean": agg.mse_avg_mean,
            "mse_ci_half": agg.mse_avg_ci,
            "aoi_mean": agg.aoi_avg_mean,
            "aoi_ci_half": agg.aoi_avg_ci,
            "nodes_mean": agg.nodes_mean,
            "nodes_ci_half": agg.nodes_ci,
        }
    )
    return rows


def run_sweep(
    spec: ExperimentSpec,
    threads: int = 1,
    out_dir: Optional[str] = None,
    seed: Optional[int] = None,
    write_files: bool = True,
) -> SweepResult:
    """Execute all sweep cells and (optionally) write the CSV outputs.

    ``seed`` overrides the config's master seed; ``threads > 1`` dispatches
    repetitions to a process pool without affecting output ordering.
    """
    base = spec.base
    if seed is not None:
        base = SimConfig(
            subsystems=base.subsystems,
            slots=base.slots,
            repetitions=base.repetitions,
            horizon=base.horizon,
            policy=base.policy,
            loss_mean=base.loss_mean,
            loss_std=base.loss_std,
            coherence=base.coherence,
            seed=seed,
        )
    tasks = [
        (base, rep, policy, horizon)
        for policy, horizon in spec.cells()
        for rep in range(base.repetitions)
    ]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_cell, tasks, chunksize=1))
    else:
        results = [_run_cell(task) for task in tasks]

    rows: List[dict] = []
    summary: List[dict] = []
    aggregates: Dict[Tuple[str, int], Aggregate] = {}
    n = len(base.subsystems)
    per_cell = base.repetitions
    for c, (policy, horizon) in enumerate(spec.cells()):
        cell_results = results[c * per_cell : (c + 1) * per_cell]
        for result in cell_results:
            rows.extend(_result_rows(spec.name, policy, horizon, result))
        if per_cell >= 2:
            agg = aggregate(cell_results)
            aggregates[(policy, horizon)] = agg
            summary.extend(_summary_rows(spec.name, policy, horizon, agg, n))

    files: List[Path] = []
    if write_files:
        out = Path(out_dir if out_dir is not None else spec.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        runs_path = out / f"{spec.name}_runs.csv"
        _write_csv(runs_path, RUNS_COLUMNS, rows)
        files.append(runs_path)
        summary_path = out / f"{spec.name}_summary.csv"
        _write_csv(summary_path, SUMMARY_COLUMNS, summary)
        files.append(summary_path)
        files.extend(emit_plotdata(spec.name, spec.policies, summary, out))
    return SweepResult(rows=rows, summary=summary, aggregates=aggregates, files=files)


def _write_csv(path: Path, columns: List[str], rows: List[dict]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def emit_plotdata(
    name: str, policies: List[str], summary: List[dict], out: Path
) -> List[Path]:
    """Write long-format (H, series, mean, ci_half) files for MSE and age."""
    files = []
    for policy in policies:
        for metric, prefix in (("mse", "mse"), ("aoi", "aoi")):
            rows = []
            for entry in summary:
                if entry["policy"] != policy:
                    continue
                series = (
                    f"{prefix}_avg"
                    if entry["subsystem"] == "network"
                    else f"{prefix}_{entry['subsystem']}"
                )
                rows.append(
                    {
                        "H": entry["H"],
                        "series": series,
                        "mean": entry[f"{metric}_mean"],
                        "ci_half": entry[f"{metric}_ci_half"],
                    }
                )
            path = out / f"{name}_{policy}_{prefix}_plot.csv"
            _write_csv(path, PLOT_COLUMNS, rows)
            files.append(path)
    return files
