"""Monte Carlo benchmark of the estimators along the w1 = w2 line.

For each sample size the harness draws independent replications (one RNG
stream per replication index), evaluates the requested estimators at every
grid point, and aggregates bias, variance and mean squared error per cell.
Aggregation always happens in replication order over stored per-replication
values, so results are byte-identical no matter how many worker processes
were used (set via the PICKANDS_WORKERS environment variable).
"""

from __future__ import annotations

import csv
import io
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import EmptySummary, ParameterError
from .estimators import ESTIMATOR_IDS, _curve_table
from .models import (
    DependenceModel,
    check_pointwise_validity,
    model_from_dict,
    model_to_dict,
)
from .sampling import draw_sample
from .simplex import SimplexGrid, line_grid_w1_eq_w2

WORKERS_ENV = "PICKANDS_WORKERS"

DEFAULT_ESTIMATORS = ("cfg", "deheuvels", "ht", "ols")
DEFAULT_STEP = 0.025
DEFAULT_REPLICATIONS = 1000


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce one benchmark run."""

    model: DependenceModel
    n_list: tuple[int, ...]
    replications: int
    seed: int
    step: float = DEFAULT_STEP
    estimators: tuple[str, ...] = DEFAULT_ESTIMATORS
    out_dir: str | None = None
    shape_correct: bool = False

    def __post_init__(self):
        if self.replications < 1:
            raise ParameterError("need at least one replication")
        if not self.n_list or any(n < 1 for n in self.n_list):
            raise ParameterError("sample sizes must be positive")
        unknown = [e for e in self.estimators if e not in ESTIMATOR_IDS]
        if unknown:
            raise ParameterError(f"unknown estimator id(s): {unknown}")
        if not self.estimators:
            raise ParameterError("need at least one estimator")
        if len(set(self.estimators)) != len(self.estimators):
            raise ParameterError("duplicate estimator ids")
        if "ols" in self.estimators and min(self.n_list) < self.model.p + 2:
            raise ParameterError(
                f"OLS needs n >= p + 2 = {self.model.p + 2}, got n = {min(self.n_list)}"
            )
        if self.model.p != 3:
            raise ParameterError("the benchmark line grid is defined for p = 3")
        if self.seed < 0:
            raise ParameterError("seed must be non-negative")

    @classmethod
    def from_dict(cls, spec: dict) -> "ExperimentConfig":
        return cls(
            model=model_from_dict(spec["model"]),
            n_list=tuple(int(n) for n in spec["n"]),
            replications=int(spec.get("replications", DEFAULT_REPLICATIONS)),
            seed=int(spec["seed"]),
            step=float(spec.get("step", DEFAULT_STEP)),
            estimators=tuple(spec.get("estimators", DEFAULT_ESTIMATORS)),
            out_dir=spec.get("out"),
            shape_correct=bool(spec.get("shape_correct", False)),
        )

    def to_dict(self) -> dict:
        return {
            "model": model_to_dict(self.model),
            "n": list(self.n_list),
            "replications": self.replications,
            "seed": self.seed,
            "step": self.step,
            "estimators": list(self.estimators),
            "out": self.out_dir,
            "shape_correct": self.shape_correct,
        }


@dataclass(frozen=True)
class SummaryRow:
    model: str
    n: int
    w: tuple[float, float, float]
    estimator: str
    bias: float
    variance: float
    mse: float
    reps: int
    failures: int


@dataclass(frozen=True)
class ExperimentSummary:
    rows: tuple[SummaryRow, ...]


def _replication_block(
    model: DependenceModel,
    n: int,
    seed: int,
    rep_indices: Sequence[int],
    weight_rows: np.ndarray,
    which: tuple[str, ...],
    truth: np.ndarray,
    shape_correct: bool,
) -> np.ndarray:
    """Estimator values for a block of replications, shape (reps, E, G)."""
    out = np.empty((len(rep_indices), len(which), weight_rows.shape[0]))
    lower = weight_rows.max(axis=1)
    for i, rep in enumerate(rep_indices):
        sample = draw_sample(model, n, seed, stream_id=int(rep))
        values, _ = _curve_table(
            sample.data, weight_rows, which, truth=truth, strict=False
        )
        for e, est in enumerate(which):
            vals = values[est]
            if shape_correct:
                vals = np.clip(vals, lower, 1.0)
            out[i, e] = vals
    return out


def _worker_count() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        workers = int(raw)
    except ValueError:
        raise ParameterError(f"{WORKERS_ENV} must be an integer, got {raw!r}")
    return max(workers, 1)


def run_experiment(config: ExperimentConfig, grid: SimplexGrid | None = None) -> ExperimentSummary:
    """Run the full study described by the config.

    Per-cell estimator failures (e.g. a non-positive Deheuvels reciprocal)
    are excluded from that cell's aggregates and counted in the failures
    column; they never abort the run.
    """
    model = config.model
    if grid is None:
        grid = line_grid_w1_eq_w2(config.step)
    report = check_pointwise_validity(model, grid)
    if not report.ok:
        raise ParameterError(f"model fails validity check on the grid: {report.summary()}")
    weight_rows = grid.as_matrix()
    truth = np.atleast_1d(model.pickands(weight_rows))
    which = config.estimators
    workers = _worker_count()
    rows: list[SummaryRow] = []
    for n in config.n_list:
        reps = config.replications
        values = np.empty((reps, len(which), len(grid)))
        all_indices = list(range(reps))
        if workers == 1 or reps < 2 * workers:
            values[:] = _replication_block(
                model, n, config.seed, all_indices, weight_rows, which, truth,
                config.shape_correct,
            )
        else:
            chunks = [list(c) for c in np.array_split(all_indices, 4 * workers) if len(c)]
            with ProcessPoolExecutor(max_workers=workers) as pool:
                futures = [
                    (chunk, pool.submit(
                        _replication_block, model, n, config.seed, chunk,
                        weight_rows, which, truth, config.shape_correct,
                    ))
                    for chunk in chunks
                ]
                for chunk, fut in futures:
                    values[chunk] = fut.result()
        rows.extend(_aggregate(model.tag, n, weight_rows, which, values, truth))
    return ExperimentSummary(tuple(rows))


def _aggregate(
    tag: str,
    n: int,
    weight_rows: np.ndarray,
    which: tuple[str, ...],
    values: np.ndarray,
    truth: np.ndarray,
) -> list[SummaryRow]:
    """Reduce stored per-replication values cell by cell, in a fixed order."""
    rows = []
    reps = values.shape[0]
    for g in range(weight_rows.shape[0]):
        w = tuple(float(c) for c in weight_rows[g])
        for est in sorted(which):
            e = which.index(est)
            col = values[:, e, g]
            ok = np.isfinite(col)
            used = int(ok.sum())
            if used == 0:
                bias = variance = mse = float("nan")
            else:
                # aggregate deviations rather than raw values: variance is
                # shift-invariant and the oracle estimator stays exactly zero
                dev = col[ok] - truth[g]
                bias = float(dev.mean())
                variance = float(dev.var(ddof=1)) if used > 1 else 0.0
                mse = float((dev**2).mean())
            rows.append(
                SummaryRow(tag, n, w, est, bias, variance, mse, used, reps - used)
            )
    return rows


CSV_HEADER = "model,n,w1,w2,w3,estimator,bias,variance,mse,reps,failures"


def summary_csv_text(summary: ExperimentSummary) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for r in summary.rows:
        stats = (
            ["", "", ""]
            if r.reps == 0
            else [f"{r.bias:.17g}", f"{r.variance:.17g}", f"{r.mse:.17g}"]
        )
        writer.writerow(
            [r.model, r.n, f"{r.w[0]:.17g}", f"{r.w[1]:.17g}", f"{r.w[2]:.17g}", r.estimator]
            + stats
            + [r.reps, r.failures]
        )
    return buf.getvalue()


def summarize_to_csv(summary: ExperimentSummary, path: str | Path) -> Path:
    """Write the summary CSV; deterministic row order and formatting."""
    path = Path(path)
    path.write_text(summary_csv_text(summary))
    return path


_PLOT_TEMPLATE = '''#!/usr/bin/env python3
"""Bias (left) and mean squared error (right) along the line w1 = w2.

Self-contained: the summary data is embedded below. Requires matplotlib.
"""
import csv
import io

import matplotlib.pyplot as plt

DATA = """{data}"""

STYLES = ["-", "--", "-.", ":", (0, (3, 1, 1, 1)), (0, (5, 2))]

rows = [r for r in csv.DictReader(io.StringIO(DATA)) if r["reps"] != "0"]
models = sorted({{r["model"] for r in rows}})
for model in models:
    sub = [r for r in rows if r["model"] == model]
    sizes = sorted({{int(r["n"]) for r in sub}})
    estimators = sorted({{r["estimator"] for r in sub}})
    fig, axes = plt.subplots(len(sizes), 2, figsize=(9, 3 * len(sizes)), squeeze=False)
    for i, n in enumerate(sizes):
        for j, column in enumerate(("bias", "mse")):
            ax = axes[i][j]
            for k, est in enumerate(estimators):
                pts = sorted(
                    (float(r["w1"]), float(r[column]))
                    for r in sub
                    if int(r["n"]) == n and r["estimator"] == est
                )
                ax.plot([t for t, _ in pts], [v for _, v in pts],
                        linestyle=STYLES[k % len(STYLES)], label=est)
            ax.set_title(f"{{column.upper() if column == 'mse' else column}} (n = {{n}})")
            ax.set_xlabel("t  (w1 = w2 = t)")
            if i == 0 and j == 0:
                ax.legend(fontsize=8)
    fig.suptitle(model)
    fig.tight_layout()
    safe = "".join(c if c.isalnum() else "_" for c in model).strip("_")
    fig.savefig(f"bias_mse_{{safe}}.png", dpi=150)
    print(f"wrote bias_mse_{{safe}}.png")
'''


def plot_script_text(summary: ExperimentSummary) -> str:
    if not summary.rows:
        raise EmptySummary("cannot plot an empty summary")
    return _PLOT_TEMPLATE.format(data=summary_csv_text(summary))


def emit_plot_script(summary: ExperimentSummary, path: str | Path) -> Path:
    """Write a self-contained matplotlib script for the bias/MSE panels."""
    path = Path(path)
    path.write_text(plot_script_text(summary))
    return path
