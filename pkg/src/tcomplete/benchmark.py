"""Reproducible completion sweeps over sampling ratios.

A sweep draws one synthetic instance (ground truth + mask) per
(ratio, trial) pair and runs every requested method on that same instance,
so methods are compared pairwise.  All randomness derives from the sweep
seed; rerunning a spec reproduces the RE/PSNR columns exactly.  Timing
covers solver time only.
"""

from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .admm import AdmmConfig, solve_admm
from .cur import IcurcConfig, tccur
from .metrics import psnr, relative_error, synth_low_tubal_rank
from .sampling import project, random_tubal_mask

METHODS = ("tnn", "tl12", "tccur")


@dataclass(frozen=True)
class ExperimentSpec:
    dims: tuple = (64, 64, 8)
    tubal_rank: int = 2
    sampling_ratios: tuple = (0.3,)
    trials: int = 1
    methods: tuple = METHODS
    seed: int = 0
    max_iters: int = 500
    # ADMM knobs
    admm_rho: float = 1e-2
    admm_lambda: float = 1.0
    admm_tol: float = 1e-6
    admm_rho_growth: bool = False
    # CUR knobs (row/col index-set sizes fall back to the oversampling default)
    cur_eps: float = 1e-6
    cur_rows: int | None = None
    cur_cols: int | None = None
    # when set, every method additionally stops once the relative error on
    # the observed portion drops below this value (shared timing rule)
    obs_stop_tol: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "sampling_ratios", tuple(float(r) for r in self.sampling_ratios))
        object.__setattr__(self, "methods", tuple(self.methods))
        if len(self.dims) != 3 or min(self.dims) < 1:
            raise ValueError(f"dims must be three positive integers, got {self.dims}")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if not self.sampling_ratios or not all(0.0 < r <= 1.0 for r in self.sampling_ratios):
            raise ValueError("sampling ratios must lie in (0, 1]")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")
        if self.tubal_rank < 1 or self.tubal_rank > min(self.dims[0], self.dims[1]):
            raise ValueError(f"tubal_rank {self.tubal_rank} out of range for {self.dims}")

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text) -> "ExperimentSpec":
        data = json.loads(text)
        return cls(**data)


@dataclass
class MetricRow:
    method: str
    ratio: float
    trial: int
    re: float
    psnr: float
    time_s: float
    iters: int
    failed: bool = False


CSV_HEADER = ["method", "ratio", "trial", "re", "psnr", "time_s", "iters"]


def _instance_seed(spec, ratio_index, trial):
    return np.random.SeedSequence(spec.seed, spawn_key=(ratio_index, trial))


def _solve(method, y, mask, spec, instance_key):
    if method in ("tnn", "tl12"):
        cfg = AdmmConfig(
            regularizer=method,
            rho=spec.admm_rho,
            lambda_weight=spec.admm_lambda,
            tol=spec.admm_tol,
            max_iters=spec.max_iters,
            rho_growth=spec.admm_rho_growth,
            obs_tol=spec.obs_stop_tol,
        )
        estimate, state = solve_admm(y, mask, cfg)
        return estimate, state.iters
    cfg = IcurcConfig(
        rank=spec.tubal_rank,
        eps=spec.obs_stop_tol if spec.obs_stop_tol is not None else spec.cur_eps,
        max_iters=spec.max_iters,
        seed=instance_key,
        row_count=spec.cur_rows,
        col_count=spec.cur_cols,
    )
    result = tccur(y, mask, cfg)
    return result.estimate, int(result.iters.max())


def run_sweep(spec):
    """Yield one MetricRow per (method, ratio, trial), in that order.

    Solver failures become rows with NaN metrics; the sweep continues.
    """
    for method in spec.methods:
        for ratio_index, ratio in enumerate(spec.sampling_ratios):
            for trial in range(spec.trials):
                seq = _instance_seed(spec, ratio_index, trial)
                truth_seed, mask_seed, solver_seed = seq.spawn(3)
                truth = synth_low_tubal_rank(*spec.dims, spec.tubal_rank, truth_seed)
                mask = random_tubal_mask(spec.dims[0], spec.dims[1], ratio, mask_seed)
                y = project(truth, mask)
                solver_key = int(solver_seed.generate_state(1)[0])
                try:
                    start = time.perf_counter()
                    estimate, iters = _solve(method, y, mask, spec, solver_key)
                    elapsed = time.perf_counter() - start
                except Exception:
                    yield MetricRow(method, ratio, trial, math.nan, math.nan, math.nan, 0, True)
                    continue
                yield MetricRow(
                    method,
                    ratio,
                    trial,
                    relative_error(estimate, truth),
                    psnr(estimate, truth),
                    elapsed,
                    iters,
                )


def write_rows(fh, rows, header=True):
    """Stream metric rows to an open file as CSV, flushing per row."""
    writer = csv.writer(fh)
    if header:
        writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.method,
                repr(row.ratio),
                row.trial,
                repr(row.re),
                repr(row.psnr),
                repr(row.time_s),
                row.iters,
            ]
        )
        fh.flush()
        yield row


def read_rows(fh):
    """Read back rows written by :func:`write_rows`."""
    reader = csv.DictReader(fh)
    rows = []
    for rec in reader:
        re = float(rec["re"])
        rows.append(
            MetricRow(
                method=rec["method"],
                ratio=float(rec["ratio"]),
                trial=int(rec["trial"]),
                re=re,
                psnr=float(rec["psnr"]),
                time_s=float(rec["time_s"]),
                iters=int(rec["iters"]),
                failed=math.isnan(re),
            )
        )
    return rows
