"""ADMM tensor completion with spectral low-rank penalties.

Solves ``min h(X) s.t. the observed tubes of X match the data`` by
alternating a data-imposition step, a spectral shrinkage step, and a
multiplier update.  Two penalties are supported: the tensor nuclear norm
("tnn", sum of all spectral-slice singular values) and its nonconvex
L1-minus-L2 variant ("tl12", per-slice L1 norm minus L2 norm of the
singular values).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalFailure
from .metrics import relative_error
from .sampling import impose, project
from .tensor_ops import _as_tensor3, ifft_mode3, spectral_singular_values

REGULARIZERS = ("tnn", "tl12")

RHO_GROWTH_FACTOR = 1.05
RHO_CAP = 1e2


@dataclass(frozen=True)
class AdmmConfig:
    regularizer: str = "tnn"
    rho: float = 1e-2  # weight of the quadratic coupling term
    lambda_weight: float = 1.0  # penalty weight; shrink threshold is lambda/rho
    tol: float = 1e-6  # relative-change stopping threshold
    max_iters: int = 500
    rho_growth: bool = False  # rho <- min(1.05 * rho, 1e2) after each iteration
    obs_tol: float | None = None  # optional stop on observed-portion error of z
    lagged_dual: bool = False  # multiplier update uses the previous x iterate

    def __post_init__(self):
        if self.regularizer not in REGULARIZERS:
            raise ValueError(f"unknown regularizer {self.regularizer!r}")
        if self.rho <= 0 or self.lambda_weight <= 0 or self.tol <= 0:
            raise ValueError("rho, lambda_weight and tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")


@dataclass
class AdmmState:
    """Final iterates and convergence record of one ADMM run."""

    x: np.ndarray
    z: np.ndarray
    b: np.ndarray
    iters: int
    converged: bool
    # one row per iteration: (iteration, relative change, RE vs truth or None)
    history: list = field(default_factory=list)


def tnn(x):
    """Tensor nuclear norm: sum of singular values over all spectral slices."""
    return float(spectral_singular_values(x).sum())


def tl12(x):
    """Per-spectral-slice L1-minus-L2 of the singular values, summed over slices."""
    sig = spectral_singular_values(x)
    return float((sig.sum(axis=1) - np.linalg.norm(sig, axis=1)).sum())


def _l1l2_objective(x, v, mu):
    return mu * (x.sum() - np.linalg.norm(x)) + 0.5 * np.sum((x - v) ** 2)


def prox_l1_minus_l2(v, mu):
    """Proximal operator of ``mu * (||.||_1 - ||.||_2)`` on a singular-value vector.

    ``v`` must be entrywise nonnegative and sorted nonincreasing.  Evaluates
    the closed-form candidates (soft-threshold-and-rescale when the largest
    entry exceeds ``mu``, the 1-sparse peak otherwise, and the zero vector)
    and returns the one with the smallest objective.
    """
    if mu <= 0:
        raise ValueError("mu must be positive")
    v = np.asarray(v, dtype=float)
    if v.size == 0:
        return v.copy()
    if v.min() < 0:
        raise ValueError("prox input must be nonnegative")
    candidates = [np.zeros_like(v)]
    vmax = v.max()
    if vmax > mu:
        w = np.maximum(v - mu, 0.0)
        nw = np.linalg.norm(w)
        candidates.append(w * ((nw + mu) / nw))
    elif vmax > 0.0:
        one_sparse = np.zeros_like(v)
        one_sparse[int(np.argmax(v))] = vmax  # first index attaining the max
        candidates.append(one_sparse)
    objectives = [_l1l2_objective(c, v, mu) for c in candidates]
    return candidates[int(np.argmin(objectives))]


def spectral_shrink(x, mu, regularizer, half_spectrum=True):
    """Shrink the spectral-slice singular values of ``x`` and recompose.

    TNN uses soft thresholding ``max(s - mu, 0)``; TL12 applies
    :func:`prox_l1_minus_l2` to each slice's singular-value vector.
    """
    x = _as_tensor3(x)
    if mu <= 0:
        raise ValueError("mu must be positive")
    if regularizer not in REGULARIZERS:
        raise ValueError(f"unknown regularizer {regularizer!r}")
    n3 = x.shape[2]
    if half_spectrum:
        xh = np.fft.rfft(x, axis=2)
    else:
        xh = np.fft.fft(x, axis=2)
    slices = np.moveaxis(xh, 2, 0)
    try:
        u, sig, vh = np.linalg.svd(slices, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"SVD failed during shrinkage: {exc}") from exc
    if regularizer == "tnn":
        shrunk = np.maximum(sig - mu, 0.0)
    else:
        shrunk = np.stack([prox_l1_minus_l2(row, mu) for row in sig])
    out = np.moveaxis((u * shrunk[:, None, :]) @ vh, 0, 2)
    if half_spectrum:
        return np.fft.irfft(out, n=n3, axis=2)
    return ifft_mode3(out)


def solve_admm(y, mask, cfg, truth=None):
    """Complete ``y`` (supported on ``mask``) under the configured penalty.

    Returns ``(x, state)`` where ``x`` matches the observed tubes exactly.
    Non-convergence within ``cfg.max_iters`` is reported through
    ``state.converged``, never raised.

    Two degenerate inputs resolve in a single iteration: a full mask (the
    constraint fixes every entry) and all-zero observations (the zero
    tensor is feasible and has zero penalty).
    """
    y = _as_tensor3(y, "y")
    y = project(y, mask)  # observations live on the mask; idempotent if already true
    x = y.copy()
    z = y.copy()
    b = np.zeros_like(y)
    history = []

    def record(it, rel):
        re = relative_error(x, truth) if truth is not None else None
        history.append((it, rel, re))

    if mask.is_full() or not y.any():
        x = impose(z - b, y, mask)
        record(1, 0.0)
        return x, AdmmState(x, z, b, 1, True, history)

    rho = cfg.rho
    converged = False
    iters = 0
    y_norm = np.linalg.norm(y)
    for it in range(1, cfg.max_iters + 1):
        iters = it
        mu = cfg.lambda_weight / rho
        x_prev = x
        x = impose(z - b, y, mask)
        z = spectral_shrink(x + b, mu, cfg.regularizer)
        b = b + ((x_prev if cfg.lagged_dual else x) - z)
        rel = np.linalg.norm(x - x_prev) / max(1.0, np.linalg.norm(x_prev))
        record(it, rel)
        # the initial x equals the first update by construction, so the
        # relative-change test only becomes meaningful from iteration 2 on
        if it > 1 and rel < cfg.tol:
            converged = True
            break
        if cfg.obs_tol is not None:
            obs_err = np.linalg.norm(project(z, mask) - y) / y_norm
            if obs_err < cfg.obs_tol:
                converged = True
                break
        if cfg.rho_growth:
            rho = min(rho * RHO_GROWTH_FACTOR, RHO_CAP)
    return x, AdmmState(x, z, b, iters, converged, history)


def write_history_csv(path, history):
    """Write convergence history as ``iter,rel_change,re`` (re blank if unknown)."""
    with open(path, "w", newline="", encoding="ascii") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iter", "rel_change", "re"])
        for it, rel, re in history:
            writer.writerow([it, repr(float(rel)), "" if re is None else repr(float(re))])
