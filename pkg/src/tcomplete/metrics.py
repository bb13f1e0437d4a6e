"""Recovery metrics and synthetic low-tubal-rank test tensors."""

from __future__ import annotations

import math

import numpy as np

from .errors import ZeroTruth
from .tensor_ops import _as_tensor3, t_product


def relative_error(estimate, truth):
    """Frobenius-norm error of ``estimate`` relative to ``truth``."""
    estimate = _as_tensor3(estimate, "estimate")
    truth = _as_tensor3(truth, "truth")
    denom = np.linalg.norm(truth)
    if denom == 0.0:
        raise ZeroTruth("relative error is undefined for a zero reference tensor")
    return float(np.linalg.norm(estimate - truth) / denom)


def psnr(estimate, truth):
    """Peak signal-to-noise ratio in dB.

    Uses the ground truth's maximum absolute value as the peak.  Returns
    ``math.inf`` when the estimate matches the truth exactly.
    """
    estimate = _as_tensor3(estimate, "estimate")
    truth = _as_tensor3(truth, "truth")
    peak = np.abs(truth).max()
    if peak == 0.0:
        raise ZeroTruth("PSNR is undefined for a zero reference tensor")
    err2 = float(np.sum((estimate - truth) ** 2))
    if err2 == 0.0:
        return math.inf
    n1, n2, n3 = truth.shape
    return float(10.0 * np.log10(n1 * n2 * n3 * peak**2 / err2))


def synth_low_tubal_rank(n1, n2, n3, rank, seed):
    """Random tensor of tubal rank ``rank`` (generically).

    Built as the t-product of two independent standard-normal factor
    tensors of inner size ``rank``.  Deterministic for a fixed seed.
    """
    if rank < 1 or rank > min(n1, n2):
        raise ValueError(f"rank {rank} out of range for dims ({n1}, {n2})")
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n1, rank, n3))
    b = rng.standard_normal((rank, n2, n3))
    return t_product(a, b)
