"""Tubal sampling masks and the associated projection operators.

A mask fixes a set of (i, j) positions in the frontal face of a tensor;
the induced index set covers every tube at those positions, so a tube is
either observed entirely or not at all.  Masks are generated with numpy's
PCG64 generator (``np.random.default_rng``); identical seeds reproduce
identical masks across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, EmptyMask, IoFailure
from .tensor_ops import _as_tensor3


@dataclass(frozen=True)
class TubalMask:
    """Set of sampled (i, j) positions for tensors with frontal size n1 x n2."""

    n1: int
    n2: int
    sampled: np.ndarray = field(repr=False)  # bool (n1, n2)

    def __post_init__(self):
        sampled = np.asarray(self.sampled, dtype=bool)
        if sampled.shape != (self.n1, self.n2):
            raise DimensionMismatch(
                f"mask array {sampled.shape} does not match dims ({self.n1}, {self.n2})"
            )
        object.__setattr__(self, "sampled", sampled)

    @property
    def count(self) -> int:
        return int(self.sampled.sum())

    @property
    def ratio(self) -> float:
        return self.count / (self.n1 * self.n2)

    @property
    def pairs(self) -> np.ndarray:
        """Sampled positions as a (count, 2) int array in row-major order."""
        return np.argwhere(self.sampled)

    def is_full(self) -> bool:
        return self.count == self.n1 * self.n2

    @classmethod
    def from_pairs(cls, n1, n2, pairs) -> "TubalMask":
        pairs = np.asarray(pairs, dtype=int).reshape(-1, 2)
        if pairs.shape[0]:
            if pairs.min() < 0 or pairs[:, 0].max() >= n1 or pairs[:, 1].max() >= n2:
                raise DimensionMismatch("mask pair out of range")
        sampled = np.zeros((n1, n2), dtype=bool)
        sampled[pairs[:, 0], pairs[:, 1]] = True
        return cls(n1, n2, sampled)


def random_tubal_mask(n1, n2, ratio, seed):
    """Sample ``round(ratio * n1 * n2)`` distinct positions uniformly at random.

    Deterministic for a fixed seed.  Raises ``EmptyMask`` when the requested
    count rounds to zero.
    """
    if not 0.0 < ratio <= 1.0:
        raise ValueError(f"ratio must lie in (0, 1], got {ratio}")
    count = int(round(ratio * n1 * n2))
    if count == 0:
        raise EmptyMask(f"ratio {ratio} on {n1}x{n2} rounds to zero sampled tubes")
    rng = np.random.default_rng(seed)
    flat = rng.choice(n1 * n2, size=count, replace=False)
    sampled = np.zeros(n1 * n2, dtype=bool)
    sampled[flat] = True
    return TubalMask(n1, n2, sampled.reshape(n1, n2))


def _check_dims(x, mask):
    if x.shape[:2] != (mask.n1, mask.n2):
        raise DimensionMismatch(
            f"tensor front {x.shape[:2]} does not match mask ({mask.n1}, {mask.n2})"
        )


def project(x, mask):
    """Keep tubes at sampled positions, zero all others."""
    x = _as_tensor3(x)
    _check_dims(x, mask)
    return np.where(mask.sampled[:, :, None], x, 0.0)


def impose(x, y, mask):
    """Take ``y`` on sampled tubes and ``x`` elsewhere."""
    x = _as_tensor3(x, "x")
    y = _as_tensor3(y, "y")
    if x.shape != y.shape:
        raise DimensionMismatch(f"shapes differ: {x.shape} vs {y.shape}")
    _check_dims(x, mask)
    return np.where(mask.sampled[:, :, None], y, x)


def save_mask(path, mask):
    """Write a mask as text: first line ``n1 n2``, then one 1-indexed ``i j`` per line."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{mask.n1} {mask.n2}\n")
        for i, j in mask.pairs:
            fh.write(f"{i + 1} {j + 1}\n")


def load_mask(path):
    """Read a mask written by :func:`save_mask`."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise IoFailure(f"cannot read mask file {path}: {exc}") from exc
    if not lines:
        raise IoFailure(f"mask file {path} is empty")
    try:
        n1, n2 = (int(tok) for tok in lines[0].split())
        pairs = np.array(
            [[int(tok) for tok in ln.split()] for ln in lines[1:]], dtype=int
        ).reshape(-1, 2)
    except ValueError as exc:
        raise IoFailure(f"malformed mask file {path}: {exc}") from exc
    if pairs.shape[0]:
        if pairs.min() < 1 or pairs[:, 0].max() > n1 or pairs[:, 1].max() > n2:
            raise IoFailure(f"mask file {path} holds out-of-range indices")
        if len(np.unique(pairs, axis=0)) != len(pairs):
            raise IoFailure(f"mask file {path} holds duplicate pairs")
    return TubalMask.from_pairs(n1, n2, pairs - 1)
