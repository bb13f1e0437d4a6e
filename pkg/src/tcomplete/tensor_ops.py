"""Third-order tensor algebra under the mode-3 discrete Fourier transform.

A tensor is a real numpy array of shape ``(n1, n2, n3)``: ``a[:, :, k]`` is
the k-th frontal slice and ``a[i, j, :]`` the (i, j)-th tube.  Arrays are
kept in numpy's default C order in memory; the slice-major convention only
matters for on-disk serialization (see ``tensor_io``).

The spectral mirror of a tensor is the complex array ``fft_mode3(a)`` of the
same shape, holding the unnormalized DFT of every tube.  Because the input
is real, slice ``k`` and slice ``n3 - k`` are complex conjugates, so the
slice-wise routines below only process the first ``n3 // 2 + 1`` slices and
mirror the rest by conjugation.  Every such routine also accepts
``half_spectrum=False`` to force the full per-slice computation; both paths
agree to ~1e-15 and the test suite runs both.

All operations are pure: inputs are never mutated, and results do not alias
inputs.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from .errors import DimensionMismatch, NumericalFailure, SymmetryViolation

DEFAULT_RANK_TOL = 1e-9


class TSvd(NamedTuple):
    """Factors of a tensor singular value decomposition ``a = u * s * v^T``.

    ``u`` is ``(n1, m, n3)``, ``s`` is ``(m, m, n3)`` f-diagonal, ``v`` is
    ``(n2, m, n3)`` with ``m = min(n1, n2)``.  ``u`` and ``v`` are
    orthogonal tensors; the spectral slices of ``s`` carry real, nonnegative,
    nonincreasing diagonals.
    """

    u: np.ndarray
    s: np.ndarray
    v: np.ndarray


def _as_tensor3(a, name="tensor"):
    """Validate and return ``a`` as a float (n1, n2, n3) array."""
    arr = np.asarray(a)
    if np.iscomplexobj(arr):
        raise DimensionMismatch(f"{name} must be real, got complex dtype")
    arr = arr.astype(float, copy=False)
    if arr.ndim != 3:
        raise DimensionMismatch(f"{name} must be 3-mode, got shape {arr.shape}")
    if min(arr.shape) < 1:
        raise DimensionMismatch(f"{name} has an empty mode: {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains NaN or Inf values")
    return arr


def _symmetry_error(s):
    """Max abs deviation from mode-3 conjugate symmetry, relative to max |s|."""
    n3 = s.shape[2]
    mirror = np.conj(s[:, :, (n3 - np.arange(n3)) % n3])
    scale = np.abs(s).max()
    if scale == 0.0:
        return 0.0
    return float(np.abs(s - mirror).max() / scale)


def fft_mode3(a):
    """Unnormalized DFT of every tube of a real tensor.

    Returns a complex array of the same shape whose slice k holds the k-th
    frequency component of each length-n3 tube.
    """
    a = _as_tensor3(a)
    return np.fft.fft(a, axis=2)


def ifft_mode3(s, tol=1e-8):
    """Inverse of :func:`fft_mode3`, returning a real tensor.

    Raises ``SymmetryViolation`` if ``s`` deviates from conjugate symmetry
    (relative to ``max |s|``) by more than ``tol``; otherwise the imaginary
    residue of the inverse transform is discarded.
    """
    s = np.asarray(s, dtype=complex)
    if s.ndim != 3:
        raise DimensionMismatch(f"spectral tensor must be 3-mode, got {s.shape}")
    err = _symmetry_error(s)
    if err > tol:
        raise SymmetryViolation(
            f"conjugate symmetry violated: relative error {err:.3e} > {tol:.1e}"
        )
    return np.fft.ifft(s, axis=2).real


def _spectral_matmul(ah, bh):
    # slice-wise matrix products, batched over the trailing (frequency) axis
    return np.matmul(np.moveaxis(ah, 2, 0), np.moveaxis(bh, 2, 0))


def t_product(a, b, half_spectrum=True):
    """t-product ``a * b`` of an (n1, n2, n3) and an (n2, l, n3) tensor.

    Equals slice-wise matrix multiplication in the Fourier domain, or
    equivalently the sum of circular convolutions of matching tubes.
    """
    a = _as_tensor3(a, "a")
    b = _as_tensor3(b, "b")
    if a.shape[1] != b.shape[0] or a.shape[2] != b.shape[2]:
        raise DimensionMismatch(f"cannot t-multiply {a.shape} by {b.shape}")
    n3 = a.shape[2]
    if half_spectrum:
        ch = _spectral_matmul(np.fft.rfft(a, axis=2), np.fft.rfft(b, axis=2))
        return np.fft.irfft(np.moveaxis(ch, 0, 2), n=n3, axis=2)
    ch = _spectral_matmul(np.fft.fft(a, axis=2), np.fft.fft(b, axis=2))
    return ifft_mode3(np.moveaxis(ch, 0, 2))


def t_transpose(a):
    """Tensor transpose: transpose every frontal slice and reverse slices 2..n3."""
    a = _as_tensor3(a)
    out = np.empty((a.shape[1], a.shape[0], a.shape[2]))
    out[:, :, 0] = a[:, :, 0].T
    out[:, :, 1:] = np.transpose(a[:, :, :0:-1], (1, 0, 2))
    return out


def identity_tensor(n, n3):
    """Identity for the t-product: first frontal slice I_n, remaining slices zero."""
    e = np.zeros((n, n, n3))
    e[:, :, 0] = np.eye(n)
    return e


def _batched_svd(slices):
    try:
        return np.linalg.svd(slices, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(f"per-slice SVD did not converge: {exc}") from exc


def _half_slices(a):
    """Spectral slices 0..n3//2 of a real tensor, as an (h, n1, n2) stack."""
    return np.moveaxis(np.fft.rfft(a, axis=2), 2, 0)


def _mirror_full(spec_half, n3):
    """Rebuild the full (n1, n2, n3) spectrum from its half, by conjugation."""
    h = spec_half.shape[2]
    full = np.empty(spec_half.shape[:2] + (n3,), dtype=complex)
    full[:, :, :h] = spec_half
    for k in range(h, n3):
        full[:, :, k] = np.conj(spec_half[:, :, n3 - k])
    return full


def t_svd(a, half_spectrum=True):
    """Tensor SVD: orthogonal ``u``, ``v`` and f-diagonal ``s`` with ``a = u*s*v^T``."""
    a = _as_tensor3(a)
    n1, n2, n3 = a.shape
    m = min(n1, n2)
    if half_spectrum:
        uh, sig, vhh = _batched_svd(_half_slices(a))
        h = uh.shape[0]
    else:
        uh, sig, vhh = _batched_svd(np.moveaxis(np.fft.fft(a, axis=2), 2, 0))
        h = n3
    u_spec = np.moveaxis(uh, 0, 2)
    v_spec = np.moveaxis(np.conj(np.transpose(vhh, (0, 2, 1))), 0, 2)
    s_spec = np.zeros((m, m, h), dtype=complex)
    idx = np.arange(m)
    s_spec[idx, idx, :] = sig.T
    if half_spectrum:
        u = np.fft.irfft(u_spec, n=n3, axis=2)
        s = np.fft.irfft(s_spec, n=n3, axis=2)
        v = np.fft.irfft(v_spec, n=n3, axis=2)
    else:
        u = ifft_mode3(u_spec)
        s = ifft_mode3(s_spec)
        v = ifft_mode3(v_spec)
    return TSvd(u, s, v)


def t_pinv(a, rtol=1e-12, half_spectrum=True):
    """Tensor Moore-Penrose pseudo-inverse.

    Computed slice-wise in the Fourier domain; singular values below
    ``rtol`` times the largest one of each slice are treated as zero.
    Satisfies ``a * pinv(a) * a = a`` and ``pinv(a) * a * pinv(a) = pinv(a)``.
    """
    a = _as_tensor3(a)
    n3 = a.shape[2]
    if half_spectrum:
        slices = _half_slices(a)
    else:
        slices = np.moveaxis(np.fft.fft(a, axis=2), 2, 0)
    u, sig, vh = _batched_svd(slices)
    cut = rtol * sig.max(axis=1, keepdims=True)
    inv = np.where(sig > cut, 1.0 / np.where(sig > cut, sig, 1.0), 0.0)
    pinv_slices = np.conj(np.transpose(vh, (0, 2, 1))) * inv[:, None, :]
    pinv_slices = np.matmul(pinv_slices, np.conj(np.transpose(u, (0, 2, 1))))
    spec = np.moveaxis(pinv_slices, 0, 2)
    if half_spectrum:
        return np.fft.irfft(spec, n=n3, axis=2)
    return ifft_mode3(spec)


def spectral_singular_values(a, half_spectrum=True):
    """Per-Fourier-slice singular values of a real tensor.

    Returns an (n3, m) array; row k holds the nonincreasing singular values
    of spectral slice k.
    """
    a = _as_tensor3(a)
    n3 = a.shape[2]
    if half_spectrum:
        sig_half = np.linalg.svd(_half_slices(a), compute_uv=False)
        h = sig_half.shape[0]
        sig = np.empty((n3, sig_half.shape[1]))
        sig[:h] = sig_half
        for k in range(h, n3):
            sig[k] = sig_half[n3 - k]
        return sig
    slices = np.moveaxis(np.fft.fft(a, axis=2), 2, 0)
    return np.linalg.svd(slices, compute_uv=False)


def tubal_rank(a, tol=DEFAULT_RANK_TOL):
    """Multi rank (per-spectral-slice rank vector) and tubal rank (its max).

    A singular value counts toward the rank when it exceeds ``tol`` times
    the largest singular value across all slices.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    sig = spectral_singular_values(a)
    top = sig.max()
    if top == 0.0:
        ranks = np.zeros(sig.shape[0], dtype=int)
        return ranks, 0
    ranks = (sig > tol * top).sum(axis=1).astype(int)
    return ranks, int(ranks.max())
