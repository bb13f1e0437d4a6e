"""Tensor file formats: T3B binaries and PNG images.

T3B layout: 4-byte magic ``T3B1``, then three little-endian uint64 dims
(n1, n2, n3), then n1*n2*n3 little-endian float64 values stored
slice-major — frontal slice 0 in row-major order, then slice 1, and so on.

Images load as (height, width, 3) float tensors with channel values in
[0, 255]; the color axis sits on mode 3 so tubal sampling drops whole
pixels rather than single channels.
"""

from __future__ import annotations

import struct

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import IoFailure, UnsupportedFormat
from .tensor_ops import _as_tensor3

T3B_MAGIC = b"T3B1"
_HEADER = struct.Struct("<QQQ")


def save_tensor(path, a) -> None:
    a = _as_tensor3(a, "tensor")
    n1, n2, n3 = a.shape
    payload = np.ascontiguousarray(np.moveaxis(a, 2, 0), dtype="<f8")
    try:
        with open(path, "wb") as fh:
            fh.write(T3B_MAGIC)
            fh.write(_HEADER.pack(n1, n2, n3))
            fh.write(payload.tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_tensor(path) -> np.ndarray:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if raw[:4] != T3B_MAGIC:
        raise UnsupportedFormat(f"{path}: bad magic {raw[:4]!r}, expected {T3B_MAGIC!r}")
    if len(raw) < 4 + _HEADER.size:
        raise IoFailure(f"{path}: truncated header")
    n1, n2, n3 = _HEADER.unpack_from(raw, 4)
    if min(n1, n2, n3) < 1:
        raise IoFailure(f"{path}: invalid dims {(n1, n2, n3)}")
    expected = 4 + _HEADER.size + 8 * n1 * n2 * n3
    if len(raw) < expected:
        raise IoFailure(f"{path}: truncated payload, {len(raw)} bytes < {expected}")
    if len(raw) > expected:
        raise IoFailure(f"{path}: {len(raw) - expected} trailing bytes")
    flat = np.frombuffer(raw, dtype="<f8", count=n1 * n2 * n3, offset=4 + _HEADER.size)
    return np.moveaxis(flat.reshape(n3, n1, n2), 0, 2).astype(np.float64)


def load_image(path) -> np.ndarray:
    """Read a PNG (or other Pillow-readable) image as an RGB float tensor."""
    try:
        with Image.open(path) as img:
            if img.mode == "L":
                img = img.convert("RGB")
            if img.mode != "RGB":
                raise UnsupportedFormat(f"{path}: unsupported image mode {img.mode!r}")
            arr = np.asarray(img, dtype=np.float64)
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat(f"{path}: not a recognized image") from exc
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    return arr


def save_image(path, a) -> None:
    """Write an RGB float tensor as 8-bit PNG (clamp to [0, 255], then round)."""
    a = _as_tensor3(a, "image")
    if a.shape[2] != 3:
        raise UnsupportedFormat(f"image tensor needs 3 channels on mode 3, got {a.shape[2]}")
    quantized = np.rint(np.clip(a, 0.0, 255.0)).astype(np.uint8)
    try:
        Image.fromarray(quantized, mode="RGB").save(path)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
