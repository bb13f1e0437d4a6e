#!/usr/bin/env python3
"""Regenerate the bundled inpainting test crop (tests/assets/crop64.png).

The crop is a deterministic synthetic landscape — smooth sky gradient, sun
disk, two hill ridges, and mild low-frequency texture — so the repository
carries no third-party image while still exercising the inpainting path on
something with photo-like spectral decay.
"""

from pathlib import Path

import numpy as np

from tcomplete import save_image

SIZE = 64


def landscape(n=SIZE):
    yy, xx = np.mgrid[0:n, 0:n] / (n - 1)

    # sky: vertical gradient, deep blue to pale
    sky = np.empty((n, n, 3))
    sky[:, :, 0] = 90 + 110 * yy
    sky[:, :, 1] = 140 + 80 * yy
    sky[:, :, 2] = 210 + 30 * yy

    # sun disk with a soft edge
    d = np.hypot(xx - 0.72, yy - 0.28)
    glow = np.clip(1.0 - d / 0.16, 0.0, 1.0) ** 1.5
    sun = np.stack([255 * glow, 230 * glow, 150 * glow], axis=2)
    img = sky + sun

    # two hill ridges with distinct greens
    ridge1 = 0.62 + 0.06 * np.sin(2 * np.pi * (1.3 * xx[0] + 0.1))
    ridge2 = 0.78 + 0.05 * np.sin(2 * np.pi * (2.1 * xx[0] + 0.55))
    hill1 = yy > ridge1[None, :]
    hill2 = yy > ridge2[None, :]
    img[hill1] = np.array([60.0, 130.0, 70.0]) + 40 * yy[hill1][:, None]
    img[hill2] = np.array([30.0, 90.0, 45.0]) + 30 * yy[hill2][:, None]

    # mild low-frequency texture so slices are not exactly low rank
    tex = 6 * np.sin(2 * np.pi * 3.0 * xx) * np.cos(2 * np.pi * 2.0 * yy)
    img += tex[:, :, None]
    return np.clip(img, 0.0, 255.0)


if __name__ == "__main__":
    out = Path(__file__).resolve().parent.parent / "tests" / "assets" / "crop64.png"
    out.parent.mkdir(parents=True, exist_ok=True)
    save_image(out, landscape())
    print(f"wrote {out}")
