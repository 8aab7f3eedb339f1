"""Geometry-aware density maps.

The density at an interior pixel is the inverse of the summed free run
lengths through it along the two grid axes.  Pushing a notch into the
boundary shortens runs, so crowded pockets of the interior get larger
density values, while any full rectangle is perfectly uniform.  Runs are
measured in whole pixels, which keeps the per-pixel sums integral and
makes exact clustering possible downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import EmptyInterior
from .raster import as_interior


@dataclass(frozen=True)
class DensityMap:
    """Per-pixel density values plus the exact integer run sums they
    were derived from.  Both grids are 0 outside the interior."""
    values: np.ndarray      # float64
    raw_sums: np.ndarray    # int64

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def interior(self) -> np.ndarray:
        return self.raw_sums > 0


def _runs_along_rows(interior: np.ndarray) -> np.ndarray:
    """Length of the maximal horizontal interior run through each pixel.

    Linear two-pass formulation: run-length-encode each row (one diff
    pass), then scatter each run's length back over its pixels (one
    repeat pass).  A padding column of False stops runs from bleeding
    across row ends in the flattened view.
    """
    h, w = interior.shape
    padded = np.zeros((h, w + 1), dtype=bool)
    padded[:, :w] = interior
    flat = padded.ravel()
    delta = np.diff(flat.astype(np.int8), prepend=np.int8(0))
    starts = np.flatnonzero(delta == 1)
    ends = np.flatnonzero(delta == -1)
    lengths = ends - starts
    out = np.zeros(flat.shape, dtype=np.int64)
    out[flat] = np.repeat(lengths, lengths)
    return out.reshape(h, w + 1)[:, :w]


def directional_run_lengths(mask) -> tuple[np.ndarray, np.ndarray]:
    """(Lx, Ly): per-pixel maximal 4-connected interior run lengths
    along x and along y; 0 on non-interior pixels."""
    interior = as_interior(mask)
    if not interior.any():
        raise EmptyInterior("mask has no interior pixels")
    lx = _runs_along_rows(interior)
    ly = _runs_along_rows(interior.T).T
    return lx, ly


def density_map(mask) -> DensityMap:
    """Four-direction density: values = 1 / (Lx + Ly) on the interior."""
    lx, ly = directional_run_lengths(mask)
    raw = lx + ly
    values = np.zeros(raw.shape, dtype=np.float64)
    inside = raw > 0
    values[inside] = 1.0 / raw[inside]
    return DensityMap(values=values, raw_sums=raw)


def axis_density_maps(mask) -> tuple[DensityMap, DensityMap]:
    """The two per-axis maps (no inversion): values are the run lengths
    themselves, so adding the two maps reproduces the four-direction
    raw sums."""
    lx, ly = directional_run_lengths(mask)
    return (DensityMap(values=lx.astype(np.float64), raw_sums=lx),
            DensityMap(values=ly.astype(np.float64), raw_sums=ly))


def normalize_density(d: DensityMap) -> np.ndarray:
    """Sobel gradient magnitude of the raw run sums, clamped to [0, 255]
    and divided by 255; zero outside the interior.

    The result is flat inside each constant-density zone and ridges
    exactly along zone borders (and the outline), normalized to [0, 1].
    """
    raw = d.raw_sums.astype(np.float64)
    gx = ndimage.sobel(raw, axis=1, mode="constant", cval=0.0)
    gy = ndimage.sobel(raw, axis=0, mode="constant", cval=0.0)
    mag = np.hypot(gx, gy)
    np.clip(mag, 0.0, 255.0, out=mag)
    mag /= 255.0
    mag[~d.interior] = 0.0
    return mag
