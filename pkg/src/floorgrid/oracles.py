"""Brute-force reference implementations.

These recompute library results by the most direct method available so
tests and the benchmark harness can compare against an independent code
path.  Nothing here shares logic with the fast implementations: run
lengths come from stepping outward pixel by pixel, regions from an
explicit flood fill, pooled features from per-region Python loops.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction

import numpy as np

from .raster import as_interior


def _steps_until_blocked(interior: np.ndarray, dx: int, dy: int) -> np.ndarray:
    """For every interior pixel, the smallest k >= 1 such that the pixel
    k steps away along (dx, dy) is non-interior or off the grid."""
    h, w = interior.shape
    steps = np.zeros((h, w), dtype=np.int64)
    open_px = interior.copy()
    k = 1
    while open_px.any():
        blocked = np.ones((h, w), dtype=bool)
        sy, sx = dy * k, dx * k
        y0, y1 = max(0, -sy), min(h, h - sy)
        x0, x1 = max(0, -sx), min(w, w - sx)
        if y0 < y1 and x0 < x1:
            blocked[y0:y1, x0:x1] = ~interior[y0 + sy:y1 + sy, x0 + sx:x1 + sx]
        hit = open_px & blocked
        steps[hit] = k
        open_px &= ~blocked
        k += 1
    return steps


def run_lengths_bruteforce(mask) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel run lengths by stepping outward in the four directions;
    O(W*H*(W+H)) work versus the library's linear sweeps."""
    interior = as_interior(mask)
    east = _steps_until_blocked(interior, 1, 0)
    west = _steps_until_blocked(interior, -1, 0)
    north = _steps_until_blocked(interior, 0, 1)
    south = _steps_until_blocked(interior, 0, -1)
    lx = np.where(interior, east + west - 1, 0)
    ly = np.where(interior, north + south - 1, 0)
    return lx, ly


def run_lengths_tiny(mask) -> tuple[np.ndarray, np.ndarray]:
    """Plain-Python scan for small fixtures; the most literal reading of
    "walk until you leave the interior"."""
    interior = as_interior(mask)
    h, w = interior.shape
    lx = np.zeros((h, w), dtype=np.int64)
    ly = np.zeros((h, w), dtype=np.int64)
    for j in range(h):
        for i in range(w):
            if not interior[j, i]:
                continue
            n = 1
            x = i + 1
            while x < w and interior[j, x]:
                n += 1
                x += 1
            x = i - 1
            while x >= 0 and interior[j, x]:
                n += 1
                x -= 1
            lx[j, i] = n
            n = 1
            y = j + 1
            while y < h and interior[y, i]:
                n += 1
                y += 1
            y = j - 1
            while y >= 0 and interior[y, i]:
                n += 1
                y -= 1
            ly[j, i] = n
    return lx, ly


def density_raw_sums_bruteforce(mask) -> np.ndarray:
    lx, ly = run_lengths_bruteforce(mask)
    return lx + ly


def flood_fill_regions(key_grid: np.ndarray, interior: np.ndarray) -> np.ndarray:
    """4-connected components of equal key values via an explicit BFS.

    Returns a label grid with -1 outside; labels are assigned in
    scanline order of each component's first pixel."""
    h, w = key_grid.shape
    labels = np.full((h, w), -1, dtype=np.int64)
    next_label = 0
    for j in range(h):
        for i in range(w):
            if not interior[j, i] or labels[j, i] >= 0:
                continue
            key = key_grid[j, i]
            queue = deque([(j, i)])
            labels[j, i] = next_label
            while queue:
                y, x = queue.popleft()
                for ny, nx in ((y - 1, x), (y + 1, x), (y, x - 1), (y, x + 1)):
                    if (0 <= ny < h and 0 <= nx < w and interior[ny, nx]
                            and labels[ny, nx] < 0 and key_grid[ny, nx] == key):
                        labels[ny, nx] = next_label
                        queue.append((ny, nx))
            next_label += 1
    return labels


def region_pool_loop(fmap: np.ndarray, region_id_grid: np.ndarray,
                     n_regions: int, reducer: str = "mean") -> np.ndarray:
    """Per-region pooling with explicit Python loops over pixels."""
    channels = fmap.shape[2] if fmap.ndim == 3 else 1
    values = fmap.reshape(fmap.shape[0], fmap.shape[1], channels)
    buckets = [[[] for _ in range(channels)] for _ in range(n_regions)]
    h, w = region_id_grid.shape
    for j in range(h):
        for i in range(w):
            r = region_id_grid[j, i]
            if r < 0:
                continue
            for c in range(channels):
                buckets[r][c].append(float(values[j, i, c]))
    out = np.zeros((n_regions, channels), dtype=np.float64)
    for r in range(n_regions):
        for c in range(channels):
            vals = buckets[r][c]
            out[r, c] = (sum(vals) / len(vals)) if reducer == "mean" else max(vals)
    return out


def region_mean_exact(fmap: np.ndarray, region_id_grid: np.ndarray,
                      n_regions: int) -> list[list[Fraction]]:
    """Exact rational per-region means (inputs must be integer-valued)."""
    channels = fmap.shape[2] if fmap.ndim == 3 else 1
    values = fmap.reshape(fmap.shape[0], fmap.shape[1], channels)
    sums = [[Fraction(0)] * channels for _ in range(n_regions)]
    counts = [0] * n_regions
    h, w = region_id_grid.shape
    for j in range(h):
        for i in range(w):
            r = region_id_grid[j, i]
            if r < 0:
                continue
            counts[r] += 1
            for c in range(channels):
                sums[r][c] += Fraction(int(values[j, i, c]))
    return [[s / counts[r] for s in sums[r]] for r in range(n_regions)]


def pairwise_distance_loop(features: np.ndarray) -> np.ndarray:
    n = features.shape[0]
    out = np.zeros((n, n), dtype=np.float64)
    for i in range(n):
        for j in range(n):
            diff = features[i] - features[j]
            out[i, j] = float(np.sqrt(np.dot(diff, diff)))
    return out
