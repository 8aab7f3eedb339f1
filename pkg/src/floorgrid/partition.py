"""Density-region clustering and the boundary-adaptive unit-region
partition.

Interior pixels sharing one density value are grouped into 4-connected
density regions; each density region is then sliced into an MxN grid of
unit regions, with the grid counts reduced per axis when cells would
fall below the minimum physical size.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .density import DensityMap
from .errors import EmptyInterior
from .plan import EDGE_SLOPING, Floorplan
from .raster import RasterMask


@dataclass(frozen=True)
class SplitStrategy:
    """Grid counts (M along x, N along y) and the minimum cell size h in
    meters; cells are only cut while they stay at least h wide/tall."""
    grid_m: int
    grid_n: int
    min_size_m: float

    def __post_init__(self):
        if self.grid_m < 1 or self.grid_n < 1:
            raise ValueError("grid counts must be >= 1")
        if self.min_size_m <= 0:
            raise ValueError("min cell size must be positive")

    @property
    def label(self) -> str:
        return f"{self.grid_m}x{self.grid_n}"


@dataclass(frozen=True)
class DensityRegion:
    """Maximal 4-connected set of interior pixels with one density
    value.  `pixels` is an (K, 2) array of (y, x) grid indices; `bbox`
    is (x0, y0, x1, y1) with exclusive upper bounds."""
    id: int
    pixels: np.ndarray
    density_key: int
    bbox: tuple[int, int, int, int]
    merged: bool = False

    @property
    def size(self) -> int:
        return int(self.pixels.shape[0])


@dataclass(frozen=True)
class UnitRegion:
    id: int
    parent: int | None              # density-region id, None for uniform grids
    grid_cell: tuple[int, int]      # (i along x, j along y) within the parent
    pixels: np.ndarray              # (K, 2) of (y, x)
    bbox: tuple[int, int, int, int]
    cell_rect: tuple[int, int, int, int]  # absolute cell rectangle in px

    @property
    def size(self) -> int:
        return int(self.pixels.shape[0])


@dataclass(frozen=True)
class UnitRegionPartition:
    region_id_grid: np.ndarray      # int32, -1 outside the interior
    regions: tuple[UnitRegion, ...]
    strategy: SplitStrategy | None
    scale: float                    # meters per pixel

    @property
    def n_regions(self) -> int:
        return len(self.regions)

    @property
    def width(self) -> int:
        return self.region_id_grid.shape[1]

    @property
    def height(self) -> int:
        return self.region_id_grid.shape[0]


@dataclass(frozen=True)
class PartitionStats:
    region_count: int
    mean_area_m2: float
    min_area_m2: float
    max_area_m2: float


def _row_runs(keys: np.ndarray, interior: np.ndarray):
    """Per-row maximal runs of constant key on interior pixels.

    Returns (row, start, end, key) arrays over all rows, in scanline
    order (southern rows first)."""
    h, w = keys.shape
    rows, starts, ends, vals = [], [], [], []
    for j in range(h):
        mask = interior[j]
        if not mask.any():
            continue
        kr = np.where(mask, keys[j], -1)
        change = np.flatnonzero(kr[1:] != kr[:-1]) + 1
        bounds = np.concatenate(([0], change, [w]))
        for s, e in zip(bounds[:-1], bounds[1:]):
            if mask[s]:
                rows.append(j)
                starts.append(int(s))
                ends.append(int(e))
                vals.append(int(kr[s]))
    return rows, starts, ends, vals


class _DSU:
    """Union-find with path compression; plain lists keep it quick for
    the few thousand elements we see per floorplan."""

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a: int, b: int):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def _label_equal_value_components(keys: np.ndarray, interior: np.ndarray) -> np.ndarray:
    """4-connected components of equal key values, labeled in scanline
    (first-pixel) order; -1 outside the interior."""
    rows, starts, ends, vals = _row_runs(keys, interior)
    n = len(rows)
    dsu = _DSU(n)
    # runs on consecutive rows overlap in columns and share a key -> same region
    prev_row_runs: list[int] = []
    prev_row = -2
    for idx in range(n):
        j = rows[idx]
        if j == prev_row + 1:
            for p in prev_row_runs:
                if starts[idx] < ends[p] and starts[p] < ends[idx] and vals[p] == vals[idx]:
                    dsu.union(p, idx)
        if j != prev_row:
            if j == prev_row + 1:
                cur = [idx]
            else:
                cur = [idx]
            prev_candidates = cur
        # collect runs of the current row for the next iteration
        if idx + 1 < n and rows[idx + 1] == j:
            prev_candidates.append(idx + 1)
        else:
            prev_row_runs = prev_candidates
            prev_row = j
    labels = np.full(keys.shape, -1, dtype=np.int32)
    run_root = [dsu.find(i) for i in range(n)]
    remap: dict[int, int] = {}
    for idx in range(n):
        root = run_root[idx]
        if root not in remap:
            remap[root] = len(remap)
        labels[rows[idx], starts[idx]:ends[idx]] = remap[root]
    return labels


def _regions_from_labels(labels: np.ndarray, keys: np.ndarray) -> list[DensityRegion]:
    ys, xs = np.nonzero(labels >= 0)
    ids = labels[ys, xs]
    order = np.argsort(ids, kind="stable")
    ys, xs, ids = ys[order], xs[order], ids[order]
    counts = np.bincount(ids)
    regions = []
    pos = 0
    for rid, cnt in enumerate(counts):
        ry = ys[pos:pos + cnt]
        rx = xs[pos:pos + cnt]
        pos += cnt
        bbox = (int(rx.min()), int(ry.min()), int(rx.max()) + 1, int(ry.max()) + 1)
        regions.append(DensityRegion(
            id=rid,
            pixels=np.column_stack([ry, rx]).astype(np.int32),
            density_key=int(keys[ry[0], rx[0]]),
            bbox=bbox,
        ))
    return regions


def cluster_density_regions(d: DensityMap) -> list[DensityRegion]:
    """Group 4-connected interior pixels with equal raw density sums.

    Region ids follow the scanline order of each region's first pixel
    (scan starts at the south-west corner)."""
    interior = d.interior
    if not interior.any():
        raise EmptyInterior("density map has no interior")
    labels = _label_equal_value_components(d.raw_sums, interior)
    return _regions_from_labels(labels, d.raw_sums)


def region_label_grid(regions, shape) -> np.ndarray:
    grid = np.full(shape, -1, dtype=np.int32)
    for r in regions:
        grid[r.pixels[:, 0], r.pixels[:, 1]] = r.id
    return grid


def _seg_distance(py, px, a, b):
    """Distance from pixel centers to segment a-b (vectorized)."""
    ax, ay = a
    bx, by = b
    dx, dy = bx - ax, by - ay
    l2 = dx * dx + dy * dy
    if l2 == 0:
        return np.hypot(px - ax, py - ay)
    t = ((px - ax) * dx + (py - ay) * dy) / l2
    np.clip(t, 0.0, 1.0, out=t)
    return np.hypot(px - (ax + t * dx), py - (ay + t * dy))


def merge_sloping(regions: list[DensityRegion], plan: Floorplan,
                  mask: RasterMask | None = None) -> list[DensityRegion]:
    """Union density regions that touch the same sloping boundary edge.

    A region touches an edge when one of its pixel centers is within
    0.8 px of the edge segment (in raster coordinates).  Plans without
    sloping edges come back unchanged."""
    sloping = [e for e, f in zip(plan.edges(), plan.edge_flags) if f == EDGE_SLOPING]
    if not sloping:
        return list(regions)
    scale = mask.scale if mask is not None else 1.0
    ox, oy = mask.offset if mask is not None else (0.0, 0.0)
    dsu = _DSU(len(regions))
    for (pa, pb) in sloping:
        a = (pa[0] * scale + ox, pa[1] * scale + oy)
        b = (pb[0] * scale + ox, pb[1] * scale + oy)
        touching = []
        for r in regions:
            cy = r.pixels[:, 0] + 0.5
            cx = r.pixels[:, 1] + 0.5
            if np.any(_seg_distance(cy, cx, a, b) <= 0.8):
                touching.append(r.id)
        for other in touching[1:]:
            dsu.union(touching[0], other)
    groups: dict[int, list[DensityRegion]] = {}
    for r in regions:
        groups.setdefault(dsu.find(r.id), []).append(r)
    if len(groups) == len(regions):
        return list(regions)
    merged = []
    for members in groups.values():
        if len(members) == 1:
            merged.append(members[0])
            continue
        pixels = np.concatenate([m.pixels for m in members])
        order = np.lexsort((pixels[:, 1], pixels[:, 0]))
        pixels = pixels[order]
        bbox = (int(pixels[:, 1].min()), int(pixels[:, 0].min()),
                int(pixels[:, 1].max()) + 1, int(pixels[:, 0].max()) + 1)
        merged.append(DensityRegion(
            id=-1, pixels=pixels, density_key=members[0].density_key,
            bbox=bbox, merged=True))
    # re-id densely by scanline order of the first pixel
    merged.sort(key=lambda r: (int(r.pixels[0, 0]), int(r.pixels[0, 1])))
    return [replace(r, id=i) for i, r in enumerate(merged)]


def _cuts(start: int, extent: int, parts: int) -> np.ndarray:
    """Integer cut positions splitting [start, start+extent) into
    `parts` cells, any remainder going to the leading (south/west)
    cells."""
    base, rem = divmod(extent, parts)
    widths = np.full(parts, base, dtype=np.int64)
    widths[:rem] += 1
    return start + np.concatenate(([0], np.cumsum(widths)))


def _effective_grid(extent_px: int, scale: float, strategy_cells: int,
                    min_size_m: float) -> int:
    """Reduce the per-axis cell count until cells reach the minimum
    physical size; never below one cell."""
    fit = int(np.floor(extent_px * scale / min_size_m + 1e-9))
    return max(1, min(strategy_cells, fit))


def _slice_region(pixels: np.ndarray, bbox, m_eff: int, n_eff: int):
    """Split one region's pixels by an m_eff x n_eff grid of its bbox.

    Yields (grid_cell, pixel_array, cell_rect) for non-empty cells in
    (j, i) scan order."""
    x0, y0, x1, y1 = bbox
    xcuts = _cuts(x0, x1 - x0, m_eff)
    ycuts = _cuts(y0, y1 - y0, n_eff)
    ci = np.searchsorted(xcuts, pixels[:, 1], side="right") - 1
    cj = np.searchsorted(ycuts, pixels[:, 0], side="right") - 1
    cell = cj * m_eff + ci
    order = np.argsort(cell, kind="stable")
    sorted_pixels = pixels[order]
    sorted_cell = cell[order]
    boundaries = np.flatnonzero(np.diff(sorted_cell)) + 1
    chunks = np.split(sorted_pixels, boundaries)
    cells = np.concatenate(([sorted_cell[0]], sorted_cell[boundaries])) if len(sorted_cell) else []
    for cell_id, chunk in zip(cells, chunks):
        j, i = divmod(int(cell_id), m_eff)
        rect = (int(xcuts[i]), int(ycuts[j]), int(xcuts[i + 1]), int(ycuts[j + 1]))
        yield (i, j), chunk, rect


def split_unit_regions(regions: list[DensityRegion], strategy: SplitStrategy,
                       scale: float) -> UnitRegionPartition:
    """Slice each density region into unit regions under the strategy.

    The effective grid per region is M' x N' with
    M' = clamp(min(M, floor(bbox_width_m / h)), 1, M) and N' likewise on
    the height, so thin regions fall back to fewer, larger cells.  Empty
    cell/region intersections are dropped and ids renumbered densely."""
    if not regions:
        raise EmptyInterior("no density regions to split")
    shape = None
    units = []
    for r in regions:
        x0, y0, x1, y1 = r.bbox
        m_eff = _effective_grid(x1 - x0, scale, strategy.grid_m, strategy.min_size_m)
        n_eff = _effective_grid(y1 - y0, scale, strategy.grid_n, strategy.min_size_m)
        for grid_cell, chunk, rect in _slice_region(r.pixels, r.bbox, m_eff, n_eff):
            bbox = (int(chunk[:, 1].min()), int(chunk[:, 0].min()),
                    int(chunk[:, 1].max()) + 1, int(chunk[:, 0].max()) + 1)
            units.append(UnitRegion(id=len(units), parent=r.id,
                                    grid_cell=grid_cell, pixels=chunk,
                                    bbox=bbox, cell_rect=rect))
    height = max(u.bbox[3] for u in units)
    width = max(u.bbox[2] for u in units)
    shape = (height, width)
    grid = np.full(shape, -1, dtype=np.int32)
    for u in units:
        grid[u.pixels[:, 0], u.pixels[:, 1]] = u.id
    return UnitRegionPartition(region_id_grid=grid, regions=tuple(units),
                               strategy=strategy, scale=scale)


def refine(p: UnitRegionPartition, factor: int) -> UnitRegionPartition:
    """Split every unit region's cell factor x factor within its own
    cell rectangle, bypassing the minimum-size fallback.  The result is
    a strict refinement: every new region's pixels lie inside exactly
    one region of `p`."""
    if factor < 1:
        raise ValueError("factor must be >= 1")
    if factor == 1:
        return p
    units = []
    for u in p.regions:
        for (si, sj), chunk, rect in _slice_region(u.pixels, u.cell_rect, factor, factor):
            bbox = (int(chunk[:, 1].min()), int(chunk[:, 0].min()),
                    int(chunk[:, 1].max()) + 1, int(chunk[:, 0].max()) + 1)
            gi, gj = u.grid_cell
            units.append(UnitRegion(id=len(units), parent=u.parent,
                                    grid_cell=(gi * factor + si, gj * factor + sj),
                                    pixels=chunk, bbox=bbox, cell_rect=rect))
    grid = np.full(p.region_id_grid.shape, -1, dtype=np.int32)
    for u in units:
        grid[u.pixels[:, 0], u.pixels[:, 1]] = u.id
    return UnitRegionPartition(region_id_grid=grid, regions=tuple(units),
                               strategy=p.strategy, scale=p.scale)


def uniform_partition(mask, target_count: int,
                      meters_per_pixel: float | None = None) -> UnitRegionPartition:
    """Shape-blind k x k grid over the interior bounding box, k chosen
    so the number of interior-intersecting cells best approximates
    `target_count` (ties to the smaller k).  Cells are clipped to the
    interior and may straddle boundary notches."""
    if target_count < 1:
        raise ValueError("target_count must be >= 1")
    from .raster import as_interior
    interior = as_interior(mask)
    if not interior.any():
        raise EmptyInterior("mask has no interior pixels")
    if meters_per_pixel is None:
        meters_per_pixel = mask.meters_per_pixel if isinstance(mask, RasterMask) else 1.0
    ys, xs = np.nonzero(interior)
    x0, x1 = int(xs.min()), int(xs.max()) + 1
    y0, y1 = int(ys.min()), int(ys.max()) + 1
    kmax = min(max(x1 - x0, y1 - y0), int(np.ceil(np.sqrt(target_count))) + 8)
    best_k, best_err, best_assign = 1, None, None
    for k in range(1, max(kmax, 1) + 1):
        xcuts = _cuts(x0, x1 - x0, min(k, x1 - x0))
        ycuts = _cuts(y0, y1 - y0, min(k, y1 - y0))
        ci = np.searchsorted(xcuts, xs, side="right") - 1
        cj = np.searchsorted(ycuts, ys, side="right") - 1
        cell = cj * (len(xcuts) - 1) + ci
        count = len(np.unique(cell))
        err = abs(count - target_count)
        if best_err is None or err < best_err:
            best_k, best_err, best_assign = k, err, (xcuts, ycuts, ci, cj, cell)
        if count >= target_count and err == 0:
            break
    xcuts, ycuts, ci, cj, cell = best_assign
    m_eff = len(xcuts) - 1
    order = np.argsort(cell, kind="stable")
    spx = np.column_stack([ys, xs]).astype(np.int32)[order]
    scell = cell[order]
    boundaries = np.flatnonzero(np.diff(scell)) + 1
    chunks = np.split(spx, boundaries)
    cell_ids = np.concatenate(([scell[0]], scell[boundaries]))
    units = []
    for cell_id, chunk in zip(cell_ids, chunks):
        j, i = divmod(int(cell_id), m_eff)
        rect = (int(xcuts[i]), int(ycuts[j]), int(xcuts[i + 1]), int(ycuts[j + 1]))
        bbox = (int(chunk[:, 1].min()), int(chunk[:, 0].min()),
                int(chunk[:, 1].max()) + 1, int(chunk[:, 0].max()) + 1)
        units.append(UnitRegion(id=len(units), parent=None, grid_cell=(i, j),
                                pixels=chunk, bbox=bbox, cell_rect=rect))
    grid = np.full(interior.shape, -1, dtype=np.int32)
    for u in units:
        grid[u.pixels[:, 0], u.pixels[:, 1]] = u.id
    return UnitRegionPartition(region_id_grid=grid, regions=tuple(units),
                               strategy=None, scale=meters_per_pixel)


def partition_stats(p: UnitRegionPartition) -> PartitionStats:
    areas = np.array([u.size for u in p.regions], dtype=np.float64) * p.scale ** 2
    return PartitionStats(region_count=p.n_regions,
                          mean_area_m2=float(areas.mean()),
                          min_area_m2=float(areas.min()),
                          max_area_m2=float(areas.max()))


def build_partition(plan: Floorplan, mask: RasterMask, strategy: SplitStrategy,
                    d: DensityMap | None = None) -> UnitRegionPartition:
    """Full chain: density map -> density regions -> sloping-wall merge
    -> unit-region split."""
    from .density import density_map
    if d is None:
        d = density_map(mask)
    regions = cluster_density_regions(d)
    regions = merge_sloping(regions, plan, mask)
    return split_unit_regions(regions, strategy, mask.meters_per_pixel)
