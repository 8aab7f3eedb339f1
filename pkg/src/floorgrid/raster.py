"""Rasterization of vector floorplans onto labeled pixel grids."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import DegeneratePolygon
from .geometry import fill_polygon
from .plan import Floorplan

CODE_EXTERIOR = 0
CODE_INTERIOR = 1
CODE_WALL = 2
CODE_FRONT_DOOR = 3
CODE_DOOR = 4
CODE_WINDOW = 5
OPENING_CODES = {"front_door": CODE_FRONT_DOOR, "door": CODE_DOOR, "window": CODE_WINDOW}


@dataclass(frozen=True)
class RasterMask:
    """Grid of cell codes: 0 exterior, 1 interior, 2 exterior wall,
    3 front door, 4 door, 5 window.

    Openings and walls only ever occupy non-interior cells, so
    ``codes == 1`` is exactly the set of pixel centers inside the
    polygon.  `scale`/`offset` record the plan-to-raster map
    (raster = plan * scale + offset) and `meters_per_pixel` is the
    physical size of one raster pixel."""
    codes: np.ndarray
    scale: float = 1.0
    offset: tuple[float, float] = (0.0, 0.0)
    meters_per_pixel: float = 1.0

    @property
    def width(self) -> int:
        return self.codes.shape[1]

    @property
    def height(self) -> int:
        return self.codes.shape[0]

    @property
    def interior(self) -> np.ndarray:
        return self.codes == CODE_INTERIOR

    @property
    def interior_count(self) -> int:
        return int(self.interior.sum())


def _wall_ring(interior: np.ndarray) -> np.ndarray:
    """Non-interior pixels 8-adjacent to the interior."""
    grown = ndimage.binary_dilation(interior, structure=np.ones((3, 3), bool))
    return grown & ~interior


def _stamp_segment(codes, interior, ring, a, b, code):
    """Mark the wall pixels nearest to boundary segment a-b.

    Pixels are chosen on the exterior side of the segment; interior
    cells are never overwritten.  Axis-aligned segments (the common
    case) stamp exactly the rows/columns whose centers project onto the
    segment."""
    h, w = codes.shape
    (ax, ay), (bx, by) = a, b
    if ax > bx or (ax == bx and ay > by):
        ax, ay, bx, by = bx, by, ax, ay

    def try_stamp(j, i):
        if 0 <= j < h and 0 <= i < w and ring[j, i]:
            codes[j, i] = code
            return True
        return False

    if ay == by:  # horizontal segment
        i0 = int(np.ceil(ax - 0.5))
        i1 = int(np.floor(bx - 0.5))
        j_hi = int(np.floor(ay))
        # integer y: the segment separates rows j_hi-1 / j_hi; otherwise
        # it runs through row j_hi and both flanks collapse to it
        j_lo = j_hi - 1 if ay == np.floor(ay) else j_hi
        for i in range(max(i0, 0), min(i1, w - 1) + 1):
            if not try_stamp(j_lo, i):
                try_stamp(j_hi, i)
    elif ax == bx:  # vertical segment
        j0 = int(np.ceil(ay - 0.5))
        j1 = int(np.floor(by - 0.5))
        i_hi = int(np.floor(ax))
        i_lo = i_hi - 1 if ax == np.floor(ax) else i_hi
        for j in range(max(j0, 0), min(j1, h - 1) + 1):
            if not try_stamp(j, i_lo):
                try_stamp(j, i_hi)
    else:  # sloping segment: walk samples and mark the nearest ring pixel
        length = float(np.hypot(bx - ax, by - ay))
        n = max(2, int(np.ceil(length * 4)))
        for t in np.linspace(0.0, 1.0, n):
            px, py = ax + t * (bx - ax), ay + t * (by - ay)
            best = None
            ci, cj = int(np.floor(px)), int(np.floor(py))
            for j in range(cj - 1, cj + 2):
                for i in range(ci - 1, ci + 2):
                    if 0 <= j < h and 0 <= i < w and ring[j, i]:
                        d = max(abs(i + 0.5 - px), abs(j + 0.5 - py))
                        if best is None or d < best[0]:
                            best = (d, j, i)
            if best is not None:
                codes[best[1], best[2]] = code


def rasterize(plan: Floorplan, resolution: int, margin: int = 0,
              walls: bool = True) -> RasterMask:
    """Scale-and-center the plan onto a resolution x resolution grid.

    A pixel is interior iff its center falls inside the polygon.  With
    `walls`, the ring of non-interior pixels touching the interior is
    coded as exterior wall, and opening segments are stamped onto their
    nearest ring pixels (openings need `margin >= 1` to be visible).
    Raises DegeneratePolygon when no pixel center lands inside."""
    if resolution < 1 or margin < 0 or resolution - 2 * margin < 1:
        raise ValueError("resolution/margin leave no drawable area")
    xmin, ymin, xmax, ymax = plan.bbox
    extent = max(xmax - xmin, ymax - ymin)
    if extent <= 0:
        raise DegeneratePolygon("polygon has zero extent")
    scale = (resolution - 2 * margin) / extent
    ox = (resolution - scale * (xmin + xmax)) / 2
    oy = (resolution - scale * (ymin + ymax)) / 2
    interior = fill_polygon(plan.vertices, resolution, resolution, scale, (ox, oy))
    if not interior.any():
        raise DegeneratePolygon("no pixel center falls inside the polygon")
    codes = np.where(interior, np.uint8(CODE_INTERIOR), np.uint8(CODE_EXTERIOR))
    if walls:
        ring = _wall_ring(interior)
        codes[ring] = CODE_WALL
        for o in plan.openings:
            a = (o.a[0] * scale + ox, o.a[1] * scale + oy)
            b = (o.b[0] * scale + ox, o.b[1] * scale + oy)
            _stamp_segment(codes, interior, ring, a, b, OPENING_CODES[o.kind])
    return RasterMask(codes=codes, scale=scale, offset=(ox, oy),
                      meters_per_pixel=plan.meters_per_pixel / scale)


def as_interior(mask) -> np.ndarray:
    """Boolean interior grid from a RasterMask or a boolean array."""
    if isinstance(mask, RasterMask):
        return mask.interior
    arr = np.asarray(mask)
    if arr.dtype == bool:
        return arr
    return arr == CODE_INTERIOR
