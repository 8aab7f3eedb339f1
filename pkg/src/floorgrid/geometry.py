"""Low-level polygon and pixel-grid geometry.

Conventions used across the package:

* points are (x, y) with x growing east and y growing north,
* pixel (i, j) covers the unit square [i, i+1) x [j, j+1) and has its
  center at (i + 0.5, j + 0.5); grids are numpy arrays indexed [j, i]
  (row j = southern rows first),
* a point exactly on a shared boundary belongs to the polygon on whose
  north/east side it lies, i.e. ownership goes to the room south/west of
  the boundary.  With that half-open rule a set of polygons tiling a
  region assigns every pixel center exactly once.
"""

from __future__ import annotations

import numpy as np
from shapely.geometry import Polygon as _ShPolygon


def polygon_area(vertices) -> float:
    """Signed shoelace area; positive for counter-clockwise rings."""
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def bounding_box(vertices):
    """(xmin, ymin, xmax, ymax) of a vertex list."""
    v = np.asarray(vertices, dtype=float)
    return float(v[:, 0].min()), float(v[:, 1].min()), float(v[:, 0].max()), float(v[:, 1].max())


def merge_collinear(vertices):
    """Drop repeated points and vertices lying on the segment joining
    their neighbours.  Works on a closed ring given without the closing
    duplicate; returns a plain list of (x, y) tuples."""
    pts = [tuple(map(float, p)) for p in vertices]
    # remove consecutive duplicates (wrapping)
    dedup = []
    for p in pts:
        if not dedup or p != dedup[-1]:
            dedup.append(p)
    if len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    if len(dedup) < 3:
        return dedup
    out = []
    n = len(dedup)
    for i in range(n):
        a = dedup[i - 1]
        b = dedup[i]
        c = dedup[(i + 1) % n]
        cross = (b[0] - a[0]) * (c[1] - b[1]) - (b[1] - a[1]) * (c[0] - b[0])
        if cross != 0.0:
            out.append(b)
    return out


def ensure_ccw(vertices):
    verts = list(vertices)
    if polygon_area(verts) < 0:
        verts = verts[::-1]
    return verts


def is_simple_polygon(vertices) -> bool:
    """True for a non-degenerate simple polygon (no self intersection)."""
    if len(vertices) < 3:
        return False
    try:
        poly = _ShPolygon(vertices)
    except Exception:
        return False
    return bool(poly.is_valid) and poly.area > 0


def segment_on_boundary(seg_a, seg_b, vertices, tol: float = 1e-9) -> bool:
    """True when segment a-b is contained in one edge of the polygon."""
    ax, ay = seg_a
    bx, by = seg_b
    n = len(vertices)
    for i in range(n):
        px, py = vertices[i]
        qx, qy = vertices[(i + 1) % n]
        ex, ey = qx - px, qy - py
        el2 = ex * ex + ey * ey
        if el2 <= tol:
            continue
        # both endpoints collinear with the edge and within its span
        ca = (ax - px) * ey - (ay - py) * ex
        cb = (bx - px) * ey - (by - py) * ex
        if abs(ca) > tol * max(1.0, el2) or abs(cb) > tol * max(1.0, el2):
            continue
        ta = ((ax - px) * ex + (ay - py) * ey) / el2
        tb = ((bx - px) * ex + (by - py) * ey) / el2
        if -tol <= ta <= 1 + tol and -tol <= tb <= 1 + tol:
            return True
    return False


def fill_polygon(vertices, width: int, height: int, scale: float = 1.0,
                 offset=(0.0, 0.0)) -> np.ndarray:
    """Rasterize a simple polygon onto a (height, width) boolean grid.

    A pixel is set when its center lies inside the polygon after the
    affine map p -> p * scale + offset.  Boundary ownership follows the
    module's half-open rule: centers exactly on a vertical edge belong
    to the polygon west of it, centers on a horizontal edge to the
    polygon south of it.
    """
    v = np.asarray(vertices, dtype=float) * scale + np.asarray(offset, dtype=float)
    n = len(v)
    if n < 3:
        return np.zeros((height, width), dtype=bool)
    # parity flips: one entry per (row, first column whose center is east
    # of the edge crossing); cumulative sum mod 2 along x gives insideness.
    flips = np.zeros((height, width + 1), dtype=np.int64)
    for i in range(n):
        x1, y1 = v[i]
        x2, y2 = v[(i + 1) % n]
        if y1 == y2:
            continue
        ylo, yhi = (y1, y2) if y1 < y2 else (y2, y1)
        # rows with ylo < center_y <= yhi
        j0 = int(np.floor(ylo - 0.5)) + 1
        j1 = int(np.floor(yhi - 0.5))
        j0 = max(j0, 0)
        j1 = min(j1, height - 1)
        if j1 < j0:
            continue
        rows = np.arange(j0, j1 + 1)
        cy = rows + 0.5
        xint = x1 + (cy - y1) * (x2 - x1) / (y2 - y1)
        # first column whose center x exceeds the crossing
        cols = np.floor(xint - 0.5).astype(np.int64) + 1
        np.clip(cols, 0, width, out=cols)
        np.add.at(flips, (rows, cols), 1)
    inside = np.cumsum(flips[:, :width], axis=1) % 2
    return inside.astype(bool)


def point_in_polygon(point, vertices) -> bool:
    """Scalar version of the fill rule above (same ownership semantics)."""
    px, py = float(point[0]), float(point[1])
    crossings = 0
    n = len(vertices)
    for i in range(n):
        x1, y1 = vertices[i]
        x2, y2 = vertices[(i + 1) % n]
        if y1 == y2:
            continue
        ylo, yhi = (y1, y2) if y1 < y2 else (y2, y1)
        if not (ylo < py <= yhi):
            continue
        xint = x1 + (py - y1) * (x2 - x1) / (y2 - y1)
        if xint < px:
            crossings += 1
    return crossings % 2 == 1


def _directed_boundary_edges(mask: np.ndarray):
    """Directed unit edges of a pixel set, region kept on the left.

    Returns a dict mapping start lattice point -> list of end points.
    Outer loops come out counter-clockwise, holes clockwise.
    """
    m = np.zeros((mask.shape[0] + 2, mask.shape[1] + 2), dtype=bool)
    m[1:-1, 1:-1] = mask
    edges: dict[tuple[int, int], list[tuple[int, int]]] = {}

    def add(sx, sy, ex, ey):
        edges.setdefault((sx, sy), []).append((ex, ey))

    core = m[1:-1, 1:-1]
    south = core & ~m[:-2, 1:-1]
    north = core & ~m[2:, 1:-1]
    west = core & ~m[1:-1, :-2]
    east = core & ~m[1:-1, 2:]
    for (ys, xs), (dxs, dys, dxe, dye) in (
        (np.nonzero(south), (0, 0, 1, 0)),   # along the south side, eastward
        (np.nonzero(east), (1, 0, 1, 1)),    # east side, northward
        (np.nonzero(north), (1, 1, 0, 1)),   # north side, westward
        (np.nonzero(west), (0, 1, 0, 0)),    # west side, southward
    ):
        for y, x in zip(ys.tolist(), xs.tolist()):
            add(x + dxs, y + dys, x + dxe, y + dye)
    return edges


_TURN_ORDER = {
    (1, 0): ((0, 1), (1, 0), (0, -1)),
    (0, 1): ((-1, 0), (0, 1), (1, 0)),
    (-1, 0): ((0, -1), (-1, 0), (0, 1)),
    (0, -1): ((1, 0), (0, -1), (-1, 0)),
}


def trace_pixel_loops(mask: np.ndarray):
    """Trace the boundary loops of a boolean pixel grid.

    Returns a list of (vertices, signed_area) with collinear points
    merged.  Counter-clockwise loops (positive area) are outer contours,
    clockwise loops are holes.  At a lattice point where the boundary
    touches itself diagonally the walk takes the left-most turn, so each
    emitted loop is simple; callers detect the pinch by seeing more than
    one outer loop for a 4-connected set.
    """
    edges = _directed_boundary_edges(mask)
    loops = []
    while edges:
        # start on a vertex with a single outgoing edge; starting at a
        # pinch vertex (two outgoing) could pair the loops arbitrarily
        singles = [p for p, outs in edges.items() if len(outs) == 1]
        start = min(singles) if singles else min(edges)
        cur = start
        prev_dir = None
        loop = [start]
        while True:
            outs = edges[cur]
            if len(outs) == 1 or prev_dir is None:
                nxt = outs[0]
            else:
                # prefer the sharpest left turn relative to the incoming
                # direction; keeps diagonally pinched figures as two
                # simple loops instead of a figure eight
                nxt = None
                for d in _TURN_ORDER[prev_dir]:
                    cand = (cur[0] + d[0], cur[1] + d[1])
                    if cand in outs:
                        nxt = cand
                        break
                if nxt is None:
                    nxt = outs[0]
            outs.remove(nxt)
            if not outs:
                del edges[cur]
            prev_dir = (nxt[0] - cur[0], nxt[1] - cur[1])
            cur = nxt
            if cur == start:
                break
            loop.append(cur)
        verts = merge_collinear(loop)
        loops.append((verts, polygon_area(verts)))
    return loops


def trace_region_polygon(mask: np.ndarray):
    """Outer contour of a hole-free 4-connected pixel set as a CCW
    rectilinear polygon.  Raises ValueError when the set has holes or a
    diagonal pinch (more than one loop)."""
    loops = trace_pixel_loops(mask)
    outers = [l for l in loops if l[1] > 0]
    holes = [l for l in loops if l[1] < 0]
    if holes:
        raise ValueError("pixel set has holes")
    if len(outers) != 1:
        raise ValueError("pixel set is pinched or disconnected")
    return outers[0][0]
