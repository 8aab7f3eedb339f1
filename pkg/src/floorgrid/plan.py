"""Vector floorplan model: polygon, openings, rooms, squeeze edits."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from shapely.geometry import Polygon as _ShPolygon, box as _sh_box
from shapely.geometry.polygon import orient as _sh_orient

from .errors import InvalidSqueeze
from .geometry import (
    bounding_box,
    ensure_ccw,
    fill_polygon,
    is_simple_polygon,
    merge_collinear,
    polygon_area,
    segment_on_boundary,
)

OPENING_KINDS = ("door", "window", "front_door")
EDGE_AXIS = "axis_aligned"
EDGE_SLOPING = "sloping"
SIDES = ("N", "S", "E", "W")


@dataclass(frozen=True)
class Opening:
    """Door/window segment on the floorplan boundary.

    `label` is the room label the opening connects to (front doors
    connect to the outside and conventionally carry the entry room's
    label)."""
    a: tuple[float, float]
    b: tuple[float, float]
    kind: str
    label: int = 0


@dataclass(frozen=True)
class Room:
    polygon: tuple[tuple[float, float], ...]
    label: int


@dataclass(frozen=True)
class Floorplan:
    """Simple polygon in pixel units, CCW, plus openings and optional
    ground-truth rooms.  Values are immutable; edits return new plans."""
    vertices: tuple[tuple[float, float], ...]
    meters_per_pixel: float
    openings: tuple[Opening, ...] = ()
    gt_rooms: tuple[Room, ...] | None = None
    edge_flags: tuple[str, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "vertices",
                           tuple((float(x), float(y)) for x, y in self.vertices))
        if not self.edge_flags:
            object.__setattr__(self, "edge_flags",
                               (EDGE_AXIS,) * len(self.vertices))

    @property
    def bbox(self):
        return bounding_box(self.vertices)

    @property
    def area(self) -> float:
        return abs(polygon_area(self.vertices))

    def edges(self):
        n = len(self.vertices)
        return [(self.vertices[i], self.vertices[(i + 1) % n]) for i in range(n)]


@dataclass(frozen=True)
class SqueezeOp:
    """Axis-aligned notch pushed into one side of the plan.

    `start`/`end` are absolute coordinates along the side's axis
    (x for N/S, y for E/W); `depth` is measured inward from the current
    bounding box on the chosen side."""
    side: str
    start: float
    end: float
    depth: float

    def rect(self, bbox):
        """Notch rectangle (xmin, ymin, xmax, ymax) for the given plan bbox."""
        xmin, ymin, xmax, ymax = bbox
        if self.side == "N":
            return (self.start, ymax - self.depth, self.end, ymax)
        if self.side == "S":
            return (self.start, ymin, self.end, ymin + self.depth)
        if self.side == "E":
            return (xmax - self.depth, self.start, xmax, self.end)
        if self.side == "W":
            return (xmin, self.start, xmin + self.depth, self.end)
        raise ValueError(f"unknown side {self.side!r}")


def _edge_flag_map(plan: Floorplan):
    flags = {}
    for (a, b), f in zip(plan.edges(), plan.edge_flags):
        flags[(a, b)] = f
    return flags


def _inherit_flag(a, b, old_plan: Floorplan) -> str:
    """New edges keep the flag of the old edge they are a piece of."""
    for (p, q), f in zip(old_plan.edges(), old_plan.edge_flags):
        if f == EDGE_AXIS:
            continue
        ex, ey = q[0] - p[0], q[1] - p[1]
        el2 = ex * ex + ey * ey
        if el2 == 0:
            continue
        ca = (a[0] - p[0]) * ey - (a[1] - p[1]) * ex
        cb = (b[0] - p[0]) * ey - (b[1] - p[1]) * ex
        if abs(ca) > 1e-9 * el2 or abs(cb) > 1e-9 * el2:
            continue
        ta = ((a[0] - p[0]) * ex + (a[1] - p[1]) * ey) / el2
        tb = ((b[0] - p[0]) * ex + (b[1] - p[1]) * ey) / el2
        if -1e-9 <= ta <= 1 + 1e-9 and -1e-9 <= tb <= 1 + 1e-9:
            return f
    return EDGE_AXIS


def squeeze(plan: Floorplan, op: SqueezeOp) -> Floorplan:
    """Remove the notch rectangle of `op` from the plan polygon.

    The notch must lie fully inside the polygon and hang off the chosen
    side of the current bounding box, so the removed area is exactly the
    rectangle's.  Raises InvalidSqueeze when the result would be empty,
    disconnected, or the rectangle misses the polygon."""
    if op.side not in SIDES:
        raise InvalidSqueeze(f"unknown side {op.side!r}")
    if not (op.end > op.start) or not (op.depth > 0):
        raise InvalidSqueeze("need start < end and depth > 0")
    rect = op.rect(plan.bbox)
    notch = _sh_box(*rect)
    poly = _ShPolygon(plan.vertices)
    if not poly.is_valid:
        raise InvalidSqueeze("input polygon is not simple")
    if abs(poly.intersection(notch).area - notch.area) > 1e-9:
        raise InvalidSqueeze("notch falls (partly) outside the polygon")
    out = poly.difference(notch)
    if out.is_empty or out.geom_type != "Polygon" or out.area <= 0:
        raise InvalidSqueeze("notch would empty or disconnect the interior")
    if list(out.interiors):
        raise InvalidSqueeze("notch would create a hole")
    out = _sh_orient(out, sign=1.0)
    verts = merge_collinear(list(out.exterior.coords)[:-1])
    verts = ensure_ccw(verts)
    if not is_simple_polygon(verts):
        raise InvalidSqueeze("result degenerates to a non-simple polygon")
    n = len(verts)
    has_sloping = any(f == EDGE_SLOPING for f in plan.edge_flags)
    if has_sloping:
        flags = tuple(_inherit_flag(verts[i], verts[(i + 1) % n], plan)
                      for i in range(n))
    else:
        flags = (EDGE_AXIS,) * n
    openings = tuple(o for o in plan.openings
                     if segment_on_boundary(o.a, o.b, verts))
    return replace(plan, vertices=tuple(verts), edge_flags=flags,
                   openings=openings, gt_rooms=None)


def validate(plan: Floorplan) -> list[str]:
    """All Floorplan invariant violations, empty when the plan is sound.

    Each entry starts with a stable kind tag ("NotSimple", ...) so tests
    and callers can match on it."""
    issues: list[str] = []
    if plan.meters_per_pixel <= 0:
        issues.append("BadScale: meters_per_pixel must be positive")
    if len(plan.vertices) < 3:
        issues.append("TooFewVertices: polygon needs at least 3 vertices")
        return issues
    if not is_simple_polygon(plan.vertices):
        issues.append("NotSimple: polygon self-intersects or is degenerate")
        return issues
    if polygon_area(plan.vertices) < 0:
        issues.append("NotCounterClockwise: vertices are wound clockwise")
    if len(plan.edge_flags) != len(plan.vertices):
        issues.append("EdgeFlagCount: one flag per edge required")
    for f in plan.edge_flags:
        if f not in (EDGE_AXIS, EDGE_SLOPING):
            issues.append(f"EdgeFlagValue: unknown flag {f!r}")
            break
    for i, o in enumerate(plan.openings):
        if o.kind not in OPENING_KINDS:
            issues.append(f"OpeningBadKind: opening {i} kind {o.kind!r}")
        if not segment_on_boundary(o.a, o.b, plan.vertices):
            issues.append(f"OpeningOffBoundary: opening {i} not on the polygon boundary")
    if plan.gt_rooms:
        issues.extend(_check_room_tiling(plan))
    return issues


def _check_room_tiling(plan: Floorplan) -> list[str]:
    """Rooms must tile the interior: checked at pixel-center resolution
    with the shared half-open ownership rule, which makes shared edges
    unambiguous."""
    issues = []
    for i, room in enumerate(plan.gt_rooms):
        if len(room.polygon) < 3 or not is_simple_polygon(room.polygon):
            issues.append(f"RoomNotSimple: room {i}")
            return issues
    xmin, ymin, xmax, ymax = plan.bbox
    off = (-np.floor(xmin), -np.floor(ymin))
    w = int(np.ceil(xmax) - np.floor(xmin))
    h = int(np.ceil(ymax) - np.floor(ymin))
    interior = fill_polygon(plan.vertices, w, h, 1.0, off)
    cover = np.zeros((h, w), dtype=np.int32)
    for room in plan.gt_rooms:
        cover += fill_polygon(room.polygon, w, h, 1.0, off)
    if np.any(cover > 1):
        issues.append("RoomsOverlap: room interiors overlap")
    if np.any(interior & (cover == 0)):
        issues.append("RoomsGap: interior pixels not covered by any room")
    if np.any(~interior & (cover > 0)):
        issues.append("RoomOutside: room pixels outside the plan interior")
    return issues
