"""Exact rational 2D primitives: points, polygons, predicates, ray shooting, cuts.

All coordinates are ``fractions.Fraction``; every predicate is exact. Polygons
are stored counter-clockwise and closed (boundary points belong to the region).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import (
    DegenerateRay,
    DegenerateStraightVertex,
    DegenerateTriangle,
    InvalidCut,
    NotSimple,
    OverlapError,
    RepeatedVertex,
    TooFewVertices,
)

Rat = Fraction


def _frac(v) -> Fraction:
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class Point:
    x: Fraction
    y: Fraction

    def __init__(self, x, y):
        object.__setattr__(self, "x", _frac(x))
        object.__setattr__(self, "y", _frac(y))

    def __add__(self, o: "Point") -> "Point":
        return Point(self.x + o.x, self.y + o.y)

    def __sub__(self, o: "Point") -> "Point":
        return Point(self.x - o.x, self.y - o.y)

    def scale(self, k) -> "Point":
        k = _frac(k)
        return Point(self.x * k, self.y * k)

    def cross(self, o: "Point") -> Fraction:
        return self.x * o.y - self.y * o.x

    def dot(self, o: "Point") -> Fraction:
        return self.x * o.x + self.y * o.y

    def __repr__(self):
        return f"Point({self.x}, {self.y})"


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if self.a == self.b:
            raise ValueError("degenerate segment")

    def direction(self) -> Point:
        return self.b - self.a

    def midpoint(self) -> Point:
        return Point((self.a.x + self.b.x) / 2, (self.a.y + self.b.y) / 2)

    def reversed(self) -> "Segment":
        return Segment(self.b, self.a)


class VertexClass(Enum):
    CONVEX = "convex"
    REFLEX = "reflex"
    STRAIGHT = "straight"


def orientation(p: Point, q: Point, r: Point) -> int:
    """Sign of (q-p) x (r-p): +1 left turn, 0 collinear, -1 right turn."""
    v = (q - p).cross(r - p)
    return (v > 0) - (v < 0)


def signed_area2(pts: Sequence[Point]) -> Fraction:
    """Twice the signed area of the closed chain (positive for CCW)."""
    s = Fraction(0)
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        s += a.cross(b)
    return s


def point_on_segment(p: Point, a: Point, b: Point) -> bool:
    """True iff p lies on the closed segment ab."""
    if orientation(a, b, p) != 0:
        return False
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)
            and min(a.y, b.y) <= p.y <= max(a.y, b.y))


def segments_properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """True iff open segments ab and cd cross at a single interior point."""
    o1 = orientation(c, d, a)
    o2 = orientation(c, d, b)
    o3 = orientation(a, b, c)
    o4 = orientation(a, b, d)
    return o1 * o2 < 0 and o3 * o4 < 0


def segment_intersection(a: Point, b: Point, c: Point, d: Point) -> Optional[Point]:
    """Single intersection point of closed segments ab and cd, if any.

    Returns None when disjoint or when the overlap is not a single point
    (collinear overlaps are the caller's business).
    """
    e1 = b - a
    e2 = d - c
    denom = e1.cross(e2)
    if denom == 0:
        return None
    t = (c - a).cross(e2) / denom
    u = (c - a).cross(e1) / denom
    if 0 <= t <= 1 and 0 <= u <= 1:
        return a + e1.scale(t)
    return None


class Polygon:
    """Simple closed polygon, vertices CCW.

    Build through :func:`validate_polygon` (public input) or the trusted
    internal constructors used by cut splitting.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[Point]):
        self.vertices: tuple[Point, ...] = tuple(vertices)

    @property
    def n(self) -> int:
        return len(self.vertices)

    def vertex(self, i: int) -> Point:
        return self.vertices[i % self.n]

    def side(self, i: int) -> Segment:
        return Segment(self.vertex(i), self.vertex(i + 1))

    def sides(self) -> Iterable[Segment]:
        for i in range(self.n):
            yield self.side(i)

    def area(self) -> Fraction:
        return signed_area2(self.vertices) / 2

    def bbox(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [p.x for p in self.vertices]
        ys = [p.y for p in self.vertices]
        return min(xs), max(xs), min(ys), max(ys)

    def side_index_of(self, seg: Segment) -> int:
        """Index of the side with the same endpoints as seg (either order)."""
        for i in range(self.n):
            a, b = self.vertex(i), self.vertex(i + 1)
            if (a == seg.a and b == seg.b) or (a == seg.b and b == seg.a):
                return i
        raise ValueError("segment is not a side of this polygon")

    def __eq__(self, other):
        return isinstance(other, Polygon) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"Polygon({list(self.vertices)!r})"


def _check_simple(pts: Sequence[Point]) -> None:
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = pts[j], pts[(j + 1) % n]
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue  # shared endpoint handled by vertex checks
            if segments_properly_cross(a, b, c, d):
                raise NotSimple(f"edges {i} and {j} cross")
            # any touching between non-adjacent edges breaks simplicity
            for p in (c, d):
                if point_on_segment(p, a, b):
                    raise NotSimple(f"vertex on edge {i}")
            for p in (a, b):
                if point_on_segment(p, c, d):
                    raise NotSimple(f"vertex on edge {j}")
            # collinear overlap without endpoint containment is impossible;
            # covered by the endpoint checks above.
    # adjacent edges must not fold back onto each other
    for i in range(n):
        prev_p, v, next_p = pts[i - 1], pts[i], pts[(i + 1) % n]
        if orientation(prev_p, v, next_p) == 0 and (prev_p - v).dot(next_p - v) > 0:
            raise NotSimple(f"edges around vertex {i} overlap")


def validate_polygon(points: Sequence, allow_straight: bool = False) -> Polygon:
    """Validate and normalize a vertex list into a CCW simple polygon."""
    pts = [p if isinstance(p, Point) else Point(p[0], p[1]) for p in points]
    if len(pts) < 3:
        raise TooFewVertices(f"need >= 3 vertices, got {len(pts)}")
    if len(set(pts)) != len(pts):
        raise RepeatedVertex("repeated vertex")
    area2 = signed_area2(pts)
    if area2 == 0:
        raise NotSimple("zero area")
    if area2 < 0:
        pts.reverse()
    _check_simple(pts)
    if not allow_straight:
        for i in range(len(pts)):
            if orientation(pts[i - 1], pts[i], pts[(i + 1) % len(pts)]) == 0:
                raise DegenerateStraightVertex(f"straight vertex at index {i}")
    return Polygon(pts)


def _trusted_polygon(pts: Sequence[Point]) -> Polygon:
    # Pieces of a valid split are simple by construction; only sanity-check.
    assert len(pts) >= 3 and signed_area2(pts) > 0
    return Polygon(pts)


def classify_vertex(P: Polygon, i: int) -> VertexClass:
    o = orientation(P.vertex(i - 1), P.vertex(i), P.vertex(i + 1))
    if o > 0:
        return VertexClass.CONVEX
    if o < 0:
        return VertexClass.REFLEX
    return VertexClass.STRAIGHT


def reflex_indices(P: Polygon) -> list[int]:
    return [i for i in range(P.n) if classify_vertex(P, i) is VertexClass.REFLEX]


def is_convex(P: Polygon) -> bool:
    return not reflex_indices(P)


def is_orthogonal(P: Polygon) -> bool:
    """Every edge axis-parallel (validity already excludes straight vertices)."""
    for s in P.sides():
        d = s.direction()
        if d.x != 0 and d.y != 0:
            return False
    return True


# point location ------------------------------------------------------------

OUTSIDE, BOUNDARY, INSIDE = 0, 1, 2


def locate_on_boundary(P: Polygon, p: Point) -> Optional[tuple[str, int]]:
    """('vertex', i) or ('edge', i) when p is on the boundary, else None."""
    for i, v in enumerate(P.vertices):
        if v == p:
            return ("vertex", i)
    for i in range(P.n):
        s = P.side(i)
        if point_on_segment(p, s.a, s.b):
            return ("edge", i)
    return None


def point_in_polygon(P: Polygon, p: Point) -> int:
    """OUTSIDE / BOUNDARY / INSIDE, exact, closed polygon."""
    return point_in_ring(P.vertices, p)


def point_in_ring(pts: Sequence[Point], p: Point) -> int:
    n = len(pts)
    for i in range(n):
        if point_on_segment(p, pts[i], pts[(i + 1) % n]):
            return BOUNDARY
    inside = False
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            xcross = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y)
            if xcross > p.x:
                inside = not inside
    return INSIDE if inside else OUTSIDE


def segment_in_polygon(P: Polygon, s: Segment) -> bool:
    """True iff every point of the closed segment lies in the closed region P."""
    return _segment_in_polygon_pts(P, s.a, s.b)


def _segment_in_polygon_pts(P: Polygon, a: Point, b: Point) -> bool:
    if a == b:
        return point_in_polygon(P, a) != OUTSIDE
    if point_in_polygon(P, a) == OUTSIDE or point_in_polygon(P, b) == OUTSIDE:
        return False
    d = b - a
    params = {Fraction(0), Fraction(1)}
    for e in P.sides():
        if orientation(a, b, e.a) == 0 and orientation(a, b, e.b) == 0:
            # edge collinear with the segment line: record overlap endpoints
            for q in (e.a, e.b):
                t = (q - a).dot(d) / d.dot(d)
                if 0 < t < 1:
                    params.add(t)
            continue
        de = e.b - e.a
        denom = d.cross(de)
        if denom == 0:
            continue
        t = (e.a - a).cross(de) / denom
        u = (e.a - a).cross(d) / denom
        if 0 <= t <= 1 and 0 <= u <= 1:
            params.add(t)
    ts = sorted(params)
    for t1, t2 in zip(ts, ts[1:]):
        mid = a + d.scale((t1 + t2) / 2)
        if point_in_polygon(P, mid) == OUTSIDE:
            return False
    return True


# ray shooting ---------------------------------------------------------------


@dataclass(frozen=True)
class RayHit:
    point: Point
    at_vertex: Optional[int]  # vertex index when the hit lands on a vertex
    on_edge: Optional[int]    # edge index when it lands on an edge interior

    @property
    def is_vertex(self) -> bool:
        return self.at_vertex is not None


def ray_first_hit(P: Polygon, u: Point, v: Point) -> RayHit:
    """First boundary point b beyond v along the ray u->v with (v,b) interior.

    Raises DegenerateRay when the open segment beyond v immediately leaves P
    or runs along the boundary.
    """
    if u == v:
        raise DegenerateRay("zero direction")
    d = v - u
    dd = d.dot(d)
    best_t: Optional[Fraction] = None
    best_vertex: Optional[int] = None
    best_edge: Optional[int] = None
    for i, w in enumerate(P.vertices):
        if orientation(u, v, w) == 0:
            t = (w - v).dot(d) / dd
            if t > 0 and (best_t is None or t < best_t):
                best_t, best_vertex, best_edge = t, i, None
    for i in range(P.n):
        e = P.side(i)
        if orientation(u, v, e.a) == 0 and orientation(u, v, e.b) == 0:
            continue  # collinear edge: endpoints covered by the vertex scan
        de = e.b - e.a
        denom = d.cross(de)
        if denom == 0:
            continue
        t = (e.a - v).cross(de) / denom
        s = (e.a - v).cross(d) / denom
        if t > 0 and 0 < s < 1 and (best_t is None or t < best_t):
            best_t, best_vertex, best_edge = t, None, i
    if best_t is None:
        raise DegenerateRay("ray does not re-enter the boundary")
    b = v + d.scale(best_t)
    mid = v + d.scale(best_t / 2)
    if point_in_polygon(P, mid) != INSIDE:
        raise DegenerateRay("segment beyond the reflex vertex is not interior")
    return RayHit(b, best_vertex, best_edge)


# cuts -----------------------------------------------------------------------


class CutKind(Enum):
    DIAGONAL = "diagonal"
    UV = "uv"


@dataclass(frozen=True)
class Cut:
    """A splitting segment; seg.a plays the role of v in the labeling rule."""

    seg: Segment
    kind: CutKind
    u_index: Optional[int] = None  # for uv-cuts: the neighbor the ray extends
    v_index: Optional[int] = None  # for uv-cuts: the reflex vertex


def _open_cut_is_interior(P: Polygon, a: Point, b: Point) -> bool:
    for e in P.sides():
        if orientation(a, b, e.a) == 0 and orientation(a, b, e.b) == 0:
            # collinear edge may touch the cut only at a or b
            lo_ok = e.a in (a, b) or not point_on_segment(e.a, a, b)
            hi_ok = e.b in (a, b) or not point_on_segment(e.b, a, b)
            ab_on = point_on_segment(a, e.a, e.b) and point_on_segment(b, e.a, e.b)
            if not (lo_ok and hi_ok) or ab_on:
                return False
            continue
        p = segment_intersection(a, b, e.a, e.b)
        if p is not None and p != a and p != b:
            return False
    mid = Point((a.x + b.x) / 2, (a.y + b.y) / 2)
    return point_in_polygon(P, mid) == INSIDE


def split_at_cut(P: Polygon, cut: Cut) -> tuple[Polygon, Polygon]:
    """Split P along the cut into (P1, P2), P1 holding the CCW successor of seg.a.

    Straight angles created at a cut endpoint (uv-cuts) are merged away, which
    yields the side-count laws n1+n2 = n+2 (diagonal or edge-interior hit),
    n+1 (clean vertex hit) and n (vertex hit through a collinear edge).
    """
    a, b = cut.seg.a, cut.seg.b
    if not _open_cut_is_interior(P, a, b):
        raise InvalidCut("cut interior is not strictly inside the polygon")
    cycle: list[Point] = []
    for i in range(P.n):
        v, w = P.vertex(i), P.vertex(i + 1)
        cycle.append(v)
        d = w - v
        inserted = [q for q in (a, b)
                    if q != v and q != w and point_on_segment(q, v, w)]
        inserted.sort(key=lambda q: (q - v).dot(d))
        cycle.extend(inserted)
    ia = cycle.index(a)
    ib = cycle.index(b)

    def walk(start: int, stop: int) -> list[Point]:
        out = [cycle[start]]
        j = start
        while j != stop:
            j = (j + 1) % len(cycle)
            out.append(cycle[j])
        return out

    piece1 = walk(ia, ib)
    piece2 = walk(ib, ia)

    def drop_straight_cut_ends(piece: list[Point]) -> list[Point]:
        # the cut closes the piece between its last and first vertex
        out = piece
        for endpoint in (a, b):
            if endpoint in out:
                k = out.index(endpoint)
                m = len(out)
                if m > 3 and orientation(out[(k - 1) % m], out[k], out[(k + 1) % m]) == 0:
                    out = out[:k] + out[k + 1:]
        return out

    piece1 = drop_straight_cut_ends(piece1)
    piece2 = drop_straight_cut_ends(piece2)
    return _trusted_polygon(piece1), _trusted_polygon(piece2)


def attach_triangle(P: Polygon, shared: Segment, apex: Point) -> Polygon:
    """Replace the side `shared` with the two edges through apex (outside P)."""
    idx = P.side_index_of(shared)
    sa, sb = P.vertex(idx), P.vertex(idx + 1)
    if orientation(sa, sb, apex) == 0:
        raise DegenerateTriangle("apex collinear with the shared side")
    if orientation(sa, sb, apex) > 0:
        # apex on the interior side of the CCW edge: triangle overlaps P
        raise OverlapError("apex lies on the interior side of the shared side")
    tri = (sa, sb, apex)
    for i in range(P.n):
        w = P.vertex(i)
        if w in (sa, sb):
            continue
        if _point_in_triangle_closed(w, *tri):
            raise OverlapError("polygon vertex inside the attached triangle")
    for i in range(P.n):
        if i == idx:
            continue
        e = P.side(i)
        for c, d in ((apex, sa), (apex, sb)):
            if segments_properly_cross(e.a, e.b, c, d):
                raise OverlapError("attached triangle crosses the polygon")
            for q in (c, d):
                if q not in (e.a, e.b) and point_on_segment(q, e.a, e.b):
                    raise OverlapError("attached triangle touches the polygon")
            for q in (e.a, e.b):
                if q not in (c, d) and point_on_segment(q, c, d):
                    raise OverlapError("attached triangle touches the polygon")
    new_pts = list(P.vertices[: idx + 1]) + [apex] + list(P.vertices[idx + 1:])
    return _trusted_polygon(new_pts)


def _point_in_triangle_closed(p: Point, a: Point, b: Point, c: Point) -> bool:
    if orientation(a, b, c) < 0:
        a, b, c = a, c, b
    return (orientation(a, b, p) >= 0 and orientation(b, c, p) >= 0
            and orientation(c, a, p) >= 0)
