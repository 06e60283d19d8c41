"""Half-guards with 180-degree vision: visibility, entire guards, alignment.

A half-guard is a point together with a closed half-plane whose boundary line
passes through the point; it sees y when the segment to y stays inside both
the polygon and the half-plane.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .errors import (
    ConeNotContained,
    ConstructionInvariantError,
    NotOnBoundary,
    PointOutsidePolygon,
    ReflexVertex,
)
from .geometry import (
    INSIDE,
    OUTSIDE,
    Point,
    Polygon,
    Segment,
    VertexClass,
    classify_vertex,
    locate_on_boundary,
    orientation,
    point_in_polygon,
    point_in_ring,
    point_on_segment,
    segment_in_polygon,
    signed_area2,
)


@dataclass(frozen=True)
class HalfPlane:
    """Closed region a*x + b*y + c >= 0 with integer, gcd-reduced coefficients."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.a == 0 and self.b == 0:
            raise ValueError("degenerate half-plane")
        g = gcd(gcd(abs(self.a), abs(self.b)), abs(self.c))
        if g > 1:
            object.__setattr__(self, "a", self.a // g)
            object.__setattr__(self, "b", self.b // g)
            object.__setattr__(self, "c", self.c // g)

    def value(self, p: Point) -> Fraction:
        return self.a * p.x + self.b * p.y + self.c

    def contains(self, p: Point) -> bool:
        return self.value(p) >= 0

    def normal(self) -> Point:
        """Direction pointing into the half-plane."""
        return Point(self.a, self.b)

    def boundary_dir(self) -> Point:
        return Point(-self.b, self.a)

    @staticmethod
    def from_point_normal(p: Point, n: Point) -> "HalfPlane":
        # a = n.x, b = n.y, c = -(n . p), scaled to integers
        a, b = n.x, n.y
        c = -(a * p.x + b * p.y)
        den = a.denominator * b.denominator * c.denominator
        ai = int(a * den)
        bi = int(b * den)
        ci = int(c * den)
        return HalfPlane(ai, bi, ci)

    @staticmethod
    def from_boundary(p: Point, q: Point, inside: Point) -> "HalfPlane":
        """Half-plane bounded by line pq containing the point `inside`."""
        d = q - p
        hp = HalfPlane.from_point_normal(p, Point(-d.y, d.x))
        v = hp.value(inside)
        if v == 0:
            raise ValueError("inside point lies on the boundary line")
        if v < 0:
            hp = HalfPlane(-hp.a, -hp.b, -hp.c)
        return hp


@dataclass(frozen=True)
class HalfGuard:
    pos: Point
    hp: HalfPlane

    def __post_init__(self):
        if self.hp.value(self.pos) != 0:
            raise ValueError("guard position must lie on the half-plane boundary")

    def collinear_with(self, seg: Segment) -> bool:
        return orientation(seg.a, seg.b, self.pos) == 0


def sees(P: Polygon, g: HalfGuard, y: Point) -> bool:
    """g sees y iff the segment pos-y stays in P and in the half-plane."""
    if point_in_polygon(P, y) == OUTSIDE:
        raise PointOutsidePolygon(f"target {y!r} outside polygon")
    if y == g.pos:
        return True
    # pos is on the boundary line, so y in H implies the whole segment in H
    if not g.hp.contains(y):
        return False
    return segment_in_polygon(P, Segment(g.pos, y))


def _cone_rays(P: Polygon, pos: Point) -> tuple[Point, Point]:
    """Interior-cone boundary rays at a boundary point, (toward-next, toward-prev)."""
    loc = locate_on_boundary(P, pos)
    if loc is None:
        raise NotOnBoundary(f"{pos!r} is not on the boundary")
    kind, i = loc
    if kind == "vertex":
        return (P.vertex(i + 1) - pos, P.vertex(i - 1) - pos)
    s = P.side(i)
    return (s.b - pos, s.a - pos)


def entire_at(P: Polygon, pos: Point, preferred_line: Optional[Segment] = None) -> HalfGuard:
    """An entire boundary half-guard at pos: its half-plane contains the cone.

    Line choice: edge interior -> the edge's line; convex vertex with
    preferred_line -> that line; otherwise the chord of the adjacent vertices.
    """
    loc = locate_on_boundary(P, pos)
    if loc is None:
        raise NotOnBoundary(f"{pos!r} is not on the boundary")
    kind, i = loc
    if kind == "edge":
        s = P.side(i)
        if preferred_line is not None and orientation(preferred_line.a, preferred_line.b, s.a) != 0:
            raise ConeNotContained("preferred line is not the edge's line")
        d = s.direction()
        hp = HalfPlane.from_point_normal(pos, Point(-d.y, d.x))  # interior is left
        return HalfGuard(pos, hp)
    cls = classify_vertex(P, i)
    if cls is VertexClass.REFLEX:
        raise ReflexVertex("no entire half-guard at a reflex vertex")
    r_next, r_prev = _cone_rays(P, pos)
    if preferred_line is not None:
        if orientation(preferred_line.a, preferred_line.b, pos) != 0:
            raise ConeNotContained("position not collinear with the preferred line")
        d = preferred_line.direction()
    elif cls is VertexClass.STRAIGHT:
        d = r_next
    else:
        d = P.vertex(i + 1) - P.vertex(i - 1)  # chord of the adjacent vertices
    n_left = Point(-d.y, d.x)
    s_next, s_prev = n_left.dot(r_next), n_left.dot(r_prev)
    if s_next >= 0 and s_prev >= 0:
        n = n_left
    elif s_next <= 0 and s_prev <= 0:
        n = Point(d.y, -d.x)
    else:
        raise ConeNotContained("cone does not fit on one side of the line")
    if s_next == 0 and s_prev == 0:
        # straight vertex along the line: pick the interior side
        inward = Point(-(r_next).y, (r_next).x)
        n = inward
    g = HalfGuard(pos, HalfPlane.from_point_normal(pos, n))
    if not is_entire(P, g):
        raise ConstructionInvariantError("constructed guard is not entire")
    return g


def is_entire(P: Polygon, g: HalfGuard) -> bool:
    """Exact test that the interior cone at the position lies in the half-plane."""
    loc = locate_on_boundary(P, g.pos)
    if loc is None:
        raise NotOnBoundary(f"{g.pos!r} is not on the boundary")
    kind, i = loc
    if kind == "vertex" and classify_vertex(P, i) is VertexClass.REFLEX:
        return False
    r_next, r_prev = _cone_rays(P, g.pos)
    n = g.hp.normal()
    s_next, s_prev = n.dot(r_next), n.dot(r_prev)
    if s_next < 0 or s_prev < 0:
        return False
    if s_next > 0 or s_prev > 0:
        return True
    # both rays on the boundary line (edge-interior or straight vertex):
    # the cone interior must be on the half-plane side
    inward = Point(-r_next.y, r_next.x)
    return n.dot(inward) > 0


def is_aligned(P: Polygon, g: HalfGuard, t: Segment) -> bool:
    """t-aligned: collinear with t, sees all of t, boundary line matches if on t."""
    if not g.collinear_with(t):
        return False
    if point_on_segment(g.pos, t.a, t.b):
        if g.hp.value(t.a) != 0 or g.hp.value(t.b) != 0:
            return False
    for endpoint in (t.a, t.b):
        if not sees(P, g, endpoint):
            return False
    return True


# visibility regions ----------------------------------------------------------


@dataclass(frozen=True)
class VisRegion:
    """Closure of the set of points seen by the guard; empty tuple if none."""

    points: tuple[Point, ...]

    def is_empty(self) -> bool:
        return not self.points

    def area(self) -> Fraction:
        if self.is_empty():
            return Fraction(0)
        return abs(signed_area2(self.points)) / 2

    def contains(self, p: Point) -> bool:
        if self.is_empty():
            return False
        return point_in_ring(self.points, p) != OUTSIDE


def _primitive(d: Point) -> tuple[int, int]:
    n1 = d.x.numerator * d.y.denominator
    n2 = d.y.numerator * d.x.denominator
    g = gcd(abs(n1), abs(n2))
    return (n1 // g, n2 // g)


def _ccw_key(ref: tuple[int, int], d: tuple[int, int]):
    """Sort key for directions by CCW angle from ref in [0, 2*pi)."""
    cr = ref[0] * d[1] - ref[1] * d[0]
    dt = ref[0] * d[0] + ref[1] * d[1]
    if cr == 0 and dt > 0:
        bucket = 0
    elif cr > 0:
        bucket = 1
    elif cr == 0:
        bucket = 2
    else:
        bucket = 3
    return bucket, _AngularInBucket(d)


class _AngularInBucket:
    """Orders directions within a half-plane bucket by cross product."""

    __slots__ = ("d",)

    def __init__(self, d):
        self.d = d

    def __lt__(self, other):
        a, b = self.d, other.d
        return a[0] * b[1] - a[1] * b[0] > 0

    def __eq__(self, other):
        a, b = self.d, other.d
        return a[0] * b[1] - a[1] * b[0] == 0


def _in_ccw_cone(start: tuple[int, int], end: tuple[int, int], d: tuple[int, int]) -> bool:
    """d within the CCW sweep from start to end (inclusive)."""
    return _ccw_key(start, d) <= _ccw_key(start, end)


def _sector_probe(dA: tuple[int, int], dB: tuple[int, int]) -> Point:
    """An exact direction strictly inside the CCW sector from dA to dB."""
    cr = dA[0] * dB[1] - dA[1] * dB[0]
    dt = dA[0] * dB[0] + dA[1] * dB[1]
    if cr > 0:
        return Point(dA[0] + dB[0], dA[1] + dB[1])
    if cr == 0 and dt < 0:
        return Point(-dA[1], dA[0])  # opposite directions: rotate 90 CCW
    if cr < 0:
        return Point(-(dA[0] + dB[0]), -(dA[1] + dB[1]))
    raise ConstructionInvariantError("degenerate sector")


def _first_hit_edge(P: Polygon, q: Point, m: Point) -> int:
    best_t = None
    best_edge = None
    for i in range(P.n):
        e = P.side(i)
        de = e.b - e.a
        denom = m.cross(de)
        if denom == 0:
            continue
        t = (e.a - q).cross(de) / denom
        u = (e.a - q).cross(m) / denom
        if t > 0 and 0 <= u <= 1 and (best_t is None or t < best_t):
            best_t, best_edge = t, i
    if best_edge is None:
        raise ConstructionInvariantError("probe ray escapes the polygon")
    return best_edge


def _ray_line_point(q: Point, d: Point, e: Segment) -> Point:
    de = e.b - e.a
    denom = d.cross(de)
    if denom == 0:
        raise ConstructionInvariantError("boundary ray parallel to its hit edge")
    t = (e.a - q).cross(de) / denom
    return q + d.scale(t)


def visibility_region(P: Polygon, g: HalfGuard) -> VisRegion:
    """Angular-sweep visibility polygon of the guard position, clipped by H_g."""
    q = g.pos
    loc = locate_on_boundary(P, q)
    on_boundary = loc is not None
    if not on_boundary and point_in_polygon(P, q) != INSIDE:
        raise PointOutsidePolygon(f"guard {q!r} outside polygon")

    if on_boundary:
        d_next, d_prev = _cone_rays(P, q)
        d_start, d_end = _primitive(d_next), _primitive(d_prev)
    else:
        d_start = d_end = None

    dirs = set()
    for w in P.vertices:
        if w == q:
            continue
        d = _primitive(w - q)
        if on_boundary and not _in_ccw_cone(d_start, d_end, d):
            continue
        dirs.add(d)
    if on_boundary:
        dirs.add(d_start)
        dirs.add(d_end)
        ordered = sorted(dirs, key=lambda d: _ccw_key(d_start, d))
        sectors = list(zip(ordered, ordered[1:]))
    else:
        ordered = sorted(dirs, key=lambda d: _ccw_key((1, 0), d))
        sectors = list(zip(ordered, ordered[1:] + ordered[:1]))

    chain: list[Point] = []
    for dA, dB in sectors:
        m = _sector_probe(dA, dB)
        e = P.side(_first_hit_edge(P, q, m))
        a_pt = _ray_line_point(q, Point(*dA), e)
        b_pt = _ray_line_point(q, Point(*dB), e)
        for p in (a_pt, b_pt):
            if not chain or chain[-1] != p:
                chain.append(p)
    if on_boundary:
        pts = [q] + chain
    else:
        pts = chain
        if len(pts) > 1 and pts[0] == pts[-1]:
            pts.pop()
    pts = _clip_halfplane(pts, g.hp)
    pts = _clean_ring(pts)
    if len(pts) < 3 or signed_area2(pts) == 0:
        return VisRegion(())
    return VisRegion(tuple(pts))


def _clip_halfplane(pts: list[Point], hp: HalfPlane) -> list[Point]:
    if not pts:
        return []
    out: list[Point] = []
    n = len(pts)
    vals = [hp.value(p) for p in pts]
    for i in range(n):
        cur, nxt = pts[i], pts[(i + 1) % n]
        vc, vn = vals[i], vals[(i + 1) % n]
        if vc >= 0:
            out.append(cur)
        if (vc > 0 and vn < 0) or (vc < 0 and vn > 0):
            t = vc / (vc - vn)
            out.append(cur + (nxt - cur).scale(t))
    return out


def _clean_ring(pts: list[Point]) -> list[Point]:
    out: list[Point] = []
    for p in pts:
        if not out or out[-1] != p:
            out.append(p)
    while len(out) > 1 and out[0] == out[-1]:
        out.pop()
    changed = True
    while changed and len(out) >= 3:
        changed = False
        for i in range(len(out)):
            a, b, c = out[i - 1], out[i], out[(i + 1) % len(out)]
            if a == c:  # zero-width spike
                del out[i]
                changed = True
                break
    return out
