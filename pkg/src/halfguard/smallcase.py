"""Base-case placements: one guard monitors a convex polygon, quad, or pentagon."""

from __future__ import annotations

from .errors import DegenerateConfiguration, InvalidSize, PreconditionViolated
from .geometry import (
    Cut,
    CutKind,
    Point,
    Polygon,
    RayHit,
    Segment,
    VertexClass,
    classify_vertex,
    locate_on_boundary,
    point_on_segment,
    ray_first_hit,
    reflex_indices,
    split_at_cut,
)
from .guards import HalfGuard, entire_at


def convex_guard(P: Polygon, pos: Point) -> HalfGuard:
    """Entire guard anywhere on the boundary of a convex polygon monitors it."""
    if reflex_indices(P):
        raise PreconditionViolated("polygon is not convex")
    if locate_on_boundary(P, pos) is None:
        raise PreconditionViolated("position not on the boundary")
    return entire_at(P, pos)


def quad_guard(Q: Polygon, s: int) -> HalfGuard:
    """An s-aligned entire guard monitoring the quadrilateral.

    Convex: midpoint of s. Reflex endpoint of s: the ray through it lands at
    b on the far boundary. Reflex off s: the endpoint of s whose neighbors
    are both convex, boundary line along s.
    """
    if Q.n != 4:
        raise InvalidSize("quad_guard needs a quadrilateral")
    s %= 4
    ia, ib = s, (s + 1) % 4
    a, b = Q.vertex(ia), Q.vertex(ib)
    reflex = reflex_indices(Q)
    if not reflex:
        return entire_at(Q, Segment(a, b).midpoint())
    r = reflex[0]
    if r == ib:
        hit = ray_first_hit(Q, a, b)
        if hit.is_vertex:
            raise DegenerateConfiguration("quad ray landed on a vertex")
        return entire_at(Q, hit.point)
    if r == ia:
        hit = ray_first_hit(Q, b, a)
        if hit.is_vertex:
            raise DegenerateConfiguration("quad ray landed on a vertex")
        return entire_at(Q, hit.point)
    # reflex off s: guard at the endpoint of s not adjacent to the reflex
    # vertex, so both neighbors of the guard vertex are convex
    if (r + 1) % 4 == ia or (r - 1) % 4 == ia:
        pos = b
    else:
        pos = a
    return entire_at(Q, pos, preferred_line=Segment(a, b))


def _assert_pieces_convex(P: Polygon, cut: Cut) -> None:
    for piece in split_at_cut(P, cut):
        if reflex_indices(piece):
            raise DegenerateConfiguration("cut piece is not convex")


def _pent_one_reflex(P: Polygon, iv: int) -> HalfGuard:
    v = P.vertex(iv)
    u = P.vertex(iv - 1)
    w = P.vertex(iv + 1)
    hits: list[RayHit] = []
    for src in (u, w):
        hit = ray_first_hit(P, src, v)
        if not hit.is_vertex:
            cut = Cut(Segment(v, hit.point), CutKind.UV, v_index=iv)
            _assert_pieces_convex(P, cut)
            return entire_at(P, hit.point)
        hits.append(hit)
    # both extension rays land on vertices x and y; any point strictly
    # between them splits the reflex angle into two convex pieces
    ix, iy = hits[0].at_vertex, hits[1].at_vertex
    if ix != (iv + 2) % 5 or iy != (iv + 3) % 5:
        raise DegenerateConfiguration("extension rays landed off the far side")
    x, y = P.vertex(ix), P.vertex(iy)
    b = Segment(x, y).midpoint()
    cut = Cut(Segment(v, b), CutKind.UV, v_index=iv)
    _assert_pieces_convex(P, cut)
    return entire_at(P, b)


def _pent_two_reflex(P: Polygon, r1: int, r2: int) -> HalfGuard:
    n = 5
    adjacent = (r2 - r1) % n == 1 or (r1 - r2) % n == 1
    if adjacent:
        # order the pair along the cycle, ray from the convex neighbor
        iv, iw = (r1, r2) if (r1 + 1) % n == r2 else (r2, r1)
        attempts = [
            (P.vertex(iv - 1), P.vertex(iv), ((iw + 1) % n, (iw + 2) % n)),
            (P.vertex((iw + 1) % n), P.vertex(iw), ((iv - 2) % n, (iv - 1) % n)),
        ]
    else:
        # common neighbor sits between the two reflex vertices
        iv = (r1 + 1) % n if (r1 + 2) % n == r2 else (r2 + 1) % n
        attempts = [
            (P.vertex(iv), P.vertex((iv + 1) % n), ((iv + 2) % n, (iv + 3) % n)),
            (P.vertex(iv), P.vertex((iv - 1) % n), ((iv + 2) % n, (iv + 3) % n)),
        ]
    for src, through, (i_far_a, i_far_b) in attempts:
        hit = ray_first_hit(P, src, through)
        if hit.is_vertex:
            continue
        far_a, far_b = P.vertex(i_far_a), P.vertex(i_far_b)
        if not point_on_segment(hit.point, far_a, far_b):
            continue
        return entire_at(P, hit.point)
    raise DegenerateConfiguration("no reflex extension lands on the far side")


def pent_guard(P: Polygon) -> HalfGuard:
    """An entire guard monitoring the pentagon, never placed at a vertex."""
    if P.n != 5:
        raise InvalidSize("pent_guard needs a pentagon")
    reflex = reflex_indices(P)
    if len(reflex) == 0:
        return entire_at(P, P.side(0).midpoint())
    if len(reflex) == 1:
        g = _pent_one_reflex(P, reflex[0])
    elif len(reflex) == 2:
        g = _pent_two_reflex(P, reflex[0], reflex[1])
    else:
        raise DegenerateConfiguration("pentagon with more than two reflex vertices")
    loc = locate_on_boundary(P, g.pos)
    if loc is None or loc[0] == "vertex":
        raise DegenerateConfiguration("pentagon guard landed on a vertex")
    return g
