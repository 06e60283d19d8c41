"""Independent verification: coverage, mutual visibility graph, cardinality.

Coverage has two routes that never share code paths with the placement:
an exact decision over the arrangement of polygon and visibility-region
boundaries, and a seeded sampling falsifier driven directly by `sees`.
"""

from __future__ import annotations

import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import ConstructionInvariantError, PreconditionViolated
from .geometry import (
    INSIDE,
    OUTSIDE,
    Point,
    Polygon,
    Segment,
    orientation,
    point_in_polygon,
    signed_area2,
)
from .guards import HalfGuard, VisRegion, is_aligned, sees, visibility_region
from .placement import GuardSet

EXACT_MAX_N_ENV = "HG_EXACT_MAX_N"
DEFAULT_EXACT_MAX_N = 40


@dataclass(frozen=True)
class VisibilityGraph:
    n_nodes: int
    edges: frozenset[tuple[int, int]]  # (i, j) with i < j, mutual visibility


def mutual_visibility_graph(P: Polygon, G: GuardSet) -> VisibilityGraph:
    edges = set()
    gs = G.guards
    for i in range(len(gs)):
        for j in range(i + 1, len(gs)):
            if sees(P, gs[i], gs[j].pos) and sees(P, gs[j], gs[i].pos):
                edges.add((i, j))
    return VisibilityGraph(len(gs), frozenset(edges))


def is_connected(V: VisibilityGraph) -> bool:
    if V.n_nodes <= 1:
        return True
    adj: dict[int, list[int]] = {i: [] for i in range(V.n_nodes)}
    for i, j in V.edges:
        adj[i].append(j)
        adj[j].append(i)
    seen = {0}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == V.n_nodes


# exact coverage --------------------------------------------------------------


@dataclass(frozen=True)
class UncoveredCell:
    """A maximal-coverage-constant cell of the arrangement left uncovered."""

    outer: tuple[Point, ...]
    holes: tuple[tuple[Point, ...], ...] = ()

    def witness(self) -> Point:
        xs = [p.x for p in self.outer]
        ys = [p.y for p in self.outer]
        return Point(sum(xs) / len(xs), sum(ys) / len(ys))


def _ring_segments(pts: Sequence[Point], owner: int):
    segs = []
    n = len(pts)
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if a == b:
            continue
        segs.append((a, b, owner))
    return segs


def uncovered_region(
    P: Polygon,
    G: GuardSet,
    regions: Optional[Sequence[VisRegion]] = None,
) -> list[UncoveredCell]:
    """Exact P minus the union of the guards' visibility regions.

    Decided over the full arrangement of boundary segments by a vertical slab
    decomposition; returns one cell polygon per uncovered trapezoid (all
    positive area, holes never needed at cell granularity).
    """
    if regions is None:
        regions = [visibility_region(P, g) for g in G.guards]
    regions = [r for r in regions if not r.is_empty()]
    segs: list[tuple[Point, Point, int]] = _ring_segments(P.vertices, -1)
    for k, r in enumerate(regions):
        segs.extend(_ring_segments(r.points, k))

    walls: set[Fraction] = set()
    items = []
    for a, b, owner in segs:
        walls.add(a.x)
        walls.add(b.x)
        xmin, xmax = (a.x, b.x) if a.x <= b.x else (b.x, a.x)
        items.append((xmin, xmax, a, b, owner))
    nseg = len(items)
    for i in range(nseg):
        xi0, xi1, a, b, _ = items[i]
        for j in range(i + 1, nseg):
            xj0, xj1, c, d, _ = items[j]
            if xj0 >= xi1 or xi0 >= xj1:
                continue
            ymin_i, ymax_i = (a.y, b.y) if a.y <= b.y else (b.y, a.y)
            ymin_j, ymax_j = (c.y, d.y) if c.y <= d.y else (d.y, c.y)
            if ymin_j > ymax_i or ymin_i > ymax_j:
                continue
            x = _proper_crossing_x(a, b, c, d)
            if x is not None:
                walls.add(x)

    xs = sorted(walls)
    n_owners = len(regions)
    cells: list[UncoveredCell] = []
    for x1, x2 in zip(xs, xs[1:]):
        xm = (x1 + x2) / 2
        active = []
        for xmin, xmax, a, b, owner in items:
            if xmin < xm < xmax:
                d = b - a
                y = a.y + (xm - a.x) * d.y / d.x
                active.append((y, owner, a, b))
        if not active:
            continue
        active.sort(key=lambda t: t[0])
        groups: list[tuple[Fraction, list]] = []
        for y, owner, a, b in active:
            if groups and groups[-1][0] == y:
                groups[-1][1].append((owner, a, b))
            else:
                groups.append((y, [(owner, a, b)]))
        in_p = False
        in_region = [False] * n_owners
        for gi in range(len(groups) - 1):
            _, crossings = groups[gi]
            for owner, _, _ in crossings:
                if owner == -1:
                    in_p = not in_p
                else:
                    in_region[owner] = not in_region[owner]
            if in_p and not any(in_region):
                cells.append(_trapezoid(x1, x2, groups[gi][1][0], groups[gi + 1][1][0]))
    return cells


def _proper_crossing_x(a: Point, b: Point, c: Point, d: Point) -> Optional[Fraction]:
    e1 = b - a
    e2 = d - c
    denom = e1.cross(e2)
    if denom == 0:
        return None
    t = (c - a).cross(e2) / denom
    u = (c - a).cross(e1) / denom
    if 0 < t < 1 and 0 < u < 1:
        return a.x + t * e1.x
    return None


def _trapezoid(x1: Fraction, x2: Fraction, lower, upper) -> UncoveredCell:
    _, la, lb = lower
    _, ua, ub = upper

    def at(seg_a: Point, seg_b: Point, x: Fraction) -> Point:
        d = seg_b - seg_a
        return Point(x, seg_a.y + (x - seg_a.x) * d.y / d.x)

    corners = [at(la, lb, x1), at(la, lb, x2), at(ua, ub, x2), at(ua, ub, x1)]
    ring = []
    for p in corners:
        if not ring or ring[-1] != p:
            ring.append(p)
    if len(ring) > 1 and ring[0] == ring[-1]:
        ring.pop()
    return UncoveredCell(tuple(ring))


# sampled coverage -------------------------------------------------------------


@dataclass(frozen=True)
class CoverageResult:
    status: str  # "proved_exact" | "sampled_ok" | "refuted"
    samples: int = 0
    witness: Optional[Point] = None

    @property
    def ok(self) -> bool:
        return self.status != "refuted"


def _structured_samples(P: Polygon, G: GuardSet) -> list[Point]:
    pts: list[Point] = []
    for i in range(P.n):
        pts.append(P.side(i).midpoint())
    for i in range(P.n):
        v = P.vertex(i)
        r_next = P.vertex(i + 1) - v
        r_prev = P.vertex(i - 1) - v
        m = r_next + r_prev
        if m == Point(0, 0):
            m = Point(-r_next.y, r_next.x)
        if orientation(P.vertex(i - 1), v, P.vertex(i + 1)) < 0:
            m = Point(-m.x, -m.y)
        pts.extend(_inward_offsets(P, v, m))
    for g in G.guards:
        pts.extend(_inward_offsets(P, g.pos, g.hp.normal()))
    return pts


def orientation(p, q, r):  # local alias to avoid importing twice
    from .geometry import orientation as _o
    return _o(p, q, r)


def _inward_offsets(P: Polygon, base: Point, direction: Point) -> list[Point]:
    if direction == Point(0, 0):
        return []
    scale = max(abs(direction.x), abs(direction.y))
    xmin, xmax, ymin, ymax = P.bbox()
    span = max(xmax - xmin, ymax - ymin)
    step = span / 64
    out = []
    for k in (1, 4):
        p = base + direction.scale(step * k / (scale * 8))
        if point_in_polygon(P, p) == INSIDE:
            out.append(p)
    return out


def sample_coverage(
    P: Polygon,
    G: GuardSet,
    density: float = 50.0,
    seed: int = 0,
) -> CoverageResult:
    """Seeded sampling falsifier: returns the first uncovered point found.

    Candidate failures from the float prefilter are re-decided exactly before
    being reported as witnesses.
    """
    if density <= 0:
        raise PreconditionViolated("density must be positive")
    structured = [p for p in _structured_samples(P, G)
                  if point_in_polygon(P, p) != OUTSIDE]
    area = float(abs(signed_area2(P.vertices))) / 2.0
    want = max(8, int(density * area))
    rng = random.Random(f"cover:{seed}")
    xmin, xmax, ymin, ymax = P.bbox()
    den = 64
    lox, hix = int(xmin * den) - 1, int(xmax * den) + 1
    loy, hiy = int(ymin * den) - 1, int(ymax * den) + 1
    uniform: list[Point] = []
    attempts = 0
    # rejection-sample interior points with a float prefilter, exact on accept
    ring = np.array([[float(p.x), float(p.y)] for p in P.vertices])
    while len(uniform) < want and attempts < want * 20:
        attempts += 1
        batch = max(256, want - len(uniform))
        cx = np.array([rng.randint(lox, hix) for _ in range(batch)], dtype=np.int64)
        cy = np.array([rng.randint(loy, hiy) for _ in range(batch)], dtype=np.int64)
        px = cx / den
        py = cy / den
        inside = _np_inside(ring, px, py)
        for k in np.nonzero(inside)[0]:
            if len(uniform) >= want:
                break
            uniform.append(Point(Fraction(int(cx[k]), den), Fraction(int(cy[k]), den)))
    samples = structured + uniform
    if not samples:
        return CoverageResult("sampled_ok", 0)
    sx = np.array([float(p.x) for p in samples])
    sy = np.array([float(p.y) for p in samples])
    undecided = np.ones(len(samples), dtype=bool)
    for g in G.guards:
        if not undecided.any():
            break
        clear = _np_clearly_sees(ring, g, sx, sy)
        undecided &= ~clear
    for idx in np.nonzero(undecided)[0]:
        p = samples[int(idx)]
        if point_in_polygon(P, p) == OUTSIDE:
            continue
        if not any(sees(P, g, p) for g in G.guards):
            return CoverageResult("refuted", len(samples), p)
    return CoverageResult("sampled_ok", len(samples))


def _np_inside(ring: np.ndarray, px: np.ndarray, py: np.ndarray) -> np.ndarray:
    n = len(ring)
    inside = np.zeros(len(px), dtype=bool)
    margin = 1e-9 * (np.abs(ring).max() + 1.0)
    near = np.zeros(len(px), dtype=bool)
    for i in range(n):
        ax, ay = ring[i]
        bx, by = ring[(i + 1) % n]
        cond = (ay > py) != (by > py)
        with np.errstate(divide="ignore", invalid="ignore"):
            xc = ax + (py - ay) * (bx - ax) / (by - ay)
        hit = cond & (xc > px)
        inside ^= hit
        near |= cond & (np.abs(xc - px) < margin)
    return inside & ~near


def _np_clearly_sees(ring: np.ndarray, g: HalfGuard, sx, sy) -> np.ndarray:
    gx, gy = float(g.pos.x), float(g.pos.y)
    a, b, c = float(g.hp.a), float(g.hp.b), float(g.hp.c)
    scale = max(abs(a), abs(b)) * (np.abs(ring).max() + 1.0) + abs(c)
    tol_h = 1e-9 * scale
    ok = (a * sx + b * sy + c) > -tol_h
    n = len(ring)
    coord = np.abs(ring).max() + 1.0
    tol = 1e-9 * coord * coord
    for i in range(n):
        px_, py_ = ring[i]
        qx_, qy_ = ring[(i + 1) % n]
        d1 = (qx_ - px_) * (gy - py_) - (qy_ - py_) * (gx - px_)
        d2 = (qx_ - px_) * (sy - py_) - (qy_ - py_) * (sx - px_)
        d3 = (sx - gx) * (py_ - gy) - (sy - gy) * (px_ - gx)
        d4 = (sx - gx) * (qy_ - gy) - (sy - gy) * (qx_ - gx)
        blocked = (d1 * d2 < -tol * tol) & (d3 * d4 < -tol * tol)
        ambiguous = (np.abs(d1 * d2) <= tol * tol) | (np.abs(d3 * d4) <= tol * tol)
        ok &= ~(blocked | ambiguous)
        if not ok.any():
            break
    return ok


# report ----------------------------------------------------------------------


@dataclass(frozen=True)
class VerifyReport:
    covered: CoverageResult
    connected: bool
    cardinality: tuple[int, int, bool]  # (actual, bound, ok)
    aligned_to: Optional[tuple[Segment, bool]] = None

    @property
    def ok(self) -> bool:
        aligned_ok = self.aligned_to is None or self.aligned_to[1]
        return self.covered.ok and self.connected and self.cardinality[2] and aligned_ok

    def to_dict(self) -> dict:
        from .serialize import rat_str

        cov: dict = {"status": self.covered.status, "samples": self.covered.samples}
        if self.covered.witness is not None:
            cov["witness"] = [rat_str(self.covered.witness.x), rat_str(self.covered.witness.y)]
        out = {
            "covered": cov,
            "connected": self.connected,
            "cardinality": {
                "actual": self.cardinality[0],
                "bound": self.cardinality[1],
                "ok": self.cardinality[2],
            },
        }
        if self.aligned_to is not None:
            seg, ok = self.aligned_to
            out["aligned_to"] = {
                "segment": [[rat_str(seg.a.x), rat_str(seg.a.y)],
                            [rat_str(seg.b.x), rat_str(seg.b.y)]],
                "ok": ok,
            }
        return out


def default_bound(P: Polygon, orthogonal: bool = False) -> int:
    if orthogonal:
        return P.n // 2 - 2
    return 1 if P.n == 3 else P.n // 2 - 1


def exact_max_n() -> int:
    raw = os.environ.get(EXACT_MAX_N_ENV, "")
    try:
        return int(raw) if raw else DEFAULT_EXACT_MAX_N
    except ValueError:
        return DEFAULT_EXACT_MAX_N


def verify_report(
    P: Polygon,
    G: GuardSet,
    bound: Optional[int] = None,
    align: Optional[Segment] = None,
    density: float = 50.0,
    seed: int = 0,
    force_exact: Optional[bool] = None,
) -> VerifyReport:
    """Aggregate coverage, connectivity, cardinality and optional alignment."""
    if bound is None:
        bound = default_bound(P)
    use_exact = force_exact if force_exact is not None else P.n <= exact_max_n()
    if use_exact:
        cells = uncovered_region(P, G)
        if cells:
            covered = CoverageResult("refuted", 0, cells[0].witness())
        else:
            covered = CoverageResult("proved_exact", 0)
    else:
        covered = sample_coverage(P, G, density=density, seed=seed)
    graph = mutual_visibility_graph(P, G)
    connected = is_connected(graph)
    actual = len(G)
    card_ok = actual <= bound
    aligned = None
    if align is not None:
        aligned = (align, any(is_aligned(P, g, align) for g in G.guards))
    return VerifyReport(covered, connected, (actual, bound, card_ok), aligned)
