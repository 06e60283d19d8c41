"""Ear-clipping triangulation, the dual tree, and edge-deletion decompositions."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConstructionInvariantError
from .geometry import Point, Polygon, Segment, _trusted_polygon, orientation


@dataclass(frozen=True)
class Triangulation:
    polygon: Polygon
    triangles: tuple[tuple[int, int, int], ...]  # CCW vertex-index triples
    diagonals: tuple[tuple[int, int], ...]       # vertex-index pairs, sorted

    def diagonal_segment(self, d: tuple[int, int]) -> Segment:
        return Segment(self.polygon.vertex(d[0]), self.polygon.vertex(d[1]))


@dataclass(frozen=True)
class DualTree:
    """Weak dual of a triangulation: nodes are triangle indices."""

    n_nodes: int
    edges: tuple[tuple[int, int, tuple[int, int]], ...]  # (tri, tri, diagonal)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {i: [] for i in range(self.n_nodes)}
        for t1, t2, _ in self.edges:
            adj[t1].append(t2)
            adj[t2].append(t1)
        return adj


def _ear_empty(P: Polygon, active: list[int], ia: int, ib: int, ic: int) -> bool:
    a, b, c = P.vertex(ia), P.vertex(ib), P.vertex(ic)
    for j in active:
        if j in (ia, ib, ic):
            continue
        w = P.vertex(j)
        if (orientation(a, b, w) >= 0 and orientation(b, c, w) >= 0
                and orientation(c, a, w) >= 0):
            return False
    return True


def triangulate(P: Polygon) -> Triangulation:
    """Deterministic ear clipping: lowest-index valid ear first."""
    n = P.n
    if n == 3:
        return Triangulation(P, ((0, 1, 2),), ())
    active = list(range(n))
    triangles: list[tuple[int, int, int]] = []
    diagonals: list[tuple[int, int]] = []
    while len(active) > 3:
        clipped = False
        for pos in range(len(active)):
            ib = active[pos]
            ia = active[pos - 1]
            ic = active[(pos + 1) % len(active)]
            if orientation(P.vertex(ia), P.vertex(ib), P.vertex(ic)) <= 0:
                continue
            if not _ear_empty(P, active, ia, ib, ic):
                continue
            triangles.append((ia, ib, ic))
            diagonals.append((min(ia, ic), max(ia, ic)))
            active.pop(pos)
            clipped = True
            break
        if not clipped:
            raise ConstructionInvariantError("no ear found; polygon not simple?")
    ia, ib, ic = active
    if orientation(P.vertex(ia), P.vertex(ib), P.vertex(ic)) <= 0:
        raise ConstructionInvariantError("final triangle not CCW")
    triangles.append((ia, ib, ic))
    return Triangulation(P, tuple(triangles), tuple(diagonals))


def dual_tree(T: Triangulation) -> DualTree:
    by_edge: dict[tuple[int, int], list[int]] = {}
    for ti, tri in enumerate(T.triangles):
        for k in range(3):
            a, b = tri[k], tri[(k + 1) % 3]
            key = (min(a, b), max(a, b))
            by_edge.setdefault(key, []).append(ti)
    edges = []
    for key, tris in by_edge.items():
        if len(tris) == 2:
            edges.append((tris[0], tris[1], key))
        elif len(tris) > 2:
            raise ConstructionInvariantError("diagonal shared by >2 triangles")
    edges.sort()
    tree = DualTree(len(T.triangles), tuple(edges))
    if len(edges) != tree.n_nodes - 1:
        raise ConstructionInvariantError("dual graph is not a tree")
    return tree


def _component_nodes(G: DualTree, removed: set[tuple[int, int]]) -> list[set[int]]:
    adj: dict[int, list[int]] = {i: [] for i in range(G.n_nodes)}
    for t1, t2, _ in G.edges:
        if (min(t1, t2), max(t1, t2)) in removed:
            continue
        adj[t1].append(t2)
        adj[t2].append(t1)
    seen: set[int] = set()
    comps = []
    for start in range(G.n_nodes):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def stitch_component(T: Triangulation, nodes: set[int]) -> Polygon:
    """Union polygon of a connected set of triangulation triangles."""
    # Boundary = directed edges appearing exactly once across the component.
    once: dict[tuple[int, int], None] = {}
    for ti in nodes:
        a, b, c = T.triangles[ti]
        for u, v in ((a, b), (b, c), (c, a)):
            if (v, u) in once:
                del once[(v, u)]
            else:
                once[(u, v)] = None
    succ = {u: v for (u, v) in once}
    if len(succ) != len(once):
        raise ConstructionInvariantError("component boundary pinches at a vertex")
    start = next(iter(succ))
    ring = [start]
    cur = succ[start]
    while cur != start:
        ring.append(cur)
        cur = succ[cur]
    if len(ring) != len(once):
        raise ConstructionInvariantError("component boundary is not a single cycle")
    pts = [T.polygon.vertex(i) for i in ring]
    return _trusted_polygon(pts)


def decomposition_from_edges(
    T: Triangulation,
    G: DualTree,
    E: set[tuple[int, int]],
) -> list[tuple[Polygon, list[Segment]]]:
    """Polygons of the decomposition induced by deleting dual edges E.

    Each entry pairs the component polygon with the diagonals of E incident
    to that component.
    """
    removed = {(min(a, b), max(a, b)) for a, b in E}
    diag_of = {(min(t1, t2), max(t1, t2)): d for t1, t2, d in G.edges}
    comps = _component_nodes(G, removed)
    out = []
    for comp in comps:
        poly = stitch_component(T, comp)
        incident = []
        for e in sorted(removed):
            if (e[0] in comp) != (e[1] in comp):
                incident.append(T.diagonal_segment(diag_of[e]))
        out.append((poly, incident))
    return out


def node_component(comps: list[set[int]], node: int) -> int:
    for i, c in enumerate(comps):
        if node in c:
            return i
    raise KeyError(node)
