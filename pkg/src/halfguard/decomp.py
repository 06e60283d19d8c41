"""Combinatorial edge-selection lemmas on trees and their polygon corollaries.

The tree operations are purely combinatorial and follow the constructive
proofs step by step; the polygon operations apply them to triangulation dual
trees.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConstructionInvariantError, PreconditionViolated
from .geometry import Polygon, Segment
from .triangulation import (
    DualTree,
    Triangulation,
    dual_tree,
    stitch_component,
    triangulate,
)

Edge = tuple  # normalized (min, max) node pair


def norm_edge(a, b) -> Edge:
    return (a, b) if a < b else (b, a)


def _adjacency(nodes, edges) -> dict:
    adj = {x: [] for x in nodes}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    for x in adj:
        adj[x].sort()
    return adj


def _component(adj: dict, start, blocked_edges: set) -> set:
    comp = {start}
    stack = [start]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if norm_edge(x, y) in blocked_edges or y in comp:
                continue
            comp.add(y)
            stack.append(y)
    return comp


def odd_odd_edge(nodes, edges, x) -> Edge:
    """Edge incident to x whose removal leaves two odd components.

    Requires an even node count and deg(x) in {1, 2}.
    """
    nodes = sorted(nodes)
    if len(nodes) % 2 != 0:
        raise PreconditionViolated("tree size must be even")
    adj = _adjacency(nodes, edges)
    nbrs = adj[x]
    if len(nbrs) == 1:
        return norm_edge(x, nbrs[0])
    if len(nbrs) != 2:
        raise PreconditionViolated("node degree must be 1 or 2")
    e1 = norm_edge(x, nbrs[0])
    e2 = norm_edge(x, nbrs[1])
    side1 = _component(adj, nbrs[0], {e1, e2})
    if len(side1) % 2 == 1:
        return e1
    return e2


def _rooted(adj: dict, root) -> tuple[dict, dict]:
    parent = {root: None}
    depth = {root: 0}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in parent:
                parent[y] = x
                depth[y] = depth[x] + 1
                stack.append(y)
    return parent, depth


def quad_pent_edge(nodes, edges) -> tuple[Edge, frozenset]:
    """Edge whose removal leaves a component of 2 or 3 nodes, plus that component.

    Root at the smallest leaf; descend per the proof's case analysis
    (path case, then deepest degree-3 node with its two leaf descendants).
    """
    nodes = sorted(nodes)
    if len(nodes) < 3:
        raise PreconditionViolated("need at least 3 nodes")
    adj = _adjacency(nodes, edges)
    if any(len(adj[x]) > 3 for x in nodes):
        raise PreconditionViolated("degree must be at most 3")
    root = min(x for x in nodes if len(adj[x]) == 1)
    parent, depth = _rooted(adj, root)
    deg3 = [x for x in nodes if len(adj[x]) == 3]
    if not deg3:
        maxd = max(depth.values())
        y = min(v for v in nodes if depth[v] == maxd)
        x = parent[y]
        return norm_edge(x, parent[x]), frozenset({x, y})
    maxd = max(depth[v] for v in deg3)
    x = min(v for v in deg3 if depth[v] == maxd)
    leaves_below = sorted(v for v in nodes
                          if len(adj[v]) == 1 and _is_descendant(parent, v, x))
    if len(leaves_below) != 2:
        raise ConstructionInvariantError("degree-3 node must have two leaf descendants")
    for y in leaves_below:
        z = parent[y]
        if len(adj[z]) == 2:
            return norm_edge(z, parent[z]), frozenset({z, y})
    return norm_edge(x, parent[x]), frozenset({x, *leaves_below})


def _is_descendant(parent: dict, v, x) -> bool:
    while v is not None:
        if v == x:
            return True
        v = parent[v]
    return False


def pent_hub_edges(nodes, edges) -> tuple[set, frozenset, list[frozenset]]:
    """Edge set E with components: one of size 3 plus even-sized attachments.

    Returns (E, hub_component, attachment_components); every edge of E joins
    an attachment to the hub. Follows the inductive proof (peel a 2- or
    3-component, recurse, reattach).
    """
    nodes = sorted(nodes)
    n = len(nodes)
    if n < 3 or n % 2 == 0:
        raise PreconditionViolated("tree size must be odd and >= 3")
    adj = _adjacency(nodes, edges)
    if any(len(adj[x]) > 3 for x in nodes):
        raise PreconditionViolated("degree must be at most 3")
    if n == 3:
        return set(), frozenset(nodes), []
    e, c0 = quad_pent_edge(nodes, edges)
    rest = frozenset(nodes) - c0
    rest_edges = [ed for ed in (norm_edge(*x) for x in edges)
                  if ed != e and ed[0] in rest and ed[1] in rest]
    if len(c0) == 3:
        return {e}, c0, [rest]
    sub_E, sub_hub, sub_atts = pent_hub_edges(rest, rest_edges)
    t = e[0] if e[0] in rest else e[1]
    if t in sub_hub:
        atts = sub_atts + [c0]
        E = sub_E | {e}
    else:
        atts = [a | c0 if t in a else a for a in sub_atts]
        E = sub_E
    if len(E) > 5:
        raise ConstructionInvariantError("more than five attachments")
    atts = sorted((frozenset(a) for a in atts), key=lambda s: min(s))
    return E, sub_hub, atts


@dataclass(frozen=True)
class PentHub:
    """Pentagon hub decomposition of an odd-sided polygon."""

    hub: Polygon
    attachments: tuple[tuple[Polygon, Segment], ...]  # (polygon, shared diagonal)

    @property
    def k(self) -> int:
        return len(self.attachments)


def _dual_setup(P: Polygon) -> tuple[Triangulation, DualTree, list, dict]:
    T = triangulate(P)
    G = dual_tree(T)
    tree_edges = [norm_edge(t1, t2) for t1, t2, _ in G.edges]
    diag_of = {norm_edge(t1, t2): d for t1, t2, d in G.edges}
    return T, G, tree_edges, diag_of


def _triangle_of_side(T: Triangulation, s: int) -> int:
    n = T.polygon.n
    want = (min(s, (s + 1) % n), max(s, (s + 1) % n))
    for ti, tri in enumerate(T.triangles):
        for k in range(3):
            a, b = tri[k], tri[(k + 1) % 3]
            if (min(a, b), max(a, b)) == want:
                return ti
    raise ConstructionInvariantError("side missing from triangulation")


def odd_odd_diagonal(P: Polygon, s: int) -> tuple[Segment, int]:
    """Diagonal through an endpoint of side s splitting P into odd-sided pieces.

    Returns the diagonal with the shared endpoint's vertex index.
    """
    if P.n % 2 != 0 or P.n < 4:
        raise PreconditionViolated("polygon must be even-sided, n >= 4")
    T, G, tree_edges, diag_of = _dual_setup(P)
    t_star = _triangle_of_side(T, s)
    e = odd_odd_edge(range(G.n_nodes), tree_edges, t_star)
    d = diag_of[e]
    endpoints = {s % P.n, (s + 1) % P.n}
    shared = endpoints & set(d)
    if not shared:
        raise ConstructionInvariantError("diagonal misses the side's endpoints")
    shared_idx = min(shared)
    other_idx = d[0] if d[1] == shared_idx else d[1]
    return Segment(P.vertex(shared_idx), P.vertex(other_idx)), shared_idx


def quad_pent_diagonal(P: Polygon) -> Segment:
    """A diagonal splitting off a quadrilateral or pentagon."""
    if P.n < 5:
        raise PreconditionViolated("need n >= 5")
    T, G, tree_edges, diag_of = _dual_setup(P)
    e, _ = quad_pent_edge(range(G.n_nodes), tree_edges)
    return T.diagonal_segment(diag_of[e])


def pent_hub(P: Polygon) -> PentHub:
    """Decompose an odd-sided polygon into a pentagon hub plus even attachments."""
    if P.n < 5 or P.n % 2 == 0:
        raise PreconditionViolated("polygon must be odd-sided, n >= 5")
    T, G, tree_edges, diag_of = _dual_setup(P)
    E, hub_nodes, att_sets = pent_hub_edges(range(G.n_nodes), tree_edges)
    hub_poly = stitch_component(T, set(hub_nodes))
    if hub_poly.n != 5:
        raise ConstructionInvariantError("hub is not a pentagon")
    attachments = []
    for comp in att_sets:
        poly = stitch_component(T, set(comp))
        link = [e for e in E if (e[0] in comp) != (e[1] in comp)]
        if len(link) != 1:
            raise ConstructionInvariantError("attachment must join the hub once")
        seg = T.diagonal_segment(diag_of[link[0]])
        if poly.n % 2 != 0:
            raise ConstructionInvariantError("attachment polygon must be even-sided")
        attachments.append((poly, seg))
    total = sum(p.n for p, _ in attachments)
    if attachments and total != P.n + 2 * len(attachments) - 5:
        raise ConstructionInvariantError("side-count bookkeeping failed")
    return PentHub(hub_poly, tuple(attachments))
