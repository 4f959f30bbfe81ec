"""Perfect matchings of snake graphs and good perfect matchings of band graphs.

Snake-graph matchings are enumerated by a sequential sweep over the tile
sequence (partial matchings with a frontier of still-open vertices).  Band
graphs use the lifting definition of good matchings: P is good when, for
some interior edge e, lifting P to the snake graph cut at e and adding one
or both copies of e gives a perfect matching of the cut.

Heights are enclosed-tile sets of the symmetric difference P- (-) P,
computed by even-odd ray casting from tile centers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .graphs import (MINUS, PLUS, BandGraph, EdgeRef, SnakeError, SnakeGraph,
                     Vertex, flip_sign)

Matching = frozenset  # of EdgeRef


# -- generic exact enumeration ------------------------------------------


def _enumerate_matchings(vertices: list, edges: list[tuple]) -> list[frozenset]:
    """All perfect matchings of a multigraph given as (edge_id, a, b) triples.

    Vertices are processed in sorted order, which for snake graphs walks the
    tile sequence southwest to northeast.
    """
    incident: dict = {v: [] for v in vertices}
    for eid, a, b in edges:
        if a == b:
            continue  # loops are never matchable
        incident[a].append((eid, b))
        incident[b].append((eid, a))
    order = sorted(vertices)
    out: list[frozenset] = []

    def rec(i: int, covered: set, chosen: list) -> None:
        while i < len(order) and order[i] in covered:
            i += 1
        if i == len(order):
            out.append(frozenset(chosen))
            return
        v = order[i]
        for eid, w in incident[v]:
            if w in covered:
                continue
            covered.add(v)
            covered.add(w)
            chosen.append(eid)
            rec(i + 1, covered, chosen)
            chosen.pop()
            covered.discard(v)
            covered.discard(w)

    rec(0, set(), [])
    return out


@lru_cache(maxsize=100000)
def _enumerate_matchings_cached(g: SnakeGraph) -> tuple:
    if g.is_edge:
        return (frozenset([g.edge_ref()]),)
    verts = g.vertices()
    edges = [(e, e.a, e.b) for e in g.edges()]
    found = _enumerate_matchings(verts, edges)
    return tuple(sorted(found, key=lambda m: sorted(m)))


def enumerate_matchings(g: SnakeGraph) -> list[Matching]:
    """All perfect matchings of a snake graph, canonically ordered."""
    return list(_enumerate_matchings_cached(g))


def count_matchings(g) -> int:
    if isinstance(g, BandGraph):
        return len(enumerate_good_matchings(g))
    return len(enumerate_matchings(g))


# -- minimal / maximal matchings ----------------------------------------


def boundary_matchings(g: SnakeGraph) -> tuple[Matching, Matching]:
    """The two boundary-only matchings, as (minimal, maximal).

    The boundary of a snake graph is a single cycle; its two alternating
    matchings are the boundary-only perfect matchings.  The minimal one is
    the one whose SW member has canonical sign '-'.
    """
    if g.is_edge:
        m = frozenset([g.edge_ref()])
        return m, m
    boundary = g.boundary_edges()
    adj: dict[Vertex, list[EdgeRef]] = {}
    for e in boundary:
        adj.setdefault(e.a, []).append(e)
        adj.setdefault(e.b, []).append(e)
    start = min(adj)
    cycle = []
    prev, cur = None, start
    while True:
        e = next(x for x in adj[cur] if x is not prev)
        cycle.append(e)
        cur = e.b if e.a == cur else e.a
        prev = e
        if cur == start:
            break
    m_even = frozenset(cycle[0::2])
    m_odd = frozenset(cycle[1::2])
    s_edge = g.tile_edge(1, "S")
    w_edge = g.tile_edge(1, "W")
    for m in (m_even, m_odd):
        swm = [e for e in (s_edge, w_edge) if e in m]
        if len(swm) == 1 and g.sign(swm[0]) == MINUS:
            other = m_odd if m is m_even else m_even
            return m, other
    raise AssertionError("boundary matchings must split the SW pair")


def minimal_matching(g: SnakeGraph, flipped: bool = False) -> Matching:
    lo, hi = boundary_matchings(g)
    return hi if flipped else lo


def maximal_matching(g: SnakeGraph, flipped: bool = False) -> Matching:
    lo, hi = boundary_matchings(g)
    return lo if flipped else hi


# -- heights -------------------------------------------------------------


def enclosed_tiles(g: SnakeGraph, edge_set: Iterable[EdgeRef]) -> frozenset[int]:
    """Tiles whose centers are enclosed by the given edge union (even-odd rule)."""
    vert = [e for e in edge_set if not e.horizontal]
    out = []
    for i, (cx, cy) in enumerate(g.cells(), start=1):
        hits = sum(1 for e in vert if e.a[0] > cx and e.a[1] == cy)
        if hits % 2 == 1:
            out.append(i)
    return frozenset(out)


def height_tiles(g: SnakeGraph, P: Matching, flipped: bool = False) -> frozenset[int]:
    """Index set J of the height monomial y(P) = prod_{j in J} y_j."""
    pm = minimal_matching(g, flipped)
    return enclosed_tiles(g, pm ^ P)


# -- band graphs: good matchings ------------------------------------------


@dataclass(frozen=True)
class CutLift:
    """A good matching's lift at one cut: the cut snake and the lifted matching."""

    cut_index: int
    snake: SnakeGraph
    lifted: Matching
    tile_map: tuple[int, ...]  # cut tile k (1-indexed) -> band tile index


def _band_cut(band: BandGraph, i: int):
    snake, copy_sw, copy_ne, edge_map = band.cut_at(i)
    # tile k of the cut snake covers band tile ((i + k - 1) mod d) + 1
    d = band.d
    tile_map = tuple(((i + k - 1) % d) + 1 for k in range(1, d + 1))
    return snake, copy_sw, copy_ne, edge_map, tile_map


def _is_band_matching(band: BandGraph, P: frozenset[EdgeRef]) -> bool:
    need = set(band.vertices())
    seen = set()
    for e in P:
        a, b = band.edge_endpoints(e)
        if a == b or a in seen or b in seen:
            return False
        seen.add(a)
        seen.add(b)
    return seen == need


_GOODS_CACHE: dict = {}


def good_matching_lifts(band: BandGraph) -> dict[Matching, dict[int, CutLift]]:
    """Every good perfect matching with all of its cut lifts, keyed by matching."""
    cached = _GOODS_CACHE.get(band)
    if cached is not None:
        return cached
    goods: dict[Matching, dict[int, CutLift]] = {}
    for i in range(1, band.d + 1):
        snake, ca, cb, edge_map, tile_map = _band_cut(band, i)
        cls = band.interior_edge(i)
        for Q in enumerate_matchings(snake):
            has_a, has_b = ca in Q, cb in Q
            if not (has_a or has_b):
                continue
            proj = [edge_map[e] for e in Q if e not in (ca, cb)]
            if has_a and has_b:
                proj.append(cls)
            P = frozenset(proj)
            if len(P) != len(proj) or not _is_band_matching(band, P):
                continue
            goods.setdefault(P, {})[i] = CutLift(i, snake, Q, tile_map)
    if len(_GOODS_CACHE) > 20000:
        _GOODS_CACHE.clear()
    _GOODS_CACHE[band] = goods
    return goods


def enumerate_good_matchings(band: BandGraph) -> list[Matching]:
    goods = good_matching_lifts(band)
    return sorted(goods, key=lambda m: sorted(m))


def band_heights_cut(band: BandGraph) -> int:
    """Least interior-edge index at which every good matching lifts."""
    goods = good_matching_lifts(band)
    for i in range(1, band.d + 1):
        if all(i in lifts for lifts in goods.values()):
            return i
    raise SnakeError("no single cut witnesses every good matching")


def band_height_tiles(band: BandGraph, P: Matching, flipped: bool = False,
                      cut_index: Optional[int] = None) -> frozenset[int]:
    """Enclosed band-tile index set of a good matching, in the witnessing cut."""
    goods = good_matching_lifts(band)
    if P not in goods:
        raise SnakeError("not a good perfect matching of the band graph")
    if cut_index is None:
        cut_index = band_heights_cut(band)
    lift = goods[P].get(cut_index)
    if lift is None:
        raise SnakeError(f"matching does not lift at cut {cut_index}")
    tiles = height_tiles(lift.snake, lift.lifted, flipped)
    return frozenset(lift.tile_map[k - 1] for k in tiles)


# -- rank generating function ---------------------------------------------


def rank_sequence(g) -> list[int]:
    """Multiset of height ranks, one per (good) matching, sorted."""
    if isinstance(g, BandGraph):
        cut = band_heights_cut(g)
        goods = good_matching_lifts(g)
        return sorted(len(height_tiles(goods[P][cut].snake, goods[P][cut].lifted))
                      for P in goods)
    return sorted(len(height_tiles(g, P)) for P in enumerate_matchings(g))


def rank_generating_function(g):
    """Coefficient list a_0..a_top of sum_i a_i y^i."""
    ranks = rank_sequence(g)
    top = max(ranks) if ranks else 0
    coeffs = [0] * (top + 1)
    for r in ranks:
        coeffs[r] += 1
    return coeffs


# -- edge order and switching positions -----------------------------------


def edge_order_key(g: SnakeGraph, e: EdgeRef):
    """Key for the paper's partial order: first containing tile, then SW < NE."""
    tiles = g.tiles_of_edge(e)
    if not tiles:
        raise SnakeError("edge not in graph")
    k = min(tiles)
    side = e.side_of(g.cell(k))
    return (k, 0 if side in ("S", "W") else 1, e)
