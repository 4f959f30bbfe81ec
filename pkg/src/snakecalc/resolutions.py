"""Resolutions of crossings, self-crossings and graftings.

Every construction assembles its output graphs from traversed pieces of the
input factors per the case tables: the 34-side exchanges tails through the
overlap (conserving tiles), the 56-side drops the overlaps and trims by
sign rules, possibly degenerating to single edges, the empty union (the
ring unit), its negative, -2, or 0.

The ring element terms keep label provenance: output slots reference input
slots, and the construction records which slots it identifies, so that the
full-label Laurent identities can be verified exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .factors import (Assembled, Factor, Piece, ViewFactor, assemble_snake,
                      band_view, close_band, edge_factor, fresh_factor,
                      snake_view, trim_front, trim_tail)
from .graphs import (MINUS, PLUS, BandGraph, EdgeRef, SnakeError, SnakeGraph,
                     bracelet, flip_sign)
from .matchings import count_matchings, enumerate_good_matchings, \
    enumerate_matchings
from .overlaps import OPPOSITE, SAME, Overlap


# -- ring elements -----------------------------------------------------------


class RingElement:
    """Formal integer combination of multisets of graph factors.

    The empty multiset is the unit; terms combine when their factors'
    label keys coincide.
    """

    def __init__(self, terms=None):
        # key -> [coeff, factors-tuple]
        self.terms: dict = {}
        if terms:
            for coeff, factors in terms:
                self._add(coeff, tuple(factors))

    def _add(self, coeff: int, factors: tuple):
        if coeff == 0:
            return
        key = tuple(sorted(f.label_key() for f in factors))
        entry = self.terms.get(key)
        if entry is None:
            self.terms[key] = [coeff, factors]
        else:
            entry[0] += coeff
            if entry[0] == 0:
                del self.terms[key]

    @staticmethod
    def const(c: int) -> "RingElement":
        return RingElement([(c, ())])

    @staticmethod
    def of(*factors: Factor, coeff: int = 1) -> "RingElement":
        return RingElement([(coeff, factors)])

    @staticmethod
    def zero() -> "RingElement":
        return RingElement()

    def __add__(self, other: "RingElement") -> "RingElement":
        out = RingElement()
        for c, fs in self:
            out._add(c, fs)
        for c, fs in other:
            out._add(c, fs)
        return out

    def __neg__(self) -> "RingElement":
        return RingElement([(-c, fs) for c, fs in self])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "RingElement") -> "RingElement":
        out = RingElement()
        for c1, f1 in self:
            for c2, f2 in other:
                out._add(c1 * c2, f1 + f2)
        return out

    def scale(self, c: int) -> "RingElement":
        return RingElement([(c * c0, fs) for c0, fs in self])

    def __iter__(self):
        for coeff, factors in self.terms.values():
            yield coeff, factors

    def __len__(self):
        return len(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def match_count(self) -> int:
        total = 0
        for coeff, factors in self:
            prod = 1
            for f in factors:
                prod *= factor_count(f)
            total += coeff * prod
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for coeff, factors in self:
            names = "*".join(_factor_name(f) for f in factors) or "1"
            bits.append(f"{coeff:+d}*{names}")
        return " ".join(bits)


def _factor_name(f: Factor) -> str:
    if f.is_edge:
        return "edge"
    if f.is_band:
        return f"band({f.graph.cut.dirs or 'o'},{f.graph.glue_side})"
    return f"snake({f.graph.dirs})" if f.graph.dirs else "tile"


def factor_count(f: Factor) -> int:
    if f.is_edge:
        return 1
    if f.is_band:
        return len(enumerate_good_matchings(f.graph))
    return len(enumerate_matchings(f.graph))


@dataclass
class Resolution:
    kind: str
    lhs: RingElement
    term34: RingElement
    term56: RingElement
    overlap: Optional[Overlap]
    inputs: tuple
    merges: list = field(default_factory=list)
    geo_merges: list = field(default_factory=list)

    @property
    def rhs(self) -> RingElement:
        return self.term34 + self.term56

    def counts(self) -> tuple[int, int, int]:
        return (self.lhs.match_count(), self.term34.match_count(),
                self.term56.match_count())


# -- small helpers -------------------------------------------------------------


def _free_ne(v: ViewFactor, i: int) -> EdgeRef:
    """The NE edge of tile i that is not the interior edge e_i (or glue copy)."""
    g = v.snake
    blocked = set()
    if i < g.d:
        blocked.add(g.interior(i))
    if v.glue_ne is not None and i == g.d:
        blocked.add(v.glue_ne)
    for side in ("N", "E"):
        e = g.tile_edge(i, side)
        if e not in blocked:
            return e
    raise SnakeError("no free NE edge")


def _free_sw(v: ViewFactor, i: int) -> EdgeRef:
    g = v.snake
    blocked = set()
    if i > 1:
        blocked.add(g.interior(i - 1))
    if v.glue_sw is not None and i == 1:
        blocked.add(v.glue_sw)
    for side in ("S", "W"):
        e = g.tile_edge(i, side)
        if e not in blocked:
            return e
    raise SnakeError("no free SW edge")


def _edge_on_tile(v: ViewFactor, edge: EdgeRef) -> EdgeRef:
    return edge


def _interior(v: ViewFactor, i: int) -> EdgeRef:
    return v.snake.interior(i)


def _isign(v: ViewFactor, i: int) -> str:
    return v.snake.interior_sign(i)


def _piece_factor(v: ViewFactor, res, rev: bool = False):
    """Materialize a trim result: a tile range (maybe reversed) or an edge."""
    if res[0] == "edge":
        slot = v.factor.edge_slots.get(res[1])
        return edge_factor(slot)
    _, lo, hi = res
    asm = assemble_snake([Piece(v, lo, hi, rev=rev)])
    return asm.factor


def _range_or_empty(v, lo, hi, rev=False) -> Optional[Piece]:
    if lo > hi:
        return None
    return Piece(v, lo, hi, rev=rev)


def _close_chain(pieces: list[Piece], glue_src_edge: EdgeRef,
                 expected_src_partner: Optional[EdgeRef] = None) -> Assembled:
    """Assemble pieces and close into a band along a source edge of the
    chain's first tile (translated into assembled coordinates)."""
    asm = assemble_snake(pieces)
    first = pieces[0]
    src_tile = first.tiles()[0]
    side = glue_src_edge.side_of(first.vf.snake.cell(src_tile))
    if first.rev:
        side = {"S": "N", "N": "S", "W": "E", "E": "W"}[side]
    glue_new = asm.factor.graph.tile_edge(1, side)
    expected_new = None
    if expected_src_partner is not None:
        last = pieces[-1]
        lt = last.tiles()[-1]
        pside = expected_src_partner.side_of(last.vf.snake.cell(lt))
        if last.rev:
            pside = {"S": "N", "N": "S", "W": "E", "E": "W"}[pside]
        expected_new = asm.factor.graph.tile_edge(asm.factor.graph.d, pside)
    return close_band(asm, glue_new, expected_partner=expected_new)


# -- pair resolutions -----------------------------------------------------------


def _normalized_pair(a, b, o: Overlap):
    from .overlaps import normalized_pair_views

    return normalized_pair_views(a, b, o)


def resolve_snake_snake(a, b, o: Overlap) -> Resolution:
    fa, fb, v1, v2, o = _normalized_pair(a, b, o)
    d1, d2 = v1.d, v2.d
    s, t, s2, t2 = o.s, o.t, o.s2, o.t2
    merges: list = []

    # G3: initial part of 1, overlap, terminal part of 2
    if t2 < d2:
        e_j = _interior(v2, t2)
        side = e_j.side_of(v2.snake.cell(t2))
        p1 = Piece(v1, 1, t, j_out=v1.snake.tile_edge(t, side))
        p2 = Piece(v2, t2 + 1, d2, j_in=e_j)
        g3 = assemble_snake([p1, p2])
    else:
        g3 = assemble_snake([Piece(v1, 1, t)])
    # G4: initial part of 2, overlap, terminal part of 1
    if t < d1:
        e_j = _interior(v1, t)
        side = e_j.side_of(v1.snake.cell(t))
        p1 = Piece(v2, 1, t2, j_out=v2.snake.tile_edge(t2, side))
        p2 = Piece(v1, t + 1, d1, j_in=e_j)
        g4 = assemble_snake([p1, p2])
    else:
        g4 = assemble_snake([Piece(v2, 1, t2)])
    merges += g3.merges + g4.merges

    # G5: before-parts, second reversed
    if s > 1 and s2 > 1:
        p1 = Piece(v1, 1, s - 1, j_out=_free_ne(v1, s - 1))
        p2 = Piece(v2, 1, s2 - 1, rev=True, j_in=_free_ne(v2, s2 - 1))
        asm = assemble_snake([p1, p2])
        g5 = asm.factor
        merges += asm.merges
    elif s2 > 1:
        g5 = _piece_factor(v2, trim_tail(v2, 1, s2 - 1, _isign(v2, s2 - 1)),
                           rev=True)
    elif s > 1:
        g5 = _piece_factor(v1, trim_tail(v1, 1, s - 1, _isign(v1, s - 1)))
    else:
        raise SnakeError("not a crossing configuration (s = s2 = 1)")

    # G6: after-parts, second reversed and first
    if t < d1 and t2 < d2:
        p1 = Piece(v2, t2 + 1, d2, rev=True, j_out=_free_sw(v2, t2 + 1))
        p2 = Piece(v1, t + 1, d1, j_in=_free_sw(v1, t + 1))
        asm = assemble_snake([p1, p2])
        g6 = asm.factor
        merges += asm.merges
    elif t < d1:
        g6 = _piece_factor(v1, trim_front(v1, t + 1, d1, _isign(v1, t)))
    elif t2 < d2:
        g6 = _piece_factor(v2, trim_front(v2, t2 + 1, d2, _isign(v2, t2)),
                           rev=True)
    else:
        raise SnakeError("not a crossing configuration (t = d1, t2 = d2)")

    return _finalize("snake_snake", RingElement.of(fa, fb),
                     RingElement.of(g3.factor, g4.factor),
                     RingElement.of(g5, g6), o, (fa, fb), merges)


def resolve_snake_band(a, b, o: Overlap) -> Resolution:
    fa, fb, v1, v2, o = _normalized_pair(a, b, o)
    d1, d2 = v1.d, v2.d
    t2 = o.t2
    whole = o.whole_graph
    s, t = (o.ext_s, o.ext_t) if whole else (o.s, o.t)
    merges: list = []

    # G34: G1[1,s-1] u G2-cut u G1[s,d]
    glue_side = v2.glue_sw.side_of(v2.snake.cell(1))
    pieces = []
    if s > 1:
        pieces.append(Piece(v1, 1, s - 1, j_out=_interior(v1, s - 1)))
    pieces.append(Piece(v2, 1, d2,
                        j_in=_free_sw(v2, 1) if s > 1 else None,
                        j_out=v2.glue_ne))
    pieces.append(Piece(v1, s, d1, j_in=v1.snake.tile_edge(s, glue_side)))
    g34 = assemble_snake(pieces)
    merges += g34.merges

    # G56
    lhs = RingElement.of(fa, fb)
    t34 = RingElement.of(g34.factor)
    if whole:
        if s <= 1 or t >= d1:
            raise SnakeError("whole-band overlap must sit strictly inside")
        f5 = assemble_snake([Piece(v1, 1, s - 1)]).factor
        f6 = assemble_snake([Piece(v1, t + 1, d1)]).factor
        t56 = RingElement.of(f5, f6)
        return _finalize("snake_band", lhs, t34, t56, o, (fa, fb), merges)
    try:
        t56 = _snake_band_56(v1, v2, o, merges)
        return _finalize("snake_band", lhs, t34, t56, o, (fa, fb), merges)
    except SnakeError:
        pass
    for cand in _snake_band_56_candidates(v1, v2, o, lhs, t34):
        try:
            return _finalize("snake_band", lhs, t34, cand, o, (fa, fb),
                             merges)
        except SnakeError:
            continue
    raise SnakeError("snake_band: no consistent resolution")


def _snake_band_56(v1: ViewFactor, v2: ViewFactor, o: Overlap,
                   merges: list) -> RingElement:
    d1, d2 = v1.d, v2.d
    s, t, t2 = o.s, o.t, o.t2
    sigma_b = v2.snake.sign(v2.glue_sw)
    lo_mid, hi_mid = t2 + 1, d2
    alive = True
    if s == 1:
        res = trim_tail(v2, lo_mid, hi_mid, sigma_b)
        if res[0] == "edge":
            alive = False
        else:
            lo_mid, hi_mid = res[1], res[2]
    if t == d1 and alive:
        res = trim_front(v2, lo_mid, hi_mid, _isign(v2, t2))
        if res[0] == "edge":
            alive = False
            if s > 1:
                # collapse toward the initial part of G1
                asm = assemble_snake([Piece(v1, 1, s - 1)])
                fac = asm.factor
                return RingElement.of(fac)
        else:
            lo_mid, hi_mid = res[1], res[2]
    if s == 1 and t == d1 and not alive:
        # case 4(c): the unique boundary edge of SW(G2)
        return RingElement.of(edge_factor(
            v2.factor.edge_slots.get(_free_sw(v2, 1))))
    pieces = []
    if s > 1:
        pieces.append(Piece(v1, 1, s - 1, j_out=_free_ne(v1, s - 1)))
    if alive:
        pieces.append(Piece(v2, lo_mid, hi_mid, rev=True,
                            j_in=_free_ne(v2, hi_mid) if s > 1 else None,
                            j_out=_free_sw(v2, lo_mid) if t < d1 else None))
    if t < d1:
        pieces.append(Piece(v1, t + 1, d1, j_in=_free_sw(v1, t + 1)))
    if not pieces:
        raise SnakeError("snake-band 56 degenerated to nothing")
    if not alive and s > 1 and t < d1:
        pieces = [Piece(v1, 1, s - 1, j_out=_free_ne(v1, s - 1)),
                  Piece(v1, t + 1, d1, j_in=_free_sw(v1, t + 1))]
    asm = assemble_snake(pieces)
    merges += asm.merges
    return RingElement.of(asm.factor)


def _snake_band_56_candidates(v1, v2, o, lhs, t34):
    """Fallback 56 shapes for snake-band crossings."""
    d1, d2 = v1.d, v2.d
    need = lhs.match_count() - t34.match_count()
    out = []
    if need == 0:
        out.append(RingElement.zero())
        return out
    sign = 1 if need > 0 else -1
    n = abs(need)
    if n == 1:
        for e in (_free_sw(v2, 1), _free_ne(v2, d2)):
            out.append(RingElement.of(
                edge_factor(v2.factor.edge_slots.get(e)), coeff=sign))
        g1 = v1.snake
        for side in ("S", "W"):
            out.append(RingElement.of(edge_factor(
                v1.factor.edge_slots.get(g1.tile_edge(1, side))),
                coeff=sign))
    # single intervals of either participant
    for v in (v1, v2):
        for a in range(1, v.d + 1):
            for b in range(a, v.d + 1):
                fac0 = assemble_snake([Piece(v, a, b)]).factor
                if factor_count(fac0) != n:
                    continue
                for fl in (False, True):
                    fac = fac0.clone()
                    fac.flip = fl
                    out.append(RingElement.of(fac, coeff=sign))
    # G1-initial ++ reversed band window ++ G1-tail assemblies
    s, t = o.s, o.t
    for lo in range(o.t2 + 1, d2 + 1):
        for hi in range(lo, d2 + 1):
            pieces = []
            if s > 1:
                pieces.append(Piece(v1, 1, s - 1, j_out=_free_ne(v1, s - 1)))
            pieces.append(Piece(v2, lo, hi, rev=True,
                                j_in=_free_ne(v2, hi) if s > 1 else None,
                                j_out=_free_sw(v2, lo) if t < d1 else None))
            if t < d1:
                pieces.append(Piece(v1, t + 1, d1,
                                    j_in=_free_sw(v1, t + 1)))
            try:
                fac0 = assemble_snake(pieces).factor
            except SnakeError:
                continue
            if factor_count(fac0) != n:
                continue
            for fl in (False, True):
                fac = fac0.clone()
                fac.flip = fl
                out.append(RingElement.of(fac, coeff=sign))
    # a smaller loop can survive the smoothing alongside an arc piece
    snakes = []
    for v in (v1, v2):
        for a in range(1, v.d + 1):
            for b in range(a, v.d + 1):
                snakes.append(assemble_snake([Piece(v, a, b)]).factor)
    g1 = v1.snake
    for side in ("S", "W"):
        snakes.append(edge_factor(
            v1.factor.edge_slots.get(g1.tile_edge(1, side))))
    for band_fac in _band_pool(v2.factor, v2):
        nb = factor_count(band_fac)
        if nb == 0 or n % nb:
            continue
        for fac0 in snakes:
            if factor_count(fac0) != n // nb:
                continue
            for fl in (False, True):
                fac = fac0.clone()
                fac.flip = fl
                out.append(RingElement.of(fac, band_fac, coeff=sign))
    return out


def resolve_band_band(a, b, o: Overlap) -> Resolution:
    fa, fb, v1, v2, o = _normalized_pair(a, b, o)
    d1, d2 = v1.d, v2.d
    t2 = o.t2
    t = o.ext_t if (o.t2 >= d2 and o.ext_t is not None) else o.t
    if t >= d1 and t2 >= d2:
        raise SnakeError("whole-whole band overlap is non-crossing")
    merges: list = []

    g34 = _close_chain([
        Piece(v1, 1, d1, j_out=v1.glue_ne),
        Piece(v2, 1, d2, j_in=_free_sw(v2, 1))], _free_sw(v1, 1))
    merges += g34.merges

    if t2 < d2:
        g56 = _close_chain([
            Piece(v1, t + 1, d1, j_out=_free_ne(v1, d1)),
            Piece(v2, t2 + 1, d2, rev=True, j_in=_free_ne(v2, d2))],
            _free_sw(v1, t + 1))
    else:
        if t + 1 > d1:
            raise SnakeError("band-band overlap leaves no remainder")
        g56 = _close_chain([Piece(v1, t + 1, d1)], _free_sw(v1, t + 1))
    merges += g56.merges
    return _finalize("band_band", RingElement.of(fa, fb),
                     RingElement.of(g34.factor),
                     RingElement.of(g56.factor), o, (fa, fb), merges)


def _free_sw_of_assembled(asm: Assembled) -> EdgeRef:
    g: SnakeGraph = asm.factor.graph
    if g.d >= 2:
        blocked = {g.interior(1)}
    else:
        blocked = set()
    for side in ("S", "W"):
        e = g.tile_edge(1, side)
        if e not in blocked:
            # prefer the side matching the sign of the NE partner; BandGraph
            # picks the partner automatically, so any SW side is structurally
            # fine -- choose the boundary one.
            return e
    raise SnakeError("no SW edge available for band closure")


# -- grafting --------------------------------------------------------------------


def graft_snake_on_band(band_f, snake_f, cut_index: Optional[int] = None
                        ) -> Resolution:
    """Resolution of the empty-overlap crossing of a band graph and a snake
    graph, grafted at the snake's last tile.

    The loop may be presented through any of its cuts; without an explicit
    cut the first one admitting a consistent resolution is used.
    """
    fb = band_f if isinstance(band_f, Factor) else fresh_factor(band_f)
    f1 = snake_f if isinstance(snake_f, Factor) else fresh_factor(snake_f)
    if f1.is_edge:
        return _graft_edge_on_band(fb, f1)
    if cut_index is None:
        cuts = [fb.graph.d] + list(range(1, fb.graph.d))
        last = None
        for c in cuts:
            try:
                return graft_snake_on_band(fb.clone(), f1.clone(), c)
            except SnakeError as e:
                last = e
        raise SnakeError(f"grafting impossible at every cut: {last}")
    vB = band_view(fb, cut_index)
    v1 = snake_view(f1)
    d1, dB = v1.d, vB.d
    eps = _free_sw(vB, 1)
    eps_side = eps.side_of(vB.snake.cell(1))
    delta_side = "N" if eps_side == "S" else "E"
    delta = v1.snake.tile_edge(d1, delta_side)
    # link the band's orientation through the grafting junction
    if vB.snake.sign(eps, vB.factor.flip) != v1.snake.sign(delta, f1.flip):
        fb.flip = not fb.flip
        vB = band_view(fb, cut_index)
    merges: list = []

    # G34 = G1 u (G2 \ succ(e')), e' last interior edge with f = -f(b')
    sigma = flip_sign(vB.snake.sign(vB.glue_ne))
    hi = next((j for j in range(dB - 1, 0, -1) if _isign(vB, j) == sigma),
              None)
    # G56 = G1 u rev(G2 \ pred(e)), e first interior edge with f = -f(b)
    sigma2 = flip_sign(vB.snake.sign(vB.glue_sw))
    lo = next((j + 1 for j in range(1, dB) if _isign(vB, j) == sigma2), None)
    if hi is None or lo is None:
        # only constant sign words (punctured bands) lack both signs
        raise SnakeError("grafting requires an unpunctured band graph")
    asm34 = assemble_snake([Piece(v1, 1, d1, j_out=delta),
                            Piece(vB, 1, hi, j_in=eps)])
    merges += asm34.merges
    delta2 = v1.snake.tile_edge(d1, "N" if delta_side == "E" else "E")
    asm56 = assemble_snake([
        Piece(v1, 1, d1, j_out=delta2),
        Piece(vB, lo, dB, rev=True, j_in=_free_ne(vB, dB))])
    merges += asm56.merges
    t56 = RingElement.of(asm56.factor)
    geo = [(v1.factor.edge_slots[delta2], vB.factor.tile_slots[1]),
           (vB.factor.edge_slots[vB.glue_sw], v1.factor.tile_slots[d1])]
    return _finalize("graft_snake_band", RingElement.of(f1, fb),
                     RingElement.of(asm34.factor), t56, None, (f1, fb),
                     merges, geo_merges=geo)


def _graft_edge_on_band(fb: Factor, f_edge: Factor) -> Resolution:
    """Grafting of a single edge on a band graph (second displayed pair)."""
    vB = band_view(fb, fb.graph.d)
    dB = vB.d
    merges: list = []
    sigma_b = vB.snake.sign(vB.glue_sw)

    # G34 = G2 \ pred(e): e first in Int u NE with f(e) = -f(b)
    res34 = trim_front(vB, 1, dB, flip_sign(sigma_b))
    f34 = _piece_factor(vB, res34)

    # G56 = G2 \ succ(e') \ pred(e), e' last in Int u SW with f = -f(b'),
    # then e first in the remainder's Int u NE with f = +f(b)
    res_a = trim_tail(vB, 1, dB, flip_sign(vB.snake.sign(vB.glue_ne)))
    if res_a[0] == "edge":
        f56 = edge_factor(vB.factor.edge_slots.get(res_a[1]))
    else:
        lo, hi = res_a[1], res_a[2]
        res_b = trim_front(vB, lo, hi, sigma_b)
        f56 = _piece_factor(vB, res_b)
    # the grafted edge's label matches the band's glue edge
    e_slot = f_edge.edge_slots.get(f_edge.graph.edge_ref())
    b_slot = vB.factor.edge_slots.get(vB.glue_sw)
    if e_slot is not None and b_slot is not None and e_slot != b_slot:
        merges.append((e_slot, b_slot))
    return _finalize("graft_edge_band", RingElement.of(f_edge, fb),
                     RingElement.of(f34), RingElement.of(f56), None,
                     (f_edge, fb), merges)


def graft_snake_snake(f1_in, f2_in, delta_side: Optional[str] = None) -> Resolution:
    """Grafting of two snake graphs at the last tile of the first."""
    f1 = f1_in if isinstance(f1_in, Factor) else fresh_factor(f1_in)
    f2 = f2_in if isinstance(f2_in, Factor) else fresh_factor(f2_in)
    v1 = snake_view(f1)
    d1, d2 = f1.graph.d, f2.graph.d
    if delta_side is None:
        delta_side = "N"
    delta = v1.snake.tile_edge(d1, delta_side)
    eps_side = "S" if delta_side == "N" else "W"
    # the second graph's orientation is linked through the junction
    v2 = snake_view(f2)
    eps = v2.snake.tile_edge(1, eps_side)
    if v2.snake.sign(eps, f2.flip) != v1.snake.sign(delta, f1.flip):
        f2.flip = not f2.flip
        v2 = snake_view(f2)
    merges: list = []
    asm = assemble_snake([Piece(v1, 1, d1, j_out=delta),
                          Piece(v2, 1, d2, j_in=eps)])
    merges += asm.merges
    e_fac = edge_factor(v1.factor.edge_slots.get(delta))
    sigma1 = v1.snake.sign(delta)
    sigma2 = v2.snake.sign(eps)
    f5 = _piece_factor(v1, trim_tail(v1, 1, d1, sigma1))
    f6 = _piece_factor(v2, trim_front(v2, 1, d2, sigma2))
    # geometric interlock: the non-grafting NE edge of G1's last tile
    # carries the arc of G2's first face and vice versa
    delta2 = v1.snake.tile_edge(d1, "E" if delta_side == "N" else "N")
    eps2 = v2.snake.tile_edge(1, "W" if eps_side == "S" else "S")
    geo = [(v1.factor.edge_slots[delta2], v2.factor.tile_slots[1]),
           (v2.factor.edge_slots[eps2], v1.factor.tile_slots[d1])]
    return _finalize("graft_snake_snake", RingElement.of(f1, f2),
                     RingElement.of(asm.factor, e_fac),
                     RingElement.of(f5, f6), None, (f1, f2), merges,
                     geo_merges=geo)


def self_graft(f_in, glue_edge: Optional[EdgeRef] = None) -> Resolution:
    """Self-grafting rewrite: G = G^b u (edge b) + G[r+1, l]."""
    f = f_in if isinstance(f_in, Factor) else fresh_factor(f_in)
    g: SnakeGraph = f.graph
    if g.is_edge or g.d < 1:
        raise SnakeError("self-grafting needs at least one tile")
    v = snake_view(f)
    if glue_edge is None:
        # default: the SW edge whose sign is opposite the first interior edge
        want = flip_sign(g.interior_sign(1)) if g.d >= 2 else MINUS
        glue_edge = next(e for e in (g.tile_edge(1, "S"), g.tile_edge(1, "W"))
                         if g.sign(e) == want)
    side = glue_edge.side_of(g.cell(1))
    merges: list = []
    asm = close_band(assemble_snake([Piece(v, 1, g.d)]), glue_edge)
    merges += asm.merges
    e_fac = edge_factor(f.edge_slots.get(glue_edge))
    sigma = g.sign(glue_edge)
    r = next((j for j in range(1, g.d) if g.interior_sign(j) == sigma), None)
    if r is None:
        t56 = RingElement.zero()
    else:
        l = max(j for j in range(1, g.d) if g.interior_sign(j) == sigma)
        if r == l:
            t56 = RingElement.of(edge_factor(f.edge_slots.get(g.interior(r))))
        else:
            t56 = RingElement.of(
                assemble_snake([Piece(v, r + 1, l)]).factor)
    bf = asm.factor.graph
    other_sw = next(e for e in (g.tile_edge(1, "S"), g.tile_edge(1, "W"))
                    if e != glue_edge)
    b2 = bf.b2 if False else None
    band_b2 = asm.factor.graph.b2 if hasattr(asm.factor.graph, "b2") else None
    other_ne = next(e for e in (g.tile_edge(g.d, "N"), g.tile_edge(g.d, "E"))
                    if g.sign(e) != g.sign(glue_edge))
    geo = [(f.edge_slots[other_ne], f.tile_slots[1]),
           (f.edge_slots[other_sw], f.tile_slots[g.d])]
    return _finalize("self_graft", RingElement.of(f),
                     RingElement.of(asm.factor, e_fac), t56, None, (f,),
                     merges, geo_merges=geo)


# -- self-crossing snake graphs ----------------------------------------------


def resolve_self_snake(a, o: Overlap) -> Resolution:
    f = a if isinstance(a, Factor) else fresh_factor(a)
    if o.direction == OPPOSITE:
        return _self_snake_opposite(f, o)
    return _self_snake_same(f, o)


def _xy_poly(x: RingElement):
    from .poly import Labeling, laurent_element

    return laurent_element(x, Labeling("xy"))


def _xy_resid_ok(resid, t56: RingElement) -> bool:
    C = _xy_poly(t56)
    if not resid.terms:
        return not C.terms
    if not C.terms:
        return False
    q = resid.divide_exact(C)
    return q is not None and q.is_monomial() and abs(q.as_monomial()[0]) == 1


def _xy_consistent(lhs: RingElement, t34: RingElement,
                   t56: RingElement) -> bool:
    """Count identity plus monomial XY residual with unit coefficient."""
    if lhs.match_count() != t34.match_count() + t56.match_count():
        return False
    return _xy_resid_ok(_xy_poly(lhs) - _xy_poly(t34), t56)


def _flip_combos(x: RingElement):
    """All ring elements obtained by reorienting the factors of x."""
    terms = list(x)
    if len(terms) != 1:
        yield x
        return
    coeff, factors = terms[0]
    n = len(factors)
    for mask in range(1 << n):
        fs = []
        for i, f in enumerate(factors):
            if mask & (1 << i) and not f.is_edge:
                g = f.clone()
                g.flip = not g.flip
                fs.append(g)
            else:
                fs.append(f)
        yield RingElement([(coeff, tuple(fs))])


def _finalize(kind, lhs, t34, t56, o, inputs, merges,
              geo_merges=None) -> Resolution:
    """Gate a constructed resolution on the count and XY oracles, adjusting
    the output height orientations when the induced ones degenerate."""
    la = lhs.match_count()
    if la != t34.match_count() + t56.match_count():
        raise SnakeError(f"{kind}: matching-count identity fails")
    A = _xy_poly(lhs)
    for t34v in _flip_combos(t34):
        resid = A - _xy_poly(t34v)
        for t56v in _flip_combos(t56):
            if _xy_resid_ok(resid, t56v):
                return Resolution(kind, lhs, t34v, t56v, o, inputs, merges,
                                  geo_merges or [])
    raise SnakeError(f"{kind}: no orientation gives a monomial residual")


def resolve_self_snake(a, o: Overlap) -> Resolution:
    f = a if isinstance(a, Factor) else fresh_factor(a)
    g: SnakeGraph = f.graph
    d = g.d
    views = [(snake_view(f), o)]
    if o.direction == SAME:
        ref = replace(o, s=d + 1 - o.t2, t=d + 1 - o.s2,
                      s2=d + 1 - o.t, t2=d + 1 - o.s)
    else:
        ref = replace(o, s=d + 1 - o.t2, t=d + 1 - o.s2,
                      s2=d + 1 - o.t, t2=d + 1 - o.s)
    views.append((snake_view(f, rev=True), ref))
    last_err = None
    for v, oo in views:
        try:
            if o.direction == SAME:
                res = _self_snake_same(f, v, oo)
            else:
                res = _self_snake_opposite(f, v, oo)
            if res is not None:
                return res
        except SnakeError as e:
            last_err = e
    raise SnakeError(f"no consistent self-snake resolution: {last_err}")


def _self_snake_same(f: Factor, v, o: Overlap):
    g: SnakeGraph = v.snake
    d = g.d
    s, t, s2, t2 = o.s, o.t, o.s2, o.t2
    merges: list = []

    # G4 = band of G[t+1, t2] glued along the e_t copy
    asm4 = _close_chain([Piece(v, t + 1, t2)], _interior(v, t))
    merges += asm4.merges
    f4 = asm4.factor

    # G3 = G[1,t] joined to G[t2+1,d] through the overlap identification;
    # junction side and induced height orientation are dispatched against
    # the oracles (single-tile punctured-type overlaps degenerate).
    f3_variants: list[Factor] = []
    if t2 < d:
        sides = [_interior(v, t2).side_of(g.cell(t2))]
        other = "N" if sides[0] == "E" else "E"
        if g.tile_edge(t, other) not in set(g.interior_edges()):
            sides.append(other)
        first = True
        for side in sides:
            try:
                e_j = g.tile_edge(t2 + 1, {"N": "S", "E": "W"}[side])
                asm3 = assemble_snake([
                    Piece(v, 1, t, j_out=g.tile_edge(t, side)),
                    Piece(v, t2 + 1, d, j_in=e_j)])
            except SnakeError:
                continue
            fa = asm3.factor
            fb = fa.clone()
            fb.flip = not fa.flip
            f3_variants += [fa, fb]
            if first:
                merges += asm3.merges
                first = False
    else:
        asm3 = assemble_snake([Piece(v, 1, t)])
        merges += asm3.merges
        fa = asm3.factor
        fb = fa.clone()
        fb.flip = not fa.flip
        f3_variants = [fa, fb]

    try:
        if s2 > t + 1:
            primary56 = _self_snake_disjoint_56(f, v, o, merges)
        elif s2 == t + 1:
            primary56 = _self_snake_adjacent_56(f, v, o, merges)
        else:
            primary56 = _self_snake_intersect_56(f, v, o, merges)
    except SnakeError:
        primary56 = None

    lhs = RingElement.of(f)
    t34_variants = [RingElement.of(f3, f4) for f3 in f3_variants]
    for t34 in t34_variants:
        if primary56 is not None and _xy_consistent(lhs, t34, primary56):
            return Resolution("self_snake", lhs, t34, primary56, o, (f,),
                              merges)
    for t34 in t34_variants:
        for cand in _self_56_candidates(f, v, lhs, t34, extra_factor=f4,
                                        with_band_pool=True):
            if _xy_consistent(lhs, t34, cand):
                return Resolution("self_snake", lhs, t34, cand, o,
                                  (f,), merges)
    return None


def _snake_pool(f, v):
    """Snake-or-edge 56 building blocks: edges, slices, joined slice pairs."""
    g = v.snake
    d = g.d
    out = []
    for side in ("S", "W"):
        out.append(edge_factor(f.edge_slots.get(g.tile_edge(1, side))))
    for a in range(1, d + 1):
        for b in range(a, d + 1):
            fac0 = assemble_snake([Piece(v, a, b)]).factor
            for fl in (False, True):
                fac = fac0.clone()
                fac.flip = fl
                out.append(fac)
    for a in range(1, d):
        for b in range(a + 2, d + 1):
            for jside in ("N", "E"):
                try:
                    p1 = Piece(v, 1, a, j_out=g.tile_edge(a, jside))
                    p2 = Piece(v, b, d, j_in=g.tile_edge(
                        b, {"N": "S", "E": "W"}[jside]))
                    fac0 = assemble_snake([p1, p2]).factor
                except SnakeError:
                    continue
                for fl in (False, True):
                    fac = fac0.clone()
                    fac.flip = fl
                    out.append(fac)
    return out


def _band_pool(f, v):
    """Band 56 building blocks: closures of slices and of wrapped chains."""
    g = v.snake
    d = g.d
    out = []
    for a in range(1, d + 1):
        for b in range(a, d + 1):
            for side in ("S", "W"):
                try:
                    sl = assemble_snake([Piece(v, a, b)]).factor
                    bd = close_band(assemble_snake([Piece(v, a, b)]),
                                    sl.graph.tile_edge(1, side))
                except SnakeError:
                    continue
                for fl in (False, True):
                    fac = bd.factor.clone()
                    fac.flip = fl
                    out.append(fac)
    for b in range(2, d + 1):
        for a in range(1, b - 1):
            # wrapped chain [b, d] ++ [1, a], closed into a band
            for jside in ("N", "E"):
                for cside in ("S", "W"):
                    try:
                        p1 = Piece(v, b, d, j_out=g.tile_edge(d, jside))
                        p2 = Piece(v, 1, a, j_in=g.tile_edge(
                            1, {"N": "S", "E": "W"}[jside]))
                        asm = assemble_snake([p1, p2])
                        bd = close_band(
                            asm, asm.factor.graph.tile_edge(1, cside))
                    except SnakeError:
                        continue
                    for fl in (False, True):
                        fac = bd.factor.clone()
                        fac.flip = fl
                        out.append(fac)
    return out


def _self_56_candidates(f, v, lhs, t34, extra_factor=None,
                        with_band_pool=False):
    """Alternative 56 shapes, count-filtered, in a fixed order."""
    need = lhs.match_count() - t34.match_count()
    out = []
    if need == 0:
        out.append(RingElement.zero())
        return out
    sign = 1 if need > 0 else -1
    n = abs(need)
    extras = [extra_factor]
    if with_band_pool:
        extras = [extra_factor, None] if extra_factor is not None else [None]
    snakes = _snake_pool(f, v)
    for extra in extras:
        base = 1 if extra is None else factor_count(extra)
        if base == 0 or n % base:
            continue
        for fac in snakes:
            if factor_count(fac) != n // base:
                continue
            if extra is None:
                out.append(RingElement.of(fac, coeff=sign))
            else:
                out.append(RingElement.of(fac, extra, coeff=sign))
    if with_band_pool:
        for band_fac in _band_pool(f, v):
            nb = factor_count(band_fac)
            if nb == 0 or n % nb:
                continue
            for fac in snakes:
                if factor_count(fac) != n // nb:
                    continue
                out.append(RingElement.of(fac, band_fac, coeff=sign))
    return out


def _self_snake_disjoint_56(f, v, o: Overlap, merges: list) -> RingElement:
    """s2 > t + 1: the reversed gap sits between the outer parts; an
    exposed end trims by the seam sign and cascades when fully consumed."""
    g = v.snake
    d = g.d
    s, t, s2, t2 = o.s, o.t, o.s2, o.t2
    sigma = _isign(v, t)  # equals f(e_{s2-1}) by the crossing condition
    lo_mid, hi_mid = t + 1, s2 - 1
    if s == 1 and t2 == d:
        res = trim_tail(v, lo_mid, hi_mid, sigma)
        if res[0] == "edge":
            return RingElement.zero()
        res2 = trim_front(v, res[1], res[2], sigma)
        if res2[0] == "edge":
            return RingElement.zero()
        asm = assemble_snake([Piece(v, res2[1], res2[2], rev=True)])
        return RingElement.of(asm.factor)
    if s == 1:
        res = trim_tail(v, lo_mid, hi_mid, sigma)
        if res[0] == "edge":
            res2 = trim_front(v, t2 + 1, d, sigma)
            return RingElement.of(_piece_factor(v, res2))
        lo_mid, hi_mid = res[1], res[2]
    if t2 == d:
        res = trim_front(v, lo_mid, hi_mid, sigma)
        if res[0] == "edge":
            res2 = trim_tail(v, 1, s - 1, sigma)
            return RingElement.of(_piece_factor(v, res2))
        lo_mid, hi_mid = res[1], res[2]
    pieces = []
    if s > 1:
        pieces.append(Piece(v, 1, s - 1, j_out=_free_ne(v, s - 1)))
    pieces.append(Piece(v, lo_mid, hi_mid, rev=True,
                        j_in=_interior(v, s2 - 1) if s > 1 else None,
                        j_out=_interior(v, t) if t2 < d else None))
    if t2 < d:
        pieces.append(Piece(v, t2 + 1, d, j_in=_free_sw(v, t2 + 1)))
    asm = assemble_snake(pieces)
    merges += asm.merges
    return RingElement.of(asm.factor)


def _self_snake_adjacent_56(f, v, o: Overlap, merges: list) -> RingElement:
    """s2 = t + 1: the seam absorbs the overlaps; always negative."""
    g = v.snake
    d = g.d
    s, t, s2, t2 = o.s, o.t, o.s2, o.t2
    sigma = _isign(v, t)

    if t2 == d:
        # -(G[1, s-1] cut back to the last edge <= e_{s-1} with sign f(e_t))
        keep = next((j for j in range(min(s - 1, d - 1), 0, -1)
                     if _isign(v, j) == sigma), None)
        if keep is not None:
            fac = assemble_snake([Piece(v, 1, keep)]).factor
        else:
            e = next(e for e in (g.tile_edge(1, "S"), g.tile_edge(1, "W"))
                     if g.sign(e) == sigma)
            fac = edge_factor(v.factor.edge_slots.get(e))
        return RingElement.of(fac, coeff=-1)

    # t2 < d: keep G[1, s-1] whole; the tail G[t2+1, d] is cut forward to
    # the first edge past the overlap with sign f(e_t)
    res = trim_front(v, t2 + 1, d, sigma)
    left = _range_or_empty(v, 1, s - 1)
    if res[0] == "edge":
        if left is None:
            return RingElement.of(
                edge_factor(v.factor.edge_slots.get(res[1])), coeff=-1)
        asm = assemble_snake([left])
        fac = asm.factor
        slot_e = v.factor.edge_slots.get(res[1])
        slot_j = fac.edge_slots.get(fac.graph.tile_edge(fac.graph.d, "N"))
        if slot_e is not None and slot_j is not None and slot_e != slot_j:
            merges.append((slot_e, slot_j))
        return RingElement.of(fac, coeff=-1)
    lo, hi = res[1], res[2]
    right = Piece(v, lo, hi)
    if left is None:
        asm = assemble_snake([right])
        return RingElement.of(asm.factor, coeff=-1)
    left.j_out = _free_ne(v, s - 1)
    right.j_in = _free_sw(v, lo)
    asm = assemble_snake([left, right])
    merges += asm.merges
    return RingElement.of(asm.factor, coeff=-1)


def _self_snake_intersect_56(f, v, o: Overlap, merges: list) -> RingElement:
    """s2 <= t: skip two periods; always negative."""
    g = v.snake
    d = g.d
    s, t, s2, t2 = o.s, o.t, o.s2, o.t2
    p = s2 - s
    if t + 2 * p <= d - 1:
        e_j = _interior(v, t + 2 * p)
        side = e_j.side_of(g.cell(t + 2 * p))
        asm = assemble_snake([
            Piece(v, 1, t, j_out=g.tile_edge(t, side)),
            Piece(v, t + 2 * p + 1, d, j_in=e_j)])
        merges += asm.merges
        return RingElement.of(asm.factor, coeff=-1)
    keep = d - 2 * p
    if keep >= 1:
        asm = assemble_snake([Piece(v, 1, keep)])
        return RingElement.of(asm.factor, coeff=-1)
    if keep == 0:
        sigma = _isign(v, t) if t <= d - 1 else g.sign(g.tile_edge(1, "S"))
        e = next(e for e in (g.tile_edge(1, "S"), g.tile_edge(1, "W"))
                 if g.sign(e) == sigma)
        return RingElement.of(edge_factor(v.factor.edge_slots.get(e)),
                              coeff=-1)
    return RingElement.zero()


def _self_snake_opposite(f: Factor, v, o: Overlap):
    g: SnakeGraph = v.snake
    d = g.d
    s, t, s2, t2 = o.s, o.t, o.s2, o.t2
    merges: list = []
    # G34: [1,t] + reversed gap + [s2,d]; junction edges can degenerate for
    # single-tile overlaps, so admissible pairings are dispatched
    j1_variants = [(_free_ne(v, t), _interior(v, s2 - 1))]
    if t < d:
        j1_variants.append((_interior(v, t), _free_ne(v, s2 - 1)))
    j2_variants = [(_interior(v, t), _free_sw(v, s2)),
                   (_free_sw(v, t + 1), _interior(v, s2 - 1))]
    t34_factors = []
    first = True
    for e_out1, e_in1 in j1_variants:
        for e_out2, e_in2 in j2_variants:
            try:
                asm34 = assemble_snake([
                    Piece(v, 1, t, j_out=e_out1),
                    Piece(v, t + 1, s2 - 1, rev=True, j_in=e_in1,
                          j_out=e_out2),
                    Piece(v, s2, d, j_in=e_in2)])
            except SnakeError:
                continue
            if first:
                merges += asm34.merges
                first = False
            t34_factors.append(asm34.factor)
            alt = asm34.factor.clone()
            alt.flip = not alt.flip
            t34_factors.append(alt)
    if not t34_factors:
        return None
    # G6: band of the gap
    asm6 = _close_chain([Piece(v, t + 1, s2 - 1)], _free_sw(v, t + 1))
    merges += asm6.merges
    f6 = asm6.factor
    lhs = RingElement.of(f)
    t34_variants = [RingElement.of(x) for x in t34_factors]
    t34 = t34_variants[0]

    # G5: [1,s-1] + [t2+1,d]; an arc with both tails empty bounds a
    # contractible monogon and is the zero element
    left = _range_or_empty(v, 1, s - 1)
    right = _range_or_empty(v, t2 + 1, d)
    primary = None
    try:
        if left and right:
            left.j_out = _free_ne(v, s - 1)
            right.j_in = _free_sw(v, t2 + 1)
            asm5 = assemble_snake([left, right])
            merges += asm5.merges
            primary = RingElement.of(asm5.factor, f6)
        elif left:
            primary = RingElement.of(_piece_factor(
                v, trim_tail(v, 1, s - 1, _isign(v, s - 1))), f6)
        elif right:
            primary = RingElement.of(_piece_factor(
                v, trim_front(v, t2 + 1, d, _isign(v, t2))), f6)
        else:
            primary = RingElement.zero()
    except SnakeError:
        primary = None
    for t34 in t34_variants:
        if primary is not None and _xy_consistent(lhs, t34, primary):
            return Resolution("self_snake", lhs, t34, primary, o, (f,),
                              merges)
    for t34 in t34_variants:
        for cand in _self_56_candidates(f, v, lhs, t34, extra_factor=f6,
                                        with_band_pool=True):
            if _xy_consistent(lhs, t34, cand):
                return Resolution("self_snake", lhs, t34, cand, o, (f,),
                                  merges)
        # deeper degenerations: the gap loop survives alongside another band
        need = lhs.match_count() - t34.match_count()
        n6 = factor_count(f6)
        if need and n6 and need % n6 == 0:
            snakes = _snake_pool(f, v)
            sign = 1 if need > 0 else -1
            m = abs(need) // n6
            for band_fac in _band_pool(f, v):
                nb = factor_count(band_fac)
                if nb == 0 or m % nb:
                    continue
                for fac in snakes:
                    if factor_count(fac) != m // nb:
                        continue
                    cand = RingElement.of(fac, f6, band_fac, coeff=sign)
                    if _xy_consistent(lhs, t34, cand):
                        return Resolution("self_snake", lhs, t34, cand, o,
                                          (f,), merges)
    return None


# -- self-crossing band graphs --------------------------------------------------


def resolve_self_band(a, o: Overlap) -> Resolution:
    f = a if isinstance(a, Factor) else fresh_factor(a)
    if o.direction == OPPOSITE:
        return _self_band_opposite(f, o)
    return _self_band_same(f, o)


def _band_56_candidates(f: Factor, v, lhs, t34):
    """Fallback 56 shapes for band self-crossings: constants and bands."""
    need = lhs.match_count() - t34.match_count()
    out = []
    if need == 0:
        out.append(RingElement.zero())
        return out
    if abs(need) <= 2:
        out.append(RingElement.const(need))
    sign = 1 if need > 0 else -1
    pool = _band_pool(f, v)
    for fac in pool:
        if factor_count(fac) == abs(need):
            out.append(RingElement.of(fac, coeff=sign))
    for fac in pool:
        n1 = factor_count(fac)
        if n1 == 0 or abs(need) % n1:
            continue
        for fac2 in pool:
            if factor_count(fac2) == abs(need) // n1:
                out.append(RingElement.of(fac, fac2, coeff=sign))
    return out


def _self_band_same(f: Factor, o: Overlap) -> Resolution:
    band: BandGraph = f.graph
    d = band.d
    t, s2, t2 = o.t, o.s2, o.t2
    if not o.whole_graph and t2 > d:
        # i2 wraps across the cut: recut before it and swap the roles
        new_cut = _cut_shift(band, o.cut_a, s2 - 1)
        new_s2 = d - s2 + 2
        o = replace(o, cut_a=new_cut, cut_b=new_cut,
                    s2=new_s2, t2=new_s2 + t - 1)
        t, s2, t2 = o.t, o.s2, o.t2
    if (s2 <= t or o.whole_graph) and 2 * s2 - 2 > d:
        new_cut = _cut_shift(band, o.cut_a, s2 - 1)
        new_s2 = d - s2 + 2
        o = replace(o, cut_a=new_cut, cut_b=new_cut,
                    s2=new_s2, t2=new_s2 + t - 1)
        t, s2, t2 = o.t, o.s2, o.t2
    v = band_view(f, o.cut_a)
    g = v.snake
    merges: list = []
    sigma_b_side = v.glue_sw.side_of(g.cell(1))

    # G3 = band of [s2, d] glued along the transported b side, and
    # G4 = band of [1, s2-1] glued along the transported e_{s2-1} side;
    # degenerate periodic overlaps need the opposite closure, dispatched.
    side_c = _interior(v, s2 - 1).side_of(g.cell(s2))
    t34_variants = []
    for sa in (sigma_b_side, _other_sw(sigma_b_side)):
        for sb in (side_c, _other_sw(side_c)):
            try:
                asm3 = _close_chain([Piece(v, s2, d)], g.tile_edge(s2, sa))
                asm4 = _close_chain([Piece(v, 1, s2 - 1)],
                                    g.tile_edge(1, sb))
            except SnakeError:
                continue
            if not t34_variants:
                merges += asm3.merges + asm4.merges
            t34_variants.append(RingElement.of(asm3.factor, asm4.factor))
    if not t34_variants:
        raise SnakeError("self-band 34 closures impossible")
    lhs = RingElement.of(f)

    # G56 by the case table
    try:
        if s2 <= t or o.whole_graph:
            if 2 * s2 - 2 == d:
                primary = RingElement.const(-2)
            else:
                start = 2 * s2 - 1
                asm56 = _close_chain([Piece(v, start, d)],
                                     g.tile_edge(start, sigma_b_side))
                merges += asm56.merges
                primary = RingElement.of(asm56.factor, coeff=-1)
        elif s2 == t + 1:
            if t2 == d:
                primary = RingElement.const(-1)
            else:
                primary = _self_band_ell_56(f, v, o, merges)
        else:
            asm56 = _close_chain([
                Piece(v, t2 + 1, d, j_out=_free_ne(v, d)),
                Piece(v, t + 1, s2 - 1, rev=True,
                      j_in=_free_ne(v, s2 - 1))],
                _free_sw(v, t2 + 1))
            merges += asm56.merges
            primary = RingElement.of(asm56.factor)
    except SnakeError:
        primary = None
    for t34 in t34_variants:
        if primary is not None and _xy_consistent(lhs, t34, primary):
            return Resolution("self_band", lhs, t34, primary, o, (f,),
                              merges)
    for t34 in t34_variants:
        for cand in _band_56_candidates(f, v, lhs, t34):
            if _xy_consistent(lhs, t34, cand):
                return Resolution("self_band", lhs, t34, cand, o, (f,),
                                  merges)
    raise SnakeError("no consistent self-band resolution")


def _other_sw(side: str) -> str:
    return "W" if side == "S" else "S"


def _self_band_ell_56(f, v, o: Overlap, merges: list) -> RingElement:
    band: BandGraph = f.graph
    g = v.snake
    d = band.d
    t2 = o.t2
    ell = None
    for cand in range(1, d - t2 + 1):
        hi = d - cand
        lo = t2 + cand
        s_lo = _isign(v, lo) if lo <= d - 1 else g.sign(v.glue_sw)
        s_hi = _isign(v, hi) if hi >= 1 else g.sign(v.glue_sw)
        if s_lo == s_hi:
            ell = cand
            break
    if ell is None:
        raise SnakeError("no ell for the self-band 3(b) case")
    s_tp_ell = _isign(v, t2 + ell) if t2 + ell <= d - 1 else \
        g.sign(v.glue_sw)
    plus = g.interior_sign(t2) == s_tp_ell
    coeff = 1 if plus else -1
    if d > t2 + 2 * ell:
        lo, hi = t2 + ell + 1, d - ell
        asm = _close_chain([Piece(v, lo, hi)], _free_sw(v, lo))
        merges += asm.merges
        return RingElement.of(asm.factor, coeff=coeff)
    if d == t2 + 2 * ell:
        return RingElement.const(coeff)
    return RingElement.zero()


def _self_band_opposite(f: Factor, o: Overlap) -> Resolution:
    band: BandGraph = f.graph
    v = band_view(f, o.cut_a)
    d = band.d
    t, s2, t2 = o.t, o.s2, o.t2
    merges: list = []
    asm34 = _close_chain([
        Piece(v, 1, t, j_out=_free_ne(v, t)),
        Piece(v, t + 1, s2 - 1, rev=True, j_in=_interior(v, s2 - 1),
              j_out=_interior(v, t)),
        Piece(v, s2, d, j_in=_free_sw(v, s2))], v.glue_sw)
    merges += asm34.merges
    lhs = RingElement.of(f)
    t34 = RingElement.of(asm34.factor)
    asm6 = _close_chain([Piece(v, t + 1, s2 - 1)], _free_sw(v, t + 1))
    merges += asm6.merges
    f6 = asm6.factor
    try:
        asm5 = _close_chain([Piece(v, t2 + 1, d)], _free_sw(v, t2 + 1))
        merges += asm5.merges
        primary = RingElement.of(asm5.factor, f6)
    except SnakeError:
        primary = None
    if primary is not None and _xy_consistent(lhs, t34, primary):
        return Resolution("self_band", lhs, t34, primary, o, (f,), merges)
    # dispatch: G5-band alternatives next to the fixed gap band G6
    g = v.snake
    n6 = factor_count(f6)
    need = lhs.match_count() - t34.match_count()
    cands = []
    if need == 0:
        cands.append(RingElement.zero())
    elif n6 > 0 and need % n6 == 0:
        n5 = abs(need // n6)
        sign = 1 if need > 0 else -1
        if n5 == 1:
            cands.append(RingElement.of(f6, coeff=sign))
        for a in range(1, d + 1):
            for b in range(a, d + 1):
                for side in ("S", "W"):
                    try:
                        sl = assemble_snake([Piece(v, a, b)]).factor
                        bd = close_band(assemble_snake([Piece(v, a, b)]),
                                        sl.graph.tile_edge(1, side))
                    except SnakeError:
                        continue
                    if factor_count(bd.factor) != n5:
                        continue
                    for fl in (False, True):
                        fac = bd.factor.clone()
                        fac.flip = fl
                        cands.append(RingElement.of(fac, f6, coeff=sign))
    for cand in cands:
        if _xy_consistent(lhs, t34, cand):
            return Resolution("self_band", lhs, t34, cand, o, (f,), merges)
    raise SnakeError("no consistent opposite self-band resolution")


def _cut_shift(band: BandGraph, cut_index: int, offset: int) -> int:
    """Interior-edge index of the cut `offset` tiles after `cut_index`."""
    return ((cut_index + offset - 1) % band.d) + 1


# -- dispatch --------------------------------------------------------------------


def resolve(o: Overlap, a, b=None, check: bool = True) -> Resolution:
    from .overlaps import _sign_crossing

    ga = a.graph if isinstance(a, Factor) else a
    gb = b.graph if isinstance(b, Factor) and b is not None else b
    if check and not _sign_crossing(o, ga, gb):
        raise SnakeError("overlap is not crossing")
    if o.kind == "snake_snake":
        return resolve_snake_snake(a, b, o)
    if o.kind == "snake_band":
        return resolve_snake_band(a, b, o)
    if o.kind == "band_snake":
        o2 = replace(o, kind="snake_band", s=o.s2, t=o.t2, s2=o.s, t2=o.t,
                     cut_b=o.cut_a, cut_a=None)
        return resolve_snake_band(b, a, o2)
    if o.kind == "band_band":
        return resolve_band_band(a, b, o)
    if o.kind == "self_snake":
        return resolve_self_snake(a, o)
    if o.kind == "self_band":
        return resolve_self_band(a, o)
    raise SnakeError(f"cannot resolve overlap kind {o.kind}")


# -- bracelets, classification, generator decomposition ---------------------------


def classify_band(band: BandGraph) -> str:
    return band.classify()


def realize_annulus(band: BandGraph) -> tuple[int, int]:
    return band.annulus_counts()


def decompose_to_generators(x: RingElement) -> RingElement:
    """Rewrite until every snake factor has at most one tile."""
    out = RingElement.zero()
    queue = [(c, fs) for c, fs in x]
    while queue:
        coeff, factors = queue.pop()
        tgt = next((i for i, f in enumerate(factors)
                    if not f.is_edge and not f.is_band and f.graph.d >= 2),
                   None)
        if tgt is None:
            out = out + RingElement([(coeff, factors)])
            continue
        f = factors[tgt]
        rest = factors[:tgt] + factors[tgt + 1:]
        res = self_graft(f)
        piece = (res.term34 + res.term56).scale(coeff)
        for c2, fs2 in piece:
            queue.append((c2, fs2 + rest))
    return out
