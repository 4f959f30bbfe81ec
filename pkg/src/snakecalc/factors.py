"""Labeled graph factors and the piece assembler used by every resolution.

A Factor is one graph in a ring-element term: a snake graph, band graph, or
single edge, together with label slots (one slot per edge / tile; slots of
different factors are unified later by the instance labeler), a height
orientation (which of the two sign functions the minimal matching uses),
and, for bands, the tile/edge bookkeeping of the defining cut.

Resolutions build their output graphs by concatenating traversed pieces of
the input factors; the assembler transports labels and height orientations
and records which label slots the construction identifies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Optional, Union

from .graphs import (MINUS, PLUS, BandGraph, EdgeRef, SnakeError, SnakeGraph,
                     flip_sign)

Slot = tuple

_SIDE_180 = {"S": "N", "N": "S", "W": "E", "E": "W"}
_fid_counter = itertools.count()


class Factor:
    """A labeled snake graph, band graph, or single edge.

    `flip` is the height-orientation hint: which of the two sign functions
    of the (cut) snake graph the minimal matching is taken against.
    """

    __slots__ = ("graph", "edge_slots", "tile_slots", "_flip", "_lk")

    def __init__(self, graph, edge_slots, tile_slots, flip: bool = False):
        self.graph = graph
        self.edge_slots = edge_slots
        self.tile_slots = tile_slots
        self._flip = flip
        self._lk = None

    @property
    def is_edge(self) -> bool:
        return isinstance(self.graph, SnakeGraph) and self.graph.is_edge

    @property
    def is_band(self) -> bool:
        return isinstance(self.graph, BandGraph)

    @property
    def snake(self) -> SnakeGraph:
        """The underlying snake graph (a band's defining cut)."""
        return self.graph.cut if self.is_band else self.graph

    @property
    def d(self) -> int:
        return self.graph.d

    def clone(self) -> "Factor":
        return Factor(self.graph, dict(self.edge_slots),
                      dict(self.tile_slots), self.flip)

    @property
    def flip(self) -> bool:
        return self._flip

    @flip.setter
    def flip(self, value: bool) -> None:
        self._flip = value
        self._lk = None

    # -- canonical key for ring bookkeeping -----------------------------

    def shape_key(self):
        if self.is_edge:
            return ("edge",)
        if self.is_band:
            return ("band", self.graph.canonical_word())
        return self.graph.shape_key("abstract")

    def label_key(self):
        """Shape key extended with a symmetry-minimal label signature and
        the height orientation."""
        cached = self._lk
        if cached is not None and cached[0] == self.flip:
            return cached[1]
        if self.is_edge:
            out = ("edge", _slot_name(self.edge_slots.get(
                self.graph.edge_ref())))
        elif self.is_band:
            out = ("band", self.graph.canonical_word(), self.flip,
                   _band_label_sig(self))
        else:
            out = self.graph.shape_key("abstract") + (self.flip,
                                                      _snake_label_sig(self))
        self._lk = (self.flip, out)
        return out


def _slot_name(slot) -> str:
    return repr(slot)


def _snake_label_sig(f: Factor):
    g = f.graph
    d = g.d
    rows = []
    for i in range(1, d + 1):
        rows.append(tuple(_slot_name(f.edge_slots.get(g.tile_edge(i, s)))
                          for s in ("S", "W", "N", "E"))
                    + (_slot_name(f.tile_slots.get(i)),))
    rev = [tuple(r[j] for j in (2, 3, 0, 1)) + (r[4],) for r in rows[::-1]]
    return min(tuple(rows), tuple(rev))


def _band_label_sig(f: Factor):
    band: BandGraph = f.graph
    g = band.cut
    d = g.d
    rows = []
    for i in range(1, d + 1):
        rows.append(tuple(
            _slot_name(f.edge_slots.get(band.edge_class(g.tile_edge(i, s))))
            for s in ("S", "W", "N", "E")) + (_slot_name(f.tile_slots.get(i)),))
    best = None
    for r0 in range(d):
        rot = rows[r0:] + rows[:r0]
        for cand in (tuple(rot),
                     tuple(tuple(r[j] for j in (2, 3, 0, 1)) + (r[4],)
                           for r in rot[::-1])):
            if best is None or cand < best:
                best = cand
    return best


def fresh_factor(graph, fid: Optional[int] = None) -> Factor:
    """A factor with one fresh slot per edge / tile."""
    if fid is None:
        fid = next(_fid_counter)
    if isinstance(graph, BandGraph):
        edges = {e: ("e", fid, e) for e in graph.edges()}
        tiles = {i: ("t", fid, i) for i in range(1, graph.d + 1)}
        return Factor(graph, edges, tiles)
    if graph.is_edge:
        e = graph.edge_ref()
        return Factor(graph, {e: ("e", fid, e)}, {})
    edges = {e: ("e", fid, e) for e in graph.edges()}
    tiles = {i: ("t", fid, i) for i in range(1, graph.d + 1)}
    return Factor(graph, edges, tiles)


def edge_factor(slot=None) -> Factor:
    g = SnakeGraph(is_edge=True)
    if slot is None:
        slot = ("e", next(_fid_counter), g.edge_ref())
    return Factor(g, {g.edge_ref(): slot}, {})


# -- views: band participants materialized as cut snakes --------------------


@dataclass
class ViewFactor:
    """A (possibly reversed) cut snake of a band factor, or a plain snake.

    glue_sw / glue_ne are the copies of the cut edge (None for snakes).
    """

    factor: Factor  # snake factor in view coordinates
    glue_sw: Optional[EdgeRef] = None
    glue_ne: Optional[EdgeRef] = None

    @property
    def snake(self) -> SnakeGraph:
        return self.factor.graph

    @property
    def d(self) -> int:
        return self.snake.d


def snake_view(f: Factor, rev: bool = False) -> ViewFactor:
    if not rev:
        return ViewFactor(f.clone())
    g = f.graph
    new = SnakeGraph(g.dirs[::-1])
    d = g.d
    edges = {}
    for i in range(1, d + 1):
        j = d + 1 - i
        for side in ("S", "W", "N", "E"):
            e_old = g.tile_edge(i, side)
            e_new = new.tile_edge(j, _SIDE_180[side])
            if e_old in f.edge_slots:
                edges[e_new] = f.edge_slots[e_old]
    tiles = {d + 1 - i: f.tile_slots[i] for i in f.tile_slots}
    # height orientation: signs attach to physical edges; compare the old
    # sign at a reference edge with the new canonical sign at its image.
    ref_old = g.tile_edge(1, "S")
    ref_new = new.tile_edge(d, "N")
    fl = new.sign(ref_new) != g.sign(ref_old, f.flip)
    return ViewFactor(Factor(new, edges, tiles, fl))


def band_view(f: Factor, cut_index: int, rev: bool = False) -> ViewFactor:
    """Materialize a band factor as the cut snake at `cut_index`."""
    band: BandGraph = f.graph
    sn, ca, cb, edge_map = band.cut_at(cut_index)
    d = band.d
    new = SnakeGraph(sn.dirs)
    # rebase sn coordinates to origin
    rebase = {}
    for i in range(1, d + 1):
        for side in ("S", "W", "N", "E"):
            rebase[sn.tile_edge(i, side)] = new.tile_edge(i, side)
    edges = {}
    for e_old, cls in edge_map.items():
        if cls in f.edge_slots:
            edges[rebase[e_old]] = f.edge_slots[cls]
    tile_map = [((cut_index + k - 1) % d) + 1 for k in range(1, d + 1)]
    tiles = {k: f.tile_slots[tile_map[k - 1]] for k in range(1, d + 1)}
    # transported height orientation: match band signs (with hint f.flip on
    # the defining cut) at a reference edge
    ref_new = new.tile_edge(1, "S")
    ref_cls = edge_map[sn.tile_edge(1, "S")]
    want = band.cut.sign(_class_rep_edge(band, ref_cls), f.flip)
    fl = new.sign(ref_new) != want
    vf = ViewFactor(Factor(new, edges, tiles, fl),
                    glue_sw=rebase[ca], glue_ne=rebase[cb])
    if rev:
        # glue_sw / glue_ne stay "the copy at the start / end of the view"
        rv = snake_view(vf.factor, rev=True)
        tr = _reverse_edge_table(vf.factor.graph)
        return ViewFactor(rv.factor, glue_sw=tr[vf.glue_ne],
                          glue_ne=tr[vf.glue_sw])
    return vf


def _class_rep_edge(band: BandGraph, cls: EdgeRef) -> EdgeRef:
    return cls


def _reverse_edge_table(g: SnakeGraph) -> dict:
    new = SnakeGraph(g.dirs[::-1])
    d = g.d
    out = {}
    for i in range(1, d + 1):
        for side in ("S", "W", "N", "E"):
            out[g.tile_edge(i, side)] = new.tile_edge(d + 1 - i,
                                                      _SIDE_180[side])
    return out


# -- assembly ----------------------------------------------------------------


@dataclass
class Piece:
    """A traversed tile range of a view factor.

    lo..hi are tile indices of vf's snake; rev traverses hi -> lo with a
    180-degree turn.  j_out / j_in name the source edges glued at the next /
    previous junction (None at the ends of the chain).  The assembler may
    reflect a piece (transpose, swapping U and R) to realize a junction;
    reflections are graph isomorphisms, so labels transport unchanged.
    """

    vf: ViewFactor
    lo: int
    hi: int
    rev: bool = False
    j_in: Optional[EdgeRef] = None
    j_out: Optional[EdgeRef] = None

    @property
    def ntiles(self) -> int:
        return self.hi - self.lo + 1

    def tiles(self):
        rng = range(self.hi, self.lo - 1, -1) if self.rev \
            else range(self.lo, self.hi + 1)
        return list(rng)


_SIDE_REFL = {"S": "W", "W": "S", "N": "E", "E": "N"}


def _map_side(side: str, rev: bool, refl: bool) -> str:
    if refl:
        side = _SIDE_REFL[side]
    if rev:
        side = _SIDE_180[side]
    return side


def _map_dir(ch: str, refl: bool) -> str:
    return ("R" if ch == "U" else "U") if refl else ch


@dataclass
class Assembled:
    factor: Factor
    merges: list  # list of (slot, slot) identified by the construction
    tile_src: list  # new tile index (1-based) -> (vf, src_tile, rev, refl)


def assemble_snake(pieces: list[Piece]) -> Assembled:
    """Concatenate pieces into one snake graph, transporting labels.

    Pieces after the first are reflected when needed to realize the named
    junction edges; if neither orientation fits, the junction is invalid.
    """
    pieces = [p for p in pieces if p.ntiles > 0]
    if not pieces:
        raise SnakeError("cannot assemble an empty snake graph")
    dirs = []
    seq = []  # (vf, src_tile, rev, refl) per new tile
    merges: list = []
    refls = []
    for idx, p in enumerate(pieces):
        g = p.vf.snake
        tiles = p.tiles()
        refl = False
        if idx > 0:
            prev = pieces[idx - 1]
            prev_refl = refls[idx - 1]
            e_out, e_in = prev.j_out, p.j_in
            if e_out is None or e_in is None:
                raise SnakeError("missing junction edges")
            side_out = _map_side(
                e_out.side_of(prev.vf.snake.cell(prev.tiles()[-1])),
                prev.rev, prev_refl)
            if side_out not in ("N", "E"):
                raise SnakeError(
                    f"junction leaves on a SW side ({side_out})")
            need_in = "S" if side_out == "N" else "W"
            raw_in = e_in.side_of(g.cell(tiles[0]))
            if _map_side(raw_in, p.rev, False) == need_in:
                refl = False
            elif _map_side(raw_in, p.rev, True) == need_in:
                refl = True
            else:
                raise SnakeError(
                    f"incompatible junction sides {side_out}/"
                    f"{_map_side(raw_in, p.rev, False)}")
            dirs.append("U" if side_out == "N" else "R")
            so = prev.vf.factor.edge_slots.get(e_out)
            si = p.vf.factor.edge_slots.get(e_in)
            if so is not None and si is not None and so != si:
                merges.append((so, si))
        refls.append(refl)
        for k, src_i in enumerate(tiles):
            if k > 0:
                if p.rev:
                    ch = g.dirs[src_i - 1]
                else:
                    ch = g.dirs[tiles[k - 1] - 1]
                dirs.append(_map_dir(ch, refl))
            seq.append((p.vf, src_i, p.rev, refl))
    new = SnakeGraph("".join(dirs))
    edges = {}
    tiles_slots = {}
    for new_i, (vf, src_i, rev, refl) in enumerate(seq, start=1):
        f = vf.factor
        if src_i in f.tile_slots:
            tiles_slots[new_i] = f.tile_slots[src_i]
        for side in ("S", "W", "N", "E"):
            # invert the side map: find the source side landing on `side`
            for src_side in ("S", "W", "N", "E"):
                if _map_side(src_side, rev, refl) == side:
                    break
            e_src = vf.snake.tile_edge(src_i, src_side)
            slot = f.edge_slots.get(e_src)
            if slot is None:
                continue
            e_new = new.tile_edge(new_i, side)
            if e_new in edges and edges[e_new] != slot:
                merges.append((edges[e_new], slot))
            else:
                edges[e_new] = slot
    # height orientation transported from the first tile's source; a
    # reflection exchanges the two sign functions
    vf0, src0, rev0, refl0 = seq[0]
    for src_side in ("S", "W", "N", "E"):
        if _map_side(src_side, rev0, refl0) == "S":
            break
    want = vf0.snake.sign(vf0.snake.tile_edge(src0, src_side),
                          vf0.factor.flip)
    fl = new.sign(new.tile_edge(1, "S")) != want
    return Assembled(Factor(new, edges, tiles_slots, fl), merges, seq)


def close_band(asm: Assembled, glue_edge_new: EdgeRef,
               expected_partner: Optional[EdgeRef] = None) -> Assembled:
    """Glue the assembled snake into a band along a SW edge of tile 1.

    The partner is the unique same-sign NE edge; its label slot is merged
    with the glue edge's.
    """
    f = asm.factor
    g: SnakeGraph = f.graph
    side = glue_edge_new.side_of(g.cell(1))
    if side not in ("S", "W"):
        raise SnakeError("band closure must use a SW edge of the first tile")
    band = BandGraph(g, side)
    if expected_partner is not None and band.b2 != expected_partner:
        raise SnakeError("band closure pairs an unexpected NE edge")
    merges = list(asm.merges)
    s_glue = f.edge_slots.get(band.b)
    s_part = f.edge_slots.get(band.b2)
    if s_glue is not None and s_part is not None and s_glue != s_part:
        merges.append((s_glue, s_part))
    edges = {band.edge_class(e): s for e, s in f.edge_slots.items()
             if e != band.b2}
    bf = Factor(band, edges, dict(f.tile_slots), f.flip)
    return Assembled(bf, merges, asm.tile_src)


# -- trims -------------------------------------------------------------------


def trim_tail(vf: ViewFactor, lo: int, hi: int, sigma: str,
              include_cut_edge: bool = False):
    """[lo, hi] minus successors of the last edge with sign sigma.

    Scans the interior edges e_lo..e_{hi-1} (plus e_hi when
    include_cut_edge) from the top; falls back to the SW edge of tile lo
    with sign sigma, giving a single-edge result.
    Returns ("range", lo, j) or ("edge", EdgeRef).
    """
    g = vf.snake
    top = hi if include_cut_edge and hi <= g.d - 1 else hi - 1
    for j in range(top, lo - 1, -1):
        if g.interior_sign(j) == sigma:
            return ("range", lo, j)
    for side in ("S", "W"):
        e = g.tile_edge(lo, side)
        if g.sign(e) == sigma:
            return ("edge", e)
    raise AssertionError("one SW edge always carries each sign")


def trim_front(vf: ViewFactor, lo: int, hi: int, sigma: str,
               include_cut_edge: bool = False):
    """[lo, hi] minus predecessors of the first edge with sign sigma."""
    g = vf.snake
    bottom = lo - 1 if include_cut_edge and lo >= 2 else lo
    for j in range(bottom, hi):
        if g.interior_sign(j) == sigma:
            return ("range", j + 1, hi)
    for side in ("N", "E"):
        e = g.tile_edge(hi, side)
        if g.sign(e) == sigma:
            return ("edge", e)
    raise AssertionError("one NE edge always carries each sign")
