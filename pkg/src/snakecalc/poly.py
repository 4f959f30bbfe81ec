"""Weights, heights, crossing monomials, the homomorphism phi, and the
exact Laurent evaluation of ring elements under the label schemes.

Schemes: "full" (per-edge/per-tile arc identities), "xy" (all edges x, all
tiles y), "y" (edges 1, tiles y), "f" (edges 1, tiles keep identity),
"none" (everything 1).  Heights follow each factor's recorded orientation
(minimal matchings of resolution outputs are induced from the inputs).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Optional

from .factors import Factor
from .graphs import BandGraph, EdgeRef, SnakeError, SnakeGraph
from .laurent import LaurentPoly, ONE
from .matchings import (band_heights_cut, enumerate_matchings,
                        good_matching_lifts, height_tiles, minimal_matching)


@dataclass
class Labeling:
    """Maps factor slots to variables under a scheme."""

    scheme: str = "xy"
    assignment: Optional[Mapping] = None  # slot -> arc id (full scheme)

    def edge_weight(self, slot) -> LaurentPoly:
        if self.scheme == "xy":
            return LaurentPoly.var("x")
        if self.scheme in ("y", "f", "none"):
            return ONE
        if self.scheme == "full":
            aid = self.assignment.get(slot) if self.assignment else None
            if aid is None:
                return ONE
            return LaurentPoly.var(f"x{aid}")
        raise SnakeError(f"unknown scheme {self.scheme}")

    def tile_cross(self, slot) -> LaurentPoly:
        if self.scheme == "xy":
            return LaurentPoly.var("x")
        if self.scheme in ("y", "f", "none"):
            return ONE
        if self.scheme == "full":
            aid = self.assignment.get(slot) if self.assignment else None
            if aid is None:
                return ONE
            return LaurentPoly.var(f"x{aid}")
        raise SnakeError(f"unknown scheme {self.scheme}")

    def tile_height(self, slot) -> LaurentPoly:
        if self.scheme in ("xy", "y"):
            return LaurentPoly.var("y")
        if self.scheme == "none":
            return ONE
        if self.scheme == "f":
            return LaurentPoly.var(f"y{slot}" if not isinstance(slot, tuple)
                                   else "y" + repr(slot))
        if self.scheme == "full":
            aid = self.assignment.get(slot) if self.assignment else None
            if aid is None:
                return ONE
            return LaurentPoly.var(f"y{aid}")
        raise SnakeError(f"unknown scheme {self.scheme}")


_SCHEME_CACHE: dict = {}


def laurent_factor(f: Factor, lab: Labeling) -> LaurentPoly:
    """L(G) = (1/cross) sum_P x(P) y(P) over (good) perfect matchings."""
    key = None
    if lab.scheme in ("xy", "y", "none"):
        key = (f.graph, f.flip, lab.scheme)
        hit = _SCHEME_CACHE.get(key)
        if hit is not None:
            return hit
        out = _laurent_factor_raw(f, lab)
        if len(_SCHEME_CACHE) > 100000:
            _SCHEME_CACHE.clear()
        _SCHEME_CACHE[key] = out
        return out
    return _laurent_factor_raw(f, lab)


def _laurent_factor_raw(f: Factor, lab: Labeling) -> LaurentPoly:
    if f.is_edge:
        return lab.edge_weight(f.edge_slots.get(f.graph.edge_ref()))
    if f.is_band:
        return _laurent_band(f, lab)
    g: SnakeGraph = f.graph
    cross = ONE
    for i in range(1, g.d + 1):
        cross = cross * lab.tile_cross(f.tile_slots.get(i))
    total = LaurentPoly.zero()
    for P in enumerate_matchings(g):
        term = ONE
        for e in P:
            term = term * lab.edge_weight(f.edge_slots.get(e))
        for j in height_tiles(g, P, f.flip):
            term = term * lab.tile_height(f.tile_slots.get(j))
        total = total + term
    return total.div_monomial(cross) if cross != ONE else total


def _band_cut_flip(band: BandGraph, cut_index: int, hint_flip: bool) -> bool:
    """Flip for the cut snake so its signs realize the band's orientation."""
    sn, ca, cb, edge_map = band.cut_at(cut_index)
    ref = sn.tile_edge(1, "S")
    cls = edge_map[ref]
    want = band.cut.sign(cls, hint_flip)
    return sn.sign(ref) != want


def _laurent_band(f: Factor, lab: Labeling) -> LaurentPoly:
    band: BandGraph = f.graph
    goods = good_matching_lifts(band)
    cut = band_heights_cut(band)
    flip = _band_cut_flip(band, cut, f.flip)
    cross = ONE
    for i in range(1, band.d + 1):
        cross = cross * lab.tile_cross(f.tile_slots.get(i))
    total = LaurentPoly.zero()
    for P, lifts in goods.items():
        lift = lifts[cut]
        term = ONE
        for e in P:
            term = term * lab.edge_weight(f.edge_slots.get(e))
        for k in height_tiles(lift.snake, lift.lifted, flip):
            term = term * lab.tile_height(
                f.tile_slots.get(lift.tile_map[k - 1]))
        total = total + term
    return total.div_monomial(cross) if cross != ONE else total


def laurent_element(x, lab: Labeling) -> LaurentPoly:
    """Linear/multiplicative extension of L to ring elements."""
    total = LaurentPoly.zero()
    for coeff, factors in x:
        term = LaurentPoly.const(coeff)
        for f in factors:
            term = term * laurent_factor(f, lab)
        total = total + term
    return total


def phi(x, scheme: str = "xy", assignment=None) -> LaurentPoly:
    """The matching generating function homomorphism (phi-bar on factors)."""
    from .resolutions import RingElement

    if isinstance(x, Factor):
        x = RingElement.of(x)
    elif not isinstance(x, RingElement):
        from .factors import fresh_factor

        x = RingElement.of(fresh_factor(x))
    return laurent_element(x, Labeling(scheme, assignment))
