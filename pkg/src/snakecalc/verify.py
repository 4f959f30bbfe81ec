"""Resolution verification: matching counts, full-label Laurent identities
with skein coefficients, and the specializations.

Full labelings are generated per instance: fresh arc identities for every
slot, unified by (a) the identifications the construction records, (b) the
geometric coherence relations of snake/band graphs from surfaces (the free
SW / NE boundary edge of a tile carries the x-label of the neighbouring
tile's face), and (c) label preservation across the overlap embeddings.
The skein coefficient is determined by the division oracle: the residual
of the 34-term must be a single +-monomial times the 56-term's Laurent
polynomial.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional

from .factors import Factor
from .graphs import BandGraph, EdgeRef, SnakeError, SnakeGraph
from .laurent import LaurentPoly, ONE
from .overlaps import OPPOSITE, SAME, Overlap
from .poly import Labeling, laurent_element
from .resolutions import Resolution, RingElement


class _UF:
    def __init__(self):
        self.p = {}

    def find(self, x):
        r = self.p.setdefault(x, x)
        if r != x:
            r = self.p[x] = self.find(r)
        return r

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.p[ra] = rb


def _coherence_merges(f: Factor) -> list:
    """Geometric label relations inside one lhs factor."""
    out = []
    if f.is_edge:
        return out
    if f.is_band:
        band: BandGraph = f.graph
        g = band.cut
        d = band.d
        interior = {band.edge_class(e) for e in band.interior_edges()}
        for j in range(1, d + 1):
            for side in ("S", "W"):
                e = band.edge_class(g.tile_edge(j, side))
                if e not in interior:
                    out.append((f.edge_slots[e],
                                f.tile_slots[((j - 2) % d) + 1]))
            for side in ("N", "E"):
                e = band.edge_class(g.tile_edge(j, side))
                if e not in interior:
                    out.append((f.edge_slots[e],
                                f.tile_slots[(j % d) + 1]))
        return out
    g: SnakeGraph = f.graph
    d = g.d
    interior = set(g.interior_edges())
    for j in range(1, d + 1):
        for side in ("S", "W"):
            e = g.tile_edge(j, side)
            if e not in interior and j >= 2:
                out.append((f.edge_slots[e], f.tile_slots[j - 1]))
        for side in ("N", "E"):
            e = g.tile_edge(j, side)
            if e not in interior and j <= d - 1:
                out.append((f.edge_slots[e], f.tile_slots[j + 1]))
    return out


def _overlap_merges(r: Resolution) -> list:
    """Label preservation across the overlap embeddings."""
    from .factors import band_view, snake_view

    o = r.overlap
    if o is None:
        return []
    out = []
    if o.kind in ("snake_snake", "snake_band", "band_band"):
        from .resolutions import _normalized_pair

        fa, fb = r.inputs
        fa2, fb2, v1, v2, on = _normalized_pair(fa, fb, o)
        n = on.t - on.s + 1
        for k in range(n):
            i, j = on.s + k, on.s2 + k
            out.append((v1.factor.tile_slots[i], v2.factor.tile_slots[j]))
            for side in ("S", "W", "N", "E"):
                s1 = v1.factor.edge_slots.get(v1.snake.tile_edge(i, side))
                s2 = v2.factor.edge_slots.get(v2.snake.tile_edge(j, side))
                if s1 is not None and s2 is not None:
                    out.append((s1, s2))
        if o.kind == "snake_band" and o.whole_graph:
            # the extended window keeps matching the band periodically
            es, et = on.ext_s, on.ext_t
            d2 = v2.d
            for k in range(et - es + 1):
                i = es + k
                j = ((on.s2 - (on.s - es) + k - 1) % d2) + 1
                out.append((v1.factor.tile_slots[i],
                            v2.factor.tile_slots[j]))
        return out
    # self overlaps: both embeddings inside one view
    f = r.inputs[0]
    if o.kind == "self_snake":
        v = snake_view(f)
    else:
        v = band_view(f, o.cut_a)
    d = v.d
    n = o.t - o.s + 1
    for k in range(n):
        i = o.s + k
        if o.direction == SAME:
            j = o.s2 + k
            smap = {"S": "S", "W": "W", "N": "N", "E": "E"}
        else:
            j = o.t2 - k
            smap = {"S": "N", "N": "S", "W": "E", "E": "W"}
        j = ((j - 1) % d) + 1
        out.append((v.factor.tile_slots[i], v.factor.tile_slots[j]))
        for side in ("S", "W", "N", "E"):
            s1 = v.factor.edge_slots.get(v.snake.tile_edge(i, side))
            s2 = v.factor.edge_slots.get(v.snake.tile_edge(j, smap[side]))
            if s1 is not None and s2 is not None:
                out.append((s1, s2))
    return out


def assign_labels(r: Resolution) -> dict:
    """slot -> arc id, after unifying construction + geometric constraints."""
    uf = _UF()
    slots = []
    for coeff, factors in r.lhs:
        for f in factors:
            slots += list(f.edge_slots.values())
            slots += list(f.tile_slots.values())
            for m in _coherence_merges(f):
                uf.union(*m)
    for m in r.merges:
        uf.union(*m)
    for m in getattr(r, "geo_merges", []) or []:
        uf.union(*m)
    for m in _overlap_merges(r):
        uf.union(*m)
    classes = {}
    assign = {}
    for s in slots:
        root = uf.find(s)
        if root not in classes:
            classes[root] = f"a{len(classes) + 1}"
        assign[s] = classes[root]
    return assign


def label_degenerate(r: Resolution, assignment: dict) -> bool:
    """True when the unified labels force a punctured-type configuration
    (equal adjacent tile labels, or an interior edge labelled like one of
    its tiles), for which the unpunctured full-label theorem is silent."""
    for coeff, factors in r.lhs:
        for f in factors:
            if f.is_edge:
                continue
            if f.is_band:
                band: BandGraph = f.graph
                d = band.d
                tiles = [assignment.get(f.tile_slots[i])
                         for i in range(1, d + 1)]
                for i in range(d):
                    if tiles[i] == tiles[(i + 1) % d]:
                        return True
                for i in range(1, d + 1):
                    e = band.edge_class(band.interior_edge(i))
                    cls = assignment.get(f.edge_slots.get(e))
                    lo = tiles[i - 1]
                    hi = tiles[i % d]
                    if cls is not None and cls in (lo, hi):
                        return True
            else:
                g: SnakeGraph = f.graph
                d = g.d
                tiles = [assignment.get(f.tile_slots[i])
                         for i in range(1, d + 1)]
                for i in range(d - 1):
                    if tiles[i] == tiles[i + 1]:
                        return True
                for i in range(1, d):
                    cls = assignment.get(f.edge_slots.get(g.interior(i)))
                    if cls is not None and cls in (tiles[i - 1], tiles[i]):
                        return True
    return False


@dataclass
class VerifyReport:
    kind: str
    count_ok: bool
    counts: tuple
    laurent_ok: bool
    y34: Optional[LaurentPoly]
    y56: Optional[LaurentPoly]
    spec_ok: dict
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.count_ok and self.laurent_ok and all(
            self.spec_ok.values())


def _solve_coefficients(A: LaurentPoly, B: LaurentPoly, C: LaurentPoly):
    """Find monomials with A = y34*B + y56*C, preferring y34 = 1."""
    D = A - B
    if not D.terms:
        if not C.terms:
            return ONE, ONE
        return None
    if C.terms:
        q = D.divide_exact(C)
        if q is not None and q.is_monomial():
            return ONE, q
    if B.terms:
        q = (A - C).divide_exact(B)
        if q is not None and q.is_monomial():
            return q, ONE
    return None


def verify_resolution(r: Resolution, schemes=("full", "xy", "y", "none")
                      ) -> VerifyReport:
    la, lb, lc = r.counts()
    count_ok = la == lb + lc
    assignment = assign_labels(r)
    y34 = y56 = None
    laurent_ok = True
    spec_ok = {}
    detail = ""
    degenerate = label_degenerate(r, assignment)
    if degenerate:
        schemes = tuple(s for s in schemes if s != "full")
        detail = "punctured-type labels: full-label check not applicable"
    for scheme in schemes:
        lab = Labeling(scheme, assignment)
        A = laurent_element(r.lhs, lab)
        B = laurent_element(r.term34, lab)
        C = laurent_element(r.term56, lab)
        sol = _solve_coefficients(A, B, C)
        if sol is None:
            if scheme == "full":
                laurent_ok = False
                detail = f"full-label residual not monomial: {A - B}"
            else:
                spec_ok[scheme] = False
            continue
        if scheme == "full":
            y34, y56 = sol
            # skein coefficients are +-(pure y-monomials)
            for m in sol:
                c, e = m.as_monomial()
                if abs(c) != 1 or any(v.startswith("x") for v, _ in e):
                    laurent_ok = False
                    detail = f"coefficient not a +-y-monomial: {m}"
        else:
            spec_ok[scheme] = True
    return VerifyReport(r.kind, count_ok, (la, lb, lc), laurent_ok,
                        y34, y56, spec_ok, detail)
