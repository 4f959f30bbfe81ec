"""Fit the adjacent-case (s2 = t+1, t2 < d) self-snake 56 rule against
count + XY oracles, with the 34-flip as part of the search."""
import sys, itertools
sys.path.insert(0, "src")
from snakecalc.graphs import SnakeGraph, SnakeError
from snakecalc.overlaps import find_self_overlaps, is_crossing, SAME
from snakecalc.resolutions import (RingElement, _close_chain, _free_ne,
                                   _free_sw, _interior)
from snakecalc.factors import (fresh_factor, snake_view, Piece,
                               assemble_snake, edge_factor)
from snakecalc.poly import phi, laurent_element, Labeling
from snakecalc.laurent import LaurentPoly

LAB = Labeling("xy")

def all_snakes(dmax, dmin=2):
    for d in range(dmin, dmax + 1):
        for dirs in itertools.product("UR", repeat=d - 1):
            yield SnakeGraph("".join(dirs))

def build_t34(g, o, flipmode):
    f = fresh_factor(g)
    v = snake_view(f)
    s, t, s2, t2 = o.s, o.t, o.s2, o.t2
    d = g.d
    e_j = _interior(v, t2)
    side = e_j.side_of(g.cell(t2))
    asm3 = assemble_snake([Piece(v, 1, t, j_out=g.tile_edge(t, side)),
                           Piece(v, t2 + 1, d, j_in=e_j)])
    f3 = asm3.factor
    if flipmode == 2:
        # orientation follows the second piece: junction sign = f(e_t2)
        f3.flip = f3.graph.interior_sign(t) != g.interior_sign(t2)
    asm4 = _close_chain([Piece(v, t + 1, t2)], _interior(v, t))
    return RingElement.of(f3, asm4.factor), v, f

def candidates(g, v, f):
    d = g.d
    out = {}
    for a in range(1, d + 1):
        for b in range(a, d + 1):
            for fl in (False, True):
                fac = assemble_snake([Piece(v, a, b)]).factor
                fac.flip = fl
                out[("sl", a, b, fl)] = RingElement.of(fac)
    for a in range(1, d):
        for b in range(a + 2, d + 1):
            for fl in (False, True):
                try:
                    p1 = Piece(v, 1, a, j_out=_free_ne(v, a))
                    p2 = Piece(v, b, d, j_in=_free_sw(v, b))
                    fac = assemble_snake([p1, p2]).factor
                    fac.flip = fl
                    out[("join", a, b, fl)] = RingElement.of(fac)
                except SnakeError:
                    pass
    out[("edge",)] = RingElement.of(edge_factor())
    return out

rows = []
for g in all_snakes(int(sys.argv[1]) if len(sys.argv) > 1 else 6):
    for o in find_self_overlaps(g):
        if o.direction != SAME or o.s2 != o.t + 1 or o.t2 >= g.d:
            continue
        if not is_crossing(o, g):
            continue
        A = phi(g)
        nmatch = A.substitute({"x": 1, "y": 1}).terms.get((), 0)
        best = {}
        for fm in (1, 2):
            t34, v, f = build_t34(g, o, fm)
            B = laurent_element(t34, LAB)
            n34 = B.substitute({"x": 1, "y": 1}).terms.get((), 0)
            resid = A - B
            surv = []
            if not resid.terms:
                surv.append(("ZERO",))
            for key, cand in candidates(g, v, f).items():
                C = laurent_element(cand, LAB)
                ncand = C.substitute({"x": 1, "y": 1}).terms.get((), 0)
                q = resid.divide_exact(C)
                if q is None or not q.is_monomial():
                    continue
                c0, e0 = q.as_monomial()
                if abs(c0) != 1:
                    continue
                if nmatch != n34 + c0 * ncand * (1 if c0 > 0 else -1) * (1 if c0 > 0 else -1):
                    pass
                surv.append((key, c0, dict(e0).get("y", 0)))
            best[fm] = surv
        rows.append((g.dirs, (o.s, o.t, o.s2, o.t2), best))

for g, coords, best in rows:
    print(f"{g:8s} {str(coords):15s}")
    for fm, surv in best.items():
        print(f"   f3flip={fm}: {surv[:6]}")
