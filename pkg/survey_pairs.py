"""Count-identity survey for pair crossings and graftings."""
import sys, itertools, random
sys.path.insert(0, "src")
from snakecalc.graphs import (SnakeGraph, BandGraph, band_from, build_snake,
                              SnakeError)
from snakecalc.overlaps import find_overlaps, is_crossing
from snakecalc.resolutions import (resolve, graft_snake_snake,
                                   graft_snake_on_band, self_graft,
                                   RingElement)
from snakecalc.resolutions import _xy_consistent

def all_snakes(dmax, dmin=1):
    for d in range(dmin, dmax + 1):
        for dirs in itertools.product("UR", repeat=d - 1):
            yield SnakeGraph("".join(dirs))

def all_bands(dmax):
    seen = set()
    for g in all_snakes(dmax):
        for side in "SW":
            b = BandGraph(g, side)
            k = b.canonical_word()
            if k not in seen:
                seen.add(k)
                yield b

mode = sys.argv[1] if len(sys.argv) > 1 else "ss"
N = int(sys.argv[2]) if len(sys.argv) > 2 else 5

ok = bad = err = 0
fails = []

def record(tag, r):
    global ok, bad, err
    l, a, b = r.counts()
    if l == a + b and _xy_consistent(r.lhs, r.term34, r.term56):
        ok += 1
    else:
        bad += 1
        if len(fails) < 10:
            fails.append((tag, (l, a, b), repr(r.term34), repr(r.term56)))

if mode == "ss":
    snakes = list(all_snakes(N))
    for g1 in snakes:
        for g2 in snakes:
            if g1.d + g2.d > N + 3:
                continue
            for o in find_overlaps(g1, g2):
                if not is_crossing(o, g1, g2):
                    continue
                try:
                    record((g1.dirs, g2.dirs, o.s, o.t, o.s2, o.t2,
                            o.direction), resolve(o, g1, g2))
                except (SnakeError, AssertionError) as e:
                    err += 1
                    if len(fails) < 10:
                        fails.append(((g1.dirs, g2.dirs, o.s, o.t, o.s2,
                                       o.t2, o.direction), "ERR", str(e)))
elif mode == "sb":
    for g1 in all_snakes(N):
        for b2 in all_bands(N):
            if g1.d + b2.d > N + 3:
                continue
            for o in find_overlaps(g1, b2):
                if not is_crossing(o, g1, b2):
                    continue
                try:
                    record((g1.dirs, b2.cut.dirs + "/" + b2.glue_side,
                            o.s, o.t, o.t2, o.direction, o.whole_graph),
                           resolve(o, g1, b2))
                except (SnakeError, AssertionError) as e:
                    err += 1
                    if len(fails) < 10:
                        fails.append(((g1.dirs,
                                       b2.cut.dirs + "/" + b2.glue_side,
                                       o.s, o.t, o.t2, o.direction,
                                       o.whole_graph), "ERR", str(e)))
elif mode == "bb":
    bands = list(all_bands(N))
    for b1 in bands:
        for b2 in bands:
            if b1.d + b2.d > N + 2:
                continue
            for o in find_overlaps(b1, b2):
                if not is_crossing(o, b1, b2):
                    continue
                try:
                    record((b1.cut.dirs + "/" + b1.glue_side,
                            b2.cut.dirs + "/" + b2.glue_side,
                            o.t, o.t2, o.direction, o.whole_graph),
                           resolve(o, b1, b2))
                except (SnakeError, AssertionError) as e:
                    err += 1
                    if len(fails) < 10:
                        fails.append(((b1.cut.dirs + b1.glue_side,
                                       b2.cut.dirs + b2.glue_side, o.t,
                                       o.t2, o.direction, o.whole_graph),
                                      "ERR", str(e)))
elif mode == "graft":
    for g1 in all_snakes(N):
        for g2 in all_snakes(N):
            if g1.d + g2.d > N + 2:
                continue
            for side in ("N", "E"):
                try:
                    record((g1.dirs, g2.dirs, side),
                           graft_snake_snake(g1, g2, side))
                except (SnakeError, AssertionError) as e:
                    err += 1
                    if len(fails) < 10:
                        fails.append(((g1.dirs, g2.dirs, side), "ERR",
                                      str(e)))
elif mode == "graftb":
    for b1 in all_bands(N):
        for g2 in all_snakes(N):
            if b1.d + g2.d > N + 2:
                continue
            if b1.classify() != "Unpunctured":
                continue
            try:
                record((b1.cut.dirs + "/" + b1.glue_side, g2.dirs),
                       graft_snake_on_band(b1, g2))
            except (SnakeError, AssertionError) as e:
                err += 1
                if len(fails) < 10:
                    fails.append(((b1.cut.dirs + "/" + b1.glue_side,
                                   g2.dirs), "ERR", str(e)))
    # single-edge graftings, punctured allowed
    for b1 in all_bands(N):
        try:
            record((b1.cut.dirs + "/" + b1.glue_side, "EDGE"),
                   graft_snake_on_band(b1, SnakeGraph(is_edge=True)))
        except (SnakeError, AssertionError) as e:
            err += 1
            if len(fails) < 10:
                fails.append(((b1.cut.dirs + "/" + b1.glue_side, "EDGE"),
                              "ERR", str(e)))
elif mode == "selfgraft":
    for g1 in all_snakes(N):
        for e in g1.sw() or [None]:
            try:
                record((g1.dirs, str(e)), self_graft(g1, e))
            except (SnakeError, AssertionError) as ex:
                err += 1
                if len(fails) < 10:
                    fails.append(((g1.dirs, str(e)), "ERR", str(ex)))

print(f"{mode}: ok={ok} bad={bad} err={err}")
for f in fails:
    print("  FAIL", f)
