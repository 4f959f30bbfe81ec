"""Full-label division-oracle survey over small crossing instances."""
import sys, itertools
sys.path.insert(0, "src")
from snakecalc.graphs import SnakeGraph, BandGraph, SnakeError
from snakecalc.overlaps import find_overlaps, find_self_overlaps, is_crossing
from snakecalc.resolutions import (resolve, graft_snake_snake,
                                   graft_snake_on_band, self_graft)
from snakecalc.verify import verify_resolution

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

mode = sys.argv[1]
N = int(sys.argv[2]) if len(sys.argv) > 2 else 5
ok = bad = skipped = 0
fails = []

def visit(tag, r):
    global ok, bad, skipped
    rep = verify_resolution(r)
    if rep.ok:
        ok += 1
        if rep.detail:
            skipped += 1
    else:
        bad += 1
        if len(fails) < 8:
            fails.append((tag, rep.counts, rep.detail, rep.spec_ok))

if mode == "self":
    for g in all_snakes(N, 2):
        for o in find_self_overlaps(g):
            if is_crossing(o, g):
                visit((g.dirs, o.s, o.t, o.s2, o.t2, o.direction[0]),
                      resolve(o, g))
    for b in all_bands(N):
        for o in find_self_overlaps(b):
            if is_crossing(o, b):
                visit((b.cut.dirs + "/" + b.glue_side, o.s, o.t, o.s2,
                       o.t2, o.direction[0], o.whole_graph),
                      resolve(o, b))
elif mode == "ss":
    snakes = list(all_snakes(N))
    for g1 in snakes:
        for g2 in snakes:
            if g1.d + g2.d > N + 2:
                continue
            for o in find_overlaps(g1, g2):
                if is_crossing(o, g1, g2):
                    visit((g1.dirs, g2.dirs, o.s, o.t, o.s2, o.t2,
                           o.direction[0]), resolve(o, g1, g2))
elif mode == "sb":
    for g1 in all_snakes(N):
        for b2 in all_bands(N):
            if g1.d + b2.d > N + 1:
                continue
            for o in find_overlaps(g1, b2):
                if is_crossing(o, g1, b2):
                    visit((g1.dirs, b2.cut.dirs, o.s, o.t, o.t2,
                           o.direction[0]), resolve(o, g1, b2))
elif mode == "bb":
    bands = list(all_bands(N))
    for b1 in bands:
        for b2 in bands:
            if b1.d + b2.d > N + 1:
                continue
            for o in find_overlaps(b1, b2):
                if is_crossing(o, b1, b2):
                    visit((b1.cut.dirs, b2.cut.dirs, o.t, o.t2,
                           o.direction[0]), resolve(o, b1, b2))
elif mode == "graft":
    for g1 in all_snakes(N):
        for g2 in all_snakes(N):
            if g1.d + g2.d > N + 1:
                continue
            for side in ("N", "E"):
                try:
                    visit((g1.dirs, g2.dirs, side),
                          graft_snake_snake(g1, g2, side))
                except SnakeError:
                    pass
elif mode == "graftb":
    for b1 in all_bands(N):
        for g2 in list(all_snakes(N)) + [SnakeGraph(is_edge=True)]:
            if b1.d + g2.d > N + 1:
                continue
            try:
                visit((b1.cut.dirs, g2.dirs if not g2.is_edge else "EDGE"),
                      graft_snake_on_band(b1, g2))
            except SnakeError:
                pass
elif mode == "selfgraft":
    for g1 in all_snakes(N):
        for e in g1.sw() or [None]:
            try:
                visit((g1.dirs, str(e)), self_graft(g1, e))
            except SnakeError:
                pass

print(f"full-{mode}: ok={ok} (skipped-full={skipped}) bad={bad}")
for f in fails:
    print("  FAIL", f)
