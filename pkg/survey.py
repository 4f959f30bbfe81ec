"""Calibration survey: count-identity oracle over exhaustive small inputs."""
import sys
import itertools

sys.path.insert(0, "src")
from snakecalc.graphs import (SnakeGraph, BandGraph, band_from, build_snake,
                              SnakeError)
from snakecalc.overlaps import (find_overlaps, find_self_overlaps,
                                is_crossing)
from snakecalc.resolutions import resolve

def all_snakes(dmax):
    for d in range(1, dmax + 1):
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

def check(kind_filter=None, max_total=9, self_max=7, verbose_fail=12):
    ok = bad = err = 0
    fails = []
    # self overlaps
    for g in all_snakes(self_max):
        for o in find_self_overlaps(g):
            if kind_filter and o.kind != kind_filter:
                continue
            if not is_crossing(o, g):
                continue
            try:
                r = resolve(o, g)
                l, a, b = r.counts()
                if l == a + b:
                    ok += 1
                else:
                    bad += 1
                    if len(fails) < verbose_fail:
                        fails.append(("self_snake", g.dirs, o, (l, a, b), r))
            except (SnakeError, AssertionError) as e:
                err += 1
                if len(fails) < verbose_fail:
                    fails.append(("self_snake ERR", g.dirs, o, str(e), None))
    for bb in all_bands(self_max):
        for o in find_self_overlaps(bb):
            if kind_filter and o.kind != kind_filter:
                continue
            if not is_crossing(o, bb):
                continue
            try:
                r = resolve(o, bb)
                l, a, b = r.counts()
                if l == a + b:
                    ok += 1
                else:
                    bad += 1
                    if len(fails) < verbose_fail:
                        fails.append(("self_band", bb.cut.dirs + '/' + bb.glue_side, o, (l, a, b), r))
            except (SnakeError, AssertionError) as e:
                err += 1
                if len(fails) < verbose_fail:
                    fails.append(("self_band ERR", bb.cut.dirs + '/' + bb.glue_side, o, str(e), None))
    return ok, bad, err, fails

ok, bad, err, fails = check()
print(f"self overlaps: ok={ok} bad={bad} err={err}")
for f in fails:
    print(" FAIL:", f[0], f[1], (f[2].s, f[2].t, f[2].s2, f[2].t2, f[2].direction, f[2].whole_graph), f[3])
    if f[4]: print("   res:", f[4].term34, "|", f[4].term56)
