"""Snake graphs, band graphs, sign functions, and the slicing/gluing primitives.

A snake graph is a chain of unit lattice tiles, each glued north or east of
its predecessor.  We encode it by a direction word over {U, R} of length
d - 1 (d = tile count); the empty word is a single tile, and there is a
degenerate "single edge" graph with d = 0.  Edges are identified by their
two lattice endpoints, so slicing and gluing are coordinate arithmetic.

A band graph (ouroboros) is a snake graph with a south-or-west edge of the
first tile identified with the unique same-sign north-or-east edge of the
last tile; small bands are genuinely multigraphs (parallel edges, a loop
for the one-tile band), so band edges are equivalence classes of snake
edges and band vertices are fused lattice points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Optional, Sequence

Vertex = tuple[int, int]

UP = "U"
RIGHT = "R"
SIDES = ("S", "W", "N", "E")

PLUS = "+"
MINUS = "-"


class SnakeError(ValueError):
    """Malformed snake/band construction (domain error)."""


def flip_sign(s: str) -> str:
    return MINUS if s == PLUS else PLUS


@dataclass(frozen=True, order=True)
class EdgeRef:
    """An undirected lattice unit segment, canonically ordered endpoints.

    Two EdgeRefs are equal iff they denote the same segment, which makes
    N of tile (x, y) and S of tile (x, y+1) the same object for free.
    """

    a: Vertex
    b: Vertex

    @staticmethod
    def seg(p: Vertex, q: Vertex) -> "EdgeRef":
        return EdgeRef(min(p, q), max(p, q))

    @staticmethod
    def of(cell: Vertex, side: str) -> "EdgeRef":
        x, y = cell
        if side == "S":
            return EdgeRef.seg((x, y), (x + 1, y))
        if side == "N":
            return EdgeRef.seg((x, y + 1), (x + 1, y + 1))
        if side == "W":
            return EdgeRef.seg((x, y), (x, y + 1))
        if side == "E":
            return EdgeRef.seg((x + 1, y), (x + 1, y + 1))
        raise SnakeError(f"bad side {side!r}")

    @property
    def horizontal(self) -> bool:
        return self.a[1] == self.b[1]

    def endpoints(self) -> tuple[Vertex, Vertex]:
        return (self.a, self.b)

    def start(self) -> Vertex:
        """Start point under the left-right orientation (right/upwards)."""
        return self.a

    def side_of(self, cell: Vertex) -> str:
        """Which side of `cell` this edge is, or raise."""
        for side in SIDES:
            if EdgeRef.of(cell, side) == self:
                return side
        raise SnakeError(f"{self} is not an edge of tile at {cell}")


def _check_dirs(dirs: str) -> str:
    for ch in dirs:
        if ch not in (UP, RIGHT):
            raise SnakeError(f"invalid direction character {ch!r}")
    return dirs


@dataclass(frozen=True)
class SnakeGraph:
    """Embedded snake graph: direction word + lattice origin of tile 1.

    ``is_edge`` models the one-edge snake graph (d = 0, a single EdgeRef,
    no tiles); slices keep their parent's coordinates so their EdgeRefs
    map back literally.
    """

    dirs: str = ""
    is_edge: bool = False
    origin: Vertex = (0, 0)

    def __post_init__(self) -> None:
        _check_dirs(self.dirs)
        if self.is_edge and self.dirs:
            raise SnakeError("single-edge snake graph has no direction word")

    # -- basic geometry -------------------------------------------------

    @property
    def d(self) -> int:
        return 0 if self.is_edge else len(self.dirs) + 1

    def cells(self) -> list[Vertex]:
        out = [self.origin]
        for ch in self.dirs:
            x, y = out[-1]
            out.append((x, y + 1) if ch == UP else (x + 1, y))
        return [] if self.is_edge else out

    def cell(self, i: int) -> Vertex:
        """Cell of tile i (1-indexed)."""
        if not 1 <= i <= self.d:
            raise SnakeError(f"tile index {i} out of range 1..{self.d}")
        return self.cells()[i - 1]

    def tile_edge(self, i: int, side: str) -> EdgeRef:
        return EdgeRef.of(self.cell(i), side)

    def edge_ref(self) -> EdgeRef:
        """The unique edge of the single-edge graph."""
        if not self.is_edge:
            raise SnakeError("edge_ref only defined for the single-edge graph")
        x, y = self.origin
        return EdgeRef.seg((x, y), (x + 1, y))

    def interior(self, i: int) -> EdgeRef:
        """Interior edge e_i shared by tiles i and i+1 (1 <= i <= d-1)."""
        if not 1 <= i <= self.d - 1:
            raise SnakeError(f"interior edge index {i} out of range")
        side = "N" if self.dirs[i - 1] == UP else "E"
        return self.tile_edge(i, side)

    def interior_edges(self) -> list[EdgeRef]:
        return [self.interior(i) for i in range(1, self.d)]

    def edges(self) -> list[EdgeRef]:
        if self.is_edge:
            return [self.edge_ref()]
        seen: dict[EdgeRef, None] = {}
        for c in self.cells():
            for side in SIDES:
                seen.setdefault(EdgeRef.of(c, side), None)
        return list(seen)

    def vertices(self) -> list[Vertex]:
        if self.is_edge:
            return list(self.edge_ref().endpoints())
        seen: dict[Vertex, None] = {}
        for c in self.cells():
            x, y = c
            for v in ((x, y), (x + 1, y), (x, y + 1), (x + 1, y + 1)):
                seen.setdefault(v, None)
        return list(seen)

    def boundary_edges(self) -> list[EdgeRef]:
        inner = set(self.interior_edges())
        return [e for e in self.edges() if e not in inner]

    def sw(self) -> list[EdgeRef]:
        """The set SW(G): south and west edges of the first tile (empty for an edge)."""
        if self.is_edge:
            return []
        return [self.tile_edge(1, "S"), self.tile_edge(1, "W")]

    def ne(self) -> list[EdgeRef]:
        if self.is_edge:
            return []
        return [self.tile_edge(self.d, "N"), self.tile_edge(self.d, "E")]

    def sw_boundary(self) -> EdgeRef:
        """The unique SW edge that is a boundary edge (d >= 2), or either for d = 1."""
        cand = [e for e in self.sw() if e not in set(self.interior_edges())]
        return cand[0] if len(cand) == 1 else cand[0]

    def _edge_tiles(self) -> dict:
        cached = _ET_CACHE.get(self)
        if cached is None:
            cached = {}
            for i, c in enumerate(self.cells(), start=1):
                for s in SIDES:
                    cached.setdefault(EdgeRef.of(c, s), []).append(i)
            if len(_ET_CACHE) > 50000:
                _ET_CACHE.clear()
            _ET_CACHE[self] = cached
        return cached

    def tiles_of_edge(self, e: EdgeRef) -> list[int]:
        return self._edge_tiles().get(e, [])

    # -- sign function ---------------------------------------------------

    def tile_sigma(self, i: int, flipped: bool = False) -> str:
        """Sign of the N (= W) edge of tile i under the canonical seed.

        Seed: f(S of tile 1) = '-'; the tile parity alternates the sign.
        """
        s = PLUS if i % 2 == 1 else MINUS
        return flip_sign(s) if flipped else s

    def sign(self, e: EdgeRef, flipped: bool = False) -> str:
        if self.is_edge:
            raise SnakeError("single-edge graph carries no sign function")
        for i in self.tiles_of_edge(e):
            side = e.side_of(self.cell(i))
            sig = self.tile_sigma(i, flipped)
            return sig if side in ("N", "W") else flip_sign(sig)
        raise SnakeError(f"{e} is not an edge of this graph")

    def interior_sign(self, i: int, flipped: bool = False) -> str:
        return self.sign(self.interior(i), flipped)

    # -- slicing and friends ----------------------------------------------

    def slice(self, i: int, j: int) -> "SnakeGraph":
        """G[i, j], keeping parent coordinates (records the offset via origin)."""
        if not (1 <= i <= j <= self.d):
            raise SnakeError(f"bad slice [{i},{j}] of a {self.d}-tile graph")
        return SnakeGraph(self.dirs[i - 1:j - 1], origin=self.cell(i))

    def remove_pred(self, e: EdgeRef) -> "SnakeGraph":
        """G with the predecessors of e removed: G[i+1, d] for e = e_i, {e} for e in NE."""
        for i in range(1, self.d):
            if self.interior(i) == e:
                return self.slice(i + 1, self.d)
        if e in self.ne():
            return SnakeGraph(is_edge=True, origin=min(e.endpoints()))
        raise SnakeError("remove_pred expects an interior or NE edge")

    def remove_succ(self, e: EdgeRef) -> "SnakeGraph":
        for i in range(1, self.d):
            if self.interior(i) == e:
                return self.slice(1, i)
        if e in self.sw():
            return SnakeGraph(is_edge=True, origin=min(e.endpoints()))
        raise SnakeError("remove_succ expects an interior or SW edge")

    def opposite(self) -> "SnakeGraph":
        """Opposite sequence of tiles: 180-degree rotation, word reversed."""
        if self.is_edge:
            return SnakeGraph(is_edge=True)
        return SnakeGraph(self.dirs[::-1])

    # -- isomorphism -----------------------------------------------------

    def shape_key(self, mode: str = "embedded") -> tuple:
        if self.is_edge:
            return ("edge",)
        w = self.dirs
        rev = w[::-1]
        if mode == "embedded":
            return ("snake", min(w, rev))
        swap = w.translate(str.maketrans("UR", "RU"))
        swaprev = swap[::-1]
        return ("snake", min(w, rev, swap, swaprev))

    def iso(self, other: "SnakeGraph", mode: str = "embedded") -> bool:
        return self.shape_key(mode) == other.shape_key(mode)


def build_snake(word: str) -> SnakeGraph:
    """Parse a direction word ("" = single tile, "EDGE" sentinel = one edge)."""
    if word == "EDGE":
        return SnakeGraph(is_edge=True)
    return SnakeGraph(_check_dirs(word))


def straight(d: int) -> SnakeGraph:
    """Straight snake graph with d tiles whose first interior edge has sign +."""
    if d < 1:
        raise SnakeError("straight graph needs at least one tile")
    return SnakeGraph(UP * (d - 1))


def zigzag(d: int) -> SnakeGraph:
    """Complete zigzag snake graph with d tiles."""
    if d < 1:
        raise SnakeError("zigzag graph needs at least one tile")
    return SnakeGraph("".join(RIGHT if k % 2 == 0 else UP for k in range(d - 1)))


def glue(g1: SnakeGraph, e1: EdgeRef, g2: SnakeGraph, e2: EdgeRef) -> SnakeGraph:
    """Concatenate g1 and g2 along a NE edge of g1 and a SW edge of g2."""
    if g1.is_edge or g2.is_edge:
        raise SnakeError("cannot glue single-edge graphs")
    if e1 not in g1.ne():
        raise SnakeError("glue site on the first graph must be an NE edge")
    if e2 not in g2.sw():
        raise SnakeError("glue site on the second graph must be a SW edge")
    s1 = e1.side_of(g1.cell(g1.d))
    s2 = e2.side_of(g2.cell(1))
    if (s1, s2) == ("N", "S"):
        joint = UP
    elif (s1, s2) == ("E", "W"):
        joint = RIGHT
    else:
        raise SnakeError(f"incompatible glue sides {s1}/{s2}")
    return SnakeGraph(g1.dirs + joint + g2.dirs)


# -- band graphs ---------------------------------------------------------


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, x, y) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            self.parent[max(rx, ry)] = min(rx, ry)


_UF_CACHE: dict = {}
_CUT_CACHE: dict = {}
_ET_CACHE: dict = {}
_B2_CACHE: dict = {}


@dataclass(frozen=True)
class BandGraph:
    """Band graph G^b: `cut` snake graph with glue edge b in SW(tile 1).

    b is the S or W edge of the first tile; b' is the unique NE edge of the
    last tile with the same canonical sign.  Vertices x~x', y~y' are fused,
    which can cascade (the one-tile band has a loop and two vertices).
    """

    cut: SnakeGraph
    glue_side: str  # 'S' or 'W'

    def __post_init__(self) -> None:
        if self.cut.is_edge or self.cut.d < 1:
            raise SnakeError("band graph needs a snake graph with at least one tile")
        if self.glue_side not in ("S", "W"):
            raise SnakeError("glue side must be S or W")

    @property
    def d(self) -> int:
        return self.cut.d

    @property
    def b(self) -> EdgeRef:
        return self.cut.tile_edge(1, self.glue_side)

    @property
    def b2(self) -> EdgeRef:
        """The unique NE edge with the same sign as b."""
        cached = _B2_CACHE.get(self)
        if cached is not None:
            return cached
        g = self.cut
        want = g.sign(self.b)
        for side in ("N", "E"):
            e = g.tile_edge(g.d, side)
            if g.sign(e) == want:
                if len(_B2_CACHE) > 50000:
                    _B2_CACHE.clear()
                _B2_CACHE[self] = e
                return e
        raise AssertionError("unreachable: one NE edge always matches")

    # -- the quotient multigraph -----------------------------------------

    def _vertex_uf(self) -> _UnionFind:
        cached = _UF_CACHE.get(self)
        if cached is not None:
            return cached
        g = self.cut
        uf = _UnionFind()
        for v in g.vertices():
            uf.find(v)
        x = g.cell(1)  # SW vertex of tile 1
        b = self.b
        y = next(p for p in b.endpoints() if p != x)
        cx, cy = g.cell(g.d)
        y2 = (cx + 1, cy + 1)  # NE vertex of tile d
        b2 = self.b2
        x2 = next(p for p in b2.endpoints() if p != y2)
        uf.union(x, x2)
        uf.union(y, y2)
        if len(_UF_CACHE) > 50000:
            _UF_CACHE.clear()
        _UF_CACHE[self] = uf
        return uf

    def vertex_class(self, v: Vertex) -> Vertex:
        return self._vertex_uf().find(v)

    def edge_class(self, e: EdgeRef) -> EdgeRef:
        """Representative of the edge in the band (b and b' are identified)."""
        if e == self.b2:
            return self.b
        return e

    def edge_endpoints(self, e: EdgeRef) -> tuple[Vertex, Vertex]:
        uf = self._vertex_uf()
        return (uf.find(e.a), uf.find(e.b))

    def edges(self) -> list[EdgeRef]:
        return [e for e in self.cut.edges() if e != self.b2]

    def matchable_edges(self) -> list[EdgeRef]:
        """Band edges that are not loops (loops are never matchable)."""
        out = []
        for e in self.edges():
            a, b = self.edge_endpoints(e)
            if a != b:
                out.append(e)
        return out

    def vertices(self) -> list[Vertex]:
        uf = self._vertex_uf()
        return sorted({uf.find(v) for v in self.cut.vertices()})

    def interior_index(self, e: EdgeRef) -> int:
        """1..d-1 for e_i, d for the glue edge; raise if boundary."""
        for i in range(1, self.d):
            if self.cut.interior(i) == e:
                return i
        if self.edge_class(e) == self.b:
            return self.d
        raise SnakeError(f"{e} is not an interior edge of the band")

    def interior_edge(self, i: int) -> EdgeRef:
        """e_i for 1 <= i <= d-1; the glue edge class for i = d."""
        if i == self.d:
            return self.b
        return self.cut.interior(i)

    def interior_edges(self) -> list[EdgeRef]:
        return [self.interior_edge(i) for i in range(1, self.d + 1)]

    def sign_word(self) -> str:
        """Cyclic sign word (f(e_1), ..., f(e_d)) under the cut's canonical seed."""
        g = self.cut
        word = [g.interior_sign(i) for i in range(1, self.d)]
        word.append(g.sign(self.b))
        return "".join(word)

    def canonical_word(self) -> str:
        return canonical_cyclic_word(self.sign_word())

    def iso(self, other: "BandGraph") -> bool:
        return self.canonical_word() == other.canonical_word()

    # -- cutting and the universal cover ----------------------------------

    def cover_prefix(self, k: int):
        """k copies of the cut glued along the b/b' pattern.

        Returns (snake, tile_map, edge_maps) where tile_map[m] is the band
        tile index of cover tile m (1-indexed) and edge_maps[m] maps the
        sides of cover tile m back to edges of the band (class reps).
        """
        if k < 1:
            raise SnakeError("cover prefix needs k >= 1")
        g = self.cut
        b, b2 = self.b, self.b2
        flip_axis = b.horizontal != b2.horizontal

        # Transform of copy j: transpose applied j times (mod 2), then shift.
        placed_cells: list[Vertex] = []
        tile_map: list[int] = []
        side_maps: list[dict[str, EdgeRef]] = []
        base_cells = g.cells()

        def transform(pt: Vertex, transposed: bool, shift: Vertex) -> Vertex:
            x, y = pt
            if transposed:
                x, y = y, x
            return (x + shift[0], y + shift[1])

        transposed = False
        shift = (0, 0)
        SIDE_T = {"S": "W", "W": "S", "N": "E", "E": "N"}
        for copy in range(k):
            if copy > 0:
                # New copy's image of b must coincide with previous copy's
                # image of b2 (as segments).
                prev_b2 = _seg_transform(b2, transposed, shift)
                new_transposed = transposed ^ flip_axis
                nb = _seg_transform(b, new_transposed, (0, 0))
                dx = prev_b2.a[0] - nb.a[0]
                dy = prev_b2.a[1] - nb.a[1]
                transposed, shift = new_transposed, (dx, dy)
            for i, c in enumerate(base_cells, start=1):
                # cell corner after transform: transposing a unit cell keeps
                # its SW corner the transpose of the original SW corner.
                placed_cells.append(transform(c, transposed, shift))
                tile_map.append(i)
                sm = {}
                for side in SIDES:
                    src_side = SIDE_T[side] if transposed else side
                    sm[side] = self.edge_class(EdgeRef.of(c, src_side))
                side_maps.append(sm)

        dirs = []
        for p, q in zip(placed_cells, placed_cells[1:]):
            if q == (p[0], p[1] + 1):
                dirs.append(UP)
            elif q == (p[0] + 1, p[1]):
                dirs.append(RIGHT)
            else:
                raise SnakeError("band gluing does not produce a snake shape")
        origin = placed_cells[0]
        snake = SnakeGraph("".join(dirs), origin=origin)
        return snake, tile_map, side_maps

    def cut_at(self, i: int):
        """Cut the band along interior edge e_i (i = d cuts at the glue edge).

        Returns (snake, copy_a, copy_b, edge_map): copy_a/copy_b are the two
        EdgeRefs of the cut snake covering e_i (SW-side first), and edge_map
        sends every cut-snake edge to its band edge class.
        """
        if not 1 <= i <= self.d:
            raise SnakeError("cut index out of range")
        cached = _CUT_CACHE.get((self, i))
        if cached is not None:
            return cached
        cover, tile_map, side_maps = self.cover_prefix(2)
        # Cut snake = cover tiles i+1 .. i+d.
        lo, hi = i + 1, i + self.d
        snake = cover.slice(lo, hi)
        edge_map: dict[EdgeRef, EdgeRef] = {}
        for m in range(lo, hi + 1):
            c = cover.cell(m)
            for side in SIDES:
                edge_map[EdgeRef.of(c, side)] = side_maps[m - 1][side]
        target = self.interior_edge(i)
        copies = [e for e, cls in edge_map.items() if cls == target]
        sw_side = [e for e in copies if e in (snake.tile_edge(1, "S"),
                                              snake.tile_edge(1, "W"))]
        ne_side = [e for e in copies if e in (snake.tile_edge(snake.d, "N"),
                                              snake.tile_edge(snake.d, "E"))]
        if len(sw_side) != 1 or len(ne_side) != 1:
            raise AssertionError("cut copies not found where expected")
        out = (snake, sw_side[0], ne_side[0], edge_map)
        if len(_CUT_CACHE) > 50000:
            _CUT_CACHE.clear()
        _CUT_CACHE[(self, i)] = out
        return out

    def classify(self) -> str:
        """Unpunctured iff the cyclic sign word contains both signs."""
        w = self.sign_word()
        return "Unpunctured" if (PLUS in w and MINUS in w) else "PuncturedOnly"

    def annulus_counts(self) -> tuple[int, int]:
        """(p, q): numbers of + and - interior edges; errors on PuncturedOnly."""
        if self.classify() != "Unpunctured":
            raise SnakeError("punctured-only band graphs have no annulus realization")
        w = self.sign_word()
        return w.count(PLUS), w.count(MINUS)


def _seg_transform(e: EdgeRef, transposed: bool, shift: Vertex) -> EdgeRef:
    def t(p: Vertex) -> Vertex:
        x, y = p
        if transposed:
            x, y = y, x
        return (x + shift[0], y + shift[1])

    return EdgeRef.seg(t(e.a), t(e.b))


def band_from(g: SnakeGraph, glue_side: str) -> BandGraph:
    if g.is_edge:
        raise SnakeError("cannot glue the single-edge graph into a band")
    return BandGraph(g, glue_side)


def band_of_slice(g: SnakeGraph, i: int, j: int, b: EdgeRef) -> BandGraph:
    """Band graph of G[i, j] glued along the SW edge b of tile i (re-embedded)."""
    sl = g.slice(i, j)
    side = b.side_of(sl.cell(1))
    if side not in ("S", "W"):
        raise SnakeError("band glue edge must be a SW edge of the slice")
    return BandGraph(SnakeGraph(sl.dirs), side)


def canonical_cyclic_word(word: str) -> str:
    """Least word in the orbit of `word` under rotation, reversal, global flip."""
    if not word:
        return word
    flipped = "".join(flip_sign(c) for c in word)
    best = None
    for w in (word, word[::-1], flipped, flipped[::-1]):
        for r in range(len(w)):
            cand = w[r:] + w[:r]
            if best is None or cand < best:
                best = cand
    return best


def bracelet(band: BandGraph, k: int) -> BandGraph:
    """Brac_k: the band graph of the k-fold universal cover prefix."""
    if k < 1:
        raise SnakeError("bracelet index must be >= 1")
    if k == 1:
        return band
    cover, _, side_maps = band.cover_prefix(k)
    # Re-glue consistently with the original band: the glue edge of the
    # cover corresponds to the same band edge class as the original b.
    snake = SnakeGraph(cover.dirs)
    want = band.sign_word() * k
    for side in ("S", "W"):
        cand = BandGraph(snake, side)
        if cand.sign_word() == want:
            return cand
    raise AssertionError("bracelet gluing lost the sign word")


def snake_iso(g1: SnakeGraph, g2: SnakeGraph, mode: str = "embedded") -> bool:
    return g1.iso(g2, mode)
