"""Axis-parallel segment families with coordinates on an eta lattice.

Coordinates and lengths are integers counted in units of eta = 1/eta_den,
so one unit of length is ``eta_den``. ``Hor(x, y)`` covers
``[x, x+len] x {y}`` and ``Ver(x, y)`` covers ``{x} x [y, y+len]``; both are
closed. Graph vertex ``v`` is the segment with the v-th smallest id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import EmptyCell, GridTooSmall, MalformedInput, NotMinimized
from .families import TransversalWitness, check_permutation, hsigma_roles
from .grids import GridWitness, PointSet, find_grid, max_grid, verify_grid
from .results import DichotomyResult
from .structures import Graph, OrderedBinaryStructure
from .tww import (ContractionSequence, compose_block_sequences, exact_tww, greedy_contraction,
                  max_exact, verify_contraction)
from .circular_arc import orient

H, V = "H", "V"


@dataclass(frozen=True)
class Segment:
    id: int
    dir: str
    x: int
    y: int
    len: int


class SegmentFamily:
    __slots__ = ("eta_den", "max_len", "segments")

    def __init__(self, eta_den: int, segments: Iterable, max_len: int = 1):
        self.eta_den = int(eta_den)
        self.max_len = int(max_len)
        if self.eta_den < 1 or self.max_len < 1:
            raise MalformedInput("eta_den and max_len must be positive")
        norm = []
        for s in segments:
            if isinstance(s, Segment):
                norm.append(s)
            elif isinstance(s, Mapping):
                norm.append(Segment(int(s["id"]), str(s["dir"]), int(s["x"]), int(s["y"]),
                                    int(s.get("len", self.eta_den))))
            else:
                s = list(s)
                norm.append(Segment(int(s[0]), str(s[1]), int(s[2]), int(s[3]),
                                    int(s[4]) if len(s) > 4 else self.eta_den))
        ids = [s.id for s in norm]
        if len(set(ids)) != len(ids):
            raise MalformedInput("segment ids are not unique")
        for s in norm:
            if s.dir not in (H, V):
                raise MalformedInput(f"segment {s.id}: direction must be H or V")
            if s.x < 0 or s.y < 0:
                raise MalformedInput(f"segment {s.id}: negative coordinate")
            if not 1 <= s.len <= self.max_len * self.eta_den:
                raise MalformedInput(f"segment {s.id}: length {s.len} outside 1..{self.max_len * self.eta_den}")
            if self.max_len == 1 and s.len != self.eta_den:
                raise MalformedInput(f"segment {s.id}: unit mode needs length {self.eta_den}")
        self.segments = tuple(sorted(norm, key=lambda s: s.id))

    @classmethod
    def unit(cls, eta_den: int, hs=(), vs=()) -> "SegmentFamily":
        """Unit segments from ``(x, y)`` lattice pairs; horizontals get the first ids."""
        segs = [Segment(i, H, x, y, eta_den) for i, (x, y) in enumerate(hs)]
        segs += [Segment(len(segs) + i, V, x, y, eta_den) for i, (x, y) in enumerate(vs)]
        return cls(eta_den, segs)

    @property
    def fixed_length(self) -> bool:
        return self.max_len > 1

    def __len__(self):
        return len(self.segments)

    def __eq__(self, other):
        return (isinstance(other, SegmentFamily) and self.eta_den == other.eta_den
                and self.max_len == other.max_len and self.segments == other.segments)

    def __repr__(self):
        body = ", ".join(f"{s.dir}{s.id}({s.x},{s.y},{s.len})" for s in self.segments)
        return f"SegmentFamily(eta=1/{self.eta_den}, L={self.max_len}, [{body}])"

    def replace(self, moved: Sequence[Segment]) -> "SegmentFamily":
        return SegmentFamily(self.eta_den, moved, self.max_len)

    def transpose(self) -> "SegmentFamily":
        """Mirror in the diagonal: Hor(x,y) <-> Ver(y,x)."""
        return self.replace([Segment(s.id, V if s.dir == H else H, s.y, s.x, s.len) for s in self.segments])

    def to_json(self) -> dict:
        return {"eta_den": self.eta_den, "max_len": self.max_len, "units": "eta",
                "segments": [{"id": s.id, "dir": s.dir, "x": s.x, "y": s.y, "len": s.len}
                             for s in self.segments]}

    @classmethod
    def from_json(cls, d: Mapping) -> "SegmentFamily":
        try:
            if d.get("units", "eta") != "eta":
                raise MalformedInput(f"unsupported units {d['units']!r}")
            return cls(d["eta_den"], d["segments"], d.get("max_len", 1))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad segment document: {exc}") from exc


def crosses(h: Segment, v: Segment) -> bool:
    return h.x <= v.x <= h.x + h.len and v.y <= h.y <= v.y + v.len


def _overlap(a: Segment, b: Segment) -> bool:
    if a.dir == H:
        return a.y == b.y and a.x <= b.x + b.len and b.x <= a.x + a.len
    return a.x == b.x and a.y <= b.y + b.len and b.y <= a.y + a.len


def touches(a: Segment, b: Segment, degenerate: bool = False) -> bool:
    if a.dir != b.dir:
        return crosses(a, b) if a.dir == H else crosses(b, a)
    return degenerate and _overlap(a, b)


def apus_intersection_graph(f: SegmentFamily, degenerate: bool = False) -> Graph:
    segs = f.segments
    hs = [i for i, s in enumerate(segs) if s.dir == H]
    vs = [i for i, s in enumerate(segs) if s.dir == V]
    edges = [(min(i, j), max(i, j)) for i in hs for j in vs if crosses(segs[i], segs[j])]
    if degenerate:
        for group in (hs, vs):
            edges += [(i, j) for a, i in enumerate(group) for j in group[a + 1:] if _overlap(segs[i], segs[j])]
    return Graph(len(segs), sorted(edges), [str(s.id) for s in segs])


# --- unit squares -----------------------------------------------------------

NAMES = {(0, 0): "TR", (1, 0): "TL", (0, 1): "BR", (1, 1): "BL"}
OFFSETS = {v: k for k, v in NAMES.items()}


@dataclass(frozen=True, order=True)
class SquareKey:
    """Cell ``(s, t, d)``: horizontals from square ``(s - d[0], t)``, verticals from ``(s, t - d[1])``.

    ``d = (0,0), (1,0), (0,1), (1,1)`` are named TR, TL, BR, BL. With
    several lengths, ``d`` may take larger offsets and ``lengths`` holds
    the horizontal and vertical lengths in eta units.
    """
    s: int
    t: int
    d: tuple
    lengths: tuple | None = None

    @property
    def name(self) -> str:
        return NAMES.get(self.d, f"{self.d[0]},{self.d[1]}")

    def h_square(self):
        return (self.s - self.d[0], self.t)

    def v_square(self):
        return (self.s, self.t - self.d[1])

    def to_json(self) -> dict:
        d = {"s": self.s, "t": self.t, "d": self.name if self.d in NAMES else list(self.d)}
        if self.lengths is not None:
            d["lengths"] = list(self.lengths)
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "SquareKey":
        try:
            dd = d["d"]
            off = OFFSETS[dd] if isinstance(dd, str) else tuple(int(v) for v in dd)
            ln = d.get("lengths")
            return cls(int(d["s"]), int(d["t"]), off, tuple(int(v) for v in ln) if ln else None)
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad square key: {exc}") from exc


def square(f: SegmentFamily, s: Segment):
    return (s.x // f.eta_den, s.y // f.eta_den)


def _key_of(f: SegmentFamily, h: Segment, v: Segment) -> SquareKey:
    (hs, ht), (vs, vt) = square(f, h), square(f, v)
    return SquareKey(vs, ht, (vs - hs, ht - vt), (h.len, v.len) if f.fixed_length else None)


def split_squares(f: SegmentFamily) -> dict:
    """Cells ``SquareKey -> (segment indices, edges)`` covering every edge once.

    A cell is listed when it carries an edge; its vertex set is all of
    its two squares (restricted to the cell's lengths), edge or not.
    """
    segs = f.segments
    by_sq: dict = {}
    for i, s in enumerate(segs):
        by_sq.setdefault((s.dir, square(f, s), s.len if f.fixed_length else None), []).append(i)
    cells: dict = {}
    for i, h in enumerate(segs):
        if h.dir != H:
            continue
        for j, v in enumerate(segs):
            if v.dir == V and crosses(h, v):
                key = _key_of(f, h, v)
                if key not in cells:
                    lh, lv = key.lengths if key.lengths else (None, None)
                    members = by_sq[(H, key.h_square(), lh)] + by_sq[(V, key.v_square(), lv)]
                    cells[key] = (frozenset(members), set())
                cells[key][1].add((min(i, j), max(i, j)))
    return {k: (vs, frozenset(es)) for k, (vs, es) in sorted(cells.items())}


def seg_sort_key(f: SegmentFamily, s: Segment):
    return (s.dir != H, s.len if f.fixed_length else 0, square(f, s), (s.x, s.y), s.id)


def seg_order(f: SegmentFamily) -> list[int]:
    """Segment ids: horizontals first, then by length, square, endpoint, id."""
    return [s.id for s in sorted(f.segments, key=lambda s: seg_sort_key(f, s))]


def seg_order_duplicates(f: SegmentFamily) -> list[tuple]:
    """Id pairs whose order was settled only by the id tie-break."""
    ss = sorted(f.segments, key=lambda s: seg_sort_key(f, s))
    return [(a.id, b.id) for a, b in zip(ss, ss[1:]) if seg_sort_key(f, a)[:-1] == seg_sort_key(f, b)[:-1]]


def seg_structure(f: SegmentFamily, edges=None) -> OrderedBinaryStructure:
    """Intersection graph (or the given edges) ordered by seg_order."""
    if edges is None:
        edges = apus_intersection_graph(f).edges
    index = {s.id: i for i, s in enumerate(f.segments)}
    order = [index[i] for i in seg_order(f)]
    return Graph(len(f), edges).to_structure(order)


# --- minimization -----------------------------------------------------------

def _lowest(segs, k, axis):
    """Smallest coordinate along ``axis`` that segment k can slide down to
    without gaining or losing a neighbour; other segments stay put."""
    me = segs[k]
    along = (me.dir == H) == (axis == 0)
    c = me.x if axis == 0 else me.y
    p = me.y if axis == 0 else me.x
    bound = 0
    for o in segs:
        if o.dir == me.dir:
            continue
        oa = o.x if axis == 0 else o.y
        op = o.y if axis == 0 else o.x
        if along:
            # me covers [c, c+len] along the axis, o is a point there
            if not op <= p <= op + o.len:
                continue
            if c <= oa <= c + me.len:
                bound = max(bound, oa - me.len)
            elif oa < c:
                bound = max(bound, oa + 1)
        else:
            # me is a point along the axis, o covers [oa, oa+len]
            if not p <= op <= p + me.len:
                continue
            if oa <= c <= oa + o.len:
                bound = max(bound, oa)
            elif oa + o.len < c:
                bound = max(bound, oa + o.len + 1)
    return bound


def _moved(s: Segment, axis: int, c: int) -> Segment:
    return Segment(s.id, s.dir, c, s.y, s.len) if axis == 0 else Segment(s.id, s.dir, s.x, c, s.len)


def minimize_segments(f: SegmentFamily) -> SegmentFamily:
    """Push segments left, then down, as far as the graph allows, in id
    order, until a whole pass changes nothing."""
    segs = list(f.segments)
    moved = True
    while moved:
        moved = False
        for k in range(len(segs)):
            while True:
                step = False
                for axis in (0, 1):
                    cur = segs[k].x if axis == 0 else segs[k].y
                    low = _lowest(segs, k, axis)
                    if low < cur:
                        segs[k] = _moved(segs[k], axis, low)
                        step = moved = True
                if not step:
                    break
    return f.replace(segs)


def _h_violations(f: SegmentFamily) -> list[tuple]:
    vs = [s for s in f.segments if s.dir == V]
    bad = []
    for h in f.segments:
        if h.dir != H:
            continue
        if h.x > 0 and not any(v.x in (h.x - 1, h.x + h.len) and v.y <= h.y <= v.y + v.len for v in vs):
            bad.append((h.id, "left"))
        if h.y > 0 and not any(h.x <= v.x <= h.x + h.len and (v.y == h.y or v.y + v.len == h.y - 1) for v in vs):
            bad.append((h.id, "down"))
    return bad


def minimal_apus_violations(f: SegmentFamily) -> list[tuple]:
    """``(id, move)`` pairs for which no blocking perpendicular segment exists."""
    return _h_violations(f) + _h_violations(f.transpose())


# --- local matrices and extraction ------------------------------------------

def local_endpoint_matrix(f: SegmentFamily, key: SquareKey) -> PointSet:
    cells = split_squares(f)
    if key not in cells:
        raise EmptyCell(f"no segments in cell {key.to_json()}")
    counts: dict = {}
    for i in cells[key][0]:
        s = f.segments[i]
        counts[(s.x, s.y)] = counts.get((s.x, s.y), 0) + 1
    return PointSet(counts, {p: c for p, c in counts.items() if c > 1})


def _blockers(f: SegmentFamily, h: Segment):
    """Horizontal and vertical blockers of ``h`` as ``(segment, side)`` or None."""
    vs = [v for v in f.segments if v.dir == V]
    hmin = vmin = None
    for v in vs:
        if v.y <= h.y <= v.y + v.len:
            if v.x == h.x - 1:
                hmin = (v, "left")
                break
            if v.x == h.x + h.len and hmin is None:
                hmin = (v, "right")
    for v in vs:
        if h.x <= v.x <= h.x + h.len:
            if v.y + v.len == h.y - 1:
                vmin = (v, "below")
                break
            if v.y == h.y and vmin is None:
                vmin = (v, "above")
    return hmin, vmin


def _colour(f: SegmentFamily, h: Segment):
    hmin, vmin = _blockers(f, h)
    if hmin is None or vmin is None:
        return None
    s, t = square(f, h)
    return (hmin[1], hmin[0].y <= t * f.eta_den, vmin[1], vmin[0].x >= (s + 1) * f.eta_den)


def _assemble(f: SegmentFamily, colour, w: GridWitness, at) -> TransversalWitness:
    hside, hlow, vside, vright = colour
    T = w.t
    ra = T - 1 if hlow else 0
    cc = 0 if vright else T - 1
    rows = [r for r in range(T) if r != ra]
    cols = [c for c in range(T) if c != cc]
    bcols, acols = (cols[0::2], cols[1::2]) if hside == "left" else (cols[1::2], cols[0::2])
    brows, crows = (rows[0::2], rows[1::2]) if vside == "below" else (rows[1::2], rows[0::2])
    index = {s.id: i for i, s in enumerate(f.segments)}

    def seg(c, r):
        return f.segments[at[w.cells[c][r]]]

    A = tuple(index[_blockers(f, seg(c, ra))[0][0].id] for c in acols)
    C = tuple(index[_blockers(f, seg(cc, r))[1][0].id] for r in crows)
    B = tuple(tuple(at[w.cells[c][r]] for r in brows) for c in bcols)
    return TransversalWitness(A, B, C)


def extract_transversal_apus(f: SegmentFamily, key: SquareKey, w: GridWitness,
                             k: int | None = None) -> TransversalWitness:
    """T_k from a grid in one cell's endpoint matrix of a minimized family.

    The grid points are split by direction and by where each segment's
    two blockers sit; a monochromatic (2k+1)-grid of one class yields
    ``a_i`` (horizontal blockers of one extreme row), ``c_j`` (vertical
    blockers of one extreme column) and ``b_{i,j}`` in between.
    """
    ps = local_endpoint_matrix(f, key)
    if not verify_grid(ps, w):
        raise MalformedInput("grid witness does not verify on the cell matrix")
    bad = minimal_apus_violations(f)
    if bad:
        raise NotMinimized(f"segment {bad[0][0]} can still move {bad[0][1]}")
    members = split_squares(f)[key][0]
    inside = set(w.points())
    g = apus_intersection_graph(f)
    best = (w.t - 1) // 2
    want = range(best, 0, -1) if k is None else [k]
    for frame, flip in ((f, False), (f.transpose(), True)):
        classes: dict = {}
        for i in sorted(members):
            s = frame.segments[i]
            pt = (s.y, s.x) if flip else (s.x, s.y)
            if s.dir != H or pt not in inside:
                continue
            col = _colour(frame, s)
            if col is not None:
                classes.setdefault(col, {}).setdefault((s.x, s.y), i)
        for kk in want:
            for col in sorted(classes, key=lambda c: (-len(classes[c]), c)):
                at = classes[col]
                if len(at) < (2 * kk + 1) ** 2:
                    continue
                sub = find_grid(PointSet(at), 2 * kk + 1)
                if sub is None:
                    continue
                try:
                    raw = _assemble(frame, col, sub, at)
                except TypeError:
                    continue
                good = orient(g, raw)
                if good is not None:
                    return good
    raise GridTooSmall(f"no monochromatic grid of order {2 * want[-1] + 1} yields a transversal pair", 0)


# --- dichotomy ----------------------------------------------------------------

def _block_sequences(f: SegmentFamily, d: tuple, details: dict):
    """Sequence for the graph of all cells with offset ``d``, built block
    by block and glued along the segment order."""
    segs = f.segments
    edges = [e for key, (_, es) in split_squares(f).items() if key.d == d for e in es]
    st = seg_structure(f, edges)
    blocks: dict = {}
    for i, s in enumerate(segs):
        sx, sy = square(f, s)
        key = (sx + d[0], sy) if s.dir == H else (sx, sy + d[1])
        blocks.setdefault(key, ([], []))[s.dir == V].append(i)
    bl, seqs = [], []
    cap = max_exact()
    rank = st.rank
    for key in sorted(blocks):
        a, b = blocks[key]
        vs = sorted(a + b)
        local = {v: n for n, v in enumerate(vs)}
        sub_edges = [(local[u], local[v]) for u, v in edges if u in local and v in local]
        sub = Graph(len(vs), sub_edges).to_structure(sorted(range(len(vs)), key=lambda n: rank[vs[n]]))
        sides = ([local[v] for v in a], [local[v] for v in b])
        if len(vs) <= cap:
            seq = exact_tww(sub, sides=sides)[1]
            details["exact_cells"] += 1
        else:
            seq = greedy_contraction(sub, sides=sides)
            details["greedy_cells"] += 1
        bl.append((a, b))
        seqs.append(ContractionSequence((vs[x], vs[y]) for x, y in seq.merges))
    return compose_block_sequences(st, bl, seqs)


def analyze_apus(f: SegmentFamily, k: int, threshold: int | None = None) -> DichotomyResult:
    if k < 1:
        raise MalformedInput("k must be at least 1")
    threshold = 4 * k + 2 if threshold is None else threshold
    g = apus_intersection_graph(f)
    details = {"threshold": threshold, "segments": len(f)}
    if len(f) == 0:
        return DichotomyResult("contraction", sequence=ContractionSequence(), width=0, details=details)
    fm = minimize_segments(f)
    cells = split_squares(fm)
    grids = {}
    for key in cells:
        t, w = max_grid(local_endpoint_matrix(fm, key))
        grids[key] = (t, w)
    details["max_grid"] = max((t for t, _ in grids.values()), default=0)
    for key, (t, w) in sorted(grids.items(), key=lambda kv: (-kv[1][0], kv[0])):
        if t < threshold:
            break
        try:
            wit = extract_transversal_apus(fm, key, w)
        except GridTooSmall:
            details.setdefault("extraction_failed", []).append(key.to_json())
            continue
        details["cell"] = key.to_json()
        return DichotomyResult("transversal", witness=wit, details=details)

    details.update(exact_cells=0, greedy_cells=0)
    full = seg_structure(fm)
    candidates = {"greedy": greedy_contraction(full)}
    lengths = {(s.dir, s.len) for s in fm.segments}
    if not fm.fixed_length or len(lengths) <= 2:
        for d in sorted({key.d for key in cells}):
            candidates[f"cells {d[0]},{d[1]}"] = _block_sequences(fm, d, details)
    gs = g.to_structure()
    scored = sorted((verify_contraction(gs, seq), name) for name, seq in candidates.items())
    width, name = scored[0]
    details["method"] = name
    details["ordered_width"] = verify_contraction(full, candidates[name])
    return DichotomyResult("contraction", sequence=candidates[name], width=width, details=details)


# --- generators -----------------------------------------------------------------

def gen_Tk_apus(k: int) -> SegmentFamily:
    """T_k among unit segments; ids follow the canonical witness.

    With delta = 1/(2k+2) and eta = delta/2, geometric ``b_{p,q}`` is
    Hor(1+p delta, 1+q delta), ``a_p`` is Ver(1+p delta+delta/2, 1/2) and
    ``c_q`` is Ver(1+k delta+delta/2, 1+q delta-delta/2). Both indices run
    backwards relative to the ids.
    """
    if k < 1:
        raise MalformedInput("k must be at least 1")
    den = 4 * k + 4  # one unit; delta = 2
    segs = []
    for i in range(1, k + 1):
        p = k + 1 - i
        segs.append(Segment(i - 1, V, den + 2 * p + 1, den // 2, den))
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            p, q = k + 1 - i, k + 1 - j
            segs.append(Segment(k + (i - 1) * k + j - 1, H, den + 2 * p, den + 2 * q, den))
    for j in range(1, k + 1):
        q = k + 1 - j
        segs.append(Segment(k + k * k + j - 1, V, den + 2 * k + 1, den + 2 * q - 1, den))
    return SegmentFamily(den, segs)


def gen_Hsigma_apus_degenerate(sigma: Sequence[int], length: int) -> SegmentFamily:
    """Unit segments whose degenerate graph is H_sigma^length, same ids.

    Path i runs along height i eta as collinear horizontals with stride
    3/4; its last stride is nudged by (i - sigma(i)) delta so the final
    segment lands on c_sigma(i)'s slot. Verticals a_l and d_j cut the first
    and last segments at staggered x to form the two half-graphs.
    """
    if length < 2:
        raise MalformedInput("path length must be at least 2")
    sigma = check_permutation(sigma)
    n = len(sigma)
    if n == 0:
        raise MalformedInput("empty permutation")
    den = 16 * n  # eta = 1/(16n), delta = 2 eta, stride 3/4 = 12n
    delta, stride = 2, 12 * n
    S = den
    T = S + length * stride
    a, b, c, d, inner = hsigma_roles(n, length)
    segs = []
    for l in range(1, n + 1):
        segs.append(Segment(a[l - 1], V, S - l * delta + 1, 0, den))
        segs.append(Segment(d[l - 1], V, T + den - l * delta - 1, 0, den))
    for i in range(1, n + 1):
        start = S - i * delta
        ids = [b[i - 1]] + inner[i - 1]
        for m, sid in enumerate(ids):
            segs.append(Segment(sid, H, start + m * stride, i, den))
        segs.append(Segment(c[sigma[i - 1] - 1], H, T - sigma[i - 1] * delta, i, den))
    return SegmentFamily(den, segs)
