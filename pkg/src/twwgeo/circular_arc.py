"""Discrete circular-arc families on the cycle 1..n.

An arc ``[i, j]`` covers i, i+1, ..., j read modulo n, so ``i > j`` wraps
past n. Graph vertex ``v`` of any derived graph is the arc with the v-th
smallest id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .errors import GridTooSmall, MalformedInput, NotMinimized, StructureMismatch
from .families import TransversalWitness, verify_transversal
from .grids import GridWitness, PointSet, disjointify_grid, max_grid, verify_grid
from .results import DichotomyResult
from .structures import Graph, OrderedBinaryStructure
from .tww import ContractionSequence, exact_tww, greedy_contraction, max_exact, restrict_sequence, verify_contraction


@dataclass(frozen=True)
class Arc:
    id: int
    left: int
    right: int


class ArcFamily:
    __slots__ = ("n", "arcs")

    def __init__(self, n: int, arcs: Iterable):
        self.n = int(n)
        norm = []
        for a in arcs:
            if isinstance(a, Arc):
                norm.append(a)
            elif isinstance(a, Mapping):
                norm.append(Arc(int(a["id"]), int(a["left"]), int(a["right"])))
            else:
                norm.append(Arc(int(a[0]), int(a[1]), int(a[2])))
        ids = [a.id for a in norm]
        if len(set(ids)) != len(ids):
            raise MalformedInput("arc ids are not unique")
        for a in norm:
            if not (1 <= a.left <= self.n and 1 <= a.right <= self.n):
                raise MalformedInput(f"arc {a.id} endpoints outside 1..{self.n}")
        self.arcs = tuple(sorted(norm, key=lambda a: a.id))

    @classmethod
    def from_intervals(cls, n: int, intervals) -> "ArcFamily":
        return cls(n, [Arc(i, l, r) for i, (l, r) in enumerate(intervals)])

    def __len__(self):
        return len(self.arcs)

    def __eq__(self, other):
        return isinstance(other, ArcFamily) and self.n == other.n and self.arcs == other.arcs

    def __repr__(self):
        return f"ArcFamily(n={self.n}, arcs={[(a.id, a.left, a.right) for a in self.arcs]})"

    def mask(self, a: Arc) -> int:
        return arc_mask(self.n, a.left, a.right)

    def to_json(self) -> dict:
        return {"n": self.n, "arcs": [{"id": a.id, "left": a.left, "right": a.right} for a in self.arcs]}

    @classmethod
    def from_json(cls, d: Mapping) -> "ArcFamily":
        try:
            return cls(d["n"], d["arcs"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad arc document: {exc}") from exc


def arc_mask(n: int, left: int, right: int) -> int:
    """Bit p-1 is set iff point p lies on the arc."""
    if left <= right:
        return ((1 << (right - left + 1)) - 1) << (left - 1)
    return ((1 << n) - 1) ^ (((1 << (left - right - 1)) - 1) << right)


def arc_intersection_graph(f: ArcFamily) -> Graph:
    ms = [f.mask(a) for a in f.arcs]
    edges = [(i, j) for i in range(len(ms)) for j in range(i + 1, len(ms)) if ms[i] & ms[j]]
    return Graph(len(ms), edges, [str(a.id) for a in f.arcs])


def _neighbours(ms, i, m):
    return [j for j in range(len(ms)) if j != i and ms[j] & m]


def minimize_arcs(f: ArcFamily) -> ArcFamily:
    """Shrink arcs one endpoint at a time while the graph stays the same.

    Arcs are visited in id order; each first gives up right endpoints as
    long as that is harmless, then left endpoints. Passes repeat until
    nothing moves.
    """
    n = f.n
    ends = [[a.left, a.right] for a in f.arcs]
    ms = [f.mask(a) for a in f.arcs]
    want = [_neighbours(ms, i, ms[i]) for i in range(len(ms))]

    def attempt(i, left, right):
        m = arc_mask(n, left, right)
        if _neighbours(ms, i, m) == want[i]:
            ends[i] = [left, right]
            ms[i] = m
            return True
        return False

    moved = True
    while moved:
        moved = False
        for i in range(len(ms)):
            while ends[i][0] != ends[i][1]:
                l, r = ends[i]
                if not attempt(i, l, r - 1 if r > 1 else n):
                    break
                moved = True
            while ends[i][0] != ends[i][1]:
                l, r = ends[i]
                if not attempt(i, l + 1 if l < n else 1, r):
                    break
                moved = True
    return ArcFamily(n, [Arc(a.id, l, r) for a, (l, r) in zip(f.arcs, ends)])


def min_arc_rep_violations(f: ArcFamily) -> list[int]:
    """Ids of arcs [i,j], i != j, lacking a neighbour that meets them only at i or only at j."""
    ms = [f.mask(a) for a in f.arcs]
    bad = []
    for k, a in enumerate(f.arcs):
        if a.left == a.right:
            continue
        lbit, rbit = 1 << (a.left - 1), 1 << (a.right - 1)
        meets = [ms[k] & ms[j] for j in range(len(ms)) if j != k]
        if lbit not in meets or rbit not in meets:
            bad.append(a.id)
    return bad


def arc_endpoint_matrix(f: ArcFamily) -> PointSet:
    counts: dict = {}
    for a in f.arcs:
        counts[(a.left, a.right)] = counts.get((a.left, a.right), 0) + 1
    return PointSet(counts, {p: c for p, c in counts.items() if c > 1})


def arc_incidence_structure(f: ArcFamily) -> OrderedBinaryStructure:
    """Points 1..n become vertices 0..n-1, arc k (id order) becomes n+k.

    Relation ``E`` joins an arc to its endpoints; relation ``W`` marks,
    by a loop, the arcs that do not wrap (left <= right).
    """
    n = f.n
    pairs, flag = [], []
    for k, a in enumerate(f.arcs):
        v = n + k
        for p in {a.left, a.right}:
            pairs += [(v, p - 1), (p - 1, v)]
        if a.left <= a.right:
            flag.append((v, v))
    arcs_sorted = sorted(range(len(f.arcs)), key=lambda k: (f.arcs[k].left, f.arcs[k].right, f.arcs[k].id))
    order = list(range(n)) + [n + k for k in arcs_sorted]
    return OrderedBinaryStructure(n + len(f.arcs), {"E": pairs, "W": flag}, order)


def _rotate(f: ArcFamily, shift: int) -> ArcFamily:
    n = f.n

    def rot(p):
        return (p - shift) % n + 1

    return ArcFamily(n, [Arc(a.id, rot(a.left), rot(a.right)) for a in f.arcs])


FLIPS = ((True, True), (False, False), (True, False), (False, True))


def orient(g: Graph, w: TransversalWitness) -> TransversalWitness | None:
    """Try the four index reversals; return the first that verifies."""
    for rows, cols in FLIPS:
        cand = w.flipped(rows, cols)
        try:
            if verify_transversal(g, cand):
                return cand
        except Exception:
            return None
    return None


def extract_transversal_arcs(f: ArcFamily, w: GridWitness, k: int | None = None) -> TransversalWitness:
    ps = arc_endpoint_matrix(f)
    if not verify_grid(ps, w):
        raise MalformedInput("grid witness does not verify on the endpoint matrix")
    if k is None:
        k = (w.t - 2) // 4
    if k < 1 or w.t < 4 * k + 2:
        raise GridTooSmall(f"a {w.t}-grid is too small for k={k}", max((w.t - 2) // 4, 0))
    g_ = 4 * k + 2
    sub = GridWitness(g_, tuple(tuple(col[:g_]) for col in w.cells[:g_]),
                      w.col_blocks[:g_], w.row_blocks[:g_])
    half = disjointify_grid(ps, sub)
    xs = [p[0] for col in half.cells for p in col]
    ys = [p[1] for col in half.cells for p in col]
    work = f
    cells = half.cells
    if max(xs) > min(ys):
        # every left endpoint sits above every right endpoint: rotate the
        # circle so the lefts come first, which keeps both orders intact
        shift = min(xs) - 1
        work = _rotate(f, shift)
        n = f.n
        cells = tuple(tuple(((x - shift - 1) % n + 1, (y - shift - 1) % n + 1) for x, y in col)
                      for col in cells)
    by_point = {}
    for idx, a in enumerate(work.arcs):
        by_point.setdefault((a.left, a.right), idx)
    ms = [work.mask(a) for a in work.arcs]

    def I(i, j):  # 1-based grid access
        return by_point[cells[i - 1][j - 1]]

    def touching(x, point):
        bit = 1 << (point - 1)
        for j in range(len(ms)):
            if j != x and ms[j] & ms[x] == bit:
                return j
        raise NotMinimized(f"no arc meets arc {work.arcs[x].id} only at point {point}")

    B = tuple(tuple(I(2 * i, 2 * j) for j in range(1, k + 1)) for i in range(1, k + 1))
    A = tuple(touching(I(2 * i + 1, 2 * k + 1), work.arcs[I(2 * i + 1, 2 * k + 1)].left) for i in range(1, k + 1))
    C = tuple(touching(I(1, 2 * j - 1), work.arcs[I(1, 2 * j - 1)].right) for j in range(1, k + 1))
    raw = TransversalWitness(A, B, C)
    good = orient(arc_intersection_graph(f), raw)
    if good is None:
        raise StructureMismatch("extracted arcs do not form a transversal pair")
    return good


def analyze_arcs(f: ArcFamily, k: int) -> DichotomyResult:
    if k < 1:
        raise MalformedInput("k must be at least 1")
    fm = minimize_arcs(f)
    threshold = 4 * k + 2
    g = arc_intersection_graph(f)
    details = {"threshold": threshold, "arcs": len(f), "n": f.n}
    ps = arc_endpoint_matrix(fm)
    t, w = max_grid(ps) if len(ps) else (0, None)
    details["max_grid"] = t
    if t >= threshold:
        wit = extract_transversal_arcs(fm, w, (t - 2) // 4)
        return DichotomyResult("transversal", witness=wit, details=details)
    h = arc_incidence_structure(fm)
    if h.n <= max_exact():
        details["method"] = "exact"
        seq = exact_tww(h)[1]
    else:
        details["method"] = "greedy"
        seq = greedy_contraction(h)
    seq = restrict_sequence(seq, range(fm.n, h.n), h.n)
    width = verify_contraction(g.to_structure(), seq)
    return DichotomyResult("contraction", sequence=seq, width=width, details=details)


def gen_Tk_arcs(k: int) -> ArcFamily:
    """Arcs whose intersection graph contains T_k with the canonical ids.

    With u = k+1-i and v = k+1-j (so positions decrease as the indices
    grow): a_i = [3k+u, u] wraps, b_{i,j} = [u, k+v], c_j = [k+v, 2k+v].
    """
    if k < 1:
        raise MalformedInput("k must be at least 1")
    arcs = []
    for i in range(1, k + 1):
        u = k + 1 - i
        arcs.append(Arc(i - 1, 3 * k + u, u))
    for i in range(1, k + 1):
        for j in range(1, k + 1):
            u, v = k + 1 - i, k + 1 - j
            arcs.append(Arc(k + (i - 1) * k + (j - 1), u, k + v))
    for j in range(1, k + 1):
        v = k + 1 - j
        arcs.append(Arc(k + k * k + j - 1, k + v, 2 * k + v))
    return ArcFamily(4 * k, arcs)
