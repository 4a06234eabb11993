"""1.5D terrains, their visibility graphs, and the sigma-terrain generator.

All coordinates are exact rationals. A point blocks a pair only when it
lies strictly above the segment joining them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import MalformedInput, NotATerrain, PrecisionExhausted
from .families import check_permutation
from .structures import Graph


@dataclass(frozen=True)
class Terrain:
    points: tuple  # (Fraction x, Fraction y), x strictly increasing
    labels: tuple | None = None

    def __post_init__(self):
        pts = tuple((Fraction(x), Fraction(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        for (x0, _), (x1, _) in zip(pts, pts[1:]):
            if not x0 < x1:
                raise NotATerrain(f"x-coordinates not increasing at {x0}, {x1}")
        if self.labels is not None and len(self.labels) != len(pts):
            raise MalformedInput("label count differs from point count")

    def __len__(self):
        return len(self.points)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def to_json(self) -> dict:
        d = {"points": [[x.numerator, x.denominator, y.numerator, y.denominator] for x, y in self.points]}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "Terrain":
        try:
            pts = [(Fraction(int(a), int(b)), Fraction(int(c), int(e))) for a, b, c, e in d["points"]]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise MalformedInput(f"bad terrain document: {exc}") from exc
        return cls(tuple(pts), tuple(d["labels"]) if d.get("labels") else None)


def _slope(p, q):
    return (q[1] - p[1]) / (q[0] - p[0])


def visible_from(points: Sequence, i: int) -> list[int]:
    """Indices visible from ``points[i]`` (both directions, sorted)."""
    out = []
    best = None
    for j in range(i - 1, -1, -1):
        s = _slope(points[j], points[i])
        if best is None or s <= best:
            out.append(j)
        best = s if best is None else min(best, s)
    out.reverse()
    best = None
    for j in range(i + 1, len(points)):
        s = _slope(points[i], points[j])
        if best is None or s >= best:
            out.append(j)
        best = s if best is None else max(best, s)
    return out


def visibility_graph(t: Terrain) -> Graph:
    pts = t.points
    if not pts:
        raise MalformedInput("terrain needs at least one point")
    edges = []
    for i in range(len(pts)):
        best = None
        for j in range(i + 1, len(pts)):
            s = _slope(pts[i], pts[j])
            if best is None or s >= best:
                edges.append((i, j))
            best = s if best is None else max(best, s)
    return Graph(len(pts), edges, [str(x) for x in t.labels] if t.labels else None)


def _layout(sigma, length, eps_c, eps_a):
    n = len(sigma)
    top = length * (n - 1) + 1
    pts, labels = [], []
    for j in range(n, 0, -1):
        pts.append((Fraction(-j - 1), j + eps_c * j * j))
        labels.append(f"c{j}")
    for m in range(top + 1):
        pts.append((Fraction(m), -eps_a * m * m))
        labels.append(f"a{m}")
    return pts, labels


def _insert_b(pts, labels, i, length, depth):
    p = length * (i - 1)
    left = labels.index(f"a{p}")
    (x0, y0), (x1, y1) = pts[left], pts[left + 1]
    b = ((x0 + x1) / 2, (y0 + y1) / 2 - depth)
    return pts[:left + 1] + [b] + pts[left + 1:], labels[:left + 1] + [f"b{i}"] + labels[left + 1:]


def _seen_c(pts, labels, where, n):
    seen = {labels[k] for k in visible_from(pts, where)}
    return [j for j in range(1, n + 1) if f"c{j}" in seen]


def _horizon_depth(pts, labels, i, length, n, target, max_steps):
    """Bisect the depth of b_i until it sees exactly c_target..c_n."""
    want = list(range(target, n + 1))
    lo, hi = Fraction(0), Fraction(4 * (n + length + 2))
    for _ in range(max_steps):
        mid = (lo + hi) / 2
        p2, l2 = _insert_b(pts, labels, i, length, mid)
        got = _seen_c(p2, l2, l2.index(f"b{i}"), n)
        if got == want:
            return mid
        if len(got) > len(want):
            lo = mid
        else:
            hi = mid
    raise PrecisionExhausted(f"no depth for b{i} after {max_steps} halvings", (hi - lo).denominator)


def terrain_structure_errors(t: Terrain, sigma: Sequence[int], length: int) -> list[str]:
    """Mismatches between the terrain's visibility graph and the intended shape."""
    sigma = check_permutation(sigma)
    n = len(sigma)
    g = visibility_graph(t)
    idx = {lab: k for k, lab in enumerate(t.labels)}
    A = [idx[f"a{m}"] for m in range(length * (n - 1) + 2)]
    B = [idx[f"b{i}"] for i in range(1, n + 1)]
    C = [idx[f"c{j}"] for j in range(1, n + 1)]
    errs = []
    for x in range(len(A)):
        for y in range(x + 1, len(A)):
            if g.has_edge(A[x], A[y]) != (y == x + 1):
                errs.append(f"A: a{x}-a{y}")
    for x in range(n):
        for y in range(x + 1, n):
            if not g.has_edge(C[x], C[y]):
                errs.append(f"C: c{x + 1}-c{y + 1} missing")
            if g.has_edge(B[x], B[y]):
                errs.append(f"B: b{x + 1}-b{y + 1} present")
    for a in A:
        for c in C:
            if not g.has_edge(a, c):
                errs.append(f"AxC: {t.labels[a]}-{t.labels[c]} missing")
    for i in range(1, n + 1):
        b = B[i - 1]
        for j in range(1, n + 1):
            if g.has_edge(b, C[j - 1]) != (j >= sigma[i - 1]):
                errs.append(f"BC: b{i}-c{j}")
        near = {A[length * (i - 1)], A[length * (i - 1) + 1]}
        for a in A:
            if g.has_edge(b, a) != (a in near):
                errs.append(f"BA: b{i}-{t.labels[a]}")
    return errs


PARAMETERS = [(Fraction(1, 8), Fraction(1, 8)), (Fraction(1, 32), Fraction(1, 32)),
              (Fraction(1, 128), Fraction(1, 128)), (Fraction(1, 512), Fraction(1, 1024))]


def gen_terrain(sigma: Sequence[int], length: int, max_steps: int = 200) -> Terrain:
    """Terrain whose visibility graph encodes ``sigma`` between B and C.

    A (labels a0..) is a concave floor, C (c1..cn) a convex wall on the
    left, and b_i sits just below the floor edge a_{l(i-1)} a_{l(i-1)+1}
    at a depth chosen so it sees exactly c_sigma(i), ..., c_n.
    """
    if length < 1:
        raise MalformedInput("length must be at least 1")
    sigma = check_permutation(sigma)
    n = len(sigma)
    if n == 0:
        raise MalformedInput("empty permutation")
    last = None
    for eps_c, scale in PARAMETERS:
        top = length * (n - 1) + 1
        eps_a = scale / ((top + 2) * (top + 2))
        pts, labels = _layout(sigma, length, eps_c, eps_a)
        try:
            depths = [_horizon_depth(pts, labels, i, length, n, sigma[i - 1], max_steps)
                      for i in range(1, n + 1)]
        except PrecisionExhausted as exc:
            last = exc
            continue
        for i in range(n, 0, -1):  # right to left keeps earlier indices valid
            pts, labels = _insert_b(pts, labels, i, length, depths[i - 1])
        t = Terrain(tuple(pts), tuple(labels))
        if not terrain_structure_errors(t, sigma, length):
            return t
    raise PrecisionExhausted("no parameter setting produced the intended terrain",
                             getattr(last, "denominator", None))
