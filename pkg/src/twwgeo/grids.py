"""Grid detection in planar point sets (0-1 matrices).

A t-grid is a division of the x-values into t intervals and the y-values
into t intervals such that every one of the t*t cells holds a point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (EmptyInput, InvalidWitness, MalformedInput, MissingColor,
                     OddOrder, TooLarge)

Point = tuple

GUARD_COLUMNS = 4096
GUARD_ORDER = 8


class PointSet:
    __slots__ = ("points", "multiplicity")

    def __init__(self, points: Iterable[Sequence[int]] = (), multiplicity=None):
        pts = set()
        for p in points:
            pts.add((int(p[0]), int(p[1])))
        self.points = tuple(sorted(pts))
        # duplicates collapse; callers that care record counts here
        self.multiplicity = dict(multiplicity) if multiplicity else {}

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, p):
        return tuple(p) in self._set()

    def _set(self):
        return frozenset(self.points)

    def transpose(self) -> "PointSet":
        return PointSet((y, x) for x, y in self.points)

    def to_json(self) -> dict:
        return {"points": [list(p) for p in self.points]}

    @classmethod
    def from_json(cls, d: Mapping) -> "PointSet":
        try:
            return cls(d["points"])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise MalformedInput(f"bad point document: {exc}") from exc

    def __repr__(self):
        return f"PointSet({len(self.points)} points)"


@dataclass(frozen=True)
class GridWitness:
    t: int
    cells: tuple  # cells[i][j] = point in column block i, row block j
    col_blocks: tuple = field(default=())
    row_blocks: tuple = field(default=())

    def points(self):
        return [p for col in self.cells for p in col]

    def transpose(self) -> "GridWitness":
        cells = tuple(tuple((self.cells[i][j][1], self.cells[i][j][0]) for i in range(self.t))
                      for j in range(self.t))
        return GridWitness(self.t, cells, self.row_blocks, self.col_blocks)

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "cells": [[list(p) for p in col] for col in self.cells],
            "col_blocks": [list(b) for b in self.col_blocks],
            "row_blocks": [list(b) for b in self.row_blocks],
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "GridWitness":
        try:
            t = int(d["t"])
            cells = tuple(tuple((int(p[0]), int(p[1])) for p in col) for col in d["cells"])
            cb = tuple((int(b[0]), int(b[1])) for b in d.get("col_blocks", []))
            rb = tuple((int(b[0]), int(b[1])) for b in d.get("row_blocks", []))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise MalformedInput(f"bad witness document: {exc}") from exc
        return cls(t, cells, cb, rb)


def _blocks_ok(blocks, t, coords_by_index):
    if not blocks:
        return True
    if len(blocks) != t:
        return False
    for a, b in blocks:
        if a > b:
            return False
    for (a, b), (c, d) in zip(blocks, blocks[1:]):
        if not b < c:
            return False
    for i, cs in enumerate(coords_by_index):
        lo, hi = blocks[i]
        if any(not (lo <= c <= hi) for c in cs):
            return False
    return True


def verify_grid(ps: PointSet, w: GridWitness) -> bool:
    t = w.t
    if t < 1 or len(w.cells) != t or any(len(col) != t for col in w.cells):
        return False
    have = ps._set()
    if any(tuple(p) not in have for col in w.cells for p in col):
        return False
    xs = [[w.cells[i][j][0] for j in range(t)] for i in range(t)]
    ys = [[w.cells[i][j][1] for i in range(t)] for j in range(t)]
    for i in range(t - 1):
        if not max(xs[i]) < min(xs[i + 1]):
            return False
        if not max(ys[i]) < min(ys[i + 1]):
            return False
    return _blocks_ok(w.col_blocks, t, xs) and _blocks_ok(w.row_blocks, t, ys)


class _Search:
    """Column breakpoint search with greedy row closing."""

    def __init__(self, pts, t):
        self.t = t
        self.xs = sorted({p[0] for p in pts})
        self.ys = sorted({p[1] for p in pts})
        xi = {x: i for i, x in enumerate(self.xs)}
        yi = {y: i for i, y in enumerate(self.ys)}
        rows = [[] for _ in self.ys]
        for x, y in pts:
            rows[yi[y]].append(xi[x])
        self.rows = [sorted(set(r)) for r in rows]
        self.pts = pts

    def _rows_closed(self, block_of, nblocks):
        """Greedy row sweep; returns the list of row-block end indices."""
        full = (1 << nblocks) - 1
        acc = 0
        ends = []
        for r, cols in enumerate(self.rows):
            for c in cols:
                b = block_of[c]
                if b < nblocks:
                    acc |= 1 << b
            if acc == full:
                ends.append(r)
                acc = 0
                if len(ends) == self.t:
                    break
        return ends

    def run(self):
        t, m = self.t, len(self.xs)
        if m < t or len(self.ys) < t or len(self.pts) < t * t:
            return None
        block_of = [t] * m
        ends = []

        def dfs(start, b):
            if b == t - 1:
                for c in range(start, m):
                    block_of[c] = b
                rows = self._rows_closed(block_of, t)
                if len(rows) >= t:
                    ends.append(m - 1)
                    return rows
                for c in range(start, m):
                    block_of[c] = t
                return None
            for e in range(start, m - (t - 1 - b)):
                block_of[e] = b
                if len(self._rows_closed(block_of, b + 1)) >= t:
                    ends.append(e)
                    got = dfs(e + 1, b + 1)
                    if got is not None:
                        return got
                    ends.pop()
            for c in range(start, m):
                block_of[c] = t
            return None

        rows = dfs(0, 0)
        if rows is None:
            return None
        return self._witness(ends, rows)

    def _witness(self, col_ends, row_ends):
        t = self.t
        row_ends = list(row_ends[:t])
        row_ends[-1] = len(self.ys) - 1
        col_ends = list(col_ends)
        cb, rb = [], []
        s = 0
        for e in col_ends:
            cb.append((self.xs[s], self.xs[e]))
            s = e + 1
        s = 0
        for e in row_ends:
            rb.append((self.ys[s], self.ys[e]))
            s = e + 1
        cells = [[None] * t for _ in range(t)]
        for x, y in self.pts:  # sorted, so the first hit is lexicographically smallest
            i = _find_block(cb, x)
            j = _find_block(rb, y)
            if cells[i][j] is None:
                cells[i][j] = (x, y)
        return GridWitness(t, tuple(tuple(c) for c in cells), tuple(cb), tuple(rb))


def _find_block(blocks, v):
    for i, (lo, hi) in enumerate(blocks):
        if lo <= v <= hi:
            return i
    raise AssertionError("coordinate outside every block")


def find_grid(ps: PointSet, t: int, force: bool = False) -> GridWitness | None:
    if t < 1:
        raise MalformedInput("grid order must be at least 1")
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    pts = list(ps.points)
    if len(pts) < t * t:
        return None
    nx_ = len({p[0] for p in pts})
    ny_ = len({p[1] for p in pts})
    flip = ny_ < nx_
    if flip:
        pts = sorted((y, x) for x, y in pts)
    if min(nx_, ny_) > GUARD_COLUMNS and t > GUARD_ORDER and not force:
        raise TooLarge(f"{min(nx_, ny_)} distinct columns at t={t}")
    w = _Search(pts, t).run()
    if w is None:
        return None
    if flip:
        w = w.transpose()
        # re-pick cells so the witness stays canonical in the original frame
        w = _canonical_cells(ps, w)
    return w


def _canonical_cells(ps: PointSet, w: GridWitness) -> GridWitness:
    t = w.t
    cells = [[None] * t for _ in range(t)]
    for x, y in ps.points:
        try:
            i = _find_block(w.col_blocks, x)
            j = _find_block(w.row_blocks, y)
        except AssertionError:
            continue
        if cells[i][j] is None:
            cells[i][j] = (x, y)
    return GridWitness(t, tuple(tuple(c) for c in cells), w.col_blocks, w.row_blocks)


def balanced_grid(ps: PointSet, t: int) -> GridWitness | None:
    """Heuristic: equal-size column blocks, greedy rows. May miss grids."""
    pts = list(ps.points)
    s = _Search(pts, t)
    m = len(s.xs)
    if m < t:
        return None
    block_of = [min(c * t // m, t - 1) for c in range(m)]
    rows = s._rows_closed(block_of, t)
    if len(rows) < t:
        return None
    ends = [max(c for c in range(m) if block_of[c] == b) for b in range(t)]
    return s._witness(ends, rows)


def max_grid(ps: PointSet, force: bool = False) -> tuple[int, GridWitness]:
    if not isinstance(ps, PointSet):
        ps = PointSet(ps)
    if len(ps) == 0:
        raise EmptyInput("max_grid needs at least one point")
    best = (1, GridWitness(1, ((ps.points[0],),), ((ps.points[0][0],) * 2,), ((ps.points[0][1],) * 2,)))
    hi = math.isqrt(len(ps))
    for t in range(2, hi + 1):
        try:
            w = find_grid(ps, t, force)
        except TooLarge:
            w = balanced_grid(ps, t)
        if w is None:
            break
        best = (t, w)
    return best


def disjointify_grid(ps: PointSet, w: GridWitness) -> GridWitness:
    if w.t % 2:
        raise OddOrder(f"grid order {w.t} is odd")
    if not verify_grid(ps, w):
        raise InvalidWitness("input witness does not verify")
    m = w.t // 2
    x = max(w.cells[i][j][0] for i in range(m) for j in range(w.t))
    y = max(w.cells[i][j][1] for i in range(w.t) for j in range(m))
    if x <= y:
        cells = tuple(tuple(w.cells[i][m + j] for j in range(m)) for i in range(m))
        cb = w.col_blocks[:m]
        rb = w.row_blocks[m:]
    else:
        cells = tuple(tuple(w.cells[m + i][j] for j in range(m)) for i in range(m))
        cb = w.col_blocks[m:]
        rb = w.row_blocks[:m]
    return GridWitness(m, cells, tuple(cb), tuple(rb))


def monochromatic_subgrid(ps: PointSet, color: Mapping, t: int):
    classes: dict = {}
    for p in ps.points:
        if p not in color:
            raise MissingColor(f"point {p} has no colour")
        classes.setdefault(color[p], []).append(p)
    for c in sorted(classes):
        w = find_grid(PointSet(classes[c]), t)
        if w is not None:
            return c, w
    return None


def _ranks(order, n):
    if order is None:
        return list(range(n))
    rank = [0] * len(order)
    for i, v in enumerate(order):
        rank[v] = i
    return rank


def incidence_points(rel: Iterable[Sequence[int]], order: Sequence[int] | None = None) -> PointSet:
    rel = [(int(u), int(v)) for u, v in rel]
    if not rel:
        return PointSet()
    n = max(max(u, v) for u, v in rel) + 1
    if order is not None:
        n = max(n, len(order))
    rank = _ranks(order, n)
    rows = sorted(set(rel), key=lambda e: (rank[e[0]], rank[e[1]]))
    pts = []
    for r, (u, v) in enumerate(rows):
        pts.append((rank[u], r))
        pts.append((rank[v], r))
    return PointSet(pts)


def adjacency_points(rel: Iterable[Sequence[int]], order: Sequence[int] | None = None) -> PointSet:
    rel = [(int(u), int(v)) for u, v in rel]
    if not rel:
        return PointSet()
    n = max(max(u, v) for u, v in rel) + 1
    if order is not None:
        n = max(n, len(order))
    rank = _ranks(order, n)
    return PointSet((rank[u], rank[v]) for u, v in rel)
