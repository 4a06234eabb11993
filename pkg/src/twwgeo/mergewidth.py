"""Merge-width construction sequences and their radius-r width."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .errors import InconsistentResolve, InvalidMerge, MalformedInput, PathTooShort, WrongGraph
from .families import gen_halfgraph as halfgraph  # noqa: F401  (a_i = i, b_j = n + j)
from .structures import Graph

OPS = ("merge", "pos", "neg")


@dataclass(frozen=True)
class ConstructionSequence:
    ops: tuple  # (kind, a, b) with kind in OPS

    def __init__(self, ops: Iterable[Sequence] = ()):
        norm = []
        for op in ops:
            kind, a, b = op
            if kind not in OPS:
                raise MalformedInput(f"unknown operation {kind!r}")
            norm.append((kind, int(a), int(b)))
        object.__setattr__(self, "ops", tuple(norm))

    def __len__(self):
        return len(self.ops)

    def __add__(self, other):
        return ConstructionSequence(self.ops + tuple(other.ops))

    def shifted(self, offset: int) -> "ConstructionSequence":
        return ConstructionSequence((k, a + offset, b + offset) for k, a, b in self.ops)

    def to_json(self) -> dict:
        return {"ops": [{"op": k, "a": a, "b": b} for k, a, b in self.ops]}

    @classmethod
    def from_json(cls, d: Mapping) -> "ConstructionSequence":
        try:
            return cls((o["op"], o["a"], o["b"]) for o in d["ops"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad construction document: {exc}") from exc


def parse_radius(r) -> float:
    if isinstance(r, str):
        if r.lower() in ("inf", "infinity", "∞"):
            return math.inf
        r = int(r)
    if r is None:
        return math.inf
    if r < 0:
        raise MalformedInput("radius must be non-negative")
    return r


class _State:
    def __init__(self, n: int):
        self.n = n
        self.label = np.arange(n)
        self.parts = {v: [v] for v in range(n)}
        self.resolved = np.eye(n, dtype=bool)  # diagonal counts as resolved
        self.edge = np.zeros((n, n), dtype=bool)

    def live(self, a):
        if a not in self.parts:
            raise InvalidMerge(f"part {a} is not live")

    def merge(self, a, b):
        self.live(a)
        self.live(b)
        if a == b:
            raise InvalidMerge(f"merge({a},{a}) names one part")
        new, old = min(a, b), max(a, b)
        self.parts[new] = sorted(self.parts[new] + self.parts.pop(old))
        self.label[self.parts[new]] = new

    def resolve(self, a, b, positive):
        self.live(a)
        self.live(b)
        pa, pb = np.array(self.parts[a]), np.array(self.parts[b])
        fresh = ~self.resolved[np.ix_(pa, pb)]
        if not fresh.any():
            return False
        if positive:
            self.edge[np.ix_(pa, pb)] |= fresh
            self.edge[np.ix_(pb, pa)] |= fresh.T
        self.resolved[np.ix_(pa, pb)] = True
        self.resolved[np.ix_(pb, pa)] = True
        return True

    def width(self, r) -> int:
        n = self.n
        if n == 0:
            return 0
        ids = sorted(self.parts)
        col = {p: i for i, p in enumerate(ids)}
        part_idx = np.array([col[x] for x in self.label])
        if r == 0:
            return 1
        adj = self.resolved.copy()
        np.fill_diagonal(adj, False)
        if math.isinf(r) or r >= n:
            _, comp = connected_components(csr_matrix(adj), directed=False)
            pairs = np.unique(np.stack([comp, part_idx]), axis=1)
            return int(np.bincount(pairs[0]).max())
        a = adj.astype(np.float32)
        reach = np.eye(n, dtype=bool)
        for _ in range(int(r)):
            nxt = reach | ((reach.astype(np.float32) @ a) > 0)
            if (nxt == reach).all():
                break
            reach = nxt
        onehot = np.zeros((n, len(ids)), dtype=np.float32)
        onehot[np.arange(n), part_idx] = 1
        hits = (reach.astype(np.float32) @ onehot) > 0
        return int(hits.sum(axis=1).max())


def verify_construction(g: Graph, seq: ConstructionSequence, r=math.inf, trace: bool = False):
    """Radius-r width of ``seq``; raises WrongGraph unless it builds ``g``.

    The count of reachable parts can only drop at a merge, so it is
    evaluated right before merges and at the end, whenever the resolved
    graph changed since the last evaluation.
    """
    r = parse_radius(r)
    n = g.n
    st = _State(n)
    width = 1 if n else 0
    steps = []
    dirty = False
    for idx, (kind, a, b) in enumerate(seq.ops):
        if kind == "merge":
            if dirty:
                w = st.width(r)
                steps.append((idx, w))
                width = max(width, w)
                dirty = False
            st.merge(a, b)
        else:
            dirty |= st.resolve(a, b, kind == "pos")
    if dirty:
        w = st.width(r)
        steps.append((len(seq.ops), w))
        width = max(width, w)
    if (st.edge & ~st.resolved).any():
        raise InconsistentResolve("an edge was recorded for an unresolved pair")
    if len(st.parts) > 1:
        raise WrongGraph(f"{len(st.parts)} parts remain at the end")
    if not st.resolved.all():
        raise WrongGraph("some vertex pairs were never resolved")
    want = np.zeros((n, n), dtype=bool)
    for u, v in g.edges:
        want[u, v] = want[v, u] = True
    if not (want == st.edge).all():
        diff = int((want != st.edge).sum()) // 2
        raise WrongGraph(f"resolved edges differ from the graph on {diff} pairs")
    return (width, steps) if trace else width


def build_halfgraph_construction(n: int) -> ConstructionSequence:
    if n < 1:
        raise MalformedInput("half-graph needs n >= 1")
    if n == 1:
        return ConstructionSequence([("merge", 0, 1), ("pos", 0, 0)])
    ops = []
    A, B = 0, n
    for j in range(n):
        a, b = j, n + j
        if j:
            ops.append(("merge", A, a))
            ops.append(("neg", A, B))
        ops.append(("pos", b, A))
        if j:
            ops.append(("merge", B, b))
    ops += [("neg", A, A), ("neg", B, B), ("merge", A, B)]
    return ConstructionSequence(ops)


def disjoint_union(g1: Graph, s1: ConstructionSequence, g2: Graph, s2: ConstructionSequence):
    """Graph and sequence for g1 followed by g2 (ids of g2 shifted)."""
    off = g1.n
    g = Graph(g1.n + g2.n, list(g1.edges) + [(u + off, v + off) for u, v in g2.edges])
    ops = list(s1.ops) + list(s2.shifted(off).ops)
    if g1.n and g2.n:
        ops += [("merge", 0, off), ("neg", 0, 0)]
    return g, ConstructionSequence(ops)


def augment_with_paths(g: Graph, base: ConstructionSequence, pairs, length: int):
    """Attach a fresh path of ``length`` edges between each pair.

    Returns the new graph and a sequence that first builds all paths and
    gathers their internal vertices in one part, then replays ``base``,
    then merges everything and closes negatively.
    """
    if length < 2:
        raise PathTooShort(f"path length {length} < 2")
    n = g.n
    edges = list(g.edges)
    ops = []
    nxt = n
    S = None
    for x, y in pairs:
        if not (0 <= x < n and 0 <= y < n):
            raise MalformedInput(f"pair ({x},{y}) outside the base graph")
        path = [x] + list(range(nxt, nxt + length - 1)) + [y]
        nxt += length - 1
        edges += list(zip(path, path[1:]))
        ops.append(("pos", path[0], path[1]))
        for j in range(1, length):
            ops.append(("pos", path[j], path[j + 1]))
            if S is None:
                S = path[j]
            else:
                ops.append(("merge", S, path[j]))
    ops += list(base.ops)
    if S is not None and n:
        ops.append(("merge", 0, S))
    if n or S is not None:
        ops.append(("neg", 0 if n else S, 0 if n else S))
    return Graph(nxt, edges), ConstructionSequence(ops)


def phase_one_length(pairs, length: int) -> int:
    """Number of leading ops spent building the paths."""
    m = len(list(pairs))
    return m * (1 + (length - 1)) + max(m * (length - 1) - 1, 0)
