"""Graphs, ordered binary structures, vertex partitions and homogeneity.

Vertices are dense 0-based integers. Vertex sets handed to the fast paths
are bitmasks (python ints), everything user facing accepts iterables.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InvalidPartition, InvalidVertex, MalformedInput


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


class Graph:
    """Simple undirected graph on ``range(n)``."""

    __slots__ = ("n", "edges", "labels", "_adj")

    def __init__(self, n: int, edges: Iterable[Sequence[int]] = (), labels=None):
        if n < 0:
            raise MalformedInput("negative vertex count")
        norm = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidVertex(f"edge {u}-{v} outside [0,{n})")
            if u == v:
                raise MalformedInput(f"self-loop at {u}")
            norm.add((u, v) if u < v else (v, u))
        self.n = n
        self.edges = tuple(sorted(norm))
        self.labels = tuple(labels) if labels is not None else None
        if self.labels is not None and len(self.labels) != n:
            raise MalformedInput("label count differs from n")
        adj = [0] * n
        for u, v in self.edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        self._adj = adj

    def adj_mask(self, v: int) -> int:
        return self._adj[v]

    def neighbors(self, v: int) -> list[int]:
        return members(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self._adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return bin(self._adj[v]).count("1")

    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def induced(self, vs: Iterable[int]) -> "Graph":
        keep = sorted(set(vs))
        pos = {v: i for i, v in enumerate(keep)}
        es = [(pos[u], pos[v]) for u, v in self.edges if u in pos and v in pos]
        labels = [self.labels[v] for v in keep] if self.labels else None
        return Graph(len(keep), es, labels)

    def to_structure(self, order: Sequence[int] | None = None) -> "OrderedBinaryStructure":
        pairs = [(u, v) for u, v in self.edges] + [(v, u) for u, v in self.edges]
        return OrderedBinaryStructure(self.n, {"E": pairs}, order)

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def __eq__(self, other):
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    def to_json(self) -> dict:
        d = {"n": self.n, "edges": [list(e) for e in self.edges]}
        if self.labels is not None:
            d["labels"] = list(self.labels)
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "Graph":
        try:
            return cls(int(d["n"]), d.get("edges", []), d.get("labels"))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise MalformedInput(f"bad graph document: {exc}") from exc


class OrderedBinaryStructure:
    """Vertices ``range(n)`` with named binary relations and an optional total order.

    ``order`` lists the vertices from smallest to largest. ``origin`` maps
    each vertex back to the id it had in a parent structure.
    """

    __slots__ = ("n", "relations", "order", "origin", "rank", "_out", "_symmetric")

    def __init__(self, n: int, relations: Mapping[str, Iterable[Sequence[int]]] | None = None,
                 order: Sequence[int] | None = None, origin: Sequence[int] | None = None):
        self.n = n
        rels = {}
        for name, pairs in (relations or {}).items():
            if name in rels:
                raise MalformedInput(f"duplicate relation {name}")
            ps = set()
            for p in pairs:
                u, v = int(p[0]), int(p[1])
                if not (0 <= u < n and 0 <= v < n):
                    raise InvalidVertex(f"pair {u},{v} outside [0,{n})")
                ps.add((u, v))
            rels[name] = frozenset(ps)
        self.relations = rels
        if order is not None:
            order = tuple(int(v) for v in order)
            if sorted(order) != list(range(n)):
                raise MalformedInput("order is not a permutation of the vertices")
            rank = [0] * n
            for i, v in enumerate(order):
                rank[v] = i
            self.rank = tuple(rank)
        else:
            self.rank = None
        self.order = order
        self.origin = tuple(origin) if origin is not None else tuple(range(n))
        self._out = {}
        self._symmetric = {}
        for name, ps in rels.items():
            out = [0] * n
            for u, v in ps:
                out[u] |= 1 << v
            self._out[name] = tuple(out)
            self._symmetric[name] = all((v, u) in ps for u, v in ps)

    @property
    def ordered(self) -> bool:
        return self.order is not None

    def out_masks(self, name: str) -> tuple:
        return self._out[name]

    def is_symmetric(self, name: str) -> bool:
        return self._symmetric[name]

    def check_vertices(self, vs: Iterable[int]):
        for v in vs:
            if not (0 <= v < self.n):
                raise InvalidVertex(f"vertex {v} outside [0,{self.n})")

    def summary(self, mask: int) -> "PartSummary":
        return PartSummary.of(self, mask)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "relations": {k: sorted([list(p) for p in v]) for k, v in sorted(self.relations.items())},
            "order": list(self.order) if self.order is not None else None,
        }

    @classmethod
    def from_json(cls, d: Mapping) -> "OrderedBinaryStructure":
        try:
            return cls(int(d["n"]), d.get("relations", {}), d.get("order"))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise MalformedInput(f"bad structure document: {exc}") from exc

    def __repr__(self):
        return f"OrderedBinaryStructure(n={self.n}, relations={sorted(self.relations)}, ordered={self.ordered})"


@dataclass(frozen=True)
class PartSummary:
    """Aggregated neighbourhood masks of a vertex set.

    ``any_out[r]`` is the union of out-neighbourhoods, ``all_out[r]`` their
    intersection. Two summaries are enough to decide homogeneity without
    touching individual vertices.
    """

    mask: int
    any_out: tuple
    all_out: tuple
    lo: int
    hi: int

    @staticmethod
    def of(s: OrderedBinaryStructure, mask: int) -> "PartSummary":
        vs = members(mask)
        anys, alls = [], []
        full = (1 << s.n) - 1
        for name in s.relations:
            out = s._out[name]
            a, b = 0, full
            for v in vs:
                a |= out[v]
                b &= out[v]
            anys.append(a)
            alls.append(b)
        if s.rank is not None:
            rs = [s.rank[v] for v in vs]
            lo, hi = min(rs), max(rs)
        else:
            lo = hi = 0
        return PartSummary(mask, tuple(anys), tuple(alls), lo, hi)

    def union(self, other: "PartSummary") -> "PartSummary":
        return PartSummary(
            self.mask | other.mask,
            tuple(a | b for a, b in zip(self.any_out, other.any_out)),
            tuple(a & b for a, b in zip(self.all_out, other.all_out)),
            min(self.lo, other.lo),
            max(self.hi, other.hi),
        )


def summaries_homogeneous(p: PartSummary, q: PartSummary, ordered: bool) -> bool:
    if ordered and not (p.hi < q.lo or q.hi < p.lo):
        return False
    pm, qm = p.mask, q.mask
    for i in range(len(p.any_out)):
        a = p.any_out[i] & qm
        if a and (p.all_out[i] & qm) != qm:
            return False
        a = q.any_out[i] & pm
        if a and (q.all_out[i] & pm) != pm:
            return False
    return True


def is_homogeneous(s: OrderedBinaryStructure, X: Iterable[int], Y: Iterable[int]) -> bool:
    X, Y = list(X), list(Y)
    s.check_vertices(X)
    s.check_vertices(Y)
    if not X or not Y:
        raise MalformedInput("homogeneity needs nonempty sets")
    return summaries_homogeneous(s.summary(mask_of(X)), s.summary(mask_of(Y)), s.ordered)


class VertexPartition:
    """Partition of ``range(n)``; a part is named by its smallest member."""

    __slots__ = ("n", "parts")

    def __init__(self, n: int, parts: Iterable[Iterable[int]]):
        seen = 0
        ps = []
        for part in parts:
            part = frozenset(int(v) for v in part)
            if not part:
                raise InvalidPartition("empty part")
            for v in part:
                if not (0 <= v < n):
                    raise InvalidPartition(f"vertex {v} outside [0,{n})")
            m = mask_of(part)
            if seen & m:
                raise InvalidPartition("parts overlap")
            seen |= m
            ps.append(part)
        if seen != (1 << n) - 1:
            raise InvalidPartition("parts do not cover every vertex")
        self.n = n
        self.parts = tuple(sorted(ps, key=min))

    @classmethod
    def singletons(cls, n: int) -> "VertexPartition":
        return cls(n, [[v] for v in range(n)])

    def ids(self) -> list[int]:
        return [min(p) for p in self.parts]

    def masks(self) -> list[int]:
        return [mask_of(p) for p in self.parts]

    def __len__(self):
        return len(self.parts)

    def __repr__(self):
        return f"VertexPartition({[sorted(p) for p in self.parts]})"


def red_degrees(s: OrderedBinaryStructure, masks: Sequence[int]) -> list[int]:
    sums = [s.summary(m) for m in masks]
    deg = [0] * len(sums)
    for i in range(len(sums)):
        for j in range(i + 1, len(sums)):
            if not summaries_homogeneous(sums[i], sums[j], s.ordered):
                deg[i] += 1
                deg[j] += 1
    return deg


def error_degree(s: OrderedBinaryStructure, p: VertexPartition) -> int:
    if not isinstance(p, VertexPartition):
        p = VertexPartition(s.n, p)
    if p.n != s.n:
        raise InvalidPartition("partition and structure sizes differ")
    return max(red_degrees(s, p.masks()), default=0)


def induced_substructure(s: OrderedBinaryStructure, S: Iterable[int]) -> OrderedBinaryStructure:
    keep = sorted(set(S))
    s.check_vertices(keep)
    pos = {v: i for i, v in enumerate(keep)}
    rels = {
        name: [(pos[u], pos[v]) for u, v in ps if u in pos and v in pos]
        for name, ps in s.relations.items()
    }
    order = [pos[v] for v in s.order if v in pos] if s.order is not None else None
    origin = [s.origin[v] for v in keep]
    return OrderedBinaryStructure(len(keep), rels, order, origin)


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))
