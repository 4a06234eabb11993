"""Named graph families and the graph rewrites that relate them.

Vertex numbering conventions are fixed so generated graphs and witnesses
line up without extra bookkeeping:

* transversal graph T_k: a_i = i, b_{i,j} = k + i*k + j, c_j = k + k*k + j
* half-graph HG_n: a_i = i, b_j = n + j, edge a_i b_j iff i <= j
* H_sigma^l: a = [0,n), b = [n,2n), c = [2n,3n), d = [3n,4n), then the
  l-1 internal vertices of each b_i -> c_sigma(i) path, path by path

Permutations are given 1-based, as sequences (sigma(1), ..., sigma(n)).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import InvalidWitness, MalformedInput, NotBipartite, StructureMismatch
from .structures import Graph


@dataclass(frozen=True)
class TransversalWitness:
    A: tuple
    B: tuple  # B[i][j]
    C: tuple

    @property
    def k(self) -> int:
        return len(self.A)

    def ids(self) -> list[int]:
        return list(self.A) + [b for row in self.B for b in row] + list(self.C)

    def flipped(self, rows: bool, cols: bool) -> "TransversalWitness":
        """Reverse the A index (with B's first index) and/or C (with B's second)."""
        A, B, C = list(self.A), [list(r) for r in self.B], list(self.C)
        if rows:
            A.reverse()
            B.reverse()
        if cols:
            C.reverse()
            B = [r[::-1] for r in B]
        return TransversalWitness(tuple(A), tuple(tuple(r) for r in B), tuple(C))

    def relabel(self, f) -> "TransversalWitness":
        return TransversalWitness(tuple(f(a) for a in self.A),
                                  tuple(tuple(f(b) for b in r) for r in self.B),
                                  tuple(f(c) for c in self.C))

    def to_json(self) -> dict:
        return {"k": self.k, "A": list(self.A), "B": [list(r) for r in self.B], "C": list(self.C)}

    @classmethod
    def from_json(cls, d: Mapping) -> "TransversalWitness":
        try:
            return cls(tuple(int(a) for a in d["A"]),
                       tuple(tuple(int(b) for b in r) for r in d["B"]),
                       tuple(int(c) for c in d["C"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedInput(f"bad transversal witness: {exc}") from exc


def verify_transversal(g: Graph, w: TransversalWitness) -> bool:
    k = w.k
    if k < 1 or len(w.C) != k or len(w.B) != k or any(len(r) != k for r in w.B):
        raise InvalidWitness("witness shape is not k, k x k, k")
    ids = w.ids()
    if any(not (0 <= v < g.n) for v in ids):
        raise InvalidWitness("witness names a vertex outside the graph")
    if len(set(ids)) != len(ids):
        raise InvalidWitness("witness ids are not distinct")
    for i, a in enumerate(w.A):
        for i2 in range(k):
            for j2 in range(k):
                if g.has_edge(a, w.B[i2][j2]) != (i <= i2):
                    return False
    for j, c in enumerate(w.C):
        for i2 in range(k):
            for j2 in range(k):
                if g.has_edge(w.B[i2][j2], c) != (j2 <= j):
                    return False
    return True


def canonical_transversal_witness(k: int) -> TransversalWitness:
    return TransversalWitness(tuple(range(k)),
                              tuple(tuple(k + i * k + j for j in range(k)) for i in range(k)),
                              tuple(k + k * k + j for j in range(k)))


def gen_transversal_graph(k: int) -> Graph:
    if k < 1:
        raise MalformedInput("k must be at least 1")
    w = canonical_transversal_witness(k)
    edges = []
    for i in range(k):
        for j in range(k):
            b = w.B[i][j]
            edges += [(w.A[i2], b) for i2 in range(i + 1)]
            edges += [(b, w.C[j2]) for j2 in range(j, k)]
    return Graph(k * k + 2 * k, edges)


def gen_halfgraph(n: int) -> Graph:
    return Graph(2 * n, [(i, n + j) for i in range(n) for j in range(i, n)])


def check_permutation(sigma: Sequence[int]) -> list[int]:
    sigma = [int(x) for x in sigma]
    if sorted(sigma) != list(range(1, len(sigma) + 1)):
        raise MalformedInput(f"{sigma} is not a permutation of 1..{len(sigma)}")
    return sigma


def hsigma_roles(n: int, length: int):
    """Vertex ids of a, b, c, d and the per-path internals of H_sigma^l."""
    a = list(range(n))
    b = list(range(n, 2 * n))
    c = list(range(2 * n, 3 * n))
    d = list(range(3 * n, 4 * n))
    base = 4 * n
    inner = [list(range(base + i * (length - 1), base + (i + 1) * (length - 1))) for i in range(n)]
    return a, b, c, d, inner


def gen_Hsigma(sigma: Sequence[int], length: int) -> Graph:
    if length < 1:
        raise MalformedInput("path length must be at least 1")
    sigma = check_permutation(sigma)
    n = len(sigma)
    a, b, c, d, inner = hsigma_roles(n, length)
    edges = [(a[i], b[j]) for i in range(n) for j in range(i, n)]
    edges += [(c[i], d[j]) for i in range(n) for j in range(i, n)]
    for i in range(n):
        path = [b[i]] + inner[i] + [c[sigma[i] - 1]]
        edges += list(zip(path, path[1:]))
    return Graph(n * (length + 3), edges)


def universal_permutation(n: int) -> tuple:
    if n < 1:
        raise MalformedInput("n must be at least 1")
    sigma = [0] * (n * n)
    for i in range(n):
        for j in range(n):
            sigma[i * n + j] = j * n + i + 1
    return tuple(sigma)


def gen_subdivided_complete(n: int, length: int, bipartite: bool) -> Graph:
    """Biclique K_{n,n} or clique K_n with every edge replaced by a path."""
    if length < 1:
        raise MalformedInput("path length must be at least 1")
    if bipartite:
        hubs = 2 * n
        pairs = [(i, n + j) for i in range(n) for j in range(n)]
    else:
        hubs = n
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    edges = []
    nxt = hubs
    for u, v in pairs:
        path = [u] + list(range(nxt, nxt + length - 1)) + [v]
        nxt += length - 1
        edges += list(zip(path, path[1:]))
    return Graph(nxt, edges)


def isomorphic(g: Graph, h: Graph) -> bool:
    import networkx as nx

    if g.n != h.n or len(g.edges) != len(h.edges):
        return False
    if sorted(map(g.degree, range(g.n))) != sorted(map(h.degree, range(h.n))):
        return False
    return nx.is_isomorphic(g.to_networkx(), h.to_networkx())


def _keep_minimal(adj: dict, hubs: Iterable[int], middles: Iterable[int]):
    """Edges hub-m such that hub has an inclusion-minimal neighbourhood
    among the hubs adjacent to m."""
    hubs = list(hubs)
    keep = set()
    for m in middles:
        near = [h for h in hubs if m in adj[h]]
        for h in near:
            if all(adj[h] <= adj[h2] for h2 in near):
                keep.add((h, m))
    return keep


def extract_biclique_from_Hsigma(g: Graph, n: int) -> Graph:
    """Carve the subdivided biclique K_{n,n}^{(l+2)} out of H_sigma^l.

    ``g`` must use the numbering of :func:`gen_Hsigma` with a permutation
    of ``1..n*n``.
    """
    N = n * n
    if g.n % N or g.n // N < 4:
        raise StructureMismatch(f"{g.n} vertices do not fit H_sigma^l on {N} paths")
    length = g.n // N - 3
    a, b, c, d, inner = hsigma_roles(N, length)
    X = [a[i * n] for i in range(n)]
    Y = [d[(i + 1) * n - 1] for i in range(n)]
    drop = (set(a) - set(X)) | (set(d) - set(Y))
    keep = [v for v in range(g.n) if v not in drop]
    kept = set(keep)
    adj = {v: {u for u in g.neighbors(v) if u in kept} for v in keep}
    xb = _keep_minimal(adj, X, b)
    yc = _keep_minimal(adj, Y, c)
    Xs, Ys, Bs, Cs = set(X), set(Y), set(b), set(c)
    edges = []
    for u, v in g.edges:
        if u not in kept or v not in kept:
            continue
        if {u, v} & Xs and {u, v} & Bs:
            x, m = (u, v) if u in Xs else (v, u)
            if (x, m) not in xb:
                continue
        if {u, v} & Ys and {u, v} & Cs:
            y, m = (u, v) if u in Ys else (v, u)
            if (y, m) not in yc:
                continue
        edges.append((u, v))
    out = Graph(g.n, edges).induced(keep)
    if not isomorphic(out, gen_subdivided_complete(n, length + 2, True)):
        raise StructureMismatch("result is not the expected subdivided biclique")
    return out


def bipartition(h: Graph, sides=None):
    """Return ``(X, Y)``; checks a given split or 2-colours the graph."""
    if sides is not None:
        X, Y = [int(v) for v in sides[0]], [int(v) for v in sides[1]]
        if sorted(X + Y) != list(range(h.n)):
            raise MalformedInput("sides must partition the vertices")
        sx = set(X)
        for u, v in h.edges:
            if (u in sx) == (v in sx):
                raise NotBipartite(f"edge {u}-{v} lies inside one side")
        return X, Y
    colour = {}
    for s in range(h.n):
        if s in colour:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for v in h.neighbors(u):
                if v not in colour:
                    colour[v] = 1 - colour[u]
                    stack.append(v)
                elif colour[v] == colour[u]:
                    raise NotBipartite(f"odd cycle through edge {u}-{v}")
    X = [v for v in range(h.n) if colour[v] == 0]
    Y = [v for v in range(h.n) if colour[v] == 1]
    return X, Y


def encode_bipartite_in_transversal(h: Graph, sides=None) -> Graph:
    """Recover ``h`` from a transversal pair by marking middle vertices.

    The returned graph is on ``h``'s vertex ids and should equal ``h``.
    """
    X, Y = bipartition(h, sides)
    n = max(len(X), len(Y))
    if n == 0:
        return Graph(h.n)
    t = gen_transversal_graph(n)
    w = canonical_transversal_witness(n)
    adj = {v: set(t.neighbors(v)) for v in range(t.n)}
    middles = [b for row in w.B for b in row]
    ab = _keep_minimal(adj, w.A, middles)
    cb = _keep_minimal(adj, w.C, middles)
    marked = {w.B[i][j] for i in range(len(X)) for j in range(len(Y)) if h.has_edge(X[i], Y[j])}
    edges = []
    for i in range(len(X)):
        for j in range(len(Y)):
            if any((w.A[i], m) in ab and (w.C[j], m) in cb for m in marked):
                edges.append((X[i], Y[j]))
    return Graph(h.n, edges, h.labels)


def gen_Gbullet(h: Graph, sides=None) -> Graph:
    """U, V, E(h) as cliques; an edge vertex sees U and V minus its ends."""
    X, Y = bipartition(h, sides)
    pos = {v: i for i, v in enumerate(X + Y)}
    eids = sorted(h.edges)
    nu, nv = len(X), len(Y)
    base = nu + nv
    edges = []
    for group in (range(nu), range(nu, base), range(base, base + len(eids))):
        g = list(group)
        edges += [(g[i], g[j]) for i in range(len(g)) for j in range(i + 1, len(g))]
    for k, (u, v) in enumerate(eids):
        ends = {pos[u], pos[v]}
        edges += [(base + k, x) for x in range(base) if x not in ends]
    labels = [f"u{v}" for v in X] + [f"v{v}" for v in Y] + [f"e{u}-{v}" for u, v in eids]
    return Graph(base + len(eids), edges, labels)
