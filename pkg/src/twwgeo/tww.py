"""Contraction sequences: verification, exact search, greedy heuristic, composition."""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (BadBlockSequence, InvalidMerge, LengthMismatch, MalformedInput,
                     NotBlockStructured, TooLarge)
from .structures import OrderedBinaryStructure, PartSummary, mask_of, summaries_homogeneous

DEFAULT_MAX_EXACT = 12


def max_exact() -> int:
    raw = os.environ.get("TWWGEO_MAX_EXACT")
    if not raw:
        return DEFAULT_MAX_EXACT
    try:
        return int(raw)
    except ValueError:
        raise MalformedInput(f"TWWGEO_MAX_EXACT={raw!r} is not an integer")


@dataclass(frozen=True)
class ContractionSequence:
    merges: tuple

    def __init__(self, merges: Iterable[Sequence[int]] = ()):
        object.__setattr__(self, "merges", tuple((int(a), int(b)) for a, b in merges))

    def __len__(self):
        return len(self.merges)

    def __add__(self, other):
        return ContractionSequence(self.merges + tuple(other.merges))

    def to_json(self) -> dict:
        return {"merges": [list(m) for m in self.merges]}

    @classmethod
    def from_json(cls, d: Mapping) -> "ContractionSequence":
        try:
            return cls(d["merges"])
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise MalformedInput(f"bad contraction document: {exc}") from exc


class Replay:
    """Live partition with its error graph, updated merge by merge."""

    def __init__(self, s: OrderedBinaryStructure, vertices: Iterable[int] | None = None):
        self.s = s
        vs = range(s.n) if vertices is None else vertices
        self.parts = {v: s.summary(1 << v) for v in vs}
        self.red = {v: set() for v in self.parts}
        # singletons are pairwise homogeneous, so no red edges yet

    def degree(self) -> int:
        return max((len(r) for r in self.red.values()), default=0)

    def merge(self, a: int, b: int) -> int:
        if a == b or a not in self.parts or b not in self.parts:
            raise InvalidMerge(f"merge({a},{b}) does not name two live parts")
        pa, pb = self.parts.pop(a), self.parts.pop(b)
        for x in self.red.pop(a):
            self.red[x].discard(a)
        for x in self.red.pop(b):
            self.red[x].discard(b)
        new = min(a, b)
        m = pa.union(pb)
        self.parts[new] = m
        rs = set()
        ordered = self.s.ordered
        for pid, q in self.parts.items():
            if pid != new and not summaries_homogeneous(m, q, ordered):
                rs.add(pid)
                self.red[pid].add(new)
        self.red[new] = rs
        return self.degree()


def verify_contraction(s: OrderedBinaryStructure, seq: ContractionSequence,
                       complete: bool = True, trace: bool = False):
    """Width of ``seq`` on ``s``; with ``trace`` also the per-step degrees.

    ``complete=False`` accepts a prefix of a sequence (fewer merges).
    """
    if complete and len(seq) != max(s.n - 1, 0):
        raise LengthMismatch(f"expected {max(s.n - 1, 0)} merges, got {len(seq)}")
    if len(seq) > max(s.n - 1, 0):
        raise LengthMismatch("more merges than vertices allow")
    rp = Replay(s)
    steps = [0]
    for a, b in seq.merges:
        steps.append(rp.merge(a, b))
    width = max(steps)
    return (width, steps) if trace else width


def _side_of(sides, n):
    if sides is None:
        return None
    a_mask = mask_of(sides[0])
    return [0 if a_mask >> v & 1 else 1 for v in range(n)]


def greedy_contraction(s: OrderedBinaryStructure, sides=None) -> ContractionSequence:
    """Merge the cheapest pair until one part is left.

    Ordered inputs only consider parts adjacent in the order. With ``sides``
    (a bipartition ``(A, B)``), parts never cross and the run stops at
    ``{A, B}``.
    """
    n = s.n
    side = _side_of(sides, n)
    ordered = s.ordered
    parts = {v: s.summary(1 << v) for v in range(n)}
    red = {v: set() for v in range(n)}
    cache = {}

    def homog(p: PartSummary, q: PartSummary) -> bool:
        key = (p.mask, q.mask) if p.mask < q.mask else (q.mask, p.mask)
        r = cache.get(key)
        if r is None:
            r = summaries_homogeneous(p, q, ordered)
            cache[key] = r
        return r

    target = 1 if side is None else len(set(side))
    merges = []
    while len(parts) > target:
        ids = sorted(parts)
        if ordered:
            by_rank = sorted(ids, key=lambda i: parts[i].lo)
            if side is None:
                cands = list(zip(by_rank, by_rank[1:]))
            else:
                cands = []
                for sd in (0, 1):
                    seq_ = [i for i in by_rank if side[i] == sd]
                    cands.extend(zip(seq_, seq_[1:]))
        else:
            cands = [(a, b) for i, a in enumerate(ids) for b in ids[i + 1:]
                     if side is None or side[a] == side[b]]
        degs = {i: len(red[i]) for i in ids}
        best = None
        for a, b in cands:
            a, b = min(a, b), max(a, b)
            m = parts[a].union(parts[b])
            worst = 0
            own = 0
            for r in ids:
                if r == a or r == b:
                    continue
                hm = not homog(m, parts[r])
                d = degs[r] - (a in red[r]) - (b in red[r]) + hm
                own += hm
                if d > worst:
                    worst = d
            worst = max(worst, own)
            key = (worst, a, b)
            if best is None or key < best:
                best = key
        if best is None:
            break
        _, a, b = best
        m = parts[a].union(parts[b])
        del parts[a], parts[b]
        for x in red.pop(a) | red.pop(b):
            if x in red:
                red[x].discard(a)
                red[x].discard(b)
        parts[a] = m
        red[a] = set()
        for r, q in parts.items():
            if r != a and not homog(m, q):
                red[a].add(r)
                red[r].add(a)
        merges.append((a, b))
    return ContractionSequence(merges)


def exact_tww(s: OrderedBinaryStructure, sides=None, cap: int | None = None):
    """Optimal width and a witnessing sequence by exhaustive search.

    With ``sides`` the search is restricted to sequences that never merge
    across the bipartition and stop at it.
    """
    cap = max_exact() if cap is None else cap
    n = s.n
    if n > cap:
        raise TooLarge(f"exact search capped at {cap} vertices, got {n}")
    side = _side_of(sides, n)
    target = 1 if side is None else len(set(side))
    if n <= target:
        return 0, ContractionSequence()
    ordered = s.ordered
    summ = {}
    hcache = {}

    def summary(m):
        r = summ.get(m)
        if r is None:
            r = summ[m] = s.summary(m)
        return r

    def red(p, q):
        key = (p, q) if p < q else (q, p)
        r = hcache.get(key)
        if r is None:
            r = hcache[key] = not summaries_homogeneous(summary(p), summary(q), ordered)
        return r

    def degree(state):
        deg = [0] * len(state)
        for i in range(len(state)):
            for j in range(i + 1, len(state)):
                if red(state[i], state[j]):
                    deg[i] += 1
                    deg[j] += 1
        return max(deg)

    def low(m):
        return (m & -m).bit_length() - 1

    failed: dict = {}

    def children(state):
        out = []
        for i in range(len(state)):
            for j in range(i + 1, len(state)):
                if side is not None and side[low(state[i])] != side[low(state[j])]:
                    continue
                merged = state[i] | state[j]
                new = tuple(sorted(state[:i] + state[i + 1:j] + state[j + 1:] + (merged,), key=low))
                out.append((degree(new), low(state[i]), low(state[j]), new))
        out.sort(key=lambda c: c[:3])
        return out

    def dfs(state, w):
        if len(state) == target:
            return []
        for d, a, b, new in children(state):
            if d > w:
                break
            if failed.get(new, -1) >= w:
                continue
            rest = dfs(new, w)
            if rest is not None:
                return [(a, b)] + rest
        failed[state] = w
        return None

    start = tuple(1 << v for v in range(n))
    upper_seq = greedy_contraction(s, sides)
    upper = _partial_width(s, upper_seq)
    for w in range(upper):
        got = dfs(start, w)
        if got is not None:
            return w, ContractionSequence(got)
    return upper, upper_seq


def _partial_width(s, seq):
    return verify_contraction(s, seq, complete=False)


def restrict_sequence(seq: ContractionSequence, S: Iterable[int], n: int | None = None) -> ContractionSequence:
    """Project a sequence on ``range(n)`` onto ``S``, relabelled by rank in ``S``."""
    keep = sorted(set(S))
    if n is None:
        n = len(seq) + 1
    label = {v: i for i, v in enumerate(keep)}
    inside = {v: ({v} if v in label else set()) for v in range(n)}
    out = []
    for a, b in seq.merges:
        if a not in inside or b not in inside or a == b:
            raise InvalidMerge(f"merge({a},{b}) does not name two live parts")
        pa, pb = inside.pop(a), inside.pop(b)
        if pa and pb:
            out.append((label[min(pa)], label[min(pb)]))
        inside[min(a, b)] = pa | pb
    return ContractionSequence(out)


def _check_interval(rank, vs, what):
    rs = sorted(rank[v] for v in vs)
    if rs and rs[-1] - rs[0] + 1 != len(rs):
        raise NotBlockStructured(f"{what} is not an interval of the order")
    return (rs[0], rs[-1]) if rs else None


def compose_block_sequences(s: OrderedBinaryStructure, blocks, seqs) -> ContractionSequence:
    """Glue per-block sequences into one sequence for the whole structure.

    Each block is a pair ``(A_i, B_i)``; the order must read
    ``A_1 < ... < A_m < B_1 < ... < B_m`` and every related pair must lie
    inside one block. Each input sequence stops at ``{A_i, B_i}``.
    """
    blocks = [(sorted(set(a)), sorted(set(b))) for a, b in blocks]
    if len(seqs) != len(blocks):
        raise MalformedInput("one sequence per block is required")
    rank = s.rank if s.rank is not None else list(range(s.n))
    owner = {}
    for i, (a, b) in enumerate(blocks):
        for v in a + b:
            if v in owner:
                raise NotBlockStructured(f"vertex {v} in two blocks")
            owner[v] = i
    if len(owner) != s.n:
        raise NotBlockStructured("blocks do not cover every vertex")
    spans_a = [_check_interval(rank, a, f"A_{i}") for i, (a, _) in enumerate(blocks)]
    spans_b = [_check_interval(rank, b, f"B_{i}") for i, (_, b) in enumerate(blocks)]
    chain = [sp for sp in spans_a if sp] + [sp for sp in spans_b if sp]
    for (_, hi), (lo, _) in zip(chain, chain[1:]):
        if not hi < lo:
            raise NotBlockStructured("blocks are not laid out as A_1<...<A_m<B_1<...<B_m")
    for ps in s.relations.values():
        for u, v in ps:
            if owner[u] != owner[v]:
                raise NotBlockStructured(f"pair ({u},{v}) crosses blocks")

    merges = []
    for i, ((a, b), seq) in enumerate(zip(blocks, seqs)):
        side = {v: 0 for v in a}
        side.update({v: 1 for v in b})
        live = {v: {v} for v in side}
        for x, y in seq.merges:
            if x not in live or y not in live or x == y:
                raise BadBlockSequence(f"block {i}: merge({x},{y}) names no live block parts")
            if side[x] != side[y]:
                raise BadBlockSequence(f"block {i}: merge({x},{y}) crosses the bipartition")
            live[min(x, y)] = live.pop(x) | live.pop(y)
            merges.append((x, y))
        want = [set(p) for p in (a, b) if p]
        if sorted(map(sorted, live.values())) != sorted(map(sorted, want)):
            raise BadBlockSequence(f"block {i}: sequence does not end at its bipartition")

    acc_a = acc_b = None
    for a, b in blocks:
        if a:
            if acc_a is None:
                acc_a = a[0]
            else:
                merges.append((acc_a, a[0]))
                acc_a = min(acc_a, a[0])
        if b:
            if acc_b is None:
                acc_b = b[0]
            else:
                merges.append((acc_b, b[0]))
                acc_b = min(acc_b, b[0])
    if acc_a is not None and acc_b is not None:
        merges.append((acc_a, acc_b))
    return ContractionSequence(merges)

