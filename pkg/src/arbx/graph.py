"""Market graphs, spanning trees, fundamental cycles, and seeded test-graph
generators.

Vertices stand for tradable goods and are numbered 1..n in every public
interface. An edge {i, j} means the pair trades directly; reflexive loops
{i, i} may be stored but never enter spanning trees or fundamental cycles.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from operator import index as _int
from typing import Iterable

import numpy as np

from .errors import (
    BadParamsError,
    DuplicateEdgeError,
    GraphIndexError,
    NotConnectedError,
    OracleSizeError,
    TreeMismatchError,
)

ORACLE_MAX_VERTICES = 8
"""Vertex cap for brute-force cycle enumeration and the checks built on it."""

Edge = tuple[int, int]


@dataclass(frozen=True)
class MarketGraph:
    """Undirected market graph on goods 1..n.

    ``edges`` holds normalized pairs (i, j) with i <= j; a pair with i == j
    is a reflexive loop. Connectivity is not a construction invariant; it is
    a precondition of the algorithms that need it (see :func:`is_connected`).
    """

    n: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise BadParamsError(f"vertex count must be >= 1, got {self.n}")
        for i, j in self.edges:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise GraphIndexError(f"edge ({i}, {j}) out of range 1..{self.n}")
            if i > j:
                raise BadParamsError(f"edge ({i}, {j}) is not normalized; use new_graph()")

    @cached_property
    def simple_edges(self) -> tuple[Edge, ...]:
        """Non-loop edges in ascending order."""
        return tuple(sorted(e for e in self.edges if e[0] != e[1]))

    @cached_property
    def loops(self) -> tuple[int, ...]:
        """Vertices carrying a reflexive loop, ascending."""
        return tuple(sorted(i for i, j in self.edges if i == j))

    @cached_property
    def _adjacency(self) -> dict[int, tuple[int, ...]]:
        nbrs: dict[int, list[int]] = {v: [] for v in range(1, self.n + 1)}
        for i, j in self.simple_edges:
            nbrs[i].append(j)
            nbrs[j].append(i)
        return {v: tuple(sorted(ws)) for v, ws in nbrs.items()}

    @cached_property
    def edge_mask(self) -> np.ndarray:
        """Boolean (n, n) array, True exactly at edge coordinates (loops included)."""
        mask = np.zeros((self.n, self.n), dtype=bool)
        for i, j in self.edges:
            mask[i - 1, j - 1] = True
            mask[j - 1, i - 1] = True
        mask.setflags(write=False)
        return mask

    def neighbors(self, v: int) -> tuple[int, ...]:
        """Non-loop neighbors of ``v`` in ascending order."""
        if not 1 <= v <= self.n:
            raise GraphIndexError(f"vertex {v} out of range 1..{self.n}")
        return self._adjacency[v]

    def has_edge(self, i: int, j: int) -> bool:
        a, b = (i, j) if i <= j else (j, i)
        return (a, b) in self.edges


@dataclass(frozen=True, eq=False)
class SpanningTree:
    """Rooted spanning tree; ``tree_edges`` are (parent, child) in discovery order."""

    root: int
    parent: dict[int, int]
    tree_edges: tuple[Edge, ...]

    def path_to_root(self, v: int) -> list[int]:
        """Vertices from ``v`` up to the root, both inclusive."""
        path = [v]
        while path[-1] != self.root:
            nxt = self.parent.get(path[-1])
            if nxt is None or len(path) > len(self.parent) + 1:
                raise TreeMismatchError(f"no tree path from {v} to root {self.root}")
            path.append(nxt)
        return path


@dataclass(frozen=True)
class FundamentalCycle:
    """One chord plus the unique tree path closing it.

    ``cycle`` starts and ends at the chord's lower endpoint and traverses the
    chord first: (k, m, ..., k).
    """

    chord: Edge
    cycle: tuple[int, ...]


def new_graph(n: int, edges: Iterable[object], *, strict: bool = False) -> MarketGraph:
    """Build a validated market graph from vertex count and edge pairs.

    Parameters
    ----------
    n : int
        Number of goods; vertices are 1..n.
    edges : iterable
        Edge pairs as 2-sequences, or as sets of one (a loop) or two vertices.
    strict : bool
        If True, a repeated undirected edge raises
        :class:`~arbx.errors.DuplicateEdgeError` instead of being merged.
    """
    if n < 1:
        raise BadParamsError(f"vertex count must be >= 1, got {n}")
    seen: set[Edge] = set()
    for item in edges:
        if isinstance(item, (set, frozenset)):
            vals = sorted(item)
            if len(vals) == 1:
                raw_i = raw_j = vals[0]
            elif len(vals) == 2:
                raw_i, raw_j = vals
            else:
                raise BadParamsError(f"edge {item!r} is not a vertex pair")
        else:
            try:
                raw_i, raw_j = item  # type: ignore[misc]
            except (TypeError, ValueError) as exc:
                raise BadParamsError(f"edge {item!r} is not a vertex pair") from exc
        try:
            i, j = _int(raw_i), _int(raw_j)
        except TypeError as exc:
            raise BadParamsError(f"edge {item!r} has non-integer vertices") from exc
        if not (1 <= i <= n and 1 <= j <= n):
            raise GraphIndexError(f"edge ({i}, {j}) out of range 1..{n}")
        key = (i, j) if i <= j else (j, i)
        if key in seen:
            if strict:
                raise DuplicateEdgeError(f"duplicate edge {key}")
            continue
        seen.add(key)
    return MarketGraph(n=n, edges=frozenset(seen))


def is_connected(g: MarketGraph) -> bool:
    """True iff every vertex is reachable from vertex 1, ignoring loops."""
    seen = {1}
    queue = deque([1])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == g.n


def spanning_tree(g: MarketGraph) -> SpanningTree:
    """Deterministic spanning tree of a connected graph.

    Breadth-first from vertex 1 with neighbors visited in ascending index
    order, so identical graphs always yield the identical tree (and hence
    reproducible bases downstream).
    """
    if not is_connected(g):
        raise NotConnectedError("graph is not connected")
    parent: dict[int, int] = {}
    tree_edges: list[Edge] = []
    seen = {1}
    queue = deque([1])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w not in seen:
                seen.add(w)
                parent[w] = u
                tree_edges.append((u, w))
                queue.append(w)
    return SpanningTree(root=1, parent=parent, tree_edges=tuple(tree_edges))


def _validate_tree(g: MarketGraph, t: SpanningTree) -> set[Edge]:
    undirected = {(min(u, w), max(u, w)) for u, w in t.tree_edges}
    if len(t.tree_edges) != g.n - 1 or len(undirected) != g.n - 1:
        raise TreeMismatchError("a spanning tree needs exactly n-1 distinct edges")
    if not undirected <= set(g.simple_edges):
        raise TreeMismatchError("tree edge not present in the graph")
    if set(t.parent) | {t.root} != set(range(1, g.n + 1)):
        raise TreeMismatchError("tree does not span all vertices")
    for v in t.parent:
        t.path_to_root(v)
    return undirected


def _tree_path(t: SpanningTree, a: int, b: int) -> list[int]:
    pa = t.path_to_root(a)
    pb = t.path_to_root(b)
    on_pa = set(pa)
    for cut, v in enumerate(pb):
        if v in on_pa:
            return pa[: pa.index(v) + 1] + pb[:cut][::-1]
    raise TreeMismatchError(f"vertices {a} and {b} share no tree path")


def fundamental_cycles(g: MarketGraph, t: SpanningTree) -> list[FundamentalCycle]:
    """One cycle per non-tree edge (chord), in ascending chord order.

    Reflexive loops are excluded; their entries are forced to zero anyway and
    are handled by the antisymmetry check. For a connected graph the list has
    exactly (edge count) - (n - 1) elements, loops not counted.
    """
    tree_edges = _validate_tree(g, t)
    out: list[FundamentalCycle] = []
    for k, m in g.simple_edges:
        if (k, m) in tree_edges:
            continue
        path = _tree_path(t, m, k)
        out.append(FundamentalCycle(chord=(k, m), cycle=(k, *path)))
    return out


def enumerate_simple_cycles(
    g: MarketGraph, max_len: int | None = None, *, max_n: int = ORACLE_MAX_VERTICES
) -> list[tuple[int, ...]]:
    """Every simple cycle of ``g`` with at most ``max_len`` edges, brute force.

    Each undirected cycle is reported once, in canonical orientation: lowest
    vertex first, then the lower of its two cycle neighbors. Reflexive loops
    are reported as (v, v). Intended as a ground-truth oracle for small
    graphs; anything beyond ``max_n`` vertices is refused.
    """
    if g.n > max_n:
        raise OracleSizeError(f"{g.n} vertices exceeds the oracle limit of {max_n}")
    if max_len is None:
        max_len = max(g.n, 1)
    if max_len < 1:
        return []
    out: list[tuple[int, ...]] = [(v, v) for v in g.loops]
    for s in range(1, g.n + 1):
        _extend_cycles(g, s, [s], {s}, max_len, out)
    return out


def _extend_cycles(
    g: MarketGraph,
    s: int,
    path: list[int],
    on_path: set[int],
    max_len: int,
    out: list[tuple[int, ...]],
) -> None:
    u = path[-1]
    for w in g.neighbors(u):
        if w == s:
            # canonical direction: second vertex below the last one
            if len(path) >= 3 and path[1] < path[-1]:
                out.append((*path, s))
        elif w > s and w not in on_path and len(path) < max_len:
            path.append(w)
            on_path.add(w)
            _extend_cycles(g, s, path, on_path, max_len, out)
            path.pop()
            on_path.discard(w)


def generate_graph(
    kind: str, n: int, *, p: float | None = None, m: int | None = None, seed: int = 0
) -> MarketGraph:
    """Seeded connected test graphs.

    Kinds
    -----
    ``complete``
        Every pair trades.
    ``tree``
        Each vertex v >= 2 attaches to a uniformly random earlier vertex.
    ``gnp-connected`` (alias ``gnp``)
        Erdos-Renyi G(n, p) conditioned on connectivity by rejection.
    ``preferential-attachment`` (alias ``pa``)
        Complete seed on the first m vertices, then each new vertex attaches
        to m distinct degree-weighted targets, for exactly
        m(n - m) + m(m - 1)/2 edges and a power-tailed degree distribution.

    The same (kind, n, params, seed) always reproduces the same graph.
    """
    if n < 1:
        raise BadParamsError(f"vertex count must be >= 1, got {n}")
    rng = random.Random(seed)
    kind = {"gnp": "gnp-connected", "pa": "preferential-attachment"}.get(kind, kind)

    if kind == "complete":
        return new_graph(n, [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)])

    if kind == "tree":
        return new_graph(n, [(rng.randint(1, v - 1), v) for v in range(2, n + 1)])

    if kind == "gnp-connected":
        if p is None or not 0.0 < p <= 1.0:
            raise BadParamsError("gnp-connected requires 0 < p <= 1")
        pairs = [(i, j) for i in range(1, n) for j in range(i + 1, n + 1)]
        for _ in range(1000):
            g = new_graph(n, [e for e in pairs if rng.random() < p])
            if is_connected(g):
                return g
        raise BadParamsError(f"no connected G({n}, {p}) sample in 1000 attempts")

    if kind == "preferential-attachment":
        if m is None or m < 1 or m >= n:
            raise BadParamsError("preferential-attachment requires 1 <= m < n")
        edges = [(i, j) for i in range(1, m) for j in range(i + 1, m + 1)]
        # one entry per unit of degree; seed vertices start at degree m - 1
        weighted = [v for v in range(1, m + 1) for _ in range(m - 1)]
        for v in range(m + 1, n + 1):
            targets: set[int] = set()
            while len(targets) < m:
                pool = weighted if weighted else list(range(1, v))
                targets.add(rng.choice(pool))
            chosen = sorted(targets)
            edges.extend((t, v) for t in chosen)
            weighted.extend(chosen)
            weighted.extend([v] * m)
        return new_graph(n, edges)

    raise BadParamsError(f"unknown graph kind {kind!r}")
