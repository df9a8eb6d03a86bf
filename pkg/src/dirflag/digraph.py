"""Simple digraphs, weighted digraphs, vertex maps and graph products.

Vertices are dense 0-based integers.  All values are immutable after
construction and every operation is a pure function, so everything here
can be shared freely between threads.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from functools import cached_property

INF = float("inf")


def is_finite(t):
    return t != INF


class MorphismClass(IntEnum):
    """Strength ladder shared by digraph maps and complex morphisms.

    STRONG implies TRIANGLE_COLLAPSING implies WEAK whenever the codomain
    is simple.  Path morphisms only ever use NOT_WEAK / WEAK / STRONG.
    """

    NOT_WEAK = 0
    WEAK = 1
    TRIANGLE_COLLAPSING = 2
    STRONG = 3


# The same ladder serves digraph maps, path morphisms and simplicial
# morphisms; path morphisms simply never take the triangle-collapsing value.
DigraphMapClass = MorphismClass
PathMorphismClass = MorphismClass
SimplicialMorphismClass = MorphismClass


@dataclass(frozen=True)
class Digraph:
    """A simple directed graph on vertices 0..vertex_count-1.

    No self-loops; the edge set is a frozenset so duplicates are
    impossible by construction.  `labels`, when present, gives an external
    name for each vertex index.
    """

    vertex_count: int
    edges: frozenset
    labels: tuple | None = None

    def __post_init__(self):
        for (u, v) in self.edges:
            if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
                raise ValueError(f"edge ({u}, {v}) out of range")
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
        if self.labels is not None:
            if len(self.labels) != self.vertex_count:
                raise ValueError("label count does not match vertex count")
            if len(set(self.labels)) != self.vertex_count:
                raise ValueError("labels are not distinct")

    @staticmethod
    def from_edges(vertex_count, edges, labels=None):
        return Digraph(vertex_count, frozenset((int(u), int(v)) for u, v in edges),
                       tuple(labels) if labels is not None else None)

    def has_edge(self, u, v):
        return (u, v) in self.edges

    def tooreq(self, u, v):
        """u equals v, or there is an edge u -> v."""
        return u == v or (u, v) in self.edges

    @cached_property
    def out_adj(self):
        adj = [[] for _ in range(self.vertex_count)]
        for (u, v) in self.edges:
            adj[u].append(v)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def in_adj(self):
        adj = [[] for _ in range(self.vertex_count)]
        for (u, v) in self.edges:
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def edge_list(self):
        return tuple(sorted(self.edges))

    def neighbours(self, v):
        """Vertices adjacent to v in the underlying undirected graph."""
        return tuple(sorted(set(self.out_adj[v]) | set(self.in_adj[v])))

    def induced_subgraph(self, kept):
        """Induced subgraph on `kept` (sorted); vertices are renumbered densely.

        Returns (subgraph, kept_tuple) where kept_tuple[i] is the original
        index of new vertex i.
        """
        kept = tuple(sorted(kept))
        index = {v: i for i, v in enumerate(kept)}
        edges = [(index[u], index[v]) for (u, v) in self.edges
                 if u in index and v in index]
        labels = None
        if self.labels is not None:
            labels = tuple(self.labels[v] for v in kept)
        return Digraph.from_edges(len(kept), edges, labels), kept

    def triangles(self):
        """All directed 3-cliques (v0, v1, v2), lexicographically sorted."""
        out = []
        for (u, v) in sorted(self.edges):
            for w in self.out_adj[v]:
                if (u, w) in self.edges:
                    out.append((u, v, w))
        return tuple(sorted(out))


@dataclass(frozen=True)
class VertexMap:
    """A raw vertex map between two dense vertex sets."""

    source_count: int
    target_count: int
    image: tuple

    def __post_init__(self):
        if len(self.image) != self.source_count:
            raise ValueError("image length does not match source count")
        for x in self.image:
            if not (0 <= x < self.target_count):
                raise ValueError(f"image entry {x} out of range")

    @staticmethod
    def identity(n):
        return VertexMap(n, n, tuple(range(n)))

    @staticmethod
    def constant(source_count, target_count, value):
        return VertexMap(source_count, target_count, (value,) * source_count)

    def __call__(self, v):
        return self.image[v]

    def compose(self, inner):
        """self o inner."""
        if inner.target_count != self.source_count:
            raise ValueError("composition dimension mismatch")
        return VertexMap(inner.source_count, self.target_count,
                         tuple(self.image[x] for x in inner.image))

    def apply_path(self, path):
        return tuple(self.image[v] for v in path)

    def is_identity(self):
        return self.source_count == self.target_count and \
            all(self.image[v] == v for v in range(self.source_count))


@dataclass(frozen=True)
class WeightedDigraph:
    """A simple digraph with strictly positive rational edge weights."""

    graph: Digraph
    weights: tuple  # sorted tuple of ((u, v), Fraction)

    def __post_init__(self):
        keys = frozenset(e for e, _ in self.weights)
        if keys != self.graph.edges:
            raise ValueError("weights must be defined on exactly the edge set")
        if len(self.weights) != len(keys):
            raise ValueError("duplicate weight entries")
        for _, w in self.weights:
            if not w > 0:
                raise ValueError(f"nonpositive weight {w}")

    @staticmethod
    def from_weight_map(graph, weight_map):
        items = tuple(sorted((e, Fraction(w)) for e, w in weight_map.items()))
        return WeightedDigraph(graph, items)

    @staticmethod
    def from_edges(vertex_count, weighted_edges, labels=None):
        """weighted_edges: iterable of (u, v, w)."""
        edges = [(u, v) for (u, v, _) in weighted_edges]
        g = Digraph.from_edges(vertex_count, edges, labels)
        return WeightedDigraph.from_weight_map(
            g, {(u, v): w for (u, v, w) in weighted_edges})

    @cached_property
    def weight_map(self):
        return dict(self.weights)

    def weight(self, u, v):
        return self.weight_map[(u, v)]

    @property
    def vertex_count(self):
        return self.graph.vertex_count

    def is_dag(self):
        """No directed cycle (through at least one edge)."""
        n = self.graph.vertex_count
        state = [0] * n  # 0 unseen, 1 on stack, 2 done

        for root in range(n):
            if state[root]:
                continue
            stack = [(root, 0)]
            state[root] = 1
            while stack:
                v, i = stack[-1]
                if i < len(self.graph.out_adj[v]):
                    stack[-1] = (v, i + 1)
                    w = self.graph.out_adj[v][i]
                    if state[w] == 1:
                        return False
                    if state[w] == 0:
                        state[w] = 1
                        stack.append((w, 0))
                else:
                    state[v] = 2
                    stack.pop()
        return True


def classify_digraph_map(f, G, H):
    """Strongest class (weak / triangle-collapsing / strong) satisfied by f."""
    if f.source_count != G.vertex_count or f.target_count != H.vertex_count:
        raise ValueError("vertex map dimensions do not match the digraphs")
    strong = True
    for (u, v) in G.edges:
        fu, fv = f(u), f(v)
        if fu == fv:
            strong = False
        elif (fu, fv) not in H.edges:
            return MorphismClass.NOT_WEAK
    for (a, b, c) in G.triangles():
        if f(a) == f(c) and not (f(a) == f(b) == f(c)):
            return MorphismClass.WEAK
    return MorphismClass.STRONG if strong else MorphismClass.TRIANGLE_COLLAPSING


def product_vertex(x, y, h_count):
    """Encoding of the product vertex (x, y): x * |V(H)| + y."""
    return x * h_count + y


def box_product(G, H):
    """Box product: move in exactly one coordinate along an edge."""
    m = H.vertex_count
    edges = []
    for x in range(G.vertex_count):
        for (y, y2) in H.edges:
            edges.append((product_vertex(x, y, m), product_vertex(x, y2, m)))
    for (x, x2) in G.edges:
        for y in range(H.vertex_count):
            edges.append((product_vertex(x, y, m), product_vertex(x2, y, m)))
    return Digraph.from_edges(G.vertex_count * m, edges)


def cross_product(G, H):
    """Cross product: both coordinates move forward-or-stay, not both stay."""
    m = H.vertex_count
    edges = []
    for x in range(G.vertex_count):
        for x2 in range(G.vertex_count):
            if not G.tooreq(x, x2):
                continue
            for y in range(m):
                for y2 in range(m):
                    if not H.tooreq(y, y2):
                        continue
                    if x == x2 and y == y2:
                        continue
                    edges.append((product_vertex(x, y, m),
                                  product_vertex(x2, y2, m)))
    return Digraph.from_edges(G.vertex_count * m, edges)


def unit_interval():
    """The two-vertex digraph whose only edge is 0 -> 1."""
    return Digraph.from_edges(2, [(0, 1)])


def weak_components(G):
    """Partition of the vertices by undirected connectivity, sorted."""
    parent = list(range(G.vertex_count))

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for (u, v) in G.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups = {}
    for v in range(G.vertex_count):
        groups.setdefault(find(v), []).append(v)
    return tuple(tuple(sorted(g)) for g in
                 sorted(groups.values(), key=lambda g: g[0]))


def reciprocal_pairs(G):
    """All unordered pairs {u, v} joined by edges in both directions."""
    return frozenset((min(u, v), max(u, v)) for (u, v) in G.edges
                     if (v, u) in G.edges)


def is_oriented(G):
    return not reciprocal_pairs(G)


def shortest_path_quasimetric(W):
    """All-pairs shortest directed path lengths; INF when unreachable.

    Per-source Dijkstra; weights are strictly positive by construction.
    """
    G = W.graph
    n = G.vertex_count
    wm = W.weight_map
    dist = [[INF] * n for _ in range(n)]
    for src in range(n):
        row = dist[src]
        row[src] = Fraction(0)
        heap = [(Fraction(0), src)]
        done = [False] * n
        while heap:
            d, v = heapq.heappop(heap)
            if done[v]:
                continue
            done[v] = True
            for u in G.out_adj[v]:
                nd = d + wm[(v, u)]
                if row[u] == INF or nd < row[u]:
                    row[u] = nd
                    heapq.heappush(heap, (nd, u))
    return dist


def subdivision_layout(W, S):
    """Deterministic vertex layout for a subdivision.

    Returns (items, new_vertex_count) where items is a list of
    (edge, fractions, first_new_index) over sorted subdivided edges.  The
    interior vertices of edge e get indices first, first+1, ... in path
    order.  Edges with a length-1 tuple get no new vertices.
    """
    n = W.graph.vertex_count
    items = []
    nxt = n
    for e in sorted(S):
        if e not in W.graph.edges:
            raise ValueError(f"subdivision key {e} is not an edge")
        fracs = tuple(Fraction(x) for x in S[e])
        if not fracs:
            raise ValueError(f"empty subdivision tuple for edge {e}")
        if any(x <= 0 for x in fracs):
            raise ValueError(f"nonpositive subdivision entry for edge {e}")
        if sum(fracs) != 1:
            raise ValueError(f"subdivision tuple for edge {e} does not sum to 1")
        items.append((e, fracs, nxt))
        nxt += len(fracs) - 1
    return items, nxt


def edge_subdivide(W, S):
    """Replace each edge in S by a weighted directed chain of fresh vertices.

    S maps a subset of edges to tuples of positive rationals summing to 1;
    the i-th segment of edge e gets weight S(e)_i * w(e).
    """
    items, total = subdivision_layout(W, S)
    weighted = [(u, v, W.weight(u, v)) for (u, v) in sorted(W.graph.edges)
                if (u, v) not in S]
    for (e, fracs, first) in items:
        chain = [e[0]] + list(range(first, first + len(fracs) - 1)) + [e[1]]
        w = W.weight(*e)
        for i, frac in enumerate(fracs):
            weighted.append((chain[i], chain[i + 1], frac * w))
    labels = None
    if W.graph.labels is not None:
        extra = []
        for (e, fracs, first) in items:
            for i in range(1, len(fracs)):
                extra.append(f"{W.graph.labels[e[0]]}~{W.graph.labels[e[1]]}~{i}")
        labels = W.graph.labels + tuple(extra)
    return WeightedDigraph.from_edges(total, weighted, labels)
