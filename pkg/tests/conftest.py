import random
from fractions import Fraction

import pytest

from dirflag.digraph import Digraph, VertexMap, WeightedDigraph

# Fig-style fixtures used across the suite.

def four_sided_digraph():
    """4 vertices N=0, E=1, W=2, S=3; W<->E reciprocal, N and S point at both."""
    return Digraph.from_edges(4, [(2, 1), (1, 2), (0, 2), (0, 1), (3, 2), (3, 1)],
                              labels=("N", "E", "W", "S"))


def reciprocal_pair():
    return Digraph.from_edges(2, [(0, 1), (1, 0)])


def complete_digraph(n):
    return Digraph.from_edges(n, [(u, v) for u in range(n)
                                  for v in range(n) if u != v])


def weighted_triangle():
    """v0 -> v1 -> v2 with weights 2, 2 and a direct v0 -> v2 of weight 3."""
    return WeightedDigraph.from_edges(3, [(0, 1, Fraction(2)),
                                          (1, 2, Fraction(2)),
                                          (0, 2, Fraction(3))])


def triangle_subdivision():
    return {(0, 2): (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3)),
            (0, 1): (Fraction(1, 2), Fraction(1, 2)),
            (1, 2): (Fraction(1, 2), Fraction(1, 2))}


def reciprocal_pair_weighted():
    return WeightedDigraph.from_edges(2, [(0, 1, Fraction(1)), (1, 0, Fraction(1))])


def appendage_graph():
    """Reciprocal pair a=0, b=1 plus an appendage edge c=2 -> a, all weight 1."""
    return WeightedDigraph.from_edges(3, [(0, 1, Fraction(1)),
                                          (1, 0, Fraction(1)),
                                          (2, 0, Fraction(1))])


def random_digraph(rng, n, p):
    edges = [(u, v) for u in range(n) for v in range(n)
             if u != v and rng.random() < p]
    return Digraph.from_edges(n, edges)


def random_weighted_digraph(rng, n, p, weights=(1, 2, 3, 4)):
    edges = [(u, v, Fraction(rng.choice(weights))) for u in range(n)
             for v in range(n) if u != v and rng.random() < p]
    seen = {(u, v) for (u, v, _) in edges}
    if not seen and n >= 2:
        edges.append((0, 1, Fraction(rng.choice(weights))))
    return WeightedDigraph.from_edges(n, edges)


def random_weighted_dag(rng, n, p, weights=(1, 2, 3, 4, 5)):
    """Random DAG: edges only from lower to higher in a random vertex order."""
    order = list(range(n))
    rng.shuffle(order)
    pos = {v: i for i, v in enumerate(order)}
    edges = [(u, v, Fraction(rng.choice(weights))) for u in range(n)
             for v in range(n) if u != v and pos[u] < pos[v]
             and rng.random() < p]
    if not edges and n >= 2:
        u, v = order[0], order[1]
        edges.append((u, v, Fraction(rng.choice(weights))))
    return WeightedDigraph.from_edges(n, edges)


def random_subdivision(rng, W, max_edges=3, max_parts=3):
    edges = sorted(W.graph.edges)
    rng.shuffle(edges)
    chosen = edges[:rng.randint(0, min(max_edges, len(edges)))]
    S = {}
    for e in chosen:
        parts = rng.randint(1, max_parts)
        raw = [rng.randint(1, 4) for _ in range(parts)]
        total = sum(raw)
        S[e] = tuple(Fraction(x, total) for x in raw)
    return S


def all_vertex_maps(n_src, n_dst):
    maps = []
    total = n_dst ** n_src
    for code in range(total):
        image = []
        c = code
        for _ in range(n_src):
            image.append(c % n_dst)
            c //= n_dst
        maps.append(VertexMap(n_src, n_dst, tuple(image)))
    return maps


def all_digraphs(n):
    """Every simple digraph on exactly n labelled vertices."""
    slots = [(u, v) for u in range(n) for v in range(n) if u != v]
    out = []
    for mask in range(1 << len(slots)):
        edges = [slots[i] for i in range(len(slots)) if mask >> i & 1]
        out.append(Digraph.from_edges(n, edges))
    return out


def maximal_weak_domain(f, P2, n, max_dim):
    """Largest path complex on n vertices that f maps weakly into P2."""
    from dirflag.complexes import PathComplex, is_regular_path
    grades = [tuple((v,) for v in range(n))]
    for k in range(1, max_dim + 1):
        prev = set(grades[k - 1])
        level = []
        for p in prev:
            for v in range(n):
                if v == p[-1]:
                    continue
                q = p + (v,)
                if q[1:] not in prev:
                    continue
                image = f.apply_path(q)
                if not is_regular_path(image) or image in P2:
                    level.append(q)
        grades.append(tuple(sorted(set(level))))
    return PathComplex(n, max_dim, tuple(grades), True)


def maximal_tc_domain(f, K2, n, max_dim):
    """Largest ordered simplicial complex that f maps into K2
    triangle-collapsingly."""
    from dirflag.complexes import OrderedSimplicialComplex, is_simplicial_path
    grades = [tuple((v,) for v in range(n))]
    for k in range(1, max_dim + 1):
        prev = set(grades[k - 1])
        level = []
        for p in prev:
            for v in range(n):
                if v in p:
                    continue
                q = p + (v,)
                if any(q[:i] + q[i + 1:] not in prev for i in range(len(q))):
                    continue
                image = f.apply_path(q)
                if is_simplicial_path(image) and image not in K2:
                    continue
                if k == 2 and f(q[0]) == f(q[2]) and f(q[1]) != f(q[0]):
                    continue
                level.append(q)
        grades.append(tuple(sorted(set(level))))
    return OrderedSimplicialComplex(n, max_dim, tuple(grades), True)


def random_oriented_tree_edges(rng, n):
    """A random tree on n vertices, each edge randomly oriented."""
    edges = []
    for v in range(1, n):
        parent = rng.randrange(v)
        edges.append((parent, v) if rng.random() < 0.5 else (v, parent))
    return edges


def random_oriented_pseudo_tree(rng, n):
    from dirflag.digraph import Digraph
    return Digraph.from_edges(n, random_oriented_tree_edges(rng, n))


def random_nonoriented_pseudo_tree(rng, n):
    """A pseudo-tree with at least one reciprocal pair."""
    from dirflag.digraph import Digraph
    edges = random_oriented_tree_edges(rng, n)
    flips = rng.randint(1, max(1, len(edges) // 2))
    doubled = rng.sample(range(len(edges)), flips)
    extra = [(v, u) for i, (u, v) in enumerate(edges) if i in doubled]
    return Digraph.from_edges(n, edges + extra)


def random_reciprocal_free_star_like(rng, n):
    """Star centre 0 with oriented rim edges and no reciprocal pair."""
    from dirflag.digraph import Digraph
    edges = [(0, v) for v in range(1, n)]
    for u in range(1, n):
        for v in range(u + 1, n):
            if rng.random() < 0.4:
                edges.append((u, v) if rng.random() < 0.5 else (v, u))
    return Digraph.from_edges(n, edges)


@pytest.fixture
def rng():
    return random.Random(90210)
