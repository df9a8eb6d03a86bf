"""Filtrations of digraphs, persistent flag homology and stability checks.

Entrance times are exact rationals with an explicit infinity, so the
instability examples (which hinge on infinite bottleneck distance) are
decided exactly.  Persistence is computed over GF(2) by default; any
prime field or the rationals can be selected when signs matter.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from functools import cached_property

from . import linalg
from .digraph import (INF, Digraph, MorphismClass, VertexMap,
                      classify_digraph_map, is_finite, shortest_path_quasimetric,
                      subdivision_layout)
from .homotopy import SYS_DFL, CertificateReport, dfl_relative, verify_multi_step
from .linalg import GF2


@dataclass(frozen=True)
class Filtration:
    """Growing family of digraphs on a fixed vertex set.

    Stored as the entrance time of each edge; pairs without an entry never
    enter.  Vertices enter at `vertex_times` (zero when omitted), which
    also anchors degree-0 bars.
    """

    vertex_count: int
    entrance: tuple  # sorted ((u, v), time) with finite rational times
    vertex_times: tuple

    @staticmethod
    def from_entrance_map(vertex_count, entrance_map, vertex_times=None):
        items = []
        for (u, v), t in entrance_map.items():
            if u == v:
                raise ValueError(f"self-loop key ({u}, {v})")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"entrance key ({u}, {v}) out of range")
            if is_finite(t):
                items.append(((u, v), Fraction(t)))
        if vertex_times is None:
            vertex_times = (Fraction(0),) * vertex_count
        else:
            vertex_times = tuple(Fraction(t) for t in vertex_times)
            if len(vertex_times) != vertex_count:
                raise ValueError("vertex time count mismatch")
        return Filtration(vertex_count, tuple(sorted(items)), vertex_times)

    @cached_property
    def entrance_map(self):
        return dict(self.entrance)

    def entrance_time(self, u, v):
        return self.entrance_map.get((u, v), INF)

    def digraph_at(self, t):
        edges = [e for e, s in self.entrance if s <= t]
        return Digraph.from_edges(self.vertex_count, edges)

    def critical_values(self):
        times = {t for _, t in self.entrance}
        times.update(self.vertex_times)
        return tuple(sorted(times))

    def limit_digraph(self):
        return Digraph.from_edges(self.vertex_count,
                                  [e for e, _ in self.entrance])


def shortest_path_filtration(W):
    """Edge (i, j) enters at the length of the shortest directed path i to j."""
    d = shortest_path_quasimetric(W)
    n = W.graph.vertex_count
    entrance = {}
    for i in range(n):
        for j in range(n):
            if i != j and is_finite(d[i][j]):
                entrance[(i, j)] = d[i][j]
    return Filtration.from_entrance_map(n, entrance)


@dataclass(frozen=True)
class Bar:
    degree: int
    birth: Fraction
    death: object  # Fraction or INF

    def __post_init__(self):
        if not self.birth < self.death:
            raise ValueError("bar must have birth < death")

    def is_infinite(self):
        return not is_finite(self.death)

    def alive_at(self, t):
        return self.birth <= t < self.death


@dataclass(frozen=True)
class Barcode:
    bars: tuple

    @staticmethod
    def from_bars(bars):
        return Barcode(tuple(sorted(
            bars, key=lambda b: (b.degree, b.birth,
                                 (1, 0) if b.is_infinite() else (0, b.death)))))

    def in_degree(self, k):
        return tuple(b for b in self.bars if b.degree == k)

    def alive_count(self, k, t):
        return sum(1 for b in self.in_degree(k) if b.alive_at(t))


# Degree-1 barcode of the grounded two-row complex.
GroundedBarcode = Barcode


def _reduce_cells(cells, field, max_bar_degree):
    """Standard persistence reduction over an arbitrary field.

    `cells` is a list of (time, degree, key, facets) sorted by filtration
    order; facets are (cell_index, sign) pairs into the same list.  Over
    GF(2) columns are kept as sets, otherwise as coefficient dicts.
    """
    gf2 = field == GF2
    n = len(cells)
    low_owner = {}
    reduced = {}
    killed = set()
    creator = [False] * n
    pairs = []
    for j in range(n):
        facets = cells[j][3]
        if gf2:
            col = set()
            for i, _ in facets:
                col ^= {i}
            while col:
                low = max(col)
                if low not in low_owner:
                    break
                col ^= reduced[low_owner[low]]
        else:
            col = {}
            for i, sign in facets:
                c = field.add(col.get(i, field.zero), field.from_int(sign))
                if field.is_zero(c):
                    col.pop(i, None)
                else:
                    col[i] = c
            while col:
                low = max(col)
                if low not in low_owner:
                    break
                other = reduced[low_owner[low]]
                factor = field.mul(col[low], field.inv(other[low]))
                for i, c in other.items():
                    nc = field.sub(col.get(i, field.zero), field.mul(factor, c))
                    if field.is_zero(nc):
                        col.pop(i, None)
                    else:
                        col[i] = nc
        if not col:
            creator[j] = True
            continue
        low = max(col)
        low_owner[low] = j
        reduced[j] = col
        killed.add(low)
        pairs.append((low, j))

    bars = []
    for (i, j) in pairs:
        birth, degree = cells[i][0], cells[i][1]
        death = cells[j][0]
        if degree <= max_bar_degree and death > birth:
            bars.append(Bar(degree, birth, death))
    for j in range(n):
        if creator[j] and j not in killed and cells[j][1] <= max_bar_degree:
            bars.append(Bar(cells[j][1], cells[j][0], INF))
    return Barcode.from_bars(bars)


def _flag_cells(F, max_cell_degree):
    """Directed cliques of the limit digraph with flag entrance times."""
    limit = F.limit_digraph()
    em = F.entrance_map
    vt = F.vertex_times
    levels = [[((v,), vt[v]) for v in range(F.vertex_count)]]
    for k in range(1, max_cell_degree + 1):
        nxt = []
        for clique, t in levels[k - 1]:
            common = set(limit.out_adj[clique[0]])
            for v in clique[1:]:
                common &= set(limit.out_adj[v])
            for w in sorted(common):
                tw = max(t, vt[w], max(em[(v, w)] for v in clique))
                nxt.append((clique + (w,), tw))
        if not nxt:
            break
        levels.append(sorted(nxt))
    order = []
    for k, level in enumerate(levels):
        for clique, t in level:
            order.append((t, k, clique))
    order.sort()
    index = {clique: i for i, (_, _, clique) in enumerate(order)}
    cells = []
    for (t, k, clique) in order:
        facets = []
        for i in range(len(clique)):
            face = clique[:i] + clique[i + 1:]
            if face:
                facets.append((index[face], 1 if i % 2 == 0 else -1))
        cells.append((t, k, clique, facets))
    return cells


def persistent_dfl_homology(F, max_degree, field=GF2):
    """Barcode of the persistent directed flag homology in degrees 0..max_degree.

    Simplices enter at the maximum entrance time over their edges (and
    vertices); columns are ordered by (time, degree, vertex tuple) and
    reduced over the chosen field.
    """
    cells = _flag_cells(F, max_degree + 1)
    return _reduce_cells(cells, field, max_degree)


# --- barcode metrics ---------------------------------------------------------

def _matching_feasible(fin1, fin2, delta):
    n1, n2 = len(fin1), len(fin2)
    size = n1 + n2

    def cost_ok(a, b):
        return max(abs(a[0] - b[0]), abs(a[1] - b[1])) <= delta

    def half_ok(bar):
        return (bar[1] - bar[0]) <= 2 * delta

    adj = []
    for i in range(size):
        row = []
        if i < n1:
            for j in range(n2):
                if cost_ok(fin1[i], fin2[j]):
                    row.append(j)
            if half_ok(fin1[i]):
                row.append(n2 + i)
        else:
            j2 = i - n1
            if half_ok(fin2[j2]):
                row.append(j2)
            row.extend(range(n2, n2 + n1))
        adj.append(row)

    match = [-1] * size  # right vertex -> left vertex

    def augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if match[v] == -1 or augment(match[v], seen):
                match[v] = u
                return True
        return False

    matched = 0
    for u in range(size):
        if augment(u, set()):
            matched += 1
    return matched == size


def bottleneck_distance(b1, b2, degree):
    """Exact bottleneck distance between the degree-`degree` parts.

    Infinite bars must match infinite bars (sorted births, the 1-d optimal
    matching); a count mismatch gives distance infinity.  The finite part
    is solved by threshold search over the finite candidate set.
    """
    bars1 = b1.in_degree(degree)
    bars2 = b2.in_degree(degree)
    inf1 = sorted(b.birth for b in bars1 if b.is_infinite())
    inf2 = sorted(b.birth for b in bars2 if b.is_infinite())
    if len(inf1) != len(inf2):
        return INF
    d_inf = Fraction(0)
    for x, y in zip(inf1, inf2):
        d_inf = max(d_inf, abs(x - y))
    fin1 = [(b.birth, b.death) for b in bars1 if not b.is_infinite()]
    fin2 = [(b.birth, b.death) for b in bars2 if not b.is_infinite()]
    if not fin1 and not fin2:
        return d_inf
    candidates = {Fraction(0)}
    for a in fin1:
        candidates.add(Fraction(a[1] - a[0], 2))
        for b in fin2:
            candidates.add(max(abs(a[0] - b[0]), abs(a[1] - b[1])))
    for b in fin2:
        candidates.add(Fraction(b[1] - b[0], 2))
    ordered = sorted(candidates)
    lo, hi = 0, len(ordered) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _matching_feasible(fin1, fin2, ordered[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(d_inf, ordered[lo])


def entrance_time_linf(F1, F2):
    """Sup-norm distance of entrance-time tables on a shared vertex set.

    Missing entries count as infinity; two infinities differ by zero, an
    infinity against a finite time gives infinity.
    """
    if F1.vertex_count != F2.vertex_count:
        raise ValueError("filtrations live on different vertex counts")
    keys = set(F1.entrance_map) | set(F2.entrance_map)
    best = Fraction(0)
    for key in keys:
        t1 = F1.entrance_time(*key)
        t2 = F2.entrance_time(*key)
        if is_finite(t1) != is_finite(t2):
            return INF
        if is_finite(t1):
            best = max(best, abs(t1 - t2))
    return best


# --- grounded pipeline -------------------------------------------------------

def grounding_time(F):
    """Entrance time assigned to the always-present row of the grounded complex."""
    finite = [t for _, t in F.entrance]
    return min(finite) if finite else Fraction(0)


def _grounded_cells(W):
    """Cells of the grounded two-row complex of a weighted digraph.

    Vertices and the edges of the graph itself sit at the grounding time;
    shortest-path edges enter at their distance, and 2-cells are the
    directed 3-cliques of the shortest-path filtration at their flag time.
    """
    F = shortest_path_filtration(W)
    t0 = grounding_time(F)
    em = F.entrance_map
    edge_time = dict(F.entrance)
    for e in W.graph.edges:
        edge_time[e] = t0
    cells_raw = [((v,), t0, 0) for v in range(W.graph.vertex_count)]
    for e, t in edge_time.items():
        cells_raw.append((e, t, 1))
    sp_limit = F.limit_digraph()
    for (a, b, c) in sp_limit.triangles():
        t = max(em[(a, b)], em[(a, c)], em[(b, c)])
        cells_raw.append(((a, b, c), t, 2))
    order = sorted((t, k, cell) for (cell, t, k) in cells_raw)
    index = {cell: i for i, (_, _, cell) in enumerate(order)}
    cells = []
    for (t, k, cell) in order:
        facets = []
        for i in range(len(cell)):
            face = cell[:i] + cell[i + 1:]
            if face:
                facets.append((index[face], 1 if i % 2 == 0 else -1))
        cells.append((t, k, cell, facets))
    return cells


def grounded_persistent_h1(W, field=GF2):
    """Degree-1 barcode of the grounded persistent directed flag pipeline."""
    cells = _grounded_cells(W)
    barcode = _reduce_cells(cells, field, 1)
    return Barcode.from_bars(barcode.in_degree(1))


def grounded_h1_dimension_at(W, t, field=GF2):
    """Static rank computation of the grounded degree-1 homology at time t.

    Independent of the reduction path: ranks of the two boundary matrices
    of the two-row complex at time t.
    """
    F = shortest_path_filtration(W)
    n = W.graph.vertex_count
    sp_edges = {e for e, s in F.entrance if s <= t}
    union_edges = sorted(sp_edges | W.graph.edges)
    eindex = {e: i for i, e in enumerate(union_edges)}
    sp_graph = Digraph.from_edges(n, sp_edges)
    triangles = sp_graph.triangles()

    d1 = []
    for (u, v) in union_edges:
        col = [field.zero] * n
        col[v] = field.add(col[v], field.one)
        col[u] = field.sub(col[u], field.one)
        d1.append(col)
    d2 = []
    for (a, b, c) in triangles:
        col = [field.zero] * len(union_edges)
        col[eindex[(b, c)]] = field.add(col[eindex[(b, c)]], field.one)
        col[eindex[(a, c)]] = field.sub(col[eindex[(a, c)]], field.one)
        col[eindex[(a, b)]] = field.add(col[eindex[(a, b)]], field.one)
        d2.append(col)
    rank1 = linalg.rank(d1, field)
    rank2 = linalg.rank(d2, field)
    return len(union_edges) - rank1 - rank2


# --- interleaving machinery --------------------------------------------------

@dataclass(frozen=True)
class InterleavingCertificate:
    """A delta-interleaving up to directed-flag homotopy.

    `witnesses_m` relates g o f to the identity transition inside the
    first filtration at every critical value (a single witness is applied
    at all of them, or a mapping time -> witness); `witnesses_n` does the
    same for f o g inside the second filtration.
    """

    delta: Fraction
    f: VertexMap
    g: VertexMap
    witnesses_m: object
    witnesses_n: object


def _witness_at(spec, t):
    from .chains import MultiStepWitness
    if isinstance(spec, MultiStepWitness):
        return spec
    if t in spec:
        return spec[t]
    raise KeyError(f"no witness supplied for critical value {t}")


def verify_interleaving_certificate(F1, F2, cert):
    """Check a certificate at every critical value of both filtrations.

    On success the report carries `bound = delta`: the persistent flag
    homologies of the two filtrations are then delta-interleaved.
    """
    report = CertificateReport()
    delta = Fraction(cert.delta)
    if delta < 0:
        report.fail("delta must be nonnegative")
        return report
    crit = sorted(set(F1.critical_values()) | set(F2.critical_values()))
    if not crit:
        crit = [Fraction(0)]
    id1 = VertexMap.identity(F1.vertex_count)
    id2 = VertexMap.identity(F2.vertex_count)
    for t in crit:
        g1t = F1.digraph_at(t)
        g2t = F2.digraph_at(t)
        g1shift = F1.digraph_at(t + delta)
        g2shift = F2.digraph_at(t + delta)
        if classify_digraph_map(cert.f, g1t, g2shift) < \
                MorphismClass.TRIANGLE_COLLAPSING:
            report.fail(f"f is not triangle-collapsing at t={t}")
            continue
        if classify_digraph_map(cert.g, g2t, g1shift) < \
                MorphismClass.TRIANGLE_COLLAPSING:
            report.fail(f"g is not triangle-collapsing at t={t}")
            continue
        g1wide = F1.digraph_at(t + 2 * delta)
        g2wide = F2.digraph_at(t + 2 * delta)
        try:
            wm = _witness_at(cert.witnesses_m, t)
            wn = _witness_at(cert.witnesses_n, t)
        except KeyError as exc:
            report.fail(str(exc))
            continue
        gf = cert.g.compose(cert.f)
        fg = cert.f.compose(cert.g)
        if {wm.source, wm.target} != {gf, id1}:
            report.fail(f"witness endpoints at t={t} do not match g o f and id")
        else:
            verify_multi_step(wm, g1t, g1wide, SYS_DFL, report,
                              label=f"first filtration at t={t}")
        if {wn.source, wn.target} != {fg, id2}:
            report.fail(f"witness endpoints at t={t} do not match f o g and id")
        else:
            verify_multi_step(wn, g2t, g2wide, SYS_DFL, report,
                              label=f"second filtration at t={t}")
    if report.ok:
        report.bound = delta
    return report


def check_delta_shifting(f, G, H, delta):
    """f induces weak maps between the grounded unions at every shift.

    Reduces to the quasimetric inequality d_H(f i, f j) <= d_G(i, j) + delta
    plus the grounded-union condition: every edge of G itself must collapse,
    land on an edge of H, or be within delta in H.  The union condition is
    checked at the start of the module's window (time 0); entrance times
    are positive, so it then holds at every later time.
    """
    report = CertificateReport()
    if f.source_count != G.graph.vertex_count or \
            f.target_count != H.graph.vertex_count:
        raise ValueError("vertex map dimensions do not match")
    dg = shortest_path_quasimetric(G)
    dh = shortest_path_quasimetric(H)
    for (u, v) in sorted(G.graph.edges):
        if f(u) == f(v) or H.graph.has_edge(f(u), f(v)):
            continue
        if not is_finite(dh[f(u)][f(v)]) or dh[f(u)][f(v)] > delta:
            report.fail(f"grounded union violated at graph edge ({u}, {v})")
    for i in range(G.graph.vertex_count):
        for j in range(G.graph.vertex_count):
            if i == j or not is_finite(dg[i][j]) or f(i) == f(j):
                continue
            if not is_finite(dh[f(i)][f(j)]) or \
                    dh[f(i)][f(j)] > dg[i][j] + delta:
                report.fail(f"shift violated at pair ({i}, {j})")
    return report


def check_grounded_codistortion(G, H, f, g, delta, witness):
    """The pair (g, f) moves G by at most delta in the grounded sense.

    Builds the subgraph of edges moved by g o f, requires the identity and
    g o f to be triangle-collapsing into the shortest-path graph at 2*delta,
    and verifies the supplied zig-zag relative to the fixed vertices.
    """
    report = CertificateReport()
    n = G.graph.vertex_count
    gf = g.compose(f)
    v_fix = frozenset(v for v in range(n) if gf(v) == v)
    e_diff = [(u, v) for (u, v) in sorted(G.graph.edges)
              if (gf(u), gf(v)) != (u, v)]
    g_diff = Digraph.from_edges(n, e_diff)
    sp = shortest_path_filtration(G)
    wide = sp.digraph_at(2 * Fraction(delta))
    ident = VertexMap.identity(n)
    if classify_digraph_map(ident, g_diff, wide) < \
            MorphismClass.TRIANGLE_COLLAPSING:
        report.fail("identity is not triangle-collapsing into the 2-delta graph")
    if classify_digraph_map(gf, g_diff, wide) < \
            MorphismClass.TRIANGLE_COLLAPSING:
        report.fail("g o f is not triangle-collapsing into the 2-delta graph")
    if report.ok:
        if {witness.source, witness.target} != {gf, ident}:
            report.fail("witness endpoints do not match g o f and id")
        else:
            verify_multi_step(witness, g_diff, wide, dfl_relative(v_fix),
                              report, label="grounded codistortion")
    return report


# --- subdivision interleaving maps --------------------------------------------

def _subdivision_positions(W, S):
    """cum[v] = weight fraction of the part of the edge before vertex v."""
    items, total = subdivision_layout(W, S)
    info = {}
    for (e, fracs, first) in items:
        cum = Fraction(0)
        for i in range(1, len(fracs)):
            cum += fracs[i - 1]
            info[first + i - 1] = (e, cum)
    return info, total


def subdivision_inclusion_map(W, S):
    """Original vertices included into the subdivided vertex set."""
    _, total = _subdivision_positions(W, S)
    return VertexMap(W.graph.vertex_count, total,
                     tuple(range(W.graph.vertex_count)))


def subdivision_rounding_map(W, S):
    """New vertices rounded to the nearer endpoint of their edge.

    The first half (cumulative fraction < 1/2) goes to the source, the
    rest to the target; original vertices are fixed.
    """
    info, total = _subdivision_positions(W, S)
    image = list(range(W.graph.vertex_count))
    for v in range(W.graph.vertex_count, total):
        e, cum = info[v]
        image.append(e[0] if cum < Fraction(1, 2) else e[1])
    return VertexMap(total, W.graph.vertex_count, tuple(image))


def subdivision_interim_map(W, S):
    """Half-collapse: first halves go to the source, later halves stay put."""
    info, total = _subdivision_positions(W, S)
    image = list(range(W.graph.vertex_count))
    for v in range(W.graph.vertex_count, total):
        e, cum = info[v]
        image.append(e[0] if cum < Fraction(1, 2) else v)
    return VertexMap(total, total, tuple(image))
