"""One-step homotopy systems for digraph maps, search and certificates.

Two systems are implemented.  In the allowed-path system an edge f -> g
exists iff f(x) is equal-or-adjacent to g(x) for every vertex.  In the
directed-flag system an edge exists iff

  1. x equal-or-adjacent-to y implies f(x) equal-or-adjacent-to g(y), and
  2. an edge x -> y with f(x) = g(y) forces f(x) = f(y) = g(x) = g(y).

Both conditions are decided directly from (f, g); the closure-of-cylinder
oracle re-derives the directed-flag answer from an explicit simplicial
morphism classification and exists to keep the closed forms honest.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache

from .chains import MultiStepWitness, OneStepWitness
from .complexes import (classify_simplicial_morphism, directed_flag_complex,
                        simplicial_closure_of_cylinder)
from .digraph import Digraph, MorphismClass, VertexMap, classify_digraph_map, \
    is_oriented, reciprocal_pairs


@dataclass(frozen=True)
class SystemKind:
    """A homotopy system: allowed-path, directed-flag, or the relative
    directed-flag variant that pins a set of source vertices."""

    name: str  # "A" or "dfl"
    fixed: frozenset | None = None

    def __post_init__(self):
        if self.name not in ("A", "dfl"):
            raise ValueError(f"unknown system {self.name!r}")
        if self.fixed is not None and self.name != "dfl":
            raise ValueError("relative variant exists only for dfl")

    def __str__(self):
        if self.fixed is not None:
            return f"dfl rel {sorted(self.fixed)}"
        return self.name


SYS_A = SystemKind("A")
SYS_DFL = SystemKind("dfl")


def dfl_relative(fixed):
    return SystemKind("dfl", frozenset(fixed))


def _require_class(f, G, H, minimum, role):
    cls = classify_digraph_map(f, G, H)
    if cls < minimum:
        raise ValueError(f"{role} map is not {'weak' if minimum == MorphismClass.WEAK else 'triangle-collapsing'}")
    return cls


def one_step_A(f, g, G, H):
    """Edge f -> g in the allowed-path system."""
    _require_class(f, G, H, MorphismClass.WEAK, "source")
    _require_class(g, G, H, MorphismClass.WEAK, "target")
    return all(H.tooreq(f(x), g(x)) for x in range(G.vertex_count))


def one_step_dFl(f, g, G, H):
    """Edge f -> g in the directed-flag system (closed-form conditions)."""
    _require_class(f, G, H, MorphismClass.TRIANGLE_COLLAPSING, "source")
    _require_class(g, G, H, MorphismClass.TRIANGLE_COLLAPSING, "target")
    return _dfl_edge_conditions(f, g, G, H)


def _dfl_edge_conditions(f, g, G, H):
    for x in range(G.vertex_count):
        if not H.tooreq(f(x), g(x)):
            return False
    for (x, y) in G.edges:
        if not H.tooreq(f(x), g(y)):
            return False
        if f(x) == g(y) and not (f(x) == f(y) == g(x) == g(y)):
            return False
    return True


def one_step_cylinder_map(f, g):
    """The vertex map on V x {0, 1} determined by the pair (f, g)."""
    image = []
    for v in range(f.source_count):
        image.append(f(v))
        image.append(g(v))
    return VertexMap(2 * f.source_count, f.target_count, tuple(image))


@lru_cache(maxsize=8192)
def _oracle_context(G, H):
    K = directed_flag_complex(G, G.vertex_count)
    closure = simplicial_closure_of_cylinder(K)
    target = directed_flag_complex(H, max(H.vertex_count, closure.max_dim))
    return closure, target


def one_step_dFl_oracle(f, g, G, H):
    """Decide the same edge by explicit construction.

    Builds the simplicial closure of the cylinder over the directed flag
    complex of G and asks whether the map determined by (f, g) is a
    triangle-collapsing simplicial morphism into the flag complex of H.
    """
    _require_class(f, G, H, MorphismClass.TRIANGLE_COLLAPSING, "source")
    _require_class(g, G, H, MorphismClass.TRIANGLE_COLLAPSING, "target")
    closure, target = _oracle_context(G, H)
    F = one_step_cylinder_map(f, g)
    cls = classify_simplicial_morphism(F, closure, target)
    return cls >= MorphismClass.TRIANGLE_COLLAPSING


def one_step_dfl_relative(f, g, G, H, fixed):
    """Directed-flag one-step that additionally agrees on `fixed`."""
    if not one_step_dFl(f, g, G, H):
        return False
    return all(f(v) == g(v) for v in fixed)


def map_is_valid(system, f, G, H):
    cls = classify_digraph_map(f, G, H)
    if system.name == "A":
        return cls >= MorphismClass.WEAK
    return cls >= MorphismClass.TRIANGLE_COLLAPSING


def one_step(system, f, g, G, H):
    """Edge f -> g in the given system (maps assumed valid)."""
    if system.name == "A":
        return all(H.tooreq(f(x), g(x)) for x in range(G.vertex_count))
    if not _dfl_edge_conditions(f, g, G, H):
        return False
    if system.fixed is not None:
        return all(f(v) == g(v) for v in system.fixed)
    return True


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a witness search.

    status is "found", "absent" (whole map space explored, no zig-zag) or
    "inconclusive" (budget hit before the space was exhausted); a silent
    false is never returned.
    """

    status: str
    witness: MultiStepWitness | None
    explored: int
    space_size: int

    def __bool__(self):
        return self.status == "found"


def _enumerate_maps(n_src, n_dst, limit):
    """All vertex maps in lexicographic image order, or None past limit."""
    total = n_dst ** n_src
    if total > limit:
        return None
    out = []
    image = [0] * n_src
    while True:
        out.append(VertexMap(n_src, n_dst, tuple(image)))
        i = n_src - 1
        while i >= 0 and image[i] == n_dst - 1:
            image[i] = 0
            i -= 1
        if i < 0:
            break
        image[i] += 1
    return out


def multi_step_search(f, g, G, H, system=SYS_DFL, budget=200000):
    """Breadth-first search for a zig-zag of one-step homotopies f to g.

    The map space has |V(H)|^|V(G)| elements; `budget` caps how many maps
    are materialized.  If the space exceeds the budget the result is
    "inconclusive", never a silent false.
    """
    if not map_is_valid(system, f, G, H) or not map_is_valid(system, g, G, H):
        raise ValueError("endpoint maps are not valid for the system")
    if system.fixed is not None and any(f(v) != g(v) for v in system.fixed):
        return SearchResult("absent", None, 0, H.vertex_count ** G.vertex_count)
    space_size = H.vertex_count ** G.vertex_count
    if f == g:
        return SearchResult("found", MultiStepWitness.trivial(f), 0, space_size)

    maps = _enumerate_maps(G.vertex_count, H.vertex_count, budget)
    if maps is None:
        return SearchResult("inconclusive", None, 0, space_size)
    valid = [m for m in maps if map_is_valid(system, m, G, H)]
    if system.fixed is not None:
        valid = [m for m in valid
                 if all(m(v) == f(v) for v in system.fixed)]

    prev = {f: None}  # map -> (parent, direction of the edge between them)
    frontier = [f]
    explored = 1
    while frontier:
        nxt = []
        for u in frontier:
            for w in valid:
                if w in prev:
                    continue
                if one_step(system, u, w, G, H):
                    direction = 1
                elif one_step(system, w, u, G, H):
                    direction = -1
                else:
                    continue
                prev[w] = (u, direction)
                explored += 1
                if w == g:
                    chain = [w]
                    dirs = []
                    node = w
                    while prev[node] is not None:
                        parent, d = prev[node]
                        chain.append(parent)
                        dirs.append(d)
                        node = parent
                    chain.reverse()
                    dirs.reverse()
                    return SearchResult(
                        "found", MultiStepWitness(tuple(chain), tuple(dirs)),
                        explored, space_size)
                nxt.append(w)
        frontier = nxt
    return SearchResult("absent", None, explored, space_size)


@dataclass
class CertificateReport:
    """Result of re-verifying a certificate; falsy when anything failed.

    Verifiers that establish a numeric consequence (an interleaving bound,
    say) record it in `bound` on success.
    """

    failures: list = dataclass_field(default_factory=list)
    bound: object = None

    @property
    def ok(self):
        return not self.failures

    def __bool__(self):
        return self.ok

    def fail(self, message):
        self.failures.append(message)


def verify_multi_step(witness, G, H, system, report=None, label=""):
    """Re-verify every link of a zig-zag in its stated direction."""
    report = report if report is not None else CertificateReport()
    prefix = f"{label}: " if label else ""
    maps_ok = True
    for i, m in enumerate(witness.maps):
        if not map_is_valid(system, m, G, H):
            report.fail(f"{prefix}map {i} is not valid for system {system}")
            maps_ok = False
    if maps_ok:
        for i, d in enumerate(witness.directions):
            a, b = witness.maps[i], witness.maps[i + 1]
            if d == -1:
                a, b = b, a
            if not one_step(system, a, b, G, H):
                report.fail(f"{prefix}step {i} fails the one-step check")
    return report


@dataclass(frozen=True)
class EquivalenceCertificate:
    """Maps f: G -> H and g: H -> G with zig-zags g.f ~ id and f.g ~ id."""

    G: Digraph
    H: Digraph
    f: VertexMap
    g: VertexMap
    witness_gf: MultiStepWitness
    witness_fg: MultiStepWitness


def verify_certificate(cert, system=SYS_DFL):
    """Re-verify every one-step link of an equivalence certificate."""
    report = CertificateReport()
    if not map_is_valid(system, cert.f, cert.G, cert.H):
        report.fail("forward map is not valid for the system")
    if not map_is_valid(system, cert.g, cert.H, cert.G):
        report.fail("backward map is not valid for the system")
    if report.ok:
        gf = cert.g.compose(cert.f)
        fg = cert.f.compose(cert.g)
        idg = VertexMap.identity(cert.G.vertex_count)
        idh = VertexMap.identity(cert.H.vertex_count)
        if {cert.witness_gf.source, cert.witness_gf.target} != {gf, idg}:
            report.fail("witness endpoints do not match g o f and id")
        if {cert.witness_fg.source, cert.witness_fg.target} != {fg, idh}:
            report.fail("witness endpoints do not match f o g and id")
        verify_multi_step(cert.witness_gf, cert.G, cert.G, system, report,
                          label="g o f")
        verify_multi_step(cert.witness_fg, cert.H, cert.H, system, report,
                          label="f o g")
    return report


# --- deformation retractions -------------------------------------------------

def _check_retraction_shape(G, kept, r):
    kept = frozenset(kept)
    if any(not (0 <= v < G.vertex_count) for v in kept):
        raise ValueError("kept vertex out of range")
    if any(r(v) not in kept for v in range(G.vertex_count)):
        raise ValueError("not a retraction: image leaves the subgraph")
    if any(r(v) != v for v in kept):
        raise ValueError("not a retraction: not the identity on the subgraph")


def check_dfl_deformation_retraction(G, kept, r):
    """Directed-flag deformation retraction onto the induced subgraph.

    Returns the emitted one-step witness relating the identity and the
    retraction (direction depends on which condition pair holds), or None
    when neither pair holds or r is not triangle-collapsing.
    """
    _check_retraction_shape(G, kept, r)
    if classify_digraph_map(r, G, G) < MorphismClass.TRIANGLE_COLLAPSING:
        return None
    identity = VertexMap.identity(G.vertex_count)
    forward = all(G.tooreq(x, r(x)) for x in range(G.vertex_count)) and \
        all(G.has_edge(x, r(y)) for (x, y) in G.edges)
    if forward:
        return OneStepWitness(identity, r, 1)
    backward = all(G.tooreq(r(x), x) for x in range(G.vertex_count)) and \
        all(G.has_edge(r(x), y) for (x, y) in G.edges)
    if backward:
        return OneStepWitness(r, identity, 1)
    return None


def check_a_deformation_retraction(G, kept, r):
    """Allowed-path deformation retraction; same calling convention."""
    _check_retraction_shape(G, kept, r)
    if classify_digraph_map(r, G, G) < MorphismClass.WEAK:
        return None
    identity = VertexMap.identity(G.vertex_count)
    if all(G.tooreq(x, r(x)) for x in range(G.vertex_count)):
        return OneStepWitness(identity, r, 1)
    if all(G.tooreq(r(x), x) for x in range(G.vertex_count)):
        return OneStepWitness(r, identity, 1)
    return None


def _single_vertex_retraction(G, a, b0):
    image = tuple(b0 if v == a else v for v in range(G.vertex_count))
    return VertexMap(G.vertex_count, G.vertex_count, image)


@dataclass(frozen=True)
class ContractionStep:
    """One verified deformation retraction in a contraction sequence."""

    graph: Digraph          # graph before the step (dense numbering)
    kept: tuple             # vertices kept, in the step's numbering
    retraction: VertexMap   # self-map of the step's graph
    witness: OneStepWitness


@dataclass(frozen=True)
class ContractionResult:
    status: str  # "contracted" or "none-found"
    steps: tuple

    def __bool__(self):
        return self.status == "contracted"


def _star_centre(G, system):
    n = G.vertex_count
    recip = reciprocal_pairs(G)
    for v0 in range(n):
        involved = any(v0 in pair for pair in recip)
        if system.name == "dfl" and involved:
            continue
        if all(G.has_edge(v0, v) for v in range(n) if v != v0):
            return v0
        if all(G.has_edge(v, v0) for v in range(n) if v != v0):
            return v0
    return None


def greedy_contract(G, system=SYS_DFL):
    """Greedy search for a verified reduction of G to a single vertex.

    Moves, cheapest first: remove an oriented leaf, collapse to a star
    centre, then scan retract-one-vertex candidates in vertex order.  A
    "none-found" outcome is inconclusive, not a disproof.
    """
    check = check_dfl_deformation_retraction if system.name == "dfl" \
        else check_a_deformation_retraction
    current = G
    steps = []
    while current.vertex_count > 1:
        move = None
        # oriented leaves first
        for a in range(current.vertex_count):
            nbrs = current.neighbours(a)
            if len(nbrs) != 1:
                continue
            b0 = nbrs[0]
            if system.name == "dfl" and current.has_edge(a, b0) and \
                    current.has_edge(b0, a):
                continue
            r = _single_vertex_retraction(current, a, b0)
            kept = tuple(v for v in range(current.vertex_count) if v != a)
            w = check(current, kept, r)
            if w is not None:
                move = (kept, r, w)
                break
        if move is None:
            centre = _star_centre(current, system)
            if centre is not None:
                r = VertexMap.constant(current.vertex_count,
                                       current.vertex_count, centre)
                w = check(current, (centre,), r)
                if w is not None:
                    move = ((centre,), r, w)
        if move is None:
            for a in range(current.vertex_count):
                for b0 in current.neighbours(a):
                    r = _single_vertex_retraction(current, a, b0)
                    kept = tuple(v for v in range(current.vertex_count)
                                 if v != a)
                    w = check(current, kept, r)
                    if w is not None:
                        move = (kept, r, w)
                        break
                if move is not None:
                    break
        if move is None:
            return ContractionResult("none-found", tuple(steps))
        kept, r, w = move
        steps.append(ContractionStep(current, kept, r, w))
        current, _ = current.induced_subgraph(kept)
    return ContractionResult("contracted", tuple(steps))


def contraction_witness(result, G):
    """Compose a contraction sequence into a zig-zag id ~ constant on G.

    Each step's retraction is extended to a self-map of the original
    vertex set by composing with the previous composite; one-step edges
    are preserved under pre- and post-composition in both systems.
    """
    if not result:
        raise ValueError("no contraction to compose")
    n = G.vertex_count
    maps = [VertexMap.identity(n)]
    dirs = []
    composite = VertexMap.identity(n)

    # original labels of the current step graph's vertices
    labels = tuple(range(n))
    for step in result.steps:
        lift = {i: labels[i] for i in range(step.graph.vertex_count)}
        r_on_g = tuple(lift[step.retraction(i)]
                       for i in range(step.graph.vertex_count))
        back = {orig: i for i, orig in enumerate(labels)}
        full = tuple(r_on_g[back[composite(v)]] for v in range(n))
        new_composite = VertexMap(n, n, full)
        maps.append(new_composite)
        dirs.append(1 if step.witness.f.is_identity() else -1)
        composite = new_composite
        labels = tuple(lift[i] for i in step.kept)
    return MultiStepWitness(tuple(maps), tuple(dirs))
