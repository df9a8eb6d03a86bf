"""Path complexes and ordered simplicial complexes over dense vertex sets.

An elementary path is a plain tuple of vertex indices.  A path complex
stores its paths graded by degree (a k-path has k+1 vertices) up to an
explicit truncation degree `max_dim`; the allowed-path complex of a
digraph with cycles is infinite, so truncation is mandatory and recorded
in the value.

Cylinder vertices (v, i) are encoded as 2*v + i.  Mapping-cylinder
vertices use (x, 0) -> x and (y, 1) -> n1 + y where n1 is the vertex
count of the source complex.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .digraph import MorphismClass, VertexMap


def is_regular_path(p):
    """No two consecutive entries equal."""
    return all(p[i] != p[i + 1] for i in range(len(p) - 1))


def is_simplicial_path(p):
    """All entries distinct."""
    return len(set(p)) == len(p)


@dataclass(frozen=True)
class PathComplex:
    """Graded set of elementary paths, closed under truncation at both ends.

    grades[k] is the sorted tuple of stored k-paths; `regular` is True
    exactly when every stored path is regular.
    """

    vertex_count: int
    max_dim: int
    grades: tuple
    regular: bool

    @cached_property
    def _index(self):
        return tuple(frozenset(g) for g in self.grades)

    def degree(self, k):
        if 0 <= k <= self.max_dim:
            return self.grades[k]
        return ()

    def __contains__(self, path):
        k = len(path) - 1
        if 0 <= k <= self.max_dim:
            return tuple(path) in self._index[k]
        return False

    def path_count(self, k):
        return len(self.degree(k))

    def all_paths(self):
        for g in self.grades:
            yield from g

    def validate(self):
        """Check the path-complex axioms; raises ValueError on violation."""
        if len(self.grades) != self.max_dim + 1:
            raise ValueError("grade count does not match max_dim")
        singles = set(self.grades[0])
        if singles != {(v,) for v in range(self.vertex_count)}:
            raise ValueError("singleton paths missing or out of range")
        for k, grade in enumerate(self.grades):
            if tuple(sorted(set(grade))) != grade:
                raise ValueError(f"degree {k} paths not sorted and distinct")
            for p in grade:
                if len(p) != k + 1:
                    raise ValueError(f"path {p} stored at wrong degree {k}")
                if any(not (0 <= v < self.vertex_count) for v in p):
                    raise ValueError(f"path {p} has out-of-range vertex")
                if k >= 1:
                    if p[1:] not in self._index[k - 1] or p[:-1] not in self._index[k - 1]:
                        raise ValueError(f"truncation of {p} missing")
        if self.regular != all(is_regular_path(p) for p in self.all_paths()):
            raise ValueError("regular flag does not match contents")
        return True


class OrderedSimplicialComplex(PathComplex):
    """A path complex of simplicial paths, closed under ordered subsets."""

    def validate(self):
        super().validate()
        for k, grade in enumerate(self.grades):
            for p in grade:
                if not is_simplicial_path(p):
                    raise ValueError(f"non-simplicial path {p}")
                if k >= 1:
                    for i in range(len(p)):
                        face = p[:i] + p[i + 1:]
                        if face not in self._index[k - 1]:
                            raise ValueError(f"face {face} of {p} missing")
        return True


def _grade(paths, max_dim):
    grades = [set() for _ in range(max_dim + 1)]
    for p in paths:
        k = len(p) - 1
        if 0 <= k <= max_dim:
            grades[k].add(tuple(p))
    return tuple(tuple(sorted(g)) for g in grades)


def path_complex(vertex_count, paths, max_dim):
    """Normalizing constructor; adds all singletons."""
    items = list(paths) + [(v,) for v in range(vertex_count)]
    grades = _grade(items, max_dim)
    regular = all(is_regular_path(p) for g in grades for p in g)
    return PathComplex(vertex_count, max_dim, grades, regular)


def osc(vertex_count, paths, max_dim):
    items = list(paths) + [(v,) for v in range(vertex_count)]
    grades = _grade(items, max_dim)
    return OrderedSimplicialComplex(vertex_count, max_dim, grades, True)


def truncation_closure(vertex_count, paths, max_dim):
    """Smallest path complex containing `paths` (degrees above max_dim cut)."""
    seen = set()
    stack = [tuple(p) for p in paths if len(p) - 1 <= max_dim]
    while stack:
        p = stack.pop()
        if p in seen:
            continue
        seen.add(p)
        if len(p) > 1:
            stack.append(p[1:])
            stack.append(p[:-1])
    return path_complex(vertex_count, seen, max_dim)


def subset_closure(vertex_count, paths, max_dim):
    """Smallest ordered simplicial complex containing the given simplicial paths."""
    seen = set()
    stack = [tuple(p) for p in paths if len(p) - 1 <= max_dim]
    while stack:
        p = stack.pop()
        if p in seen:
            continue
        if not is_simplicial_path(p):
            raise ValueError(f"non-simplicial path {p} in subset closure")
        seen.add(p)
        if len(p) > 1:
            for i in range(len(p)):
                stack.append(p[:i] + p[i + 1:])
    return osc(vertex_count, seen, max_dim)


# --- digraph functors -------------------------------------------------------

def directed_flag_complex(G, max_dim):
    """All directed cliques of G up to degree max_dim, in lexicographic order."""
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    grades = [tuple((v,) for v in range(G.vertex_count))]
    for k in range(1, max_dim + 1):
        nxt = []
        for clique in grades[k - 1]:
            common = set(G.out_adj[clique[0]])
            for v in clique[1:]:
                common &= set(G.out_adj[v])
            for w in sorted(common):
                nxt.append(clique + (w,))
        grades.append(tuple(sorted(nxt)))
        if not nxt:
            grades.extend(() for _ in range(k + 1, max_dim + 1))
            break
    return OrderedSimplicialComplex(G.vertex_count, max_dim, tuple(grades), True)


def allowed_path_complex(G, max_dim):
    """All directed walks of G up to degree max_dim (regular since G is simple)."""
    if max_dim < 0:
        raise ValueError("max_dim must be nonnegative")
    grades = [tuple((v,) for v in range(G.vertex_count))]
    for k in range(1, max_dim + 1):
        nxt = []
        for walk in grades[k - 1]:
            for w in G.out_adj[walk[-1]]:
                nxt.append(walk + (w,))
        grades.append(tuple(sorted(nxt)))
        if not nxt:
            grades.extend(() for _ in range(k + 1, max_dim + 1))
            break
    return PathComplex(G.vertex_count, max_dim, tuple(grades), True)


# --- basic operations --------------------------------------------------------

def skeleton(P, k):
    """Sub-complex of paths of degree at most k."""
    if not (0 <= k <= P.max_dim):
        raise ValueError("skeleton degree out of range")
    grades = P.grades[:k + 1]
    if isinstance(P, OrderedSimplicialComplex):
        return OrderedSimplicialComplex(P.vertex_count, k, grades, True)
    regular = all(is_regular_path(p) for g in grades for p in g)
    return PathComplex(P.vertex_count, k, grades, regular)


def regularise(P):
    """Maximal regular sub-path complex: drop every irregular path."""
    grades = tuple(tuple(p for p in g if is_regular_path(p)) for g in P.grades)
    return PathComplex(P.vertex_count, P.max_dim, grades, True)


# --- cylinders ---------------------------------------------------------------

def cylinder_vertex(v, side):
    return 2 * v + side

def cylinder_inclusion(P, side):
    """The weak path morphism v -> (v, side) into the cylinder."""
    return VertexMap(P.vertex_count, 2 * P.vertex_count,
                     tuple(cylinder_vertex(v, side) for v in range(P.vertex_count)))

def cylinder_projection(P):
    """The weak path morphism (v, i) -> v out of the cylinder."""
    return VertexMap(2 * P.vertex_count, P.vertex_count,
                     tuple(v // 2 for v in range(2 * P.vertex_count)))


def cylinder(P):
    """Cylinder over P on vertex set V x {0, 1}.

    Contains both shifted copies of each path plus, for every path and
    every position i, the prism path that switches sides after v_i.
    """
    paths = []
    for g in P.grades:
        for p in g:
            bottom = tuple(cylinder_vertex(v, 0) for v in p)
            top = tuple(cylinder_vertex(v, 1) for v in p)
            paths.append(bottom)
            paths.append(top)
            for i in range(len(p)):
                paths.append(bottom[:i + 1] + top[i:])
    grades = _grade(paths, P.max_dim + 1)
    regular = all(is_regular_path(p) for g in grades for p in g)
    return PathComplex(2 * P.vertex_count, P.max_dim + 1, grades, regular)


def simplicial_closure_of_cylinder(K):
    """Smallest ordered simplicial complex containing the cylinder over K.

    Equals the cylinder plus the side-switching paths that skip the
    duplicated pivot vertex.
    """
    cyl = cylinder(K)
    extra = []
    for g in K.grades:
        for p in g:
            bottom = tuple(cylinder_vertex(v, 0) for v in p)
            top = tuple(cylinder_vertex(v, 1) for v in p)
            for i in range(len(p) - 1):
                extra.append(bottom[:i + 1] + top[i + 1:])
    grades = _grade(list(cyl.all_paths()) + extra, K.max_dim + 1)
    return OrderedSimplicialComplex(2 * K.vertex_count, K.max_dim + 1, grades, True)


# --- morphism classification -------------------------------------------------

def classify_path_morphism(f, P1, P2):
    """NOT_WEAK / WEAK / STRONG over all stored paths of P1.

    P2 must be built at least as deep as P1, otherwise membership of
    images cannot be decided.
    """
    if f.source_count != P1.vertex_count or f.target_count != P2.vertex_count:
        raise ValueError("vertex map dimensions do not match the complexes")
    if P2.max_dim < P1.max_dim:
        raise ValueError("codomain complex truncated below domain degree")
    strong = True
    for p in P1.all_paths():
        image = f.apply_path(p)
        if image in P2:
            continue
        strong = False
        if is_regular_path(image):
            return MorphismClass.NOT_WEAK
    return MorphismClass.STRONG if strong else MorphismClass.WEAK


def classify_simplicial_morphism(f, K1, K2):
    """NOT_WEAK / WEAK / TRIANGLE_COLLAPSING / STRONG over stored simplices."""
    if f.source_count != K1.vertex_count or f.target_count != K2.vertex_count:
        raise ValueError("vertex map dimensions do not match the complexes")
    if K2.max_dim < K1.max_dim:
        raise ValueError("codomain complex truncated below domain degree")
    strong = True
    for p in K1.all_paths():
        image = f.apply_path(p)
        if image in K2:
            continue
        strong = False
        if is_simplicial_path(image):
            return MorphismClass.NOT_WEAK
    for (a, b, c) in K1.degree(2):
        if f(a) == f(c) and not (f(a) == f(b) == f(c)):
            return MorphismClass.WEAK
    return MorphismClass.STRONG if strong else MorphismClass.TRIANGLE_COLLAPSING


def violating_path(f, P1, P2):
    """A stored path witnessing that f is not a weak path morphism, or None."""
    if P2.max_dim < P1.max_dim:
        raise ValueError("codomain complex truncated below domain degree")
    for p in P1.all_paths():
        image = f.apply_path(p)
        if image not in P2 and is_regular_path(image):
            return p
    return None


# --- mapping cylinders -------------------------------------------------------

def mapping_cylinder_inclusion(P1, P2):
    """The inclusion of P2 into the mapping cylinder: y -> (y, 1)."""
    return VertexMap(P2.vertex_count, P1.vertex_count + P2.vertex_count,
                     tuple(P1.vertex_count + y for y in range(P2.vertex_count)))


def mapping_cylinder_projection(f, P1, P2):
    """(x, 0) -> f(x) and (y, 1) -> y; a weak path morphism onto P2."""
    image = tuple(f(x) for x in range(P1.vertex_count)) + \
        tuple(range(P2.vertex_count))
    return VertexMap(P1.vertex_count + P2.vertex_count, P2.vertex_count, image)


def mapping_cylinder(f, P1, P2):
    """Mapping cylinder of a weak path morphism f: P1 -> P2.

    Contains the P1 copy, the P2 copy, and for every path of P1 the
    prism paths that jump to the image complex after position i.  Image
    paths f(p) are irregular whenever f is not strong; they are kept so
    the result is truncation-closed, and regularise() removes them.
    """
    bad = violating_path(f, P1, P2)
    if bad is not None:
        raise ValueError(f"not a weak path morphism: image of {bad} "
                         "is regular but not in the codomain")
    n1 = P1.vertex_count
    max_dim = min(P1.max_dim + 1, P2.max_dim)
    paths = []
    for g in P2.grades:
        for q in g:
            paths.append(tuple(n1 + y for y in q))
    for g in P1.grades:
        for p in g:
            bottom = p
            top = tuple(n1 + f(x) for x in p)
            paths.append(bottom)
            paths.append(top)  # image path; may be irregular
            for i in range(len(p)):
                paths.append(bottom[:i + 1] + top[i:])
    grades = _grade(paths, max_dim)
    regular = all(is_regular_path(p) for g in grades for p in g)
    return PathComplex(n1 + P2.vertex_count, max_dim, grades, regular)


def simplicial_closure_of_mapping_cylinder(f, K1, K2):
    """Smallest OSC containing the simplicial paths of the mapping cylinder.

    Requires f to be a triangle-collapsing simplicial morphism.  On top of
    the two copies, contains every simplicial path of the form
    (x_0,0)..(x_i,0)(f(x_j),1)..(f(x_k),1) with j either i or i+1.
    """
    cls = classify_simplicial_morphism(f, K1, K2)
    if cls < MorphismClass.TRIANGLE_COLLAPSING:
        raise ValueError("not a triangle-collapsing simplicial morphism")
    n1 = K1.vertex_count
    max_dim = min(K1.max_dim + 1, K2.max_dim)
    paths = []
    for g in K2.grades:
        for q in g:
            paths.append(tuple(n1 + y for y in q))
    for g in K1.grades:
        for p in g:
            bottom = p
            top = tuple(n1 + f(x) for x in p)
            paths.append(bottom)
            for i in range(len(p)):
                cand = bottom[:i + 1] + top[i:]
                if is_simplicial_path(cand):
                    paths.append(cand)
            for i in range(len(p) - 1):
                cand = bottom[:i + 1] + top[i + 1:]
                if is_simplicial_path(cand):
                    paths.append(cand)
    grades = _grade(paths, max_dim)
    return OrderedSimplicialComplex(n1 + K2.vertex_count, max_dim, grades, True)
