"""Exact chain complexes of regular path complexes.

For a regular path complex P, degree k of the represented complex is the
subspace of formal sums of stored k-paths whose regular boundary is again
supported on stored paths.  For an ordered simplicial complex this is all
of C_k and the basis is the simplex basis; in general a basis is computed
by an exact kernel computation over the chosen field.

Bases are normalized (row-reduced, first nonzero coefficient 1, paths in
canonical order) so that matrices are reproducible across runs.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .complexes import (OrderedSimplicialComplex, classify_path_morphism,
                        cylinder, cylinder_inclusion, is_regular_path,
                        skeleton)
from .digraph import MorphismClass, VertexMap
from .linalg import QQ


@dataclass(frozen=True)
class Chain:
    """A formal sum of elementary paths of one degree."""

    degree: int
    terms: tuple  # sorted tuple of (path, coefficient), coefficients nonzero

    def coefficient(self, path, field):
        for p, c in self.terms:
            if p == path:
                return c
        return field.zero

    def is_zero(self):
        return not self.terms


def make_chain(degree, terms, field):
    items = tuple(sorted((tuple(p), c) for p, c in dict(terms).items()
                         if not field.is_zero(c)))
    return Chain(degree, items)


def chain_add(a, b, field):
    acc = dict(a.terms)
    for p, c in b.terms:
        acc[p] = field.add(acc.get(p, field.zero), c)
    return make_chain(a.degree, acc, field)


def chain_scale(s, a, field):
    return make_chain(a.degree, {p: field.mul(s, c) for p, c in a.terms}, field)


def regular_boundary(c, field=QQ):
    """Alternating face sum with irregular faces dropped; zero in degree 0."""
    acc = {}
    for p, coef in c.terms:
        for i in range(len(p)):
            face = p[:i] + p[i + 1:]
            if not face or not is_regular_path(face):
                continue
            sign = field.one if i % 2 == 0 else field.neg(field.one)
            acc[face] = field.add(acc.get(face, field.zero),
                                  field.mul(sign, coef))
    return make_chain(c.degree - 1, acc, field)


class ChainComplexRep:
    """Bases of the regular chain complex of P and exact boundary matrices.

    bases[k] lists the basis chains of degree k; boundary(k) is the matrix
    of the degree-k boundary in those bases, stored as a list of columns.
    """

    def __init__(self, field, complex_, top_degree, generators, basis_rows,
                 basis_pivots, boundaries):
        self.field = field
        self.complex = complex_
        self.top_degree = top_degree
        self.generators = generators      # per degree: tuple of paths
        self.basis_rows = basis_rows      # per degree: list of vectors over generators
        self.basis_pivots = basis_pivots  # per degree: pivot positions
        self.boundaries = boundaries      # per degree >= 1: list of columns
        self._gen_index = [
            {p: i for i, p in enumerate(gens)} for gens in generators]

    def dim(self, k):
        if 0 <= k <= self.top_degree:
            return len(self.basis_rows[k])
        return 0

    @property
    def bases(self):
        out = []
        for k in range(self.top_degree + 1):
            gens = self.generators[k]
            out.append([make_chain(k, {gens[j]: c for j, c in enumerate(row)
                                       if not self.field.is_zero(c)}, self.field)
                        for row in self.basis_rows[k]])
        return out

    def boundary(self, k):
        """Matrix of the boundary from degree k to degree k-1 (columns)."""
        if 1 <= k <= self.top_degree:
            return self.boundaries[k]
        return [[] for _ in range(self.dim(k))] if k == 0 else []

    def chain_vector(self, chain):
        """Coordinates of a chain in the degree-k generator basis."""
        k = chain.degree
        vec = [self.field.zero] * len(self.generators[k])
        index = self._gen_index[k]
        for p, c in chain.terms:
            if p not in index:
                raise ValueError(f"path {p} not stored at degree {k}")
            vec[index[p]] = c
        return vec

    def omega_coordinates(self, chain):
        """Coordinates of a chain in the degree-k computed basis."""
        k = chain.degree
        coeffs = linalg.express_in_echelon(
            self.chain_vector(chain), self.basis_rows[k],
            self.basis_pivots[k], self.field)
        if coeffs is None:
            raise ValueError(f"chain not in the represented subspace "
                             f"at degree {k}")
        return coeffs

    def basis_chain(self, k, j):
        gens = self.generators[k]
        row = self.basis_rows[k][j]
        return make_chain(k, {gens[i]: c for i, c in enumerate(row)
                              if not self.field.is_zero(c)}, self.field)

    def chain_from_coordinates(self, k, coords):
        acc = {}
        gens = self.generators[k]
        for j, s in enumerate(coords):
            if self.field.is_zero(s):
                continue
            for i, c in enumerate(self.basis_rows[k][j]):
                if not self.field.is_zero(c):
                    acc[gens[i]] = self.field.add(
                        acc.get(gens[i], self.field.zero), self.field.mul(s, c))
        return make_chain(k, acc, self.field)


def omega_complex(P, top_degree, field=QQ):
    """Build the represented chain complex of P up to top_degree.

    Requires top_degree + 1 <= P.max_dim so the top-degree space is not
    distorted by truncation, and P regular.
    """
    if not P.regular:
        raise ValueError("complex contains irregular paths; regularise first")
    if top_degree < 0:
        raise ValueError("top_degree must be nonnegative")
    if top_degree + 1 > P.max_dim:
        raise ValueError(
            f"truncation budget violated: top_degree {top_degree} needs "
            f"complex built to degree {top_degree + 1}, have {P.max_dim}")

    is_osc = isinstance(P, OrderedSimplicialComplex)
    generators = [P.degree(k) for k in range(top_degree + 1)]
    gen_index = [{p: i for i, p in enumerate(g)} for g in generators]

    def unit_rows(n):
        rows = []
        for j in range(n):
            row = [field.zero] * n
            row[j] = field.one
            rows.append(row)
        return rows

    # raw boundaries of single generator paths, split by membership
    def faces(p):
        out = []
        for i in range(len(p)):
            face = p[:i] + p[i + 1:]
            if is_regular_path(face):
                sign = 1 if i % 2 == 0 else -1
                out.append((face, sign))
        return out

    basis_rows = []
    basis_pivots = []
    for k in range(top_degree + 1):
        gens = generators[k]
        if k == 0 or is_osc:
            basis_rows.append(unit_rows(len(gens)))
            basis_pivots.append(list(range(len(gens))))
            continue
        inside = gen_index[k - 1]
        outside_index = {}
        outside_cols = []
        for p in gens:
            col_entries = []
            for face, sign in faces(p):
                if face in inside:
                    continue
                if face not in outside_index:
                    outside_index[face] = len(outside_index)
                col_entries.append((outside_index[face], sign))
            outside_cols.append(col_entries)
        nout = len(outside_index)
        if nout == 0:
            basis_rows.append(unit_rows(len(gens)))
            basis_pivots.append(list(range(len(gens))))
            continue
        columns = []
        for entries in outside_cols:
            col = [field.zero] * nout
            for i, sign in entries:
                col[i] = field.add(col[i], field.from_int(sign))
            columns.append(col)
        rows = linalg.kernel_basis(columns, len(gens), field)
        basis_rows.append(rows)
        pivots = []
        for row in rows:
            for j, c in enumerate(row):
                if not field.is_zero(c):
                    pivots.append(j)
                    break
        basis_pivots.append(pivots)

    boundaries = [None]
    for k in range(1, top_degree + 1):
        gens = generators[k]
        prev_gens = generators[k - 1]
        prev_index = gen_index[k - 1]
        cols = []
        for row in basis_rows[k]:
            by_face = {}
            for j, coef in enumerate(row):
                if field.is_zero(coef):
                    continue
                for face, sign in faces(gens[j]):
                    by_face[face] = field.add(
                        by_face.get(face, field.zero),
                        field.mul(coef, field.from_int(sign)))
            acc = [field.zero] * len(prev_gens)
            for face, c in by_face.items():
                pos = prev_index.get(face)
                if pos is None:
                    # an outside face may appear with cancelling signs
                    if not field.is_zero(c):
                        raise ValueError(
                            f"basis boundary leaves the complex at {face}")
                    continue
                acc[pos] = c
            coords = linalg.express_in_echelon(
                acc, basis_rows[k - 1], basis_pivots[k - 1], field)
            if coords is None:
                raise ValueError("boundary of basis chain is not in the "
                                 f"degree {k - 1} subspace")
            cols.append(coords)
        boundaries.append(cols)

    rep = ChainComplexRep(field, P, top_degree, generators, basis_rows,
                          basis_pivots, boundaries)
    for k in range(2, top_degree + 1):
        comp = linalg.mat_mul(rep.boundaries[k - 1], rep.boundaries[k],
                              field, nrows=rep.dim(k - 2))
        if not linalg.is_zero_matrix(comp, field):
            raise AssertionError(f"boundary squared nonzero at degree {k}")
    return rep


def betti_numbers(rep, up_to):
    """Betti numbers in degrees 0..up_to, exact over rep's field.

    The value at up_to == top_degree assumes there is nothing above the
    top degree; build the complex one degree higher when that matters.
    """
    if up_to > rep.top_degree:
        raise ValueError("up_to exceeds the represented top degree")
    field = rep.field
    ranks = {}
    for k in range(1, up_to + 2):
        if k <= rep.top_degree:
            ranks[k] = linalg.rank(rep.boundaries[k], field)
        else:
            ranks[k] = 0
    out = []
    for k in range(up_to + 1):
        out.append(rep.dim(k) - ranks.get(k, 0) - ranks[k + 1])
    return tuple(out)


def euler_characteristic(rep):
    return sum((-1) ** k * rep.dim(k) for k in range(rep.top_degree + 1))


def _image_vector(fmap, chain_paths_coeffs, dst_rep, degree, field):
    """Vector (in dst generator coordinates) of the pushforward of a chain."""
    acc = {}
    for p, coef in chain_paths_coeffs:
        image = fmap.apply_path(p)
        if not is_regular_path(image):
            continue
        acc[image] = field.add(acc.get(image, field.zero), coef)
    vec = [field.zero] * len(dst_rep.generators[degree])
    index = dst_rep._gen_index[degree]
    for p, c in acc.items():
        if field.is_zero(c):
            continue
        if p not in index:
            raise ValueError(f"image path {p} not stored in the codomain")
        vec[index[p]] = c
    return vec


def _induced_matrices(fmap, src, dst, degrees):
    field = src.field
    mats = {}
    for k in degrees:
        cols = []
        for j in range(src.dim(k)):
            gens = src.generators[k]
            row = src.basis_rows[k][j]
            paths_coeffs = [(gens[i], c) for i, c in enumerate(row)
                            if not field.is_zero(c)]
            vec = _image_vector(fmap, paths_coeffs, dst, k, field)
            coords = linalg.express_in_echelon(
                vec, dst.basis_rows[k], dst.basis_pivots[k], field)
            if coords is None:
                raise ValueError(
                    f"pushforward leaves the represented subspace at degree {k}")
            cols.append(coords)
        mats[k] = cols
    return mats


def induced_chain_map(fmap, src, dst):
    """Matrices of the induced chain map in the computed bases.

    f must be a weak path morphism between the underlying complexes; the
    chain-map identity with the boundaries is verified exactly.
    """
    if src.field != dst.field:
        raise ValueError("source and destination fields differ")
    verify_deg = min(src.complex.max_dim, dst.complex.max_dim)
    cls = classify_path_morphism(fmap, skeleton(src.complex, verify_deg),
                                 dst.complex)
    if cls < MorphismClass.WEAK:
        raise ValueError("not a weak path morphism")
    top = min(src.top_degree, dst.top_degree)
    mats = _induced_matrices(fmap, src, dst, range(top + 1))
    field = src.field
    for k in range(1, top + 1):
        left = linalg.mat_mul(dst.boundaries[k], mats[k], field,
                              nrows=dst.dim(k - 1))
        right = linalg.mat_mul(mats[k - 1], src.boundaries[k], field,
                               nrows=dst.dim(k - 1))
        if not linalg.mat_eq(left, right, field):
            raise AssertionError(f"chain map identity fails at degree {k}")
    return [mats[k] for k in range(top + 1)]


def lift_path(p, field):
    """Signed prism decomposition of a path, as terms in the cylinder."""
    bottom = tuple(2 * v for v in p)
    top = tuple(2 * v + 1 for v in p)
    out = {}
    for i in range(len(p)):
        sign = field.one if i % 2 == 0 else field.neg(field.one)
        q = bottom[:i + 1] + top[i:]
        out[q] = field.add(out.get(q, field.zero), sign)
    return out


def lifting_map(rep, cyl_rep, k):
    """Matrix of the prism lift from degree k of P into degree k+1 of Cyl(P)."""
    if cyl_rep.complex.vertex_count != 2 * rep.complex.vertex_count:
        raise ValueError("second argument is not a cylinder representation")
    if k + 1 > cyl_rep.top_degree:
        raise ValueError("cylinder representation not built to degree k+1")
    field = rep.field
    cols = []
    for j in range(rep.dim(k)):
        gens = rep.generators[k]
        row = rep.basis_rows[k][j]
        acc = {}
        for i, coef in enumerate(row):
            if field.is_zero(coef):
                continue
            for q, s in lift_path(gens[i], field).items():
                acc[q] = field.add(acc.get(q, field.zero), field.mul(coef, s))
        vec = [field.zero] * len(cyl_rep.generators[k + 1])
        index = cyl_rep._gen_index[k + 1]
        for q, c in acc.items():
            if field.is_zero(c):
                continue
            if q not in index:
                raise ValueError(f"lifted path {q} not stored in the cylinder")
            vec[index[q]] = c
        coords = linalg.express_in_echelon(
            vec, cyl_rep.basis_rows[k + 1], cyl_rep.basis_pivots[k + 1], field)
        if coords is None:
            raise ValueError("lift leaves the represented cylinder subspace")
        cols.append(coords)
    return cols


@dataclass(frozen=True)
class OneStepWitness:
    """A pair of maps related by a single edge of a homotopy system.

    direction +1 means the edge runs f -> g, -1 means g -> f.
    """

    f: VertexMap
    g: VertexMap
    direction: int = 1


@dataclass(frozen=True)
class MultiStepWitness:
    """A zig-zag of maps; directions[i] orients the step maps[i], maps[i+1]."""

    maps: tuple
    directions: tuple

    def __post_init__(self):
        if len(self.directions) != len(self.maps) - 1:
            raise ValueError("need exactly one direction per adjacent pair")
        if any(d not in (1, -1) for d in self.directions):
            raise ValueError("directions must be +1 or -1")

    @staticmethod
    def trivial(fmap):
        return MultiStepWitness((fmap,), ())

    @staticmethod
    def from_one_step(w):
        return MultiStepWitness((w.f, w.g), (w.direction,))

    @property
    def source(self):
        return self.maps[0]

    @property
    def target(self):
        return self.maps[-1]


def step_cylinder_map(witness, i):
    """The cylinder vertex map of step i, honouring the step direction."""
    if witness.directions[i] == 1:
        a, b = witness.maps[i], witness.maps[i + 1]
    else:
        a, b = witness.maps[i + 1], witness.maps[i]
    n = a.source_count
    image = []
    for v in range(n):
        image.append(a(v))
        image.append(b(v))
    return VertexMap(2 * n, a.target_count, tuple(image))


def chain_homotopy_from_witness(witness, src, dst):
    """Explicit chain homotopy matrices L_k from a verified zig-zag.

    Each step must induce a weak path morphism out of the cylinder of the
    source complex (checked; failures name the step).  The returned
    matrices satisfy boundary(k+1) L_k + L_(k-1) boundary(k) =
    g_# - f_# exactly, which is verified before returning.
    """
    if src.field != dst.field:
        raise ValueError("source and destination fields differ")
    field = src.field
    P1 = src.complex
    top = min(src.top_degree, dst.top_degree - 1)
    if top < 0:
        raise ValueError("destination not built deep enough for a homotopy")

    cyl = cylinder(P1)
    cyl_rep = omega_complex(cyl, top + 1, field)
    lifts = [lifting_map(src, cyl_rep, k) for k in range(top + 1)]

    verify_deg = min(cyl.max_dim, dst.complex.max_dim)
    cyl_skel = skeleton(cyl, verify_deg)

    l_mats = [linalg.zero_matrix(dst.dim(k + 1), src.dim(k), field)
              for k in range(top + 1)]
    for i in range(len(witness.directions)):
        fstep = step_cylinder_map(witness, i)
        cls = classify_path_morphism(fstep, cyl_skel, dst.complex)
        if cls < MorphismClass.WEAK:
            raise ValueError(
                f"step {i} is not a verified one-step homotopy: cylinder map "
                "is not a weak path morphism")
        fsharp = _induced_matrices(fstep, cyl_rep, dst, range(1, top + 2))
        alpha = witness.directions[i]
        for k in range(top + 1):
            step_mat = linalg.mat_mul(fsharp[k + 1], lifts[k], field,
                                      nrows=dst.dim(k + 1))
            if alpha == -1:
                step_mat = [[field.neg(x) for x in col] for col in step_mat]
            l_mats[k] = linalg.mat_add(l_mats[k], step_mat, field)

    fsharp0 = _induced_matrices(witness.source, src, dst, range(top + 1))
    gsharp0 = _induced_matrices(witness.target, src, dst, range(top + 1))
    for k in range(top + 1):
        lhs = linalg.mat_mul(dst.boundaries[k + 1], l_mats[k], field,
                             nrows=dst.dim(k))
        if k >= 1:
            lhs = linalg.mat_add(
                lhs, linalg.mat_mul(l_mats[k - 1], src.boundaries[k], field,
                                    nrows=dst.dim(k)), field)
        rhs = linalg.mat_sub(gsharp0[k], fsharp0[k], field)
        if not linalg.mat_eq(lhs, rhs, field):
            raise AssertionError(f"chain homotopy identity fails at degree {k}")
    return l_mats


def induced_map_on_cylinder_ends(rep, cyl_rep, side):
    """Matrix of the end inclusion of the cylinder, degreewise."""
    inc = cylinder_inclusion(rep.complex, side)
    return _induced_matrices(inc, rep, cyl_rep,
                             range(min(rep.top_degree, cyl_rep.top_degree) + 1))
