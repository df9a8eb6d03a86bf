"""Exact linear algebra over the rationals and prime fields.

All matrices are dense lists of columns, each column a list of field
elements.  Sizes here are desk-scale (hundreds of rows), so plain exact
Gaussian elimination with a deterministic pivot order is used throughout;
determinism of the resulting echelon bases is what downstream code relies
on for reproducible chain-complex bases.
"""

from __future__ import annotations

from fractions import Fraction


class Rationals:
    """Field of exact rationals, elements are fractions.Fraction."""

    name = "Q"

    def from_int(self, n):
        return Fraction(n)

    @property
    def zero(self):
        return Fraction(0)

    @property
    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        return 1 / a

    def is_zero(self, a):
        return a == 0

    def __eq__(self, other):
        return isinstance(other, Rationals)

    def __hash__(self):
        return hash("Q")

    def __repr__(self):
        return "Rationals()"


class PrimeField:
    """GF(p) for prime p, elements are ints in range(p)."""

    def __init__(self, p):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.name = f"GF({p})"

    def from_int(self, n):
        return n % self.p

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def is_zero(self, a):
        return a % self.p == 0

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"PrimeField({self.p})"


QQ = Rationals()
GF2 = PrimeField(2)


def parse_field(spec):
    """Parse a field spec string: "q" / "Q" or "gf<p>"."""
    s = spec.strip().lower()
    if s in ("q", "qq", "rational", "rationals"):
        return QQ
    if s.startswith("gf"):
        return PrimeField(int(s[2:]))
    raise ValueError(f"unknown field spec {spec!r}")


# --- row operations -------------------------------------------------------

def row_reduce(rows, field):
    """Reduced row echelon form.

    Returns (new_rows, pivot_cols).  Zero rows are dropped; pivot entries
    are normalized to 1 and pivot columns are cleared above and below, so
    the output rows form a canonical basis of the row space.
    """
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, len(rows)):
            if not field.is_zero(rows[i][col]):
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = field.inv(rows[rank][col])
        rows[rank] = [field.mul(inv, x) for x in rows[rank]]
        for i in range(len(rows)):
            if i != rank and not field.is_zero(rows[i][col]):
                f = rows[i][col]
                rows[i] = [field.sub(x, field.mul(f, y))
                           for x, y in zip(rows[i], rows[rank])]
        pivots.append(col)
        rank += 1
    return rows[:rank], pivots


def rank(columns, field):
    """Rank of a matrix given as a list of columns."""
    if not columns:
        return 0
    return len(row_reduce(columns, field)[0])


def kernel_basis(columns, ncols, field):
    """Basis of { x : sum_j x_j * columns[j] = 0 }.

    `columns` is a list of `ncols` columns (possibly empty, in which case
    the row count is taken as zero and the kernel is everything).
    The result is row reduced: each basis vector starts with a 1 in a
    pivot position that no other basis vector uses.
    """
    if ncols == 0:
        return []
    nrows = len(columns[0]) if columns else 0
    if nrows == 0:
        basis = []
        for j in range(ncols):
            v = [field.zero] * ncols
            v[j] = field.one
            basis.append(v)
        return basis
    rows = [[columns[j][i] for j in range(ncols)] for i in range(nrows)]
    rref, pivots = row_reduce(rows, field)
    pivot_set = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivot_set:
            continue
        v = [field.zero] * ncols
        v[j] = field.one
        for r, c in enumerate(pivots):
            v[c] = field.neg(rref[r][j])
        basis.append(v)
    if not basis:
        return []
    reduced, _ = row_reduce(basis, field)
    return reduced


def express_in_echelon(vec, ech_rows, pivots, field):
    """Coefficients of `vec` in a row-reduced basis; None if not in the span."""
    coeffs = []
    residue = list(vec)
    for row, piv in zip(ech_rows, pivots):
        c = residue[piv]
        coeffs.append(c)
        if not field.is_zero(c):
            residue = [field.sub(x, field.mul(c, y))
                       for x, y in zip(residue, row)]
    if any(not field.is_zero(x) for x in residue):
        return None
    return coeffs


# --- column-matrix helpers ------------------------------------------------

def zero_matrix(nrows, ncols, field):
    return [[field.zero] * nrows for _ in range(ncols)]

def identity_matrix(n, field):
    cols = zero_matrix(n, n, field)
    for j in range(n):
        cols[j][j] = field.one
    return cols

def mat_vec(cols, x, field, nrows=None):
    if nrows is None:
        nrows = len(cols[0]) if cols else 0
    out = [field.zero] * nrows
    for j, c in enumerate(x):
        if field.is_zero(c):
            continue
        col = cols[j]
        for i in range(nrows):
            if not field.is_zero(col[i]):
                out[i] = field.add(out[i], field.mul(c, col[i]))
    return out

def mat_mul(a_cols, b_cols, field, nrows=None):
    if nrows is None:
        nrows = len(a_cols[0]) if a_cols else 0
    return [mat_vec(a_cols, b, field, nrows) for b in b_cols]

def mat_add(a_cols, b_cols, field):
    return [[field.add(x, y) for x, y in zip(ca, cb)]
            for ca, cb in zip(a_cols, b_cols)]

def mat_sub(a_cols, b_cols, field):
    return [[field.sub(x, y) for x, y in zip(ca, cb)]
            for ca, cb in zip(a_cols, b_cols)]

def mat_eq(a_cols, b_cols, field):
    if len(a_cols) != len(b_cols):
        return False
    for ca, cb in zip(a_cols, b_cols):
        if len(ca) != len(cb):
            return False
        if any(not field.is_zero(field.sub(x, y)) for x, y in zip(ca, cb)):
            return False
    return True

def is_zero_matrix(cols, field):
    return all(field.is_zero(x) for c in cols for x in c)
