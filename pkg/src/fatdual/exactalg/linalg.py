"""
Exact linear algebra helpers on top of sympy's DomainMatrix.

Vectors are plain lists of domain elements and matrices are lists of rows;
everything that needs elimination goes through DomainMatrix (sparse format
for the large constraint systems, dense for the small products). The helpers
take care of the degenerate shapes (no rows, no columns) that the sympy
kernels do not accept.
"""

from collections.abc import Iterable, Sequence
from typing import Any

from pydantic import BaseModel, ConfigDict
from sympy.polys.matrices import DomainMatrix

from .field import ExactAlgebraError, GroundField

Vector = list[Any]
Rows = list[list[Any]]


def sparse_matrix(dod: dict[int, dict[int, Any]], shape: tuple[int, int], field: GroundField) -> DomainMatrix:
    """Build a sparse DomainMatrix from a dict of row dicts, dropping explicit zeros."""
    clean = {i: {j: v for j, v in row.items() if v} for i, row in dod.items()}
    clean = {i: row for i, row in clean.items() if row}
    return DomainMatrix.from_dod(clean, shape, field.domain)


def matrix(rows: Sequence[Sequence[Any]], ncols: int, field: GroundField) -> DomainMatrix:
    """Build a sparse DomainMatrix from dense rows."""
    dod = {i: {j: v for j, v in enumerate(row) if v} for i, row in enumerate(rows)}
    return sparse_matrix(dod, (len(rows), ncols), field)


def to_rows(m: DomainMatrix) -> Rows:
    nrows, ncols = m.shape
    if nrows == 0:
        return []
    if ncols == 0:
        return [[] for _ in range(nrows)]
    return [list(r) for r in m.to_dense().to_list()]


def rref(m: DomainMatrix) -> tuple[DomainMatrix, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns, tolerating empty shapes."""
    nrows, ncols = m.shape
    if nrows == 0 or ncols == 0 or m.is_zero_matrix:
        return m, ()
    reduced, pivots = m.rref()
    return reduced, tuple(pivots)


def kernel(m: DomainMatrix) -> Rows:
    """
    Basis of {x : m x = 0}, one basis vector per row.

    Each basis vector has a 1 in its own free column and 0 in every other free
    column, so coordinates of a kernel element can be read off at the free
    columns.
    """
    nrows, ncols = m.shape
    K = m.domain
    if ncols == 0:
        return []
    reduced, pivots = rref(m)
    if not pivots:
        return [[K.one if i == j else K.zero for j in range(ncols)] for i in range(ncols)]
    if len(pivots) == ncols:
        return []
    return to_rows(reduced.nullspace_from_rref(list(pivots)))


def rank(m: DomainMatrix) -> int:
    return len(rref(m)[1])


def rank_of_rows(rows: Sequence[Sequence[Any]], ncols: int, field: GroundField) -> int:
    if not rows or ncols == 0:
        return 0
    return rank(matrix(rows, ncols, field))


def solve(m: DomainMatrix, rhs: Sequence[Any]) -> Vector | None:
    """
    One solution x of m x = rhs, or None when the system is inconsistent.

    Free variables are set to zero.
    """
    nrows, ncols = m.shape
    K = m.domain
    if nrows == 0:
        return [K.zero] * ncols
    column = DomainMatrix.from_dod(
        {i: {0: v} for i, v in enumerate(rhs) if v}, (nrows, 1), K
    )
    augmented = m.hstack(column) if ncols else column
    reduced, pivots = rref(augmented)
    if ncols in pivots:
        return None
    x = [K.zero] * ncols
    dense = to_rows(reduced)
    for row_index, col in enumerate(pivots):
        x[col] = dense[row_index][ncols]
    return x


def mat_mul(a: Rows, b: Rows, field: GroundField, inner: int | None = None, ncols: int | None = None) -> Rows:
    """
    Product of two row-lists. `inner` is needed when `a` has no rows and
    `ncols` when `b` has no rows.
    """
    k = inner if inner is not None else (len(a[0]) if a else len(b))
    n = ncols if ncols is not None else (len(b[0]) if b else 0)
    if not a or n == 0 or k == 0:
        return [[field.zero] * n for _ in range(len(a))]
    product = matrix(a, k, field) * matrix(b, n, field)
    return to_rows(product)


def inverse(a: Rows, field: GroundField) -> Rows:
    """
    Inverse of a square matrix.

    Raises:
        ExactAlgebraError: If the matrix is singular
    """
    n = len(a)
    if n == 0:
        return []
    dense = DomainMatrix([list(r) for r in a], (n, n), field.domain)
    if dense.rank() != n:
        raise ExactAlgebraError("matrix is singular")
    return to_rows(dense.inv())


def determinant(a: Rows, field: GroundField) -> Any:
    n = len(a)
    if n == 0:
        return field.one
    return DomainMatrix([list(r) for r in a], (n, n), field.domain).det()


def identity(n: int, field: GroundField) -> Rows:
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def zeros(nrows: int, ncols: int, field: GroundField) -> Rows:
    return [[field.zero] * ncols for _ in range(nrows)]


def transpose(a: Rows, ncols: int) -> Rows:
    return [[row[j] for row in a] for j in range(ncols)]


def flatten(a: Rows) -> Vector:
    return [x for row in a for x in row]


def reshape(v: Sequence[Any], nrows: int, ncols: int) -> Rows:
    return [list(v[i * ncols : (i + 1) * ncols]) for i in range(nrows)]


def add(u: Sequence[Any], v: Sequence[Any]) -> Vector:
    return [a + b for a, b in zip(u, v, strict=True)]


def sub(u: Sequence[Any], v: Sequence[Any]) -> Vector:
    return [a - b for a, b in zip(u, v, strict=True)]


def scale(c: Any, v: Sequence[Any]) -> Vector:
    return [c * a for a in v]


def combine(coefficients: Iterable[Any], vectors: Sequence[Sequence[Any]], length: int, field: GroundField) -> Vector:
    """Linear combination sum_i c_i v_i."""
    out = [field.zero] * length
    for c, vec in zip(coefficients, vectors, strict=False):
        if not c:
            continue
        for i, x in enumerate(vec):
            if x:
                out[i] += c * x
    return out


def is_zero(v: Iterable[Any]) -> bool:
    return not any(v)


def matrix_is_zero(a: Rows) -> bool:
    return not any(x for row in a for x in row)


def block_diagonal(blocks: Sequence[tuple[Rows, int, int]], field: GroundField) -> Rows:
    """Assemble (rows, nrows, ncols) blocks along the diagonal."""
    total_cols = sum(c for _, _, c in blocks)
    out: Rows = []
    offset = 0
    for rows, nrows, ncols in blocks:
        for i in range(nrows):
            line = [field.zero] * total_cols
            line[offset : offset + ncols] = rows[i]
            out.append(line)
        offset += ncols
    return out


class Subspace(BaseModel):
    """
    A subspace of field^ambient held in reduced row echelon form.

    `basis[r]` has a 1 at column `pivots[r]` and zeros at the other pivot
    columns, so the coordinates of a member vector v are [v[p] for p in pivots].
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    field: GroundField
    ambient: int
    basis: list[list[Any]]
    pivots: list[int]

    @classmethod
    def span(cls, vectors: Sequence[Sequence[Any]], ambient: int, field: GroundField) -> "Subspace":
        """Echelon basis of the span of `vectors`."""
        if not vectors or ambient == 0:
            return cls(field=field, ambient=ambient, basis=[], pivots=[])
        reduced, pivots = rref(matrix(vectors, ambient, field))
        rows = to_rows(reduced)[: len(pivots)]
        return cls(field=field, ambient=ambient, basis=rows, pivots=list(pivots))

    @classmethod
    def kernel_of(cls, m: DomainMatrix, field: GroundField) -> "Subspace":
        return cls.span(kernel(m), m.shape[1], field)

    @classmethod
    def whole(cls, ambient: int, field: GroundField) -> "Subspace":
        return cls(field=field, ambient=ambient, basis=identity(ambient, field), pivots=list(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def coords(self, v: Sequence[Any]) -> Vector:
        """Coordinates of a member vector (not checked; see `contains`)."""
        return [v[p] for p in self.pivots]

    def vector(self, coords: Sequence[Any]) -> Vector:
        return combine(coords, self.basis, self.ambient, self.field)

    def residue(self, v: Sequence[Any]) -> Vector:
        """v minus its echelon projection; zero exactly when v lies in the subspace."""
        return sub(v, self.vector(self.coords(v)))

    def contains(self, v: Sequence[Any]) -> bool:
        return is_zero(self.residue(v))

    def complement_columns(self) -> list[int]:
        """Standard basis columns spanning a complement."""
        taken = set(self.pivots)
        return [j for j in range(self.ambient) if j not in taken]

    def sum(self, other: "Subspace") -> "Subspace":
        return Subspace.span(self.basis + other.basis, self.ambient, self.field)

    def intersection(self, other: "Subspace") -> "Subspace":
        """Intersection via the kernel of [self | -other]."""
        if self.dim == 0 or other.dim == 0:
            return Subspace(field=self.field, ambient=self.ambient, basis=[], pivots=[])
        cols = self.dim + other.dim
        dod: dict[int, dict[int, Any]] = {}
        for r, vec in enumerate(self.basis):
            for i, x in enumerate(vec):
                if x:
                    dod.setdefault(i, {})[r] = x
        for r, vec in enumerate(other.basis):
            for i, x in enumerate(vec):
                if x:
                    dod.setdefault(i, {})[self.dim + r] = -x
        null = kernel(sparse_matrix(dod, (self.ambient, cols), self.field))
        vectors = [self.vector(sol[: self.dim]) for sol in null]
        return Subspace.span(vectors, self.ambient, self.field)


class Frame(BaseModel):
    """
    An ordered basis of a subspace, with coordinates available for any member.

    Unlike `Subspace`, the basis vectors are kept exactly as given, which lets
    callers insist that particular vectors (idempotents, the unit) are basis
    elements.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    field: GroundField
    ambient: int
    vectors: list[list[Any]]
    echelon: Subspace
    change: list[list[Any]]

    @classmethod
    def of(cls, vectors: Sequence[Sequence[Any]], ambient: int, field: GroundField) -> "Frame":
        """
        Raises:
            ExactAlgebraError: If the vectors are linearly dependent
        """
        vecs = [list(v) for v in vectors]
        echelon = Subspace.span(vecs, ambient, field)
        if echelon.dim != len(vecs):
            raise ExactAlgebraError("frame vectors are linearly dependent")
        local = [echelon.coords(v) for v in vecs]
        change = inverse(local, field) if vecs else []
        return cls(field=field, ambient=ambient, vectors=vecs, echelon=echelon, change=change)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def contains(self, v: Sequence[Any]) -> bool:
        return self.echelon.contains(v)

    def coords(self, v: Sequence[Any]) -> Vector:
        """Coordinates of a member vector with respect to `vectors`."""
        local = self.echelon.coords(v)
        return combine(local, self.change, self.dim, self.field)

    def vector(self, coords: Sequence[Any]) -> Vector:
        return combine(coords, self.vectors, self.ambient, self.field)


def extend_to_basis(start: Sequence[Sequence[Any]], candidates: Sequence[Sequence[Any]], ambient: int, field: GroundField) -> Rows:
    """Greedily extend independent `start` vectors by candidates that raise the rank."""
    chosen = [list(v) for v in start]
    current = Subspace.span(chosen, ambient, field)
    for cand in candidates:
        if not current.contains(cand):
            chosen.append(list(cand))
            current = Subspace.span(chosen, ambient, field)
    return chosen
