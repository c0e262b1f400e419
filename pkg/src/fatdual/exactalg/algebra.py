"""
Finite-dimensional algebras given by structure constants.

SCAlgebra is the carrier for every algebra fatdual manipulates: path algebras
of quivers, endomorphism algebras of bimodule elements, their corners and
quotients. BasicAlgebra adds a chosen complete set of vertex idempotents and a
basis that is homogeneous for the corresponding Peirce decomposition.
"""

import random
from collections.abc import Sequence
from functools import cached_property
from typing import Any

from pydantic import BaseModel, ConfigDict, model_validator
from sympy import Poly, Symbol

from . import linalg
from .field import ExactAlgebraError, GroundField
from .linalg import Frame, Rows, Subspace, Vector

# Up to this dimension associativity is checked on all basis triples; above it
# on random triples (a failure on random elements is conclusive, success holds
# with overwhelming probability over the large fields used there).
EXHAUSTIVE_CHECK_DIM = 12
RANDOM_CHECK_SAMPLES = 6

POLY_VARIABLE = Symbol("t")


class SCAlgebra(BaseModel):
    """
    A unital associative algebra with basis b_0..b_{n-1}.

    `table[i][j]` holds the coordinates of b_i * b_j; `unit` the coordinates of
    the identity. The constructor validates the unit laws and associativity.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    field: GroundField
    dim: int
    table: list[list[list[Any]]]
    unit: list[Any]
    labels: list[str] | None = None

    @model_validator(mode="after")
    def _check_axioms(self) -> "SCAlgebra":
        n = self.dim
        if len(self.table) != n or any(len(row) != n for row in self.table):
            raise ValueError(f"structure table must be {n}x{n}")
        if any(len(v) != n for row in self.table for v in row):
            raise ValueError(f"structure constants must have length {n}")
        if len(self.unit) != n:
            raise ValueError(f"unit must have length {n}")
        if self.labels is not None and len(self.labels) != n:
            raise ValueError("one label per basis element is required")
        for j in range(n):
            b = self.basis_vector(j)
            if self.mul(self.unit, b) != b or self.mul(b, self.unit) != b:
                raise ValueError(f"unit law fails on basis element {j}")
        if n <= EXHAUSTIVE_CHECK_DIM:
            basis = [self.basis_vector(i) for i in range(n)]
            products = [[self.mul(x, y) for y in basis] for x in basis]
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        if self.mul(products[i][j], basis[k]) != self.mul(basis[i], products[j][k]):
                            raise ValueError(f"associativity fails on basis triple ({i}, {j}, {k})")
        else:
            rng = random.Random(n)
            for _ in range(RANDOM_CHECK_SAMPLES):
                x, y, z = (self.random_element(rng) for _ in range(3))
                if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                    raise ValueError("associativity fails on a random triple")
        return self

    @cached_property
    def _sparse(self) -> list[list[list[tuple[int, Any]]]]:
        return [[[(k, c) for k, c in enumerate(v) if c] for v in row] for row in self.table]

    @property
    def zero(self) -> Vector:
        return [self.field.zero] * self.dim

    def basis_vector(self, i: int) -> Vector:
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return v

    def mul(self, x: Sequence[Any], y: Sequence[Any]) -> Vector:
        out = [self.field.zero] * self.dim
        sparse = self._sparse
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in enumerate(x):
            if not a:
                continue
            row = sparse[i]
            for j, b in ys:
                ab = a * b
                for k, c in row[j]:
                    out[k] += ab * c
        return out

    def basis_product(self, i: int, j: int) -> list[tuple[int, Any]]:
        """Nonzero (index, coefficient) pairs of b_i * b_j."""
        return self._sparse[i][j]

    def product(self, *factors: Sequence[Any]) -> Vector:
        result = list(self.unit)
        for f in factors:
            result = self.mul(result, f)
        return result

    def left_matrix(self, x: Sequence[Any]) -> Rows:
        """Matrix of y -> x*y (column j is x*b_j)."""
        columns = [self.mul(x, self.basis_vector(j)) for j in range(self.dim)]
        return linalg.transpose(columns, self.dim)

    def right_matrix(self, x: Sequence[Any]) -> Rows:
        """Matrix of y -> y*x."""
        columns = [self.mul(self.basis_vector(j), x) for j in range(self.dim)]
        return linalg.transpose(columns, self.dim)

    def trace(self, x: Sequence[Any]) -> Any:
        """Trace of left multiplication by x."""
        total = self.field.zero
        for j in range(self.dim):
            total += self.mul(x, self.basis_vector(j))[j]
        return total

    def is_commutative(self) -> bool:
        return all(
            self.table[i][j] == self.table[j][i] for i in range(self.dim) for j in range(i + 1, self.dim)
        )

    def random_element(self, rng: random.Random, within: Subspace | Frame | None = None) -> Vector:
        """Random element of the algebra (or of a subspace of it)."""
        if within is None:
            return [self.field.random_element(rng) for _ in range(self.dim)]
        basis = within.basis if isinstance(within, Subspace) else within.vectors
        coeffs = [self.field.random_element(rng) for _ in basis]
        return linalg.combine(coeffs, basis, self.dim, self.field)

    def span_products(self, left: Sequence[Sequence[Any]], right: Sequence[Sequence[Any]]) -> Subspace:
        """Span of all products l*r."""
        vectors = [self.mul(a, b) for a in left for b in right]
        return Subspace.span(vectors, self.dim, self.field)

    def subalgebra(self, vectors: Sequence[Sequence[Any]], unit: Sequence[Any], labels: list[str] | None = None) -> "SCAlgebra":
        """
        The algebra structure on span(vectors), which must be closed under
        multiplication and contain `unit` as its identity.

        Raises:
            ExactAlgebraError: If the span is not closed under multiplication
        """
        frame = Frame.of(vectors, self.dim, self.field)
        return self._on_frame(frame, unit, labels)

    def _on_frame(self, frame: Frame, unit: Sequence[Any], labels: list[str] | None = None) -> "SCAlgebra":
        table: list[list[list[Any]]] = []
        for u in frame.vectors:
            row = []
            for v in frame.vectors:
                p = self.mul(u, v)
                if not frame.contains(p):
                    raise ExactAlgebraError("subspace is not closed under multiplication")
                row.append(frame.coords(p))
            table.append(row)
        if not frame.contains(unit):
            raise ExactAlgebraError("unit does not lie in the subspace")
        return SCAlgebra(field=self.field, dim=frame.dim, table=table, unit=frame.coords(unit), labels=labels)

    def corner(self, e: Sequence[Any]) -> tuple["SCAlgebra", Frame]:
        """
        The corner algebra eAe with identity e, and its embedding frame in A.
        """
        images = [self.product(e, self.basis_vector(i), e) for i in range(self.dim)]
        echelon = Subspace.span(images, self.dim, self.field)
        frame = Frame.of(echelon.basis, self.dim, self.field)
        return self._on_frame(frame, e), frame

    def quotient(self, ideal: Subspace) -> tuple["SCAlgebra", list[int]]:
        """
        A/I for a two-sided ideal I; the quotient basis is the image of the
        standard basis vectors at the returned complement columns.
        """
        columns = ideal.complement_columns()
        table = []
        for a in columns:
            row = []
            for b in columns:
                p = ideal.residue(self.table[a][b])
                row.append([p[c] for c in columns])
            table.append(row)
        unit = ideal.residue(self.unit)
        return (
            SCAlgebra(field=self.field, dim=len(columns), table=table, unit=[unit[c] for c in columns]),
            columns,
        )

    def center(self) -> Subspace:
        """The centre {z : z b_i = b_i z for all i}."""
        n = self.dim
        dod: dict[int, dict[int, Any]] = {}
        for k in range(n):
            for i in range(n):
                diff = linalg.sub(self.table[k][i], self.table[i][k])
                for r, x in enumerate(diff):
                    if x:
                        dod.setdefault(i * n + r, {})[k] = x
        return Subspace.kernel_of(linalg.sparse_matrix(dod, (n * n, n), self.field), self.field)

    def opposite(self) -> "SCAlgebra":
        table = [[list(self.table[j][i]) for j in range(self.dim)] for i in range(self.dim)]
        return SCAlgebra(field=self.field, dim=self.dim, table=table, unit=list(self.unit), labels=self.labels)

    def reduce_mod(self, field: GroundField) -> "SCAlgebra":
        """Reduce rational structure constants into a prime field."""
        if not field.is_prime_field or self.field.is_prime_field:
            raise ExactAlgebraError(f"cannot reduce an algebra over {self.field} into {field}")
        table = [[[field.convert(c) for c in v] for v in row] for row in self.table]
        return SCAlgebra(
            field=field, dim=self.dim, table=table, unit=[field.convert(c) for c in self.unit], labels=self.labels
        )

    # ---- polynomials in one element ----

    def minimal_polynomial(self, x: Sequence[Any], unit: Sequence[Any] | None = None) -> Poly:
        """
        Minimal polynomial of x inside the (sub)algebra whose identity is `unit`.

        Computed from the first linear dependency among unit, x, x^2, ...
        """
        one = list(self.unit) if unit is None else list(unit)
        powers = [one]
        while True:
            nxt = self.mul(x, powers[-1])
            k = len(powers)
            system = linalg.matrix(linalg.transpose(powers, self.dim), k, self.field)
            coeffs = linalg.solve(system, nxt)
            if coeffs is not None:
                monic = [-c for c in coeffs] + [self.field.one]
                return Poly.from_list(list(reversed(monic)), POLY_VARIABLE, domain=self.field.domain)
            if k > self.dim:
                raise ExactAlgebraError("powers of an element failed to become dependent")
            powers.append(nxt)

    def evaluate(self, poly: Poly, x: Sequence[Any], unit: Sequence[Any] | None = None) -> Vector:
        """poly(x) by Horner's rule, with `unit` standing for 1."""
        one = list(self.unit) if unit is None else list(unit)
        result = self.zero
        for c in poly.rep.to_list():
            result = self.mul(result, x)
            if c:
                result = linalg.add(result, linalg.scale(c, one))
        return result


class BasicAlgebra(SCAlgebra):
    """
    An algebra with a complete set of orthogonal vertex idempotents f_0..f_{r-1}
    that are themselves basis elements, and a basis homogeneous for the Peirce
    decomposition: basis element i lies in f_{peirce[i][0]} A f_{peirce[i][1]}.

    For a path algebra, f_t A f_s is spanned by the paths from s to t.
    """

    vertex_count: int
    idempotents: list[int]
    peirce: list[tuple[int, int]]

    @model_validator(mode="after")
    def _check_peirce(self) -> "BasicAlgebra":
        if len(self.idempotents) != self.vertex_count:
            raise ValueError("one idempotent per vertex is required")
        if len(self.peirce) != self.dim:
            raise ValueError("one Peirce position per basis element is required")
        total = self.zero
        for v, idx in enumerate(self.idempotents):
            f = self.basis_vector(idx)
            if self.peirce[idx] != (v, v):
                raise ValueError(f"idempotent of vertex {v} is not in its diagonal Peirce piece")
            total = linalg.add(total, f)
        if total != list(self.unit):
            raise ValueError("vertex idempotents do not sum to the unit")
        for i, (r, c) in enumerate(self.peirce):
            b = self.basis_vector(i)
            if self.product(self.basis_vector(self.idempotents[r]), b, self.basis_vector(self.idempotents[c])) != b:
                raise ValueError(f"basis element {i} is not Peirce-homogeneous")
        return self

    def piece(self, row: int, col: int) -> list[int]:
        """Basis indices spanning f_row A f_col."""
        return [i for i, rc in enumerate(self.peirce) if rc == (row, col)]

    def piece_dim(self, row: int, col: int) -> int:
        return len(self.piece(row, col))

    def vertex_vector(self, v: int) -> Vector:
        return self.basis_vector(self.idempotents[v])

    def is_directed(self) -> bool:
        """
        True when every f_v A f_v is the field and the relation
        "f_u A f_v != 0" between distinct vertices has no cycles.
        """
        if any(self.piece_dim(v, v) != 1 for v in range(self.vertex_count)):
            return False
        succ = {v: {c for i, (r, c) in enumerate(self.peirce) if r == v and c != v} for v in range(self.vertex_count)}
        state: dict[int, int] = {}

        def visit(v: int) -> bool:
            state[v] = 1
            for u in succ[v]:
                if state.get(u) == 1 or (u not in state and not visit(u)):
                    return False
            state[v] = 2
            return True

        return all(visit(v) for v in range(self.vertex_count) if v not in state)

    def radical_is_zero(self) -> bool:
        """For a directed algebra the radical is the sum of the off-diagonal pieces."""
        return all(r == c for r, c in self.peirce)

    def restrict(self, vertices: Sequence[int]) -> "BasicAlgebra":
        """The corner fAf for f the sum of the given vertex idempotents, vertices renumbered in order."""
        keep_vertices = list(vertices)
        renumber = {v: i for i, v in enumerate(keep_vertices)}
        keep = [i for i, (r, c) in enumerate(self.peirce) if r in renumber and c in renumber]
        position = {old: new for new, old in enumerate(keep)}
        table = [[[self.table[a][b][k] for k in keep] for b in keep] for a in keep]
        unit = [self.field.zero] * len(keep)
        for v in keep_vertices:
            unit[position[self.idempotents[v]]] = self.field.one
        return BasicAlgebra(
            field=self.field,
            dim=len(keep),
            table=table,
            unit=unit,
            labels=[self.labels[i] for i in keep] if self.labels else None,
            vertex_count=len(keep_vertices),
            idempotents=[position[self.idempotents[v]] for v in keep_vertices],
            peirce=[(renumber[self.peirce[i][0]], renumber[self.peirce[i][1]]) for i in keep],
        )

    def opposite(self) -> "BasicAlgebra":
        base = super().opposite()
        return BasicAlgebra(
            field=self.field,
            dim=self.dim,
            table=base.table,
            unit=base.unit,
            labels=self.labels,
            vertex_count=self.vertex_count,
            idempotents=list(self.idempotents),
            peirce=[(c, r) for r, c in self.peirce],
        )

    def reduce_mod(self, field: GroundField) -> "BasicAlgebra":
        base = super().reduce_mod(field)
        return BasicAlgebra(
            field=field,
            dim=self.dim,
            table=base.table,
            unit=base.unit,
            labels=self.labels,
            vertex_count=self.vertex_count,
            idempotents=list(self.idempotents),
            peirce=list(self.peirce),
        )

    @classmethod
    def from_idempotents(
        cls, algebra: SCAlgebra, idempotents: Sequence[Sequence[Any]]
    ) -> tuple["BasicAlgebra", Frame]:
        """
        The algebra fAf (f the sum of the given orthogonal idempotents) with a
        Peirce-homogeneous basis that starts each diagonal piece with its
        idempotent. Returns the algebra and its embedding frame in A.

        Raises:
            ExactAlgebraError: If the idempotents are not orthogonal idempotents
        """
        field = algebra.field
        es = [list(e) for e in idempotents]
        for i, e in enumerate(es):
            for j, f in enumerate(es):
                expected = e if i == j else algebra.zero
                if algebra.mul(e, f) != expected:
                    raise ExactAlgebraError("idempotents are not orthogonal idempotents")
        vectors: list[list[Any]] = []
        peirce: list[tuple[int, int]] = []
        positions: list[int] = [0] * len(es)
        basis = [algebra.basis_vector(k) for k in range(algebra.dim)]
        for r, e in enumerate(es):
            for c, f in enumerate(es):
                piece = Subspace.span([algebra.product(e, b, f) for b in basis], algebra.dim, field)
                if r == c:
                    chosen = linalg.extend_to_basis([e], piece.basis, algebra.dim, field)
                    positions[r] = len(vectors)
                else:
                    chosen = piece.basis
                vectors.extend(chosen)
                peirce.extend([(r, c)] * len(chosen))
        frame = Frame.of(vectors, algebra.dim, field)
        unit = linalg.combine([field.one] * len(es), es, algebra.dim, field)
        base = algebra._on_frame(frame, unit)
        return (
            cls(
                field=field,
                dim=base.dim,
                table=base.table,
                unit=base.unit,
                vertex_count=len(es),
                idempotents=positions,
                peirce=peirce,
            ),
            frame,
        )
