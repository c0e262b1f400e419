"""
Elements of bimodules over triangular algebras.

A TriangularAlgebra is a directed basic algebra B with a sink vertex v:
f_v B f_v is the field and f_u B f_v = 0 for u != v, so that B = A1[W]A2 with
A1 = f_v B f_v, A2 = (1 - f_v) B (1 - f_v) and W = f_v B (1 - f_v).

For multiplicities c on the A2 vertices, P2 is the projective A2-module
sum_j A2 f_j (x) k^{c_j} and P1 = k^{p1}. An element w is a linear map
W (x)_{A2} P2 -> P1, stored as a p1 x D matrix whose columns are indexed by
(j, basis element of f_v B f_j, copy). A morphism w -> w' is a pair
(alpha1, alpha2) with alpha1 a p1' x p1 matrix and alpha2 = sum_b b (x) M_b,
b in f_j A2 f_l acting on P2 by right multiplication, such that
alpha1 w = w' (1 (x) alpha2).
"""

import logging
import random
from collections.abc import Sequence
from functools import cached_property
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import FatDualError, InternalConsistencyError
from .exactalg import (
    BasicAlgebra,
    GroundField,
    SCAlgebra,
    SCModule,
    SplittingFailed,
    algebra_of_matrices,
    primitive_idempotents,
)
from .exactalg import linalg
from .exactalg.linalg import Frame, Rows, Subspace
from .exactalg.modules import ISOMORPHISM_ATTEMPTS
from .forms import bimodule_tits

logger = logging.getLogger(__name__)

# (A2 vertex j, basis index of B, copy)
TensorIndex = tuple[int, int, int]


class BimoduleError(FatDualError):
    """Exception raised for malformed triangular data, elements and morphisms."""

    pass


def find_sink(basic: BasicAlgebra) -> int | None:
    """Lowest vertex v with f_v B f_v the field and f_u B f_v = 0 for every u != v."""
    for v in range(basic.vertex_count):
        if basic.piece_dim(v, v) != 1:
            continue
        if all(basic.piece_dim(u, v) == 0 for u in range(basic.vertex_count) if u != v):
            return v
    return None


class TriangularAlgebra(BaseModel):
    """A directed basic algebra split at a sink vertex into A1[W]A2."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    basic: BasicAlgebra
    sink: int

    @model_validator(mode="after")
    def _check_sink(self) -> "TriangularAlgebra":
        B = self.basic
        if not 0 <= self.sink < B.vertex_count:
            raise ValueError(f"sink {self.sink} is not a vertex")
        if not B.is_directed():
            raise ValueError("triangular data needs a directed basic algebra")
        for u in range(B.vertex_count):
            if u != self.sink and B.piece_dim(u, self.sink):
                raise ValueError(f"vertex {self.sink} is not a sink: f_{u} B f_{self.sink} is not zero")
        return self

    @classmethod
    def from_basic(cls, basic: BasicAlgebra, sink: int | None = None) -> "TriangularAlgebra":
        """
        Split a directed basic algebra at `sink` (default: its lowest sink).

        Raises:
            BimoduleError: If the algebra is not directed or has no such sink
        """
        chosen = find_sink(basic) if sink is None else sink
        if chosen is None:
            raise BimoduleError("algebra has no sink vertex")
        try:
            return cls(basic=basic, sink=chosen)
        except ValidationError as e:
            raise BimoduleError(f"invalid triangular data: {e.errors()[0]['msg']}") from e

    @property
    def field(self) -> GroundField:
        return self.basic.field

    @cached_property
    def a2_vertices(self) -> list[int]:
        return [u for u in range(self.basic.vertex_count) if u != self.sink]

    def a1(self) -> BasicAlgebra:
        return self.basic.restrict([self.sink])

    def a2(self) -> BasicAlgebra:
        return self.basic.restrict(self.a2_vertices)

    @property
    def w_dim(self) -> int:
        return sum(self.basic.piece_dim(self.sink, j) for j in self.a2_vertices)

    def multiplicities(self, p2: Sequence[int]) -> dict[int, int]:
        if len(p2) != len(self.a2_vertices):
            raise BimoduleError(f"expected {len(self.a2_vertices)} A2 multiplicities, got {len(p2)}")
        return dict(zip(self.a2_vertices, p2, strict=True))

    def tensor_basis(self, p2: Sequence[int], rows: Sequence[int]) -> list[TensorIndex]:
        """
        Basis of sum_j X f_j (x) k^{c_j} where X is spanned by the B basis
        elements with Peirce row in `rows`: ordered by j, basis index, copy.
        """
        row_set = set(rows)
        out: list[TensorIndex] = []
        for j, c in self.multiplicities(p2).items():
            for i, (r, col) in enumerate(self.basic.peirce):
                if col == j and r in row_set:
                    out.extend((j, i, q) for q in range(c))
        return out

    def w_columns(self, p2: Sequence[int]) -> list[TensorIndex]:
        """Basis of W (x)_{A2} P2."""
        return self.tensor_basis(p2, [self.sink])

    def p2_basis(self, p2: Sequence[int]) -> list[TensorIndex]:
        return self.tensor_basis(p2, self.a2_vertices)

    def alpha2_layout(self, src_p2: Sequence[int], dst_p2: Sequence[int]) -> list[int]:
        """Basis elements b of f_j A2 f_l with c_j > 0 in the source and c_l > 0 in the target."""
        src, dst = self.multiplicities(src_p2), self.multiplicities(dst_p2)
        return [b for b, (j, l) in enumerate(self.basic.peirce) if src.get(j, 0) > 0 and dst.get(l, 0) > 0]

    def hom_p2_dim(self, src_p2: Sequence[int], dst_p2: Sequence[int]) -> int:
        """dim Hom_{A2}(P2, P2') = sum c_j c'_l dim f_j A2 f_l."""
        src, dst = self.multiplicities(src_p2), self.multiplicities(dst_p2)
        return sum(src[j] * dst[l] * self.basic.piece_dim(j, l) for j in src for l in dst)

    def dim_end_p2(self, p2: Sequence[int]) -> int:
        return self.hom_p2_dim(p2, p2)

    def tensor_map(self, alpha2: dict[int, Rows], src_p2: Sequence[int], dst_p2: Sequence[int], rows: Sequence[int]) -> Rows:
        """Matrix of x (x) e_q -> sum_b x b (x) M_b e_q between tensor bases."""
        B, field = self.basic, self.field
        src = self.tensor_basis(src_p2, rows)
        dst = self.tensor_basis(dst_p2, rows)
        index = {t: n for n, t in enumerate(dst)}
        dst_mult = self.multiplicities(dst_p2)
        by_row: dict[int, list[int]] = {}
        for b in alpha2:
            by_row.setdefault(B.peirce[b][0], []).append(b)
        out = linalg.zeros(len(dst), len(src), field)
        for col, (j, x, q) in enumerate(src):
            for b in by_row.get(j, []):
                l = B.peirce[b][1]
                mat = alpha2[b]
                for k, c in B.basis_product(x, b):
                    for p in range(dst_mult[l]):
                        v = mat[p][q]
                        if v:
                            out[index[(l, k, p)]][col] += c * v
        return out

    def left_act(self, y: int, u: Sequence[Any], p2: Sequence[int]) -> list[Any]:
        """Basis element y of A2 acting on a vector of P2."""
        basis = self.p2_basis(p2)
        index = {t: n for n, t in enumerate(basis)}
        out = [self.field.zero] * len(basis)
        for pos, (l, a, q) in enumerate(basis):
            val = u[pos]
            if not val:
                continue
            for k, c in self.basic.basis_product(y, a):
                out[index[(l, k, q)]] += c * val
        return out

    def reduce_mod(self, field: GroundField) -> "TriangularAlgebra":
        return TriangularAlgebra(basic=self.basic.reduce_mod(field), sink=self.sink)


class BimoduleElement(BaseModel):
    """
    An element w: W (x) P2 -> P1 with P1 = k^p1 and P2 given by one
    multiplicity per A2 vertex.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    algebra: TriangularAlgebra
    p1: int = Field(ge=0)
    p2: list[int]
    data: list[list[Any]]

    @model_validator(mode="after")
    def _check_shape(self) -> "BimoduleElement":
        if len(self.p2) != len(self.algebra.a2_vertices):
            raise ValueError(f"expected {len(self.algebra.a2_vertices)} A2 multiplicities")
        if any(c < 0 for c in self.p2):
            raise ValueError("multiplicities must be non-negative")
        width = len(self.algebra.w_columns(self.p2))
        if len(self.data) != self.p1 or any(len(row) != width for row in self.data):
            raise ValueError(f"element matrix must be {self.p1}x{width}")
        return self

    @property
    def field(self) -> GroundField:
        return self.algebra.field

    @cached_property
    def columns(self) -> list[TensorIndex]:
        return self.algebra.w_columns(self.p2)

    @cached_property
    def column_index(self) -> dict[TensorIndex, int]:
        return {t: n for n, t in enumerate(self.columns)}

    @property
    def width(self) -> int:
        return len(self.columns)

    @property
    def shape(self) -> tuple[int, tuple[int, ...]]:
        return self.p1, tuple(self.p2)

    @property
    def multiplicities(self) -> list[int]:
        """Projective multiplicities per vertex of B."""
        out = [0] * self.algebra.basic.vertex_count
        out[self.algebra.sink] = self.p1
        for j, c in zip(self.algebra.a2_vertices, self.p2, strict=True):
            out[j] = c
        return out

    def dim_vector(self) -> list[int]:
        """Dimension vector of the module M(w)."""
        B = self.algebra.basic
        mult = self.algebra.multiplicities(self.p2)
        out = [0] * B.vertex_count
        out[self.algebra.sink] = self.p1
        for x in self.algebra.a2_vertices:
            out[x] = sum(c * B.piece_dim(x, l) for l, c in mult.items())
        return out

    def module_dim(self) -> int:
        return sum(self.dim_vector())

    def is_zero(self) -> bool:
        return linalg.matrix_is_zero(self.data)

    def is_empty(self) -> bool:
        return self.p1 == 0 and not any(self.p2)

    def reduce_mod(self, field: GroundField) -> "BimoduleElement":
        algebra = self.algebra.reduce_mod(field)
        data = [[field.convert(x) for x in row] for row in self.data]
        return BimoduleElement(algebra=algebra, p1=self.p1, p2=list(self.p2), data=data)

    def format_rows(self) -> list[list[str]]:
        return [[self.field.format(x) for x in row] for row in self.data]


class Morphism(BaseModel):
    """A pair (alpha1, alpha2) between two elements; alpha2 maps b to M_b."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    source: BimoduleElement
    target: BimoduleElement
    alpha1: list[list[Any]]
    alpha2: dict[int, list[list[Any]]]

    @model_validator(mode="after")
    def _check_shape(self) -> "Morphism":
        s, t = self.source, self.target
        if len(self.alpha1) != t.p1 or any(len(row) != s.p1 for row in self.alpha1):
            raise ValueError(f"alpha1 must be {t.p1}x{s.p1}")
        B = s.algebra.basic
        src = s.algebra.multiplicities(s.p2)
        dst = t.algebra.multiplicities(t.p2)
        for b, mat in self.alpha2.items():
            j, l = B.peirce[b]
            if j not in src or l not in dst:
                raise ValueError(f"basis element {b} does not lie in A2")
            if len(mat) != dst[l] or any(len(row) != src[j] for row in mat):
                raise ValueError(f"component of basis element {b} must be {dst[l]}x{src[j]}")
        return self

    @property
    def field(self) -> GroundField:
        return self.source.field

    def induced(self) -> Rows:
        """Matrix of 1 (x) alpha2 on W (x) P2."""
        T = self.source.algebra
        return T.tensor_map(self.alpha2, self.source.p2, self.target.p2, [T.sink])

    def p2_matrix(self) -> Rows:
        T = self.source.algebra
        return T.tensor_map(self.alpha2, self.source.p2, self.target.p2, T.a2_vertices)

    def module_matrix(self) -> Rows:
        """The module map M(source) -> M(target)."""
        s, t = self.source, self.target
        n_src = len(s.algebra.p2_basis(s.p2))
        n_dst = len(t.algebra.p2_basis(t.p2))
        return linalg.block_diagonal(
            [(self.alpha1, t.p1, s.p1), (self.p2_matrix(), n_dst, n_src)],
            self.field,
        )

    def is_morphism(self) -> bool:
        s, t = self.source, self.target
        lhs = linalg.mat_mul(self.alpha1, s.data, self.field, s.p1, s.width)
        rhs = linalg.mat_mul(t.data, self.induced(), self.field, t.width, s.width)
        return lhs == rhs

    @classmethod
    def from_module_matrix(cls, source: BimoduleElement, target: BimoduleElement, X: Rows) -> "Morphism":
        """Read (alpha1, alpha2) off a module map M(source) -> M(target)."""
        T = source.algebra
        B = T.basic
        alpha1 = [list(X[r][: source.p1]) for r in range(target.p1)]
        src_basis = {t: n for n, t in enumerate(T.p2_basis(source.p2))}
        dst_basis = {t: n for n, t in enumerate(T.p2_basis(target.p2))}
        src = T.multiplicities(source.p2)
        dst = T.multiplicities(target.p2)
        alpha2: dict[int, Rows] = {}
        for b in T.alpha2_layout(source.p2, target.p2):
            j, l = B.peirce[b]
            mat = linalg.zeros(dst[l], src[j], source.field)
            for q in range(src[j]):
                col = source.p1 + src_basis[(j, B.idempotents[j], q)]
                for p in range(dst[l]):
                    mat[p][q] = X[target.p1 + dst_basis[(l, b, p)]][col]
            alpha2[b] = mat
        return cls(source=source, target=target, alpha1=alpha1, alpha2=alpha2)


class StandardResolution(BaseModel):
    """0 -> (W (x) P2, 0, 0) -> (P1, 0, 0) + (W (x) P2, 1, P2) -> M(w) -> 0."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    element: BimoduleElement
    kernel: BimoduleElement
    cover: BimoduleElement
    inclusion: Morphism
    projection: Morphism

    def is_exact(self) -> bool:
        """Both maps are morphisms, the inclusion is injective, the projection surjective, and they compose to zero."""
        if not (self.inclusion.is_morphism() and self.projection.is_morphism()):
            return False
        field = self.element.field
        inc = self.inclusion.module_matrix()
        proj = self.projection.module_matrix()
        k, c, m = self.kernel.module_dim(), self.cover.module_dim(), self.element.module_dim()
        if c != k + m:
            return False
        if linalg.rank_of_rows(inc, k, field) != k or linalg.rank_of_rows(proj, c, field) != m:
            return False
        return linalg.matrix_is_zero(linalg.mat_mul(proj, inc, field, c, k))


class SplitResult(BaseModel):
    """Complementary summands of an element with the recorded change of basis."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    first: BimoduleElement
    second: BimoduleElement
    first_inclusion: Morphism
    first_projection: Morphism
    second_inclusion: Morphism
    second_projection: Morphism


class ElementSummand(BaseModel):
    """An indecomposable summand, its multiplicity and the degree of its End residue field."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    element: BimoduleElement
    multiplicity: int = Field(ge=1)
    degree: int = Field(default=1, ge=1)


# ---- construction ----


def zero_element(algebra: TriangularAlgebra, p1: int, p2: Sequence[int]) -> BimoduleElement:
    width = len(algebra.w_columns(p2))
    return BimoduleElement(algebra=algebra, p1=p1, p2=list(p2), data=linalg.zeros(p1, width, algebra.field))


def random_element(algebra: TriangularAlgebra, p1: int, p2: Sequence[int], rng: random.Random) -> BimoduleElement:
    """Entries uniform over GF(p), from an integer box over QQ."""
    field = algebra.field
    width = len(algebra.w_columns(p2))
    data = [[field.random_element(rng) for _ in range(width)] for _ in range(p1)]
    return BimoduleElement(algebra=algebra, p1=p1, p2=list(p2), data=data)


def transpose_data(w: BimoduleElement) -> Rows:
    """The element in the non-dual picture, as a D x p1 matrix P1* -> W (x) P2."""
    return linalg.transpose(w.data, w.width)


def from_transposed(algebra: TriangularAlgebra, p1: int, p2: Sequence[int], rows: Rows) -> BimoduleElement:
    return BimoduleElement(algebra=algebra, p1=p1, p2=list(p2), data=linalg.transpose(rows, p1))


def _same_algebra(w: BimoduleElement, w2: BimoduleElement) -> None:
    if w.algebra is not w2.algebra and w.algebra != w2.algebra:
        raise BimoduleError("elements over different triangular algebras")


def zero_morphism(source: BimoduleElement, target: BimoduleElement) -> Morphism:
    T, field = source.algebra, source.field
    src, dst = T.multiplicities(source.p2), T.multiplicities(target.p2)
    alpha2 = {}
    for b in T.alpha2_layout(source.p2, target.p2):
        j, l = T.basic.peirce[b]
        alpha2[b] = linalg.zeros(dst[l], src[j], field)
    return Morphism(source=source, target=target, alpha1=linalg.zeros(target.p1, source.p1, field), alpha2=alpha2)


def identity(w: BimoduleElement) -> Morphism:
    zero = zero_morphism(w, w)
    B = w.algebra.basic
    alpha2 = dict(zero.alpha2)
    for j, c in w.algebra.multiplicities(w.p2).items():
        if c:
            alpha2[B.idempotents[j]] = linalg.identity(c, w.field)
    return Morphism(source=w, target=w, alpha1=linalg.identity(w.p1, w.field), alpha2=alpha2)


def combine_morphisms(
    coefficients: Sequence[Any], morphisms: Sequence[Morphism], source: BimoduleElement, target: BimoduleElement
) -> Morphism:
    """sum_i c_i m_i for morphisms between the same pair of elements."""
    zero = zero_morphism(source, target)
    alpha1 = [list(row) for row in zero.alpha1]
    alpha2 = {b: [list(row) for row in mat] for b, mat in zero.alpha2.items()}
    for c, m in zip(coefficients, morphisms, strict=True):
        if not c:
            continue
        for r, row in enumerate(m.alpha1):
            for s, v in enumerate(row):
                if v:
                    alpha1[r][s] += c * v
        for b, mat in m.alpha2.items():
            for r, row in enumerate(mat):
                for s, v in enumerate(row):
                    if v:
                        alpha2[b][r][s] += c * v
    return Morphism(source=source, target=target, alpha1=alpha1, alpha2=alpha2)


def compose(psi: Morphism, phi: Morphism) -> Morphism:
    """
    psi o phi. The A2 component is sum b b' (x) N_b' M_b, phi's factor first.

    Raises:
        BimoduleError: If the middle shapes do not match
    """
    mid = phi.target
    if mid.shape != psi.source.shape:
        raise BimoduleError("morphisms are not composable")
    source, target = phi.source, psi.target
    T, field = source.algebra, source.field
    B = T.basic
    mid_mult = T.multiplicities(mid.p2)
    src_mult = T.multiplicities(source.p2)
    result = zero_morphism(source, target)
    alpha2 = {b: [list(row) for row in mat] for b, mat in result.alpha2.items()}
    by_row: dict[int, list[int]] = {}
    for b2 in psi.alpha2:
        by_row.setdefault(B.peirce[b2][0], []).append(b2)
    for b, m_b in phi.alpha2.items():
        j, l = B.peirce[b]
        for b2 in by_row.get(l, []):
            nm = linalg.mat_mul(psi.alpha2[b2], m_b, field, mid_mult[l], src_mult[j])
            if linalg.matrix_is_zero(nm):
                continue
            for k, c in B.basis_product(b, b2):
                target_mat = alpha2[k]
                for r, row in enumerate(nm):
                    for s, v in enumerate(row):
                        if v:
                            target_mat[r][s] += c * v
    alpha1 = linalg.mat_mul(psi.alpha1, phi.alpha1, field, mid.p1, source.p1)
    return Morphism(source=source, target=target, alpha1=alpha1, alpha2=alpha2)


# ---- Hom and Ext ----


def _hom_system(w: BimoduleElement, w2: BimoduleElement) -> tuple[Any, list[tuple[int, int]], int]:
    """
    The map L(alpha1, alpha2) = alpha1 w - w2 (1 (x) alpha2) as a sparse
    matrix, the alpha2 layout as (b, offset) pairs, and the unknown count.
    """
    _same_algebra(w, w2)
    T, field = w.algebra, w.field
    B = T.basic
    src, dst = T.multiplicities(w.p2), T.multiplicities(w2.p2)
    offset = w2.p1 * w.p1
    layout: list[tuple[int, int]] = []
    by_row: dict[int, list[tuple[int, int]]] = {}
    for b in T.alpha2_layout(w.p2, w2.p2):
        j, l = B.peirce[b]
        layout.append((b, offset))
        by_row.setdefault(j, []).append((b, offset))
        offset += dst[l] * src[j]
    width = w.width
    col2 = w2.column_index
    dod: dict[int, dict[int, Any]] = {}
    for p in range(w2.p1):
        for col, (j, x, q) in enumerate(w.columns):
            eq: dict[int, Any] = {}
            for r in range(w.p1):
                v = w.data[r][col]
                if v:
                    eq[p * w.p1 + r] = v
            for b, off in by_row.get(j, []):
                l = B.peirce[b][1]
                for k, c in B.basis_product(x, b):
                    for p2 in range(dst[l]):
                        v = w2.data[p][col2[(l, k, p2)]]
                        if v:
                            key = off + p2 * src[j] + q
                            eq[key] = eq.get(key, field.zero) - c * v
            if eq:
                dod[p * width + col] = eq
    system = linalg.sparse_matrix(dod, (w2.p1 * width, offset), field)
    return system, layout, offset


def _decode(w: BimoduleElement, w2: BimoduleElement, layout: list[tuple[int, int]], vector: Sequence[Any]) -> Morphism:
    T = w.algebra
    src, dst = T.multiplicities(w.p2), T.multiplicities(w2.p2)
    alpha1 = linalg.reshape(list(vector[: w2.p1 * w.p1]), w2.p1, w.p1)
    alpha2 = {}
    for b, off in layout:
        j, l = T.basic.peirce[b]
        size = dst[l] * src[j]
        alpha2[b] = linalg.reshape(list(vector[off : off + size]), dst[l], src[j])
    return Morphism(source=w, target=w2, alpha1=alpha1, alpha2=alpha2)


def hom_w(w: BimoduleElement, w2: BimoduleElement) -> list[Morphism]:
    """
    Basis of Hom_W(w, w2), the kernel of L.

    Raises:
        BimoduleError: If the elements live over different algebras
    """
    system, layout, unknowns = _hom_system(w, w2)
    if unknowns == 0:
        return []
    if system.shape[0] == 0:
        vectors = linalg.identity(unknowns, w.field)
    else:
        vectors = linalg.kernel(system)
    return [_decode(w, w2, layout, v) for v in vectors]


def ext_dims(w: BimoduleElement, w2: BimoduleElement) -> tuple[int, int]:
    """dim Hom_W(w, w2) and dim Ext^1(M(w), M(w2)) as kernel and cokernel of L."""
    system, _, unknowns = _hom_system(w, w2)
    equations = system.shape[0]
    rank = linalg.rank(system) if equations and unknowns else 0
    return unknowns - rank, equations - rank


def hom_dim(w: BimoduleElement, w2: BimoduleElement) -> int:
    return ext_dims(w, w2)[0]


def element_tits(w: BimoduleElement, w2: BimoduleElement) -> int:
    """Bimodule Tits form of the projective pairs underlying w and w2."""
    _same_algebra(w, w2)
    return bimodule_tits(w.p1 * w2.p1, w.algebra.hom_p2_dim(w.p2, w2.p2), w2.p1 * w.width)


def orbit_dim(w: BimoduleElement) -> int:
    """dim GL(P1) + dim Aut(P2) - dim End_W(w)."""
    return w.p1**2 + w.algebra.dim_end_p2(w.p2) - hom_dim(w, w)


# ---- modules and resolutions ----


def to_module(w: BimoduleElement) -> SCModule:
    """
    The B-module M(w) on P1 + P2: A2 acts on P2 by left multiplication, f_v
    is the identity on P1, and y in f_v B f_j sends a (x) e_q to w(y a (x) e_q).
    """
    T, field = w.algebra, w.field
    B = T.basic
    basis = T.p2_basis(w.p2)
    index = {t: n for n, t in enumerate(basis)}
    n = w.p1 + len(basis)
    col = w.column_index
    action = []
    for y in range(B.dim):
        mat = linalg.zeros(n, n, field)
        if B.peirce[y] == (T.sink, T.sink):
            for i in range(w.p1):
                mat[i][i] = field.one
        for pos, (l, a, q) in enumerate(basis):
            for k, c in B.basis_product(y, a):
                if B.peirce[k][0] == T.sink:
                    column = col[(l, k, q)]
                    for i in range(w.p1):
                        v = w.data[i][column]
                        if v:
                            mat[i][w.p1 + pos] += c * v
                else:
                    mat[w.p1 + index[(l, k, q)]][w.p1 + pos] += c
        action.append(mat)
    return SCModule(algebra=B, dim=n, action=action)


def standard_resolution(w: BimoduleElement) -> StandardResolution:
    """
    The two-term projective resolution of M(w). The cover is the element
    [0; I]: W (x) P2 -> P1 + W (x) P2, the inclusion has alpha1 = [-w; I] and
    the projection alpha1 = [I | w], both with the identity on P2.
    """
    T, field = w.algebra, w.field
    D = w.width
    zeros2 = [0] * len(w.p2)
    kernel = zero_element(T, D, zeros2)
    cover_data = linalg.zeros(w.p1, D, field) + linalg.identity(D, field)
    cover = BimoduleElement(algebra=T, p1=w.p1 + D, p2=list(w.p2), data=cover_data)
    inc_alpha1 = [[-x for x in row] for row in w.data] + linalg.identity(D, field)
    inclusion = Morphism(source=kernel, target=cover, alpha1=inc_alpha1, alpha2={})
    proj_alpha1 = [linalg.identity(w.p1, field)[i] + list(w.data[i]) for i in range(w.p1)]
    proj_alpha2 = identity(w).alpha2
    projection = Morphism(source=cover, target=w, alpha1=proj_alpha1, alpha2=proj_alpha2)
    return StandardResolution(element=w, kernel=kernel, cover=cover, inclusion=inclusion, projection=projection)


def ext_via_resolution(w: BimoduleElement, w2: BimoduleElement) -> int:
    """dim Ext^1(M(w), M(w2)) as the cokernel of Hom(cover, w2) -> Hom(kernel, w2)."""
    res = standard_resolution(w)
    D = w.width
    restricted = [linalg.flatten(compose(m, res.inclusion).alpha1) for m in hom_w(res.cover, w2)]
    return w2.p1 * D - linalg.rank_of_rows(restricted, w2.p1 * D, w.field)


# ---- sums and summands ----


def direct_sum(w: BimoduleElement, w2: BimoduleElement) -> BimoduleElement:
    """Block-diagonal assembly; copies of w come before copies of w2 at every vertex."""
    _same_algebra(w, w2)
    T = w.algebra
    p2 = [a + b for a, b in zip(w.p2, w2.p2, strict=True)]
    first = T.multiplicities(w.p2)
    columns = T.w_columns(p2)
    data = linalg.zeros(w.p1 + w2.p1, len(columns), w.field)
    for n, (j, x, r) in enumerate(columns):
        if r < first[j]:
            c = w.column_index[(j, x, r)]
            for i in range(w.p1):
                data[i][n] = w.data[i][c]
        else:
            c = w2.column_index[(j, x, r - first[j])]
            for i in range(w2.p1):
                data[w.p1 + i][n] = w2.data[i][c]
    return BimoduleElement(algebra=T, p1=w.p1 + w2.p1, p2=p2, data=data)


def canonical_projection(w: BimoduleElement, w2: BimoduleElement, which: int = 0) -> Morphism:
    """The idempotent of w + w2 projecting onto the first (which=0) or second summand."""
    total = direct_sum(w, w2)
    field = w.field
    B = w.algebra.basic

    def selector(a: int, b: int) -> Rows:
        mat = linalg.zeros(a + b, a + b, field)
        rng = range(a) if which == 0 else range(a, a + b)
        for i in rng:
            mat[i][i] = field.one
        return mat

    zero = zero_morphism(total, total)
    alpha2 = dict(zero.alpha2)
    for j, a, b in zip(w.algebra.a2_vertices, w.p2, w2.p2, strict=True):
        if a + b:
            alpha2[B.idempotents[j]] = selector(a, b)
    return Morphism(source=total, target=total, alpha1=selector(w.p1, w2.p1), alpha2=alpha2)


def _is_idempotent(e: Morphism) -> bool:
    return compose(e, e).module_matrix() == e.module_matrix()


def image_summand(w: BimoduleElement, e: Morphism) -> tuple[BimoduleElement, Morphism]:
    """
    The summand of w cut out by an idempotent e, with its inclusion into w.

    The P2 part of the image is the projective A2-module generated by lifts
    of the top of e(P2), one generator per vertex copy.

    Raises:
        BimoduleError: If e is not an idempotent endomorphism of w
    """
    if e.source.shape != w.shape or e.target.shape != w.shape or not _is_idempotent(e):
        raise BimoduleError("not an idempotent endomorphism")
    T, field = w.algebra, w.field
    B = T.basic
    frame1 = Frame.of(Subspace.span(linalg.transpose(e.alpha1, w.p1), w.p1, field).basis, w.p1, field)
    basis = T.p2_basis(w.p2)
    n2 = len(basis)
    image = Subspace.span(linalg.transpose(e.p2_matrix(), n2), n2, field)
    off_diagonal = [y for y, (r, c) in enumerate(B.peirce) if r != c and r != T.sink and c != T.sink]
    radical_image = Subspace.span(
        [T.left_act(y, u, w.p2) for y in off_diagonal for u in image.basis], n2, field
    )

    def at_vertex(j: int, u: Sequence[Any]) -> list[Any]:
        return [x if B.peirce[a][0] == j else field.zero for x, (_, a, _) in zip(u, basis, strict=True)]

    new_p2: list[int] = []
    generators: dict[int, list[list[Any]]] = {}
    for j in T.a2_vertices:
        low = Subspace.span([at_vertex(j, u) for u in radical_image.basis], n2, field)
        whole = Subspace.span([at_vertex(j, u) for u in image.basis], n2, field)
        chosen = linalg.extend_to_basis(low.basis, whole.basis, n2, field)[low.dim :]
        generators[j] = chosen
        new_p2.append(len(chosen))
    index = {t: n for n, t in enumerate(basis)}
    mult = T.multiplicities(w.p2)
    psi: dict[int, Rows] = {}
    for j, gens in generators.items():
        if not gens:
            continue
        for b, (r, l) in enumerate(B.peirce):
            if r != j or l == T.sink or mult[l] == 0:
                continue
            psi[b] = [[gens[q][index[(l, b, p)]] for q in range(len(gens))] for p in range(mult[l])]
    induced = T.tensor_map(psi, new_p2, w.p2, [T.sink])
    width1 = len(T.w_columns(new_p2))
    full = linalg.mat_mul(w.data, induced, field, w.width, width1)
    columns = linalg.transpose(full, width1) if w.p1 else [[] for _ in range(width1)]
    local = []
    for column in columns:
        if not frame1.contains(column):
            raise BimoduleError("idempotent does not preserve the element")
        local.append(frame1.coords(column))
    data = linalg.transpose(local, frame1.dim) if width1 else [[] for _ in range(frame1.dim)]
    summand = BimoduleElement(algebra=T, p1=frame1.dim, p2=new_p2, data=data)
    alpha1 = linalg.transpose(frame1.vectors, w.p1) if frame1.dim else [[] for _ in range(w.p1)]
    zero = zero_morphism(summand, w)
    inclusion = Morphism(source=summand, target=w, alpha1=alpha1, alpha2={**zero.alpha2, **psi})
    if not inclusion.is_morphism():
        raise InternalConsistencyError("summand inclusion is not a morphism")
    return summand, inclusion


def _retraction(w: BimoduleElement, summand: BimoduleElement, inclusion: Morphism, e: Morphism) -> Morphism:
    basis = hom_w(w, summand)
    if not basis:
        return zero_morphism(w, summand)
    images = [linalg.flatten(compose(inclusion, m).module_matrix()) for m in basis]
    length = len(images[0])
    system = linalg.matrix(linalg.transpose(images, length), len(basis), w.field)
    coeffs = linalg.solve(system, linalg.flatten(e.module_matrix()))
    if coeffs is None:
        raise InternalConsistencyError("no retraction onto the image of an idempotent")
    return combine_morphisms(coeffs, basis, w, summand)


def split(w: BimoduleElement, e: Morphism) -> SplitResult:
    """
    Split w along an idempotent e into image(e) and image(1 - e).

    Raises:
        BimoduleError: If e is not an idempotent endomorphism of w
    """
    first, first_inclusion = image_summand(w, e)
    complement = combine_morphisms([w.field.one, -w.field.one], [identity(w), e], w, w)
    second, second_inclusion = image_summand(w, complement)
    return SplitResult(
        first=first,
        second=second,
        first_inclusion=first_inclusion,
        first_projection=_retraction(w, first, first_inclusion, e),
        second_inclusion=second_inclusion,
        second_projection=_retraction(w, second, second_inclusion, complement),
    )


def end_algebra_sc(w: BimoduleElement) -> tuple[SCAlgebra, list[Morphism]]:
    """End_W(w) by structure constants (product = composition) and its basis of morphisms."""
    basis = hom_w(w, w)
    matrices = [m.module_matrix() for m in basis]
    algebra, _ = algebra_of_matrices(matrices, w.module_dim(), w.field)
    logger.debug("End(w) has dimension %d", algebra.dim)
    return algebra, basis


def decompose_element(w: BimoduleElement, rng: random.Random, prime_floor: int = 2**31) -> list[ElementSummand]:
    """
    Krull-Schmidt decomposition of an element with multiplicities.

    Over QQ, when End(w) does not split with rational elements, the element
    is reduced modulo a large prime first.
    """
    if w.is_empty():
        return []
    element = w
    end, basis = end_algebra_sc(element)
    try:
        tagged, components, _ = primitive_idempotents(end, rng)
    except SplittingFailed:
        prime = GroundField.large_prime(rng, prime_floor)
        logger.warning("End(w) does not split over QQ; decomposing over %s", prime)
        element = w.reduce_mod(prime)
        end, basis = end_algebra_sc(element)
        tagged, components, _ = primitive_idempotents(end, rng)
    groups: dict[int, list[list[Any]]] = {}
    for e, idx in tagged:
        groups.setdefault(idx, []).append(e)
    out = []
    for idx in sorted(groups):
        e = combine_morphisms(groups[idx][0], basis, element, element)
        summand, _ = image_summand(element, e)
        out.append(ElementSummand(element=summand, multiplicity=len(groups[idx]), degree=components[idx].degree))
    total = sum(s.element.module_dim() * s.multiplicity for s in out)
    if total != element.module_dim():
        raise InternalConsistencyError(f"summands add up to dimension {total}, expected {element.module_dim()}")
    out.sort(key=lambda s: (s.element.dim_vector(), s.multiplicity))
    return out


def element_isomorphism(w: BimoduleElement, w2: BimoduleElement, rng: random.Random) -> Morphism | None:
    """An explicit isomorphism w -> w2, or None."""
    _same_algebra(w, w2)
    if w.shape != w2.shape:
        return None
    if w.module_dim() == 0:
        return identity(w)
    basis = hom_w(w, w2)
    if len({len(basis), hom_dim(w2, w), hom_dim(w, w), hom_dim(w2, w2)}) != 1:
        return None
    for _ in range(ISOMORPHISM_ATTEMPTS):
        coeffs = [w.field.random_element(rng) for _ in basis]
        candidate = combine_morphisms(coeffs, basis, w, w2)
        if linalg.determinant(candidate.module_matrix(), w.field):
            return candidate
    return None


# ---- the group action ----


def random_group_element(
    algebra: TriangularAlgebra, p1: int, p2: Sequence[int], rng: random.Random
) -> tuple[Rows, dict[int, Rows]]:
    """A random (g1, g2) in GL(P1) x Aut(P2)."""
    field = algebra.field
    B = algebra.basic
    while True:
        g1 = [[field.random_element(rng) for _ in range(p1)] for _ in range(p1)]
        if p1 == 0 or linalg.determinant(g1, field):
            break
    src = algebra.multiplicities(p2)
    while True:
        g2 = {}
        for b in algebra.alpha2_layout(p2, p2):
            j, l = B.peirce[b]
            g2[b] = [[field.random_element(rng) for _ in range(src[j])] for _ in range(src[l])]
        # on a directed algebra invertibility is decided on the diagonal blocks
        if all(linalg.determinant(g2[B.idempotents[j]], field) for j, c in src.items() if c):
            return g1, g2


def act(w: BimoduleElement, g1: Rows, g2: dict[int, Rows]) -> BimoduleElement:
    """
    g . w = g1 w (1 (x) g2)^{-1}; the pair (g1, g2) is then an isomorphism
    w -> g . w.
    """
    T, field = w.algebra, w.field
    induced = T.tensor_map(g2, w.p2, w.p2, [T.sink])
    inverse = linalg.inverse(induced, field) if w.width else []
    moved = linalg.mat_mul(g1, w.data, field, w.p1, w.width)
    data = linalg.mat_mul(moved, inverse, field, w.width, w.width)
    return BimoduleElement(algebra=T, p1=w.p1, p2=list(w.p2), data=data)
