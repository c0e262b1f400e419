"""
Modules over structure-constant algebras.

A module is given by one action matrix per basis element of its algebra.
This module computes Hom spaces as kernels of intertwining systems, builds
endomorphism algebras from concrete matrices, and splits modules into
indecomposables with primitive idempotents of the endomorphism algebra.
"""

import logging
import random
from collections.abc import Sequence
from typing import Any

from pydantic import BaseModel, ConfigDict, model_validator

from . import linalg
from .algebra import EXHAUSTIVE_CHECK_DIM, SCAlgebra
from .field import ExactAlgebraError, GroundField
from .linalg import Frame, Rows, Subspace
from .wedderburn import SplittingFailed, primitive_idempotents

logger = logging.getLogger(__name__)

ISOMORPHISM_ATTEMPTS = 32


class SCModule(BaseModel):
    """
    A finite-dimensional left module: `action[i]` is the matrix of basis
    element b_i acting on field^dim (column vectors).
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    algebra: SCAlgebra
    dim: int
    action: list[list[list[Any]]]

    @model_validator(mode="after")
    def _check_action(self) -> "SCModule":
        A = self.algebra
        if len(self.action) != A.dim:
            raise ValueError("one action matrix per algebra basis element is required")
        for mat in self.action:
            if len(mat) != self.dim or any(len(row) != self.dim for row in mat):
                raise ValueError(f"action matrices must be {self.dim}x{self.dim}")
        if self.dim == 0:
            return self
        if self.act(A.unit) != linalg.identity(self.dim, A.field):
            raise ValueError("the unit does not act as the identity")
        pairs: list[tuple[list[Any], list[Any]]]
        if A.dim <= EXHAUSTIVE_CHECK_DIM:
            pairs = [(A.basis_vector(i), A.basis_vector(j)) for i in range(A.dim) for j in range(A.dim)]
        else:
            rng = random.Random(A.dim)
            pairs = [(A.random_element(rng), A.random_element(rng)) for _ in range(4)]
        for x, y in pairs:
            lhs = linalg.mat_mul(self.act(x), self.act(y), A.field, self.dim)
            if lhs != self.act(A.mul(x, y)):
                raise ValueError("action does not respect the multiplication")
        return self

    @property
    def field(self) -> GroundField:
        return self.algebra.field

    def act(self, x: Sequence[Any]) -> Rows:
        """Matrix of the algebra element x."""
        out = linalg.zeros(self.dim, self.dim, self.field)
        for i, c in enumerate(x):
            if not c:
                continue
            for r, row in enumerate(self.action[i]):
                for s, v in enumerate(row):
                    if v:
                        out[r][s] += c * v
        return out

    def submodule(self, vectors: Sequence[Sequence[Any]]) -> "SCModule":
        """
        The module structure on span(vectors), which must be invariant.

        Raises:
            ExactAlgebraError: If the span is not a submodule
        """
        frame = Frame.of(Subspace.span(vectors, self.dim, self.field).basis, self.dim, self.field)
        action = []
        for mat in self.action:
            columns = []
            for u in frame.vectors:
                image = [sum((row[s] * u[s] for s in range(self.dim)), self.field.zero) for row in mat]
                if not frame.contains(image):
                    raise ExactAlgebraError("subspace is not a submodule")
                columns.append(frame.coords(image))
            action.append(linalg.transpose(columns, frame.dim))
        return SCModule(algebra=self.algebra, dim=frame.dim, action=action)

    def image(self, endomorphism: Rows) -> "SCModule":
        columns = linalg.transpose(endomorphism, self.dim)
        return self.submodule([c for c in columns if not linalg.is_zero(c)])

    def direct_sum(self, other: "SCModule") -> "SCModule":
        if other.algebra is not self.algebra and other.algebra != self.algebra:
            raise ExactAlgebraError("modules over different algebras")
        action = [
            linalg.block_diagonal([(a, self.dim, self.dim), (b, other.dim, other.dim)], self.field)
            for a, b in zip(self.action, other.action, strict=True)
        ]
        return SCModule(algebra=self.algebra, dim=self.dim + other.dim, action=action)

    def reduce_mod(self, algebra: SCAlgebra) -> "SCModule":
        """The same module over a reduction of its algebra into a prime field."""
        field = algebra.field
        action = [[[field.convert(v) for v in row] for row in mat] for mat in self.action]
        return SCModule(algebra=algebra, dim=self.dim, action=action)


def _same_algebra(M: SCModule, N: SCModule) -> None:
    if M.algebra is not N.algebra and M.algebra != N.algebra:
        raise ExactAlgebraError("modules over different algebras")


def hom_space(M: SCModule, N: SCModule) -> list[Rows]:
    """
    Basis of Hom_A(M, N): all N.dim x M.dim matrices X with
    X act_M(b) = act_N(b) X for every basis element b.

    Raises:
        ExactAlgebraError: If the modules live over different algebras
    """
    _same_algebra(M, N)
    m, n = M.dim, N.dim
    field = M.field
    if m == 0 or n == 0:
        return []
    dod: dict[int, dict[int, Any]] = {}
    row = 0
    for am, an in zip(M.action, N.action, strict=True):
        for r in range(n):
            for c2 in range(m):
                eq = dod.setdefault(row, {})
                for c in range(m):
                    v = am[c][c2]
                    if v:
                        key = r * m + c
                        eq[key] = eq.get(key, field.zero) + v
                for s in range(n):
                    v = an[r][s]
                    if v:
                        key = s * m + c2
                        eq[key] = eq.get(key, field.zero) - v
                row += 1
    system = linalg.sparse_matrix(dod, (row, n * m), field)
    return [linalg.reshape(v, n, m) for v in linalg.kernel(system)]


def algebra_of_matrices(matrices: Sequence[Rows], size: int, field: GroundField) -> tuple[SCAlgebra, Frame]:
    """
    The algebra spanned by square matrices closed under composition (and
    containing the identity), with product X*Y = X composed with Y.
    Returns the algebra and the frame of flattened basis matrices.
    """
    flat = [linalg.flatten(X) for X in matrices]
    frame = Frame.of(flat, size * size, field)
    table = []
    for X in matrices:
        row = []
        for Y in matrices:
            p = linalg.flatten(linalg.mat_mul(X, Y, field, size))
            if not frame.contains(p):
                raise ExactAlgebraError("matrices are not closed under composition")
            row.append(frame.coords(p))
        table.append(row)
    unit = frame.coords(linalg.flatten(linalg.identity(size, field)))
    return SCAlgebra(field=field, dim=len(matrices), table=table, unit=unit), frame


def end_algebra(M: SCModule) -> tuple[SCAlgebra, Frame]:
    """End_A(M) with composition as product, and its frame of flattened matrices."""
    return algebra_of_matrices(hom_space(M, M), M.dim, M.field)


def isomorphism(M: SCModule, N: SCModule, rng: random.Random) -> Rows | None:
    """
    An explicit invertible intertwiner M -> N, or None.

    Dimensions and all four Hom dimensions are compared first; an intertwiner
    is then searched among random elements of Hom(M, N) and verified.
    """
    _same_algebra(M, N)
    if M.dim != N.dim:
        return None
    if M.dim == 0:
        return []
    hom_mn = hom_space(M, N)
    dims = {len(hom_mn), len(hom_space(N, M)), len(hom_space(M, M)), len(hom_space(N, N))}
    if len(dims) != 1:
        return None
    field = M.field
    flat = [linalg.flatten(X) for X in hom_mn]
    for _ in range(ISOMORPHISM_ATTEMPTS):
        coeffs = [field.random_element(rng) for _ in flat]
        X = linalg.reshape(linalg.combine(coeffs, flat, M.dim * M.dim, field), M.dim, M.dim)
        if linalg.determinant(X, field):
            return X
    return None


def is_isomorphic(M: SCModule, N: SCModule, rng: random.Random | None = None) -> bool:
    return isomorphism(M, N, rng or random.Random(0)) is not None


def krull_schmidt(M: SCModule, rng: random.Random, prime_floor: int = 2**31) -> list[tuple[SCModule, int]]:
    """
    Decompose M into indecomposables with multiplicities.

    Primitive idempotents of End(M) are grouped by their Wedderburn component;
    each group contributes one summand (the image of its first idempotent)
    with multiplicity the group size. Over QQ, when End(M) does not split with
    rational elements, the module is reduced modulo a large prime first.

    Returns:
        (summand, multiplicity) pairs ordered by summand dimension
    """
    if M.dim == 0:
        return []
    module = M
    end, frame = end_algebra(module)
    try:
        tagged, _, _ = primitive_idempotents(end, rng)
    except SplittingFailed:
        prime = GroundField.large_prime(rng, prime_floor)
        logger.warning("End(M) does not split over QQ; decomposing over %s", prime)
        module = M.reduce_mod(M.algebra.reduce_mod(prime))
        end, frame = end_algebra(module)
        tagged, _, _ = primitive_idempotents(end, rng)
    groups: dict[int, list[list[Any]]] = {}
    for e, idx in tagged:
        groups.setdefault(idx, []).append(e)
    out = []
    for idx in sorted(groups):
        X = linalg.reshape(frame.vector(groups[idx][0]), module.dim, module.dim)
        out.append((module.image(X), len(groups[idx])))
    total = sum(s.dim * mult for s, mult in out)
    if total != module.dim:
        raise ExactAlgebraError(f"summands add up to dimension {total}, expected {module.dim}")
    out.sort(key=lambda pair: pair[0].dim)
    return out
