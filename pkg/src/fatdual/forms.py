"""
Tits and Euler forms.

The quiver form uses the convention E[i][j] = (1 if i == j else 0) minus the
number of arrows i -> j, so that <d, e> = d^T E e. The same module evaluates
the bimodule Tits form of a triangular algebra and the Euler form of modules
of projective dimension at most one.
"""

from collections.abc import Sequence
from math import gcd

from pydantic import BaseModel, ConfigDict, field_validator
from sympy import Matrix, lcm

from .enums import GraphKind
from .errors import FatDualError
from .exactalg import linalg
from .quiver import DimVector, Quiver, QuiverRepresentation, classify


class FormError(FatDualError):
    """Exception raised for dimension mismatches and missing null roots."""

    pass


class FormMatrix(BaseModel):
    """Integer matrix of a bilinear form on dimension vectors."""

    model_config = ConfigDict(frozen=True)

    entries: list[list[int]]

    @field_validator("entries")
    @classmethod
    def _square_with_unit_diagonal(cls, v: list[list[int]]) -> list[list[int]]:
        n = len(v)
        if any(len(row) != n for row in v):
            raise ValueError("form matrix must be square")
        if any(v[i][i] != 1 for i in range(n)):
            raise ValueError("diagonal entries of a quiver form must equal 1")
        return v

    @property
    def size(self) -> int:
        return len(self.entries)

    def transpose(self) -> list[list[int]]:
        return [list(col) for col in zip(*self.entries, strict=True)] if self.entries else []


def _coords(d: DimVector | Sequence[int]) -> list[int]:
    return list(d.coordinates) if isinstance(d, DimVector) else list(d)


def quiver_form(quiver: Quiver) -> FormMatrix:
    n = quiver.vertex_count
    entries = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for s, t in quiver.arrows:
        entries[s][t] -= 1
    return FormMatrix(entries=entries)


def bilinear(form: FormMatrix, d: DimVector | Sequence[int], e: DimVector | Sequence[int]) -> int:
    """
    <d, e> = d^T E e.

    Raises:
        FormError: If a vector has the wrong length
    """
    x, y = _coords(d), _coords(e)
    if len(x) != form.size or len(y) != form.size:
        raise FormError(f"vectors must have {form.size} coordinates")
    return sum(x[i] * form.entries[i][j] * y[j] for i in range(form.size) for j in range(form.size))


def tits_quadratic(form: FormMatrix, d: DimVector | Sequence[int]) -> int:
    return bilinear(form, d, d)


def symmetrized(form: FormMatrix) -> list[list[int]]:
    """E + E^T; its quadratic form is twice the Tits form."""
    n = form.size
    return [[form.entries[i][j] + form.entries[j][i] for j in range(n)] for i in range(n)]


def delta(quiver: Quiver) -> DimVector:
    """
    The null root: the primitive positive generator of the kernel of E + E^T.

    Raises:
        FormError: If the quiver is not Euclidean
    """
    if classify(quiver).kind != GraphKind.EUCLIDEAN:
        raise FormError("no null root")
    kernel = Matrix(symmetrized(quiver_form(quiver))).nullspace()
    if len(kernel) != 1:
        raise FormError("no null root")
    v = kernel[0]
    scale = lcm([x.q for x in v])
    ints = [int(x * scale) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    ints = [x // g for x in ints]
    if all(x <= 0 for x in ints):
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise FormError("no null root")
    return DimVector(coordinates=ints)


def defect(quiver: Quiver, d: DimVector | Sequence[int]) -> int:
    """<delta, d>: negative on preprojective, zero on regular, positive on preinjective roots."""
    return bilinear(quiver_form(quiver), delta(quiver), d)


def bimodule_tits(hom_p1: int, hom_p2: int, w_dim: int) -> int:
    """
    Tits form of a bipartite bimodule on a pair of projectives:
    dim Hom(P1, P1') + dim Hom(P2, P2') - dim W(P2, P1').
    """
    return hom_p1 + hom_p2 - w_dim


def euler_form_module(hom_dim: int, ext1_dim: int) -> int:
    """Euler form of modules of projective dimension at most one."""
    return hom_dim - ext1_dim


def ringel_map_dims(M: QuiverRepresentation, N: QuiverRepresentation) -> tuple[int, int, int]:
    """
    Source dimension, target dimension and rank of the map
    (phi_i) -> (N_a phi_s - phi_t M_a) from the standard resolution.

    Raises:
        FormError: If M and N are not representations of the same quiver
    """
    if M.quiver != N.quiver or M.field != N.field:
        raise FormError("representations of different quivers")
    quiver, field = M.quiver, M.field
    offsets, total = [], 0
    for i in range(quiver.vertex_count):
        offsets.append(total)
        total += N.dims[i] * M.dims[i]
    dod: dict[int, dict[int, object]] = {}
    row = 0
    for a, (s, t) in enumerate(quiver.arrows):
        ma, na = M.matrices[a], N.matrices[a]
        for r in range(N.dims[t]):
            for c in range(M.dims[s]):
                eq = dod.setdefault(row, {})
                for k in range(N.dims[s]):
                    if na[r][k]:
                        key = offsets[s] + k * M.dims[s] + c
                        eq[key] = eq.get(key, field.zero) + na[r][k]
                for k in range(M.dims[t]):
                    if ma[k][c]:
                        key = offsets[t] + r * M.dims[t] + k
                        eq[key] = eq.get(key, field.zero) - ma[k][c]
                row += 1
    if row == 0 or total == 0:
        return total, row, 0
    return total, row, linalg.rank(linalg.sparse_matrix(dod, (row, total), field))


def hom_ext_dims(M: QuiverRepresentation, N: QuiverRepresentation) -> tuple[int, int]:
    """dim Hom(M, N) and dim Ext^1(M, N) as kernel and cokernel of the standard resolution map."""
    source, target, rank = ringel_map_dims(M, N)
    return source - rank, target - rank
