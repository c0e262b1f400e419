"""
Positive roots and the Coxeter transformation.

Roots are enumerated inside a coordinate box with numpy, one chunk of the box
at a time. The Coxeter matrix Phi = -E^{-1} E^T realises the Auslander-Reiten
translate on dimension vectors; the defect <delta, d> splits the roots of a
Euclidean quiver into preprojective, regular and preinjective ones.
"""

import itertools
import logging
from collections.abc import Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict
from sympy import Matrix

from .enums import DiagramFamily, GraphKind, RootKind, RootRegion
from .errors import FatDualError, InternalConsistencyError
from .forms import FormMatrix, bilinear, defect, delta, quiver_form, tits_quadratic
from .quiver import DimVector, Quiver, classify

logger = logging.getLogger(__name__)

# Box rows materialised at once during enumeration.
CHUNK_ROWS = 1 << 20


class RootError(FatDualError):
    """Exception raised for wild quivers and vectors that are not roots."""

    pass


class Root(BaseModel):
    """A positive root with its kind and (for Euclidean quivers) its defect."""

    model_config = ConfigDict(frozen=True)

    d: DimVector
    kind: RootKind
    defect: int | None = None


class CoxeterMatrix(BaseModel):
    model_config = ConfigDict(frozen=True)

    entries: list[list[int]]

    def apply(self, d: Sequence[int]) -> list[int]:
        return [sum(row[j] * d[j] for j in range(len(d))) for row in self.entries]

    def power(self, k: int) -> list[list[int]]:
        m = Matrix(self.entries) ** k
        return [[int(x) for x in m.row(i)] for i in range(m.rows)]


def dynkin_root_count(family: DiagramFamily, rank: int) -> int:
    """Number of positive roots of a Dynkin diagram."""
    if family == DiagramFamily.A:
        return rank * (rank + 1) // 2
    if family == DiagramFamily.D:
        return rank * (rank - 1)
    if family == DiagramFamily.E:
        return {6: 36, 7: 63, 8: 120}[rank]
    raise RootError(f"{family.value}{rank} is not a Dynkin diagram")


def _box_chunks(n: int, bound: int):
    side = bound + 1
    free = n
    while free > 0 and side**free > CHUNK_ROWS:
        free -= 1
    tail = np.indices((side,) * free, dtype=np.int64).reshape(free, -1).T
    for prefix in itertools.product(range(side), repeat=n - free):
        head = np.tile(np.array(prefix, dtype=np.int64), (tail.shape[0], 1))
        yield np.hstack([head, tail])


def _quadratic_values(quiver: Quiver, vectors: np.ndarray) -> np.ndarray:
    values = (vectors * vectors).sum(axis=1)
    for s, t in quiver.arrows:
        values -= vectors[:, s] * vectors[:, t]
    return values


def positive_roots(quiver: Quiver, bound: int) -> list[Root]:
    """
    All nonzero d with 0 <= d_i <= bound and Q(d) in {0, 1}, in lexicographic
    order. For Dynkin quivers the list is complete once bound >= 6.

    Raises:
        RootError: If the quiver is wild or bound is not positive
    """
    if bound < 1:
        raise RootError("bound must be positive")
    graph_class = classify(quiver)
    if graph_class.kind == GraphKind.WILD:
        raise RootError("root enumeration needs a Dynkin or Euclidean quiver")
    form = quiver_form(quiver)
    null_root = delta(quiver) if graph_class.kind == GraphKind.EUCLIDEAN else None
    found: list[Root] = []
    for chunk in _box_chunks(quiver.vertex_count, bound):
        q = _quadratic_values(quiver, chunk)
        mask = ((q == 0) | (q == 1)) & chunk.any(axis=1)
        for row, value in zip(chunk[mask], q[mask], strict=True):
            d = DimVector(coordinates=[int(x) for x in row])
            found.append(
                Root(
                    d=d,
                    kind=RootKind.REAL if value == 1 else RootKind.IMAGINARY,
                    defect=bilinear(form, null_root, d) if null_root is not None else None,
                )
            )
    logger.debug("%d roots in the box of size %d", len(found), bound)
    return found


def is_real_root(quiver: Quiver, d: DimVector | Sequence[int]) -> bool:
    coords = list(d.coordinates) if isinstance(d, DimVector) else list(d)
    return all(c >= 0 for c in coords) and tits_quadratic(quiver_form(quiver), coords) == 1


def coxeter(quiver: Quiver) -> CoxeterMatrix:
    """
    Phi = -E^{-1} E^T for E = quiver_form(quiver).

    Raises:
        RootError: If Phi is not an integer matrix
    """
    form: FormMatrix = quiver_form(quiver)
    e = Matrix(form.entries)
    phi = -e.inv() * e.T
    if any(not x.is_integer for x in phi):
        raise RootError("Coxeter matrix is not integral")
    return CoxeterMatrix(entries=[[int(x) for x in phi.row(i)] for i in range(phi.rows)])


def dim_tau(quiver: Quiver, d: DimVector | Sequence[int]) -> list[int]:
    """Dimension vector of tau M for a non-projective indecomposable M of dimension d."""
    coords = list(d.coordinates) if isinstance(d, DimVector) else list(d)
    return coxeter(quiver).apply(coords)


def coxeter_orbit(quiver: Quiver, d: DimVector | Sequence[int], steps: int) -> list[list[int]]:
    """d, Phi d, ..., Phi^steps d (inverse powers for negative steps)."""
    coords = list(d.coordinates) if isinstance(d, DimVector) else list(d)
    phi = coxeter(quiver)
    if steps < 0:
        phi = CoxeterMatrix(entries=phi.power(-1))
    orbit = [coords]
    for _ in range(abs(steps)):
        orbit.append(phi.apply(orbit[-1]))
    return orbit


def _turns_negative(orbit: list[list[int]]) -> bool:
    return any(any(x < 0 for x in v) for v in orbit[1:])


def classify_root(quiver: Quiver, root: Root | DimVector | Sequence[int]) -> RootRegion:
    """
    Preprojective, regular or preinjective by the sign of the defect,
    checked against iteration of Phi and its inverse.

    Raises:
        RootError: If the quiver is not Euclidean or the vector is not a root
        InternalConsistencyError: If the defect and the Coxeter iteration disagree
    """
    if classify(quiver).kind != GraphKind.EUCLIDEAN:
        raise RootError("root regions are defined for Euclidean quivers")
    d = root.d if isinstance(root, Root) else root
    coords = list(d.coordinates) if isinstance(d, DimVector) else list(d)
    if any(c < 0 for c in coords) or not any(coords):
        raise RootError(f"{coords} is not a positive vector")
    if tits_quadratic(quiver_form(quiver), coords) not in (0, 1):
        raise RootError(f"{coords} is not a root")
    value = defect(quiver, coords)
    if value < 0:
        region = RootRegion.PREPROJECTIVE
    elif value > 0:
        region = RootRegion.PREINJECTIVE
    else:
        region = RootRegion.REGULAR
    steps = 2 * quiver.vertex_count * (sum(coords) + 2)
    forward = _turns_negative(coxeter_orbit(quiver, coords, steps))
    backward = _turns_negative(coxeter_orbit(quiver, coords, -steps))
    observed: RootRegion | None = None
    if forward and not backward:
        observed = RootRegion.PREPROJECTIVE
    elif backward and not forward:
        observed = RootRegion.PREINJECTIVE
    elif not (forward or backward):
        observed = RootRegion.REGULAR
    if observed != region:
        raise InternalConsistencyError(f"defect says {region.value} but Coxeter iteration says {observed}")
    return region
