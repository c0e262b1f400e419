"""
Generic elements and their canonical decomposition.

A generic element is found by sampling: among `trials` random elements of a
shape, those with minimal dim End are decomposed, and the decomposition type
must repeat at least twice. Every summand is then either rigid (a brick
without self-extensions) or a delta-brick (End a field, self-Ext of the same
dimension, multiplicity one); `certify` recomputes all Hom and Ext dimensions
between the summands from scratch.

Summands are split over the ground field. A summand whose End is a field of
degree t counts as t absolute summands, so that the delta-brick count m is
the number of delta-bricks over the algebraic closure.
"""

import logging
import random
from collections import Counter
from collections.abc import Sequence
from typing import Any

from pydantic import BaseModel, ConfigDict, Field
from sympy import Poly, Symbol
from sympy.polys.matrices import DomainMatrix

from .bimod import (
    BimoduleElement,
    Morphism,
    TriangularAlgebra,
    combine_morphisms,
    element_tits,
    end_algebra_sc,
    ext_dims,
    ext_via_resolution,
    image_summand,
    random_element,
    to_module,
)
from .enums import DiagramFamily, GraphKind, SummandKind
from .errors import FatDualError, InternalConsistencyError
from .exactalg import (
    BasicAlgebra,
    GroundField,
    SCAlgebra,
    SplittingFailed,
    primitive_idempotents,
)
from .exactalg.linalg import Rows
from .quiver import DimVector, Quiver, QuiverError, classify, connected_components, gabriel_quiver

logger = logging.getLogger(__name__)

PENCIL_VARIABLE = Symbol("lambda")


class GenericError(FatDualError):
    """Exception raised when sampling does not produce a certified generic decomposition."""

    pass


class GenericSummand(BaseModel):
    """An indecomposable summand of a generic element over the ground field."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    dim_vector: list[int]
    multiplicity: int = Field(ge=1)
    end_dim: int
    self_ext: int
    degree: int = Field(default=1, ge=1)
    kind: SummandKind
    element: BimoduleElement | None = Field(default=None, exclude=True)

    def absolute(self) -> list[tuple[tuple[int, ...], int, str]]:
        """The summand over the algebraic closure: `degree` entries of (dimension vector, multiplicity, kind)."""
        dims = tuple(c // self.degree for c in self.dim_vector)
        return [(dims, self.multiplicity, self.kind.value)] * self.degree


class CertificateEntry(BaseModel):
    """dim Hom and dim Ext^1 from summand `first` to summand `second`."""

    model_config = ConfigDict(frozen=True)

    first: int
    second: int
    hom: int
    ext: int


class Certificate(BaseModel):
    """Hom/Ext table between all summands (rigid ones first, then delta-bricks)."""

    model_config = ConfigDict(frozen=True)

    entries: list[CertificateEntry]

    def lookup(self, first: int, second: int) -> CertificateEntry:
        for entry in self.entries:
            if entry.first == first and entry.second == second:
                return entry
        raise KeyError((first, second))


class PencilPoint(BaseModel):
    """
    A point of P^1 given by a monic irreducible factor of det(B - lambda A).

    `value` is set for rational points; `at_infinity` marks the zero of A.
    """

    model_config = ConfigDict(frozen=True)

    minimal_polynomial: list[str] = Field(default_factory=list)
    degree: int = Field(default=1, ge=1)
    value: str | None = None
    at_infinity: bool = False
    multiplicity: int = Field(default=1, ge=1)

    def key(self) -> tuple[str, ...]:
        return ("inf",) if self.at_infinity else tuple(self.minimal_polynomial)


class TubeParameters(BaseModel):
    """Pencil points of the delta-bricks, or supported=False when no pencil model exists."""

    model_config = ConfigDict(frozen=True)

    supported: bool
    points: list[PencilPoint] = Field(default_factory=list)


class EndAlgebraData(BaseModel):
    """
    End_W(w) by structure constants with its basic reduction.

    Vertex i of `basic` is the i-th entry of `summands`; `multiplicities`
    holds how often that summand occurs in w.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    algebra: SCAlgebra
    basis: list[Morphism] = Field(exclude=True)
    basic: BasicAlgebra
    summands: list[GenericSummand]
    element: BimoduleElement = Field(exclude=True)

    @property
    def multiplicities(self) -> list[int]:
        return [s.multiplicity for s in self.summands]

    @property
    def delta_flags(self) -> list[bool]:
        return [s.kind == SummandKind.DELTA for s in self.summands]

    def rigid_vertices(self) -> list[int]:
        return [i for i, s in enumerate(self.summands) if s.kind == SummandKind.RIGID]


class GenericDecomposition(BaseModel):
    """A generic element written as rigid part + m delta-bricks."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rigid_summands: list[GenericSummand]
    delta_summands: list[GenericSummand]
    end_dim: int
    tube_parameters: TubeParameters | None = None
    certificate: Certificate | None = None
    end_data: EndAlgebraData | None = Field(default=None, exclude=True)

    @property
    def delta_brick_count(self) -> int:
        return sum(s.degree * s.multiplicity for s in self.delta_summands)

    @property
    def is_rigid(self) -> bool:
        return not self.delta_summands

    def summands(self) -> list[GenericSummand]:
        return self.rigid_summands + self.delta_summands

    def type_key(self) -> tuple[tuple[tuple[int, ...], int, str], ...]:
        """The decomposition type over the algebraic closure, independent of the field splitting."""
        entries = [entry for s in self.summands() for entry in s.absolute()]
        return tuple(sorted(entries))


class BalanceCheck(BaseModel):
    """Both sides of dim Hom(M,N) + dim Hom(N,M) = dim Ext(M,N) + dim Ext(N,M)."""

    model_config = ConfigDict(frozen=True)

    hom_forward: int
    hom_backward: int
    ext_forward: int
    ext_backward: int

    @property
    def holds(self) -> bool:
        return self.hom_forward + self.hom_backward == self.ext_forward + self.ext_backward


# ---- End algebras ----


def _summand_kind(dim_vector: list[int], multiplicity: int, end_dim: int, self_ext: int, degree: int) -> SummandKind:
    if end_dim == degree and self_ext == 0:
        return SummandKind.RIGID
    if end_dim == degree and self_ext == degree and multiplicity == 1:
        return SummandKind.DELTA
    raise GenericError(
        f"summand {DimVector(coordinates=dim_vector)} (multiplicity {multiplicity}, End {end_dim}, "
        f"self-Ext {self_ext}) is neither rigid nor a delta-brick"
    )


def end_algebra(w: BimoduleElement, rng: random.Random, prime_floor: int = 2**31) -> EndAlgebraData:
    """
    End_W(w) with one primitive idempotent per isomorphism class of summand.

    Over QQ, when End(w) does not split with rational elements, w is reduced
    modulo a large prime first; `element` then holds the reduced element.

    Raises:
        GenericError: If a summand is neither rigid nor a delta-brick
    """
    element = w
    algebra, basis = end_algebra_sc(element)
    try:
        tagged, components, _ = primitive_idempotents(algebra, rng)
    except SplittingFailed:
        prime = GroundField.large_prime(rng, prime_floor)
        logger.warning("End(w) does not split over QQ; passing to %s", prime)
        element = w.reduce_mod(prime)
        algebra, basis = end_algebra_sc(element)
        tagged, components, _ = primitive_idempotents(algebra, rng)
    groups: dict[int, list[list[Any]]] = {}
    for e, idx in tagged:
        groups.setdefault(idx, []).append(e)
    found: list[tuple[GenericSummand, list[Any]]] = []
    for idx, idempotents in groups.items():
        piece, _ = image_summand(element, combine_morphisms(idempotents[0], basis, element, element))
        end_dim, self_ext = ext_dims(piece, piece)
        degree = components[idx].degree
        dims = piece.dim_vector()
        kind = _summand_kind(dims, len(idempotents), end_dim, self_ext, degree)
        summand = GenericSummand(
            dim_vector=dims,
            multiplicity=len(idempotents),
            end_dim=end_dim,
            self_ext=self_ext,
            degree=degree,
            kind=kind,
            element=piece,
        )
        found.append((summand, idempotents[0]))
    found.sort(key=lambda pair: (pair[0].kind.value, pair[0].dim_vector, pair[0].multiplicity))
    basic, _ = BasicAlgebra.from_idempotents(algebra, [e for _, e in found])
    total = sum(s.element.module_dim() * s.multiplicity for s, _ in found if s.element is not None)
    if total != element.module_dim():
        raise InternalConsistencyError(f"summands add up to dimension {total}, expected {element.module_dim()}")
    logger.debug("End(w): dimension %d, %d summand classes", algebra.dim, len(found))
    return EndAlgebraData(
        algebra=algebra, basis=basis, basic=basic, summands=[s for s, _ in found], element=element
    )


def decomposition_of(data: EndAlgebraData) -> GenericDecomposition:
    return GenericDecomposition(
        rigid_summands=[s for s in data.summands if s.kind == SummandKind.RIGID],
        delta_summands=[s for s in data.summands if s.kind == SummandKind.DELTA],
        end_dim=data.algebra.dim,
        end_data=data,
    )


# ---- sampling ----


def generic_element(
    algebra: TriangularAlgebra,
    p1: int,
    p2: Sequence[int],
    trials: int,
    rng: random.Random,
    prime_floor: int = 2**31,
    null_root: DimVector | None = None,
) -> tuple[BimoduleElement, GenericDecomposition]:
    """
    Sample a generic element of shape (p1, p2) and decompose it.

    Args:
        algebra: Triangular data the element lives over
        p1: Multiplicity of the sink projective
        p2: Multiplicities of the A2 projectives
        trials: Number of random elements to draw (at least 2)
        rng: Seeded generator
        prime_floor: Lower bound for a prime field when QQ does not split
        null_root: If given, delta-bricks must have dimension a multiple of it

    Returns:
        The element of minimal dim End and its certified decomposition

    Raises:
        GenericError: If the decomposition type does not repeat, or certification fails
    """
    if trials < 2:
        raise GenericError("at least two trials are needed to observe a stable generic type")
    samples = []
    for _ in range(trials):
        w = random_element(algebra, p1, p2, rng)
        samples.append((ext_dims(w, w)[0], w))
    best = min(d for d, _ in samples)
    logger.debug("shape (%d, %s): minimal End dimension %d over %d trials", p1, list(p2), best, trials)
    decomposed = []
    for d, w in samples:
        if d == best:
            decomposed.append(decomposition_of(end_algebra(w, rng, prime_floor)))
    counts = Counter(dec.type_key() for dec in decomposed)
    key, count = counts.most_common(1)[0]
    if count < 2:
        logger.warning("generic type of shape (%d, %s) did not repeat across %d trials", p1, list(p2), trials)
        raise GenericError("generic type unstable - increase trials")
    dec = next(d for d in decomposed if d.type_key() == key)
    assert dec.end_data is not None
    element = dec.end_data.element
    certificate = certify(dec, element, null_root)
    return element, dec.model_copy(update={"certificate": certificate})


# ---- certification ----


def certify(dec: GenericDecomposition, w: BimoduleElement, null_root: DimVector | None = None) -> Certificate:
    """
    Recompute every Hom and Ext^1 dimension between the summands of dec.

    Ext^1 is taken from the standard resolution and compared with the
    cokernel of the Hom system and with the bimodule Tits form.

    Raises:
        GenericError: If a summand or a pair of summands violates the decomposition shape
        InternalConsistencyError: If the two Ext^1 computations disagree
    """
    summands = dec.summands()
    if any(s.element is None for s in summands):
        raise GenericError("decomposition carries no summand elements")
    elements = [s.element for s in summands if s.element is not None]
    total = sum(u.module_dim() * s.multiplicity for u, s in zip(elements, summands, strict=True))
    if total != w.module_dim():
        raise GenericError(f"summands have total dimension {total}, element has {w.module_dim()}")
    rigid = len(dec.rigid_summands)
    entries = []
    for i, u in enumerate(elements):
        for j, v in enumerate(elements):
            hom, ext = ext_dims(u, v)
            if ext != ext_via_resolution(u, v):
                raise InternalConsistencyError(f"Ext^1({i},{j}) differs between the Hom system and the standard resolution")
            if hom - ext != element_tits(u, v):
                raise InternalConsistencyError(f"Euler form of ({i},{j}) differs from the bimodule Tits form")
            entries.append(CertificateEntry(first=i, second=j, hom=hom, ext=ext))
    certificate = Certificate(entries=entries)
    for i, s in enumerate(summands):
        own = certificate.lookup(i, i)
        if own.hom != s.degree or own.ext != (0 if s.kind == SummandKind.RIGID else s.degree):
            raise GenericError(f"summand {i} is not a {s.kind.value} brick: End {own.hom}, self-Ext {own.ext}")
        if s.kind == SummandKind.DELTA and null_root is not None:
            expected = [s.degree * c for c in null_root.coordinates]
            if s.dim_vector != expected:
                raise GenericError(f"delta-brick {i} has dimension {s.dim_vector}, expected {expected}")
        for j in range(len(summands)):
            if i == j:
                continue
            entry = certificate.lookup(i, j)
            if i < rigid and j < rigid and entry.ext:
                raise GenericError(f"Ext^1 between rigid summands {i} and {j} is {entry.ext}")
            if (i < rigid) != (j < rigid) and entry.hom:
                raise GenericError(f"Hom between rigid summand and delta-brick ({i},{j}) is {entry.hom}")
            if i >= rigid and j >= rigid and (entry.hom or entry.ext):
                raise GenericError(f"delta-bricks {i} and {j} are not orthogonal")
    return certificate


# ---- pencils and tube parameters ----


def pencil_model(algebra: TriangularAlgebra) -> tuple[int, int, tuple[int, int]] | None:
    """
    (source, sink, the two path basis elements) when the algebra is the path
    algebra of an A~ quiver with one source and one sink, the sink being the
    split vertex; None otherwise.
    """
    B = algebra.basic
    quiver = gabriel_quiver(B)
    try:
        graph_class = classify(quiver)
    except QuiverError:
        return None
    if graph_class.family != DiagramFamily.A_TILDE:
        return None
    sources, sinks = quiver.sources(), quiver.sinks()
    if len(sources) != 1 or sinks != [algebra.sink]:
        return None
    s, t = sources[0], sinks[0]
    paths = B.piece(t, s)
    if len(paths) != 2:
        return None
    return s, t, (paths[0], paths[1])


def _positions(w: BimoduleElement, vertex: int) -> list[int]:
    """Coordinates of M(w) at a vertex."""
    T = w.algebra
    if vertex == T.sink:
        return list(range(w.p1))
    peirce = T.basic.peirce
    return [w.p1 + pos for pos, (_, a, _) in enumerate(T.p2_basis(w.p2)) if peirce[a][0] == vertex]


def pencil(w: BimoduleElement) -> tuple[Rows, Rows] | None:
    """The two maps M(w)_source -> M(w)_sink along the paths of a pencil model."""
    model = pencil_model(w.algebra)
    if model is None:
        return None
    s, t, (y0, y1) = model
    module = to_module(w)
    rows, cols = _positions(w, t), _positions(w, s)

    def block(y: int) -> Rows:
        return [[module.action[y][r][c] for c in cols] for r in rows]

    return block(y0), block(y1)


def _pencil_determinant(A: Rows, B: Rows, field: GroundField) -> Poly:
    """det(B - lambda A), computed in the polynomial ring over the ground field."""
    ring = field.domain[PENCIL_VARIABLE]
    to_sympy = field.domain.to_sympy
    n = len(A)
    entries = [
        [ring.from_sympy(to_sympy(B[r][c]) - PENCIL_VARIABLE * to_sympy(A[r][c])) for c in range(n)] for r in range(n)
    ]
    det = DomainMatrix(entries, (n, n), ring).det()
    return Poly(ring.to_sympy(det), PENCIL_VARIABLE, domain=field.domain)


def pencil_points(A: Rows, B: Rows, field: GroundField) -> list[PencilPoint]:
    """
    Points of P^1 where the square pencil B - lambda A drops rank, with multiplicities.

    Raises:
        GenericError: If the pencil is not square or det(B - lambda A) vanishes identically
    """
    n = len(A)
    if len(B) != n or any(len(row) != n for row in A) or any(len(row) != n for row in B):
        raise GenericError("pencil is not square")
    if n == 0:
        return []
    poly = _pencil_determinant(A, B, field)
    if poly.is_zero:
        raise GenericError("singular pencil: det(B - lambda A) vanishes identically")
    points = []
    _, factors = poly.factor_list()
    for factor, exponent in factors:
        monic = factor.monic()
        coeffs = [field.format(field.convert(c)) for c in monic.all_coeffs()]
        degree = monic.degree()
        value = field.format(-field.convert(monic.all_coeffs()[1])) if degree == 1 else None
        points.append(PencilPoint(minimal_polynomial=coeffs, degree=degree, value=value, multiplicity=exponent))
    if poly.degree() < n:
        points.append(PencilPoint(at_infinity=True, multiplicity=n - poly.degree()))
    points.sort(key=lambda p: (p.at_infinity, p.degree, p.key()))
    return points


def tube_parameters(w: BimoduleElement, dec: GenericDecomposition) -> TubeParameters:
    """
    Pencil points of the delta-bricks of a generic element.

    For a purely regular decomposition the pencil of w itself is used,
    otherwise the pencils of the delta-brick summands.

    Raises:
        GenericError: If dec has no delta-bricks, or a point repeats
    """
    m = dec.delta_brick_count
    if m == 0:
        raise GenericError("decomposition has no delta-bricks")
    if pencil_model(w.algebra) is None:
        return TubeParameters(supported=False)
    sources = [w] if not dec.rigid_summands else [s.element for s in dec.delta_summands]
    points: list[PencilPoint] = []
    for u in sources:
        if u is None:
            raise GenericError("decomposition carries no summand elements")
        blocks = pencil(u)
        assert blocks is not None
        points.extend(pencil_points(*blocks, u.field))
    keys = [p.key() for p in points]
    if any(p.multiplicity > 1 for p in points) or len(set(keys)) != len(keys):
        raise GenericError("repeated pencil eigenvalue on a generic element")
    if sum(p.degree for p in points) != m:
        raise GenericError(f"pencil has {sum(p.degree for p in points)} points, expected {m}")
    points.sort(key=lambda p: (p.at_infinity, p.degree, p.key()))
    return TubeParameters(supported=True, points=points)


# ---- structural checks ----


def lemma_balance(w: BimoduleElement, z: BimoduleElement, null_root: DimVector | None = None) -> BalanceCheck:
    """
    Hom and Ext^1 in both directions between w and z, for M(w) of dimension
    a multiple of the null root.

    Raises:
        GenericError: If null_root is given and dim M(w) is not a multiple of it
    """
    if null_root is not None:
        dims = w.dim_vector()
        k = dims[0] // null_root.coordinates[0]
        if dims != [k * c for c in null_root.coordinates]:
            raise GenericError(f"dimension {dims} is not a multiple of {null_root}")
    hom_f, ext_f = ext_dims(w, z)
    hom_b, ext_b = ext_dims(z, w)
    return BalanceCheck(hom_forward=hom_f, hom_backward=hom_b, ext_forward=ext_f, ext_backward=ext_b)


def is_equioriented_type_a(quiver: Quiver) -> bool:
    """Every connected component is an A_n quiver whose arrows all point the same way."""
    for component in connected_components(quiver):
        graph_class = classify(component)
        if graph_class.kind != GraphKind.DYNKIN or graph_class.family != DiagramFamily.A:
            return False
        indegree = Counter(t for _, t in component.arrows)
        outdegree = Counter(s for s, _ in component.arrows)
        if any(v > 1 for v in indegree.values()) or any(v > 1 for v in outdegree.values()):
            return False
    return True


def rigid_end_quiver(dec: GenericDecomposition) -> Quiver:
    """Ext-quiver of the basic algebra of End of the rigid part.

    Raises:
        GenericError: If the decomposition carries no End data or no rigid summand
    """
    if dec.end_data is None:
        raise GenericError("decomposition carries no End data")
    vertices = dec.end_data.rigid_vertices()
    if not vertices:
        raise GenericError("decomposition has no rigid part")
    return gabriel_quiver(dec.end_data.basic.restrict(vertices))
