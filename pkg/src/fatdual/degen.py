"""
Degenerations of bimodule elements.

w' is a degeneration of w when it lies in the closure of the orbit of w.
This module only certifies or refutes: a conflation w' -> w + v -> v
certifies a degeneration, a probe z with dim Hom(w, z) > dim Hom(w', z) (or
the same in the other variance) refutes one. Over a small prime field the
orbits of a shape can be enumerated exhaustively.
"""

import logging
import random
from collections.abc import Sequence
from typing import Any

import networkx as nx
import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from sympy import isprime, primitive_root

from .bimod import (
    BimoduleElement,
    Morphism,
    TriangularAlgebra,
    combine_morphisms,
    compose,
    decompose_element,
    direct_sum,
    end_algebra_sc,
    hom_dim,
    hom_w,
    identity,
    random_element,
    zero_element,
    zero_morphism,
)
from .errors import FatDualError, InternalConsistencyError
from .exactalg import GroundField, unit_group_order
from .exactalg import linalg
from .exactalg.linalg import Rows

logger = logging.getLogger(__name__)

# Random (alpha, beta) draws per candidate v.
WITNESS_ATTEMPTS = 4


class DegenerationError(FatDualError):
    """Exception raised for malformed witnesses, shape mismatches and oversized censuses."""

    pass


class ConflationWitness(BaseModel):
    """A conflation w' -> w + v -> v."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    v: BimoduleElement
    alpha: Morphism
    beta: Morphism


class HomOrderResult(BaseModel):
    """Outcome of the Hom-order test; `probe` is the refuting element, if any."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    consistent: bool
    probe: BimoduleElement | None = None
    variance: str | None = None


class CensusOrbit(BaseModel):
    """One orbit of a census with its representative (the element of smallest code)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    representative: BimoduleElement = Field(exclude=True)
    code: int
    size: int
    end_dim: int
    aut_order: int
    rank: int


class OrbitCensus(BaseModel):
    """All orbits of the elements of one shape over GF(q), with the Hom table between them."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    q: int
    p1: int
    p2: list[int]
    space_dim: int
    group_order: int
    orbits: list[CensusOrbit]
    hom_table: list[list[int]]

    @model_validator(mode="after")
    def _check_sizes(self) -> "OrbitCensus":
        if sum(o.size for o in self.orbits) != self.q**self.space_dim:
            raise ValueError("orbit sizes do not add up to the number of elements")
        return self

    def representatives(self) -> list[BimoduleElement]:
        return [o.representative for o in self.orbits]


class DegenerationFamily(BaseModel):
    """A polynomial curve w_t = sum_k t^k coefficients[k] of elements of one shape."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    algebra: TriangularAlgebra
    p1: int
    p2: list[int]
    coefficients: list[Rows]

    @model_validator(mode="after")
    def _check_coefficients(self) -> "DegenerationFamily":
        if not self.coefficients:
            raise ValueError("a family needs at least one coefficient")
        width = len(self.algebra.w_columns(self.p2))
        for k, rows in enumerate(self.coefficients):
            if len(rows) != self.p1 or any(len(row) != width for row in rows):
                raise ValueError(f"coefficient {k} must be {self.p1}x{width}")
        return self


def specialize(family: DegenerationFamily, t: Any) -> BimoduleElement:
    """The element w_t."""
    field = family.algebra.field
    value = field.convert(t) if isinstance(t, int) else t
    width = len(family.algebra.w_columns(family.p2))
    data = linalg.zeros(family.p1, width, field)
    power = field.one
    for rows in family.coefficients:
        for r in range(family.p1):
            for c in range(width):
                if rows[r][c]:
                    data[r][c] += power * rows[r][c]
        power = power * value
    return BimoduleElement(algebra=family.algebra, p1=family.p1, p2=list(family.p2), data=data)


def _check_same_shape(w: BimoduleElement, w2: BimoduleElement) -> None:
    if w.shape != w2.shape:
        raise DegenerationError(f"shapes differ: {w.shape} and {w2.shape}")


# ---- Hom order ----


def default_probes(
    w: BimoduleElement, w2: BimoduleElement, rng: random.Random, count: int = 20, census: OrbitCensus | None = None
) -> list[BimoduleElement]:
    """Census representatives when available, else w, w2, their summands and `count` random elements."""
    if census is not None:
        return census.representatives()
    probes = [w, w2]
    for element in (w, w2):
        probes.extend(s.element for s in decompose_element(element, rng))
    probes.extend(random_element(w.algebra, w.p1, w.p2, rng) for _ in range(count))
    return probes


def hom_order_leq(w: BimoduleElement, w2: BimoduleElement, probes: Sequence[BimoduleElement]) -> HomOrderResult:
    """
    Test dim Hom(w, z) <= dim Hom(w2, z) and dim Hom(z, w) <= dim Hom(z, w2)
    on every probe z; necessary for w2 to be a degeneration of w.

    Raises:
        DegenerationError: If w and w2 have different shapes
    """
    _check_same_shape(w, w2)
    for z in probes:
        if hom_dim(w, z) > hom_dim(w2, z):
            return HomOrderResult(consistent=False, probe=z, variance="covariant")
        if hom_dim(z, w) > hom_dim(z, w2):
            return HomOrderResult(consistent=False, probe=z, variance="contravariant")
    return HomOrderResult(consistent=True)


# ---- witnesses ----


def verify_witness(w: BimoduleElement, w2: BimoduleElement, witness: ConflationWitness) -> bool:
    """
    True when w2 -> w + v -> v is a conflation: both maps are morphisms and the
    underlying sequence of modules is exact.

    Raises:
        DegenerationError: If the witness does not fit w, w2 and v
    """
    _check_same_shape(w, w2)
    v, alpha, beta = witness.v, witness.alpha, witness.beta
    middle = direct_sum(w, v)
    if alpha.source.shape != w2.shape or alpha.source.data != w2.data:
        raise DegenerationError("alpha does not start at w'")
    if alpha.target.shape != middle.shape or alpha.target.data != middle.data:
        raise DegenerationError("alpha does not end at w + v")
    if beta.source.shape != middle.shape or beta.source.data != middle.data:
        raise DegenerationError("beta does not start at w + v")
    if beta.target.shape != v.shape or beta.target.data != v.data:
        raise DegenerationError("beta does not end at v")
    if not (alpha.is_morphism() and beta.is_morphism()):
        return False
    field = w.field
    a, b = alpha.module_matrix(), beta.module_matrix()
    n_src, n_mid, n_dst = w2.module_dim(), middle.module_dim(), v.module_dim()
    if n_mid != n_src + n_dst:
        return False
    if linalg.rank_of_rows(a, n_src, field) != n_src:
        return False
    if linalg.rank_of_rows(b, n_mid, field) != n_dst:
        return False
    return linalg.matrix_is_zero(linalg.mat_mul(b, a, field, n_mid, n_src))


def _small_shapes(algebra: TriangularAlgebra, bound: int) -> list[tuple[int, list[int]]]:
    """Shapes (p1, p2) with 0 < p1 + sum(p2) <= bound, smallest first."""
    count = len(algebra.a2_vertices)
    shapes = []
    for total in range(1, bound + 1):
        for p1 in range(total + 1):
            for p2 in _compositions(total - p1, count):
                shapes.append((p1, p2))
    return shapes


def _compositions(total: int, parts: int) -> list[list[int]]:
    if parts == 0:
        return [[]] if total == 0 else []
    out = []
    for first in range(total, -1, -1):
        out.extend([first] + rest for rest in _compositions(total - first, parts - 1))
    return out


def _candidates(w: BimoduleElement, w2: BimoduleElement, bound: int, rng: random.Random) -> list[BimoduleElement]:
    T = w.algebra
    out = [zero_element(T, 0, [0] * len(w.p2))]
    for element in (w2, w):
        out.extend(s.element for s in decompose_element(element, rng))
    shapes = _small_shapes(T, bound)
    out.extend(zero_element(T, p1, p2) for p1, p2 in shapes)
    out.extend(random_element(T, p1, p2, rng) for p1, p2 in shapes)
    return out


def _random_combination(basis: Sequence[Morphism], source: BimoduleElement, target: BimoduleElement, rng: random.Random) -> Morphism:
    if not basis:
        return zero_morphism(source, target)
    coefficients = [source.field.random_element(rng) for _ in basis]
    return combine_morphisms(coefficients, basis, source, target)


def _annihilating_betas(alpha: Morphism, middle: BimoduleElement, v: BimoduleElement) -> list[Morphism]:
    """Basis of {beta in Hom(middle, v) : beta o alpha = 0}."""
    basis = hom_w(middle, v)
    if not basis:
        return []
    images = [linalg.flatten(compose(beta, alpha).module_matrix()) for beta in basis]
    length = len(images[0])
    if length == 0:
        return basis
    system = linalg.matrix(linalg.transpose(images, length), len(basis), v.field)
    kernel = linalg.kernel(system)
    return [combine_morphisms(coeffs, basis, middle, v) for coeffs in kernel]


def search_witness(
    w: BimoduleElement, w2: BimoduleElement, bound: int, rng: random.Random, probes: Sequence[BimoduleElement] | None = None
) -> ConflationWitness | None:
    """
    Look for a conflation w2 -> w + v -> v with p1(v) + sum p2(v) <= bound.

    Candidates for v are tried in order: the empty element, the summands of
    w2 and w, then zero and random elements of every small shape. None means
    nothing was found, which does not rule out a degeneration.

    Raises:
        DegenerationError: If w and w2 have different shapes
    """
    _check_same_shape(w, w2)
    order = hom_order_leq(w, w2, probes if probes is not None else [w, w2])
    if not order.consistent:
        logger.debug("Hom order refutes the degeneration (%s probe)", order.variance)
        return None
    for v in _candidates(w, w2, bound, rng):
        middle = direct_sum(w, v)
        alphas = hom_w(w2, middle)
        if not alphas and w2.module_dim():
            continue
        for _ in range(WITNESS_ATTEMPTS):
            alpha = _random_combination(alphas, w2, middle, rng)
            beta = _random_combination(_annihilating_betas(alpha, middle, v), middle, v, rng)
            witness = ConflationWitness(v=v, alpha=alpha, beta=beta)
            if verify_witness(w, w2, witness):
                logger.debug("witness found with v of shape %s", v.shape)
                return witness
    logger.info("no witness with v up to size %d", bound)
    return None


def trivial_witness(w: BimoduleElement) -> ConflationWitness:
    """w -> w + 0 -> 0."""
    empty = zero_element(w.algebra, 0, [0] * len(w.p2))
    middle = direct_sum(w, empty)
    one = identity(w)
    alpha = Morphism(source=w, target=middle, alpha1=one.alpha1, alpha2=one.alpha2)
    return ConflationWitness(v=empty, alpha=alpha, beta=zero_morphism(middle, empty))


# ---- census ----


def _unit_generators(algebra: TriangularAlgebra, p1: int, p2: Sequence[int], q: int) -> list[tuple[Rows, dict[int, Rows]]]:
    """Generators of GL(P1) x Aut(P2) over GF(q): transvections, one diagonal unit, and 1 + radical elements."""
    field = algebra.field
    B = algebra.basic
    root = field.from_int(primitive_root(q)) if q > 2 else None

    def gl_generators(n: int) -> list[Rows]:
        gens = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    g = linalg.identity(n, field)
                    g[i][j] = field.one
                    gens.append(g)
        if root is not None and n:
            g = linalg.identity(n, field)
            g[0][0] = root
            gens.append(g)
        return gens

    one1 = linalg.identity(p1, field)
    one2 = identity(zero_element(algebra, 0, p2)).alpha2
    mult = algebra.multiplicities(p2)
    out: list[tuple[Rows, dict[int, Rows]]] = [(g, one2) for g in gl_generators(p1)]
    for j, c in mult.items():
        for g in gl_generators(c):
            out.append((one1, {**one2, B.idempotents[j]: g}))
    for b in algebra.alpha2_layout(p2, p2):
        j, l = B.peirce[b]
        if j == l:
            continue
        for r in range(mult[l]):
            for s in range(mult[j]):
                mat = linalg.zeros(mult[l], mult[j], field)
                mat[r][s] = field.one
                out.append((one1, {**one2, b: mat}))
    return out


def _action_matrix(algebra: TriangularAlgebra, p2: Sequence[int], g1: Rows, g2: dict[int, Rows], q: int) -> np.ndarray:
    """The linear map data -> g1 data (1 (x) g2)^-1 on row-major data vectors, over the integers mod q."""
    field = algebra.field
    induced = algebra.tensor_map(g2, p2, p2, [algebra.sink])
    width = len(induced)
    inverse = linalg.inverse(induced, field) if width else []
    left = np.array([[field.to_int(x) for x in row] for row in g1], dtype=np.int64).reshape(len(g1), len(g1))
    right = np.array([[field.to_int(x) for x in row] for row in inverse], dtype=np.int64).reshape(width, width)
    return np.kron(left, right.T) % q


def census(
    algebra: TriangularAlgebra,
    p1: int,
    p2: Sequence[int],
    q: int,
    rng: random.Random,
    max_field: int = 4,
    max_dim: int = 12,
) -> OrbitCensus:
    """
    Enumerate every element of shape (p1, p2) over GF(q) and group them into orbits.

    Orbits are the connected components of the graph joining each element to
    its images under a generating set of the group; every orbit is checked
    against the orbit-stabiliser identity.

    Raises:
        DegenerationError: If q or the element space exceeds the guards ("census too large"), or q is not prime
        InternalConsistencyError: If an orbit violates orbit-stabiliser
    """
    if q > max_field:
        raise DegenerationError(f"census too large: field size {q} exceeds {max_field}")
    if not isprime(q):
        raise DegenerationError(f"census needs a prime field, got q = {q}")
    T = algebra.reduce_mod(GroundField.prime(q)) if algebra.field.characteristic != q else algebra
    width = len(T.w_columns(p2))
    N = p1 * width
    if N > max_dim:
        raise DegenerationError(f"census too large: {q}^{N} elements")
    total = q**N
    place = q ** np.arange(N, dtype=np.int64)
    codes = np.arange(total, dtype=np.int64)
    digits = (codes[:, None] // place[None, :]) % q if N else np.zeros((1, 0), dtype=np.int64)
    sources, targets = [], []
    for g1, g2 in _unit_generators(T, p1, p2, q):
        K = _action_matrix(T, p2, g1, g2, q)
        moved = (digits @ K.T) % q if N else digits
        sources.append(codes)
        targets.append(moved @ place if N else codes)
    src = np.concatenate(sources) if sources else codes
    dst = np.concatenate(targets) if targets else codes
    graph = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(total, total))
    count, labels = connected_components(graph, directed=True, connection="weak")
    logger.debug("census of %d elements over GF(%d): %d orbits", total, q, count)
    field = T.field
    group = unit_group_order(end_algebra_sc(zero_element(T, p1, p2))[0], rng)
    first = np.full(count, total, dtype=np.int64)
    np.minimum.at(first, labels, codes)
    sizes = np.bincount(labels, minlength=count)
    orbits = []
    for label in np.argsort(first, kind="stable"):
        code = int(first[label])
        values = [field.from_int(int(d)) for d in digits[code]] if N else []
        rep = BimoduleElement(algebra=T, p1=p1, p2=list(p2), data=linalg.reshape(values, p1, width))
        end, _ = end_algebra_sc(rep)
        aut = unit_group_order(end, rng)
        size = int(sizes[label])
        if size * aut != group:
            raise InternalConsistencyError(f"orbit of size {size} with |Aut| = {aut} violates orbit-stabiliser ({group})")
        orbits.append(
            CensusOrbit(
                representative=rep,
                code=code,
                size=size,
                end_dim=end.dim,
                aut_order=aut,
                rank=linalg.rank_of_rows(rep.data, width, field),
            )
        )
    reps = [o.representative for o in orbits]
    table = [[hom_dim(a, b) for b in reps] for a in reps]
    return OrbitCensus(q=q, p1=p1, p2=list(p2), space_dim=N, group_order=group, orbits=orbits, hom_table=table)


def degeneration_graph(census_result: OrbitCensus, bound: int, rng: random.Random) -> nx.DiGraph:
    """Edges i -> j when orbit j is a witness-certified degeneration of orbit i."""
    graph = nx.DiGraph()
    reps = census_result.representatives()
    graph.add_nodes_from(range(len(reps)))
    for i, w in enumerate(reps):
        for j, w2 in enumerate(reps):
            if i == j:
                continue
            if search_witness(w, w2, bound, rng, probes=reps) is not None:
                graph.add_edge(i, j)
    return graph


def witness_dot(census_result: OrbitCensus, bound: int, rng: random.Random) -> str:
    """DOT digraph of the certified degeneration relation between census orbits."""
    graph = degeneration_graph(census_result, bound, rng)
    lines = ["digraph degenerations {"]
    for i, orbit in enumerate(census_result.orbits):
        lines.append(f'  o{i} [label="#{i} size={orbit.size} end={orbit.end_dim}"];')
    for i, j in sorted(graph.edges()):
        lines.append(f"  o{i} -> o{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
