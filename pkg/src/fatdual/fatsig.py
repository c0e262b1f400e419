"""
Fat-subset signature of GL(P, A).

The recursion works on a basic directed algebra B with projective
multiplicities c. At each step a sink vertex v (f_v B f_v the field, no paths
leaving v) splits B as A1[W]A2; the group GL(P, B) is then a semidirect
product of GL(P1) x Aut(P2) with the abelian group of elements of shape
(c_v, c restricted to A2), and the stabiliser of a generic character is the
unit group of End_W(w) for a generic element w. Delta-bricks of w are split
off as torus factors; the remaining rigid part gives the basic algebra and
multiplicities of the next step. Once B is semisimple, GL(P, B) is a product
of GL(c_i) and the c_i are the degrees of the signature.

Every signature is computed over two independent large primes and the
results must agree.
"""

import logging
import random
from collections.abc import Collection, Sequence

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .bimod import TriangularAlgebra
from .errors import FatDualError, InternalConsistencyError
from .exactalg import BasicAlgebra, GroundField
from .generic import PencilPoint, generic_element, pencil_model, tube_parameters

logger = logging.getLogger(__name__)

CONFIG_SPACE_DESCRIPTION = "X^(m)/S_m with X cofinite in P^1"


class FatSignatureError(FatDualError):
    """Exception raised when the recursion leaves the class of algebras it can reduce."""

    pass


class ConfigSpace(BaseModel):
    """The configuration space X^(m)/S_m with the points observed on the sampled element."""

    model_config = ConfigDict(frozen=True)

    description: str = CONFIG_SPACE_DESCRIPTION
    m: int = Field(ge=1)
    observed_points: list[PencilPoint] = Field(default_factory=list)


class TraceStep(BaseModel):
    """One reduction step."""

    model_config = ConfigDict(frozen=True)

    index: int
    multiplicities: list[int]
    sink: int
    opposite: bool = False
    w_dim: int
    group_dim: int
    end_dim: int
    rigid_summands: list[tuple[list[int], int]]
    delta_split: int
    next_multiplicities: list[int]


class RecursionState(BaseModel):
    """
    A basic algebra with projective multiplicities and the torus rank
    accumulated so far. `algebra` is None once no vertex is left.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    algebra: BasicAlgebra | None
    multiplicities: list[int]
    torus_rank: int = Field(default=0, ge=0)
    observed_points: list[PencilPoint] = Field(default_factory=list)
    steps: int = 0

    @model_validator(mode="after")
    def _check_multiplicities(self) -> "RecursionState":
        count = 0 if self.algebra is None else self.algebra.vertex_count
        if len(self.multiplicities) != count:
            raise ValueError(f"expected {count} multiplicities, got {len(self.multiplicities)}")
        if any(c < 0 for c in self.multiplicities):
            raise ValueError("multiplicities must be non-negative")
        return self

    def is_terminal(self) -> bool:
        return self.algebra is None or self.algebra.radical_is_zero()


class FatSignature(BaseModel):
    """Degrees d_i of the GL factors, torus rank m and the configuration space."""

    model_config = ConfigDict(frozen=True)

    gl_degrees: list[int]
    torus_rank: int = Field(ge=0)
    config_space: ConfigSpace | None = None
    trace: list[TraceStep] = Field(default_factory=list)
    primes: list[int] = Field(default_factory=list)

    @model_validator(mode="after")
    def _config_iff_torus(self) -> "FatSignature":
        if (self.torus_rank > 0) != (self.config_space is not None):
            raise ValueError("a configuration space is present exactly when the torus rank is positive")
        return self


def _is_sink(algebra: BasicAlgebra, v: int) -> bool:
    if algebra.piece_dim(v, v) != 1:
        return False
    return all(algebra.piece_dim(u, v) == 0 for u in range(algebra.vertex_count) if u != v)


def _w_dim(algebra: BasicAlgebra, v: int) -> int:
    return sum(algebra.piece_dim(v, j) for j in range(algebra.vertex_count) if j != v)


def source_idempotent(algebra: BasicAlgebra, exclude: Collection[int] = ()) -> int:
    """
    Lowest vertex e with eAe the field and (1 - e)Ae = 0.

    Raises:
        FatSignatureError: If no vertex outside `exclude` qualifies
    """
    for v in range(algebra.vertex_count):
        if v not in exclude and _is_sink(algebra, v):
            return v
    logger.warning(
        "no source idempotent: algebra of dimension %d on %d vertices, pieces %s",
        algebra.dim,
        algebra.vertex_count,
        [[algebra.piece_dim(r, c) for c in range(algebra.vertex_count)] for r in range(algebra.vertex_count)],
    )
    raise FatSignatureError("no source idempotent: the algebra left the supported class")


def _reducing_vertex(algebra: BasicAlgebra) -> int:
    """The first qualifying vertex with W != 0; vertices with W = 0 are rotated past."""
    skipped: list[int] = []
    while True:
        v = source_idempotent(algebra, skipped)
        if _w_dim(algebra, v):
            if skipped:
                logger.info("rotated past vertices %s with W = 0", skipped)
            return v
        skipped.append(v)


def restrict_to_support(state: RecursionState) -> RecursionState:
    """Drop the vertices of multiplicity zero."""
    if state.algebra is None:
        return state
    support = [v for v, c in enumerate(state.multiplicities) if c > 0]
    if len(support) == len(state.multiplicities):
        return state
    algebra = state.algebra.restrict(support) if support else None
    return state.model_copy(
        update={"algebra": algebra, "multiplicities": [state.multiplicities[v] for v in support]}
    )


def group_dim(algebra: BasicAlgebra, multiplicities: Sequence[int]) -> int:
    """dim GL(P, B) = dim End_B(P) = sum c_i c_j dim f_i B f_j."""
    n = algebra.vertex_count
    return sum(multiplicities[i] * multiplicities[j] * algebra.piece_dim(i, j) for i in range(n) for j in range(n))


def mackey_step(
    state: RecursionState, rng: random.Random, trials: int = 4, prime_floor: int = 2**31
) -> tuple[RecursionState, TraceStep]:
    """
    Replace GL(P, B) by the stabiliser of a generic element.

    Raises:
        FatSignatureError: If the state is terminal or no vertex can be split off
        GenericError: If the generic element cannot be certified
        InternalConsistencyError: If the stabiliser is not smaller than the group
    """
    state = restrict_to_support(state)
    if state.is_terminal():
        raise FatSignatureError("nothing to reduce: the algebra is semisimple")
    algebra = state.algebra
    assert algebra is not None
    opposite = False
    try:
        sink = _reducing_vertex(algebra)
    except FatSignatureError:
        mirrored = algebra.opposite()
        sink = _reducing_vertex(mirrored)
        logger.info("splitting the opposite algebra at vertex %d", sink)
        algebra, opposite = mirrored, True
    T = TriangularAlgebra.from_basic(algebra, sink)
    mult = state.multiplicities
    p1, p2 = mult[sink], [mult[j] for j in T.a2_vertices]
    w, dec = generic_element(T, p1, p2, trials, rng, prime_floor)
    total = group_dim(algebra, mult)
    if dec.end_dim >= total:
        raise InternalConsistencyError(f"stabiliser of dimension {dec.end_dim} is not smaller than the group ({total})")
    points = list(state.observed_points)
    if dec.delta_brick_count and pencil_model(T) is not None:
        points.extend(tube_parameters(w, dec).points)
    data = dec.end_data
    assert data is not None
    rigid = data.rigid_vertices()
    next_algebra = data.basic.restrict(rigid) if rigid else None
    if next_algebra is not None and not next_algebra.is_directed():
        raise FatSignatureError("End of the rigid part is not a directed algebra")
    next_mult = [data.summands[i].multiplicity for i in rigid]
    step = TraceStep(
        index=state.steps,
        multiplicities=list(mult),
        sink=sink,
        opposite=opposite,
        w_dim=w.p1 * w.width,
        group_dim=total,
        end_dim=dec.end_dim,
        rigid_summands=[(s.dim_vector, s.multiplicity) for s in dec.rigid_summands],
        delta_split=dec.delta_brick_count,
        next_multiplicities=next_mult,
    )
    logger.debug("step %d: group %d -> stabiliser %d, %d delta-bricks", state.steps, total, dec.end_dim, dec.delta_brick_count)
    next_state = RecursionState(
        algebra=next_algebra,
        multiplicities=next_mult,
        torus_rank=state.torus_rank + dec.delta_brick_count,
        observed_points=points,
        steps=state.steps + 1,
    )
    return next_state, step


def _run(
    algebra: BasicAlgebra, multiplicities: Sequence[int], rng: random.Random, trials: int, prime_floor: int
) -> FatSignature:
    state = restrict_to_support(RecursionState(algebra=algebra, multiplicities=list(multiplicities)))
    trace: list[TraceStep] = []
    while not state.is_terminal():
        state, step = mackey_step(state, rng, trials, prime_floor)
        trace.append(step)
        state = restrict_to_support(state)
    if sum(step.delta_split for step in trace) != state.torus_rank:
        raise InternalConsistencyError("torus ranks in the trace do not add up")
    m = state.torus_rank
    config = ConfigSpace(m=m, observed_points=state.observed_points) if m else None
    return FatSignature(
        gl_degrees=sorted(c for c in state.multiplicities if c > 0),
        torus_rank=m,
        config_space=config,
        trace=trace,
        primes=[algebra.field.characteristic] if algebra.field.is_prime_field else [],
    )


def fat_signature(
    algebra: BasicAlgebra,
    multiplicities: Sequence[int],
    seed: int,
    trials: int = 4,
    prime_floor: int = 2**31,
) -> FatSignature:
    """
    The fat-subset signature of GL(P, A) for P with the given multiplicities.

    An algebra over QQ is reduced modulo two independent primes of size at
    least `prime_floor`; the two signatures must agree, and the trace of the
    first run is returned. An algebra over a prime field is reduced once.

    Args:
        algebra: Directed basic algebra (a path algebra or an iterated triangular extension)
        multiplicities: One multiplicity per vertex
        seed: Seed for primes and sampling
        trials: Random elements drawn per generic element
        prime_floor: Lower bound for the primes

    Returns:
        FatSignature with degrees, torus rank, configuration space and trace

    Raises:
        FatSignatureError: If the multiplicities do not fit or the recursion aborts
        InternalConsistencyError: If the two primes give different signatures
    """
    if len(multiplicities) != algebra.vertex_count:
        raise FatSignatureError(f"expected {algebra.vertex_count} multiplicities, got {len(multiplicities)}")
    if any(c < 0 for c in multiplicities):
        raise FatSignatureError("multiplicities must be non-negative")
    if algebra.field.is_prime_field:
        return _run(algebra, multiplicities, random.Random(f"{seed}/0"), trials, prime_floor)
    rng = random.Random(seed)
    first = GroundField.large_prime(rng, prime_floor)
    second = GroundField.large_prime(rng, prime_floor)
    while second == first:
        second = GroundField.large_prime(rng, prime_floor)
    signatures = []
    for index, field in enumerate((first, second)):
        run = _run(algebra.reduce_mod(field), multiplicities, random.Random(f"{seed}/{index + 1}"), trials, prime_floor)
        signatures.append(run)
    a, b = signatures
    if a.gl_degrees != b.gl_degrees or a.torus_rank != b.torus_rank:
        raise InternalConsistencyError(
            f"signature over {first} ({a.gl_degrees}, m={a.torus_rank}) differs from {second} ({b.gl_degrees}, m={b.torus_rank})"
        )
    logger.debug("signature %s, m=%d confirmed over %s and %s", a.gl_degrees, a.torus_rank, first, second)
    return a.model_copy(update={"primes": [first.characteristic, second.characteristic]})
