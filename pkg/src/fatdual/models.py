"""
Pydantic documents for the fatdual interchange format.

This module defines the structures read and written by the CLI:
- QuiverDocument and AlgebraDocument (a built-in alias or an explicit quiver)
- ElementDocument, a bimodule element with exact scalars as "num/den" strings
- SignatureDocument, DecompositionDocument and CensusDocument for results
- RunEnvelope, which wraps every result with the seed, the library version
  and the schema version

Floats are rejected everywhere; the documents are meant to round-trip
exactly through JSON and YAML.
"""

from importlib.metadata import PackageNotFoundError, version
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from sympy import isprime

from .bimod import BimoduleElement, BimoduleError, TriangularAlgebra
from .catalog import resolve_algebra
from .degen import OrbitCensus
from .exactalg import BasicAlgebra, GroundField
from .fatsig import ConfigSpace, FatSignature, TraceStep
from .generic import Certificate, GenericDecomposition, GenericSummand, TubeParameters
from .quiver import Quiver, path_algebra
from .schema_config import DEFAULT_SCHEMA_VERSION

DISTRIBUTION_NAME = "fatdual-py"


def library_version() -> str:
    """Installed version of the distribution, or "0.0.0" from a source checkout."""
    try:
        return version(DISTRIBUTION_NAME)
    except PackageNotFoundError:
        return "0.0.0"


class QuiverDocument(BaseModel):
    """`vertices: n` and `arrows: [[s, t], ...]` with 0-based vertex indices."""

    model_config = ConfigDict(frozen=True)

    vertices: int = Field(ge=1)
    arrows: list[tuple[int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _valid_quiver(self) -> "QuiverDocument":
        self.to_quiver()
        return self

    def to_quiver(self) -> Quiver:
        return Quiver(vertex_count=self.vertices, arrows=list(self.arrows))

    @classmethod
    def from_quiver(cls, quiver: Quiver) -> "QuiverDocument":
        return cls(vertices=quiver.vertex_count, arrows=list(quiver.arrows))


class AlgebraDocument(BaseModel):
    """
    A path algebra given by a built-in alias or by an explicit quiver.

    `characteristic` 0 means the rationals; a prime selects GF(p).
    """

    model_config = ConfigDict(frozen=True)

    alias: str | None = None
    quiver: QuiverDocument | None = None
    characteristic: int = Field(default=0, ge=0)

    @field_validator("characteristic")
    @classmethod
    def _zero_or_prime(cls, v: int) -> int:
        if v and not isprime(v):
            raise ValueError(f"characteristic must be 0 or a prime, got {v}")
        return v

    @model_validator(mode="after")
    def _alias_xor_quiver(self) -> "AlgebraDocument":
        if (self.alias is None) == (self.quiver is None):
            raise ValueError("exactly one of 'alias' and 'quiver' must be given")
        return self

    def field(self) -> GroundField:
        return GroundField.prime(self.characteristic) if self.characteristic else GroundField.rationals()

    def to_algebra(self) -> BasicAlgebra:
        if self.alias is not None:
            return resolve_algebra(self.alias, self.field())
        assert self.quiver is not None
        return path_algebra(self.quiver.to_quiver(), self.field())


def _reject_floats(value: Any, where: str) -> Any:
    if isinstance(value, float):
        raise ValueError(f"{where}: floats are not exact scalars, write \"num/den\" instead of {value!r}")
    if isinstance(value, list):
        return [_reject_floats(item, where) for item in value]
    return value


def _as_text(value: Any) -> Any:
    if isinstance(value, int) and not isinstance(value, bool):
        return str(value)
    return value


class ElementDocument(BaseModel):
    """
    A bimodule element over the algebra split at `sink` (default: its lowest sink).

    `data` is the p1 x width matrix of scalars, each an integer or a "num/den" string.
    """

    model_config = ConfigDict(frozen=True)

    algebra: AlgebraDocument
    sink: int | None = None
    p1: int = Field(ge=0)
    p2: list[int]
    data: list[list[str]]

    @field_validator("data", mode="before")
    @classmethod
    def _exact_scalars(cls, v: Any) -> Any:
        v = _reject_floats(v, "data")
        if not isinstance(v, list):
            return v
        return [[_as_text(x) for x in row] if isinstance(row, list) else row for row in v]

    def to_element(self) -> BimoduleElement:
        basic = self.algebra.to_algebra()
        T = TriangularAlgebra.from_basic(basic, self.sink)
        field = T.field
        rows = [[field.parse(x) for x in row] for row in self.data]
        try:
            return BimoduleElement(algebra=T, p1=self.p1, p2=list(self.p2), data=rows)
        except ValidationError as e:
            raise BimoduleError(f"invalid element: {e.errors()[0]['msg']}") from e

    @classmethod
    def from_element(cls, w: BimoduleElement, algebra: AlgebraDocument) -> "ElementDocument":
        return cls(algebra=algebra, sink=w.algebra.sink, p1=w.p1, p2=list(w.p2), data=w.format_rows())


class SignatureDocument(BaseModel):
    """The fat-subset signature with its recursion trace."""

    model_config = ConfigDict(frozen=True)

    multiplicities: list[int]
    gl_degrees: list[int]
    torus_rank: int = Field(ge=0)
    config_space: ConfigSpace | None = None
    primes: list[int] = Field(default_factory=list)
    trace: list[TraceStep] = Field(default_factory=list)

    @classmethod
    def from_signature(cls, signature: FatSignature, multiplicities: list[int], trace: bool = True) -> "SignatureDocument":
        return cls(
            multiplicities=list(multiplicities),
            gl_degrees=signature.gl_degrees,
            torus_rank=signature.torus_rank,
            config_space=signature.config_space,
            primes=signature.primes,
            trace=signature.trace if trace else [],
        )


class DecompositionDocument(BaseModel):
    """A certified generic decomposition: rigid summands, delta-bricks and tube points."""

    model_config = ConfigDict(frozen=True)

    p1: int
    p2: list[int]
    end_dim: int
    delta_brick_count: int
    rigid_summands: list[GenericSummand]
    delta_summands: list[GenericSummand]
    tube_parameters: TubeParameters | None = None
    certificate: Certificate | None = None

    @classmethod
    def from_decomposition(cls, p1: int, p2: list[int], dec: GenericDecomposition) -> "DecompositionDocument":
        return cls(
            p1=p1,
            p2=list(p2),
            end_dim=dec.end_dim,
            delta_brick_count=dec.delta_brick_count,
            rigid_summands=dec.rigid_summands,
            delta_summands=dec.delta_summands,
            tube_parameters=dec.tube_parameters,
            certificate=dec.certificate,
        )


class OrbitDocument(BaseModel):
    """One census orbit: code of its smallest element, size, End dimension, |Aut| and rank."""

    model_config = ConfigDict(frozen=True)

    code: int
    size: int
    end_dim: int
    aut_order: int
    rank: int


class CensusDocument(BaseModel):
    """Orbits of one shape over GF(q) and the certified degenerations between them."""

    model_config = ConfigDict(frozen=True)

    q: int
    p1: int
    p2: list[int]
    space_dim: int
    group_order: int
    orbits: list[OrbitDocument]
    hom_table: list[list[int]]
    degenerations: list[tuple[int, int]] = Field(default_factory=list)

    @classmethod
    def from_census(cls, result: OrbitCensus, degenerations: list[tuple[int, int]] | None = None) -> "CensusDocument":
        return cls(
            q=result.q,
            p1=result.p1,
            p2=result.p2,
            space_dim=result.space_dim,
            group_order=result.group_order,
            orbits=[OrbitDocument(**o.model_dump()) for o in result.orbits],
            hom_table=result.hom_table,
            degenerations=sorted(degenerations or []),
        )


class RunEnvelope(BaseModel):
    """Every CLI result: command, seed, versions and the payload document."""

    model_config = ConfigDict(frozen=True)

    schemaVersion: str = DEFAULT_SCHEMA_VERSION
    version: str = Field(default_factory=library_version)
    command: str
    seed: int
    payload: dict[str, Any]
