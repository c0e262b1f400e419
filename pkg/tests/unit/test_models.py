"""Unit tests for the interchange documents."""

import random

import pytest
from pydantic import ValidationError

from fatdual.bimod import BimoduleError
from fatdual.catalog import resolve_algebra
from fatdual.degen import census
from fatdual.fatsig import fat_signature
from fatdual.generic import generic_element
from fatdual.models import (
    AlgebraDocument,
    CensusDocument,
    DecompositionDocument,
    ElementDocument,
    QuiverDocument,
    RunEnvelope,
    SignatureDocument,
    library_version,
)
from fatdual.quiver import kronecker
from fatdual.schema_config import DEFAULT_SCHEMA_VERSION


class TestQuiverDocument:
    """Tests for QuiverDocument."""

    def test_round_trip(self):
        document = QuiverDocument.from_quiver(kronecker())
        assert document.vertices == 2
        assert document.to_quiver() == kronecker()

    def test_loop_rejected(self):
        with pytest.raises(ValidationError):
            QuiverDocument(vertices=1, arrows=[(0, 0)])

    def test_needs_a_vertex(self):
        with pytest.raises(ValidationError):
            QuiverDocument(vertices=0)


class TestAlgebraDocument:
    """Tests for AlgebraDocument."""

    def test_alias_or_quiver(self):
        with pytest.raises(ValidationError, match="exactly one of 'alias' and 'quiver'"):
            AlgebraDocument()
        with pytest.raises(ValidationError, match="exactly one of 'alias' and 'quiver'"):
            AlgebraDocument(alias="t2", quiver=QuiverDocument(vertices=1))

    def test_characteristic_must_be_prime(self):
        with pytest.raises(ValidationError, match="0 or a prime"):
            AlgebraDocument(alias="t2", characteristic=4)

    def test_explicit_quiver(self):
        document = AlgebraDocument(quiver=QuiverDocument(vertices=2, arrows=[(0, 1)]), characteristic=3)
        algebra = document.to_algebra()
        assert algebra.dim == 3
        assert algebra.field.characteristic == 3


class TestElementDocument:
    """Tests for ElementDocument."""

    def test_integers_become_text(self):
        document = ElementDocument(algebra=AlgebraDocument(alias="t2"), p1=1, p2=[1], data=[[2]])
        assert document.data == [["2"]]
        assert document.to_element().format_rows() == [["2"]]

    def test_float_rejected(self):
        with pytest.raises(ValidationError, match="floats are not exact scalars"):
            ElementDocument(algebra=AlgebraDocument(alias="t2"), p1=1, p2=[1], data=[[1.5]])

    def test_bad_shape(self):
        document = ElementDocument(algebra=AlgebraDocument(alias="kronecker"), p1=1, p2=[1], data=[["1"]])
        with pytest.raises(BimoduleError, match="invalid element"):
            document.to_element()

    def test_from_element(self, kronecker_algebra, make_element):
        w = make_element(kronecker_algebra, 1, [1], [["1/3", 2]])
        document = ElementDocument.from_element(w, AlgebraDocument(alias="kronecker"))
        assert document.sink == 1
        assert document.data == [["1/3", "2"]]
        assert document.to_element().data == w.data

    def test_reduced_over_a_prime(self):
        document = ElementDocument(
            algebra=AlgebraDocument(alias="t2", characteristic=7), p1=1, p2=[1], data=[["1/2"]]
        )
        assert document.to_element().format_rows() == [["4"]]


class TestResultDocuments:
    """Tests for the result documents and the run envelope."""

    def test_signature_document(self):
        signature = fat_signature(resolve_algebra("t2"), [4, 6], seed=1)
        document = SignatureDocument.from_signature(signature, [4, 6], trace=False)
        assert document.gl_degrees == [2]
        assert document.trace == []
        assert document.model_dump(mode="json")["torus_rank"] == 0

    def test_decomposition_document(self, kronecker_algebra, rng):
        w, dec = generic_element(kronecker_algebra, 1, [1], 4, rng)
        document = DecompositionDocument.from_decomposition(w.p1, w.p2, dec)
        dumped = document.model_dump(mode="json")
        assert dumped["delta_brick_count"] == 1
        assert "element" not in dumped["delta_summands"][0]

    def test_census_document(self, t2):
        result = census(t2, 1, [1], 2, random.Random(0))
        document = CensusDocument.from_census(result, [(1, 0)])
        assert [o.size for o in document.orbits] == [1, 1]
        assert document.degenerations == [(1, 0)]

    def test_envelope_defaults(self):
        envelope = RunEnvelope(command="classify", seed=3, payload={})
        assert envelope.schemaVersion == DEFAULT_SCHEMA_VERSION
        assert envelope.version == library_version()
