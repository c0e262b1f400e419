"""Unit tests for generic elements, their certified decompositions and pencils."""

import random

import pytest

from fatdual.enums import SummandKind
from fatdual.exactalg import GroundField
from fatdual.forms import delta
from fatdual.generic import (
    GenericDecomposition,
    GenericError,
    GenericSummand,
    certify,
    decomposition_of,
    end_algebra,
    generic_element,
    is_equioriented_type_a,
    lemma_balance,
    pencil_model,
    pencil_points,
    rigid_end_quiver,
    tube_parameters,
)
from fatdual.quiver import Quiver, a_n, kronecker

QQ = GroundField.rationals()
GF2 = GroundField.prime(2)
GF3 = GroundField.prime(3)


def _rows(entries, field=QQ):
    return [[field.parse(x) for x in row] for row in entries]


class TestEndAlgebra:
    """Tests for end_algebra and the summand kinds."""

    def test_projective_is_rigid(self, t2, make_element, rng):
        data = end_algebra(make_element(t2, 1, [1], [[1]]), rng)
        assert [s.kind for s in data.summands] == [SummandKind.RIGID]
        assert data.algebra.dim == 1

    def test_regular_point_is_a_delta_brick(self, kronecker_algebra, make_element, rng):
        data = end_algebra(make_element(kronecker_algebra, 1, [1], [[1, 3]]), rng)
        assert data.delta_flags == [True]
        assert data.summands[0].self_ext == 1

    def test_rank_one_splits_in_two(self, t2, make_element, rng):
        """A column of rank one is P0 + S1."""
        data = end_algebra(make_element(t2, 2, [1], [[1], [2]]), rng)
        assert [s.dim_vector for s in data.summands] == [[0, 1], [1, 1]]
        assert data.multiplicities == [1, 1]
        assert data.rigid_vertices() == [0, 1]

    def test_jordan_block_is_rejected(self, kronecker_algebra, make_element, rng):
        """A length-two regular module has End of dimension 2 and is neither kind."""
        jordan = make_element(kronecker_algebra, 2, [2], [[1, 0, 2, 1], [0, 1, 0, 2]])
        with pytest.raises(GenericError, match="neither rigid nor a delta-brick"):
            end_algebra(jordan, rng)


class TestGenericElement:
    """Tests for generic_element."""

    def test_t2_projective(self, t2, rng):
        w, dec = generic_element(t2, 1, [1], 4, rng)
        assert dec.is_rigid
        assert dec.end_dim == 1
        assert [s.dim_vector for s in dec.rigid_summands] == [[1, 1]]
        assert dec.certificate is not None
        assert dec.certificate.lookup(0, 0).hom == 1
        assert w.shape == (1, (1,))

    def test_kronecker_null_root(self, kronecker_algebra, rng):
        null_root = delta(kronecker())
        _, dec = generic_element(kronecker_algebra, 1, [1], 4, rng, null_root=null_root)
        assert dec.delta_brick_count == 1
        assert not dec.rigid_summands
        assert dec.delta_summands[0].dim_vector == [1, 1]

    def test_kronecker_two_points(self, kronecker_algebra, rng):
        """A generic 2x2 pencil has two distinct eigenvalues, possibly conjugate."""
        _, dec = generic_element(kronecker_algebra, 2, [2], 4, rng)
        assert dec.delta_brick_count == 2
        assert dec.end_dim == 2
        assert dec.type_key() == (((1, 1), 1, "delta"), ((1, 1), 1, "delta"))

    def test_mixed_shape(self, t2, rng):
        _, dec = generic_element(t2, 2, [1], 4, rng)
        assert [(s.dim_vector, s.multiplicity) for s in dec.rigid_summands] == [([0, 1], 1), ([1, 1], 1)]
        assert dec.end_dim == 3

    def test_needs_two_trials(self, t2, rng):
        with pytest.raises(GenericError, match="at least two trials"):
            generic_element(t2, 1, [1], 1, rng)

    def test_deterministic(self, kronecker_algebra):
        first = generic_element(kronecker_algebra, 2, [1], 4, random.Random(7))
        second = generic_element(kronecker_algebra, 2, [1], 4, random.Random(7))
        assert first[0].format_rows() == second[0].format_rows()
        assert first[1].type_key() == second[1].type_key()


class TestCertify:
    """Tests for certify."""

    def test_requires_summand_elements(self, t2, make_element):
        summand = GenericSummand(dim_vector=[1, 1], multiplicity=1, end_dim=1, self_ext=0, kind=SummandKind.RIGID)
        dec = GenericDecomposition(rigid_summands=[summand], delta_summands=[], end_dim=1)
        with pytest.raises(GenericError, match="no summand elements"):
            certify(dec, make_element(t2, 1, [1], [[1]]))

    def test_wrong_null_root(self, kronecker_algebra, make_element, rng):
        w = make_element(kronecker_algebra, 1, [1], [[1, 3]])
        dec = decomposition_of(end_algebra(w, rng))
        wrong = delta(kronecker()).model_copy(update={"coordinates": [1, 2]})
        with pytest.raises(GenericError, match="expected"):
            certify(dec, w, wrong)

    def test_certificate_is_complete(self, t2, make_element, rng):
        w = make_element(t2, 2, [1], [[1], [0]])
        dec = decomposition_of(end_algebra(w, rng))
        certificate = certify(dec, w)
        assert len(certificate.entries) == 4
        assert all(entry.ext == 0 for entry in certificate.entries)


class TestPencils:
    """Tests for pencil models and pencil points."""

    def test_kronecker_has_a_pencil(self, kronecker_algebra):
        assert pencil_model(kronecker_algebra) is not None

    def test_t2_has_none(self, t2):
        assert pencil_model(t2) is None

    def test_distinct_points(self):
        points = pencil_points(_rows([[1, 0], [0, 1]]), _rows([[1, 0], [0, 2]]), QQ)
        assert [p.value for p in points] == ["1", "2"]
        assert points[0].minimal_polynomial == ["1", "-1"]
        assert all(p.multiplicity == 1 for p in points)

    def test_point_at_infinity(self):
        points = pencil_points(_rows([[0]]), _rows([[1]]), QQ)
        assert len(points) == 1
        assert points[0].at_infinity

    def test_repeated_point(self):
        points = pencil_points(_rows([[1, 0], [0, 1]]), _rows([[2, 1], [0, 2]]), QQ)
        assert [(p.value, p.multiplicity) for p in points] == [("2", 2)]

    def test_irreducible_point(self):
        """lambda^2 + 1 has no rational root."""
        points = pencil_points(_rows([[1, 0], [0, 1]]), _rows([[0, -1], [1, 0]]), QQ)
        assert [(p.degree, p.value) for p in points] == [(2, None)]

    def test_points_over_gf2(self):
        """det(B - lambda A) = lambda (lambda - 1) even though every element of GF(2) is a root."""
        points = pencil_points(_rows([[1, 0], [0, 1]], GF2), _rows([[0, 0], [0, 1]], GF2), GF2)
        assert [(p.value, p.multiplicity) for p in points] == [("0", 1), ("1", 1)]

    def test_repeated_point_over_gf2(self):
        """lambda^2 - 1 = (lambda + 1)^2 in characteristic 2."""
        points = pencil_points(_rows([[1, 0], [0, 1]], GF2), _rows([[0, 1], [1, 0]], GF2), GF2)
        assert [(p.value, p.multiplicity) for p in points] == [("1", 2)]

    def test_points_over_gf3(self):
        identity = _rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]], GF3)
        points = pencil_points(identity, _rows([[0, 0, 0], [0, 1, 0], [0, 0, 2]], GF3), GF3)
        assert sorted(p.value for p in points) == ["0", "1", "2"]
        assert all(p.multiplicity == 1 and not p.at_infinity for p in points)

    def test_irreducible_point_over_gf3(self):
        """lambda^2 + 1 has no root in GF(3)."""
        points = pencil_points(_rows([[1, 0], [0, 1]], GF3), _rows([[0, 2], [1, 0]], GF3), GF3)
        assert [(p.degree, p.value, p.minimal_polynomial) for p in points] == [(2, None, ["1", "0", "1"])]

    def test_infinity_over_gf2(self):
        points = pencil_points(_rows([[0, 0], [0, 1]], GF2), _rows([[1, 0], [0, 1]], GF2), GF2)
        assert [(p.value, p.at_infinity) for p in points] == [("1", False), (None, True)]

    def test_not_square(self):
        with pytest.raises(GenericError, match="not square"):
            pencil_points(_rows([[1, 0]]), _rows([[1, 0]]), QQ)

    def test_singular(self):
        with pytest.raises(GenericError, match="singular pencil"):
            pencil_points(_rows([[0]]), _rows([[0]]), QQ)

    def test_tube_parameters(self, kronecker_algebra, make_element, rng):
        w = make_element(kronecker_algebra, 1, [1], [[1, 3]])
        params = tube_parameters(w, decomposition_of(end_algebra(w, rng)))
        assert params.supported
        assert len(params.points) == 1
        assert not params.points[0].at_infinity

    def test_tube_parameters_need_delta_bricks(self, t2, make_element, rng):
        w = make_element(t2, 1, [1], [[1]])
        with pytest.raises(GenericError, match="no delta-bricks"):
            tube_parameters(w, decomposition_of(end_algebra(w, rng)))


class TestStructuralChecks:
    """Tests for lemma_balance, is_equioriented_type_a and rigid_end_quiver."""

    def test_balance_on_distinct_points(self, kronecker_algebra, make_element):
        w = make_element(kronecker_algebra, 1, [1], [[1, 1]])
        z = make_element(kronecker_algebra, 1, [1], [[1, 2]])
        check = lemma_balance(w, z, delta(kronecker()))
        assert check.holds
        assert check.hom_forward == check.ext_forward == 0

    def test_balance_on_the_same_point(self, kronecker_algebra, make_element):
        w = make_element(kronecker_algebra, 1, [1], [[1, 1]])
        check = lemma_balance(w, w)
        assert check.holds
        assert check.hom_forward == 1

    def test_balance_needs_a_multiple(self, kronecker_algebra, make_element):
        w = make_element(kronecker_algebra, 1, [2], [[1, 0, 0, 1]])
        with pytest.raises(GenericError, match="not a multiple"):
            lemma_balance(w, w, delta(kronecker()))

    def test_equioriented(self):
        assert is_equioriented_type_a(a_n(4))
        assert is_equioriented_type_a(Quiver(vertex_count=3, arrows=[(0, 1)]))
        assert not is_equioriented_type_a(Quiver(vertex_count=3, arrows=[(0, 1), (2, 1)]))
        assert not is_equioriented_type_a(kronecker())

    def test_rigid_end_quiver(self, t2, make_element, rng):
        w = make_element(t2, 2, [1], [[1], [0]])
        quiver = rigid_end_quiver(decomposition_of(end_algebra(w, rng)))
        assert quiver.vertex_count == 2
        assert len(quiver.arrows) == 1
        assert is_equioriented_type_a(quiver)

    def test_rigid_end_quiver_needs_rigid_part(self, kronecker_algebra, make_element, rng):
        w = make_element(kronecker_algebra, 1, [1], [[1, 3]])
        with pytest.raises(GenericError, match="no rigid part"):
            rigid_end_quiver(decomposition_of(end_algebra(w, rng)))
