"""Unit tests for quivers, classification and path algebras."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from fatdual.enums import DiagramFamily, GraphKind
from fatdual.errors import FatDualError
from fatdual.exactalg import GroundField
from fatdual.quiver import (
    DimVector,
    Quiver,
    QuiverError,
    a_n,
    a_tilde,
    classify,
    connected_components,
    d_n,
    d_tilde,
    e_n,
    e_tilde,
    gabriel_quiver,
    kronecker,
    path_algebra,
    random_representation,
    standard_diagram,
)

QQ = GroundField.rationals()


class TestQuiverModel:
    """Tests for Quiver validation and helpers."""

    def test_loop_rejected(self):
        """A loop is not a valid arrow."""
        with pytest.raises(ValidationError, match="loop"):
            Quiver(vertex_count=2, arrows=[(1, 1)])

    def test_endpoint_out_of_range(self):
        """Arrow endpoints must be vertices."""
        with pytest.raises(ValidationError, match="outside"):
            Quiver(vertex_count=2, arrows=[(0, 2)])

    def test_sources_and_sinks(self):
        q = a_n(3)
        assert q.sources() == [0]
        assert q.sinks() == [2]

    def test_opposite_reverses_arrows(self):
        assert a_n(3).opposite().arrows == [(1, 0), (2, 1)]

    def test_relabel_requires_permutation(self):
        """A relabeling that is not a permutation raises QuiverError."""
        with pytest.raises(QuiverError, match="permutation"):
            a_n(3).relabel([0, 0, 1])

    def test_reorient_flips_selected_arrows(self):
        assert a_n(3).reorient([1]).arrows == [(0, 1), (2, 1)]

    def test_oriented_cycle_is_not_acyclic(self):
        assert not Quiver(vertex_count=2, arrows=[(0, 1), (1, 0)]).is_acyclic()


class TestDimVector:
    """Tests for DimVector."""

    def test_of_checks_length(self):
        with pytest.raises(QuiverError, match="2 coordinates, quiver has 3 vertices"):
            DimVector.of(a_n(3), [1, 1])

    def test_negative_rejected(self):
        with pytest.raises(ValidationError, match="non-negative"):
            DimVector(coordinates=[1, -1])

    def test_helpers(self):
        d = DimVector(coordinates=[1, 0, 2])
        assert not d.is_sincere()
        assert not d.is_zero()
        assert d.total() == 3
        assert str(d) == "(1,0,2)"


class TestStandardDiagrams:
    """Tests for the diagram constructors."""

    def test_sizes(self):
        assert a_n(4).vertex_count == 4
        assert d_n(5).vertex_count == 5
        assert e_n(7).vertex_count == 7
        assert a_tilde(3).vertex_count == 4
        assert d_tilde(4).vertex_count == 5
        assert e_tilde(6).vertex_count == 7
        assert e_tilde(7).vertex_count == 8
        assert e_tilde(8).vertex_count == 9

    def test_kronecker_has_two_parallel_arrows(self):
        assert kronecker().arrows == [(0, 1), (0, 1)]

    def test_a_tilde_has_one_source_and_one_sink(self):
        q = a_tilde(3)
        assert q.sources() == [0]
        assert q.sinks() == [3]

    @pytest.mark.parametrize(
        ("builder", "n"),
        [(a_n, 0), (d_n, 3), (e_n, 5), (e_n, 9), (a_tilde, 0), (d_tilde, 3), (e_tilde, 5)],
    )
    def test_out_of_range(self, builder, n):
        with pytest.raises(QuiverError):
            builder(n)


class TestClassify:
    """Tests for classify."""

    @pytest.mark.parametrize(
        ("family", "rank", "kind", "tag"),
        [
            (DiagramFamily.A, 1, GraphKind.DYNKIN, "A1"),
            (DiagramFamily.A, 5, GraphKind.DYNKIN, "A5"),
            (DiagramFamily.D, 4, GraphKind.DYNKIN, "D4"),
            (DiagramFamily.D, 6, GraphKind.DYNKIN, "D6"),
            (DiagramFamily.E, 6, GraphKind.DYNKIN, "E6"),
            (DiagramFamily.E, 8, GraphKind.DYNKIN, "E8"),
            (DiagramFamily.A_TILDE, 1, GraphKind.EUCLIDEAN, "A~1"),
            (DiagramFamily.A_TILDE, 4, GraphKind.EUCLIDEAN, "A~4"),
            (DiagramFamily.D_TILDE, 4, GraphKind.EUCLIDEAN, "D~4"),
            (DiagramFamily.D_TILDE, 6, GraphKind.EUCLIDEAN, "D~6"),
            (DiagramFamily.E_TILDE, 6, GraphKind.EUCLIDEAN, "E~6"),
            (DiagramFamily.E_TILDE, 8, GraphKind.EUCLIDEAN, "E~8"),
        ],
    )
    def test_standard_diagrams(self, family, rank, kind, tag):
        result = classify(standard_diagram(family, rank))
        assert result.kind == kind
        assert result.tag == tag

    def test_wild_triple_arrow(self):
        result = classify(Quiver(vertex_count=2, arrows=[(0, 1)] * 3))
        assert result.kind == GraphKind.WILD
        assert result.tag == "Wild"
        assert result.relabeling is None

    def test_wild_star_with_five_arms(self):
        q = Quiver(vertex_count=6, arrows=[(i, 0) for i in range(1, 6)])
        assert classify(q).kind == GraphKind.WILD

    def test_disconnected(self):
        """classify only accepts connected quivers."""
        with pytest.raises(QuiverError, match="disconnected"):
            classify(Quiver(vertex_count=2))

    def test_relabeling_maps_onto_standard_diagram(self):
        q = Quiver(vertex_count=4, arrows=[(3, 0), (0, 2), (2, 1)])
        result = classify(q)
        assert result.tag == "A4"
        standard = set(map(frozenset, standard_diagram(DiagramFamily.A, 4).arrows))
        mapped = {frozenset((result.relabeling[s], result.relabeling[t])) for s, t in q.arrows}
        assert mapped == standard

    def test_quiver_error_is_typed(self):
        assert issubclass(QuiverError, FatDualError)

    @settings(max_examples=40, deadline=None)
    @given(flips=st.lists(st.integers(min_value=0, max_value=3), max_size=4), family_rank=st.sampled_from(
        [(DiagramFamily.D, 5), (DiagramFamily.A_TILDE, 3), (DiagramFamily.D_TILDE, 4), (DiagramFamily.E, 6)]
    ))
    def test_orientation_independent(self, flips, family_rank):
        """Reversing arrows never changes the graph class."""
        family, rank = family_rank
        q = standard_diagram(family, rank)
        flipped = q.reorient([i for i in flips if i < len(q.arrows)])
        assert classify(flipped).tag == classify(q).tag


class TestConnectedComponents:
    """Tests for connected_components."""

    def test_components_renumbered(self):
        q = Quiver(vertex_count=5, arrows=[(3, 4), (0, 2)])
        parts = connected_components(q)
        assert [p.vertex_count for p in parts] == [2, 1, 2]
        assert parts[0].arrows == [(0, 1)]
        assert parts[2].arrows == [(0, 1)]


class TestPathAlgebra:
    """Tests for path_algebra."""

    def test_dimension_counts_paths(self):
        assert path_algebra(a_n(3), QQ).dim == 6
        assert path_algebra(kronecker(), QQ).dim == 4
        assert path_algebra(a_tilde(2), QQ).dim == 7

    def test_peirce_pieces_are_paths(self):
        """f_t A f_s is spanned by the paths from s to t."""
        A = path_algebra(a_n(2), QQ)
        assert A.piece_dim(1, 0) == 1
        assert A.piece_dim(0, 1) == 0
        assert A.piece_dim(0, 0) == 1

    def test_kronecker_piece(self):
        A = path_algebra(kronecker(), QQ)
        assert A.piece_dim(1, 0) == 2

    def test_cycle_rejected(self):
        with pytest.raises(QuiverError, match="oriented cycle"):
            path_algebra(Quiver(vertex_count=2, arrows=[(0, 1), (1, 0)]), QQ)

    def test_directed(self):
        assert path_algebra(d_tilde(4), QQ).is_directed()

    @pytest.mark.parametrize("q", [a_n(3), kronecker(), d_n(4), a_tilde(2)])
    def test_gabriel_quiver_recovers_arrows(self, q):
        recovered = gabriel_quiver(path_algebra(q, QQ))
        assert sorted(recovered.arrows) == sorted(q.arrows)


class TestQuiverRepresentation:
    """Tests for random representations and their modules."""

    def test_random_representation_shapes(self):
        rep = random_representation(kronecker(), [2, 3], QQ, random.Random(1))
        assert rep.dim_vector.coordinates == [2, 3]
        assert len(rep.matrices) == 2
        assert all(len(m) == 3 and all(len(r) == 2 for r in m) for m in rep.matrices)

    def test_module_dimension(self):
        q = a_n(3)
        A = path_algebra(q, QQ)
        rep = random_representation(q, [1, 2, 1], QQ, random.Random(2))
        module = rep.to_module(A)
        assert module.dim == 4
