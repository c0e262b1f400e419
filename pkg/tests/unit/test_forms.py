"""Unit tests for quiver forms, the null root and the defect."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from fatdual.exactalg import GroundField
from fatdual.forms import (
    FormError,
    FormMatrix,
    bilinear,
    bimodule_tits,
    defect,
    delta,
    euler_form_module,
    hom_ext_dims,
    quiver_form,
    symmetrized,
    tits_quadratic,
)
from fatdual.quiver import QuiverRepresentation, a_n, a_tilde, d_n, d_tilde, e_n, e_tilde, kronecker, random_representation

QQ = GroundField.rationals()


class TestFormMatrix:
    """Tests for FormMatrix and quiver_form."""

    def test_kronecker_form(self):
        assert quiver_form(kronecker()).entries == [[1, -2], [0, 1]]

    def test_counts_arrows_from_row_to_column(self):
        assert quiver_form(a_n(3)).entries == [[1, -1, 0], [0, 1, -1], [0, 0, 1]]

    def test_non_square_rejected(self):
        with pytest.raises(ValidationError, match="square"):
            FormMatrix(entries=[[1, 0]])

    def test_diagonal_must_be_one(self):
        with pytest.raises(ValidationError, match="diagonal"):
            FormMatrix(entries=[[2]])

    def test_symmetrized(self):
        assert symmetrized(quiver_form(kronecker())) == [[2, -2], [-2, 2]]

    def test_wrong_length(self):
        with pytest.raises(FormError, match="2 coordinates"):
            bilinear(quiver_form(kronecker()), [1], [1, 1])


class TestTitsForm:
    """Tests for bilinear and tits_quadratic."""

    def test_kronecker_values(self):
        form = quiver_form(kronecker())
        assert tits_quadratic(form, [1, 1]) == 0
        assert tits_quadratic(form, [1, 0]) == 1
        assert tits_quadratic(form, [1, 2]) == 1
        assert tits_quadratic(form, [1, 3]) == 4
        assert bilinear(form, [1, 0], [0, 1]) == -2
        assert bilinear(form, [0, 1], [1, 0]) == 0

    def test_bimodule_tits(self):
        assert bimodule_tits(4, 1, 2) == 3

    def test_euler_form_module(self):
        assert euler_form_module(3, 1) == 2


class TestDelta:
    """Tests for the null root."""

    @pytest.mark.parametrize(
        ("quiver", "expected"),
        [
            (kronecker(), [1, 1]),
            (a_tilde(2), [1, 1, 1]),
            (d_tilde(4), [1, 1, 2, 1, 1]),
            (d_tilde(5), [1, 1, 2, 2, 1, 1]),
        ],
    )
    def test_known_null_roots(self, quiver, expected):
        assert delta(quiver).coordinates == expected

    @pytest.mark.parametrize("quiver", [e_tilde(6), e_tilde(7), e_tilde(8), d_tilde(6), a_tilde(5)])
    def test_null_root_is_radical(self, quiver):
        """Q(delta) = 0, delta is positive and primitive."""
        d = delta(quiver).coordinates
        assert tits_quadratic(quiver_form(quiver), d) == 0
        assert all(x > 0 for x in d)
        assert 1 in d

    def test_e_tilde_8_has_six_at_the_centre(self):
        assert max(delta(e_tilde(8)).coordinates) == 6

    @pytest.mark.parametrize("quiver", [a_n(3), d_n(4), e_n(6)])
    def test_dynkin_has_no_null_root(self, quiver):
        with pytest.raises(FormError, match="no null root"):
            delta(quiver)


class TestDefect:
    """Tests for the defect."""

    def test_kronecker_simples(self):
        """The simple projective has negative defect, the simple injective positive."""
        assert defect(kronecker(), [0, 1]) == -1
        assert defect(kronecker(), [1, 0]) == 1

    def test_null_root_is_regular(self):
        assert defect(d_tilde(4), delta(d_tilde(4))) == 0


class TestHomExt:
    """Tests for Hom and Ext from the standard resolution of representations."""

    def test_simple_extension(self):
        """Ext(S0, S1) is one-dimensional along the arrow 0 -> 1."""
        q = a_n(2)
        s0 = QuiverRepresentation(quiver=q, field=QQ, dims=[1, 0], matrices=[[]])
        s1 = QuiverRepresentation(quiver=q, field=QQ, dims=[0, 1], matrices=[[[]]])
        assert hom_ext_dims(s0, s1) == (0, 1)
        assert hom_ext_dims(s1, s0) == (0, 0)
        assert hom_ext_dims(s0, s0) == (1, 0)

    def test_different_quivers(self):
        m = random_representation(a_n(2), [1, 1], QQ, random.Random(0))
        n = random_representation(kronecker(), [1, 1], QQ, random.Random(0))
        with pytest.raises(FormError, match="different quivers"):
            hom_ext_dims(m, n)

    @settings(max_examples=30, deadline=None)
    @given(
        d=st.lists(st.integers(min_value=0, max_value=2), min_size=2, max_size=2),
        e=st.lists(st.integers(min_value=0, max_value=2), min_size=2, max_size=2),
        seed=st.integers(min_value=0, max_value=10_000),
    )
    def test_euler_equals_tits_on_kronecker(self, d, e, seed):
        """dim Hom - dim Ext = <d, e> for every pair of representations."""
        q = kronecker()
        rng = random.Random(seed)
        m = random_representation(q, d, GroundField.prime(7), rng)
        n = random_representation(q, e, GroundField.prime(7), rng)
        hom, ext = hom_ext_dims(m, n)
        assert euler_form_module(hom, ext) == bilinear(quiver_form(q), d, e)
