"""
End-to-end checks of the headline results on the built-in algebras.

These run the full stack (sampling, certification, recursion, census) and
are slower than the unit tests.
"""

import io
import random
from math import gcd, prod

import pytest
from sympy import Matrix, Symbol, factor_list

from fatdual.bimod import (
    BimoduleElement,
    TriangularAlgebra,
    direct_sum,
    element_isomorphism,
    element_tits,
    ext_dims,
    hom_dim,
    orbit_dim,
    random_element,
    zero_element,
)
from fatdual.catalog import resolve_algebra
from fatdual.cli import run
from fatdual.degen import census, hom_order_leq, search_witness, verify_witness
from fatdual.enums import SummandKind
from fatdual.exactalg import GroundField, gl_order
from fatdual.fatsig import fat_signature
from fatdual.forms import bilinear, delta, hom_ext_dims, quiver_form, tits_quadratic
from fatdual.generic import generic_element, lemma_balance, pencil, tube_parameters
from fatdual.quiver import (
    a_n,
    a_tilde,
    d_n,
    d_tilde,
    e_n,
    e_tilde,
    kronecker,
    random_representation,
)
from fatdual.roots import coxeter, positive_roots

QQ = GroundField.rationals()

SMALL_QUIVERS = [
    *(a_n(k) for k in range(1, 10)),
    *(d_n(k) for k in range(4, 10)),
    e_n(6),
    e_n(7),
    e_n(8),
    *(a_tilde(k) for k in range(1, 9)),
    *(d_tilde(k) for k in range(4, 9)),
    e_tilde(6),
    e_tilde(7),
    e_tilde(8),
]


def _triangular(name: str) -> TriangularAlgebra:
    return TriangularAlgebra.from_basic(resolve_algebra(name, QQ))


@pytest.mark.parametrize(("m", "n"), [(1, 1), (2, 3), (4, 6), (3, 3), (6, 4)])
def test_block_triangular_signature_is_the_gcd(m, n):
    signature = fat_signature(resolve_algebra("t2"), [m, n], seed=20080101)
    assert signature.gl_degrees == [gcd(m, n)]
    assert signature.torus_rank == 0


@pytest.mark.parametrize("blocks", [[1, 1, 1], [1, 2, 1], [2, 2, 2]])
def test_three_blocks_are_seed_independent(blocks):
    results = {tuple(fat_signature(resolve_algebra("t3"), blocks, seed=s).gl_degrees) for s in range(5)}
    assert len(results) == 1
    for s in range(2):
        assert fat_signature(resolve_algebra("t3"), blocks, seed=s).torus_rank == 0


@pytest.mark.parametrize(("n", "q"), [(1, 2), (1, 3), (2, 2)])
def test_three_equal_blocks_match_the_census(n, q):
    """The generic orbit's stabiliser is the product of GL(d, q) over the signature's degrees."""
    signature = fat_signature(resolve_algebra("t3"), [n, n, n], seed=n)
    assert signature.gl_degrees == [n, n]
    assert signature.torus_rank == 0
    result = census(_triangular("t3"), n, [n, n], q, random.Random(q))
    smallest = min(o.end_dim for o in result.orbits)
    generic = [o for o in result.orbits if o.end_dim == smallest]
    assert len(generic) == 1
    assert smallest == sum(d * d for d in signature.gl_degrees)
    assert generic[0].aut_order == prod(gl_order(d, q) for d in signature.gl_degrees)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_kronecker_signature(n):
    signature = fat_signature(resolve_algebra("kronecker"), [n, n], seed=n)
    assert signature.gl_degrees == []
    assert signature.torus_rank == n
    assert signature.config_space is not None
    points = signature.config_space.observed_points
    assert sum(p.degree for p in points) == n
    assert len({p.key() for p in points}) == len(points)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_tube_points_match_the_pencil(n):
    """The pencil points agree with an independent factorisation of det(B - lambda A)."""
    w, dec = generic_element(_triangular("kronecker"), n, [n], 4, random.Random(n))
    params = tube_parameters(w, dec)
    blocks = pencil(w)
    assert blocks is not None
    to_sympy = w.field.domain.to_sympy
    A, B = (Matrix([[to_sympy(x) for x in row] for row in block]) for block in blocks)
    lam = Symbol("lam")
    _, factors = factor_list((B - lam * A).det(), lam)
    assert all(exponent == 1 for _, exponent in factors)
    finite = sorted(f.as_poly(lam).degree() for f, _ in factors if f.has(lam))
    assert sorted(p.degree for p in params.points if not p.at_infinity) == finite


def test_euler_form_equals_tits_form():
    """dim Hom - dim Ext^1 = <d, e> on random pairs for every small Dynkin and Euclidean quiver."""
    field = GroundField.prime(101)
    rng = random.Random(4)
    for quiver in SMALL_QUIVERS:
        form = quiver_form(quiver)
        for _ in range(100):
            d = [rng.randint(0, 2) for _ in range(quiver.vertex_count)]
            e = [rng.randint(0, 2) for _ in range(quiver.vertex_count)]
            hom, ext = hom_ext_dims(
                random_representation(quiver, d, field, rng), random_representation(quiver, e, field, rng)
            )
            assert hom - ext == bilinear(form, d, e), (quiver.arrows, d, e)


def test_bimodule_identities():
    """Euler form = bimodule Tits form, and orbit codimension = self-extension."""
    rng = random.Random(5)
    algebras = [_triangular(name) for name in ("t2", "t3", "kronecker", "a2tilde")]
    for k in range(50):
        T = algebras[k % len(algebras)]
        count = len(T.a2_vertices)
        w = random_element(T, rng.randint(0, 2), [rng.randint(0, 2) for _ in range(count)], rng)
        w2 = random_element(T, rng.randint(0, 2), [rng.randint(0, 2) for _ in range(count)], rng)
        hom, ext = ext_dims(w, w2)
        assert hom - ext == element_tits(w, w2)
        _, self_ext = ext_dims(w, w)
        assert w.p1 * w.width - orbit_dim(w) == self_ext


def test_root_data():
    for k in range(1, 7):
        assert len(positive_roots(a_n(k), 6)) == k * (k + 1) // 2
    assert len(positive_roots(d_n(4), 6)) == 12
    assert len(positive_roots(e_n(6), 3)) == 36
    for quiver in (kronecker(), a_tilde(2), d_tilde(4)):
        d = delta(quiver).coordinates
        assert tits_quadratic(quiver_form(quiver), d) == 0
        assert min(d) == 1
        assert coxeter(quiver).apply(d) == d


def _rank_drop_pairs(T: TriangularAlgebra):
    field = T.field
    for p1 in range(1, 4):
        for p2 in range(1, 4):
            for r in range(1, min(p1, p2) + 1):

                def block(rank, p1=p1, p2=p2):
                    return [[field.one if i == j and i < rank else field.zero for j in range(p2)] for i in range(p1)]

                yield (
                    BimoduleElement(algebra=T, p1=p1, p2=[p2], data=block(r)),
                    BimoduleElement(algebra=T, p1=p1, p2=[p2], data=block(r - 1)),
                )


def test_rank_drops_are_certified():
    T = _triangular("t2")
    rng = random.Random(6)
    for w, w2 in _rank_drop_pairs(T):
        witness = search_witness(w, w2, 2, rng)
        assert witness is not None, (w.format_rows(), w2.format_rows())
        assert verify_witness(w, w2, witness)
        assert hom_order_leq(w, w2, [w, w2]).consistent
        assert hom_dim(w, w) < hom_dim(w2, w2)
        assert not hom_order_leq(w2, w, [w, w2]).consistent
        if witness.v.module_dim():
            # a non-split conflation has a smaller End in the middle
            middle = direct_sum(w, witness.v)
            ends = direct_sum(w2, witness.v)
            assert hom_dim(middle, middle) < hom_dim(ends, ends)


@pytest.mark.parametrize("eigenvalue", ["0", "1", "-2", "1/3"])
def test_eigenvalue_collisions_are_certified(eigenvalue):
    T = _triangular("kronecker")
    field = T.field
    lam = field.parse(eigenvalue)
    one, zero = field.one, field.zero
    jordan = BimoduleElement(algebra=T, p1=2, p2=[2], data=[[one, zero, lam, one], [zero, one, zero, lam]])
    semisimple = BimoduleElement(algebra=T, p1=2, p2=[2], data=[[one, zero, lam, zero], [zero, one, zero, lam]])
    witness = search_witness(jordan, semisimple, 2, random.Random(7))
    assert witness is not None
    assert verify_witness(jordan, semisimple, witness)
    assert not hom_order_leq(semisimple, jordan, [jordan, semisimple]).consistent


@pytest.mark.parametrize("point", ["0", "1", "-1/2"])
def test_regular_points_collapse_to_zero(point):
    T = _triangular("kronecker")
    field = T.field
    regular = BimoduleElement(algebra=T, p1=1, p2=[1], data=[[field.one, field.parse(point)]])
    zero = zero_element(T, 1, [1])
    witness = search_witness(regular, zero, 2, random.Random(12))
    assert witness is not None
    assert verify_witness(regular, zero, witness)
    assert hom_order_leq(regular, zero, [regular, zero]).consistent
    assert not hom_order_leq(zero, regular, [regular, zero]).consistent


@pytest.mark.parametrize(
    ("name", "p1", "p2", "q"),
    [
        ("t2", 1, [1], 2),
        ("t2", 1, [2], 3),
        ("t2", 2, [1], 3),
        ("t2", 2, [2], 2),
        ("t2", 2, [2], 3),
        ("kronecker", 1, [1], 2),
        ("kronecker", 1, [1], 3),
    ],
)
def test_census_integrity(name, p1, p2, q):
    result = census(_triangular(name), p1, p2, q, random.Random(8))
    assert sum(o.size for o in result.orbits) == q**result.space_dim
    assert all(o.size * o.aut_order == result.group_order for o in result.orbits)
    reps = result.representatives()
    rng = random.Random(9)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            if i == j or result.orbits[i].end_dim != result.orbits[j].end_dim:
                continue
            if hom_order_leq(a, b, reps).consistent and hom_order_leq(b, a, reps).consistent:
                # equal End and both Hom orders: the orbits would coincide
                assert element_isomorphism(a, b, rng) is not None


@pytest.mark.parametrize(("name", "p1", "p2"), [("kronecker", 1, [1]), ("kronecker", 2, [2]), ("kronecker", 2, [1]), ("a2tilde", 1, [1, 0]), ("a2tilde", 2, [2, 0])])
def test_generic_decompositions_have_the_asserted_shape(name, p1, p2):
    T = _triangular(name)
    null_root = delta(kronecker() if name == "kronecker" else a_tilde(2))
    _, dec = generic_element(T, p1, p2, 4, random.Random(10), null_root=null_root)
    assert dec.certificate is not None
    for s in dec.summands():
        assert s.kind in (SummandKind.RIGID, SummandKind.DELTA)
        if s.kind == SummandKind.DELTA:
            assert s.dim_vector == [s.degree * c for c in null_root.coordinates]


def test_balance_identity():
    rng = random.Random(11)
    cases = [(_triangular("kronecker"), kronecker(), lambda k: (k, [k])), (_triangular("a2tilde"), a_tilde(2), lambda k: (k, [k, 0]))]
    for index in range(50):
        T, quiver, shape = cases[index % 2]
        p1, p2 = shape(rng.randint(1, 2))
        w = random_element(T, p1, p2, rng)
        z = random_element(T, rng.randint(0, 2), [rng.randint(0, 2) for _ in T.a2_vertices], rng)
        assert lemma_balance(w, z, delta(quiver)).holds


@pytest.mark.parametrize(
    "argv",
    [
        ["fat-subset", "--algebra", "t2", "--p", "4,6", "--trace"],
        ["fat-subset", "--algebra", "kronecker", "--p", "2,2"],
        ["decompose", "--algebra", "kronecker", "--p", "2,2"],
        ["census", "--algebra", "t2", "--p", "1,1", "--q", "2", "--bound", "1"],
        ["roots", "--algebra", "d4tilde", "--bound", "2"],
    ],
)
@pytest.mark.parametrize("output_format", ["table", "doc"])
def test_cli_runs_are_deterministic(argv, output_format):
    outputs = []
    for _ in range(2):
        out = io.StringIO()
        assert run([*argv, "--seed", "3", "--format", output_format], out, io.StringIO()) == 0
        outputs.append(out.getvalue())
    assert outputs[0] == outputs[1]
