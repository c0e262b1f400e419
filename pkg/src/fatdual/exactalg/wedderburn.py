"""
Radical, Wedderburn data and idempotents of structure-constant algebras.

The radical is the kernel of the trace form (characteristic 0 or p > dim A)
or the result of the lifted-trace iteration over small prime fields. The
semisimple quotient is split through its centre: minimal polynomials of random
central elements are factored and turned into idempotents with the Chinese
remainder theorem. Idempotents of the quotient are lifted back with
e -> 3e^2 - 2e^3.
"""

import logging
import math
import random
from collections.abc import Sequence
from typing import Any

from pydantic import BaseModel, ConfigDict, Field
from sympy import Poly
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from ..errors import InternalConsistencyError
from . import linalg
from .algebra import BasicAlgebra, SCAlgebra
from .field import ExactAlgebraError, GroundField
from .linalg import Subspace, Vector

logger = logging.getLogger(__name__)

SPLIT_ATTEMPTS = 64
RATIONAL_SPLIT_ATTEMPTS = 40
# Small box for rational draws while looking for a splitting element: rational
# eigenvalues are far more frequent among small integer matrices.
RATIONAL_SPLIT_BOX = 2


class WedderburnComponent(BaseModel):
    """A simple component Mat(size, K) of A/rad A with [K : k] = degree."""

    degree: int = Field(ge=1)
    size: int = Field(ge=1)


class WedderburnData(BaseModel):
    """
    Radical and semisimple structure of an algebra.

    `block_sizes` are absolute: a component Mat(d, K) with [K : k] = t
    contributes t blocks of size d. `primitive_idempotents` holds one
    primitive idempotent of A per component (primitive over the ground
    field), `central_idempotents` the primitive central idempotents of A.
    When the computation had to leave the rationals, `field` records the
    prime field the idempotents live in.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    field: GroundField
    radical: Subspace
    components: list[WedderburnComponent]
    primitive_idempotents: list[list[Any]]
    central_idempotents: list[list[Any]]
    passed_to_prime: bool = False

    @property
    def block_sizes(self) -> list[int]:
        sizes: list[int] = []
        for comp in self.components:
            sizes.extend([comp.size] * comp.degree)
        return sorted(sizes)

    @property
    def radical_dim(self) -> int:
        return self.radical.dim


class SplittingFailed(ExactAlgebraError):
    """Raised when random elements never produced a splitting over the rationals."""

    pass


# ---- radical ----


def _lifted_trace(algebra: SCAlgebra, x: Sequence[Any], level: int) -> Any:
    """Tr(x~^(p^level)) / p^level mod p for an integer lift x~ of left multiplication by x."""
    field = algebra.field
    p = field.characteristic
    if level == 0:
        return algebra.trace(x)
    lifted = [[field.to_int(c) for c in row] for row in algebra.left_matrix(x)]
    n = algebra.dim
    power = DomainMatrix([[ZZ(c) for c in row] for row in lifted], (n, n), ZZ) ** (p**level)
    trace = sum(int(power[i, i].element) for i in range(n))
    if trace % p**level:
        raise InternalConsistencyError(f"lifted trace at level {level} is not divisible by p^{level}")
    return field.from_int(trace // p**level)


def radical(algebra: SCAlgebra) -> Subspace:
    """
    Basis of the Jacobson radical.

    Over QQ, and over GF(p) with p > dim A, this is the kernel of the trace
    form (x, y) -> Tr(xy). Over smaller prime fields the kernel is refined
    level by level with the lifted traces Tr(x~^(p^i))/p^i for
    i <= log_p(dim A). Nilpotency of the result is verified.

    Raises:
        InternalConsistencyError: If the computed ideal is not nilpotent
    """
    n = algebra.dim
    field = algebra.field
    if n == 0:
        return Subspace(field=field, ambient=0, basis=[], pivots=[])
    p = field.characteristic
    levels = 0
    if p and p <= n:
        while p ** (levels + 1) <= n:
            levels += 1
    current = Subspace.whole(n, field)
    basis_all = [algebra.basis_vector(j) for j in range(n)]
    for level in range(levels + 1):
        if current.dim == 0:
            break
        dod: dict[int, dict[int, Any]] = {}
        for k, u in enumerate(current.basis):
            for j, b in enumerate(basis_all):
                value = _lifted_trace(algebra, algebra.mul(u, b), level)
                if value:
                    dod.setdefault(j, {})[k] = value
        null = linalg.kernel(linalg.sparse_matrix(dod, (n, current.dim), field))
        current = Subspace.span([current.vector(c) for c in null], n, field)
    powers = radical_powers(algebra, current)
    logger.debug("radical of a %d-dimensional algebra has dimension %d (nilpotency %d)", n, current.dim, len(powers))
    return current


def radical_powers(algebra: SCAlgebra, ideal: Subspace) -> list[Subspace]:
    """
    [J, J^2, ..., J^k] with J^(k+1) = 0.

    Raises:
        InternalConsistencyError: If the powers stop decreasing before reaching zero
    """
    powers: list[Subspace] = []
    current = ideal
    while current.dim:
        powers.append(current)
        nxt = algebra.span_products(current.basis, ideal.basis)
        if nxt.dim >= current.dim:
            raise InternalConsistencyError("radical candidate is not nilpotent")
        current = nxt
    return powers


# ---- idempotents ----


def _crt_idempotent(algebra: SCAlgebra, x: Vector, unit: Vector, minpoly: Poly) -> Vector | None:
    """
    The idempotent polynomial in x that is 1 on the first primary factor of
    the minimal polynomial and 0 on the others; None if there is one factor.
    """
    factors = minpoly.factor_list()[1]
    if len(factors) < 2:
        return None
    head, mult = factors[0]
    primary = head**mult
    rest = minpoly.exquo(primary)
    s, _, h = rest.gcdex(primary)
    if h.degree() != 0:
        raise InternalConsistencyError("primary factors of a minimal polynomial are not coprime")
    poly = (s * rest).rem(minpoly)
    return algebra.evaluate(poly, x, unit)


def _draw(algebra: SCAlgebra, rng: random.Random, frame_basis: Sequence[Sequence[Any]]) -> Vector:
    field = algebra.field
    if field.is_prime_field:
        coeffs = [field.random_element(rng) for _ in frame_basis]
    else:
        coeffs = [field.from_int(rng.randint(-RATIONAL_SPLIT_BOX, RATIONAL_SPLIT_BOX)) for _ in frame_basis]
    return linalg.combine(coeffs, frame_basis, algebra.dim, field)


def corner_dim(algebra: SCAlgebra, e: Sequence[Any]) -> int:
    images = [algebra.product(e, algebra.basis_vector(i), e) for i in range(algebra.dim)]
    return linalg.rank_of_rows(images, algebra.dim, algebra.field)


def split_commutative(algebra: SCAlgebra, unit: Vector, rng: random.Random) -> list[Vector]:
    """
    Primitive idempotents of a commutative semisimple algebra (or subalgebra
    with identity `unit`), found by recursive splitting with random elements.

    Raises:
        ExactAlgebraError: If no splitting element is found
    """
    pieces = [unit]
    done: list[Vector] = []
    while pieces:
        e = pieces.pop()
        span = Subspace.span([algebra.mul(e, algebra.basis_vector(i)) for i in range(algebra.dim)], algebra.dim, algebra.field)
        for _ in range(SPLIT_ATTEMPTS):
            x = algebra.random_element(rng, span)
            minpoly = algebra.minimal_polynomial(x, e)
            u = _crt_idempotent(algebra, x, e, minpoly)
            if u is not None:
                pieces.extend([u, linalg.sub(e, u)])
                break
            if minpoly.degree() == span.dim:
                done.append(e)
                break
        else:
            raise ExactAlgebraError(f"could not split a {span.dim}-dimensional commutative algebra")
    return done


def split_simple(algebra: SCAlgebra, e: Vector, degree: int, rng: random.Random) -> list[Vector]:
    """
    Split an idempotent e whose corner eAe is simple semisimple (Mat(r, K),
    [K:k] = degree) into r orthogonal primitive idempotents.

    Raises:
        SplittingFailed: Over QQ, when no rational splitting element turned up
    """
    out: list[Vector] = []
    pending = [e]
    attempts = RATIONAL_SPLIT_ATTEMPTS if not algebra.field.is_prime_field else SPLIT_ATTEMPTS
    while pending:
        f = pending.pop()
        if corner_dim(algebra, f) == degree:
            out.append(f)
            continue
        corner_basis = Subspace.span(
            [algebra.product(f, algebra.basis_vector(i), f) for i in range(algebra.dim)], algebra.dim, algebra.field
        ).basis
        for _ in range(attempts):
            x = _draw(algebra, rng, corner_basis)
            u = _crt_idempotent(algebra, x, f, algebra.minimal_polynomial(x, f))
            if u is not None:
                pending.extend([u, linalg.sub(f, u)])
                break
        else:
            raise SplittingFailed(f"no splitting element found over {algebra.field}")
    return out


def lift_idempotent(algebra: SCAlgebra, a: Vector, within: Vector | None = None) -> Vector:
    """
    Lift an element that is idempotent modulo the radical to a true idempotent
    by iterating a -> 3a^2 - 2a^3 (inside the corner of `within` if given).

    Raises:
        InternalConsistencyError: If the iteration does not converge
    """
    field = algebra.field
    x = list(a) if within is None else algebra.product(within, a, within)
    three, two = field.from_int(3), field.from_int(2)
    for _ in range(algebra.dim + 2):
        sq = algebra.mul(x, x)
        if sq == x:
            return x
        cube = algebra.mul(sq, x)
        x = linalg.sub(linalg.scale(three, sq), linalg.scale(two, cube))
    raise InternalConsistencyError("idempotent lifting did not converge")


def lift_orthogonal(algebra: SCAlgebra, preimages: Sequence[Vector]) -> list[Vector]:
    """Lift a complete orthogonal family of idempotents mod rad to one of A, in order."""
    lifted: list[Vector] = []
    rest = list(algebra.unit)
    for a in preimages:
        e = lift_idempotent(algebra, a, rest)
        lifted.append(e)
        rest = linalg.sub(rest, e)
    return lifted


# ---- Wedderburn ----


def _components(quotient: SCAlgebra, rng: random.Random) -> list[tuple[Vector, int, int]]:
    """(central idempotent, degree, size) for each simple component of a semisimple algebra."""
    centre = quotient.center()
    field = quotient.field
    central = split_commutative(quotient, list(quotient.unit), rng) if centre.dim == quotient.dim else None
    if central is None:
        zalg = quotient.subalgebra(centre.basis, quotient.unit)
        central_local = split_commutative(zalg, list(zalg.unit), rng)
        central = [linalg.combine(c, centre.basis, quotient.dim, field) for c in central_local]
    out = []
    for eps in central:
        degree = linalg.rank_of_rows([quotient.mul(eps, z) for z in centre.basis], quotient.dim, field)
        block_dim = linalg.rank_of_rows(
            [quotient.mul(eps, quotient.basis_vector(i)) for i in range(quotient.dim)], quotient.dim, field
        )
        size = math.isqrt(block_dim // degree)
        if block_dim % degree or size * size * degree != block_dim:
            raise ExactAlgebraError(f"component of dimension {block_dim} over a degree-{degree} centre is not a matrix algebra")
        out.append((eps, degree, size))
    out.sort(key=lambda c: (c[2], c[1]))
    return out


def _embed(columns: Sequence[int], coords: Sequence[Any], dim: int, field: GroundField) -> Vector:
    v = [field.zero] * dim
    for c, x in zip(columns, coords, strict=True):
        v[c] = x
    return v


def primitive_idempotents(algebra: SCAlgebra, rng: random.Random) -> tuple[list[tuple[Vector, int]], list[WedderburnComponent], Subspace]:
    """
    A complete set of orthogonal primitive idempotents of A summing to 1, each
    tagged with the index of its Wedderburn component, plus the components
    and the radical.

    Raises:
        SplittingFailed: Over QQ, when a matrix component does not split rationally
    """
    field = algebra.field
    rad = radical(algebra)
    quotient, columns = algebra.quotient(rad)
    comps = _components(quotient, rng)
    tagged: list[tuple[Vector, int]] = []
    for index, (eps, degree, size) in enumerate(comps):
        pieces = [eps] if size == 1 else split_simple(quotient, eps, degree, rng)
        if len(pieces) != size:
            raise InternalConsistencyError(f"expected {size} primitive idempotents, found {len(pieces)}")
        tagged.extend((p, index) for p in pieces)
    lifted = lift_orthogonal(algebra, [_embed(columns, p, algebra.dim, field) for p, _ in tagged])
    if linalg.combine([field.one] * len(lifted), lifted, algebra.dim, field) != list(algebra.unit):
        raise InternalConsistencyError("lifted idempotents do not sum to the unit")
    components = [WedderburnComponent(degree=d, size=s) for _, d, s in comps]
    return [(e, idx) for e, (_, idx) in zip(lifted, tagged, strict=True)], components, rad


def central_idempotents(algebra: SCAlgebra, rng: random.Random) -> list[Vector]:
    """Primitive central idempotents of A (one per indecomposable two-sided block)."""
    centre = algebra.center()
    field = algebra.field
    zalg = algebra.subalgebra(centre.basis, algebra.unit)
    zrad = radical(zalg)
    zquot, columns = zalg.quotient(zrad)
    pieces = split_commutative(zquot, list(zquot.unit), rng)
    lifted = lift_orthogonal(zalg, [_embed(columns, p, zalg.dim, field) for p in pieces])
    return [linalg.combine(c, centre.basis, algebra.dim, field) for c in lifted]


def wedderburn(algebra: SCAlgebra, rng: random.Random, prime_floor: int = 2**31) -> WedderburnData:
    """
    Radical, simple components and idempotents of A.

    Over QQ, when a matrix component does not split with rational elements,
    the algebra is reduced modulo a large prime and the data are computed
    there (recorded by `passed_to_prime`).
    """
    try:
        tagged, components, rad = primitive_idempotents(algebra, rng)
        target = algebra
        passed = False
    except SplittingFailed:
        prime = GroundField.large_prime(rng, prime_floor)
        logger.warning("rational splitting failed; passing to %s", prime)
        target = algebra.reduce_mod(prime)
        tagged, components, rad = primitive_idempotents(target, rng)
        passed = True
    first: dict[int, Vector] = {}
    for e, idx in tagged:
        first.setdefault(idx, e)
    data = WedderburnData(
        field=target.field,
        radical=rad,
        components=components,
        primitive_idempotents=[first[i] for i in range(len(components))],
        central_idempotents=central_idempotents(target, rng),
        passed_to_prime=passed,
    )
    if sum(c.degree * c.size**2 for c in components) + rad.dim != algebra.dim:
        raise InternalConsistencyError("Wedderburn dimensions do not add up")
    return data


def gl_order(d: int, q: int) -> int:
    """|GL(d, F_q)|."""
    return math.prod(q**d - q**i for i in range(d))


def unit_group_order(algebra: SCAlgebra, rng: random.Random) -> int:
    """
    Number of units of an algebra over a finite field:
    q^dim(rad) * prod |GL(d_i, q^t_i)| over the simple components.

    Raises:
        ExactAlgebraError: Over QQ, where the unit group is infinite
    """
    q = algebra.field.order
    if q is None:
        raise ExactAlgebraError("unit group order is only defined over a finite field")
    rad = radical(algebra)
    quotient, _ = algebra.quotient(rad)
    order = q**rad.dim
    for _, degree, size in _components(quotient, rng):
        order *= gl_order(size, q**degree)
    return order


def gabriel_arrows(algebra: BasicAlgebra) -> list[tuple[int, int]]:
    """
    Arrows of the Ext-quiver of a basic algebra: s -> t repeated
    dim f_t (J/J^2) f_s times.
    """
    rad = radical(algebra)
    rad2 = algebra.span_products(rad.basis, rad.basis)
    arrows: list[tuple[int, int]] = []
    for s in range(algebra.vertex_count):
        for t in range(algebra.vertex_count):
            fs, ft = algebra.vertex_vector(s), algebra.vertex_vector(t)
            top = Subspace.span([algebra.product(ft, x, fs) for x in rad.basis], algebra.dim, algebra.field)
            low = Subspace.span([algebra.product(ft, x, fs) for x in rad2.basis], algebra.dim, algebra.field)
            arrows.extend([(s, t)] * (top.dim - low.dim))
    return arrows
