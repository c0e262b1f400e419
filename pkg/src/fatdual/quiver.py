"""
Quivers, dimension vectors and the Dynkin / Euclidean / wild trichotomy.

This module provides:
- Quiver and DimVector, the combinatorial carriers of all form computations
- classify(), which recognises the underlying graph of a connected quiver and
  relabels it onto the standard diagram
- connected_components()
- constructors for the standard diagrams
- QuiverRepresentation and path_algebra(), linking quivers to the exact
  algebra engine
"""

import random
from collections import Counter
from collections.abc import Sequence
from fractions import Fraction
from typing import Any

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import Matrix

from .enums import DiagramFamily, GraphKind
from .errors import FatDualError, InternalConsistencyError
from .exactalg import BasicAlgebra, GroundField, SCModule, gabriel_arrows
from .exactalg import linalg
from .exactalg.linalg import Rows


class QuiverError(FatDualError):
    """Exception raised for invalid quivers or unsupported quiver operations."""

    pass


class Quiver(BaseModel):
    """
    A finite quiver on vertices 0..vertex_count-1.

    Arrows are ordered (source, target) pairs; parallel arrows are allowed,
    loops are not.
    """

    model_config = ConfigDict(frozen=True)

    vertex_count: int = Field(ge=1)
    arrows: list[tuple[int, int]] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_arrows(self) -> "Quiver":
        for index, (s, t) in enumerate(self.arrows):
            if not (0 <= s < self.vertex_count and 0 <= t < self.vertex_count):
                raise ValueError(f"arrow {index} ({s}->{t}) has an endpoint outside 0..{self.vertex_count - 1}")
            if s == t:
                raise ValueError(f"arrow {index} is a loop at vertex {s}")
        return self

    def underlying_graph(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.arrows)
        return graph

    def directed_graph(self) -> nx.MultiDiGraph:
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(range(self.vertex_count))
        graph.add_edges_from(self.arrows)
        return graph

    def is_acyclic(self) -> bool:
        return nx.is_directed_acyclic_graph(self.directed_graph())

    def sources(self) -> list[int]:
        targets = {t for _, t in self.arrows}
        return [v for v in range(self.vertex_count) if v not in targets]

    def sinks(self) -> list[int]:
        starts = {s for s, _ in self.arrows}
        return [v for v in range(self.vertex_count) if v not in starts]

    def opposite(self) -> "Quiver":
        return Quiver(vertex_count=self.vertex_count, arrows=[(t, s) for s, t in self.arrows])

    def relabel(self, permutation: Sequence[int]) -> "Quiver":
        """The quiver with vertex v renamed permutation[v]."""
        if sorted(permutation) != list(range(self.vertex_count)):
            raise QuiverError("relabeling must be a permutation of the vertices")
        return Quiver(
            vertex_count=self.vertex_count,
            arrows=[(permutation[s], permutation[t]) for s, t in self.arrows],
        )

    def reorient(self, flips: Sequence[int]) -> "Quiver":
        """The quiver with the arrows at the given indices reversed."""
        flipped = set(flips)
        return Quiver(
            vertex_count=self.vertex_count,
            arrows=[(t, s) if i in flipped else (s, t) for i, (s, t) in enumerate(self.arrows)],
        )


class DimVector(BaseModel):
    """One non-negative integer per vertex."""

    model_config = ConfigDict(frozen=True)

    coordinates: list[int]

    @field_validator("coordinates")
    @classmethod
    def _non_negative(cls, v: list[int]) -> list[int]:
        if any(c < 0 for c in v):
            raise ValueError("dimension vector coordinates must be non-negative")
        return v

    @classmethod
    def of(cls, quiver: Quiver, coordinates: Sequence[int]) -> "DimVector":
        """
        Raises:
            QuiverError: If the length does not match the quiver
        """
        if len(coordinates) != quiver.vertex_count:
            raise QuiverError(f"dimension vector has {len(coordinates)} coordinates, quiver has {quiver.vertex_count} vertices")
        return cls(coordinates=list(coordinates))

    def __len__(self) -> int:
        return len(self.coordinates)

    def __getitem__(self, i: int) -> int:
        return self.coordinates[i]

    def is_sincere(self) -> bool:
        return all(c > 0 for c in self.coordinates)

    def is_zero(self) -> bool:
        return not any(self.coordinates)

    def total(self) -> int:
        return sum(self.coordinates)

    def __str__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coordinates) + ")"


class GraphClass(BaseModel):
    """
    Representation type of a connected quiver's underlying graph, with the
    vertex relabeling onto the standard diagram (None for wild graphs).
    """

    model_config = ConfigDict(frozen=True)

    kind: GraphKind
    family: DiagramFamily | None = None
    rank: int | None = None
    relabeling: dict[int, int] | None = None

    @property
    def tag(self) -> str:
        if self.kind == GraphKind.WILD:
            return "Wild"
        assert self.family is not None
        return f"{self.family.value}{self.rank}"


# ---- standard diagrams ----


def a_n(n: int) -> Quiver:
    """Linear A_n, arrows i -> i+1."""
    if n < 1:
        raise QuiverError("A_n needs n >= 1")
    return Quiver(vertex_count=n, arrows=[(i, i + 1) for i in range(n - 1)])


def d_n(n: int) -> Quiver:
    """D_n: a chain 0..n-3 with two leaves n-2, n-1 on vertex n-3."""
    if n < 4:
        raise QuiverError("D_n needs n >= 4")
    arrows = [(i, i + 1) for i in range(n - 3)] + [(n - 3, n - 2), (n - 3, n - 1)]
    return Quiver(vertex_count=n, arrows=arrows)


def e_n(n: int) -> Quiver:
    """E_6, E_7, E_8: a chain 0..n-2 with one extra vertex n-1 on vertex 2."""
    if n not in (6, 7, 8):
        raise QuiverError("E_n needs n in {6, 7, 8}")
    arrows = [(i, i + 1) for i in range(n - 2)] + [(2, n - 1)]
    return Quiver(vertex_count=n, arrows=arrows)


def a_tilde(n: int) -> Quiver:
    """
    Euclidean A~_n on n+1 vertices with one source 0 and one sink n:
    the path 0 -> 1 -> ... -> n and the arrow 0 -> n.
    """
    if n < 1:
        raise QuiverError("A~_n needs n >= 1")
    return Quiver(vertex_count=n + 1, arrows=[(i, i + 1) for i in range(n)] + [(0, n)])


def kronecker() -> Quiver:
    """Two vertices, two parallel arrows 0 -> 1."""
    return a_tilde(1)


def d_tilde(n: int) -> Quiver:
    """
    Euclidean D~_n on n+1 vertices: leaves 0, 1 on vertex 2, a chain 2..n-2,
    leaves n-1, n on vertex n-2.
    """
    if n < 4:
        raise QuiverError("D~_n needs n >= 4")
    arrows = [(0, 2), (1, 2)] + [(i, i + 1) for i in range(2, n - 2)] + [(n - 2, n - 1), (n - 2, n)]
    return Quiver(vertex_count=n + 1, arrows=arrows)


_E_TILDE_ARMS = {6: (2, 2, 2), 7: (1, 3, 3), 8: (1, 2, 5)}


def e_tilde(n: int) -> Quiver:
    """Euclidean E~_6, E~_7, E~_8: three arms oriented towards the centre 0."""
    if n not in _E_TILDE_ARMS:
        raise QuiverError("E~_n needs n in {6, 7, 8}")
    arrows: list[tuple[int, int]] = []
    nxt = 1
    for length in _E_TILDE_ARMS[n]:
        previous = 0
        for _ in range(length):
            arrows.append((nxt, previous))
            previous = nxt
            nxt += 1
    return Quiver(vertex_count=nxt, arrows=arrows)


def standard_diagram(family: DiagramFamily, rank: int) -> Quiver:
    builders = {
        DiagramFamily.A: a_n,
        DiagramFamily.D: d_n,
        DiagramFamily.E: e_n,
        DiagramFamily.A_TILDE: a_tilde,
        DiagramFamily.D_TILDE: d_tilde,
        DiagramFamily.E_TILDE: e_tilde,
    }
    return builders[family](rank)


# ---- classification ----


def _arm_lengths(graph: nx.Graph, centre: int) -> list[int]:
    lengths = []
    for start in graph.neighbors(centre):
        previous, current, length = centre, start, 1
        while graph.degree(current) == 2:
            nxt = next(v for v in graph.neighbors(current) if v != previous)
            previous, current = current, nxt
            length += 1
        lengths.append(length)
    return sorted(lengths)


def _recognise(quiver: Quiver) -> tuple[GraphKind, DiagramFamily | None, int | None]:
    n = quiver.vertex_count
    multiplicity = Counter(frozenset(a) for a in quiver.arrows)
    if any(m > 1 for m in multiplicity.values()):
        if n == 2 and len(multiplicity) == 1 and next(iter(multiplicity.values())) == 2:
            return GraphKind.EUCLIDEAN, DiagramFamily.A_TILDE, 1
        return GraphKind.WILD, None, None
    graph = nx.Graph(quiver.underlying_graph())
    edges = graph.number_of_edges()
    degrees = dict(graph.degree())
    if edges == n:
        if all(d == 2 for d in degrees.values()):
            return GraphKind.EUCLIDEAN, DiagramFamily.A_TILDE, n - 1
        return GraphKind.WILD, None, None
    if edges > n:
        return GraphKind.WILD, None, None
    # a tree
    if max(degrees.values(), default=0) <= 2:
        return GraphKind.DYNKIN, DiagramFamily.A, n
    branch = [v for v, d in degrees.items() if d >= 3]
    if any(degrees[v] > 4 for v in branch):
        return GraphKind.WILD, None, None
    if len(branch) == 1 and degrees[branch[0]] == 4:
        if n == 5:
            return GraphKind.EUCLIDEAN, DiagramFamily.D_TILDE, 4
        return GraphKind.WILD, None, None
    if any(degrees[v] == 4 for v in branch):
        return GraphKind.WILD, None, None
    if len(branch) == 2:
        for v in branch:
            leaves = [u for u in graph.neighbors(v) if degrees[u] == 1]
            if len(leaves) != 2:
                return GraphKind.WILD, None, None
        return GraphKind.EUCLIDEAN, DiagramFamily.D_TILDE, n - 1
    if len(branch) > 2:
        return GraphKind.WILD, None, None
    a, b, c = _arm_lengths(graph, branch[0])
    weight = Fraction(1, a + 1) + Fraction(1, b + 1) + Fraction(1, c + 1)
    if weight > 1:
        if (a, b) == (1, 1):
            return GraphKind.DYNKIN, DiagramFamily.D, n
        return GraphKind.DYNKIN, DiagramFamily.E, n
    if weight == 1:
        return GraphKind.EUCLIDEAN, DiagramFamily.E_TILDE, n - 1
    return GraphKind.WILD, None, None


def _definiteness_kind(quiver: Quiver) -> GraphKind:
    from .forms import quiver_form, symmetrized

    sym = Matrix(symmetrized(quiver_form(quiver)))
    if sym.is_positive_definite:
        return GraphKind.DYNKIN
    if sym.is_positive_semidefinite and quiver.vertex_count - sym.rank() == 1:
        return GraphKind.EUCLIDEAN
    return GraphKind.WILD


def classify(quiver: Quiver) -> GraphClass:
    """
    Classify the underlying graph of a connected quiver.

    The graph is matched against the standard diagram list; the result is
    cross-checked against the definiteness of the symmetrized Tits form.

    Raises:
        QuiverError: If the quiver is disconnected
        InternalConsistencyError: If pattern matching and definiteness disagree
    """
    if not nx.is_connected(quiver.underlying_graph()):
        raise QuiverError("disconnected")
    kind, family, rank = _recognise(quiver)
    checked = _definiteness_kind(quiver)
    if checked != kind:
        raise InternalConsistencyError(f"graph recognised as {kind.value} but its Tits form is {checked.value}")
    if family is None or rank is None:
        return GraphClass(kind=kind)
    standard = standard_diagram(family, rank)
    if family == DiagramFamily.A_TILDE and rank == 1:
        s, _ = quiver.arrows[0]
        relabeling = {s: 0, 1 - s: 1}
    else:
        matcher = GraphMatcher(nx.Graph(quiver.underlying_graph()), nx.Graph(standard.underlying_graph()))
        if not matcher.is_isomorphic():
            raise InternalConsistencyError(f"no relabeling onto the standard {family.value}{rank} diagram")
        relabeling = dict(sorted(matcher.mapping.items()))
    return GraphClass(kind=kind, family=family, rank=rank, relabeling=relabeling)


def connected_components(quiver: Quiver) -> list[Quiver]:
    """Connected subquivers, ordered by smallest vertex; vertices renumbered in order."""
    components = sorted((sorted(c) for c in nx.connected_components(quiver.underlying_graph())), key=lambda c: c[0])
    out = []
    for vertices in components:
        index = {v: i for i, v in enumerate(vertices)}
        arrows = [(index[s], index[t]) for s, t in quiver.arrows if s in index]
        out.append(Quiver(vertex_count=len(vertices), arrows=arrows))
    return out


# ---- path algebras and representations ----


def _paths(quiver: Quiver) -> list[tuple[int, int, tuple[int, ...]]]:
    """All non-trivial paths as (source, target, arrow indices in traversal order)."""
    outgoing: dict[int, list[int]] = {v: [] for v in range(quiver.vertex_count)}
    for i, (s, _) in enumerate(quiver.arrows):
        outgoing[s].append(i)
    found: list[tuple[int, int, tuple[int, ...]]] = []

    def extend(source: int, at: int, walked: tuple[int, ...]) -> None:
        for i in outgoing[at]:
            path = walked + (i,)
            target = quiver.arrows[i][1]
            found.append((source, target, path))
            extend(source, target, path)

    for v in range(quiver.vertex_count):
        extend(v, v, ())
    found.sort(key=lambda p: (len(p[2]), p[2]))
    return found


def path_label(arrows: Sequence[int]) -> str:
    """Label of a path, written as a right-to-left composition of arrows."""
    return "*".join(f"a{i}" for i in reversed(arrows))


def path_algebra(quiver: Quiver, field: GroundField) -> BasicAlgebra:
    """
    The path algebra of an acyclic quiver.

    Basis: trivial paths e_0..e_{n-1}, then the other paths by length.
    Composition is right to left, so e_t * p * e_s = p for a path s -> t and
    f_t A f_s is spanned by the paths from s to t.

    Raises:
        QuiverError: If the quiver has an oriented cycle
    """
    if not quiver.is_acyclic():
        raise QuiverError("path algebra of a quiver with an oriented cycle is infinite-dimensional")
    n = quiver.vertex_count
    basis: list[tuple[int, int, tuple[int, ...]]] = [(v, v, ()) for v in range(n)] + _paths(quiver)
    index = {(s, t, p): i for i, (s, t, p) in enumerate(basis)}
    dim = len(basis)
    table = []
    for s1, t1, p1 in basis:
        row = []
        for s2, t2, p2 in basis:
            v = [field.zero] * dim
            # (s1 -> t1) after (s2 -> t2)
            if t2 == s1:
                v[index[(s2, t1, p2 + p1)]] = field.one
            row.append(v)
        table.append(row)
    unit = [field.one if i < n else field.zero for i in range(dim)]
    labels = [f"e{s}" if not p else path_label(p) for s, _, p in basis]
    return BasicAlgebra(
        field=field,
        dim=dim,
        table=table,
        unit=unit,
        labels=labels,
        vertex_count=n,
        idempotents=list(range(n)),
        peirce=[(t, s) for s, t, _ in basis],
    )


def gabriel_quiver(algebra: BasicAlgebra) -> Quiver:
    """The Ext-quiver of a basic algebra."""
    return Quiver(vertex_count=algebra.vertex_count, arrows=gabriel_arrows(algebra))


class QuiverRepresentation(BaseModel):
    """
    A representation: a space field^dims[v] at each vertex and, for arrow
    a: s -> t, a dims[t] x dims[s] matrix.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    quiver: Quiver
    field: GroundField
    dims: list[int]
    matrices: list[list[list[Any]]]

    @model_validator(mode="after")
    def _check_shapes(self) -> "QuiverRepresentation":
        if len(self.dims) != self.quiver.vertex_count:
            raise ValueError("one dimension per vertex is required")
        if any(d < 0 for d in self.dims):
            raise ValueError("dimensions must be non-negative")
        if len(self.matrices) != len(self.quiver.arrows):
            raise ValueError("one matrix per arrow is required")
        for i, ((s, t), mat) in enumerate(zip(self.quiver.arrows, self.matrices, strict=True)):
            if len(mat) != self.dims[t] or any(len(row) != self.dims[s] for row in mat):
                raise ValueError(f"matrix of arrow {i} must be {self.dims[t]}x{self.dims[s]}")
        return self

    @property
    def dim_vector(self) -> DimVector:
        return DimVector(coordinates=list(self.dims))

    def offsets(self) -> list[int]:
        out, total = [], 0
        for d in self.dims:
            out.append(total)
            total += d
        return out

    def to_module(self, algebra: BasicAlgebra) -> SCModule:
        """
        The module over the path algebra (as built by `path_algebra`) on the
        total space, vertex blocks in vertex order.
        """
        total = sum(self.dims)
        offsets = self.offsets()
        field = self.field
        paths = [(v, v, ()) for v in range(self.quiver.vertex_count)] + _paths(self.quiver)
        if len(paths) != algebra.dim:
            raise QuiverError("algebra is not the path algebra of this quiver")
        action = []
        for s, t, arrows in paths:
            block = linalg.identity(self.dims[s], field)
            for a in arrows:
                block = linalg.mat_mul(self.matrices[a], block, field, self.dims[self.quiver.arrows[a][0]], self.dims[s])
            mat = linalg.zeros(total, total, field)
            for r in range(self.dims[t]):
                for c in range(self.dims[s]):
                    mat[offsets[t] + r][offsets[s] + c] = block[r][c]
            action.append(mat)
        return SCModule(algebra=algebra, dim=total, action=action)


def random_representation(quiver: Quiver, dims: Sequence[int], field: GroundField, rng: random.Random) -> QuiverRepresentation:
    """Uniform (or integer-box, over QQ) random matrices on every arrow."""
    matrices: list[Rows] = [
        [[field.random_element(rng) for _ in range(dims[s])] for _ in range(dims[t])] for s, t in quiver.arrows
    ]
    return QuiverRepresentation(quiver=quiver, field=field, dims=list(dims), matrices=matrices)
