"""
Enumerations shared across fatdual.

This module defines the small closed vocabularies used by the domain types:
graph classes and diagram families, root kinds, the preprojective / regular /
preinjective trichotomy, summand kinds of generic decompositions, and CLI
output formats.
"""

from enum import Enum


class GraphKind(str, Enum):
    """
    Representation type of a connected quiver's underlying graph.

    - DYNKIN: Tits form positive definite (finite representation type)
    - EUCLIDEAN: positive semidefinite with one-dimensional radical (tame)
    - WILD: everything else
    """

    DYNKIN = "dynkin"
    EUCLIDEAN = "euclidean"
    WILD = "wild"


class DiagramFamily(str, Enum):
    """Families of standard Dynkin and extended Dynkin diagrams."""

    A = "A"
    D = "D"
    E = "E"
    A_TILDE = "A~"
    D_TILDE = "D~"
    E_TILDE = "E~"


class RootKind(str, Enum):
    """Real roots have Q(d) = 1, imaginary roots Q(d) = 0."""

    REAL = "real"
    IMAGINARY = "imaginary"


class RootRegion(str, Enum):
    """Position of a root relative to the defect: <0, =0 or >0."""

    PREPROJECTIVE = "preprojective"
    REGULAR = "regular"
    PREINJECTIVE = "preinjective"


class SummandKind(str, Enum):
    """
    Kinds of summands in a generic decomposition.

    - RIGID: brick without self-extensions
    - DELTA: brick of dimension delta with one-dimensional self-extension
    """

    RIGID = "rigid"
    DELTA = "delta"


class OutputFormat(str, Enum):
    """CLI output formats: a rich table for humans or a YAML document."""

    TABLE = "table"
    DOC = "doc"
