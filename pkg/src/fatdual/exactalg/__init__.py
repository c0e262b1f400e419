"""
Exact algebra engine: ground fields, linear algebra, structure-constant
algebras, Wedderburn data and module decompositions.
"""

from .algebra import BasicAlgebra, SCAlgebra
from .field import ExactAlgebraError, GroundField
from .linalg import Frame, Subspace
from .modules import (
    SCModule,
    algebra_of_matrices,
    end_algebra,
    hom_space,
    is_isomorphic,
    isomorphism,
    krull_schmidt,
)
from .wedderburn import (
    SplittingFailed,
    WedderburnComponent,
    WedderburnData,
    central_idempotents,
    gabriel_arrows,
    gl_order,
    lift_idempotent,
    primitive_idempotents,
    radical,
    radical_powers,
    unit_group_order,
    wedderburn,
)

__all__ = [
    # Fields and linear algebra
    "GroundField",
    "ExactAlgebraError",
    "Frame",
    "Subspace",
    # Algebras
    "SCAlgebra",
    "BasicAlgebra",
    "radical",
    "radical_powers",
    "wedderburn",
    "WedderburnData",
    "WedderburnComponent",
    "SplittingFailed",
    "primitive_idempotents",
    "central_idempotents",
    "lift_idempotent",
    "unit_group_order",
    "gl_order",
    "gabriel_arrows",
    # Modules
    "SCModule",
    "hom_space",
    "end_algebra",
    "algebra_of_matrices",
    "isomorphism",
    "is_isomorphic",
    "krull_schmidt",
]
