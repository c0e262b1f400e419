from .bimod import (
    BimoduleElement,
    BimoduleError,
    Morphism,
    TriangularAlgebra,
    element_tits,
    ext_dims,
    orbit_dim,
)
from .catalog import CatalogError, resolve_algebra, resolve_quiver
from .cli import main, run
from .config import Settings
from .degen import (
    ConflationWitness,
    DegenerationError,
    OrbitCensus,
    census,
    hom_order_leq,
    search_witness,
    verify_witness,
)
from .enums import DiagramFamily, GraphKind, OutputFormat, RootKind, RootRegion, SummandKind
from .errors import FatDualError, InternalConsistencyError
from .exactalg import BasicAlgebra, ExactAlgebraError, GroundField, SCAlgebra, SCModule
from .fatsig import ConfigSpace, FatSignature, FatSignatureError, fat_signature, mackey_step, source_idempotent
from .forms import FormError, FormMatrix, bimodule_tits, delta, euler_form_module, quiver_form, tits_quadratic
from .generic import GenericDecomposition, GenericError, generic_element, tube_parameters
from .models import (
    AlgebraDocument,
    CensusDocument,
    DecompositionDocument,
    ElementDocument,
    QuiverDocument,
    RunEnvelope,
    SignatureDocument,
)
from .parser import DocumentParser, DocumentParserError
from .quiver import DimVector, GraphClass, Quiver, QuiverError, classify, connected_components
from .roots import CoxeterMatrix, Root, RootError, classify_root, coxeter, positive_roots

__all__ = (
    # CLI
    "main",
    "run",
    "Settings",
    # Errors
    "FatDualError",
    "InternalConsistencyError",
    "QuiverError",
    "FormError",
    "RootError",
    "ExactAlgebraError",
    "BimoduleError",
    "DegenerationError",
    "GenericError",
    "FatSignatureError",
    "CatalogError",
    "DocumentParserError",
    # Enums
    "GraphKind",
    "DiagramFamily",
    "RootKind",
    "RootRegion",
    "SummandKind",
    "OutputFormat",
    # Quivers, forms and roots
    "Quiver",
    "DimVector",
    "GraphClass",
    "classify",
    "connected_components",
    "FormMatrix",
    "quiver_form",
    "tits_quadratic",
    "delta",
    "bimodule_tits",
    "euler_form_module",
    "Root",
    "CoxeterMatrix",
    "positive_roots",
    "coxeter",
    "classify_root",
    # Exact algebra
    "GroundField",
    "SCAlgebra",
    "BasicAlgebra",
    "SCModule",
    # Bimodule elements
    "TriangularAlgebra",
    "BimoduleElement",
    "Morphism",
    "ext_dims",
    "element_tits",
    "orbit_dim",
    # Degenerations
    "ConflationWitness",
    "OrbitCensus",
    "verify_witness",
    "search_witness",
    "hom_order_leq",
    "census",
    # Generic decomposition and signatures
    "GenericDecomposition",
    "generic_element",
    "tube_parameters",
    "FatSignature",
    "ConfigSpace",
    "fat_signature",
    "mackey_step",
    "source_idempotent",
    # Catalog and interchange
    "resolve_quiver",
    "resolve_algebra",
    "QuiverDocument",
    "AlgebraDocument",
    "ElementDocument",
    "SignatureDocument",
    "DecompositionDocument",
    "CensusDocument",
    "RunEnvelope",
    "DocumentParser",
)
