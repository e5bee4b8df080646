"""polmorph: types of morphisms of polarized abelian varieties.

Exact checkers and searches for the discrete data (polarization types and
integer matrices in symplectic bases) that classify isogenies, embeddings and
general morphisms, together with a floating-point Siegel-space layer that
realizes those data as period matrices.
"""

__version__ = "0.1.0"

from polmorph.decompose import decompose_morphism
from polmorph.exact_core import (
    Lattice,
    cokernel,
    det,
    hnf,
    integer_kernel,
    intersect_with_coordinate_block,
    kernel_cosets,
    project_to_block,
    rat_inverse,
    saturation,
    snf,
)
from polmorph.exceptions import (
    BadDivisorError,
    DegenerateFormError,
    DegenerateRestrictionError,
    DimensionClashError,
    DocumentError,
    InvalidSiegelPointError,
    InvalidTypeError,
    LengthMismatchError,
    NearSingularBlockError,
    NonSquareError,
    NotAlternatingError,
    NotIntegralError,
    NotSymplecticError,
    NotTwoByTwoError,
    OrderTooLargeError,
    PolmorphError,
    SingularMatrixError,
    SizeMismatchError,
)
from polmorph.morphism_types import (
    apply_equivalence,
    check_embedding_type,
    check_isogeny_type,
    check_morphism_type,
    elliptic_canonical,
    elliptic_embedding_constraints,
    hecke_factor,
    hecke_factor_reversed,
    is_in_embedding_stabilizer,
    is_in_stabilizer,
    kernel_structure,
    standard_isogeny_matrix,
)
from polmorph.schemas import (
    CheckReport,
    EmbeddingType,
    FiniteAbelianGroup,
    GramForm,
    IntMatrix,
    IsogenyType,
    MorphismDecomposition,
    MorphismType,
    PeriodBasis,
    PolarizationType,
    RatMatrix,
    RealizedMorphism,
    SiegelPoint,
)
from polmorph.search import search_embedding_matrices, search_gram_solutions, search_isogeny_matrices
from polmorph.siegel import (
    descend,
    normalize,
    period_basis,
    product_point,
    realize_embedding,
    realize_morphism,
    sp_action,
    transport,
    validate_period_basis,
    validate_siegel,
)
from polmorph.symplectic import (
    alternating_type,
    gram,
    is_symplectic,
    product_type,
    random_symplectic,
    standard_product_matrix,
    symplectic_inverse,
    type_divides,
)

__all__ = [
    # Value types
    "CheckReport",
    "EmbeddingType",
    "FiniteAbelianGroup",
    "GramForm",
    "IntMatrix",
    "IsogenyType",
    "Lattice",
    "MorphismDecomposition",
    "MorphismType",
    "PeriodBasis",
    "PolarizationType",
    "RatMatrix",
    "RealizedMorphism",
    "SiegelPoint",
    # Exact layer
    "cokernel",
    "det",
    "hnf",
    "integer_kernel",
    "intersect_with_coordinate_block",
    "kernel_cosets",
    "project_to_block",
    "rat_inverse",
    "saturation",
    "snf",
    # Symplectic
    "alternating_type",
    "gram",
    "is_symplectic",
    "product_type",
    "random_symplectic",
    "standard_product_matrix",
    "symplectic_inverse",
    "type_divides",
    # Types of morphisms
    "apply_equivalence",
    "check_embedding_type",
    "check_isogeny_type",
    "check_morphism_type",
    "decompose_morphism",
    "elliptic_canonical",
    "elliptic_embedding_constraints",
    "hecke_factor",
    "hecke_factor_reversed",
    "is_in_embedding_stabilizer",
    "is_in_stabilizer",
    "kernel_structure",
    "search_embedding_matrices",
    "search_gram_solutions",
    "search_isogeny_matrices",
    "standard_isogeny_matrix",
    # Siegel space
    "descend",
    "normalize",
    "period_basis",
    "product_point",
    "realize_embedding",
    "realize_morphism",
    "sp_action",
    "transport",
    "validate_period_basis",
    "validate_siegel",
    # Exceptions
    "PolmorphError",
    "BadDivisorError",
    "DegenerateFormError",
    "DegenerateRestrictionError",
    "DimensionClashError",
    "DocumentError",
    "InvalidSiegelPointError",
    "InvalidTypeError",
    "LengthMismatchError",
    "NearSingularBlockError",
    "NonSquareError",
    "NotAlternatingError",
    "NotIntegralError",
    "NotSymplecticError",
    "NotTwoByTwoError",
    "OrderTooLargeError",
    "SingularMatrixError",
    "SizeMismatchError",
]
