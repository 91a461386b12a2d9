"""Gamma-matrix algebra on the sine-cosine basis.

The public surface re-exports the main types and operations; the
submodules hold the rest.
"""

from .algebra import (
    GammaMatrix,
    GammaSpectrum,
    add,
    classify,
    decompose_spectrum,
    eigenvalues,
    extract_components,
    from_components,
    from_spectrum,
    identity,
    inverse_apply,
    matmul,
    matvec,
    scale,
    solve_with_spectrum,
)
from .errors import (
    ConstraintError,
    DimensionMismatchError,
    FormulaDiscrepancyError,
    GammaError,
    IndefiniteMatrixError,
    InvalidOrderError,
    NotAGammaMatrixError,
    SingularMatrixError,
    StructureError,
)
from .pcg import SolveOutcome, pcg
from .spectral import (
    BasisVectorSet,
    StructuredVector,
    antisymmetrize,
    build_q_dense,
    even_part,
    odd_part,
    symmetrize,
)
from .toeplitz import (
    ClusterReport,
    GeneratorSeq,
    SymToeplitz,
    frobenius_projection_oracle,
    gamma_approx,
    preconditioned_spectrum,
    toeplitz_from_generator,
)
from .transforms import (
    BACKENDS,
    OpCounter,
    TransformPlan,
    cs,
    dsct,
    get_plan,
    idsct,
    predicted_counts_cs,
    predicted_counts_sn,
    sn,
)

__version__ = "0.1.0"
