"""Spectral approximation of band operators from finite subwords of their potentials."""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    NumericalError,
    ResourceLimitError,
    SearchExhaustedError,
    ValidationError,
)
from .surd import Surd
from .words import (
    Alphabet,
    ExplicitWindow,
    FiniteWord,
    GapProfile,
    PeriodicWord,
    PotentialSource,
    RotationParams,
    RotationWord,
    SubstitutionRules,
    SubstitutionWord,
    SubwordConditionReport,
    SubwordSet,
    check_subword_condition,
    de_bruijn,
    fibonacci_rules,
    gap_profile,
    golden_rotation_params,
    period_doubling_rules,
    prefix_periodization,
    rotation_letter,
    substitution_prefix,
    subword_set,
    thue_morse_rules,
)
from .operators import (
    BandOperatorSpec,
    ColumnBlock,
    DiagonalSpec,
    adjoint,
    boundary_blocks,
    column_blocks,
    half_axis,
    multi_diagonal,
    schrodinger,
    shift_lambda,
)
from .lowernorm import (
    LowerNormResult,
    nu_N,
    nu_N_half_axis,
    resolvent_lower_bound,
    smallest_singular_value,
)
from .floquet import (
    FloquetSpectrum,
    SymbolMatrix,
    floquet_spectrum,
    nu_exact_periodic,
    symbol_matrix,
    wrap_around_matrix,
)
from .spectra import (
    GridSpec,
    HausdorffReport,
    ResolventField,
    SpectralSet,
    convergence_study,
    hausdorff,
    numerical_range_boundary,
    resolvent_field,
    sublevel_set,
)
from . import models

__all__ = [name for name in dir() if not name.startswith("_")]
