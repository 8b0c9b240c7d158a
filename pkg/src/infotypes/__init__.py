"""Incompatible types of quantum information: presence, absence and the theorems relating them."""
from .bases import (
    Decomposition,
    OrthonormalBasis,
    fourier_basis,
    mub_family,
    operator_basis,
    random_basis,
    random_decomposition,
    spans_operator_space,
    trivial_decomposition,
    x_basis,
    y_basis,
    z_basis,
)
from .core import TOL, partial_trace, purify, reduced_density, schmidt_decomposition, tensor
from .errors import (
    DegenerateInputError,
    DimensionMismatchError,
    DocumentError,
    InfoTypesError,
    InvalidDecompositionError,
    InvalidDensityError,
    NoWitnessError,
    UnsupportedDimensionError,
    UnsupportedHypothesisError,
)
from .information import (
    IncompatibilityGraph,
    absence_residual,
    all_information_present,
    build_graph,
    classify,
    commutant_dimension,
    conditional_operators,
    extract_witness_decomposition,
    is_connected,
    is_perfectly_absent,
    is_perfectly_present,
    mutually_unbiased,
    no_information_present,
    presence_residual,
    strongly_incompatible,
    truncate,
)
from .theorems import CHECKERS, CloningInstance, TheoremReport

__version__ = "0.1.0"
