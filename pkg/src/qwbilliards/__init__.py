"""Quantum-walk billiards: bounce operators, spectra and spacing statistics."""

from .lattice import (
    CurvedPath,
    Grid1D,
    Kind2Grid,
    PathFunction,
    PathTag,
    Spin,
    SpinorState,
    centered_default_state,
    make_delta_state,
    probability_profile,
    state_norm,
)
from .operators import (
    BilliardSpec,
    ElectricField,
    OperatorOrder,
    UnitaryOperator,
    coin_matrix,
    compose_step,
    curved_shift,
    electric_phase,
    kind1_shift,
    kind2_shift,
    verify_unitarity,
)
from .evolution import EvolutionRecord, run, step
from .spectral import (
    BlochParams,
    BlochVariant,
    DispersionScan,
    SpectrumResult,
    UnitarityError,
    bloch_curved,
    bloch_kind1,
    bloch_kind2,
    dispersion_scan,
    eigenphases,
    wrap_phase,
)
from .billiard2d import (
    Billiard2DSpec,
    combine_spectra,
    tensor_operator,
    tensor_spectrum,
)
from .level_stats import (
    ClassifyResult,
    SpacingHistogram,
    SpacingSequence,
    Verdict,
    classify,
    histogram,
    poisson_pdf,
    spacings_from_spectrum,
    wigner_pdf,
)

__version__ = "0.1.0"

__all__ = [
    "BilliardSpec",
    "Billiard2DSpec",
    "BlochParams",
    "BlochVariant",
    "ClassifyResult",
    "CurvedPath",
    "DispersionScan",
    "ElectricField",
    "EvolutionRecord",
    "Grid1D",
    "Kind2Grid",
    "OperatorOrder",
    "PathFunction",
    "PathTag",
    "SpacingHistogram",
    "SpacingSequence",
    "SpectrumResult",
    "Spin",
    "SpinorState",
    "UnitarityError",
    "UnitaryOperator",
    "Verdict",
    "bloch_curved",
    "bloch_kind1",
    "bloch_kind2",
    "centered_default_state",
    "classify",
    "coin_matrix",
    "combine_spectra",
    "compose_step",
    "curved_shift",
    "dispersion_scan",
    "eigenphases",
    "electric_phase",
    "histogram",
    "kind1_shift",
    "kind2_shift",
    "make_delta_state",
    "poisson_pdf",
    "probability_profile",
    "run",
    "spacings_from_spectrum",
    "state_norm",
    "step",
    "tensor_operator",
    "tensor_spectrum",
    "verify_unitarity",
    "wigner_pdf",
    "wrap_phase",
    "__version__",
]
