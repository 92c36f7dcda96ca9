"""Gaussian simulation of phase-conjugate-input telecloning of coherent states.

Convention: ``a = (X + iP)/2``, ``[X, P] = 2i``, vacuum quadrature variance 1.
"""

from .fidelity import (
    FidelityResult,
    baseline_standard_fidelity,
    closed_form,
    fidelity_unity_gain,
    fidelity_vs_coherent,
)
from .gaussian import (
    Circuit,
    ConsumedModeError,
    InputRegistry,
    ModeState,
    QuadratureTransform,
    joint_covariance,
    output_state,
    symplectic_residual,
)
from .measurement import MeasurementRecord, combine_records, dual_homodyne, feedforward
from .optics import SplitterSpec, beam_splitter, concentrate, splitter_cascade
from .oracle import SampleRun, compare, run_oracle
from .protocols import (
    CloneReport,
    ProtocolSpec,
    build,
    build_variant_A,
    build_variant_A_generalized,
    build_variant_A_swapped,
    build_variant_B,
)

__version__ = "0.1.0"
