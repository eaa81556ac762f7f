"""Exact and numerical tools for unitary paths, deformed ensembles, and
rational-function recovery of circuit output probabilities."""

__version__ = "0.1.0"

from .errors import (
    BranchCutError,
    DecodeError,
    DegeneracyError,
    FieldMismatchError,
    InconsistentSamplesError,
    InfeasibleSystemError,
    PipelineFailure,
    PoleError,
    RankDeficiencyError,
    RcskitError,
    ResourceLimitError,
    TooManyErrorsError,
    UnsupportedFieldError,
    ValidationError,
    ZeroDenominatorError,
)
from .poly import EXACT, FLOAT, GaussianRational, Poly, PolyVector, RationalFn, simplify
from .linalg import (
    PATH_CONSTRUCTORS,
    ExactMatrix,
    MatrixPencil,
    PolyMatrix,
    UnitaryMatrix,
    cleared_column_degree_bound,
    geodesic_path,
    modified_qr_numeric,
    modified_qr_pencil,
    multiplicative_path,
    pencil_qr_path,
    power_path,
    standard_qr,
)
from .haar import (
    RNG_ALGORITHM,
    GaussianSpec,
    deformation_tvd_curve,
    haar_unitary,
    make_rng,
    stream_rng,
    theta_deformed_unitary,
    tvd_estimate,
)
from .interp import (
    BWResult,
    ChebRationalModel,
    SampleSet,
    bw_rational,
    extrapolate,
    fit_cheb_rational,
    fit_rational,
    max_abs_residual,
)
from .circuit import (
    Circuit,
    Gate,
    ScrambledCircuit,
    amplitude,
    brickwork_circuit,
    evaluate_scrambled,
    feynman_amplitude,
    p0_rational_single_gate,
    p0_theta,
    probability,
    scramble,
    simulate,
)
from .rcs import (
    PipelineConfig,
    PipelineReport,
    ProbeReport,
    corruption_sweep,
    degree_probe_report,
    minimal_degree_probe,
    probe_theta_grid,
    run_pipeline,
)
