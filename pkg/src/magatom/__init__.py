"""Planar hydrogen atom in a constant magnetic field.

Exact (quasi-solvable) polynomial eigenstates from series truncation,
Rayleigh-Ritz variational spectra in two non-orthogonal bases, critical
field strengths, and an independent finite-difference oracle.
"""

from .critical import CriticalGamma, CriticalTable, critical_gamma, critical_table, sign_certificate
from .errors import (
    BracketError,
    ConditioningError,
    LevelTrackingError,
    MagatomError,
    NoQSSolutionError,
    NumericalError,
)
from .frobenius import (
    QSSolution,
    QSSolutionSet,
    TerminationPolynomial,
    count_nodes,
    qs_solutions,
    qs_wavefunction,
    residual_check,
    termination_polynomial,
    ttrr_coefficients,
)
from .model import (
    LevelIndex,
    ModelParams,
    energy_from_W,
    hft_signs,
    hydrogenic_W,
    oscillator_W,
    scale_to_unit_Z,
)
from .oracle import GridSpec, OracleResult, oracle_solve
from .ritz import (
    BasisKind,
    BasisSpec,
    ConvergenceTable,
    MatrixPair,
    SpectrumResult,
    assemble_matrices,
    auto_basis,
    converge_spectrum,
    expectation_values,
    moment_integral,
    select_basis_kind,
    solve_generalized,
    spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "BasisKind",
    "BasisSpec",
    "BracketError",
    "ConditioningError",
    "ConvergenceTable",
    "CriticalGamma",
    "CriticalTable",
    "GridSpec",
    "LevelIndex",
    "LevelTrackingError",
    "MagatomError",
    "MatrixPair",
    "ModelParams",
    "NoQSSolutionError",
    "NumericalError",
    "OracleResult",
    "QSSolution",
    "QSSolutionSet",
    "SpectrumResult",
    "TerminationPolynomial",
    "assemble_matrices",
    "auto_basis",
    "converge_spectrum",
    "count_nodes",
    "critical_gamma",
    "critical_table",
    "energy_from_W",
    "expectation_values",
    "hft_signs",
    "hydrogenic_W",
    "moment_integral",
    "oracle_solve",
    "oscillator_W",
    "qs_solutions",
    "qs_wavefunction",
    "residual_check",
    "scale_to_unit_Z",
    "select_basis_kind",
    "sign_certificate",
    "solve_generalized",
    "spectrum",
    "termination_polynomial",
    "ttrr_coefficients",
]
