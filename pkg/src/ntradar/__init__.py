"""Detection-performance toolkit for noise-type radars.

Computes, simulates, inverts, and approximates probability-of-detection
curves for correlation-based radar detectors as functions of the correlation
coefficient and the number of integrated samples.
"""

__version__ = "0.1.0"

from ._accel import backend_name
from .analytic_perf import (
    RocCurve,
    RocFamily,
    pd_d0_largeN,
    pd_d0_small_rho,
    pd_rhohat_exact,
    pd_rhohat_largeN,
    pd_small_rho_marcum,
    required_nrho2,
    rhohat_null_threshold,
    rhohat_pdf,
    roc_curve,
)
from .detectors import DetectorKind, DetectorStatistic, compute, declare
from .errors import (
    DegenerateInputError,
    DomainError,
    InsufficientTrialsError,
    NumericError,
    OptimizationError,
    ValidityWarning,
)
from .logistic_fit import (
    FitFamily,
    FitObjectiveSpec,
    LogisticFit,
    fit_logistic,
    ise_objective,
    logistic_eval,
    logistic_inverse,
    reproduce_tables,
)
from .montecarlo import (
    McConfig,
    McResult,
    calibrate_threshold,
    empirical_roc,
    estimate_pd,
    ks_two_sample,
)
from .signal_model import (
    AuxStats,
    IQBlock,
    SignalParams,
    Variant,
    aux_stats,
    build_covariance,
    sample_block,
)
from .specfun import Accuracy, erfc, erfc_inv, log_hyp2f1_nn1, marcum_q1

__all__ = [
    "__version__",
    "backend_name",
    "Accuracy",
    "AuxStats",
    "DetectorKind",
    "DetectorStatistic",
    "DegenerateInputError",
    "DomainError",
    "FitFamily",
    "FitObjectiveSpec",
    "InsufficientTrialsError",
    "IQBlock",
    "LogisticFit",
    "McConfig",
    "McResult",
    "NumericError",
    "OptimizationError",
    "RocCurve",
    "RocFamily",
    "SignalParams",
    "ValidityWarning",
    "Variant",
    "aux_stats",
    "build_covariance",
    "calibrate_threshold",
    "compute",
    "declare",
    "empirical_roc",
    "erfc",
    "erfc_inv",
    "estimate_pd",
    "fit_logistic",
    "ise_objective",
    "ks_two_sample",
    "log_hyp2f1_nn1",
    "logistic_eval",
    "logistic_inverse",
    "marcum_q1",
    "pd_d0_largeN",
    "pd_d0_small_rho",
    "pd_rhohat_exact",
    "pd_rhohat_largeN",
    "pd_small_rho_marcum",
    "required_nrho2",
    "reproduce_tables",
    "rhohat_null_threshold",
    "rhohat_pdf",
    "roc_curve",
    "sample_block",
]
