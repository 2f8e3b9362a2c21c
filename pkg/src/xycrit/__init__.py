"""Correlation-tensor separability criteria and their thresholds on isotropic states."""

from .analytic import (
    QuadraticCase,
    ThresholdSet,
    analytic_cxy_norm,
    analytic_cxy_spectrum,
    ordering_polynomials,
    hyperbola_and_min,
    named_thresholds,
    p_xy_threshold,
    quadratic_case,
    stationarity_check,
)
from .bases import CriterionParams, OperatorBasis, correlation_matrix, gell_mann_basis, norm_bound, scale_correlation
from .criteria import (
    CriterionReport,
    detection_threshold_numeric,
    enhanced_realignment,
    named_criterion,
    ppt_test,
    xy_criterion,
)
from .states import DensityMatrix, IsotropicParams, WernerParams, isotropic, isotropic_marginals, werner_like
from .tensor_core import BipartiteShape

__version__ = "0.1.0"
