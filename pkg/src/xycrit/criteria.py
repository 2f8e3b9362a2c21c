"""Numerical evaluation of correlation-tensor separability criteria.

Every criterion reports ``lhs`` and ``rhs`` such that separable states obey
``lhs <= rhs``; a margin ``lhs - rhs`` above the tolerance certifies
entanglement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import optimize

from .bases import (
    NAMED_CRITERIA,
    CriterionParams,
    NamedCriterion,
    correlation_matrix,
    norm_bound,
    scale_correlation,
)
from .states import DensityMatrix, IsotropicParams, isotropic
from .tensor_core import BipartiteShape, hermitian_spectrum, partial_transpose, realign, trace_norm

DETECTION_TOL = 1e-9
BISECTION_XTOL = 1e-12


@dataclass(frozen=True)
class CriterionReport:
    criterion_id: str
    lhs: float
    rhs: float
    tolerance: float = DETECTION_TOL

    @property
    def margin(self) -> float:
        return self.lhs - self.rhs

    @property
    def detected(self) -> bool:
        return self.margin > self.tolerance

    @property
    def boundary(self) -> bool:
        return abs(self.margin) <= self.tolerance

    @property
    def verdict(self) -> str:
        if self.detected:
            return "entangled"
        return "boundary" if self.boundary else "undetected"

    def as_dict(self) -> dict:
        return {
            "criterion": self.criterion_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "detected": self.detected,
            "verdict": self.verdict,
            "tolerance": self.tolerance,
        }


def xy_criterion(
    rho: DensityMatrix, params: CriterionParams, *, tol: float = DETECTION_TOL, label: str | None = None
) -> CriterionReport:
    """``||D_x C D_y||_1 <= N_x N_y`` with C in Gell-Mann bases."""
    c = scale_correlation(correlation_matrix(rho), params.x, params.y)
    return CriterionReport(
        criterion_id=label or f"xy({params.x:.6g},{params.y:.6g})",
        lhs=trace_norm(c.entries),
        rhs=norm_bound(params.x, params.y, rho.shape),
        tolerance=tol,
    )


def named_criterion(rho: DensityMatrix, which: NamedCriterion, *, tol: float = DETECTION_TOL) -> CriterionReport:
    return xy_criterion(rho, CriterionParams.named(which, rho.shape), tol=tol, label=which)


def enhanced_realignment(rho: DensityMatrix, *, tol: float = DETECTION_TOL) -> CriterionReport:
    """``||R(rho - rho_A (x) rho_B)||_1 <= sqrt(1 - Tr rho_A^2) sqrt(1 - Tr rho_B^2)``."""
    rho_a, rho_b = rho.marginals()
    lhs = trace_norm(realign(rho.matrix - np.kron(rho_a, rho_b), rho.shape))
    pur_a = float(np.real(np.trace(rho_a @ rho_a)))
    pur_b = float(np.real(np.trace(rho_b @ rho_b)))
    rhs = float(np.sqrt(max(1 - pur_a, 0.0)) * np.sqrt(max(1 - pur_b, 0.0)))
    return CriterionReport("ER", lhs, rhs, tol)


def ppt_test(rho: DensityMatrix, *, tol: float = DETECTION_TOL) -> CriterionReport:
    """Negativity of the partial transpose, as ``lhs = -lambda_min``, ``rhs = 0``."""
    lam = hermitian_spectrum(partial_transpose(rho.matrix, rho.shape, "second"))[0]
    return CriterionReport("PPT", float(-lam), 0.0, tol)


def realignment_via_vectorization(rho: DensityMatrix, params: CriterionParams) -> float:
    """``||D_x C D_y||_1`` computed from the realigned matrix instead of a Hermitian basis."""
    d1, d2 = rho.d1, rho.d2
    one1 = np.eye(d1).reshape(-1)
    one2 = np.eye(d2).reshape(-1)
    left = np.eye(d1 * d1) + (params.x - 1) / d1 * np.outer(one1, one1)
    right = np.eye(d2 * d2) + (params.y - 1) / d2 * np.outer(one2, one2)
    return trace_norm(left @ realign(rho.matrix, rho.shape) @ right)


StateFamily = Callable[[float], DensityMatrix]
Criterion = Callable[[DensityMatrix], CriterionReport]


class NoSignChangeError(ValueError):
    pass


def isotropic_family(shape: BipartiteShape) -> StateFamily:
    return lambda p: isotropic(IsotropicParams(shape, p))


def criterion_handle(which: str, shape: BipartiteShape | None = None) -> Criterion:
    """Look up a criterion by name: dV, CCNR, Fei, ESIC, ER, PPT."""
    if which in NAMED_CRITERIA:
        return lambda rho: named_criterion(rho, which)
    if which == "ER":
        return enhanced_realignment
    if which == "PPT":
        return ppt_test
    raise ValueError(f"unknown criterion {which!r}")


def xy_handle(params: CriterionParams) -> Criterion:
    return lambda rho: xy_criterion(rho, params)


def detection_threshold_numeric(
    family: StateFamily,
    criterion: Criterion,
    bracket: tuple[float, float] = (0.0, 1.0),
    xtol: float = BISECTION_XTOL,
) -> float:
    """Root of ``margin(p)`` on ``bracket`` by bisection.

    Assumes the margin is nondecreasing in p. Raises NoSignChangeError if
    the criterion detects at the lower end or never detects on the bracket.
    """
    lo, hi = bracket

    def margin(p):
        return criterion(family(p)).margin

    m_lo, m_hi = margin(lo), margin(hi)
    if m_lo > 0:
        raise NoSignChangeError(f"criterion always detects on {bracket} (margin {m_lo:.3e} at p={lo})")
    if m_hi <= 0:
        raise NoSignChangeError(f"criterion never detects on {bracket} (margin {m_hi:.3e} at p={hi})")
    if m_lo == 0:
        return lo
    return float(optimize.bisect(margin, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200))
