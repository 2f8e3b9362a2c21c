"""Closed-form detection thresholds of the XY family on isotropic states.

For the isotropic state rho_p on C^d1 (x) C^d2 (d2 >= d1) the scaled
correlation matrix ``C_xy = D_x C D_y`` has trace norm

    ||C_xy||_1 = (d1**2 - 1)/d1 * p + x/sqrt(d1 d2) * sqrt(y**2 + p**2 (d2 - d1)/d1)

and the XY criterion ``||C_xy||_1 <= N_x N_y`` fails exactly for
``p > p_xy``. Squaring the criterion gives a quadratic ``a p**2 + b p + c``
whose smaller root is ``p_xy``. Two routes are provided: the quadratic
(authoritative, no removable pole) and the reduced closed form in terms of
``x~ = x**2/(d1-1)``, ``y~ = y**2/(d2-1)``, ``gamma`` and ``Gamma``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .bases import CriterionParams, norm_bound
from .tensor_core import BipartiteShape

POLE_TOL = 1e-8
CONSISTENCY_TOL = 1e-10


class InconsistentThresholdError(RuntimeError):
    """A closed-form expression disagrees with the quadratic-root threshold."""


@dataclass(frozen=True)
class XYReduced:
    x_tilde: float
    y_tilde: float
    gamma: float
    Gamma: float


def gamma(shape: BipartiteShape) -> float:
    d1, d2 = shape.d1, shape.d2
    return (d2 - d1) / (d2 * (d1 - 1) * (d1 + 1) ** 2)


def big_gamma(shape: BipartiteShape) -> float:
    """Threshold at (x, y) = (0, 0), i.e. the de Vicente value."""
    d1, d2 = shape.d1, shape.d2
    return d1 / (d1 * d1 - 1) * np.sqrt(d1 - 1) * np.sqrt(d2 - 1) / np.sqrt(d1 * d2)


def reduce(shape: BipartiteShape, params: CriterionParams) -> XYReduced:
    return XYReduced(
        x_tilde=params.x**2 / (shape.d1 - 1),
        y_tilde=params.y**2 / (shape.d2 - 1),
        gamma=gamma(shape),
        Gamma=float(big_gamma(shape)),
    )


@dataclass(frozen=True)
class QuadraticCase:
    """Coefficients of ``F(p) = a p**2 + b p + c`` and its roots.

    ``F(p) >= 0`` on ``p <= p0`` is equivalent to the XY criterion.
    ``p_plus`` is None when ``a == 0`` (F is linear).
    """

    a: float
    b: float
    c: float
    discriminant: float
    p_minus: float
    p_plus: float | None
    p0: float

    def __call__(self, p):
        return self.a * p * p + self.b * p + self.c

    @property
    def regime(self) -> int:
        """Sign of the leading coefficient: +1, -1, or 0 within 1e-12."""
        if abs(self.a) <= 1e-12:
            return 0
        return 1 if self.a > 0 else -1


def quadratic_case(shape: BipartiteShape, params: CriterionParams) -> QuadraticCase:
    d1, d2 = shape.d1, shape.d2
    x, y = params.x, params.y
    alpha = (d1 * d1 - 1) / d1
    nn = norm_bound(x, y, shape)
    k = x * x * (d2 - d1) / (d1 * d1 * d2)
    m = x * x * y * y / (d1 * d2)

    a = alpha**2 - k
    b = -2 * alpha * nn
    # N_x^2 N_y^2 - x^2 y^2/(d1 d2) expanded so nothing cancels
    c = ((d1 - 1) * (d2 - 1) + (d1 - 1) * y * y + (d2 - 1) * x * x) / (d1 * d2)
    # b^2 - 4ac rewritten as a sum of nonnegative terms
    disc = 4 * (alpha**2 * m + k * c)
    root = np.sqrt(disc)

    p0 = nn / alpha
    if x == 0:
        p_minus = p0  # F(p) = (alpha p - N)^2, double root at p0
    else:
        # Vieta form of (-b - sqrt(disc)) / (2a); valid for a of either sign and a = 0
        p_minus = 2 * c / (-b + root)
    p_plus = None if abs(a) <= 1e-12 else float((-b + root) / (2 * a))
    return QuadraticCase(
        a=float(a), b=float(b), c=float(c), discriminant=float(disc),
        p_minus=float(p_minus), p_plus=p_plus, p0=float(p0),
    )


def p_xy_threshold(shape: BipartiteShape, params: CriterionParams) -> float:
    """Largest p for which the XY criterion at (x, y) does not detect rho_p."""
    shape.require_ordered()
    return quadratic_case(shape, params).p_minus


def p_xy_closed_form(shape: BipartiteShape, params: CriterionParams) -> float:
    """Reduced closed form of the threshold.

    Has a removable pole at ``gamma * x~ = 1``; raises ZeroDivisionError
    within POLE_TOL of it. Use ``p_xy_threshold`` there.
    """
    r = reduce(shape, params)
    xt, yt, g = r.x_tilde, r.y_tilde, r.gamma
    den = 1 - g * xt
    if abs(den) < POLE_TOL:
        raise ZeroDivisionError(f"closed form is singular at x~ = 1/gamma = {1 / g}")
    num = np.sqrt((1 + xt) * (1 + yt)) - np.sqrt(xt * ((1 + g) * yt + g * xt + g))
    return float(r.Gamma * num / den)


def analytic_cxy_norm(shape: BipartiteShape, params: CriterionParams, p: float) -> float:
    d1, d2 = shape.d1, shape.d2
    x, y = params.x, params.y
    return float(
        (d1 * d1 - 1) / d1 * p
        + x / np.sqrt(d1 * d2) * np.sqrt(y * y + p * p * (d2 - d1) / d1)
    )


def analytic_cxy_spectrum(
    shape: BipartiteShape, params: CriterionParams, p: float, pad_to: int | None = None
) -> np.ndarray:
    """Eigenvalues of ``C_xy C_xy^dagger``, ascending.

    The d1**2 x d1**2 product has d1**2 - 1 eigenvalues ``p**2/d1**2`` and
    one eigenvalue ``x**2/(d1 d2) (y**2 + p**2 (d2 - d1)/d1)``. With
    ``pad_to`` the result is padded with zeros, e.g. to d2**2 for the
    spectrum of ``C_xy^dagger C_xy``.
    """
    d1, d2 = shape.d1, shape.d2
    x, y = params.x, params.y
    bulk = np.full(d1 * d1 - 1, p * p / (d1 * d1))
    special = x * x / (d1 * d2) * (y * y + p * p * (d2 - d1) / d1)
    vals = np.append(bulk, special)
    if pad_to is not None:
        if pad_to < vals.size:
            raise ValueError(f"cannot pad {vals.size} eigenvalues to {pad_to}")
        vals = np.append(vals, np.zeros(pad_to - vals.size))
    return np.sort(vals)


def stationarity_check(shape: BipartiteShape, params: CriterionParams) -> float:
    """Residual ``(1 + gamma) y~ - (x~ - gamma)``; zero on the curve of minima."""
    r = reduce(shape, params)
    return (1 + r.gamma) * r.y_tilde - (r.x_tilde - r.gamma)


@dataclass(frozen=True)
class Hyperbola:
    """``x**2/(d1-1) - (1 + gamma) y**2/(d2-1) = gamma``, a line when gamma = 0."""

    shape: BipartiteShape
    gamma: float

    @property
    def coefficients(self) -> tuple[float, float, float]:
        """``(A, B, G)`` with ``A x**2 - B y**2 = G``."""
        d1, d2 = self.shape.d1, self.shape.d2
        return 1 / (d1 - 1), (1 + self.gamma) / (d2 - 1), self.gamma

    def x_of_y(self, y):
        A, B, G = self.coefficients
        return np.sqrt((G + B * np.asarray(y, dtype=float) ** 2) / A)

    def points(self, y_max: float, n: int) -> list[CriterionParams]:
        return [CriterionParams(float(self.x_of_y(y)), float(y)) for y in np.linspace(0, y_max, n)]


def p_min_from_gamma(shape: BipartiteShape) -> float:
    return float(big_gamma(shape) / np.sqrt(1 + gamma(shape)))


def p_er(shape: BipartiteShape) -> float:
    """Threshold of the enhanced realignment criterion on rho_p."""
    d1, d2 = shape.d1, shape.d2
    return float(np.sqrt((d2 - 1) / (d2 * (d1 * d1 + d1 - 1) - 1)))


def hyperbola_and_min(shape: BipartiteShape) -> tuple[Hyperbola, float]:
    shape.require_ordered()
    return Hyperbola(shape, gamma(shape)), p_er(shape)


def p_ppt(shape: BipartiteShape) -> float:
    return 1.0 / (shape.d2 + 1)


def p_dv_formula(shape: BipartiteShape) -> float:
    return float(big_gamma(shape))


def p_r_formula(shape: BipartiteShape) -> float:
    d1, d2 = shape.d1, shape.d2
    num = (d1 * d1 - 1) * d2 - np.sqrt(d1**3 * d2 - 3 * d1 * d2 + d2 * d2 + 1)
    return float(num / (d2 * d1**3 - 2 * d1 * d2 + 1))


def p_e_formula(shape: BipartiteShape) -> float:
    d1, d2 = shape.d1, shape.d2
    inner = (
        d1**3 * d2**2 - 2 * d1 * d2**2 + 3 * d2**2 + (d1**3 - 5 * d1) * d2 + d1 + 1
    ) / (d1 + 1)
    num = 2 * (d1 - 1) * d2 - np.sqrt(inner)
    return float(num / (d1 * d1 * d2 - d1 * d2 - d2 + 1))


@dataclass(frozen=True)
class ThresholdSet:
    p_ppt: float
    p_dv: float
    p_r: float
    p_f: float
    p_e: float
    p_er: float
    p_min: float

    def as_dict(self) -> dict[str, float]:
        return dict(self.__dict__)


def named_thresholds(shape: BipartiteShape, tol: float = CONSISTENCY_TOL) -> ThresholdSet:
    """All named thresholds for ``shape``.

    The closed-form expressions for dV, CCNR and ESIC are cross-checked against
    the quadratic-root threshold; p_F has no closed form and comes from the
    quadratic alone.
    """
    shape.require_ordered()
    formula = {"dV": p_dv_formula(shape), "CCNR": p_r_formula(shape), "ESIC": p_e_formula(shape)}
    for which, value in formula.items():
        ref = p_xy_threshold(shape, CriterionParams.named(which, shape))
        if abs(ref - value) > tol:
            raise InconsistentThresholdError(
                f"{which} at {shape}: closed form {value!r} vs quadratic {ref!r}"
            )
    return ThresholdSet(
        p_ppt=p_ppt(shape),
        p_dv=formula["dV"],
        p_r=formula["CCNR"],
        p_f=p_xy_threshold(shape, CriterionParams.named("Fei", shape)),
        p_e=formula["ESIC"],
        p_er=p_er(shape),
        p_min=p_min_from_gamma(shape),
    )


@dataclass(frozen=True)
class OrderingPolynomials:
    """Quadratics whose smaller roots are the CCNR and ESIC thresholds."""

    f_r: Callable[[float], float]
    f_e: Callable[[float], float]
    x0: float

    def difference(self, t):
        return self.f_e(t) - self.f_r(t)


def ordering_polynomials(shape: BipartiteShape) -> OrderingPolynomials:
    d1, d2 = shape.d1, shape.d2
    if not d2 > d1:
        raise ValueError(f"ordering polynomials need d2 > d1, got {shape}")

    def f_r(t):
        return 2 * (d1**3 * d2 - 2 * d1 * d2 + 1) * t * t - 4 * d2 * (d1 * d1 - 1) * t + 2 * (d1 * d2 - 1)

    def f_e(t):
        return (
            (d1**3 * d2 - 2 * d1 * d2 + d1 - d2 + 1) * t * t
            - 4 * d2 * (d1 * d1 - 1) * t
            + (3 * d1 * d2 - d1 - d2 - 1)
        )

    x0 = float(np.sqrt((d2 - 1) / ((d1 + 1) * d1 * d2 - (d2 + 1))))
    return OrderingPolynomials(f_r, f_e, x0)


def threshold_grid(shape: BipartiteShape, xs, ys) -> np.ndarray:
    """``p_xy`` on the outer grid ``xs x ys`` (rows indexed by x)."""
    return np.array([[p_xy_threshold(shape, CriterionParams(x, y)) for y in ys] for x in xs])

