"""Bipartite density matrices and the isotropic / Werner-like families.

The orthonormal set ``{f_i}`` in the larger factor is taken to be the first
``d1`` computational basis vectors of C^d2; every criterion in this package
is invariant under that choice.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .tensor_core import (
    HERMITIAN_TOL,
    BipartiteShape,
    DimensionError,
    NotHermitianError,
    as_matrix,
    hermitian_spectrum,
    partial_trace,
)

TRACE_TOL = 1e-10
PSD_TOL = 1e-10


class NotPSDError(ValueError):
    def __init__(self, min_eigenvalue: float, what: str = "matrix"):
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(f"{what} is not positive semidefinite: min eigenvalue {min_eigenvalue:.6e}")


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated state on C^d1 (x) C^d2.

    Construction checks finiteness, Hermiticity, unit trace and positivity
    (each to about 1e-10). The stored array is read-only.
    """

    matrix: np.ndarray = field(repr=False)
    shape: BipartiteShape

    def __post_init__(self):
        m = as_matrix(self.matrix, square=True).copy()
        if m.shape[0] != self.shape.dim:
            raise DimensionError(
                f"matrix of size {m.shape[0]} does not match shape {self.shape}"
            )
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise NotHermitianError("density matrix is not Hermitian")
        tr = np.trace(m)
        if abs(tr - 1) > TRACE_TOL:
            raise ValueError(f"density matrix has trace {tr.real:.12g}, expected 1")
        lam = hermitian_spectrum(m)[0]
        if lam < -PSD_TOL:
            raise NotPSDError(lam, "density matrix")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_array(cls, a, d1: int, d2: int) -> "DensityMatrix":
        return cls(np.asarray(a, dtype=complex), BipartiteShape(d1, d2))

    @property
    def d1(self) -> int:
        return self.shape.d1

    @property
    def d2(self) -> int:
        return self.shape.d2

    def marginals(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            partial_trace(self.matrix, self.shape, keep="first"),
            partial_trace(self.matrix, self.shape, keep="second"),
        )


@dataclass(frozen=True)
class IsotropicParams:
    shape: BipartiteShape
    p: float

    def __post_init__(self):
        self.shape.require_ordered()
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"isotropic mixing parameter must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class WernerParams:
    shape: BipartiteShape
    q: float

    def __post_init__(self):
        self.shape.require_ordered()


def max_entangled_vector(shape: BipartiteShape) -> np.ndarray:
    """``|psi+> = sum_{i<d1} |e_i>|f_i> / sqrt(d1)`` embedded in C^d1 (x) C^d2."""
    shape.require_ordered()
    v = np.zeros(shape.dim, dtype=complex)
    for i in range(shape.d1):
        v[i * shape.d2 + i] = 1.0
    return v / np.sqrt(shape.d1)


def _embedded_swap(shape: BipartiteShape) -> np.ndarray:
    # sum_{i,j<d1} |e_i><e_j| (x) |f_j><f_i|
    d1, d2 = shape.d1, shape.d2
    w = np.zeros((d1, d2, d1, d2), dtype=complex)
    for i in range(d1):
        for j in range(d1):
            w[i, j, j, i] = 1.0
    return w.reshape(shape.dim, shape.dim)


def isotropic(params: IsotropicParams) -> DensityMatrix:
    """``(1-p)/(d1 d2) I + p |psi+><psi+|``."""
    shape, p = params.shape, params.p
    psi = max_entangled_vector(shape)
    rho = (1 - p) / shape.dim * np.eye(shape.dim) + p * np.outer(psi, psi.conj())
    return DensityMatrix(rho, shape)


def werner_like(params: WernerParams) -> DensityMatrix:
    """``(1-q)/(d1 d2) I + (q/d1) sum_ij |e_i><e_j| (x) |f_j><f_i|``.

    Raises NotPSDError (carrying the minimal eigenvalue) when ``q`` does not
    give a state.
    """
    shape, q = params.shape, params.q
    rho = (1 - q) / shape.dim * np.eye(shape.dim) + q / shape.d1 * _embedded_swap(shape)
    lam = hermitian_spectrum(rho)[0]
    if lam < -PSD_TOL:
        raise NotPSDError(lam, f"Werner-like operator at q={q}")
    return DensityMatrix(rho, shape)


def werner_q_range(shape: BipartiteShape) -> tuple[float, float]:
    """Interval of q for which ``werner_like`` yields a state.

    Read off from the spectrum (1-q)/(d1 d2) and (1-q)/(d1 d2) +- q/d1;
    ``werner_like`` still validates numerically.
    """
    shape.require_ordered()
    return -1.0 / (shape.d2 - 1), 1.0 / (shape.d2 + 1)


def isotropic_marginals(params: IsotropicParams) -> tuple[np.ndarray, np.ndarray]:
    """Reduced states ``(rho_1, rho_2)`` of the isotropic state.

    ``rho_1 = I/d1`` and ``rho_2 = (1-p)/d2 I + (p/d1) sum_i |f_i><f_i|``.
    The identity prefactor is (1-p)/d2, which is what the partial trace of
    the isotropic state gives and what makes rho_2 unit-trace; a prefactor
    of (1-p)/d1 would not be normalized for d1 != d2.
    """
    shape, p = params.shape, params.p
    d1, d2 = shape.d1, shape.d2
    rho1 = np.eye(d1, dtype=complex) / d1
    proj = np.zeros((d2, d2), dtype=complex)
    proj[np.arange(d1), np.arange(d1)] = 1.0
    rho2 = (1 - p) / d2 * np.eye(d2, dtype=complex) + p / d1 * proj
    return rho1, rho2


def random_density_matrix(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    """Ginibre-distributed random state on C^d."""
    k = d if rank is None else rank
    g = rng.standard_normal((d, k)) + 1j * rng.standard_normal((d, k))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_separable(
    shape: BipartiteShape, rng: np.random.Generator, n_terms: int | None = None
) -> DensityMatrix:
    """Random convex mixture of at most 20 product states."""
    k = int(rng.integers(1, 21)) if n_terms is None else n_terms
    weights = rng.dirichlet(np.ones(k))
    rho = np.zeros((shape.dim, shape.dim), dtype=complex)
    for w in weights:
        a = random_density_matrix(shape.d1, rng, rank=int(rng.integers(1, shape.d1 + 1)))
        b = random_density_matrix(shape.d2, rng, rank=int(rng.integers(1, shape.d2 + 1)))
        rho += w * np.kron(a, b)
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho, shape)


def random_state(shape: BipartiteShape, rng: np.random.Generator) -> DensityMatrix:
    rho = random_density_matrix(shape.dim, rng)
    return DensityMatrix((rho + rho.conj().T) / 2, shape)
