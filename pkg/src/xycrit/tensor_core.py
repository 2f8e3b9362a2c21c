"""Dense complex linear algebra for bipartite operators.

Operators on C^d1 (x) C^d2 are plain ``numpy`` arrays of shape
``(d1*d2, d1*d2)``; the composite index of ``|i> (x) |k>`` is ``i*d2 + k``
(row-major, the same ordering produced by ``numpy.kron``).

Vectorization is row-major as well: ``|A> = sum_ij A_ij |i>|j>``, so that
``<A|B> = Tr(A^dagger B)``. The realignment map is the entry permutation
that satisfies ``R(A (x) B) = |A><B*|`` for this convention.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

HERMITIAN_TOL = 1e-10
SVD_CUTOFF = 1e-12

Factor = Literal["first", "second"]


class DimensionError(ValueError):
    """Array shape does not match the declared bipartite dimensions."""


class NotHermitianError(ValueError):
    pass


class NumericalError(RuntimeError):
    """A LAPACK routine failed to converge."""


@dataclass(frozen=True)
class BipartiteShape:
    """Local dimensions ``(d1, d2)`` of a bipartite system."""

    d1: int
    d2: int

    def __post_init__(self):
        for name in ("d1", "d2"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value:
                raise TypeError(f"{name} must be an integer, got {value!r}")
            if value < 2:
                raise DimensionError(f"{name} must be >= 2, got {value}")
            object.__setattr__(self, name, int(value))

    @property
    def dim(self) -> int:
        return self.d1 * self.d2

    @property
    def is_ordered(self) -> bool:
        return self.d2 >= self.d1

    def ordered(self) -> "BipartiteShape":
        """Return the shape with factors swapped if needed so that d2 >= d1."""
        if self.is_ordered:
            return self
        return BipartiteShape(self.d2, self.d1)

    def require_ordered(self) -> "BipartiteShape":
        if not self.is_ordered:
            raise DimensionError(
                f"expected d2 >= d1, got (d1, d2) = ({self.d1}, {self.d2}); "
                "use BipartiteShape.ordered() to swap the factors"
            )
        return self


def as_matrix(a, *, square: bool = False) -> np.ndarray:
    """Validate ``a`` as a finite 2-d complex array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got {m.shape}")
    return m


def _check_bipartite(rho, shape: BipartiteShape) -> np.ndarray:
    m = as_matrix(rho, square=True)
    if m.shape[0] != shape.dim:
        raise DimensionError(
            f"operator of size {m.shape[0]} does not act on "
            f"C^{shape.d1} (x) C^{shape.d2}"
        )
    return m


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def vectorize(a) -> np.ndarray:
    """Row-major vectorization ``|A> = sum_ij A_ij |i>|j>``."""
    return as_matrix(a).reshape(-1)


def unvectorize(v, rows: int, cols: int) -> np.ndarray:
    return np.asarray(v, dtype=complex).reshape(rows, cols)


def realign(rho, shape: BipartiteShape) -> np.ndarray:
    """Realigned matrix of a bipartite operator, of shape ``(d1**2, d2**2)``.

    ``R[(i,j), (k,l)] = rho[(i,k), (j,l)]``, which is the linear extension
    of ``R(A (x) B) = |A><B*|``.
    """
    d1, d2 = shape.d1, shape.d2
    t = _check_bipartite(rho, shape).reshape(d1, d2, d1, d2)
    return t.transpose(0, 2, 1, 3).reshape(d1 * d1, d2 * d2)


def partial_transpose(rho, shape: BipartiteShape, factor: Factor = "second") -> np.ndarray:
    d1, d2 = shape.d1, shape.d2
    t = _check_bipartite(rho, shape).reshape(d1, d2, d1, d2)
    if factor == "second":
        t = t.transpose(0, 3, 2, 1)
    elif factor == "first":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"factor must be 'first' or 'second', got {factor!r}")
    return t.reshape(shape.dim, shape.dim)


def partial_trace(rho, shape: BipartiteShape, keep: Factor = "first") -> np.ndarray:
    d1, d2 = shape.d1, shape.d2
    t = _check_bipartite(rho, shape).reshape(d1, d2, d1, d2)
    if keep == "first":
        return np.einsum("ikjk->ij", t)
    if keep == "second":
        return np.einsum("kikj->ij", t)
    raise ValueError(f"keep must be 'first' or 'second', got {keep!r}")


def singular_values(a, *, cutoff: float | None = SVD_CUTOFF) -> np.ndarray:
    """Singular values in descending order.

    Values below ``cutoff`` times the largest one are set to exactly zero;
    pass ``cutoff=None`` to keep the raw LAPACK output.
    """
    m = as_matrix(a)
    try:
        s = np.linalg.svd(m, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed: {exc}") from exc
    if cutoff is not None and s.size and s[0] > 0:
        s = np.where(s < cutoff * s[0], 0.0, s)
    return s


def trace_norm(a) -> float:
    """Sum of singular values."""
    return float(np.sum(singular_values(a, cutoff=None)))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(a, square=True)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def hermitian_spectrum(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending."""
    m = as_matrix(a, square=True)
    dev = np.max(np.abs(m - m.conj().T), initial=0.0)
    if dev > tol:
        raise NotHermitianError(f"max |A - A^dagger| = {dev:.3e} exceeds {tol:.0e}")
    try:
        return np.linalg.eigvalsh(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
