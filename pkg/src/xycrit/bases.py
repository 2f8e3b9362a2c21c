"""Canonical operator bases and correlation matrices.

A canonical basis of B(C^d) is Hilbert-Schmidt orthonormal, Hermitian,
and starts with ``I/sqrt(d)``; the remaining d**2 - 1 elements are then
traceless.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Literal

import numpy as np

from .states import DensityMatrix
from .tensor_core import BipartiteShape, DimensionError

NamedCriterion = Literal["dV", "CCNR", "Fei", "ESIC"]
NAMED_CRITERIA: tuple[NamedCriterion, ...] = ("dV", "CCNR", "Fei", "ESIC")


@dataclass(frozen=True, eq=False)
class OperatorBasis:
    dim: int
    elements: np.ndarray = field(repr=False)  # (d**2, d, d)
    tag: str = "custom"

    def __post_init__(self):
        el = np.asarray(self.elements, dtype=complex)
        if el.shape != (self.dim**2, self.dim, self.dim):
            raise DimensionError(f"expected {self.dim**2} operators of size {self.dim}, got {el.shape}")
        el = el.copy()
        el.flags.writeable = False
        object.__setattr__(self, "elements", el)

    def __len__(self):
        return self.dim**2

    def __getitem__(self, k) -> np.ndarray:
        return self.elements[k]

    def gram(self) -> np.ndarray:
        """Matrix of Hilbert-Schmidt inner products Tr(G_a^dagger G_b)."""
        flat = self.elements.reshape(len(self), -1)
        return flat.conj() @ flat.T

    def is_canonical(self, tol: float = 1e-12) -> bool:
        d = self.dim
        herm = np.max(np.abs(self.elements - self.elements.conj().transpose(0, 2, 1))) <= tol
        ortho = np.max(np.abs(self.gram() - np.eye(d * d))) <= tol
        first = np.max(np.abs(self.elements[0] - np.eye(d) / np.sqrt(d))) <= tol
        return bool(herm and ortho and first)


@lru_cache(maxsize=None)
def _gell_mann_elements(d: int) -> np.ndarray:
    ops = [np.eye(d, dtype=complex) / np.sqrt(d)]
    pairs = [(i, j) for i in range(d) for j in range(i + 1, d)]
    for i, j in pairs:
        g = np.zeros((d, d), dtype=complex)
        g[i, j] = g[j, i] = 1 / np.sqrt(2)
        ops.append(g)
    for i, j in pairs:
        g = np.zeros((d, d), dtype=complex)
        g[i, j] = -1j / np.sqrt(2)
        g[j, i] = 1j / np.sqrt(2)
        ops.append(g)
    for k in range(1, d):
        diag = np.zeros(d)
        diag[:k] = 1.0
        diag[k] = -k
        ops.append(np.diag(diag / np.sqrt(k * (k + 1))).astype(complex))
    return np.array(ops)


def gell_mann_basis(d: int) -> OperatorBasis:
    """Normalized generalized Gell-Mann basis, identity first.

    Order: ``I/sqrt(d)``, symmetric ``(|i><j| + |j><i|)/sqrt(2)``,
    antisymmetric ``-i(|i><j| - |j><i|)/sqrt(2)`` (both for i < j in
    lexicographic order), then the d - 1 diagonal traceless elements.
    """
    if d < 2:
        raise DimensionError(f"basis dimension must be >= 2, got {d}")
    return OperatorBasis(d, _gell_mann_elements(d), tag=f"gell-mann-{d}")


def rotated_basis(basis: OperatorBasis, unitary: np.ndarray) -> OperatorBasis:
    """Canonical basis ``{U G U^dagger}``; G_0 is left unchanged."""
    u = np.asarray(unitary, dtype=complex)
    el = np.einsum("ij,ajk,lk->ail", u, basis.elements, u.conj())
    return OperatorBasis(basis.dim, el, tag=f"{basis.tag}-rotated")


def mixed_basis(basis: OperatorBasis, orthogonal: np.ndarray) -> OperatorBasis:
    """Canonical basis obtained by a real orthogonal mixing of the traceless elements."""
    o = np.asarray(orthogonal, dtype=float)
    n = len(basis) - 1
    if o.shape != (n, n):
        raise DimensionError(f"mixing matrix must be {n}x{n}")
    el = basis.elements.copy()
    el[1:] = np.einsum("ab,bij->aij", o, basis.elements[1:])
    return OperatorBasis(basis.dim, el, tag=f"{basis.tag}-mixed")


@dataclass(frozen=True, eq=False)
class CorrelationMatrix:
    shape: BipartiteShape
    entries: np.ndarray = field(repr=False)
    basis_tag: str

    @property
    def is_real(self) -> bool:
        return bool(np.max(np.abs(self.entries.imag), initial=0.0) <= 1e-12)


def correlation_matrix(
    rho: DensityMatrix, b1: OperatorBasis | None = None, b2: OperatorBasis | None = None
) -> CorrelationMatrix:
    """``C[a, b] = Tr(rho G_a (x) G_b)``; Gell-Mann bases by default."""
    shape = rho.shape
    b1 = gell_mann_basis(shape.d1) if b1 is None else b1
    b2 = gell_mann_basis(shape.d2) if b2 is None else b2
    if (b1.dim, b2.dim) != (shape.d1, shape.d2):
        raise DimensionError(f"bases of dims ({b1.dim}, {b2.dim}) do not match {shape}")
    d1, d2 = shape.d1, shape.d2
    t = rho.matrix.reshape(d1, d2, d1, d2)
    # Tr(rho A(x)B) = sum rho[i,k,j,l] A[j,i] B[l,k]
    c = np.einsum("ikjl,aji,blk->ab", t, b1.elements, b2.elements, optimize=True)
    return CorrelationMatrix(shape, c, basis_tag=f"{b1.tag}|{b2.tag}")


def scale_correlation(c: CorrelationMatrix, x: float, y: float) -> CorrelationMatrix:
    """``D_x C D_y`` with ``D_x = diag(x, 1, ..., 1)`` and ``D_y = diag(y, 1, ..., 1)``."""
    if x < 0 or y < 0:
        raise ValueError(f"scaling parameters must be nonnegative, got x={x}, y={y}")
    m = c.entries.copy()
    m[0, :] *= x
    m[:, 0] *= y
    return CorrelationMatrix(c.shape, m, c.basis_tag)


def local_norm(x: float, d: int) -> float:
    """``sqrt((d - 1 + x**2) / d)``."""
    return float(np.sqrt((d - 1 + x * x) / d))


def norm_bound(x: float, y: float, shape: BipartiteShape) -> float:
    """Right-hand side of the XY criterion, the product of the two local norms."""
    if x < 0 or y < 0:
        raise ValueError(f"x and y must be nonnegative, got x={x}, y={y}")
    return local_norm(x, shape.d1) * local_norm(y, shape.d2)


@dataclass(frozen=True)
class CriterionParams:
    """Point ``(x, y)`` of the XY family, both coordinates nonnegative."""

    x: float
    y: float

    def __post_init__(self):
        if not (np.isfinite(self.x) and np.isfinite(self.y)):
            raise ValueError("x and y must be finite")
        if self.x < 0 or self.y < 0:
            raise ValueError(f"x and y must be nonnegative, got ({self.x}, {self.y})")

    @classmethod
    def named(cls, which: NamedCriterion, shape: BipartiteShape) -> "CriterionParams":
        d1, d2 = shape.d1, shape.d2
        if which == "dV":
            return cls(0.0, 0.0)
        if which == "CCNR":
            return cls(1.0, 1.0)
        if which == "Fei":
            return cls(float(np.sqrt(2 / d1)), float(np.sqrt(2 / d2)))
        if which == "ESIC":
            return cls(float(np.sqrt(d1 + 1)), float(np.sqrt(d2 + 1)))
        raise ValueError(f"unknown criterion {which!r}; expected one of {NAMED_CRITERIA}")
