"""Fourier diagonalisation of the mixing matrix and Bob's strategy unitaries."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import CapacityError, DimensionError
from .linalg import DensityMatrix


def root_of_unity(n: int, power: int) -> complex:
    """omega**power with omega = exp(2 pi i / n), reduced mod n before exponentiation."""
    k = power % n
    if k == 0:
        return 1 + 0j
    if 4 * k == n:
        return 1j
    if 2 * k == n:
        return -1 + 0j
    if 4 * k == 3 * n:
        return -1j
    return complex(np.exp(2j * np.pi * k / n))


def _root_table(n: int) -> np.ndarray:
    return np.array([root_of_unity(n, k) for k in range(n)], dtype=np.complex128)


def vandermonde(n: int) -> np.ndarray:
    """V[j, k] = omega**(j*k), 0-based."""
    idx = np.arange(n)
    return _root_table(n)[np.outer(idx, idx) % n]


@dataclass(frozen=True)
class FourierBasis:
    n: int
    omega: complex
    f: np.ndarray

    @property
    def columns(self) -> list[np.ndarray]:
        """Eigenvectors |lambda_k> of the mixing matrix, k = 0..n-1."""
        return [self.f[:, k] for k in range(self.n)]


def fourier_basis(n: int) -> FourierBasis:
    if n < 1:
        raise DimensionError("n must be positive")
    f = linalg.as_matrix(vandermonde(n) / np.sqrt(n), "Fourier matrix")
    return FourierBasis(n=n, omega=root_of_unity(n, 1), f=f)


def mixing_matrix(n: int) -> DensityMatrix:
    """The fully mixed permutation average (1/n) J_n."""
    if not 1 <= n <= linalg.MAX_DIM:
        raise CapacityError(f"n={n} outside the supported range [1, {linalg.MAX_DIM}]")
    return DensityMatrix(np.full((n, n), 1.0 / n, dtype=np.complex128))


def circulant(c) -> np.ndarray:
    """Circulant matrix with first row ``c``: C[i, j] = c[(j - i) mod n]."""
    c = np.asarray(c, dtype=np.complex128)
    n = len(c)
    idx = (np.arange(n)[None, :] - np.arange(n)[:, None]) % n
    return c[idx]


def circulant_eigenvalues(c) -> list[complex]:
    """[f(omega^0), ..., f(omega^(n-1))] for f(mu) = sum_l c_l mu^l.

    These are the diagonal of F^dag C F for the circulant with first row ``c``.
    """
    c = np.asarray(c, dtype=np.complex128)
    n = len(c)
    if n == 0:
        raise DimensionError("circulant needs at least one coefficient")
    table = _root_table(n)
    idx = np.arange(n)
    return [complex(np.sum(c * table[(idx * m) % n])) for m in range(n)]


@dataclass(frozen=True)
class StrategyUnitary:
    n: int
    k: int
    mat: np.ndarray


def bob_unitary(n: int, k: int) -> StrategyUnitary:
    """T_k: Fourier columns rotated right by k - 1, so T_k^dag D T_k = |k><k|.

    ``k`` is 1-based. T_1 is the Fourier matrix itself.
    """
    if not 1 <= k <= n:
        raise DimensionError(f"strategy index k={k} outside 1..{n}")
    f = fourier_basis(n).f
    mat = linalg.as_matrix(np.roll(f, k - 1, axis=1), f"T_{k}")
    return StrategyUnitary(n=n, k=k, mat=mat)
