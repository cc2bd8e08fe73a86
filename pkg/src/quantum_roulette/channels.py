"""Generalised Pauli operators and the qudit depolarizing channel."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DimensionError, InvalidChannelError
from .linalg import DensityMatrix
from .spectral import root_of_unity

COMPLETENESS_TOL = 1e-10


def shift_operator(d: int) -> np.ndarray:
    """Y|l> = |(l - 1) mod d>."""
    if d < 2:
        raise DimensionError(f"shift operator needs d >= 2, got {d}")
    y = np.zeros((d, d), dtype=np.complex128)
    cols = np.arange(d)
    y[(cols - 1) % d, cols] = 1.0
    return linalg.as_matrix(y, "shift operator")


def clock_operator(d: int) -> np.ndarray:
    """Z|l> = omega**l |l>."""
    if d < 2:
        raise DimensionError(f"clock operator needs d >= 2, got {d}")
    return linalg.as_matrix(np.diag([root_of_unity(d, l) for l in range(d)]), "clock operator")


def weyl_operator(d: int, i: int, j: int) -> np.ndarray:
    """Y**i Z**j, built directly: maps |l> to omega**(j*l) |(l - i) mod d>."""
    m = np.zeros((d, d), dtype=np.complex128)
    for l in range(d):
        m[(l - i) % d, l] = root_of_unity(d, j * l)
    return m


@dataclass(frozen=True)
class KrausSet:
    """Operators {E_k} with sum_k E_k^dag E_k = I (checked on construction)."""

    d: int
    ops: tuple
    label: str = ""

    def __post_init__(self):
        ops = tuple(linalg.as_matrix(e, "Kraus operator") for e in self.ops)
        if not ops:
            raise InvalidChannelError("a Kraus set needs at least one operator")
        for e in ops:
            if e.shape != (self.d, self.d):
                raise DimensionError(f"Kraus operator of shape {e.shape} in a d={self.d} set")
        residual = self.completeness_residual(ops)
        if residual > COMPLETENESS_TOL:
            raise InvalidChannelError(f"Kraus set is not trace preserving (residual {residual:.3e})")
        object.__setattr__(self, "ops", ops)

    @staticmethod
    def completeness_residual(ops) -> float:
        total = sum(e.conj().T @ e for e in ops)
        return linalg.frobenius(total - np.eye(ops[0].shape[0]))

    @classmethod
    def identity(cls, d: int) -> "KrausSet":
        return cls(d, (np.eye(d),), "identity")


def depolarizing_kraus(d: int, r: float) -> KrausSet:
    """sqrt(1 - r) I followed by sqrt(r / (d^2 - 1)) Y^i Z^j, (i, j) != (0, 0) lexicographic."""
    if d < 2:
        raise DimensionError(f"depolarizing channel needs d >= 2, got {d}")
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise InvalidChannelError(f"noise strength r={r!r} outside [0, 1]")
    weight = np.sqrt(r / (d * d - 1))
    ops = [np.sqrt(1.0 - r) * np.eye(d)]
    for i in range(d):
        for j in range(d):
            if (i, j) != (0, 0):
                ops.append(weight * weyl_operator(d, i, j))
    return KrausSet(d, tuple(ops), f"depolarizing(d={d}, r={r:g})")


def apply_channel(rho: DensityMatrix, ks: KrausSet) -> DensityMatrix:
    if ks.d != rho.dim:
        raise DimensionError(f"channel on d={ks.d} applied to state of dimension {rho.dim}")
    acc = np.zeros_like(rho.mat)
    for e in ks.ops:
        acc = acc + e @ rho.mat @ e.conj().T
    return DensityMatrix(acc)
