"""Small dense complex matrix kernel.

Matrices are plain ``numpy`` arrays of dtype ``complex128``; the helpers here
validate shape and finiteness and provide the handful of products the game
needs. States are wrapped in :class:`DensityMatrix`, which checks the physical
invariants once, at construction.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DimensionError, InvalidStateError, NotUnitaryError

#: Largest matrix dimension accepted anywhere in the engine.
MAX_DIM = 9

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-10
TRACE_IMAG_TOL = 1e-12
PSD_TOL = 1e-9
UNITARY_TOL = 1e-10


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a read-only square complex128 array.

    Raises:
        DimensionError: if ``a`` is not a non-empty square 2-D array.
        CapacityError: if the dimension exceeds :data:`MAX_DIM`.
        InvalidStateError: if any entry is NaN or infinite.
    """
    m = np.array(a, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DimensionError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if m.shape[0] > MAX_DIM:
        raise CapacityError(f"{name} has dimension {m.shape[0]}, above the cap of {MAX_DIM}")
    if not np.all(np.isfinite(m)):
        raise InvalidStateError(f"{name} has non-finite entries")
    m.flags.writeable = False
    return m


def _check_same_dim(a: np.ndarray, b: np.ndarray, what: str = "operands") -> None:
    if a.shape != b.shape:
        raise DimensionError(f"dimension mismatch between {what}: {a.shape[0]} vs {b.shape[0]}")


def identity(n: int) -> np.ndarray:
    return as_matrix(np.eye(n), "identity")


def basis_projector(n: int, k: int) -> np.ndarray:
    """|k><k| for a 0-based index ``k``."""
    if not 0 <= k < n:
        raise DimensionError(f"basis index {k} out of range for dimension {n}")
    p = np.zeros((n, n), dtype=np.complex128)
    p[k, k] = 1.0
    return as_matrix(p, "projector")


def mat_mul(a, b) -> np.ndarray:
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    _check_same_dim(a, b)
    out = a @ b
    out.flags.writeable = False
    return out


def adjoint(a) -> np.ndarray:
    a = as_matrix(a)
    out = np.ascontiguousarray(a.conj().T)
    out.flags.writeable = False
    return out


def frobenius(a) -> float:
    return float(np.linalg.norm(np.asarray(a), "fro"))


def unitarity_residual(a) -> float:
    """max(||a a^dag - I||_F, ||a^dag a - I||_F)."""
    a = np.asarray(a)
    eye = np.eye(a.shape[0])
    ah = a.conj().T
    return max(frobenius(a @ ah - eye), frobenius(ah @ a - eye))


def is_unitary(a, tol: float) -> bool:
    if tol <= 0:
        raise ValueError("tol must be positive")
    return unitarity_residual(as_matrix(a)) <= tol


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite state of the roulette.

    Invariants are enforced on construction; violations raise
    :class:`InvalidStateError` instead of being repaired.
    """

    mat: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.mat, "density matrix")
        herm = frobenius(m - m.conj().T)
        if herm > HERMITIAN_TOL:
            raise InvalidStateError(f"density matrix is not Hermitian (residual {herm:.3e})")
        tr = np.trace(m)
        if abs(tr.real - 1.0) > TRACE_TOL or abs(tr.imag) > TRACE_IMAG_TOL:
            raise InvalidStateError(f"density matrix trace is {tr:.12g}, expected 1")
        lowest = float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])
        if lowest < -PSD_TOL:
            raise InvalidStateError(f"density matrix has negative eigenvalue {lowest:.3e}")
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    @classmethod
    def basis(cls, n: int, k: int) -> "DensityMatrix":
        """Pure basis state |k><k| with ``k`` 0-based."""
        return cls(basis_projector(n, k))

    def trace(self) -> complex:
        return complex(np.trace(self.mat))

    def diagonal(self) -> np.ndarray:
        return np.real(np.diag(self.mat))

    def allclose(self, other, atol: float) -> bool:
        other = other.mat if isinstance(other, DensityMatrix) else np.asarray(other)
        return self.mat.shape == other.shape and bool(np.max(np.abs(self.mat - other)) <= atol)


def conjugate_by(u, rho: DensityMatrix, tol: float = UNITARY_TOL) -> DensityMatrix:
    """Return u rho u^dag.

    Raises:
        NotUnitaryError: carrying the residual when ``u`` is not unitary within ``tol``.
    """
    u = as_matrix(u, "unitary")
    _check_same_dim(u, rho.mat, "unitary and state")
    residual = unitarity_residual(u)
    if residual > tol:
        raise NotUnitaryError(residual, tol)
    return DensityMatrix(u @ rho.mat @ u.conj().T)


def random_density(n: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random state from a complex Ginibre matrix, normalised to unit trace."""
    rank = n if rank is None else rank
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return DensityMatrix(rho / np.trace(rho).real)


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR with phase correction."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
