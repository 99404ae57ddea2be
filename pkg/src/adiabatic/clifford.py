"""Clifford multiplication on the flat tori, Hermitian eigensolvers, norms.

Matrices are plain ``complex128`` numpy arrays.  Clifford multiplication is
anti-Hermitian and squares to ``-|v|^2 Id``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteMatrix, NotHermitian
from .kernels import jacobi_eigh

HERMITIAN_TOL_2X2 = 1e-10
HERMITIAN_TOL_DENSE = 1e-9


def as_complex_matrix(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteMatrix("matrix has NaN or Inf entries")
    return m


def hermitian_defect(m):
    """Relative defect max|M - M^H| / (1 + max|M|)."""
    m = np.asarray(m)
    scale = 1.0 + (float(np.max(np.abs(m))) if m.size else 0.0)
    return float(np.max(np.abs(m - m.conj().T))) / scale if m.size else 0.0


def is_hermitian(m, tol=1e-12):
    return hermitian_defect(m) <= tol


def symmetrize(m, tol):
    """Return (M + M^H)/2 and the defect that was removed; raise if it exceeds tol."""
    m = as_complex_matrix(m)
    defect = hermitian_defect(m)
    if defect > tol:
        raise NotHermitian(f"Hermitian defect {defect:.3e} exceeds tolerance {tol:.1e}")
    return 0.5 * (m + m.conj().T), defect


@dataclass(frozen=True)
class CliffordFrameT2:
    gamma_x: np.ndarray
    gamma_y: np.ndarray

    @property
    def generators(self):
        return (self.gamma_x, self.gamma_y)


@dataclass(frozen=True)
class CliffordFrameT3:
    gamma_x: np.ndarray
    gamma_y: np.ndarray
    gamma_z: np.ndarray

    @property
    def generators(self):
        return (self.gamma_x, self.gamma_y, self.gamma_z)


def clifford_t2(v):
    """Clifford multiplication by v = (v1, v2) on T^2: [[0, -v1 + i v2], [v1 + i v2, 0]].

    Complex coefficients are accepted and extend the map complex-linearly.
    """
    v1, v2 = v
    return np.array([[0.0, -v1 + 1j * v2], [v1 + 1j * v2, 0.0]], dtype=np.complex128)


def clifford_t3(v):
    """Clifford multiplication by v = (v1, v2, v3) on T^3: [[i v3, -v1 + i v2], [v1 + i v2, -i v3]]."""
    v1, v2, v3 = v
    return np.array(
        [[1j * v3, -v1 + 1j * v2], [v1 + 1j * v2, -1j * v3]], dtype=np.complex128
    )


def clifford(v):
    return clifford_t2(v) if len(v) == 2 else clifford_t3(v)


def frame_t2():
    return CliffordFrameT2(clifford_t2((1.0, 0.0)), clifford_t2((0.0, 1.0)))


def frame_t3():
    return CliffordFrameT3(
        clifford_t3((1.0, 0.0, 0.0)), clifford_t3((0.0, 1.0, 0.0)), clifford_t3((0.0, 0.0, 1.0))
    )


def eig_hermitian_2x2(m):
    """Closed-form eigenvalues (lo, hi) of a 2x2 Hermitian matrix."""
    m = as_complex_matrix(m)
    if m.shape != (2, 2):
        raise ValueError(f"expected 2x2, got {m.shape}")
    m, _ = symmetrize(m, HERMITIAN_TOL_2X2)
    alpha = m[0, 0].real
    delta = m[1, 1].real
    half_tr = 0.5 * (alpha + delta)
    half_gap = 0.5 * (alpha - delta)
    # sqrt((tr/2)^2 - det) written without the cancellation
    rad = float(np.hypot(half_gap, abs(m[0, 1])))
    return (half_tr - rad, half_tr + rad)


def eig_hermitian_dense(m, return_vectors=False, backend=None):
    """Full ascending spectrum of a Hermitian matrix by Jacobi rotations.

    The input is symmetrized first; a relative Hermitian defect above 1e-9
    raises NotHermitian.
    """
    m, _ = symmetrize(m, HERMITIAN_TOL_DENSE)
    return jacobi_eigh(m, want_vectors=return_vectors, backend=backend)


def operator_norm(m, backend=None):
    """Largest singular value (square or rectangular input)."""
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFiniteMatrix("matrix has NaN or Inf entries")
    if m.size == 0 or not np.any(m):
        return 0.0
    if m.shape[0] == m.shape[1] and is_hermitian(m, 1e-14):
        w = jacobi_eigh(0.5 * (m + m.conj().T), backend=backend)
        return float(max(abs(w[0]), abs(w[-1])))
    gram = m.conj().T @ m
    w = jacobi_eigh(0.5 * (gram + gram.conj().T), backend=backend)
    return float(np.sqrt(max(w[-1], 0.0)))
