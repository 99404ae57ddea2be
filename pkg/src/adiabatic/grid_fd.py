"""Central-difference discretization of the collapsing Dirac operator on T^2.

Layout of the assembled matrix (size 2 N^2): index = s * N^2 + j * N + i for
spinor component s, y-index j and x-index i (spinor-major, x fastest).  The
periodic stencil is (f[i+1] - f[i-1]) / (2h) with h = 2 pi / N, so

    D_h = g_x (x) C_x + g_y (x) C_y + (1/t - 1) c(xi) (x) (a C_x + b C_y).

C_x, C_y are real antisymmetric and the Clifford factors anti-Hermitian, so
D_h is Hermitian.  The discrete Fourier basis block-diagonalizes D_h with
symbol m -> sin(m h)/h; the zero modes at m, n in {0, N/2} are the four
doublers and no Wilson term removes them.
"""
from dataclasses import dataclass

import numpy as np

from ._backend import parallel_map
from .clifford import clifford_t2, eig_hermitian_dense, hermitian_defect
from .errors import InvalidCollapse, InvalidGrid, ModeOutOfRange
from .torus import mode_spectrum


@dataclass(frozen=True)
class GridSpec:
    N: int
    flow: object
    t: float = 1.0

    def __post_init__(self):
        n = self.N
        if not isinstance(n, (int, np.integer)) or n < 8 or n & (n - 1):
            raise InvalidGrid(f"N must be a power of two and at least 8, got {n}")
        if self.flow.dimension != 2:
            raise InvalidGrid("only T^2 flows are discretized")
        if not self.t > 0:
            raise InvalidCollapse(f"collapse parameter must be positive, got {self.t}")

    @property
    def h(self):
        return 2.0 * np.pi / self.N


@dataclass(frozen=True)
class AssembledOperator:
    spec: GridSpec
    matrix: np.ndarray
    ordering: str = "spinor-major, x-fastest"

    @property
    def hermitian_defect(self):
        return hermitian_defect(self.matrix)


def central_difference(N, h):
    """Periodic (f[i+1] - f[i-1]) / 2h as an N x N matrix."""
    d = np.zeros((N, N))
    idx = np.arange(N)
    d[idx, (idx + 1) % N] = 0.5 / h
    d[idx, (idx - 1) % N] = -0.5 / h
    return d


def assemble(spec):
    N, h = spec.N, spec.h
    d1 = central_difference(N, h)
    eye = np.eye(N)
    cx = np.kron(eye, d1)
    cy = np.kron(d1, eye)
    a, b = spec.flow.direction
    u = 1.0 / spec.t - 1.0
    mat = np.kron(clifford_t2((1.0, 0.0)), cx) + np.kron(clifford_t2((0.0, 1.0)), cy)
    if u != 0.0:
        mat = mat + u * np.kron(clifford_t2((a, b)), a * cx + b * cy)
    return AssembledOperator(spec, mat)


def discrete_modes(N):
    """One representative per discrete Fourier mode: -N/2 < m, n <= N/2."""
    rng = range(-N // 2 + 1, N // 2 + 1)
    return [(m, n) for m in rng for n in rng]


def fd_symbol_spectrum(spec, mode):
    """Exact eigenvalues (-sqrt q_h, sqrt q_h) of D_h on the discrete mode."""
    m, n = mode
    half = spec.N // 2
    if abs(m) > half or abs(n) > half:
        raise ModeOutOfRange(f"mode {mode} outside |m|, |n| <= {half}")
    h = spec.h
    sm = np.sin(m * h) / h
    sn = np.sin(n * h) / h
    a, b = spec.flow.direction
    proj = a * sm + b * sn
    q = sm * sm + sn * sn + proj * proj * (1.0 / spec.t ** 2 - 1.0)
    r = float(np.sqrt(max(q, 0.0)))
    return (-r, r)


def symbol_multiset(spec):
    vals = []
    for mode in discrete_modes(spec.N):
        vals.extend(fd_symbol_spectrum(spec, mode))
    return np.sort(np.array(vals))


def spectrum_match(spec, matrix=None, backend=None):
    """Max |dense eigenvalue - symbol eigenvalue| over the sorted spectra.

    ``matrix`` overrides the assembled operator (fault injection).
    """
    if spec.N > 32:
        raise InvalidGrid("dense eigensolves are limited to N <= 32")
    if matrix is None:
        matrix = assemble(spec).matrix
    dense = eig_hermitian_dense(matrix, backend=backend)
    return float(np.max(np.abs(dense - symbol_multiset(spec))))


def kernel_dimension(spec, tol=1e-8, backend=None):
    w = eig_hermitian_dense(assemble(spec).matrix, backend=backend)
    return int(np.count_nonzero(np.abs(w) <= tol))


@dataclass
class ConvergenceStudy:
    mode: tuple
    t: float
    rows: list  # [(N, error), ...]
    order: float


def convergence_study(flow, t, mode, N_list):
    """Error of the FD symbol against the continuum +-sqrt(q) and the fitted order."""
    def one(N):
        spec = GridSpec(int(N), flow, t)
        return (int(N), abs(fd_symbol_spectrum(spec, mode)[1] - mode_spectrum(flow, mode, t)[1]))

    rows = parallel_map(one, N_list)
    ns = np.array([r[0] for r in rows], dtype=float)
    errs = np.array([r[1] for r in rows])
    if len(rows) < 2 or np.any(errs <= 0):
        order = float("nan")
    else:
        order = float(-np.polyfit(np.log(ns), np.log(errs), 1)[0])
    return ConvergenceStudy(tuple(mode), float(t), rows, order)
