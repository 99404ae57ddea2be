"""Per-Fourier-mode Dirac operators for linear flows on flat T^2 and T^3.

On the mode space spanned by ``(r, s) exp(i k.x)`` the collapsed Dirac
operator is the 2x2 matrix

    D_t = i c(k) + (1/t - 1) i (xi.k) c(xi)

with eigenvalues ``+-sqrt(q)``, ``q = |k|^2 + (xi.k)^2 (1/t^2 - 1)``.  The
transversal part is ``i c(k_perp)`` and the tangential part ``i (xi.k) c(xi)``.
"""
from dataclasses import dataclass
from functools import reduce
from math import gcd, isqrt

import numpy as np

from .clifford import clifford, eig_hermitian_2x2, operator_norm
from .errors import DimensionMismatch, InvalidCollapse, RequiresRationalFlow, ZeroVector

UNIT_TOL = 1e-14


@dataclass(frozen=True)
class FlowSpec:
    """Linear flow direction on T^2 or T^3.

    ``integer_direction`` is a primitive integer vector p (xi = p/|p|);
    ``numeric_direction`` is an explicit unit vector.  Flat-torus flows are
    totally geodesic, so the mean curvature is identically zero.
    """

    dimension: int
    integer_direction: tuple = None
    numeric_direction: tuple = None

    def __post_init__(self):
        if self.dimension not in (2, 3):
            raise ValueError(f"dimension must be 2 or 3, got {self.dimension}")
        if self.integer_direction is None and self.numeric_direction is None:
            raise ValueError("a flow needs an integer or a numeric direction")
        if self.integer_direction is not None:
            p = tuple(int(x) for x in self.integer_direction)
            if len(p) != self.dimension:
                raise DimensionMismatch(f"direction {p} does not match dimension {self.dimension}")
            if not any(p):
                raise ZeroVector("flow direction is the zero vector")
            if reduce(gcd, p) != 1:
                raise ValueError(f"integer direction {p} is not primitive")
            object.__setattr__(self, "integer_direction", p)
        if self.numeric_direction is not None:
            v = tuple(float(x) for x in self.numeric_direction)
            if len(v) != self.dimension:
                raise DimensionMismatch(f"direction {v} does not match dimension {self.dimension}")
            if abs(1.0 - sum(x * x for x in v)) > UNIT_TOL:
                raise ValueError(f"numeric direction {v} is not a unit vector")
            object.__setattr__(self, "numeric_direction", v)
        if self.integer_direction is not None and self.numeric_direction is not None:
            gap = np.max(np.abs(self._from_integer() - np.array(self.numeric_direction)))
            if gap > UNIT_TOL:
                raise ValueError(f"integer and numeric directions disagree by {gap:.2e}")

    @classmethod
    def rational(cls, *p):
        p = tuple(int(x) for x in p)
        if not any(p):
            raise ZeroVector("flow direction is the zero vector")
        g = reduce(gcd, p)
        return cls(len(p), integer_direction=tuple(x // g for x in p))

    @classmethod
    def numeric(cls, *v):
        return cls(len(v), numeric_direction=tuple(v))

    @property
    def is_rational(self):
        return self.integer_direction is not None

    @property
    def kappa(self):
        return 0.0

    def _from_integer(self):
        p = np.array(self.integer_direction, dtype=float)
        return p / np.sqrt(float(sum(x * x for x in self.integer_direction)))

    @property
    def direction(self):
        if self.integer_direction is not None:
            return self._from_integer()
        return np.array(self.numeric_direction, dtype=float)

    def __str__(self):
        if self.is_rational:
            return "/".join(str(x) for x in self.integer_direction)
        return "num:" + ",".join(repr(x) for x in self.numeric_direction)


@dataclass(frozen=True)
class ModeOperator:
    kind: str  # "full", "transversal" or "tangential"
    mode: tuple
    matrix: np.ndarray
    t: float = None


@dataclass(frozen=True)
class BasicSpectrum:
    flow: FlowSpec
    entries: list  # [(mode, (-lam, lam)), ...]

    @property
    def eigenvalues(self):
        return sorted(x for _, pair in self.entries for x in pair)


def _check_t(t):
    if not t > 0:
        raise InvalidCollapse(f"collapse parameter must be positive, got {t}")


def _check_mode(flow, mode):
    if len(mode) != flow.dimension:
        raise DimensionMismatch(f"mode {tuple(mode)} has wrong arity for a T^{flow.dimension} flow")
    return tuple(int(x) for x in mode)


def flow_projection(flow, mode):
    """xi . k for the given mode; integer directions use the exact dot product p.k."""
    if flow.is_rational:
        dot = sum(p * int(k) for p, k in zip(flow.integer_direction, mode))
        return dot / float(np.sqrt(float(sum(p * p for p in flow.integer_direction))))
    return float(np.dot(flow.direction, np.asarray(mode, dtype=float)))


def mode_matrix_t2(flow, mode, t):
    if flow.dimension != 2:
        raise DimensionMismatch("mode_matrix_t2 needs a T^2 flow")
    _check_t(t)
    m, n = _check_mode(flow, mode)
    a, b = flow.direction
    u = (1.0 / t) * (-t + 1.0)
    s = 1j * a * m + 1j * b * n
    upper = -1j * m - n + u * (-a + 1j * b) * s
    lower = 1j * m - n + u * (a + 1j * b) * s
    mat = np.array([[0.0, upper], [lower, 0.0]], dtype=np.complex128)
    return ModeOperator("full", (m, n), mat, float(t))


def mode_matrix_t3(flow, mode, t):
    if flow.dimension != 3:
        raise DimensionMismatch("mode_matrix_t3 needs a T^3 flow")
    _check_t(t)
    m, n, k = _check_mode(flow, mode)
    a, b, c = flow.direction
    u = 1.0 / t - 1.0
    flat = np.array([[-k, -1j * m - n], [1j * m - n, k]], dtype=np.complex128)
    xi = np.array([[1j * c, -a + 1j * b], [a + 1j * b, -1j * c]], dtype=np.complex128)
    mat = flat + u * xi * (1j * a * m + 1j * b * n + 1j * c * k)
    return ModeOperator("full", (m, n, k), mat, float(t))


def mode_matrix(flow, mode, t):
    return mode_matrix_t2(flow, mode, t) if flow.dimension == 2 else mode_matrix_t3(flow, mode, t)


def mode_q(flow, mode, t):
    """q = |k|^2 + (xi.k)^2 (1/t^2 - 1), clamped at 0."""
    _check_t(t)
    mode = _check_mode(flow, mode)
    s = flow_projection(flow, mode)
    k2 = float(sum(x * x for x in mode))
    return max(k2 + s * s * (1.0 / (t * t) - 1.0), 0.0)


def mode_spectrum(flow, mode, t):
    r = np.sqrt(mode_q(flow, mode, t))
    return (-r, r)


def mode_spectrum_t2(flow, mode, t):
    if flow.dimension != 2:
        raise DimensionMismatch("mode_spectrum_t2 needs a T^2 flow")
    return mode_spectrum(flow, mode, t)


def mode_spectrum_t3(flow, mode, t):
    if flow.dimension != 3:
        raise DimensionMismatch("mode_spectrum_t3 needs a T^3 flow")
    return mode_spectrum(flow, mode, t)


def tangential_matrix(flow, mode):
    """D_F = xi . grad_xi on the mode: i (xi.k) c(xi)."""
    mode = _check_mode(flow, mode)
    return 1j * flow_projection(flow, mode) * clifford(tuple(flow.direction))


def transversal_matrix(flow, mode):
    """D_tr on the mode: i c(k - (xi.k) xi)."""
    mode = _check_mode(flow, mode)
    xi = flow.direction
    k = np.asarray(mode, dtype=float)
    perp = k - flow_projection(flow, mode) * xi
    return 1j * clifford(tuple(perp))


def flat_matrix(flow, mode):
    """Unperturbed Dirac operator on the mode: i c(k)."""
    mode = _check_mode(flow, mode)
    return 1j * clifford(tuple(float(x) for x in mode))


def df_mode_spectrum(flow, mode):
    """Eigenvalues of the tangential operator on the mode, (-|xi.k|, |xi.k|)."""
    s = abs(flow_projection(flow, _check_mode(flow, mode)))
    return (-s, s)


def is_basic_mode(flow, mode):
    """Exact for integer directions; numeric directions only certify the zero mode."""
    mode = _check_mode(flow, mode)
    if flow.is_rational:
        return sum(p * k for p, k in zip(flow.integer_direction, mode)) == 0
    return not any(mode)


def enumerate_modes(dimension, cutoff):
    """All integer modes with max |k_i| <= cutoff, ordered by (max|k_i|, k)."""
    rng = range(-cutoff, cutoff + 1)
    if dimension == 2:
        modes = [(m, n) for m in rng for n in rng]
    else:
        modes = [(m, n, k) for m in rng for n in rng for k in rng]
    return sorted(modes, key=lambda md: (max(abs(x) for x in md), md))


def basic_spectrum(flow, max_j):
    """Basic Dirac spectrum from the basic modes.

    T^2: modes j p_perp for |j| <= max_j with p_perp = (p2, -p1).
    T^3: the basic modes are a rank-2 lattice; all of them with
    max |k_i| <= max_j are listed.
    """
    if not flow.is_rational:
        raise RequiresRationalFlow("basic modes can only be certified for integer directions")
    if max_j < 0:
        raise ValueError("max_j must be nonnegative")
    entries = []
    if flow.dimension == 2:
        p1, p2 = flow.integer_direction
        for j in range(0, max_j + 1):
            for sign in ((1, -1) if j else (1,)):
                mode = (sign * j * p2, -sign * j * p1)
                lam = float(np.sqrt(mode[0] ** 2 + mode[1] ** 2))
                entries.append((mode, (-lam, lam)))
    else:
        for mode in enumerate_modes(3, max_j):
            if is_basic_mode(flow, mode):
                k2 = sum(x * x for x in mode)
                r = isqrt(k2)
                lam = float(r) if r * r == k2 else float(np.sqrt(k2))
                entries.append((mode, (-lam, lam)))
    return BasicSpectrum(flow, entries)


def decompose_mode(flow, mode, t):
    """Split D_t on a mode into transversal and tangential parts.

    Returns (transversal, tangential, defect) where defect is the operator
    norm of D_t - [D_flat + (1/t - 1) D_F], the collapse identity residual.
    """
    full = mode_matrix(flow, mode, t)
    mode = full.mode
    tr = ModeOperator("transversal", mode, transversal_matrix(flow, mode))
    tg = ModeOperator("tangential", mode, tangential_matrix(flow, mode))
    residual = full.matrix - (flat_matrix(flow, mode) + (1.0 / t - 1.0) * tg.matrix)
    return tr, tg, operator_norm(residual)


def anticommutator_defect(flow, mode):
    """||D_tr D_F + D_F D_tr|| on one mode (vanishes when the mean curvature is zero)."""
    tr = transversal_matrix(flow, mode)
    tg = tangential_matrix(flow, mode)
    return operator_norm(tr @ tg + tg @ tr)


def collapse_square_defect(flow, mode, t):
    """||(D_tr + D_F/t)^2 - D_tr^2 - D_F^2/t^2|| on one mode, for constant collapse t."""
    _check_t(t)
    tr = transversal_matrix(flow, mode)
    tg = tangential_matrix(flow, mode)
    lhs = (tr + tg / t) @ (tr + tg / t)
    return operator_norm(lhs - tr @ tr - (tg @ tg) / (t * t))


def mode_eigenvalues(flow, mode, t):
    """Eigenvalues of the assembled mode matrix via the closed-form 2x2 solver."""
    return eig_hermitian_2x2(mode_matrix(flow, mode, t).matrix)


def q_table(flow, modes, t_values):
    """Vectorized q over modes (rows) and collapse parameters (columns)."""
    t = np.asarray(t_values, dtype=float)
    if np.any(t <= 0):
        raise InvalidCollapse("collapse parameters must be positive")
    k = np.asarray(modes, dtype=float).reshape(-1, flow.dimension)
    s = np.array([flow_projection(flow, md) for md in np.asarray(modes, dtype=int).reshape(-1, flow.dimension)])
    k2 = np.sum(k * k, axis=1)
    q = k2[:, None] + (s * s)[:, None] * (1.0 / (t * t) - 1.0)[None, :]
    return np.maximum(q, 0.0)

