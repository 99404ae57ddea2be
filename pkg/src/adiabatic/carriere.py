"""Tangential Dirac operator of the Carriere flow on the hyperbolic torus T^3_A.

A = [[2, 1], [1, 1]] has eigenvalues lambda = (3 + sqrt 5)/2 and 1/lambda with
unit eigenvectors V1 = (G, K), V2 = (-K, G).  The flow is along lambda^{-t} V2,
and on the section (a, f) exp(2 pi i (b x + c y)) the tangential operator is
diag(-p, p) with

    p(t) = lambda^{-t} 2 pi (-K b + G c),   t in [0, 1].

So p sweeps the closed interval between 2 pi (-K b + G c) / lambda and
2 pi (-K b + G c).  The union over (b, c) is all of R, while 0 (b = c = 0,
sections depending on t alone) is the only eigenvalue.
"""
from dataclasses import dataclass
from math import log, pi, sqrt

import numpy as np

from . import kernels

CONTAIN_TOL = 1e-12


@dataclass(frozen=True)
class CarriereSpec:
    A: tuple
    lam: float
    G: float
    K: float
    kappa_coefficient: float  # mean curvature is kappa_coefficient * dt

    @property
    def v1(self):
        return (self.G, self.K)

    @property
    def v2(self):
        return (-self.K, self.G)


def carriere_constants():
    s5 = sqrt(5.0)
    lam = (3.0 + s5) / 2.0
    norm = sqrt(0.5 * s5 + 2.5)
    G = (0.5 * s5 + 0.5) / norm
    K = 1.0 / norm
    return CarriereSpec(A=((2, 1), (1, 1)), lam=lam, G=G, K=K, kappa_coefficient=-log(lam))


CONSTANTS = carriere_constants()


@dataclass(frozen=True)
class SpectralInterval:
    b: int
    c: int
    lo: float
    hi: float

    def contains(self, mu, tol=CONTAIN_TOL):
        return self.lo - tol <= mu <= self.hi + tol


def _endpoint(b, c, spec=CONSTANTS):
    return 2.0 * pi * (-spec.K * b + spec.G * c)


def df_interval(b, c):
    """Range of p over t in [0, 1] for the (b, c) section."""
    x = _endpoint(b, c)
    y = x / CONSTANTS.lam
    return SpectralInterval(int(b), int(c), min(x, y), max(x, y))


def scan_order(bound):
    """(b, c) with max(|b|, |c|) <= bound, by shell, then |b| + |c|, then (b, c)."""
    rng = range(-bound, bound + 1)
    pairs = [(b, c) for b in rng for c in rng]
    return sorted(pairs, key=lambda bc: (max(abs(bc[0]), abs(bc[1])), abs(bc[0]) + abs(bc[1]), bc))


@dataclass(frozen=True)
class MembershipResult:
    mu: float
    status: str  # "eigenvalue", "continuous" or "not_found"
    witness: tuple = None
    bound: int = None


def spectrum_contains(mu, search_bound):
    """Locate mu in the spectrum of the tangential operator.

    The operator contributes both -p and +p, but the interval of (-b, -c) is the
    negation of the interval of (b, c), so scanning +p over the symmetric box
    already covers the -p branch.  The witness is the first (b, c) in
    ``scan_order`` whose interval holds mu.
    """
    if search_bound < 1:
        raise ValueError("search_bound must be at least 1")
    mu = float(mu)
    if mu == 0.0:
        return MembershipResult(mu, "eigenvalue", (0, 0))
    order = np.array(scan_order(search_bound))
    x = 2.0 * pi * (-CONSTANTS.K * order[:, 0] + CONSTANTS.G * order[:, 1])
    y = x / CONSTANTS.lam
    lo, hi = np.minimum(x, y), np.maximum(x, y)
    hit = np.flatnonzero((lo - CONTAIN_TOL <= mu) & (mu <= hi + CONTAIN_TOL))
    if hit.size:
        b, c = order[hit[0]]
        return MembershipResult(mu, "continuous", (int(b), int(c)))
    return MembershipResult(mu, "not_found", bound=int(search_bound))


def interval_table(search_bound):
    """lo, hi arrays for every (b, c) != (0, 0) in the box, in scan order."""
    order = np.array(scan_order(search_bound)[1:])
    x = 2.0 * pi * (-CONSTANTS.K * order[:, 0] + CONSTANTS.G * order[:, 1])
    y = x / CONSTANTS.lam
    return np.minimum(x, y), np.maximum(x, y)


def mu_grid(lo, hi, step):
    if not lo <= hi:
        raise ValueError("mu range must satisfy lo <= hi")
    if not step > 0:
        raise ValueError("step must be positive")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    mus = lo + step * np.arange(count)
    # a grid point meant to be 0 must hit the eigenvalue exactly
    mus[np.abs(mus) < 1e-9 * step] = 0.0
    return mus


def coverage_report(mu_range, step, search_bound, backend=None):
    """Fraction of the grid lo, lo + step, ..., hi lying in the spectrum (within the bound)."""
    lo, hi = mu_range
    mus = mu_grid(lo, hi, step)
    a, b = interval_table(search_bound)
    covered = kernels.interval_cover(mus, a, b, CONTAIN_TOL, backend=backend)
    return float(np.count_nonzero(covered)) / mus.size


@dataclass(frozen=True)
class DFEigenvalues:
    eigenvalues: tuple
    multiplicity: int
    label: str


def df_eigenvalue_set():
    """Point spectrum: 0 with multiplicity 2, carried by the basic sections."""
    return DFEigenvalues(eigenvalues=(0.0,), multiplicity=2, label="basic sections")


def nonconstancy_witness(b, c):
    """p at t = 0 and t = 1 plus its t-derivative coefficient -ln(lambda) p.

    A nonzero coefficient rules out (b, c) as an eigenvalue section because
    an eigenvalue must be constant in t.
    """
    p0 = _endpoint(b, c)
    p1 = p0 / CONSTANTS.lam
    rate = -log(CONSTANTS.lam)
    return {"p_t0": p0, "p_t1": p1, "log_derivative": rate, "derivative_at_0": rate * p0}
