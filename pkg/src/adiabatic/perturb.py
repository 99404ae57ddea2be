"""Eigenvalue perturbation for finite Hermitian matrices.

If ||A - B||_op <= eps then the ascending spectra pair up within eps.  The
module also exposes the two ingredients of the classical min-max proof: the
min-max estimate for nonnegative matrices and the nonnegative parts
|A| + A and |A| - A.
"""
from dataclasses import dataclass, field

import numpy as np

from ._backend import parallel_map
from .clifford import HERMITIAN_TOL_DENSE, eig_hermitian_dense, operator_norm, symmetrize
from .errors import DimensionMismatch, IndexOutOfRange, NotPSD

SLACK = 1e-9
PSD_TOL = 1e-10


@dataclass
class PerturbationReport:
    n: int
    epsilon: float
    pair_distances: np.ndarray
    max_distance: float
    holds: bool
    slack: float = SLACK

    def as_dict(self):
        return {
            "n": self.n,
            "epsilon": self.epsilon,
            "max_distance": self.max_distance,
            "holds": self.holds,
        }


def _hermitian(m):
    return symmetrize(m, HERMITIAN_TOL_DENSE)[0]


def spectral_distance(A, B, slack=SLACK):
    """Pair the ascending spectra of A and B and compare with ||A - B||_op."""
    A = _hermitian(A)
    B = _hermitian(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    lam = eig_hermitian_dense(A)
    mu = eig_hermitian_dense(B)
    eps = operator_norm(A - B)
    dist = np.abs(lam - mu)
    top = float(dist.max()) if dist.size else 0.0
    return PerturbationReport(A.shape[0], eps, dist, top, top <= eps + slack, slack)


def _orthonormal_basis(cols):
    q, _ = np.linalg.qr(cols)
    return q


def minmax_eigenvalue(A, k, trial_subspaces=64, seed=0, include_eigenspace=True, extra_subspaces=()):
    """Upper estimate of the k-th eigenvalue of a nonnegative A by min-max.

    Returns the minimum over trial k-dimensional subspaces S of
    sup_{a in S, |a| = 1} |A a| = ||A Q_S||_2.  Trials are random subspaces,
    the optional ``extra_subspaces`` (n x k column bases) and, when
    ``include_eigenspace`` is set, the span of the bottom k eigenvectors, at
    which the infimum is attained.  For k = n the whole space is the only
    candidate.
    """
    A = _hermitian(A)
    n = A.shape[0]
    if not 1 <= k <= n:
        raise IndexOutOfRange(f"k must lie in 1..{n}, got {k}")
    w, v = eig_hermitian_dense(A, return_vectors=True)
    if w[0] < -PSD_TOL:
        raise NotPSD(f"minimum eigenvalue {w[0]:.3e} is negative")
    if k == n:
        return operator_norm(A)
    rng = np.random.default_rng(seed)
    trials = []
    for _ in range(trial_subspaces):
        z = rng.standard_normal((n, k)) + 1j * rng.standard_normal((n, k))
        trials.append(_orthonormal_basis(z))
    trials.extend(_orthonormal_basis(np.asarray(s, dtype=np.complex128)) for s in extra_subspaces)
    if include_eigenspace:
        trials.append(v[:, :k])
    return min(operator_norm(A @ q) for q in trials)


def absolute_value(A):
    """|A| by eigendecomposition with absolute-valued spectrum."""
    A = _hermitian(A)
    w, v = eig_hermitian_dense(A, return_vectors=True)
    return (v * np.abs(w)) @ v.conj().T


def split_nonnegative(A):
    """(|A| + A, |A| - A); eigenvalues |lambda| + lambda and |lambda| - lambda."""
    A = _hermitian(A)
    w, v = eig_hermitian_dense(A, return_vectors=True)
    plus = (v * (np.abs(w) + w)) @ v.conj().T
    minus = (v * (np.abs(w) - w)) @ v.conj().T
    return 0.5 * (plus + plus.conj().T), 0.5 * (minus + minus.conj().T)


def random_hermitian(n, seed):
    """(R + R^H)/2 with i.i.d. standard complex Gaussian R; deterministic in seed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    r = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (r + r.conj().T)


@dataclass
class TrialResult:
    index: int
    n: int
    scale: float
    report: PerturbationReport
    nonneg_gap: float  # ||A' - B'||_op for A' = |A| + A
    nonneg_pairing: float  # max pairwise distance of the spectra of A', B'

    @property
    def nonneg_bound_holds(self):
        return self.nonneg_gap <= 2.0 * self.report.epsilon + SLACK

    @property
    def nonneg_pairing_holds(self):
        return self.nonneg_pairing <= 2.0 * self.report.epsilon + SLACK


@dataclass
class SuiteResult:
    trials: list = field(default_factory=list)

    @property
    def lemma_holds(self):
        return all(t.report.holds for t in self.trials)

    @property
    def nonneg_holds(self):
        return all(t.nonneg_bound_holds and t.nonneg_pairing_holds for t in self.trials)

    @property
    def worst_lemma_margin(self):
        return max((t.report.max_distance - t.report.epsilon for t in self.trials), default=0.0)

    @property
    def worst_nonneg_ratio(self):
        return max((t.nonneg_gap / t.report.epsilon for t in self.trials if t.report.epsilon > 0), default=0.0)


PERTURBATION_SCALES = (1.0, 0.1, 0.01, 0.001)


def trial_pair(index, n, seed):
    """Deterministic (A, B, scale) for one trial; the perturbation is seeded independently of A."""
    base = np.random.SeedSequence([seed, index])
    sa, se = base.generate_state(2)
    scale = PERTURBATION_SCALES[index % len(PERTURBATION_SCALES)]
    A = random_hermitian(n, int(sa))
    B = A + scale * random_hermitian(n, int(se))
    return A, B, scale


def run_trial(index, n, seed):
    A, B, scale = trial_pair(index, n, seed)
    report = spectral_distance(A, B)
    Ap, _ = split_nonnegative(A)
    Bp, _ = split_nonnegative(B)
    gap = operator_norm(Ap - Bp)
    pairing = float(np.max(np.abs(eig_hermitian_dense(Ap) - eig_hermitian_dense(Bp))))
    return TrialResult(index, n, scale, report, gap, pairing)


def lemma_suite(trials=200, dims=range(2, 17), seed=7):
    """Run the perturbation bound and the nonnegative-part bound on random pairs.

    Trial i uses dimension dims[i % len(dims)].
    """
    dims = list(dims)
    jobs = [(i, dims[i % len(dims)]) for i in range(trials)]
    return SuiteResult(parallel_map(lambda job: run_trial(job[0], job[1], seed), jobs))
