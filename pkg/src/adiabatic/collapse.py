"""Eigenvalue trajectories of the collapsing Dirac operator over a t-grid.

Branches are indexed by (mode, sign), never by sorted position, so there is
no re-pairing across eigenvalue crossings.  Basic modes give constant
branches; every other branch grows like |xi.k| / t.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import Ambiguous, InvalidCollapse, InvalidGrid
from .torus import basic_spectrum, enumerate_modes, flow_projection, is_basic_mode, mode_spectrum


@dataclass(frozen=True)
class CollapseGrid:
    t_values: tuple

    def __post_init__(self):
        t = tuple(float(x) for x in self.t_values)
        if len(t) < 2:
            raise InvalidGrid("a collapse grid needs at least two points")
        if any(not x > 0 for x in t):
            raise InvalidCollapse("collapse parameters must be positive")
        if any(b >= a for a, b in zip(t, t[1:])):
            raise InvalidGrid("collapse grid must be strictly decreasing")
        object.__setattr__(self, "t_values", t)

    @classmethod
    def decades(cls, tmin=1e-6, tmax=1.0):
        """Log-spaced grid 10^0, 10^-1, ... down to tmin (one point per decade)."""
        lo = int(round(np.log10(tmin)))
        hi = int(round(np.log10(tmax)))
        if not np.isclose(10.0 ** lo, tmin, rtol=1e-12) or not np.isclose(10.0 ** hi, tmax, rtol=1e-12):
            raise InvalidGrid("decade grids need tmin and tmax to be powers of ten")
        return cls(tuple(10.0 ** e for e in range(hi, lo - 1, -1)))

    def __len__(self):
        return len(self.t_values)


DEFAULT_GRID = CollapseGrid.decades(1e-6, 1.0)


@dataclass(frozen=True)
class Convergent:
    limit: float


@dataclass(frozen=True)
class Divergent:
    rate: float


@dataclass
class SpectralBranch:
    mode: tuple
    sign: int
    t_values: tuple
    values: np.ndarray
    classification: object = field(default=None)

    @property
    def drift(self):
        """Total variation of the branch over the grid."""
        return float(np.sum(np.abs(np.diff(self.values))))


def sweep(flow, mode_cutoff, grid=DEFAULT_GRID):
    """All 2 (2N+1)^d branches for modes with max |k_i| <= N."""
    if mode_cutoff < 1:
        raise ValueError("mode cutoff must be at least 1")
    if not isinstance(grid, CollapseGrid):
        grid = CollapseGrid(tuple(grid))
    branches = []
    for mode in enumerate_modes(flow.dimension, mode_cutoff):
        upper = np.array([mode_spectrum(flow, mode, t)[1] for t in grid.t_values])
        for sign in (1, -1):
            branches.append(SpectralBranch(mode, sign, grid.t_values, sign * upper))
    return branches


def classify(branch, drift_tol=None, divergence_factor=100.0):
    """Convergent if the branch is flat, Divergent if it grows by divergence_factor.

    Raises Ambiguous when neither holds, which signals a grid that is too short.
    """
    v = branch.values
    tol = 1e-10 * (1.0 + abs(v[-1])) if drift_tol is None else drift_tol
    if branch.drift <= tol:
        return Convergent(float(v[-1]))
    first, last = abs(v[0]), abs(v[-1])
    if last > 0 and last >= divergence_factor * first:
        return Divergent(float(branch.t_values[-1] * last))
    raise Ambiguous(
        f"branch {branch.mode}{'+' if branch.sign > 0 else '-'} drifts by {branch.drift:.3e} "
        f"but only grows by a factor {last / first if first else float('inf'):.3g}"
    )


@dataclass
class TheoremReport:
    flow: object
    grid: CollapseGrid
    mode_cutoff: int
    n_basic_branches: int
    n_divergent_branches: int
    max_basic_drift: float
    min_divergent_final_magnitude: float
    divergence_threshold: float
    max_rate_error: float
    classification_mismatches: list
    limits_match: bool
    drift_tol: float

    @property
    def part1(self):
        return (
            self.max_basic_drift <= self.drift_tol
            and not self.classification_mismatches
            and self.limits_match
        )

    @property
    def part2(self):
        return self.n_divergent_branches == 0 or (
            self.min_divergent_final_magnitude >= self.divergence_threshold
        )

    def as_dict(self):
        return {
            "flow": str(self.flow),
            "mode_cutoff": self.mode_cutoff,
            "t_values": list(self.grid.t_values),
            "n_basic_branches": self.n_basic_branches,
            "n_divergent_branches": self.n_divergent_branches,
            "max_basic_drift": self.max_basic_drift,
            "min_divergent_final_magnitude": self.min_divergent_final_magnitude,
            "divergence_threshold": self.divergence_threshold,
            "max_rate_error": self.max_rate_error,
            "classification_mismatches": [list(m) for m in self.classification_mismatches],
            "limits_match": self.limits_match,
            "part1": self.part1,
            "part2": self.part2,
        }


def expected_basic_limits(flow, mode_cutoff):
    """Sorted basic-operator eigenvalues for basic modes inside the cutoff box."""
    if not flow.is_rational:
        return [0.0, 0.0]
    spec = basic_spectrum(flow, mode_cutoff)
    vals = []
    for mode, pair in spec.entries:
        if max(abs(x) for x in mode) <= mode_cutoff:
            vals.extend(pair)
    return sorted(vals)


def verify_theorem(flow, mode_cutoff, grid=DEFAULT_GRID, drift_tol=1e-13, divergence_factor=100.0,
                   limit_tol=1e-10):
    """Check the collapse dichotomy on all branches up to the cutoff.

    Part (1): basic branches are constant and their limits are exactly the
    basic spectrum.  Part (2): every other branch ends above
    ``divergence_factor * max |initial value|``.
    """
    if not isinstance(grid, CollapseGrid):
        grid = CollapseGrid(tuple(grid))
    branches = sweep(flow, mode_cutoff, grid)
    mismatches = []
    limits = []
    basic_drift = 0.0
    n_basic = n_div = 0
    final_min = np.inf
    rate_err = 0.0
    for br in branches:
        br.classification = classify(br, divergence_factor=divergence_factor)
        basic = is_basic_mode(flow, br.mode)
        convergent = isinstance(br.classification, Convergent)
        if convergent != basic and br.mode not in mismatches:
            mismatches.append(br.mode)
        if convergent:
            limits.append(br.classification.limit)
        else:
            n_div += 1
            final_min = min(final_min, abs(br.values[-1]))
            s = abs(flow_projection(flow, br.mode))
            rate_err = max(rate_err, abs(br.classification.rate - s) / s)
        if basic:
            n_basic += 1
            basic_drift = max(basic_drift, br.drift)
    expected = expected_basic_limits(flow, mode_cutoff)
    limits.sort()
    limits_match = len(limits) == len(expected) and all(
        abs(a - b) <= limit_tol for a, b in zip(limits, expected)
    )
    threshold = divergence_factor * max(abs(br.values[0]) for br in branches)
    return TheoremReport(
        flow=flow,
        grid=grid,
        mode_cutoff=mode_cutoff,
        n_basic_branches=n_basic,
        n_divergent_branches=n_div,
        max_basic_drift=basic_drift,
        min_divergent_final_magnitude=float(final_min),
        divergence_threshold=float(threshold),
        max_rate_error=float(rate_err),
        classification_mismatches=mismatches,
        limits_match=limits_match,
        drift_tol=drift_tol,
    )
