"""Machine checks of the reproduced results, aggregated by ``adiabatic verify-all``.

Each check returns a plain dict ``{"id", "name", "passed", "details"}`` whose
contents depend only on the inputs, so repeated runs serialize identically.
"""
from math import pi, sqrt

import numpy as np

from . import carriere
from .clifford import eig_hermitian_2x2, hermitian_defect, operator_norm
from .errors import Ambiguous
from .collapse import DEFAULT_GRID, Convergent, Divergent, classify, sweep
from .grid_fd import GridSpec, assemble, convergence_study, kernel_dimension, spectrum_match
from .perturb import lemma_suite, random_hermitian, spectral_distance
from .torus import (
    FlowSpec, anticommutator_defect, collapse_square_defect, df_mode_spectrum, enumerate_modes,
    flow_projection, is_basic_mode, mode_matrix, mode_q, tangential_matrix, transversal_matrix,
)


def _result(cid, name, passed, **details):
    return {"id": cid, "name": name, "passed": bool(passed), "details": details}


def _rounds_to(value, printed, decimals):
    return abs(value - printed) <= 0.5 * 10.0 ** (-decimals)


def check_carriere_constants():
    c = carriere.CONSTANTS
    coeffs = {
        "2piK/lambda": (2 * pi * c.K / c.lam, 1.2617),
        "2piG/lambda": (2 * pi * c.G / c.lam, 2.0415),
        "2piK": (2 * pi * c.K, 3.3033),
        "2piG": (2 * pi * c.G, 5.3448),
    }
    ok = (
        _rounds_to(c.lam, 2.61803, 5)
        and _rounds_to(c.G, 0.85065, 5)
        and _rounds_to(c.K, 0.52573, 5)
        and all(_rounds_to(v, p, 4) for v, p in coeffs.values())
    )
    return _result(1, "carriere constants", ok, lam=c.lam, G=c.G, K=c.K,
                   coefficients={k: v for k, (v, _) in coeffs.items()})


def check_carriere_density(bound=200):
    frac = carriere.coverage_report((-50.0, 50.0), 0.01, bound)
    return _result(2, "carriere density", frac == 1.0, coverage=frac, bound=bound)


def _dichotomy(flow, cutoff, grid=DEFAULT_GRID):
    """Basic branches flat at sqrt|k|^2, other branches with t|lambda| -> |xi.k|."""
    drift = 0.0
    value_err = 0.0
    rate_err = 0.0
    mismatches = 0
    for br in sweep(flow, cutoff, grid):
        cls = classify(br)
        basic = is_basic_mode(flow, br.mode)
        if basic:
            drift = max(drift, br.drift)
            target = sqrt(sum(x * x for x in br.mode))
            value_err = max(value_err, float(np.max(np.abs(br.values - br.sign * target))))
            mismatches += not isinstance(cls, Convergent)
        else:
            s = abs(flow_projection(flow, br.mode))
            rate_err = max(rate_err, abs(grid.t_values[-1] * abs(br.values[-1]) - s) / s)
            mismatches += not isinstance(cls, Divergent)
    return drift, value_err, rate_err, mismatches


def check_t2_dichotomy():
    flow = FlowSpec.rational(3, 4)
    drift, value_err, rate_err, bad = _dichotomy(flow, 8)
    ok = drift <= 1e-13 and value_err <= 1e-13 and rate_err <= 1e-6 and bad == 0
    return _result(3, "T2 collapse dichotomy", ok, flow=str(flow), max_basic_drift=drift,
                   max_basic_value_error=value_err, max_rate_error=rate_err, misclassified=bad)


def check_t3_dichotomy():
    flow = FlowSpec.rational(3, 6, 2)
    drift, value_err, rate_err, bad = _dichotomy(flow, 5)
    sqrt5 = mode_q(flow, (2, -1, 0), 1e-6)
    ok = drift <= 1e-13 and value_err <= 1e-13 and rate_err <= 1e-6 and bad == 0 and sqrt5 == 5.0
    return _result(4, "T3 collapse dichotomy", ok, flow=str(flow), max_basic_drift=drift,
                   max_basic_value_error=value_err, max_rate_error=rate_err, misclassified=bad)


def _hits_every_window(points, lo, hi, width):
    pts = np.unique(points[(points >= lo) & (points <= hi)])
    if pts.size == 0:
        return False, hi - lo
    gaps = np.concatenate(([pts[0] - lo], np.diff(pts), [hi - pts[-1]]))
    return bool(gaps.max() <= width), float(gaps.max())


def check_irrational_t2(flow=None):
    flow = flow or FlowSpec.numeric(1 / sqrt(2), 1 / sqrt(2))
    convergent = []
    for br in sweep(flow, 8):
        try:
            cls = classify(br)
        except Ambiguous:
            continue
        if isinstance(cls, Convergent) and br.mode not in convergent:
            convergent.append(br.mode)
    zero_only = convergent == [(0, 0)]
    rng = np.arange(-200, 201)
    a, b = flow.direction
    df = (a * rng[:, None] + b * rng[None, :]).ravel()
    dense, widest = _hits_every_window(df, -1.0, 1.0, 0.05)
    return _result(5, "irrational T2 flow", zero_only and dense, flow=str(flow),
                   convergent_modes=[list(m) for m in convergent[:10]],
                   n_convergent_modes=len(convergent), df_widest_gap=widest)


def _random_triples(count, seed):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        dim = int(rng.integers(2, 4))
        if rng.random() < 0.5:
            p = rng.integers(-25, 26, size=dim)
            while not p.any():
                p = rng.integers(-25, 26, size=dim)
            flow = FlowSpec.rational(*p)
        else:
            v = rng.standard_normal(dim)
            v /= np.linalg.norm(v)
            flow = FlowSpec.numeric(*v)
        mode = tuple(int(x) for x in rng.integers(-20, 21, size=dim))
        t = float(10.0 ** rng.uniform(-6, 0))
        out.append((flow, mode, t))
    return out


def check_mode_oracle(count=500, seed=2024):
    eig_err = herm = sym = 0.0
    for flow, mode, t in _random_triples(count, seed):
        mat = mode_matrix(flow, mode, t).matrix
        lo, hi = eig_hermitian_2x2(mat)
        r = sqrt(mode_q(flow, mode, t))
        if r == 0.0:
            err = max(abs(lo), abs(hi))
        else:
            err = max(abs(hi - r), abs(lo + r)) / r
        eig_err = max(eig_err, err)
        herm = max(herm, hermitian_defect(mat))
        sym = max(sym, abs(lo + hi) / (1.0 + abs(hi)))
    ok = eig_err <= 1e-12 and herm <= 1e-12 and sym <= 1e-12
    return _result(6, "mode matrix oracle", ok, triples=count, max_relative_eig_error=eig_err,
                   max_hermitian_defect=herm, max_symmetry_defect=sym)


STRUCTURE_FLOWS = ((3, 4), (1, 1), (5, -12), (3, 6, 2), (1, 2, 2))


def check_structure(cutoff=6, t_values=(1.0, 0.5, 0.1, 0.01)):
    anti = square = 0.0
    kernel_ok = True
    for p in STRUCTURE_FLOWS:
        flow = FlowSpec.rational(*p)
        for mode in enumerate_modes(flow.dimension, cutoff):
            anti = max(anti, anticommutator_defect(flow, mode))
            tr = operator_norm(transversal_matrix(flow, mode))
            tg = operator_norm(tangential_matrix(flow, mode))
            for t in t_values:
                scale = 1.0 + tr * tr + (tg / t) ** 2
                square = max(square, collapse_square_defect(flow, mode, t) / scale)
            in_kernel = df_mode_spectrum(flow, mode) == (0.0, 0.0)
            kernel_ok &= in_kernel == is_basic_mode(flow, mode)
    ok = anti <= 1e-12 and square <= 1e-12 and kernel_ok
    return _result(7, "structure identities", ok, max_anticommutator=anti,
                   max_relative_square_defect=square, kernel_iff_basic=kernel_ok)


def check_perturbation(trials=200, seed=7):
    suite = lemma_suite(trials, range(2, 17), seed)
    tight = 0.0
    for n in range(2, 17):
        A = random_hermitian(n, 1000 + n)
        rep = spectral_distance(A, A + 0.3 * np.eye(n))
        tight = max(tight, abs(rep.epsilon - 0.3), float(np.max(np.abs(rep.pair_distances - 0.3))))
    ok = suite.lemma_holds and suite.nonneg_holds and tight <= 1e-12
    return _result(8, "perturbation lemma", ok, trials=trials, seed=seed,
                   lemma_holds=suite.lemma_holds, worst_lemma_margin=suite.worst_lemma_margin,
                   nonneg_holds=suite.nonneg_holds, worst_nonneg_ratio=suite.worst_nonneg_ratio,
                   shift_tightness=tight)


def check_fd():
    flow = FlowSpec.rational(3, 4)
    match = spectrum_match(GridSpec(16, flow, 0.25))
    kernel = kernel_dimension(GridSpec(16, flow, 1.0))
    study = convergence_study(flow, 1.0, (1, 0), [16, 32, 64, 128])
    herm = assemble(GridSpec(16, flow, 0.1)).hermitian_defect
    ok = match <= 1e-9 and kernel == 8 and study.order >= 1.9 and herm <= 1e-13
    return _result(9, "finite-difference validation", ok, spectrum_defect=match, kernel_dimension=kernel,
                   convergence_order=study.order, hermitian_defect=herm)


CHECKS = (
    check_carriere_constants, check_carriere_density, check_t2_dichotomy, check_t3_dichotomy,
    check_irrational_t2, check_mode_oracle, check_structure, check_perturbation, check_fd,
)


def run_all():
    return [check() for check in CHECKS]
