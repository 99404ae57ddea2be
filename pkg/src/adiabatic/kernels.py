"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Both Jacobi variants diagonalize a complex Hermitian matrix by unitary
2x2 rotations.  The numba kernel sweeps pivots cyclically row by row; the
numpy kernel applies n/2 disjoint rotations at once in round-robin order,
permuting the working copy so every pivot pair is adjacent and each round is
a handful of vectorized updates on reshaped views.  The rotation for
pivot (p, q) is

    U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]],  a_pq = r e^{i phi}

which first removes the phase of a_pq and then applies the real symmetric
Jacobi rotation with t = sgn(theta) / (|theta| + sqrt(theta^2 + 1)),
theta = (a_qq - a_pp) / (2 r).
"""
import numpy as np

from . import _backend
from ._backend import njit
from .errors import ConvergenceFailure

DEFAULT_TOL = 1e-15
DEFAULT_MAX_SWEEPS = 60


@njit(cache=True)
def _jacobi_cyclic_nb(a, v, want_vectors, tol, max_sweeps):
    n = a.shape[0]
    fro2 = 0.0
    for i in range(n):
        for j in range(n):
            fro2 += a[i, j].real ** 2 + a[i, j].imag ** 2
    thresh2 = (tol * tol) * fro2
    for sweep in range(max_sweeps + 1):
        off2 = 0.0
        for p in range(n - 1):
            for q in range(p + 1, n):
                off2 += 2.0 * (a[p, q].real ** 2 + a[p, q].imag ** 2)
        if off2 <= thresh2:
            return sweep
        if sweep == max_sweeps:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                theta = (aqq - app) / (2.0 * r)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ph = apq / r
                cph = ph.conjugate()
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = akp * c - akq * (s * cph)
                    a[k, q] = akp * s + akq * (c * cph)
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = apk * c - aqk * (s * ph)
                    a[q, k] = apk * s + aqk * (c * ph)
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = app - t * r
                a[q, q] = aqq + t * r
                if want_vectors:
                    for k in range(n):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = vkp * c - vkq * (s * cph)
                        v[k, q] = vkp * s + vkq * (c * cph)
    return -1


def _round_robin_layouts(m):
    """Index layouts for the n-1 rounds of a round-robin tournament on m players.

    In each layout the pivot pairs sit at positions (2i, 2i+1), so a round of
    disjoint rotations acts on contiguous reshaped views.
    """
    players = list(range(m))
    layouts = []
    for _ in range(m - 1):
        lay = np.empty(m, dtype=np.intp)
        for i in range(m // 2):
            lay[2 * i] = players[i]
            lay[2 * i + 1] = players[m - 1 - i]
        layouts.append(lay)
        players = [players[0], players[-1]] + players[1:-1]
    return layouts


def _jacobi_parallel_np(a, v, want_vectors, tol, max_sweeps):
    n = a.shape[0]
    m = n + (n % 2)
    h = m // 2
    w = np.zeros((m, m), dtype=np.complex128)
    w[:n, :n] = a
    vec = np.eye(m, dtype=np.complex128) if want_vectors else None
    thresh2 = (tol * tol) * float(np.sum(np.abs(w) ** 2))
    layouts = _round_robin_layouts(m)
    even = np.arange(0, m, 2)
    odd = even + 1
    current = np.arange(m)
    inverse = np.empty(m, dtype=np.intp)
    offdiag = ~np.eye(m, dtype=bool)
    converged = -1
    for sweep in range(max_sweeps + 1):
        off2 = float(np.sum(np.abs(w[offdiag]) ** 2))
        if off2 <= thresh2:
            converged = sweep
            break
        if sweep == max_sweeps:
            break
        for lay in layouts:
            inverse[current] = np.arange(m)
            sigma = inverse[lay]
            w = w[np.ix_(sigma, sigma)]
            if want_vectors:
                vec = vec[:, sigma]
            current = lay
            apq = w[even, odd]
            r = np.abs(apq)
            d = w.diagonal().real.copy()
            app, aqq = d[0::2], d[1::2]
            live = r > 1e-300
            rs = np.where(live, r, 1.0)
            theta = (aqq - app) / (2.0 * rs)
            big = np.abs(theta) > 1e150
            th = np.where(big, 1.0, theta)
            t = np.where(th >= 0.0, 1.0, -1.0) / (np.abs(th) + np.sqrt(th * th + 1.0))
            t = np.where(big, 0.5 / np.where(big, theta, 1.0), t)
            t = np.where(live, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            ph = np.where(live, apq / rs, 1.0)
            cph = ph.conj()
            cols = w.reshape(m, h, 2)
            left = cols[:, :, 0].copy()
            right = cols[:, :, 1].copy()
            cols[:, :, 0] = left * c - right * (s * cph)
            cols[:, :, 1] = left * s + right * (c * cph)
            rows = w.reshape(h, 2, m)
            top = rows[:, 0, :].copy()
            bot = rows[:, 1, :].copy()
            rows[:, 0, :] = top * c[:, None] - bot * (s * ph)[:, None]
            rows[:, 1, :] = top * s[:, None] + bot * (c * ph)[:, None]
            w[even, odd] = np.where(live, 0.0, w[even, odd])
            w[odd, even] = np.where(live, 0.0, w[odd, even])
            w[even, even] = np.where(live, app - t * r, w[even, even].real)
            w[odd, odd] = np.where(live, aqq + t * r, w[odd, odd].real)
            if want_vectors:
                vcols = vec.reshape(m, h, 2)
                left = vcols[:, :, 0].copy()
                right = vcols[:, :, 1].copy()
                vcols[:, :, 0] = left * c - right * (s * cph)
                vcols[:, :, 1] = left * s + right * (c * cph)
    inverse[current] = np.arange(m)
    w = w[np.ix_(inverse, inverse)]
    a[:, :] = w[:n, :n]
    if want_vectors:
        v[:, :] = vec[:, inverse][:n, :n]
    return converged


def jacobi_eigh(a, want_vectors=False, tol=DEFAULT_TOL, max_sweeps=DEFAULT_MAX_SWEEPS, backend=None):
    """Eigenvalues (ascending) and optionally eigenvectors of a Hermitian matrix.

    ``a`` is not modified.  Raises ConvergenceFailure when the off-diagonal
    Frobenius mass has not dropped below ``tol * ||a||_F`` after
    ``max_sweeps`` sweeps.
    """
    backend = backend or _backend.BACKEND
    work = np.array(a, dtype=np.complex128, order="C", copy=True)
    n = work.shape[0]
    v = np.eye(n, dtype=np.complex128) if want_vectors else np.zeros((1, 1), dtype=np.complex128)
    if n == 0:
        return (np.zeros(0), v) if want_vectors else np.zeros(0)
    if backend == "numba":
        sweeps = _jacobi_cyclic_nb(work, v, want_vectors, tol, max_sweeps)
    elif backend == "numpy":
        sweeps = _jacobi_parallel_np(work, v, want_vectors, tol, max_sweeps)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if sweeps < 0:
        raise ConvergenceFailure(f"Jacobi did not converge in {max_sweeps} sweeps (n={n})")
    w = work.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    if want_vectors:
        return w[order], v[:, order]
    return w[order]


@njit(cache=True)
def _covered_nb(mus, lo, hi, tol):
    out = np.zeros(mus.shape[0], dtype=np.bool_)
    for i in range(mus.shape[0]):
        mu = mus[i]
        if mu == 0.0:
            out[i] = True
            continue
        for j in range(lo.shape[0]):
            if lo[j] - tol <= mu and mu <= hi[j] + tol:
                out[i] = True
                break
    return out


def _covered_np(mus, lo, hi, tol):
    order = np.argsort(lo, kind="stable")
    lo_s = lo[order]
    reach = np.maximum.accumulate(hi[order])
    idx = np.searchsorted(lo_s - tol, mus, side="right") - 1
    ok = idx >= 0
    out = np.zeros(mus.shape[0], dtype=bool)
    out[ok] = reach[idx[ok]] + tol >= mus[ok]
    out[mus == 0.0] = True
    return out


def interval_cover(mus, lo, hi, tol=1e-12, backend=None):
    """Mask of points lying in the closed union of [lo_j, hi_j] (0 always counts)."""
    backend = backend or _backend.BACKEND
    mus = np.ascontiguousarray(mus, dtype=np.float64)
    lo = np.ascontiguousarray(lo, dtype=np.float64)
    hi = np.ascontiguousarray(hi, dtype=np.float64)
    if backend == "numba":
        return _covered_nb(mus, lo, hi, tol)
    if backend == "numpy":
        return _covered_np(mus, lo, hi, tol)
    raise ValueError(f"unknown backend {backend!r}")
