import numpy as np
import pytest

from adiabatic import kernels
from adiabatic._backend import HAVE_NUMBA, parallel_map, thread_cap
from adiabatic.errors import ConvergenceFailure
from adiabatic.perturb import random_hermitian

BACKENDS = ["numpy"] + (["numba"] if HAVE_NUMBA else [])


@pytest.mark.parametrize("backend", BACKENDS)
class TestJacobi:
    @pytest.mark.parametrize("n", [1, 2, 3, 7, 16, 33])
    def test_vs_lapack(self, backend, n):
        m = random_hermitian(n, 100 + n)
        w = kernels.jacobi_eigh(m, backend=backend)
        np.testing.assert_allclose(w, np.linalg.eigh(m)[0], atol=1e-12 * (1 + np.abs(m).max()))

    @pytest.mark.parametrize("n", [4, 9])
    def test_vectors(self, backend, n):
        m = random_hermitian(n, n)
        w, v = kernels.jacobi_eigh(m, want_vectors=True, backend=backend)
        assert np.max(np.abs(m @ v - v * w)) <= 1e-12
        assert np.max(np.abs(v.conj().T @ v - np.eye(n))) <= 1e-12

    def test_real_symmetric(self, backend):
        rng = np.random.default_rng(0)
        a = rng.standard_normal((10, 10))
        m = a + a.T
        np.testing.assert_allclose(kernels.jacobi_eigh(m, backend=backend), np.linalg.eigh(m)[0], atol=1e-12)

    def test_degenerate(self, backend):
        m = np.kron(np.eye(3), np.array([[0, 1], [1, 0]]))
        np.testing.assert_allclose(kernels.jacobi_eigh(m, backend=backend), [-1, -1, -1, 1, 1, 1], atol=1e-14)

    def test_does_not_modify_input(self, backend):
        m = random_hermitian(6, 0)
        keep = m.copy()
        kernels.jacobi_eigh(m, backend=backend)
        np.testing.assert_array_equal(m, keep)

    def test_sweep_cap(self, backend):
        with pytest.raises(ConvergenceFailure):
            kernels.jacobi_eigh(random_hermitian(12, 0), max_sweeps=1, backend=backend)


@pytest.mark.skipif(not HAVE_NUMBA, reason="numba not installed")
def test_backends_agree_on_eigenvalues():
    m = random_hermitian(40, 5)
    a = kernels.jacobi_eigh(m, backend="numba")
    b = kernels.jacobi_eigh(m, backend="numpy")
    np.testing.assert_allclose(a, b, atol=1e-12)


class TestIntervalCover:
    def brute(self, mus, lo, hi, tol):
        return np.array([(mu == 0.0) or bool(np.any((lo - tol <= mu) & (mu <= hi + tol))) for mu in mus])

    @pytest.mark.parametrize("backend", BACKENDS)
    @pytest.mark.parametrize("seed", range(4))
    def test_vs_brute_force(self, backend, seed):
        rng = np.random.default_rng(seed)
        lo = rng.uniform(-10, 10, 30)
        hi = lo + rng.exponential(0.3, 30)
        mus = np.sort(rng.uniform(-12, 12, 500))
        got = kernels.interval_cover(mus, lo, hi, 1e-12, backend=backend)
        np.testing.assert_array_equal(got, self.brute(mus, lo, hi, 1e-12))

    @pytest.mark.parametrize("backend", BACKENDS)
    def test_endpoints_and_zero(self, backend):
        got = kernels.interval_cover(np.array([-1.0, 0.0, 1.0, 2.0, 2.5]), np.array([1.0]), np.array([2.0]),
                                     backend=backend)
        np.testing.assert_array_equal(got, [False, True, True, True, False])


class TestBackendHelpers:
    def test_thread_cap_default(self, monkeypatch):
        monkeypatch.delenv("ADIABATIC_THREADS", raising=False)
        assert thread_cap() == 1

    @pytest.mark.parametrize("raw", ["0", "-2", "two"])
    def test_thread_cap_invalid(self, monkeypatch, raw):
        monkeypatch.setenv("ADIABATIC_THREADS", raw)
        with pytest.raises(ValueError):
            thread_cap()

    def test_parallel_map_keeps_order(self, monkeypatch):
        monkeypatch.setenv("ADIABATIC_THREADS", "4")
        assert parallel_map(lambda x: x * x, range(20)) == [x * x for x in range(20)]
