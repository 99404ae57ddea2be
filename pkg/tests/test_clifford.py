import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from adiabatic.clifford import (
    as_complex_matrix, clifford_t2, clifford_t3, eig_hermitian_2x2, eig_hermitian_dense,
    frame_t2, frame_t3, hermitian_defect, is_hermitian, operator_norm,
)
from adiabatic.errors import NonFiniteMatrix, NotHermitian
from adiabatic.perturb import random_hermitian

I2 = np.eye(2)
finite = st.floats(-1e3, 1e3, allow_nan=False)


class TestCliffordT2:
    def test_generators(self):
        f = frame_t2()
        np.testing.assert_array_equal(f.gamma_x, [[0, -1], [1, 0]])
        np.testing.assert_array_equal(f.gamma_y, [[0, 1j], [1j, 0]])

    def test_zero(self):
        np.testing.assert_array_equal(clifford_t2((0, 0)), np.zeros((2, 2)))

    def test_unit_vector_squares_to_minus_one(self):
        m = clifford_t2((0.6, 0.8))
        assert np.max(np.abs(m @ m + I2)) <= 1e-14

    @pytest.mark.parametrize("frame", [frame_t2(), frame_t3()])
    def test_clifford_relation(self, frame):
        g = frame.generators
        for i, u in enumerate(g):
            assert np.array_equal(u.conj().T, -u)
            for j, v in enumerate(g):
                np.testing.assert_array_equal(u @ v + v @ u, -2.0 * (i == j) * I2)

    @given(finite, finite)
    def test_square_is_minus_norm(self, a, b):
        m = clifford_t2((a, b))
        np.testing.assert_allclose(m @ m, -(a * a + b * b) * I2, atol=1e-9 * (1 + a * a + b * b))


class TestCliffordT3:
    def test_third_generator(self):
        np.testing.assert_array_equal(clifford_t3((0, 0, 1)), [[1j, 0], [0, -1j]])

    def test_zero(self):
        assert not np.any(clifford_t3((0, 0, 0)))

    def test_unit_square(self):
        m = clifford_t3((3 / 7, 6 / 7, 2 / 7))
        assert np.max(np.abs(m @ m + I2)) <= 1e-14

    @given(finite, finite, finite)
    def test_linear(self, a, b, c):
        f = frame_t3()
        np.testing.assert_allclose(clifford_t3((a, b, c)), a * f.gamma_x + b * f.gamma_y + c * f.gamma_z)


class TestEig2x2:
    @pytest.mark.parametrize("m, expected", [
        ([[0, -1j], [1j, 0]], (-1.0, 1.0)),
        ([[0, 0], [0, 0]], (0.0, 0.0)),
        ([[2, 1 + 1j], [1 - 1j, 2]], (2 - np.sqrt(2), 2 + np.sqrt(2))),
        ([[5, 0], [0, -3]], (-3.0, 5.0)),
    ])
    def test_known(self, m, expected):
        lo, hi = eig_hermitian_2x2(np.array(m))
        assert lo <= hi
        np.testing.assert_allclose((lo, hi), expected, atol=1e-15)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            eig_hermitian_2x2(np.array([[0, 1], [0, 0]]))

    def test_rejects_nan(self):
        with pytest.raises(NonFiniteMatrix):
            eig_hermitian_2x2(np.array([[np.nan, 0], [0, 1]]))

    @settings(max_examples=200)
    @given(finite, finite, finite, finite)
    def test_vs_lapack(self, a, d, re, im):
        m = np.array([[a, re + 1j * im], [re - 1j * im, d]])
        ref = np.linalg.eigh(m)[0]
        scale = 1 + np.max(np.abs(m))
        np.testing.assert_allclose(eig_hermitian_2x2(m), ref, atol=1e-13 * scale)


class TestEigDense:
    def test_diagonal(self):
        np.testing.assert_array_equal(eig_hermitian_dense(np.diag([3.0, 1.0, 2.0])), [1, 2, 3])

    @pytest.mark.parametrize("seed", range(5))
    def test_agrees_with_2x2(self, seed):
        m = random_hermitian(2, seed)
        np.testing.assert_allclose(eig_hermitian_dense(m), eig_hermitian_2x2(m), atol=1e-12)

    def test_trace_identity(self):
        m = random_hermitian(8, 11)
        assert abs(np.sum(eig_hermitian_dense(m)) - np.trace(m).real) <= 1e-10

    def test_vectors(self):
        m = random_hermitian(9, 3)
        w, v = eig_hermitian_dense(m, return_vectors=True)
        assert np.max(np.abs(m @ v - v * w)) <= 1e-12
        assert np.max(np.abs(v.conj().T @ v - np.eye(9))) <= 1e-12

    def test_symmetrizes_small_defect(self):
        m = random_hermitian(4, 0)
        m[0, 1] += 1e-12
        np.testing.assert_allclose(eig_hermitian_dense(m), np.linalg.eigh(random_hermitian(4, 0))[0], atol=1e-11)

    def test_rejects_large_defect(self):
        m = random_hermitian(4, 0)
        m[0, 1] += 1e-3
        with pytest.raises(NotHermitian):
            eig_hermitian_dense(m)

    def test_rejects_rectangular(self):
        with pytest.raises(ValueError):
            as_complex_matrix(np.zeros((2, 3)))


class TestOperatorNorm:
    def test_identity(self):
        assert operator_norm(np.eye(5)) == pytest.approx(1.0, abs=1e-14)

    def test_negative_diagonal(self):
        assert operator_norm(np.diag([-3.0, 2.0])) == pytest.approx(3.0, abs=1e-14)

    def test_zero(self):
        assert operator_norm(np.zeros((3, 3))) == 0.0

    @pytest.mark.parametrize("shape", [(5, 5), (4, 7), (7, 3)])
    def test_vs_svd(self, shape):
        rng = np.random.default_rng(1)
        m = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
        ref = np.linalg.svd(m, compute_uv=False)[0]
        assert operator_norm(m) == pytest.approx(ref, rel=1e-12)
        assert operator_norm(m) <= np.linalg.norm(m) + 1e-12


class TestHermitianDefect:
    def test_relative(self):
        m = np.array([[0, 1e6], [1e6 + 1, 0]])
        assert hermitian_defect(m) == pytest.approx(1.0 / (1 + 1e6 + 1))

    def test_flag(self):
        assert is_hermitian(random_hermitian(6, 2))
        assert not is_hermitian(np.array([[0, 1], [0, 0]]))
