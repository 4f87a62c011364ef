"""
Tests for the dense matrix-function kernels.
"""
import cmath
import math

import numpy as np
import pytest

from bandnorm.core.errors import BranchCutError, ConditioningError, ShapeError
from bandnorm.services import matfun


def admissible_matrix(rng, n):
    """Non-normal complex matrix whose spectrum keeps distance >= 0.1 from the closed negative real axis."""
    eigs = []
    while len(eigs) < n:
        z = complex(*rng.uniform(-3.0, 3.0, 2))
        if abs(z) >= 0.2 and matfun.axis_distance(z) >= 0.1:
            eigs.append(z)
    T = np.diag(eigs) + 0.3 * np.triu(rng.standard_normal((n, n)), 1)
    Q, _ = np.linalg.qr(rng.standard_normal((n, n)))
    return Q @ T @ Q.T


class TestExpm:
    def test_zero(self):
        np.testing.assert_allclose(matfun.expm(np.zeros((2, 2))), np.eye(2), atol=1e-15)

    def test_diagonal(self):
        np.testing.assert_allclose(matfun.expm(np.diag([1.0, 2.0])), np.diag([math.e, math.e ** 2]), rtol=1e-13)

    def test_nilpotent(self):
        np.testing.assert_allclose(matfun.expm([[0.0, 1.0], [0.0, 0.0]]), [[1.0, 1.0], [0.0, 1.0]], atol=1e-15)

    def test_rejects_non_square(self):
        with pytest.raises(ShapeError):
            matfun.expm(np.zeros((2, 3)))


class TestLogm:
    def test_identity(self):
        np.testing.assert_allclose(matfun.logm_principal(np.eye(3)), np.zeros((3, 3)), atol=1e-15)

    def test_diagonal(self):
        L = matfun.logm_principal(np.diag([2.0, 0.5]))
        np.testing.assert_allclose(L, np.diag([math.log(2.0), -math.log(2.0)]), atol=1e-14)

    def test_rotation(self):
        L = matfun.logm_principal([[0.0, -1.0], [1.0, 0.0]])
        np.testing.assert_allclose(L, [[0.0, -math.pi / 2], [math.pi / 2, 0.0]], atol=1e-13)

    def test_round_trip(self, rng):
        for _ in range(100):
            M = admissible_matrix(rng, int(rng.integers(1, 9)))
            err = np.linalg.norm(matfun.expm(matfun.logm_principal(M)) - M)
            assert err <= 1e-10 * np.linalg.norm(M)

    def test_strip_on_random_inputs(self, rng):
        for _ in range(50):
            M = admissible_matrix(rng, int(rng.integers(1, 9)))
            eigs = np.linalg.eigvals(matfun.logm_principal(M))
            assert np.all(np.abs(eigs.imag) < math.pi)

    @pytest.mark.parametrize("phi", [0.5, 2.0, 3.0, 3.1])
    def test_rotation_strip(self, phi):
        R = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
        eigs = np.linalg.eigvals(matfun.logm_principal(2.0 * R))
        np.testing.assert_allclose(sorted(eigs.imag), [-phi, phi], atol=1e-12)
        np.testing.assert_allclose(eigs.real, [math.log(2.0)] * 2, atol=1e-12)

    def test_principal_strip(self):
        phi = 3.0
        R = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
        eigs = np.linalg.eigvals(matfun.logm_principal(R))
        assert np.all(np.abs(eigs.imag) < math.pi)
        np.testing.assert_allclose(sorted(eigs.imag), [-phi, phi], atol=1e-12)

    @pytest.mark.parametrize("M", [[[-1.0]], [[0.0]], [[-2.0, 0.0], [0.0, 1.0]]])
    def test_branch_cut_rejected(self, M):
        with pytest.raises(BranchCutError) as exc:
            matfun.logm_principal(M)
        assert exc.value.distance <= 1e-12

    def test_tolerance_override(self):
        M = [[complex(-1.0, 1e-6)]]
        matfun.logm_principal(M)
        with pytest.raises(BranchCutError):
            matfun.logm_principal(M, tol=1e-5)


class TestPsi1:
    def test_zero(self):
        np.testing.assert_allclose(matfun.psi1(np.zeros((2, 2))), np.eye(2), atol=1e-15)

    def test_scalar(self):
        np.testing.assert_allclose(matfun.psi1([[1.0]]), [[math.e - 1.0]], rtol=1e-13)

    def test_nilpotent(self):
        np.testing.assert_allclose(matfun.psi1([[0.0, 1.0], [0.0, 0.0]]), [[1.0, 0.5], [0.0, 1.0]], atol=1e-15)

    def test_defining_identity(self, rng):
        for _ in range(100):
            M = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
            lhs = matfun.psi1(M) @ M
            np.testing.assert_allclose(lhs, matfun.expm(M) - np.eye(5), atol=1e-10 * max(1.0, np.abs(lhs).max()))

    def test_invertible_near_zero_spectrum(self):
        psi = matfun.psi1(1e-14 * np.eye(2))
        np.testing.assert_allclose(psi, np.eye(2), atol=1e-13)


class TestSpectral:
    def test_eigenvalues(self):
        assert sorted(matfun.eigenvalues(np.diag([1.0, 2.0])), key=abs) == [1, 2]
        eigs = matfun.eigenvalues([[0.0, -1.0], [1.0, 0.0]])
        np.testing.assert_allclose(sorted(e.imag for e in eigs), [-1.0, 1.0], atol=1e-15)
        assert len(matfun.eigenvalues(np.eye(3))) == 3

    def test_apply_exp(self):
        np.testing.assert_allclose(matfun.spectral_apply(cmath.exp, np.diag([0.0, 1.0])), np.diag([1.0, math.e]), atol=1e-14)

    def test_apply_identity(self, rng):
        S = rng.standard_normal((4, 4))
        M = S + S.T
        np.testing.assert_allclose(matfun.spectral_apply(lambda z: z, M), M, atol=1e-12)

    def test_apply_log(self):
        np.testing.assert_allclose(matfun.spectral_apply(cmath.log, [[2.0]]), [[math.log(2.0)]], rtol=1e-15)

    def test_agrees_with_kernels(self, rng):
        for _ in range(10):
            Q, _ = np.linalg.qr(rng.standard_normal((4, 4)))
            M = Q @ np.diag(rng.uniform(0.5, 2.0, 4)) @ Q.T
            np.testing.assert_allclose(matfun.spectral_apply(cmath.exp, M), matfun.expm(M), rtol=1e-8, atol=1e-12)
            np.testing.assert_allclose(matfun.spectral_apply(cmath.log, M), matfun.logm_principal(M), rtol=1e-8, atol=1e-12)

    def test_defective_input_rejected(self):
        with pytest.raises(ConditioningError):
            matfun.spectral_apply(cmath.exp, [[1.0, 1.0], [0.0, 1.0]])


def test_axis_distance():
    assert matfun.axis_distance(complex(-3.0, 0.5)) == 0.5
    assert matfun.axis_distance(complex(3.0, 4.0)) == 5.0
    assert matfun.axis_distance(0j) == 0.0
