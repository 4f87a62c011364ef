"""
Tests for the frequency-truncated norms and the multirate error.
"""
import math

import numpy as np
import pytest
from conftest import random_band, random_state_space

from bandnorm.core.errors import InputError, NotSchurError, PoleOnArcError
from bandnorm.models.schemas import Band, StateSpace
from bandnorm.services import sysnorm
from bandnorm.services.oracle import oracle_truncated_norm
from bandnorm.services.pencil import finite_eigenvalues

HALF_PI = math.pi / 2
SCALAR = StateSpace(A=[[0.5]], B=[[1.0]], C=[[1.0]])
ANTISTABLE = StateSpace(A=[[2.0]], B=[[1.0]], C=[[1.0]])


def rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


class TestFullBand:
    def test_scalar(self):
        result = sysnorm.full_band_norm(SCALAR)
        assert result.value == pytest.approx(4.0 / 3.0, rel=1e-14)
        assert result.method == "full_band"
        assert (result.band.theta1, result.band.theta2) == (-math.pi, math.pi)

    def test_zero_output(self):
        sys = StateSpace(A=[[0.5]], B=[[1.0]], C=[[0.0]])
        assert sysnorm.full_band_norm(sys).value == 0.0

    def test_matches_quadrature(self, rng, quad_cfg):
        sys = random_state_space(rng, 5, m=2, p=2)
        value = sysnorm.full_band_norm(sys).value
        assert rel(value, oracle_truncated_norm(sys, Band.full(), quad_cfg)) < 1e-9

    def test_rejects_feedthrough(self):
        with pytest.raises(InputError):
            sysnorm.full_band_norm(StateSpace(A=[[0.5]], B=[[1.0]], C=[[1.0]], D=[[1.0]]))

    def test_rejects_unstable(self):
        with pytest.raises(NotSchurError):
            sysnorm.full_band_norm(ANTISTABLE)


class TestStable:
    def test_empty_band(self):
        assert sysnorm.truncated_norm_stable(SCALAR, Band(theta1=0.3, theta2=0.3)).value == 0.0

    def test_full_band_identity(self, rng):
        assert sysnorm.truncated_norm_stable(SCALAR, Band.full()).value == pytest.approx(4.0 / 3.0, rel=1e-12)
        for _ in range(100):
            n = int(rng.integers(1, 9))
            sys = random_state_space(rng, n, m=int(rng.integers(1, 4)), p=int(rng.integers(1, 4)))
            full = sysnorm.full_band_norm(sys).value
            assert rel(sysnorm.truncated_norm_stable(sys, Band.full()).value, full) < 1e-9

    def test_scalar_half_band(self, quad_cfg):
        band = Band(theta1=-HALF_PI, theta2=HALF_PI)
        value = sysnorm.truncated_norm_stable(SCALAR, band).value
        assert rel(value, oracle_truncated_norm(SCALAR, band, quad_cfg)) < 1e-10

    def test_matches_quadrature(self, rng, quad_cfg):
        for _ in range(100):
            n = int(rng.integers(1, 7))
            sys = random_state_space(rng, n, m=int(rng.integers(1, 4)), p=int(rng.integers(1, 4)))
            t1, t2 = random_band(rng)
            band = Band(theta1=t1, theta2=t2)
            value = sysnorm.truncated_norm_stable(sys, band).value
            assert abs(value - oracle_truncated_norm(sys, band, quad_cfg)) <= 1e-8 * max(1.0, value)

    def test_rejects_unstable(self):
        with pytest.raises(NotSchurError):
            sysnorm.truncated_norm_stable(ANTISTABLE, Band(theta1=-1.0, theta2=1.0))


class TestAugmented:
    def test_scalar_blocks(self):
        aug = sysnorm.build_augmented(StateSpace(A=[[0.3]], B=[[2.0]], C=[[5.0]]))
        np.testing.assert_array_equal(aug.A_h, [[0.3, 0.0], [25.0, 1.0]])
        np.testing.assert_array_equal(aug.E_h, [[1.0, 0.0], [0.0, 0.3]])
        np.testing.assert_array_equal(aug.B_h, [[2.0], [0.0]])
        np.testing.assert_array_equal(aug.C_h, [[0.0, -2.0]])

    def test_output_annihilates_input(self, rng):
        aug = sysnorm.build_augmented(random_state_space(rng, 4, m=2, p=3))
        np.testing.assert_array_equal(aug.C_h @ aug.B_h, np.zeros((2, 2)))

    def test_eigenvalues_and_reciprocals(self):
        A = np.array([[0.5, 0.2], [0.0, -0.4]])
        aug = sysnorm.build_augmented(StateSpace(A=A, B=[[1.0], [1.0]], C=[[1.0, 0.0]]))
        eigs = sorted(z.real for z in finite_eigenvalues(aug.pencil()))
        np.testing.assert_allclose(eigs, [-2.5, -0.4, 0.5, 2.0], rtol=1e-10)


class TestGeneral:
    def test_empty_band(self):
        assert sysnorm.truncated_norm_general(ANTISTABLE, Band(theta1=0.2, theta2=0.2)).value == 0.0

    def test_antistable_scalar(self, quad_cfg):
        band = Band(theta1=-HALF_PI, theta2=HALF_PI)
        result = sysnorm.truncated_norm_general(ANTISTABLE, band)
        assert result.method == "general"
        assert rel(result.value, oracle_truncated_norm(ANTISTABLE, band, quad_cfg)) < 1e-9

    def test_agrees_with_stable_path(self, rng):
        for _ in range(100):
            n = int(rng.integers(1, 7))
            sys = random_state_space(rng, n, m=int(rng.integers(1, 4)), p=int(rng.integers(1, 4)))
            t1, t2 = random_band(rng)
            band = Band(theta1=t1, theta2=t2)
            stable = sysnorm.truncated_norm_stable(sys, band).value
            general = sysnorm.truncated_norm_general(sys, band).value
            assert abs(general - stable) <= 1e-9 * max(1.0, stable)

    def test_mixed_poles_match_quadrature(self, rng, quad_cfg):
        for _ in range(100):
            n = int(rng.integers(1, 6))
            sys = random_state_space(rng, n, m=int(rng.integers(1, 3)), p=int(rng.integers(1, 3)), inside_fraction=0.5)
            t1, t2 = random_band(rng)
            band = Band(theta1=t1, theta2=t2)
            value = sysnorm.truncated_norm_general(sys, band).value
            assert abs(value - oracle_truncated_norm(sys, band, quad_cfg)) <= 1e-8 * max(1.0, value)

    @pytest.mark.parametrize("theta1, theta2", [(0.0, math.pi), (-math.pi, 0.4), (-math.pi, math.pi)])
    def test_pi_edges(self, quad_cfg, theta1, theta2):
        band = Band(theta1=theta1, theta2=theta2)
        result = sysnorm.truncated_norm_general(ANTISTABLE, band)
        assert result.diagnostics
        assert rel(result.value, oracle_truncated_norm(ANTISTABLE, band, quad_cfg)) < 1e-8

    def test_pi_edges_agree_with_stable_path(self, rng):
        sys = random_state_space(rng, 4, m=2, p=2)
        for band in (Band(theta1=-1.0, theta2=math.pi), Band.full()):
            stable = sysnorm.truncated_norm_stable(sys, band).value
            assert rel(sysnorm.truncated_norm_general(sys, band).value, stable) < 1e-9

    def test_pole_on_arc(self):
        sys = StateSpace(A=[[1.0]], B=[[1.0]], C=[[1.0]])
        with pytest.raises(PoleOnArcError):
            sysnorm.truncated_norm_general(sys, Band(theta1=-0.5, theta2=0.5))

    def test_pole_on_negative_frequency_arc(self):
        phi = 0.7
        A = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
        sys = StateSpace(A=A, B=[[1.0], [0.0]], C=[[1.0, 0.0]])
        with pytest.raises(PoleOnArcError):
            sysnorm.truncated_norm_general(sys, Band(theta1=-1.0, theta2=-0.5))


class TestFeedthrough:
    def test_constant_transfer(self):
        d = 1.7
        sys = StateSpace(A=[[0.0]], B=[[0.0]], C=[[0.0]], D=[[d]])
        band = Band(theta1=0.2, theta2=1.0)
        value = sysnorm.truncated_norm_with_feedthrough(sys, band).value
        assert value == pytest.approx(0.8 * d * d / (2 * math.pi), rel=1e-12)

    def test_reduces_to_core_without_feedthrough(self):
        band = Band(theta1=-1.0, theta2=2.0)
        assert sysnorm.truncated_norm_with_feedthrough(SCALAR, band).value == \
            sysnorm.truncated_norm_stable(SCALAR, band).value

    def test_matches_quadrature(self, rng, quad_cfg):
        for inside_fraction in (1.0, 0.5):
            for _ in range(10):
                sys = random_state_space(rng, 4, m=2, p=2, inside_fraction=inside_fraction, feedthrough=True)
                t1, t2 = random_band(rng)
                band = Band(theta1=t1, theta2=t2)
                value = sysnorm.truncated_norm(sys, band).value
                assert abs(value - oracle_truncated_norm(sys, band, quad_cfg)) <= 1e-9 * max(1.0, value)


class TestDispatch:
    def test_auto_picks_stable(self):
        assert sysnorm.truncated_norm(SCALAR, Band(theta1=0.0, theta2=1.0)).method == "stable"

    def test_auto_picks_general(self):
        assert sysnorm.truncated_norm(ANTISTABLE, Band(theta1=0.0, theta2=1.0)).method == "general"

    def test_forced_stable_on_unstable(self):
        with pytest.raises(NotSchurError):
            sysnorm.truncated_norm(ANTISTABLE, Band(theta1=0.0, theta2=1.0), method="stable")

    def test_default_band_is_full_circle(self):
        assert sysnorm.truncated_norm(SCALAR).value == pytest.approx(4.0 / 3.0, rel=1e-12)


class TestProperties:
    def test_additivity(self, rng):
        for inside_fraction in (1.0, 0.5):
            sys = random_state_space(rng, 4, m=2, p=2, inside_fraction=inside_fraction)
            t = sorted(rng.uniform(-3.0, 3.0, 3))
            a = sysnorm.truncated_norm(sys, Band(theta1=t[0], theta2=t[1])).value
            b = sysnorm.truncated_norm(sys, Band(theta1=t[1], theta2=t[2])).value
            whole = sysnorm.truncated_norm(sys, Band(theta1=t[0], theta2=t[2])).value
            assert abs(a + b - whole) <= 1e-10 * max(1.0, whole)

    def test_monotone_in_band(self, rng):
        sys = random_state_space(rng, 5, m=2, p=2)
        values = [sysnorm.truncated_norm(sys, Band(theta1=-w, theta2=w)).value for w in np.linspace(0.0, math.pi, 9)]
        assert all(b >= a - 1e-10 for a, b in zip(values, values[1:]))

    def test_symmetric_band(self, rng):
        sys = random_state_space(rng, 4, m=2, p=3)
        for theta in (0.4, 1.3, 2.9):
            sym = sysnorm.truncated_norm(sys, Band(theta1=-theta, theta2=theta)).value
            half = sysnorm.truncated_norm(sys, Band(theta1=0.0, theta2=theta)).value
            assert abs(sym - 2 * half) <= 1e-10 * max(1.0, sym)

    def test_nonnegative(self, rng):
        for _ in range(20):
            sys = random_state_space(rng, 3, inside_fraction=0.5)
            t1, t2 = random_band(rng)
            assert sysnorm.truncated_norm(sys, Band(theta1=t1, theta2=t2)).value >= 0.0


class TestMultirate:
    def test_no_decimation(self, rng):
        assert sysnorm.multirate_error(random_state_space(rng, 3), 1) == 0.0

    def test_scalar_two_fold(self, quad_cfg):
        expected = 4.0 / 3.0 - oracle_truncated_norm(SCALAR, Band(theta1=-HALF_PI, theta2=HALF_PI), quad_cfg)
        assert sysnorm.multirate_error(SCALAR, 2) == pytest.approx(expected, abs=1e-9)

    def test_nonnegative(self, rng):
        for M in (2, 3, 5, 8):
            sys = random_state_space(rng, 4, m=2, p=2, feedthrough=M % 2 == 0)
            assert sysnorm.multirate_error(sys, M) >= -1e-10

    def test_rejects_bad_factor(self):
        with pytest.raises(InputError):
            sysnorm.multirate_error(SCALAR, 0)

    def test_rejects_unstable(self):
        with pytest.raises(NotSchurError):
            sysnorm.multirate_error(ANTISTABLE, 2)
