import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from freqjump.dynamics import GaussianState, ProtocolConfig, evolve_vacuum, rotation_matrix
from freqjump.errors import DomainError, NonPureStateError
from freqjump.squeezing import (
    SqueezeParams,
    alpha_max,
    extract_squeeze,
    nbar_from_squeeze,
    r_max,
    squeeze_params,
    squeezed_covariance,
)


def single_jump_covariance(w0, w1, t):
    return evolve_vacuum(ProtocolConfig(w0, w1 - w0, 1.0, t)).covariance


class TestSqueezeParams:
    def test_quarter_period(self):
        sp = squeeze_params(1.0, 2.0, math.pi / 4)
        assert sp.r == pytest.approx(math.atanh(3 / 5), abs=1e-14)
        assert sp.r == pytest.approx(math.log(2), abs=1e-14)
        assert sp.phi == pytest.approx(0.0, abs=1e-14)

    def test_no_detuning(self):
        for t in (0.0, 0.3, 1.7, 12.0):
            assert squeeze_params(1.0, 1.0, t).r == 0.0

    def test_revival(self):
        assert squeeze_params(1.0, 2.0, math.pi / 2).r < 1e-15

    def test_zero_time(self):
        assert squeeze_params(1.0, 3.0, 0.0) == SqueezeParams(0.0, 0.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            squeeze_params(0.0, 1.0, 1.0)
        with pytest.raises(DomainError):
            squeeze_params(1.0, 1.0, -1.0)
        with pytest.raises(DomainError):
            SqueezeParams(-0.1)

    def test_phi_principal_value(self):
        # delta < 0 at the squeezing maximum sits on the branch cut
        sp = squeeze_params(2.0, 1.0, math.pi / 2)
        assert sp.phi == pytest.approx(math.pi)
        assert -math.pi < sp.phi <= math.pi

    @settings(max_examples=300, deadline=None)
    @given(st.floats(0.1, 5), st.floats(0.1, 5), st.floats(1e-3, 10))
    def test_matches_exact_propagator(self, w0, w1, t):
        sp = squeeze_params(w0, w1, t)
        assert sp.r >= 0 and math.tanh(sp.r) < 1
        np.testing.assert_allclose(sp.covariance(), single_jump_covariance(w0, w1, t), atol=1e-9 * math.cosh(2 * sp.r))

    @settings(max_examples=200, deadline=None)
    @given(st.floats(0.1, 5), st.floats(0.1, 5), st.floats(0, 10), st.floats(0.1, 10))
    def test_scale_invariance(self, w0, w1, t, k):
        a, b = squeeze_params(w0, w1, t), squeeze_params(k * w0, k * w1, t / k)
        assert b.r == pytest.approx(a.r, abs=1e-12)
        if a.r > 1e-6:
            assert math.cos(b.phi - a.phi) == pytest.approx(1.0, abs=1e-10)

    @pytest.mark.parametrize("w0,w1", [(1.0, 2.0), (2.0, 0.7), (0.5, 3.0)])
    def test_period_and_maximum(self, w0, w1):
        period = math.pi / w1
        for t in np.linspace(0, 2, 17):
            assert squeeze_params(w0, w1, t + period).r == pytest.approx(squeeze_params(w0, w1, t).r, abs=1e-12)
        for k in range(3):
            t_peak = (0.5 + k) * period
            assert squeeze_params(w0, w1, t_peak).r == pytest.approx(r_max(w0, w1 - w0), abs=1e-12)


class TestMarkers:
    def test_r_max(self):
        assert r_max(1.0, 1.0) == pytest.approx(math.log(2), abs=1e-15)
        assert r_max(1.0, 0.0) == 0.0
        assert r_max(2.0, 2.0) == pytest.approx(math.log(2), abs=1e-15)

    @pytest.mark.parametrize("w0,d", [(2.0, 2.0), (1.0, 0.3), (0.5, 4.0), (3.0, -1.0)])
    def test_r_max_is_numerical_maximum(self, w0, d):
        w1 = w0 + d
        res = minimize_scalar(lambda t: -squeeze_params(w0, w1, t).r, bounds=(0, math.pi / w1), method="bounded",
                              options={"xatol": 1e-12})
        assert -res.fun == pytest.approx(r_max(w0, d), abs=1e-9)

    def test_r_max_domain(self):
        with pytest.raises(DomainError):
            r_max(1.0, -1.0)

    def test_alpha_max(self):
        assert alpha_max(1.0, 1.0, 1.0).value == pytest.approx(math.pi / 4)
        assert not alpha_max(1.0, 1.0, 1.0).clamped
        assert alpha_max(1.0, 1.0, 10.0).value == pytest.approx(math.pi / 40)
        clamped = alpha_max(0.1, 0.1, 1.0)
        assert clamped.value == 1.0 and clamped.clamped
        assert clamped.unclamped == pytest.approx(math.pi / 0.4)


class TestResources:
    def test_nbar(self):
        assert nbar_from_squeeze(SqueezeParams(0.0)).nbar == 0.0
        acct = nbar_from_squeeze(SqueezeParams(math.log(2)))
        assert acct.nbar == pytest.approx(9 / 16, abs=1e-15)
        assert acct.var_n == pytest.approx(2 * (9 / 16) * (25 / 16))

    def test_nbar_from_jump(self):
        # omega1 t = pi/2 with omega0 = 1, delta = 1
        sp = squeeze_params(1.0, 2.0, math.pi / 4)
        assert nbar_from_squeeze(sp).nbar == pytest.approx(9 / 16, abs=1e-14)

    @given(st.floats(0, 5), st.floats(1e-3, 1))
    def test_monotone(self, r, dr):
        assert nbar_from_squeeze(SqueezeParams(r + dr)).nbar > nbar_from_squeeze(SqueezeParams(r)).nbar


class TestExtract:
    def test_vacuum(self):
        assert extract_squeeze(GaussianState(0.5 * np.eye(2))) == SqueezeParams(0.0, 0.0)

    def test_diagonal(self):
        sp = extract_squeeze(GaussianState(np.diag([1 / 8, 2.0])))
        assert sp.r == pytest.approx(math.log(2), abs=1e-15)
        assert sp.phi == pytest.approx(0.0)

    def test_non_pure(self):
        with pytest.raises(NonPureStateError):
            extract_squeeze(GaussianState(np.eye(2)))

    @settings(max_examples=300, deadline=None)
    @given(st.floats(0, 4), st.floats(-math.pi, math.pi))
    def test_round_trip(self, r, theta):
        rot = rotation_matrix(1.0, theta)
        cov = rot @ np.diag([math.exp(-2 * r), math.exp(2 * r)]) @ rot.T / 2
        sp = extract_squeeze(cov)
        np.testing.assert_allclose(squeezed_covariance(sp.r, sp.phi), cov, atol=1e-10 * math.cosh(2 * r))
        assert -math.pi < sp.phi <= math.pi

    @settings(max_examples=100, deadline=None)
    @given(st.floats(0, 3), st.floats(-math.pi, math.pi))
    def test_eigenvalues(self, r, phi):
        ev = np.linalg.eigvalsh(squeezed_covariance(r, phi))
        np.testing.assert_allclose(ev, [math.exp(-2 * r) / 2, math.exp(2 * r) / 2], rtol=1e-12, atol=1e-14 * math.exp(2 * r))
