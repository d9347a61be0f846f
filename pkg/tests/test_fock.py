import math

import numpy as np
import pytest

from freqjump.dynamics import ProtocolConfig, evolve_vacuum
from freqjump.errors import DomainError, TruncationError
from freqjump.fock import (
    evolve_fock,
    fix_gauge,
    qfi_pure,
    qfi_pure_family,
    required_cutoff,
    squeezed_vacuum_coeffs,
)
from freqjump.squeezing import SqueezeParams, extract_squeeze, squeezed_covariance

CONFIGS = [
    ProtocolConfig(1.0, 1.0, 0.5, 1.0, 1),
    ProtocolConfig(0.5, 2.0, 0.3, 3.0, 2),
    ProtocolConfig(2.0, 0.5, 0.8, 3.0, 3),
    ProtocolConfig(5.0, 1.0, 0.1, 1.0, 1),
    ProtocolConfig(1.3, -0.4, 0.6, 2.2, 2),
]


class TestSqueezedVacuum:
    def test_vacuum(self):
        v = squeezed_vacuum_coeffs(SqueezeParams(0.0), 64)
        assert v.coeffs[0] == 1.0
        assert np.all(v.coeffs[1:] == 0)

    def test_mean_number(self):
        v = squeezed_vacuum_coeffs(SqueezeParams(math.log(2), 0.0))
        assert v.mean_number() == pytest.approx(9 / 16, abs=1e-12)
        assert v.norm == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("r,phi", [(0.3, 0.0), (1.0, 1.2), (2.0, -2.5), (0.7, math.pi)])
    def test_covariance_consistency(self, r, phi):
        v = squeezed_vacuum_coeffs(SqueezeParams(r, phi))
        np.testing.assert_allclose(v.covariance(), squeezed_covariance(r, phi), atol=1e-9 * math.cosh(2 * r))
        assert v.mean_number() == pytest.approx(math.sinh(r) ** 2, rel=1e-9)
        assert v.number_variance() == pytest.approx(2 * math.sinh(r) ** 2 * math.cosh(r) ** 2, rel=1e-8)

    def test_parity(self):
        v = squeezed_vacuum_coeffs(SqueezeParams(1.1, 0.4))
        assert np.all(v.coeffs[1::2] == 0)

    def test_tail_criterion(self):
        need = required_cutoff(1.5, tol=1e-12, minimum=2)
        with pytest.raises(TruncationError) as info:
            squeezed_vacuum_coeffs(SqueezeParams(1.5), 20)
        assert info.value.required_cutoff >= need
        v = squeezed_vacuum_coeffs(SqueezeParams(1.5), info.value.required_cutoff)
        assert np.sum(np.abs(v.coeffs[-4:]) ** 2) < 1e-12

    def test_rejects_odd_cutoff(self):
        with pytest.raises(DomainError):
            squeezed_vacuum_coeffs(SqueezeParams(0.1), 65)


class TestEvolveFock:
    def test_no_detuning(self):
        v = evolve_fock(ProtocolConfig(1.0, 0.0, 0.5, 2.0))
        assert abs(v.coeffs[0]) == pytest.approx(1.0, abs=1e-14)
        assert np.sum(np.abs(v.coeffs[1:]) ** 2) < 1e-28

    def test_quarter_period(self):
        v = evolve_fock(ProtocolConfig(1.0, 1.0, 1.0, math.pi / 4))
        np.testing.assert_allclose(v.covariance(), np.diag([1 / 8, 2]), atol=1e-10)

    @pytest.mark.parametrize("cfg", CONFIGS)
    def test_second_moments_match_gaussian(self, cfg):
        v = evolve_fock(cfg)
        assert v.norm == pytest.approx(1.0, abs=1e-10)
        np.testing.assert_allclose(v.covariance(), evolve_vacuum(cfg).covariance, atol=1e-8)

    @pytest.mark.parametrize("cfg", CONFIGS)
    def test_same_state_as_squeezed_vacuum(self, cfg):
        v = evolve_fock(cfg)
        sp = extract_squeeze(evolve_vacuum(cfg))
        ref = squeezed_vacuum_coeffs(sp, v.truncation)
        assert abs(v.overlap(ref)) == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("cfg", CONFIGS)
    def test_energy_bookkeeping(self, cfg):
        v = evolve_fock(cfg)
        sp = extract_squeeze(evolve_vacuum(cfg))
        assert v.mean_number() == pytest.approx(math.sinh(sp.r) ** 2, abs=1e-8)

    @pytest.mark.parametrize("cfg", CONFIGS[:3])
    def test_parity_full_space(self, cfg):
        v = evolve_fock(cfg, N=cfg_cutoff(cfg), even_sector=False)
        assert np.abs(v.coeffs[1::2]).max() < 1e-12
        np.testing.assert_allclose(v.coeffs, evolve_fock(cfg, N=cfg_cutoff(cfg)).coeffs, atol=1e-10)

    @pytest.mark.parametrize("cfg", [CONFIGS[0], CONFIGS[2], CONFIGS[3], CONFIGS[4]])
    def test_exponential_methods_agree(self, cfg):
        a = evolve_fock(cfg, N=256, method="expm").coeffs
        b = evolve_fock(cfg, N=256, method="eigh").coeffs
        np.testing.assert_allclose(a, b, atol=1e-11)

    def test_explicit_cutoff_too_small(self):
        with pytest.raises(TruncationError):
            evolve_fock(ProtocolConfig(0.5, 2.0, 0.5, 3.0, 2), N=64)

    def test_rejects_bad_cutoff(self):
        with pytest.raises(DomainError):
            evolve_fock(CONFIGS[0], N=63)


def cfg_cutoff(cfg):
    return evolve_fock(cfg).truncation


class TestQfiPure:
    def test_no_detuning(self):
        assert abs(qfi_pure(ProtocolConfig(1.0, 0.0, 0.5, 2.0))) < 1e-12

    @pytest.mark.parametrize("r,phi", [(0.0, 0.0), (0.7, 0.3), (1.5, -1.0)])
    def test_squeezing_family(self, r, phi):
        # analytic 4 Var(K) = 2 for the squeeze generator on any squeezed vacuum
        def family(x):
            return squeezed_vacuum_coeffs(SqueezeParams(x, phi), 400).coeffs

        x = max(r, 3e-4)
        assert qfi_pure_family(family, x, 1e-4) == pytest.approx(2.0, abs=1e-8)

    def test_rotation_family(self):
        r = 0.8

        def family(theta):
            return squeezed_vacuum_coeffs(SqueezeParams(r, theta), 300).coeffs

        # rotating the squeezing phase by theta is a phase-space rotation by theta/2
        assert qfi_pure_family(family, 0.4, 1e-4) == pytest.approx(0.25 * 2 * math.sinh(2 * r) ** 2, rel=1e-8)

    @pytest.mark.parametrize("cfg", CONFIGS[:3])
    def test_gauge_invariance(self, cfg):
        base = qfi_pure(cfg)
        N = cfg_cutoff(cfg)
        h = 1e-4 * max(cfg.omega0, 1)

        def family(w):
            return np.exp(1j * 3.7 * w**2) * evolve_fock(cfg.replace(omega0=w), N).coeffs

        # fix_gauge removes any global phase, so compare against the raw formula as well
        psi = family(cfg.omega0)
        d = (-family(cfg.omega0 + 2 * h) + 8 * family(cfg.omega0 + h) - 8 * family(cfg.omega0 - h) + family(cfg.omega0 - 2 * h)) / (12 * h)
        raw = 4 * (np.vdot(d, d).real - abs(np.vdot(psi, d)) ** 2)
        assert raw == pytest.approx(base, rel=1e-7)
        assert qfi_pure_family(family, cfg.omega0, h) == pytest.approx(base, rel=1e-9)

    @pytest.mark.parametrize("cfg", CONFIGS[:3])
    def test_truncation_stability(self, cfg):
        N = cfg_cutoff(cfg)
        assert qfi_pure(cfg, N=2 * N) == pytest.approx(qfi_pure(cfg, N=N), rel=1e-8)

    def test_pinned_value(self):
        assert qfi_pure(ProtocolConfig(1.0, 1.0, 0.5, 1.0, 1)) == pytest.approx(2.1051482654879, rel=1e-9)


def test_fix_gauge():
    v = np.array([0.0, 1j, 2.0])
    out = fix_gauge(v)
    assert out[1] == pytest.approx(1.0)
    assert out[2] == pytest.approx(-2j)
