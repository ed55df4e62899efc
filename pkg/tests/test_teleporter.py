"""Tests for the teleportation circuit and analytic noise budget."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvteleport.gaussian import (
    coherent_state,
    displace,
    from_db,
    make_vacuum,
    quad_statistics,
    tensor,
    to_db,
)
from cvteleport.teleporter import (
    CalibrationError,
    GainTooLowError,
    Regime,
    TeleporterConfig,
    analytic_noise_budget,
    build_epr,
    calibrate_unity_gain,
    fidelity_from_variances,
    intrinsic_from_raw,
    run_teleport,
    teleport_circuit,
)

REFERENCE = dict(n_sq=0.178, eta_bell=0.9, eta_meas=0.9)


class TestBuildEpr:
    def test_reference_correlations(self):
        epr = build_epr(0.178)
        c = epr.cov
        assert c[0, 0] + c[2, 2] - 2 * c[0, 2] == pytest.approx(0.356, rel=1e-10)
        assert c[1, 1] + c[3, 3] + 2 * c[1, 3] == pytest.approx(0.356, rel=1e-10)

    def test_no_squeezing_gives_vacua(self):
        epr = build_epr(1.0)
        assert np.allclose(epr.cov, np.eye(4), atol=1e-12)

    def test_ideal_limit(self):
        # correlations vanish as n_sq -> 0; tolerance allows the float
        # cancellation against the ~1e6 anti-squeezed entries
        epr = build_epr(1e-6)
        c = epr.cov
        assert c[0, 0] + c[2, 2] - 2 * c[0, 2] == pytest.approx(2e-6, rel=1e-3)

    def test_invalid_n_sq(self):
        with pytest.raises(ValueError):
            build_epr(0.0)
        with pytest.raises(ValueError):
            build_epr(1.2)


class TestUnityGainCalibration:
    def test_formula_values(self):
        # chain sqrt(eps) g sqrt(eta_bell) must supply the sqrt(2) the Bell
        # splitter removed: eps = 2 / (eta_bell 10^(gain/10))
        assert calibrate_unity_gain(30.0, 1.0) == pytest.approx(2e-3, rel=1e-12)
        assert calibrate_unity_gain(60.0, 0.9) == pytest.approx(2.2222e-6,
                                                                rel=1e-4)

    def test_gain_too_low(self):
        with pytest.raises(GainTooLowError):
            calibrate_unity_gain(2.0, 0.5)

    def test_mean_transfer_lossless(self):
        cfg = TeleporterConfig(n_sq=0.5, eta_bell=1.0, eta_meas=1.0,
                               ff_gain_db=60.0)
        out = run_teleport(cfg, coherent_state(1, 0, 2.0, 0.0))
        mx, mp, _, _ = quad_statistics(out, 0)
        assert mx == pytest.approx(2.0, abs=0.01)
        assert mp == pytest.approx(0.0, abs=1e-9)

    def test_output_mean_linearity(self):
        cfg = TeleporterConfig(**REFERENCE, ff_gain_db=60.0)
        g = math.sqrt(REFERENCE["eta_meas"])
        for mu in [(1.0, 0.0), (-2.5, 4.0), (0.3, -7.0)]:
            out = run_teleport(cfg, coherent_state(1, 0, *mu))
            mx, mp, _, _ = quad_statistics(out, 0)
            assert mx == pytest.approx(g * mu[0], rel=1e-4, abs=1e-6)
            assert mp == pytest.approx(g * mu[1], rel=1e-4, abs=1e-6)


class TestRunTeleport:
    def test_classical_baseline_is_three_shot_units(self):
        cfg = TeleporterConfig(n_sq=1.0, eta_bell=1.0, eta_meas=1.0,
                               ff_gain_db=60.0, regime=Regime.CLASSICAL)
        out = run_teleport(cfg, make_vacuum(1))
        _, _, vx, vp = quad_statistics(out, 0)
        assert vx == pytest.approx(3.000, abs=0.003)
        assert vp == pytest.approx(3.000, abs=0.003)

    def test_ideal_epr_approaches_unit_variance(self):
        cfg = TeleporterConfig(n_sq=1e-6, eta_bell=1.0, eta_meas=1.0,
                               ff_gain_db=60.0)
        out = run_teleport(cfg, make_vacuum(1))
        _, _, vx, vp = quad_statistics(out, 0)
        assert vx == pytest.approx(1.0, abs=1e-4)
        assert vp == pytest.approx(1.0, abs=1e-4)

    def test_reference_configuration(self):
        cfg = TeleporterConfig(**REFERENCE, ff_gain_db=60.0)
        out = run_teleport(cfg, make_vacuum(1))
        _, _, vx, vp = quad_statistics(out, 0)
        assert vx == pytest.approx(1.520, abs=0.002)
        assert vp == pytest.approx(1.520, abs=0.002)

    def test_regime_monotonicity(self):
        quantum = TeleporterConfig(**REFERENCE, ff_gain_db=60.0)
        classical = TeleporterConfig(**REFERENCE, ff_gain_db=60.0,
                                     regime=Regime.CLASSICAL)
        vq = quad_statistics(run_teleport(quantum, make_vacuum(1)), 0)[2]
        vc = quad_statistics(run_teleport(classical, make_vacuum(1)), 0)[2]
        assert vq < vc

    def test_uncalibrated_config_rejected(self):
        cfg = TeleporterConfig(**REFERENCE, ff_gain_db=60.0, tap_reflectivity=0.1)
        with pytest.raises(CalibrationError):
            run_teleport(cfg, make_vacuum(1))
        out = run_teleport(cfg, make_vacuum(1), allow_uncalibrated=True)
        assert out.n_modes == 1

    def test_multimode_input_rejected(self):
        cfg = TeleporterConfig(**REFERENCE)
        with pytest.raises(ValueError):
            run_teleport(cfg, make_vacuum(2))

    def test_finite_gain_convergence_random_configs(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            cfg = TeleporterConfig(n_sq=float(rng.uniform(0.1, 1.0)),
                                   eta_bell=float(rng.uniform(0.1, 1.0)),
                                   eta_meas=float(rng.uniform(0.1, 1.0)),
                                   ff_gain_db=60.0)
            out = run_teleport(cfg, make_vacuum(1))
            ref = analytic_noise_budget(cfg).n_out
            _, _, vx, vp = quad_statistics(out, 0)
            assert abs(vx - ref) / ref < 1e-3
            assert abs(vp - ref) / ref < 1e-3


class TestOutputRelationSigns:
    def test_displaced_ancillas(self):
        # displacing the ancillas must shift the output as (-x1, +x2) in x
        # and (+p1, +p2) in p, the defining signs of the output relation
        cfg = TeleporterConfig(n_sq=1.0, eta_bell=1.0, eta_meas=1.0,
                               ff_gain_db=80.0, regime=Regime.CLASSICAL)
        a1 = (0.8, -0.5)
        a2 = (-1.1, 0.6)
        mu = (2.0, 3.0)
        state = tensor(coherent_state(1, 0, *mu), make_vacuum(2))
        state = displace(state, 1, *a1)
        state = displace(state, 2, *a2)
        out = teleport_circuit(state, cfg)
        mx, mp, _, _ = quad_statistics(out, 0)
        assert mx == pytest.approx(mu[0] - a1[0] + a2[0], abs=1e-3)
        assert mp == pytest.approx(mu[1] + a1[1] + a2[1], abs=1e-3)


class TestNoiseBudget:
    def test_reference_values(self):
        budget = analytic_noise_budget(TeleporterConfig(**REFERENCE))
        assert budget.n_out == pytest.approx(1.52, abs=5e-3)
        assert budget.n_out_db == pytest.approx(1.82, abs=5e-3)

    def test_classical_values(self):
        cfg = TeleporterConfig(**REFERENCE, regime=Regime.CLASSICAL)
        budget = analytic_noise_budget(cfg)
        assert budget.n_out == pytest.approx(3.00, abs=1e-12)
        assert budget.n_out_db == pytest.approx(4.77, abs=2e-3)
        assert budget.fidelity_vacuum == pytest.approx(0.5, abs=1e-12)

    def test_ideal_limit(self):
        cfg = TeleporterConfig(n_sq=1e-15, eta_bell=1.0, eta_meas=1.0)
        budget = analytic_noise_budget(cfg)
        assert budget.n_out == pytest.approx(1.0, abs=1e-12)
        assert budget.fidelity_vacuum == pytest.approx(1.0, abs=1e-12)

    def test_classical_loss_cancellation(self):
        # feedforward loss raises the classical noise, readout loss lowers
        # it; equal values cancel exactly at 3.0 for all efficiencies
        for eta in (0.5, 0.7, 0.9, 0.99):
            cfg = TeleporterConfig(n_sq=1.0, eta_bell=eta, eta_meas=eta,
                                   regime=Regime.CLASSICAL)
            assert analytic_noise_budget(cfg).n_out == pytest.approx(
                3.0, abs=1e-12)

    def test_budget_floor(self):
        rng = np.random.default_rng(7)
        for _ in range(25):
            cfg = TeleporterConfig(n_sq=float(rng.uniform(0.01, 1.0)),
                                   eta_bell=float(rng.uniform(0.1, 1.0)),
                                   eta_meas=float(rng.uniform(0.1, 1.0)))
            assert analytic_noise_budget(cfg).n_out >= 1.0


class TestIntrinsicFromRaw:
    def test_broadband_quantum_points(self):
        v = intrinsic_from_raw(from_db(1.77), 0.9)
        assert to_db(v) == pytest.approx(1.93, abs=0.01)
        v = intrinsic_from_raw(from_db(1.73), 0.9)
        assert to_db(v) == pytest.approx(1.88, abs=0.01)

    def test_broadband_classical_points(self):
        v = intrinsic_from_raw(from_db(4.74), 0.9)
        assert to_db(v) == pytest.approx(5.05, abs=0.01)
        v = intrinsic_from_raw(from_db(4.58), 0.9)
        assert to_db(v) == pytest.approx(4.88, abs=0.01)

    def test_unit_efficiency_identity(self):
        assert intrinsic_from_raw(2.345, 1.0) == 2.345

    def test_unphysical_input_rejected(self):
        with pytest.raises(ValueError):
            intrinsic_from_raw(0.05, 0.9)

    @given(st.floats(min_value=0.05, max_value=10.0),
           st.floats(min_value=0.05, max_value=1.0))
    @settings(max_examples=60)
    def test_inverts_loss_channel(self, variance, eta):
        lossy = eta * variance + (1 - eta)
        assert intrinsic_from_raw(lossy, eta) == pytest.approx(variance,
                                                               rel=1e-12)


class TestFidelityFromVariances:
    def test_exact_limits(self):
        assert fidelity_from_variances(3.0, 3.0) == 0.5
        assert fidelity_from_variances(2.0, 2.0) == pytest.approx(2 / 3,
                                                                  abs=1e-15)

    def test_reported_raw_fidelity(self):
        f = fidelity_from_variances(from_db(1.77), from_db(1.73))
        assert f == pytest.approx(0.801, abs=5e-4)

    def test_reported_intrinsic_fidelity(self):
        f = fidelity_from_variances(from_db(1.92), from_db(2.16))
        assert f == pytest.approx(0.770, abs=1e-3)

    def test_unit_variances(self):
        assert fidelity_from_variances(1.0, 1.0) == 1.0


class TestConfigValidation:
    def test_eta_bounds(self):
        with pytest.raises(ValueError):
            TeleporterConfig(n_sq=0.2, eta_bell=0.0, eta_meas=0.9)
        with pytest.raises(ValueError):
            TeleporterConfig(n_sq=0.2, eta_bell=0.9, eta_meas=1.2)

    def test_n_sq_bounds(self):
        with pytest.raises(ValueError):
            TeleporterConfig(n_sq=0.0, eta_bell=0.9, eta_meas=0.9)

    def test_auto_calibration(self):
        cfg = TeleporterConfig(**REFERENCE, ff_gain_db=60.0)
        assert cfg.tap_reflectivity == pytest.approx(
            calibrate_unity_gain(60.0, 0.9), rel=1e-15)
        assert cfg.is_unity_gain()

    def test_explicit_tap_bounds(self):
        with pytest.raises(ValueError):
            TeleporterConfig(**REFERENCE, tap_reflectivity=1.5)
