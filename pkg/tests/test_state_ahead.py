"""Pre-shock model: cusp constraints, boundary curves, carried initial data.

Oracles: exact coefficient identities by construction, 4th-order stencils
for eval self-consistency, scipy.integrate.solve_ivp for the incoming
characteristic, and least-squares expansion fits for the corner behavior.
"""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from shockdev import eos as E
from shockdev import fitting
from shockdev import state_ahead as SA
from shockdev.errors import InconsistentCusp, LeftBox, OutOfBox
from shockdev.state import RiemannPair, char_speeds

CUBIC_TARGET = math.sqrt(3.0) / 12.0  # lam / (6 kappa (c+0 - c-0)) at the canonical cusp


@pytest.fixture(scope="module")
def cusp(rad):
    return SA.CuspData.from_physics(
        rad, kappa=1.0, lam=1.0, alpha0=0.0, beta0=0.0, dbeta_dt0=0.3, r0=1.0
    )


@pytest.fixture(scope="module")
def model(cusp, rad):
    return SA.synthesize_model(cusp, rad, eps=0.1)


class TestCuspData:
    def test_canonical_alpha_slope(self, cusp):
        # kappa / (dc+/dalpha) with dc+/dalpha = 1/3 at the rest radiation state
        assert cusp.alpha_dot0 == pytest.approx(3.0, rel=1e-12)
        assert cusp.dcplus_dalpha0 == pytest.approx(1.0 / 3.0, rel=1e-12)
        assert cusp.c_plus0 == pytest.approx(1.0 / math.sqrt(3.0), rel=1e-14)
        assert cusp.c_minus0 == pytest.approx(-1.0 / math.sqrt(3.0), rel=1e-14)
        assert cusp.a_tilde0 == 0.0

    def test_moving_state_source(self, rad):
        c = SA.CuspData.from_physics(rad, kappa=1.0, lam=1.0, alpha0=0.4, beta0=0.0, r0=1.0, dbeta_dt0=0.0)
        v0 = math.tanh(0.2)
        eta = 1.0 / math.sqrt(3.0)
        assert c.a_tilde0 == pytest.approx(-2 * v0 * eta / (1 + v0 * eta), rel=1e-12)
        assert c.alpha_dot0 == pytest.approx(c.kappa / c.dcplus_dalpha0, rel=1e-14)

    @pytest.mark.parametrize("bad", [dict(kappa=-1.0), dict(kappa=0.0), dict(lam=-0.5), dict(r0=0.0)])
    def test_rejects_nonpositive_shape_data(self, rad, bad):
        args = dict(kappa=1.0, lam=1.0, alpha0=0.0, beta0=0.0, dbeta_dt0=0.0, r0=1.0)
        args.update(bad)
        with pytest.raises(InconsistentCusp):
            SA.CuspData.from_physics(rad, **args)

    def test_rejects_insensitive_sound_speed(self):
        # quadratic pressure correction tuned so the steepening coefficient
        # vanishes at the reference state: no alpha slope can refocus rays
        b = 0.09 / 1.9
        eos = E.BarotropicEos(
            label="flat-steepening",
            pressure_fn=lambda rho: 0.9 * rho - b * (rho - 1.0) ** 2,
            dp_drho_fn=lambda rho: 0.9 - 2.0 * b * (rho - 1.0),
            rho_min=0.6,
            rho_max=1.6,
        )
        with pytest.raises(InconsistentCusp):
            SA.CuspData.from_physics(eos, kappa=1.0, lam=1.0, alpha0=0.0, beta0=0.0, dbeta_dt0=0.0, r0=1.0)


class TestModelCoefficients:
    def test_radius_constraints(self, model, cusp):
        assert model.eval("r", 0, 0) == cusp.r0
        assert model.eval("r", 0, 0, dt=1) == cusp.c_plus0
        assert model.eval("r", 0, 0, dw=1) == 0.0
        assert model.eval("r", 0, 0, dw=2) == 0.0
        assert model.eval("r", 0, 0, dw=3) == -cusp.lam / cusp.kappa
        assert model.eval("r", 0, 0, dt=1, dw=1) == cusp.kappa

    def test_invariant_constraints(self, model, cusp):
        assert model.eval("alpha", 0, 0) == cusp.alpha0
        assert model.eval("alpha", 0, 0, dw=1) == cusp.alpha_dot0
        assert model.eval("alpha", 0, 0, dw=2) == cusp.alpha_ddot0
        assert model.eval("beta", 0, 0) == cusp.beta0
        assert model.eval("beta", 0, 0, dt=1) == cusp.dbeta_dt0
        assert model.eval("beta", 0, 0, dw=1) == 0.0
        assert model.eval("beta", 0, 0, dw=2) == 0.0

    def test_radius_profile_at_zero_time(self, model, cusp):
        w = 0.05
        assert model.eval("r", 0.0, w) == pytest.approx(
            cusp.r0 - cusp.lam / (6 * cusp.kappa) * w**3, rel=1e-14
        )

    def test_quartic_shape_term(self, cusp, rad):
        c = SA.CuspData.from_physics(rad, kappa=1.0, lam=1.0, dbeta_dt0=0.3, r0=1.0, xi=0.6)
        m = SA.synthesize_model(c, rad, eps=0.1)
        assert m.eval("r", 0, 0, dw=4) == pytest.approx(0.6, rel=1e-14)

    def test_eval_matches_stencil_derivatives(self, model):
        fd = fitting.derivative(lambda tv: model.eval("r", tv, 0.03), 0.0, order=1, step=1e-3)
        assert fd == pytest.approx(model.eval("r", 0.0, 0.03, dt=1), abs=1e-10)
        fd3 = fitting.derivative(lambda wv: model.eval("r", 0.001, wv), 0.02, order=3, step=1e-2)
        assert fd3 == pytest.approx(model.eval("r", 0.001, 0.02, dw=3), abs=1e-8)
        mx = fitting.mixed_second(lambda tv, wv: model.eval("r", tv, wv), 0.0, 0.0)
        assert mx == pytest.approx(model.eval("r", 0.0, 0.0, dt=1, dw=1), abs=1e-8)

    def test_eval_outside_box(self, model):
        with pytest.raises(OutOfBox):
            model.eval("r", 2 * model.box_t, 0.0)
        with pytest.raises(OutOfBox):
            model.eval("alpha", 0.0, np.array([0.0, 3 * model.box_w]))

    def test_eval_rejects_bad_requests(self, model):
        with pytest.raises(ValueError):
            model.eval("pressure", 0.0, 0.0)
        with pytest.raises(ValueError):
            model.eval("r", 0.0, 0.0, dt=3, dw=2)


class TestSynthesisOverrides:
    def test_free_slot_override(self, cusp, rad):
        m = SA.synthesize_model(cusp, rad, eps=0.1, overrides={"r": {(2, 0): 0.3}})
        assert m.eval("r", 0, 0, dt=2) == pytest.approx(0.6, rel=1e-14)

    def test_constrained_slot_rejected(self, cusp, rad):
        with pytest.raises(InconsistentCusp):
            SA.synthesize_model(cusp, rad, eps=0.1, overrides={"alpha": {(0, 1): 5.0}})

    def test_degree_and_slot_validation(self, cusp, rad):
        with pytest.raises(ValueError):
            SA.synthesize_model(cusp, rad, degree=3)
        with pytest.raises(ValueError):
            SA.synthesize_model(cusp, rad, eps=0.1, overrides={"r": {(4, 4): 1.0}})
        with pytest.raises(ValueError):
            SA.synthesize_model(cusp, rad, eps=0.1, overrides={"speed": {(0, 0): 1.0}})


class TestSingularBoundary:
    def test_corner_value(self, model):
        assert SA.singular_boundary(model, 0.0) == 0.0

    def test_leading_quadratic(self, model):
        assert SA.singular_boundary(model, 0.1) == pytest.approx(0.005, rel=1e-12)

    def test_quartic_correction(self, rad):
        c = SA.CuspData.from_physics(rad, kappa=1.0, lam=1.0, dbeta_dt0=0.3, r0=1.0, xi=0.6)
        m = SA.synthesize_model(c, rad, eps=0.1)
        t_star = SA.singular_boundary(m, 0.1)
        assert t_star == pytest.approx(0.005 - 0.6 / 6.0 * 0.1**3, rel=1e-12)
        # root property: the radius is exactly critical in w there
        assert abs(m.eval("r", t_star, 0.1, dw=1)) < 1e-16

    def test_array_input(self, model):
        w = np.array([0.0, 0.05, 0.1])
        t = SA.singular_boundary(model, w)
        assert t == pytest.approx(0.5 * w**2, rel=1e-12, abs=1e-300)


class TestIncomingCharacteristic:
    def test_cubic_coefficient_fit(self, model, rad):
        curve = SA.incoming_characteristic(model, rad, 0.05, 200)
        basis = np.vstack([curve.w**3, curve.w**4, curve.w**5]).T
        coef, *_ = np.linalg.lstsq(basis, curve.t, rcond=None)
        assert coef[0] == pytest.approx(CUBIC_TARGET, rel=1e-2)
        # and in fact far better; halving the interval improves the fit
        assert abs(coef[0] - CUBIC_TARGET) / CUBIC_TARGET < 1e-4
        half = SA.incoming_characteristic(model, rad, 0.025, 200)
        basis_h = np.vstack([half.w**3, half.w**4, half.w**5]).T
        coef_h, *_ = np.linalg.lstsq(basis_h, half.t, rcond=None)
        assert abs(coef_h[0] - CUBIC_TARGET) < abs(coef[0] - CUBIC_TARGET)

    def test_vanishing_low_order_terms(self, model, rad):
        curve = SA.incoming_characteristic(model, rad, 0.05, 200)
        basis = np.vstack([curve.w, curve.w**2, curve.w**3, curve.w**4]).T
        coef, *_ = np.linalg.lstsq(basis, curve.t, rcond=None)
        assert abs(coef[0]) < 1e-6
        assert abs(coef[1]) < 1e-4
        assert curve.t[0] == 0.0
        assert curve.slope[0] == 0.0

    def test_monotone_increasing(self, model, rad):
        curve = SA.incoming_characteristic(model, rad, 0.05, 100)
        assert np.all(np.diff(curve.t) > 0)

    def test_against_adaptive_integrator(self, model, rad):
        curve = SA.incoming_characteristic(model, rad, 0.05, 200)

        def rhs(wv, tv):
            a = model.eval("alpha", tv[0], wv)
            b = model.eval("beta", tv[0], wv)
            cp, cm = char_speeds(rad, RiemannPair(a, b))
            return [-model.eval("r", tv[0], wv, dw=1) / (cp - cm)]

        sol = solve_ivp(
            rhs, (0.0, 0.05), [0.0], t_eval=curve.w, rtol=1e-12, atol=1e-16, method="DOP853"
        )
        assert np.max(np.abs(sol.y[0] - curve.t)) < 1e-10

    def test_explicit_nodes(self, model, rad):
        nodes = np.linspace(0.0, 0.04, 33)
        curve = SA.incoming_characteristic(model, rad, w_nodes=nodes)
        uniform = SA.incoming_characteristic(model, rad, 0.04, 32)
        assert curve.t == pytest.approx(uniform.t, abs=1e-15)

    def test_interval_outside_box(self, model, rad):
        with pytest.raises(LeftBox):
            SA.incoming_characteristic(model, rad, 0.3, 10)

    def test_trajectory_exit(self, rad):
        # huge quartic shape term drives the curve out of the shallow box
        c = SA.CuspData.from_physics(rad, kappa=1.0, lam=1.0, dbeta_dt0=0.0, r0=1.0, xi=-1e6)
        m = SA.synthesize_model(c, rad, eps=0.01)
        with pytest.raises(LeftBox):
            SA.incoming_characteristic(m, rad, 0.02, 64)


class TestInitialData:
    def test_hatted_corner_values(self, rad):
        c = SA.CuspData.from_physics(
            rad, kappa=1.0, lam=1.0, dbeta_dt0=0.3, r0=1.0, alpha_ddot0=0.4
        )
        m = SA.synthesize_model(c, rad, eps=0.01)
        init = SA.initial_data(m, rad, 0.01, 64)
        assert init.h_hat[0] == pytest.approx(CUBIC_TARGET, rel=1e-14)
        assert init.alpha_i_hat[0] == pytest.approx(0.2, rel=1e-12)
        assert init.alpha_i[0] == c.alpha0
        assert np.all(init.dh_du >= 0)
        # hatted time data stays near its corner value across the interval
        assert np.max(np.abs(init.h_hat - CUBIC_TARGET)) < 0.01 * CUBIC_TARGET

    def test_consistent_with_characteristic(self, model, rad):
        init = SA.initial_data(model, rad, 0.05, 50)
        curve = SA.incoming_characteristic(model, rad, 0.05, 50)
        assert init.h == pytest.approx(curve.t, abs=1e-16)
        assert init.dh_du == pytest.approx(curve.slope, abs=1e-16)
        alpha_direct = model.eval("alpha", curve.t, curve.w)
        assert init.alpha_i == pytest.approx(alpha_direct, abs=1e-16)


class TestModelSerialization:
    def test_round_trip(self, model, rad, tmp_path):
        path = tmp_path / "model.json"
        model.dump(path)
        loaded = SA.load_model(path, rad)
        assert loaded.coeffs == model.coeffs
        assert loaded.cusp == model.cusp
        assert loaded.box_t == model.box_t and loaded.box_w == model.box_w
        pts_t = np.array([0.0, 5e-3, -2e-3])
        pts_w = np.array([0.0, 0.04, 0.09])
        for field in ("r", "alpha", "beta"):
            assert loaded.eval(field, pts_t, pts_w) == pytest.approx(
                model.eval(field, pts_t, pts_w), abs=0
            )

    def test_label_mismatch(self, model, p2, tmp_path):
        path = tmp_path / "model.json"
        model.dump(path)
        with pytest.raises(ValueError):
            SA.load_model(path, p2)
