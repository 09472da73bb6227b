"""Thermodynamic chain: closed forms, generic fallbacks, and identities.

Oracles: the radiation and quadratic laws have independently derived closed
chains (frozen literals below); the generic quadrature path is checked
against the closed forms; differential identities are checked by symmetric
differencing.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from shockdev import eos as E
from shockdev.errors import OutOfRange

SQRT3 = math.sqrt(3.0)

# frozen closed-chain values at rho = 2 (radiation: rho_ref = h_ref = 1)
RAD_SIGMA_2 = 2.242390440676572
RAD_H_2 = 1.189207115002721
RAD_RT_2 = 0.3001415334632359

# frozen closed-chain values at rho = 2 (p = 0.1 rho^2, rho_ref = h_ref = 1)
P2_SIGMA_2 = 2.016666666666667
P2_H_2 = 1.190082644628099
P2_RT_2 = 0.3231675021488803
P2_MU_2 = 1.2


class TestSoundSpeed:
    def test_radiation_is_one_third(self, rad):
        assert E.sound_speed_sq(rad, 2.0) == pytest.approx(1.0 / 3.0, abs=1e-15)

    def test_quadratic_law_value(self, p2):
        assert E.sound_speed_sq(p2, 1.0) == pytest.approx(0.2, abs=1e-15)

    def test_quadratic_law_out_of_range(self, p2):
        with pytest.raises(OutOfRange):
            E.sound_speed_sq(p2, 6.0)

    def test_subluminal_on_sampled_range(self, rad, p2, rng):
        for eos in (rad, p2):
            rho = rng.uniform(eos.rho_min, eos.rho_max, size=200)
            eta2 = E.sound_speed_sq(eos, rho)
            assert np.all(eta2 > 0) and np.all(eta2 < 1)


class TestPotentialChain:
    def test_reference_point_vanishes(self, rad, p2, rad_generic):
        for eos in (rad, p2, rad_generic):
            assert E.riemann_potential(eos, eos.h_ref) == pytest.approx(0.0, abs=1e-13)

    def test_radiation_log_form(self, rad):
        # rho_tilde = sqrt(3) log h; at h = e the value is exactly sqrt(3)
        assert E.riemann_potential(rad, math.e) == pytest.approx(SQRT3, rel=1e-12)

    def test_frozen_values_radiation(self, rad):
        assert E.sigma(rad, 2.0) == pytest.approx(RAD_SIGMA_2, rel=1e-14)
        assert E.enthalpy(rad, 2.0) == pytest.approx(RAD_H_2, rel=1e-14)
        assert E.potential_of_rho(rad, 2.0) == pytest.approx(RAD_RT_2, rel=1e-14)

    def test_frozen_values_quadratic(self, p2):
        assert p2.sigma_ref == pytest.approx(1.1, rel=1e-14)
        assert E.sigma(p2, 2.0) == pytest.approx(P2_SIGMA_2, rel=1e-14)
        assert E.enthalpy(p2, 2.0) == pytest.approx(P2_H_2, rel=1e-14)
        assert E.potential_of_rho(p2, 2.0) == pytest.approx(P2_RT_2, rel=1e-14)

    def test_generic_quadrature_matches_closed_form(self, rad, rad_generic):
        # same pressure law, one instance integrates adaptively
        for rho in (0.2, 0.9, 1.0, 1.7, 6.3):
            assert E.sigma(rad_generic, rho) == pytest.approx(
                E.sigma(rad, rho), rel=1e-10
            )
            assert E.potential_of_rho(rad_generic, rho) == pytest.approx(
                E.potential_of_rho(rad, rho), abs=1e-10
            )
        h = E.enthalpy(rad, 1.7)
        assert E.riemann_potential(rad_generic, h) == pytest.approx(
            E.riemann_potential(rad, h), abs=1e-10
        )

    def test_generic_array_path_uses_chart(self, rad, rad_generic):
        rho = np.geomspace(0.1, 10.0, 17)
        assert np.max(np.abs(E.sigma(rad_generic, rho) - E.sigma(rad, rho))) < 1e-9
        assert (
            np.max(
                np.abs(
                    E.potential_of_rho(rad_generic, rho)
                    - E.potential_of_rho(rad, rho)
                )
            )
            < 1e-9
        )

    def test_monotone_increasing(self, rad, p2):
        for eos in (rad, p2):
            rho = np.geomspace(eos.rho_min * 2, eos.rho_max * 0.9, 40)
            pot = E.potential_of_rho(eos, rho)
            h = E.enthalpy(eos, rho)
            assert np.all(np.diff(pot) > 0)
            assert np.all(np.diff(h) > 0)

    def test_round_trip_potential(self, rad, p2, rad_generic, rng):
        # invert rho_tilde -> h by bracketing, re-apply the potential
        for eos in (rad, p2, rad_generic):
            lo = E.potential_of_rho(eos, eos.rho_min * 3)
            hi = E.potential_of_rho(eos, eos.rho_max / 3)
            for pot in rng.uniform(lo, hi, size=8):
                h = E.enthalpy_of_potential(eos, float(pot))
                assert E.riemann_potential(eos, h) == pytest.approx(
                    float(pot), abs=1e-10
                )

    def test_out_of_range_rejected(self, rad):
        with pytest.raises(OutOfRange):
            E.potential_of_rho(rad, 1e7)


class TestWaveSpeedWeight:
    def test_reference_value(self, rad, p2):
        for eos in (rad, p2):
            H_ref = eos.h_ref**2
            assert E.big_g(eos, H_ref) == pytest.approx(
                eos.sigma_ref / math.sqrt(H_ref), rel=1e-14
            )

    def test_radiation_proportional_to_H(self, rad):
        # sigma/h = sigma_ref rho^{1/2} = (4/3) H for unit references
        H = np.geomspace(0.3, 3.0, 11)
        G = np.array([E.big_g(rad, float(x)) for x in H])
        assert np.max(np.abs(G / H - 4.0 / 3.0)) < 1e-8

    def test_product_recovers_energy_density(self, rad, p2, rng):
        # G * H = sigma * h = rho + p
        for eos in (rad, p2):
            for rho in rng.uniform(eos.rho_min * 2, eos.rho_max * 0.9, size=10):
                h = E.enthalpy(eos, float(rho))
                val = E.big_g(eos, h * h) * h * h
                assert val == pytest.approx(
                    float(rho) + E.pressure(eos, float(rho)), rel=1e-8
                )


class TestNonlinearityCoefficient:
    def test_radiation_constant(self, rad):
        for rt in (-0.4, 0.0, 0.7):
            assert E.mu_coefficient(rad, rt) == pytest.approx(2.0 / 3.0, abs=1e-13)

    def test_quadratic_closed_form(self, p2):
        assert E.mu_coefficient(p2, P2_RT_2) == pytest.approx(P2_MU_2, rel=1e-12)

    def test_closed_form_matches_differencing(self, p2):
        # strip the closed slope so the symmetric-difference branch runs
        stripped = E.BarotropicEos(
            label="poly2-fd",
            pressure_fn=p2.pressure_fn,
            dp_drho_fn=p2.dp_drho_fn,
            rho_min=p2.rho_min,
            rho_max=p2.rho_max,
            rho_ref=p2.rho_ref,
            h_ref=p2.h_ref,
            sigma_cf=p2.sigma_cf,
            enthalpy_cf=p2.enthalpy_cf,
            rho_of_enthalpy_cf=p2.rho_of_enthalpy_cf,
            potential_of_rho_cf=p2.potential_of_rho_cf,
            rho_of_potential_cf=p2.rho_of_potential_cf,
        )
        for rt in (-0.1, 0.0, 0.3):
            assert E.mu_coefficient(stripped, rt) == pytest.approx(
                E.mu_coefficient(p2, rt), abs=1e-8
            )

    def test_positive_where_required(self, rad, p2, rng):
        for eos in (rad, p2):
            lo = E.potential_of_rho(eos, eos.rho_min * 3)
            hi = E.potential_of_rho(eos, eos.rho_max / 3)
            rt = rng.uniform(lo, hi, size=20)
            assert np.all(np.asarray(E.mu_coefficient(eos, rt)) > 0)


class TestStiffnessIdentities:
    def test_slope_relation(self, rad, p2):
        # d Sigma_tilde / dh == -2 mu / h^3
        for eos, rhos in ((rad, (0.5, 1.0, 2.0)), (p2, (0.5, 1.0, 2.0))):
            for rho in rhos:
                h = E.enthalpy(eos, rho)
                rt = E.potential_of_rho(eos, rho)
                lhs = E.sigma_tilde_slope(eos, h)
                rhs = -2.0 * E.mu_coefficient(eos, rt) / h**3
                assert lhs == pytest.approx(rhs, rel=1e-6)

    def test_radiation_slope_closed_form(self, rad):
        # Sigma_tilde = (2/3) h^{-2}, so the slope is -(4/3) h^{-3}
        h = E.enthalpy(rad, 2.0)
        assert E.sigma_tilde_slope(rad, h) == pytest.approx(
            -(4.0 / 3.0) / h**3, rel=1e-7
        )

    def test_consistency_identity(self, rad, p2):
        for eos, rhos in ((rad, (0.7, 1.0, 1.7)), (p2, (0.7, 1.0, 2.0, 3.0))):
            for rho in rhos:
                lhs, rhs = E.eos_identity_residual(eos, rho)
                assert lhs == pytest.approx(rhs, rel=1e-4)


class TestTabulated:
    def _table(self, rad):
        rho = np.geomspace(0.2, 5.0, 400)
        return np.column_stack([rho, rho / 3.0])

    def test_matches_source_law(self, rad, tmp_path):
        path = tmp_path / "radiation.tsv"
        np.savetxt(path, self._table(rad))
        tab = E.from_table(path, rho_ref=1.0)
        assert E.sound_speed_sq(tab, 1.3) == pytest.approx(1.0 / 3.0, rel=1e-6)
        assert E.sigma(tab, 1.3) == pytest.approx(E.sigma(rad, 1.3), rel=1e-6)
        assert E.potential_of_rho(tab, 1.3) == pytest.approx(
            E.potential_of_rho(rad, 1.3), abs=1e-6
        )

    def test_comma_separated(self, rad, tmp_path):
        path = tmp_path / "radiation.csv"
        rows = self._table(rad)
        with open(path, "w") as fh:
            for r, p in rows:
                fh.write(f"{float(r):.17g},{float(p):.17g}\n")
        tab = E.from_table(path, rho_ref=1.0)
        assert E.sound_speed_sq(tab, 1.3) == pytest.approx(1.0 / 3.0, rel=1e-6)

    def test_rejects_non_monotone(self, tmp_path):
        bad = np.array([[0.5, 0.2], [0.4, 0.25], [0.6, 0.3], [0.7, 0.31]])
        with pytest.raises(OutOfRange):
            E.from_table(bad)

    def test_rejects_superluminal(self):
        rho = np.linspace(1.0, 2.0, 20)
        with pytest.raises(OutOfRange):
            E.from_table(np.column_stack([rho, 1.5 * rho]))

    def test_out_of_table_range(self, rad):
        tab = E.from_table(self._table(rad), rho_ref=1.0)
        with pytest.raises(OutOfRange):
            E.sound_speed_sq(tab, 10.0)
