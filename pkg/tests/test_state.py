"""Riemann-invariant state algebra: conversions, speeds, sources, stress.

Oracles: closed-form evaluations at rest states, round trips, an independent
wave-field route for the source terms, and symmetric differencing for every
derivative formula.
"""

from __future__ import annotations

import math

import numpy as np
import pytest

from shockdev import eos as E
from shockdev import state as S


def random_pairs(rng, n, rt_range=(-0.45, 0.55), zeta_range=(-1.0, 1.0)):
    rt = rng.uniform(*rt_range, size=n)
    zeta = rng.uniform(*zeta_range, size=n)
    return [S.RiemannPair(float(r - z), float(r + z)) for r, z in zip(rt, zeta)]


def central(f, x, h):
    return (f(x + h) - f(x - h)) / (2 * h)


class TestConversions:
    def test_rest_reference_state(self, rad):
        pair = S.riemann_from_state(rad, S.FluidState(rad.h_ref, 0.0))
        assert pair.alpha == pytest.approx(0.0, abs=1e-14)
        assert pair.beta == pytest.approx(0.0, abs=1e-14)
        st = S.state_from_riemann(rad, S.RiemannPair(0.0, 0.0))
        assert st.psi_t == pytest.approx(rad.h_ref, rel=1e-14)
        assert st.psi_r == pytest.approx(0.0, abs=1e-14)

    def test_round_trip(self, rad, p2, rng):
        for eos in (rad, p2):
            for pair in random_pairs(rng, 50):
                st = S.state_from_riemann(eos, pair)
                back = S.riemann_from_state(eos, st)
                assert back.alpha == pytest.approx(pair.alpha, abs=1e-12)
                assert back.beta == pytest.approx(pair.beta, abs=1e-12)

    def test_velocity_matches_wavefield_ratio(self, rad, rng):
        for pair in random_pairs(rng, 50):
            st = S.state_from_riemann(rad, pair)
            assert S.velocity(rad, pair) == pytest.approx(
                -st.psi_r / st.psi_t, abs=1e-12
            )

    def test_swapping_invariants_reverses_velocity(self, rad, rng):
        for pair in random_pairs(rng, 10):
            swapped = S.RiemannPair(pair.beta, pair.alpha)
            assert S.velocity(rad, swapped) == pytest.approx(
                -S.velocity(rad, pair), abs=1e-13
            )

    def test_unphysical_state_rejected(self, rad):
        with pytest.raises(ValueError):
            S.riemann_from_state(rad, S.FluidState(1.0, 1.0))


class TestCharSpeeds:
    def test_rest_state(self, rad):
        cp, cm = S.char_speeds(rad, S.RiemannPair(0.0, 0.0))
        eta = math.sqrt(1.0 / 3.0)
        assert cp == pytest.approx(eta, abs=1e-14)
        assert cm == pytest.approx(-eta, abs=1e-14)

    def test_sonic_state_stalls_incoming_family(self, rad):
        # choose zeta so that v = eta: then c_minus = 0
        eta = math.sqrt(1.0 / 3.0)
        zeta = -math.atanh(eta)
        pair = S.RiemannPair(-zeta, zeta)
        cp, cm = S.char_speeds(rad, pair)
        assert cm == pytest.approx(0.0, abs=1e-14)
        assert cp == pytest.approx(2 * eta / (1 + eta * eta), rel=1e-14)

    def test_always_subluminal(self, rad, p2, rng):
        for eos in (rad, p2):
            for pair in random_pairs(rng, 500):
                cp, cm = S.char_speeds(eos, pair)
                assert -1.0 < cm < cp < 1.0

    def test_derivatives_match_differencing(self, rad, p2, rng):
        for eos in (rad, p2):
            for pair in random_pairs(rng, 10, zeta_range=(-0.6, 0.6)):
                d = S.char_speed_derivatives(eos, pair)
                h = 1e-5
                fd_pa = central(
                    lambda a: S.char_speeds(eos, S.RiemannPair(a, pair.beta))[0],
                    pair.alpha, h,
                )
                fd_pb = central(
                    lambda b: S.char_speeds(eos, S.RiemannPair(pair.alpha, b))[0],
                    pair.beta, h,
                )
                fd_ma = central(
                    lambda a: S.char_speeds(eos, S.RiemannPair(a, pair.beta))[1],
                    pair.alpha, h,
                )
                fd_mb = central(
                    lambda b: S.char_speeds(eos, S.RiemannPair(pair.alpha, b))[1],
                    pair.beta, h,
                )
                assert d["pa"] == pytest.approx(fd_pa, rel=2e-6, abs=1e-9)
                assert d["pb"] == pytest.approx(fd_pb, rel=2e-6, abs=1e-9)
                assert d["ma"] == pytest.approx(fd_ma, rel=2e-6, abs=1e-9)
                assert d["mb"] == pytest.approx(fd_mb, rel=2e-6, abs=1e-9)


class TestSources:
    def test_rest_state_vanishes(self, rad):
        A, B = S.source_terms(rad, S.RiemannPair(0.3, 0.3), r=2.0)
        assert A == 0.0 and B == 0.0

    def test_wavefield_route_agrees(self, rad, p2, rng):
        for eos in (rad, p2):
            for pair in random_pairs(rng, 50):
                A1, B1 = S.source_terms(eos, pair, r=1.7)
                A2, B2 = S.source_terms_wavefield_form(eos, pair, r=1.7)
                assert A1 == pytest.approx(A2, rel=1e-10, abs=1e-13)
                assert B1 == pytest.approx(B2, rel=1e-10, abs=1e-13)

    def test_outflow_damps_both_families(self, rad, rng):
        # v > 0 (zeta < 0) makes both sources negative
        for pair in random_pairs(rng, 20, zeta_range=(-1.0, -0.05)):
            A, B = S.source_terms(rad, pair, r=1.0)
            assert A < 0 and B < 0


class TestStress:
    def test_rest_state(self, rad):
        t = S.stress(rad, S.RiemannPair(0.2, 0.2))
        assert t.tr == pytest.approx(0.0, abs=1e-15)
        assert t.tt > 0

    def test_energy_density_positive(self, rad, p2, rng):
        for eos in (rad, p2):
            for pair in random_pairs(rng, 100):
                assert S.stress(eos, pair).tt > 0

    def test_wavefield_route_agrees(self, rad, rng):
        # E = G psi_t^2 gives the same components
        for pair in random_pairs(rng, 50):
            d = S.point_data(rad, pair)
            st = S.state_from_riemann(rad, pair)
            e_alt = d.G * st.psi_t**2
            t = S.stress(rad, pair)
            assert t.tt == pytest.approx(e_alt - d.p, rel=1e-10)
            assert t.tr == pytest.approx(e_alt * d.v, rel=1e-10, abs=1e-13)
            assert t.rr == pytest.approx(e_alt * d.v**2 + d.p, rel=1e-10)

    def test_product_weight_equals_energy_density(self, rad, rng):
        # G H = rho + p at the state
        for pair in random_pairs(rng, 20):
            d = S.point_data(rad, pair)
            rho = E.rho_of_potential(rad, d.rho_tilde)
            assert d.G * d.h**2 == pytest.approx(rho + d.p, rel=1e-10)

    def test_derivatives_match_differencing(self, rad, p2, rng):
        for eos in (rad, p2):
            for pair in random_pairs(rng, 10, zeta_range=(-0.6, 0.6)):
                ds = S.stress_derivatives(eos, pair)
                h = 1e-5
                for idx, name in ((0, "tt"), (1, "tr"), (2, "rr")):
                    fd_a = central(
                        lambda a: S.stress(eos, S.RiemannPair(a, pair.beta))[idx],
                        pair.alpha, h,
                    )
                    fd_b = central(
                        lambda b: S.stress(eos, S.RiemannPair(pair.alpha, b))[idx],
                        pair.beta, h,
                    )
                    assert getattr(ds, f"{name}_alpha") == pytest.approx(
                        fd_a, rel=2e-6, abs=1e-9
                    )
                    assert getattr(ds, f"{name}_beta") == pytest.approx(
                        fd_b, rel=2e-6, abs=1e-9
                    )

    def test_flux_locks_to_characteristic_speeds(self, rad, p2, rng):
        # dT^tr = c_plus dT^tt along alpha, c_minus dT^tt along beta
        for eos in (rad, p2):
            for pair in random_pairs(rng, 20):
                ds = S.stress_derivatives(eos, pair)
                cp, cm = S.char_speeds(eos, pair)
                assert ds.tr_alpha == pytest.approx(cp * ds.tt_alpha, rel=1e-12)
                assert ds.tr_beta == pytest.approx(cm * ds.tt_beta, rel=1e-12)

    def test_velocity_and_pressure_derivatives(self, rad, rng):
        for pair in random_pairs(rng, 10, zeta_range=(-0.6, 0.6)):
            h = 1e-5
            v0 = S.velocity(rad, pair)
            fd_va = central(
                lambda a: S.velocity(rad, S.RiemannPair(a, pair.beta)), pair.alpha, h
            )
            fd_vb = central(
                lambda b: S.velocity(rad, S.RiemannPair(pair.alpha, b)), pair.beta, h
            )
            assert fd_va == pytest.approx((1 - v0 * v0) / 2, rel=1e-8, abs=1e-10)
            assert fd_vb == pytest.approx(-(1 - v0 * v0) / 2, rel=1e-8, abs=1e-10)

            dp = S.pressure_derivative(rad, pair)
            fd_pa = central(
                lambda a: S.point_data(rad, S.RiemannPair(a, pair.beta)).p,
                pair.alpha, h,
            )
            fd_pb = central(
                lambda b: S.point_data(rad, S.RiemannPair(pair.alpha, b)).p,
                pair.beta, h,
            )
            assert dp == pytest.approx(fd_pa, rel=1e-6)
            assert dp == pytest.approx(fd_pb, rel=1e-6)
