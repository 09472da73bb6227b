"""Fluid state algebra in Riemann-invariant coordinates.

A smooth spherically symmetric flow is described pointwise by the pair of
Riemann invariants (alpha, beta). They encode the enthalpy potential and the
boost angle of the fluid:

    rho_tilde = (alpha + beta) / 2      (thermodynamic state)
    zeta      = (beta - alpha) / 2      (rapidity; velocity v = -tanh zeta)

The wave-field components are psi_t = h cosh zeta, psi_r = h sinh zeta (h the
specific enthalpy), so v = -psi_r/psi_t. Characteristic speeds, the source
terms of the characteristic equations, and the stress components with their
alpha/beta derivatives are all evaluated here from (alpha, beta) and the
equation of state.
"""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from . import eos as eos_mod
from .errors import OutOfRange

__all__ = [
    "RiemannPair",
    "FluidState",
    "PointData",
    "StressComponents",
    "StressDerivatives",
    "riemann_from_state",
    "state_from_riemann",
    "point_data",
    "char_speeds",
    "char_speed_derivatives",
    "source_terms",
    "source_terms_wavefield_form",
    "stress",
    "stress_derivatives",
    "velocity",
    "pressure_derivative",
]


class RiemannPair(NamedTuple):
    """Riemann invariants (alpha, beta); scalars or same-shape arrays."""

    alpha: float
    beta: float


class FluidState(NamedTuple):
    """Wave-field components (psi_t, psi_r) with psi_t > |psi_r|."""

    psi_t: float
    psi_r: float


class PointData(NamedTuple):
    """Everything the solvers need at one state."""

    rho_tilde: float
    zeta: float
    v: float
    eta: float
    eta2: float
    h: float
    sigma: float
    G: float
    p: float
    energy_flux_weight: float  # E = G psi_t^2 = (rho + p)/(1 - v^2)


class StressComponents(NamedTuple):
    tt: float
    tr: float
    rr: float


class StressDerivatives(NamedTuple):
    tt_alpha: float
    tr_alpha: float
    rr_alpha: float
    tt_beta: float
    tr_beta: float
    rr_beta: float


def riemann_from_state(eos: eos_mod.BarotropicEos, state: FluidState) -> RiemannPair:
    """Invert the wave-field components into Riemann invariants.

    Raises:
        ValueError: if psi_t <= |psi_r| (no physical rest frame).
        OutOfRange: if the implied enthalpy leaves the admissible range.
    """
    psi_t = np.asarray(state.psi_t, dtype=float)
    psi_r = np.asarray(state.psi_r, dtype=float)
    if np.any(psi_t <= np.abs(psi_r)):
        raise ValueError("wave field requires psi_t > |psi_r|")
    h = np.sqrt(psi_t**2 - psi_r**2)
    zeta = np.arctanh(psi_r / psi_t)
    rho_tilde = eos_mod.riemann_potential(eos, h if h.ndim else float(h))
    alpha = rho_tilde - zeta
    beta = rho_tilde + zeta
    if np.ndim(alpha):
        return RiemannPair(np.asarray(alpha), np.asarray(beta))
    return RiemannPair(float(alpha), float(beta))


def state_from_riemann(eos: eos_mod.BarotropicEos, pair: RiemannPair) -> FluidState:
    """Wave-field components at a Riemann pair."""
    alpha = np.asarray(pair.alpha, dtype=float)
    beta = np.asarray(pair.beta, dtype=float)
    rho_tilde = 0.5 * (alpha + beta)
    zeta = 0.5 * (beta - alpha)
    h = np.asarray(
        eos_mod.enthalpy_of_potential(
            eos, rho_tilde if rho_tilde.ndim else float(rho_tilde)
        ),
        dtype=float,
    )
    psi_t = h * np.cosh(zeta)
    psi_r = h * np.sinh(zeta)
    if psi_t.ndim:
        return FluidState(np.asarray(psi_t), np.asarray(psi_r))
    return FluidState(float(psi_t), float(psi_r))


def point_data(eos: eos_mod.BarotropicEos, pair: RiemannPair) -> PointData:
    """Evaluate the full state bundle at a Riemann pair."""
    alpha = np.asarray(pair.alpha, dtype=float)
    beta = np.asarray(pair.beta, dtype=float)
    rho_tilde = 0.5 * (alpha + beta)
    zeta = 0.5 * (beta - alpha)
    rt_arg = rho_tilde if rho_tilde.ndim else float(rho_tilde)
    rho = eos_mod.rho_of_potential(eos, rt_arg)
    rho_a = np.asarray(rho, dtype=float)
    h = np.asarray(eos_mod.enthalpy(eos, rho), dtype=float)
    sig = np.asarray(eos_mod.sigma(eos, rho), dtype=float)
    eta2 = np.asarray(eos_mod.sound_speed_sq(eos, rho), dtype=float)
    eta = np.sqrt(eta2)
    v = -np.tanh(zeta)
    G = sig / h
    p = np.asarray(eos_mod.pressure(eos, rho), dtype=float)
    E = (rho_a + p) / (1.0 - v**2)
    out = PointData(rho_tilde, zeta, v, eta, eta2, h, sig, G, p, E)
    if np.ndim(rho_tilde):
        return out
    return PointData(*(float(x) for x in out))


def velocity(eos: eos_mod.BarotropicEos, pair: RiemannPair):
    """Fluid velocity v = -tanh((beta - alpha)/2)."""
    alpha = np.asarray(pair.alpha, dtype=float)
    beta = np.asarray(pair.beta, dtype=float)
    out = -np.tanh(0.5 * (beta - alpha))
    return out if out.ndim else float(out)


def char_speeds(eos: eos_mod.BarotropicEos, pair: RiemannPair):
    """Characteristic speeds c_pm = (v +- eta)/(1 +- v eta).

    Returns:
        (c_plus, c_minus), each strictly inside (-1, 1).
    """
    d = point_data(eos, pair)
    c_plus = (d.v + d.eta) / (1.0 + d.v * d.eta)
    c_minus = (d.v - d.eta) / (1.0 - d.v * d.eta)
    if np.ndim(c_plus):
        return c_plus, c_minus
    return float(c_plus), float(c_minus)


def char_speed_derivatives(eos: eos_mod.BarotropicEos, pair: RiemannPair):
    """Partial derivatives of (c_plus, c_minus) in (alpha, beta).

    With mu = d eta/d rho_tilde + 1 - eta^2 and s = d eta/d rho_tilde:

        dc+/dalpha = (1-v^2) mu / (2 (1+v eta)^2)
        dc+/dbeta  = (1-v^2) (s - (1-eta^2)) / (2 (1+v eta)^2)
        dc-/dalpha = (1-v^2) ((1-eta^2) - s) / (2 (1-v eta)^2)
        dc-/dbeta  = -(1-v^2) mu / (2 (1-v eta)^2)

    Returns:
        dict with keys "pa", "pb", "ma", "mb".
    """
    d = point_data(eos, pair)
    mu = np.asarray(eos_mod.mu_coefficient(eos, d.rho_tilde), dtype=float)
    s = mu - (1.0 - d.eta2)
    one_m_v2 = 1.0 - np.asarray(d.v) ** 2
    plus_den = 2.0 * (1.0 + np.asarray(d.v) * d.eta) ** 2
    minus_den = 2.0 * (1.0 - np.asarray(d.v) * d.eta) ** 2
    out = {
        "pa": one_m_v2 * mu / plus_den,
        "pb": one_m_v2 * (s - (1.0 - d.eta2)) / plus_den,
        "ma": one_m_v2 * ((1.0 - d.eta2) - s) / minus_den,
        "mb": -one_m_v2 * mu / minus_den,
    }
    if np.ndim(out["pa"]) == 0:
        out = {k: float(v) for k, v in out.items()}
    return out


def source_terms(eos: eos_mod.BarotropicEos, pair: RiemannPair, r):
    """Spherical source terms of the characteristic equations.

    d alpha along the outgoing family and d beta along the incoming family
    pick up A = -2 v eta / (r (1 + v eta)) and B = -2 v eta / (r (1 - v eta)).

    Returns:
        (A, B).
    """
    d = point_data(eos, pair)
    r_a = np.asarray(r, dtype=float)
    if np.any(r_a <= 0):
        raise OutOfRange("source terms need r > 0")
    common = -2.0 * np.asarray(d.v) * d.eta / r_a
    A = common / (1.0 + np.asarray(d.v) * d.eta)
    B = common / (1.0 - np.asarray(d.v) * d.eta)
    if np.ndim(A):
        return A, B
    return float(A), float(B)


def source_terms_wavefield_form(eos: eos_mod.BarotropicEos, pair: RiemannPair, r):
    """Source terms evaluated through the wave-field components.

    Independent algebraic route used for cross-checking: with
    F = (1/eta^2 - 1)/H, H_hat = (1 + F psi_t^2) H,

        A = (2 psi_r / (r H_hat)) (psi_t/eta + psi_r)
        B = (2 psi_r / (r H_hat)) (psi_t/eta - psi_r)
    """
    d = point_data(eos, pair)
    st = state_from_riemann(eos, pair)
    psi_t = np.asarray(st.psi_t, dtype=float)
    psi_r = np.asarray(st.psi_r, dtype=float)
    H = np.asarray(d.h, dtype=float) ** 2
    F = (1.0 / np.asarray(d.eta2) - 1.0) / H
    H_hat = (1.0 + F * psi_t**2) * H
    r_a = np.asarray(r, dtype=float)
    pref = 2.0 * psi_r / (r_a * H_hat)
    A = pref * (psi_t / np.asarray(d.eta) + psi_r)
    B = pref * (psi_t / np.asarray(d.eta) - psi_r)
    if np.ndim(A):
        return A, B
    return float(A), float(B)


def stress(eos: eos_mod.BarotropicEos, pair: RiemannPair) -> StressComponents:
    """Stress components of the perfect fluid.

    With E = (rho + p)/(1 - v^2):
        T^tt = E - p,   T^tr = E v,   T^rr = E v^2 + p.
    """
    d = point_data(eos, pair)
    E = np.asarray(d.energy_flux_weight, dtype=float)
    v = np.asarray(d.v, dtype=float)
    p = np.asarray(d.p, dtype=float)
    tt = E - p
    tr = E * v
    rr = E * v**2 + p
    if np.ndim(tt):
        return StressComponents(tt, tr, rr)
    return StressComponents(float(tt), float(tr), float(rr))


def stress_derivatives(eos: eos_mod.BarotropicEos, pair: RiemannPair) -> StressDerivatives:
    """Closed-form alpha/beta derivatives of the stress components.

    With w = E/(2 eta):
        dT^tt/dalpha = w (1 + v eta)^2     dT^tt/dbeta = w (1 - v eta)^2
        dT^tr/dalpha = w (v + eta)(1+v eta) dT^tr/dbeta = w (v - eta)(1-v eta)
        dT^rr/dalpha = w (v + eta)^2       dT^rr/dbeta = w (v - eta)^2

    These encode d T^tr = c_pm d T^tt along each family.
    """
    d = point_data(eos, pair)
    E = np.asarray(d.energy_flux_weight, dtype=float)
    v = np.asarray(d.v, dtype=float)
    eta = np.asarray(d.eta, dtype=float)
    w = E / (2.0 * eta)
    out = StressDerivatives(
        tt_alpha=w * (1.0 + v * eta) ** 2,
        tr_alpha=w * (v + eta) * (1.0 + v * eta),
        rr_alpha=w * (v + eta) ** 2,
        tt_beta=w * (1.0 - v * eta) ** 2,
        tr_beta=w * (v - eta) * (1.0 - v * eta),
        rr_beta=w * (v - eta) ** 2,
    )
    if np.ndim(out.tt_alpha) == 0:
        return StressDerivatives(*(float(x) for x in out))
    return out


def pressure_derivative(eos: eos_mod.BarotropicEos, pair: RiemannPair):
    """dp/dalpha = dp/dbeta = E eta (1 - v^2)/2 at a Riemann pair."""
    d = point_data(eos, pair)
    out = (
        np.asarray(d.energy_flux_weight, dtype=float)
        * np.asarray(d.eta, dtype=float)
        * (1.0 - np.asarray(d.v, dtype=float) ** 2)
        / 2.0
    )
    return out if np.ndim(out) else float(out)
