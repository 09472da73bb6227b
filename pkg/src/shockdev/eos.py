"""Barotropic equation of state and the thermodynamic chart built on it.

A barotropic fluid is described by one function p(rho) with 0 < dp/drho < 1
(subluminal sound speed, units with the light speed equal to one and a unit
particle mass so per-mass and per-particle quantities coincide). Everything
else the solver needs is derived from it:

* squared sound speed        eta^2 = dp/drho
* flow potential             sigma(rho) = sigma_ref exp(int drho' / (rho'+p)),
                             with sigma_ref = (rho_ref + p_ref) / h_ref
* specific enthalpy          h = (rho + p) / sigma, so dh/drho = eta^2/sigma
* enthalpy potential         rho_tilde(h) = int dh' / (eta h'), zero at h_ref
* wave-speed weight          G = sigma / sqrt(H), H = h^2
* stiffness combination      Sigma_tilde = (1 - eta^2) / h^2
* nonlinearity coefficient   mu = d eta / d rho_tilde + 1 - eta^2

The two reference constants (rho_ref, h_ref) fix the free integration
constants of sigma and rho_tilde. Built-in laws (radiation, quadratic
pressure, tabulated) carry closed forms where they exist; otherwise the
generic adaptive-quadrature/bracketing code paths are used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from .errors import OutOfRange

__all__ = [
    "BarotropicEos",
    "radiation",
    "poly2",
    "from_table",
    "sound_speed_sq",
    "pressure",
    "sigma",
    "enthalpy",
    "rho_of_enthalpy",
    "potential_of_rho",
    "riemann_potential",
    "rho_of_potential",
    "enthalpy_of_potential",
    "eta_of_potential",
    "big_g",
    "big_g_of_potential",
    "sigma_tilde",
    "sigma_tilde_slope",
    "mu_coefficient",
    "eos_identity_residual",
]

_QUAD_KW = dict(epsabs=1e-12, epsrel=1e-12, limit=200)
_CHART_NODES = 4097


@dataclass
class BarotropicEos:
    """A barotropic pressure law plus the derived thermodynamic chart.

    Args:
        label: short name used in error messages and reports.
        pressure_fn: p(rho), positive on the admissible range.
        dp_drho_fn: dp/drho, must lie in (0, 1) on the admissible range.
        rho_min, rho_max: admissible density interval.
        rho_ref: reference density where the enthalpy potential vanishes.
        h_ref: specific enthalpy assigned at rho_ref.

    The optional ``*_cf`` callables are closed forms; any left as None falls
    back to adaptive quadrature / bracketed inversion (cached on a fine
    monotone-cubic chart for array evaluation).
    """

    label: str
    pressure_fn: Callable
    dp_drho_fn: Callable
    rho_min: float
    rho_max: float
    rho_ref: float = 1.0
    h_ref: float = 1.0
    sigma_cf: Callable | None = None
    enthalpy_cf: Callable | None = None
    rho_of_enthalpy_cf: Callable | None = None
    potential_of_rho_cf: Callable | None = None
    rho_of_potential_cf: Callable | None = None
    deta_dpotential_cf: Callable | None = None
    _chart: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not (0 < self.rho_min < self.rho_ref < self.rho_max):
            raise OutOfRange(
                f"{self.label}: need 0 < rho_min < rho_ref < rho_max, got "
                f"({self.rho_min}, {self.rho_ref}, {self.rho_max})"
            )
        if self.h_ref <= 0:
            raise OutOfRange(f"{self.label}: h_ref must be positive")
        # Admissibility is asserted on a sampled log grid at construction.
        probe = np.geomspace(self.rho_min, self.rho_max, 65)
        p = np.asarray(self.pressure_fn(probe), dtype=float)
        eta2 = np.asarray(self.dp_drho_fn(probe), dtype=float)
        if np.any(~np.isfinite(p)) or np.any(p <= 0):
            raise OutOfRange(f"{self.label}: pressure must be positive on the range")
        if np.any(~np.isfinite(eta2)) or np.any(eta2 <= 0) or np.any(eta2 >= 1):
            raise OutOfRange(
                f"{self.label}: dp/drho must lie in (0, 1) on the range"
            )

    @property
    def sigma_ref(self) -> float:
        p_ref = float(self.pressure_fn(self.rho_ref))
        return (self.rho_ref + p_ref) / self.h_ref


def _as_float_or_array(x):
    a = np.asarray(x, dtype=float)
    return a, a.ndim == 0


def _check_rho(eos: BarotropicEos, rho):
    a, _ = _as_float_or_array(rho)
    if np.any(~np.isfinite(a)) or np.any(a < eos.rho_min) or np.any(a > eos.rho_max):
        lo = float(np.min(a)) if a.size else math.nan
        hi = float(np.max(a)) if a.size else math.nan
        raise OutOfRange(
            f"{eos.label}: density in [{lo}, {hi}] outside admissible "
            f"[{eos.rho_min}, {eos.rho_max}]"
        )
    return a


# ----------------------------------------------------------------------
# Core chain: eta^2, p, sigma, h, rho_tilde and their inverses.
# ----------------------------------------------------------------------

def sound_speed_sq(eos: BarotropicEos, rho):
    """Squared sound speed eta^2 = dp/drho.

    Raises:
        OutOfRange: if rho leaves the admissible interval or eta^2 leaves
            (0, 1).
    """
    a = _check_rho(eos, rho)
    eta2 = np.asarray(eos.dp_drho_fn(a), dtype=float)
    if np.any(eta2 <= 0) or np.any(eta2 >= 1):
        raise OutOfRange(f"{eos.label}: dp/drho left (0, 1) at rho={rho}")
    return eta2 if eta2.ndim else float(eta2)


def pressure(eos: BarotropicEos, rho):
    """Pressure p(rho)."""
    a = _check_rho(eos, rho)
    p = np.asarray(eos.pressure_fn(a), dtype=float)
    return p if p.ndim else float(p)


def _sigma_exponent_scalar(eos: BarotropicEos, rho: float) -> float:
    val, _ = quad(
        lambda r: 1.0 / (r + eos.pressure_fn(r)), eos.rho_ref, rho, **_QUAD_KW
    )
    return val


def _potential_scalar(eos: BarotropicEos, rho: float) -> float:
    val, _ = quad(
        lambda r: math.sqrt(eos.dp_drho_fn(r)) / (r + eos.pressure_fn(r)),
        eos.rho_ref,
        rho,
        **_QUAD_KW,
    )
    return val


def _ensure_chart(eos: BarotropicEos):
    """Dense monotone chart for the generic (no closed form) code paths.

    The two core integrals are accumulated over log-spaced segments with
    adaptive quadrature per segment, then interpolated monotonically. Used
    only when the instance lacks closed forms and receives array input.
    """
    if eos._chart:
        return eos._chart
    nodes = np.geomspace(eos.rho_min, eos.rho_max, _CHART_NODES)
    # place rho_ref exactly on the chart so the constants are exact there
    k = int(np.searchsorted(nodes, eos.rho_ref))
    nodes = np.unique(np.concatenate([nodes, [eos.rho_ref]]))
    seg_sigma = np.zeros(len(nodes))
    seg_pot = np.zeros(len(nodes))
    for i in range(1, len(nodes)):
        seg_sigma[i], _ = quad(
            lambda r: 1.0 / (r + eos.pressure_fn(r)),
            nodes[i - 1], nodes[i], epsabs=1e-14, epsrel=1e-12,
        )
        seg_pot[i], _ = quad(
            lambda r: math.sqrt(eos.dp_drho_fn(r)) / (r + eos.pressure_fn(r)),
            nodes[i - 1], nodes[i], epsabs=1e-14, epsrel=1e-12,
        )
    cum_sigma = np.cumsum(seg_sigma)
    cum_pot = np.cumsum(seg_pot)
    k = int(np.searchsorted(nodes, eos.rho_ref))
    cum_sigma -= cum_sigma[k]
    cum_pot -= cum_pot[k]
    sig = eos.sigma_ref * np.exp(cum_sigma)
    p = np.asarray(eos.pressure_fn(nodes), dtype=float)
    h = (nodes + p) / sig
    eos._chart = {
        "rho": nodes,
        "sigma": PchipInterpolator(nodes, sig),
        "potential": PchipInterpolator(nodes, cum_pot),
        "rho_of_potential": PchipInterpolator(cum_pot, nodes),
        "h": PchipInterpolator(nodes, h),
        "rho_of_h": PchipInterpolator(h, nodes),
        "potential_range": (cum_pot[0], cum_pot[-1]),
        "h_range": (h[0], h[-1]),
    }
    return eos._chart


def sigma(eos: BarotropicEos, rho):
    """Flow potential sigma(rho), the integrating factor of d(rho)/(rho+p)."""
    a = _check_rho(eos, rho)
    if eos.sigma_cf is not None:
        out = np.asarray(eos.sigma_cf(a), dtype=float)
    elif a.ndim == 0:
        out = np.asarray(
            eos.sigma_ref * math.exp(_sigma_exponent_scalar(eos, float(a)))
        )
    else:
        out = np.asarray(_ensure_chart(eos)["sigma"](a), dtype=float)
    return out if out.ndim else float(out)


def enthalpy(eos: BarotropicEos, rho):
    """Specific enthalpy h = (rho + p)/sigma."""
    a = _check_rho(eos, rho)
    if eos.enthalpy_cf is not None:
        out = np.asarray(eos.enthalpy_cf(a), dtype=float)
    else:
        p = np.asarray(eos.pressure_fn(a), dtype=float)
        out = (a + p) / np.asarray(sigma(eos, a), dtype=float)
    return out if out.ndim else float(out)


def rho_of_enthalpy(eos: BarotropicEos, h):
    """Inverse of enthalpy(rho); h is strictly increasing in rho."""
    a, scalar = _as_float_or_array(h)
    if eos.rho_of_enthalpy_cf is not None:
        out = np.asarray(eos.rho_of_enthalpy_cf(a), dtype=float)
        _check_rho(eos, out)
        return out if out.ndim else float(out)
    if scalar:
        hv = float(a)
        h_lo = enthalpy(eos, eos.rho_min)
        h_hi = enthalpy(eos, eos.rho_max)
        if not (h_lo <= hv <= h_hi):
            raise OutOfRange(
                f"{eos.label}: enthalpy {hv} outside [{h_lo}, {h_hi}]"
            )
        root = brentq(
            lambda r: enthalpy(eos, r) - hv,
            eos.rho_min, eos.rho_max, xtol=1e-15, rtol=8.9e-16,
        )
        return float(root)
    chart = _ensure_chart(eos)
    lo, hi = chart["h_range"]
    if np.any(a < lo) or np.any(a > hi):
        raise OutOfRange(f"{eos.label}: enthalpy outside [{lo}, {hi}]")
    return np.asarray(chart["rho_of_h"](a), dtype=float)


def potential_of_rho(eos: BarotropicEos, rho):
    """Enthalpy potential as a function of density."""
    a = _check_rho(eos, rho)
    if eos.potential_of_rho_cf is not None:
        out = np.asarray(eos.potential_of_rho_cf(a), dtype=float)
    elif a.ndim == 0:
        out = np.asarray(_potential_scalar(eos, float(a)))
    else:
        out = np.asarray(_ensure_chart(eos)["potential"](a), dtype=float)
    return out if out.ndim else float(out)


def riemann_potential(eos: BarotropicEos, h):
    """Enthalpy potential rho_tilde(h) = int_{h_ref}^{h} dh'/(eta(h') h').

    Vanishes at h_ref and is strictly increasing in h.
    """
    rho = rho_of_enthalpy(eos, h)
    return potential_of_rho(eos, rho)


def rho_of_potential(eos: BarotropicEos, rho_tilde):
    """Density at a given enthalpy potential (inverse of potential_of_rho)."""
    a, scalar = _as_float_or_array(rho_tilde)
    if eos.rho_of_potential_cf is not None:
        out = np.asarray(eos.rho_of_potential_cf(a), dtype=float)
        _check_rho(eos, out)
        return out if out.ndim else float(out)
    if scalar:
        pv = float(a)
        lo = potential_of_rho(eos, eos.rho_min)
        hi = potential_of_rho(eos, eos.rho_max)
        if not (lo <= pv <= hi):
            raise OutOfRange(
                f"{eos.label}: potential {pv} outside [{lo}, {hi}]"
            )
        root = brentq(
            lambda r: potential_of_rho(eos, r) - pv,
            eos.rho_min, eos.rho_max, xtol=1e-15, rtol=8.9e-16,
        )
        return float(root)
    chart = _ensure_chart(eos)
    lo, hi = chart["potential_range"]
    if np.any(a < lo) or np.any(a > hi):
        raise OutOfRange(f"{eos.label}: potential outside [{lo}, {hi}]")
    return np.asarray(chart["rho_of_potential"](a), dtype=float)


def enthalpy_of_potential(eos: BarotropicEos, rho_tilde):
    """Specific enthalpy at a given enthalpy potential."""
    return enthalpy(eos, rho_of_potential(eos, rho_tilde))


def eta_of_potential(eos: BarotropicEos, rho_tilde):
    """Sound speed eta at a given enthalpy potential."""
    out = np.sqrt(sound_speed_sq(eos, rho_of_potential(eos, rho_tilde)))
    return out if np.ndim(out) else float(out)


# ----------------------------------------------------------------------
# Wave-speed weight, stiffness combination, nonlinearity coefficient.
# ----------------------------------------------------------------------

def big_g(eos: BarotropicEos, H):
    """Wave-speed weight G = sigma/sqrt(H) at squared enthalpy H = h^2."""
    a, _ = _as_float_or_array(H)
    if np.any(a <= 0):
        raise OutOfRange(f"{eos.label}: H must be positive")
    h = np.sqrt(a)
    rho = rho_of_enthalpy(eos, h)
    out = np.asarray(sigma(eos, rho), dtype=float) / h
    return out if out.ndim else float(out)


def big_g_of_potential(eos: BarotropicEos, rho_tilde):
    """G evaluated at a given enthalpy potential."""
    rho = rho_of_potential(eos, rho_tilde)
    h = np.asarray(enthalpy(eos, rho), dtype=float)
    out = np.asarray(sigma(eos, rho), dtype=float) / h
    return out if out.ndim else float(out)


def sigma_tilde(eos: BarotropicEos, h):
    """Stiffness combination Sigma_tilde = (1 - eta^2)/h^2."""
    rho = rho_of_enthalpy(eos, h)
    eta2 = np.asarray(sound_speed_sq(eos, rho), dtype=float)
    out = (1.0 - eta2) / np.square(np.asarray(h, dtype=float))
    return out if out.ndim else float(out)


def sigma_tilde_slope(eos: BarotropicEos, h, step_rel: float = 1e-4):
    """d Sigma_tilde / dh by symmetric differencing (used in identities)."""
    hv = float(h)
    d = step_rel * hv
    return (sigma_tilde(eos, hv + d) - sigma_tilde(eos, hv - d)) / (2.0 * d)


def mu_coefficient(eos: BarotropicEos, rho_tilde):
    """Nonlinearity coefficient mu = d eta/d rho_tilde + 1 - eta^2.

    Positive mu is what makes compression steepen into a shock; the solver
    requires it at the cusp state.
    """
    a, _ = _as_float_or_array(rho_tilde)
    eta2 = np.square(np.asarray(eta_of_potential(eos, a), dtype=float))
    if eos.deta_dpotential_cf is not None:
        slope = np.asarray(eos.deta_dpotential_cf(a), dtype=float)
    else:
        # symmetric 4th-order difference of eta along the potential
        d = 1e-4 * (1.0 + np.abs(a))
        em2 = np.asarray(eta_of_potential(eos, a - 2 * d), dtype=float)
        em1 = np.asarray(eta_of_potential(eos, a - d), dtype=float)
        ep1 = np.asarray(eta_of_potential(eos, a + d), dtype=float)
        ep2 = np.asarray(eta_of_potential(eos, a + 2 * d), dtype=float)
        slope = (em2 - 8 * em1 + 8 * ep1 - ep2) / (12 * d)
    out = slope + 1.0 - eta2
    return out if out.ndim else float(out)


def eos_identity_residual(eos: BarotropicEos, rho, step_rel: float = 1e-3):
    """Both sides of the thermodynamic consistency identity.

    With v = 1/sigma viewed as a function of pressure along the barotrope,
    the identity reads

        3 v dv/dp + h d2v/dp2  ==  -(v^3 h^2 / eta^4) dSigma_tilde/dh.

    Returns:
        (lhs, rhs) evaluated with symmetric differencing in p and h.
    """
    rho0 = float(rho)
    _check_rho(eos, rho0)
    p0 = pressure(eos, rho0)
    dp = step_rel * p0

    def v_of_p(pv: float) -> float:
        r = brentq(
            lambda r_: eos.pressure_fn(r_) - pv,
            eos.rho_min, eos.rho_max, xtol=1e-15, rtol=8.9e-16,
        )
        return 1.0 / sigma(eos, r)

    vm, v0, vp = v_of_p(p0 - dp), v_of_p(p0), v_of_p(p0 + dp)
    dv_dp = (vp - vm) / (2 * dp)
    d2v_dp2 = (vp - 2 * v0 + vm) / dp**2
    h0 = enthalpy(eos, rho0)
    eta2 = sound_speed_sq(eos, rho0)
    lhs = 3 * v0 * dv_dp + h0 * d2v_dp2
    rhs = -(v0**3 * h0**2 / eta2**2) * sigma_tilde_slope(eos, h0)
    return lhs, rhs


# ----------------------------------------------------------------------
# Built-in pressure laws.
# ----------------------------------------------------------------------

def radiation(
    rho_ref: float = 1.0,
    h_ref: float = 1.0,
    rho_min: float = 1e-6,
    rho_max: float = 1e6,
) -> BarotropicEos:
    """Pure radiation: p = rho/3, constant eta^2 = 1/3.

    Closed chain (with x = rho/rho_ref):
        sigma = sigma_ref x^(3/4),  h = h_ref x^(1/4),
        rho_tilde = sqrt(3) log(h/h_ref),  mu = 2/3.
    """
    sqrt3 = math.sqrt(3.0)
    sigma_ref = (rho_ref + rho_ref / 3.0) / h_ref

    return BarotropicEos(
        label="radiation",
        pressure_fn=lambda r: r / 3.0,
        dp_drho_fn=lambda r: np.full_like(np.asarray(r, dtype=float), 1.0 / 3.0)
        if np.ndim(r)
        else 1.0 / 3.0,
        rho_min=rho_min,
        rho_max=rho_max,
        rho_ref=rho_ref,
        h_ref=h_ref,
        sigma_cf=lambda r: sigma_ref * (np.asarray(r, dtype=float) / rho_ref) ** 0.75,
        enthalpy_cf=lambda r: h_ref * (np.asarray(r, dtype=float) / rho_ref) ** 0.25,
        rho_of_enthalpy_cf=lambda h: rho_ref * (np.asarray(h, dtype=float) / h_ref) ** 4,
        potential_of_rho_cf=lambda r: (sqrt3 / 4.0)
        * np.log(np.asarray(r, dtype=float) / rho_ref),
        rho_of_potential_cf=lambda pt: rho_ref
        * np.exp(4.0 * np.asarray(pt, dtype=float) / sqrt3),
        deta_dpotential_cf=lambda pt: np.zeros_like(np.asarray(pt, dtype=float))
        if np.ndim(pt)
        else 0.0,
    )


def poly2(
    k: float,
    rho_ref: float = 1.0,
    h_ref: float = 1.0,
    rho_min: float = 1e-6,
    rho_max: float | None = None,
) -> BarotropicEos:
    """Quadratic pressure law p = k rho^2 with eta^2 = 2 k rho.

    Admissible while 2 k rho < 1; the default upper bound stops just short.
    Closed chain with C = (1 + k rho_ref)^2 / h_ref:
        sigma = C rho / (1 + k rho),   h = (1 + k rho)^2 / C,
        rho_tilde = 2 sqrt(2) [atan(eta/sqrt2) - atan(eta_ref/sqrt2)],
        d eta/d rho_tilde = 1/2 + eta^2/4,  mu = 3/2 - (3/4) eta^2.
    """
    if k <= 0:
        raise OutOfRange("poly2: k must be positive")
    if rho_max is None:
        rho_max = 0.999 / (2.0 * k)
    C = (1.0 + k * rho_ref) ** 2 / h_ref
    sqrt2 = math.sqrt(2.0)
    eta_ref = math.sqrt(2.0 * k * rho_ref)
    atan_ref = math.atan(eta_ref / sqrt2)

    def rho_of_h(h):
        ha = np.asarray(h, dtype=float)
        return (np.sqrt(ha * C) - 1.0) / k

    def pot_of_rho(r):
        eta = np.sqrt(2.0 * k * np.asarray(r, dtype=float))
        return 2.0 * sqrt2 * (np.arctan(eta / sqrt2) - atan_ref)

    def rho_of_pot(pt):
        ang = atan_ref + np.asarray(pt, dtype=float) / (2.0 * sqrt2)
        eta = sqrt2 * np.tan(ang)
        return np.square(eta) / (2.0 * k)

    def deta_dpot(pt):
        ang = atan_ref + np.asarray(pt, dtype=float) / (2.0 * sqrt2)
        eta2 = 2.0 * np.square(np.tan(ang))
        return 0.5 + eta2 / 4.0

    return BarotropicEos(
        label="poly2",
        pressure_fn=lambda r: k * np.square(np.asarray(r, dtype=float))
        if np.ndim(r)
        else k * r * r,
        dp_drho_fn=lambda r: 2.0 * k * np.asarray(r, dtype=float)
        if np.ndim(r)
        else 2.0 * k * r,
        rho_min=rho_min,
        rho_max=rho_max,
        rho_ref=rho_ref,
        h_ref=h_ref,
        sigma_cf=lambda r: C * np.asarray(r, dtype=float)
        / (1.0 + k * np.asarray(r, dtype=float)),
        enthalpy_cf=lambda r: np.square(1.0 + k * np.asarray(r, dtype=float)) / C,
        rho_of_enthalpy_cf=rho_of_h,
        potential_of_rho_cf=pot_of_rho,
        rho_of_potential_cf=rho_of_pot,
        deta_dpotential_cf=deta_dpot,
    )


def from_table(
    table,
    rho_ref: float | None = None,
    h_ref: float = 1.0,
    label: str = "table",
) -> BarotropicEos:
    """Tabulated barotrope from a two-column (rho, p) table.

    Args:
        table: path to a two-column text file (whitespace or comma
            separated), or an (N, 2) array.
        rho_ref: reference density; defaults to the middle table node.
        h_ref: enthalpy assigned at rho_ref.

    The pressure is interpolated with a monotone cubic, so dp/drho inherits
    the table's monotonicity. Admissibility (p > 0, dp/drho in (0, 1)) is
    checked on the nodes and midpoints.
    """
    if isinstance(table, (str, bytes)) or hasattr(table, "__fspath__"):
        try:
            data = np.loadtxt(table)
        except ValueError:
            data = np.loadtxt(table, delimiter=",")
    else:
        data = np.asarray(table, dtype=float)
    if data.ndim != 2 or data.shape[1] != 2 or data.shape[0] < 4:
        raise OutOfRange(f"{label}: need an (N >= 4, 2) table of (rho, p)")
    rho, p = data[:, 0], data[:, 1]
    if np.any(np.diff(rho) <= 0):
        raise OutOfRange(f"{label}: table densities must be strictly increasing")
    if np.any(p <= 0):
        raise OutOfRange(f"{label}: table pressures must be positive")
    interp = PchipInterpolator(rho, p)
    dinterp = interp.derivative()
    mid = 0.5 * (rho[:-1] + rho[1:])
    slopes = dinterp(np.concatenate([rho, mid]))
    if np.any(slopes <= 0) or np.any(slopes >= 1):
        raise OutOfRange(f"{label}: table dp/drho must lie in (0, 1)")
    if rho_ref is None:
        rho_ref = float(rho[len(rho) // 2])
    return BarotropicEos(
        label=label,
        pressure_fn=interp,
        dp_drho_fn=dinterp,
        rho_min=float(rho[0]),
        rho_max=float(rho[-1]),
        rho_ref=float(rho_ref),
        h_ref=h_ref,
    )
