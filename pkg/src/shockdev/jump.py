"""Shock jump conditions between two Riemann states.

A shock connects an ahead state (the side the front runs into) to a behind
state. Conservation of energy and momentum across the front requires

    -[T^tt] V + [T^tr] = 0,      -[T^tr] V + [T^rr] = 0,

with [X] = X(behind) - X(ahead) and V the front speed. Eliminating V gives
the scalar jump function

    J = [T^tt][T^rr] - [T^tr]^2,

whose zero set is the shock locus. At coincidence J is quartically
degenerate in the behind alpha: the first three pure alpha derivatives
vanish, the mixed second derivative equals (rho+p)^2, and the fourth pure
derivative equals (rho+p)^2 mu^2/(8 eta^2). Consequently the behind beta on
the physical branch follows the cubic law

    beta_behind - beta_ahead ~ G0 (alpha_behind - alpha_ahead)^3,
    G0 = -mu^2 / (192 eta^2),

which seeds the Newton solve here.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from . import eos as eos_mod
from . import fitting
from .errors import DegenerateJump, NoRoot, OutOfRange
from .state import (
    RiemannPair,
    StressComponents,
    char_speeds,
    point_data,
    stress,
    stress_derivatives,
)

__all__ = [
    "JumpPair",
    "stress_jump",
    "jump_J",
    "jump_scale",
    "cubic_coefficient",
    "solve_jump_beta",
    "shock_speed",
    "jump_balance_residuals",
    "determinism_margin",
    "entropy_q",
    "hugoniot_residual",
    "coincidence_structure",
]


class JumpPair(NamedTuple):
    """Ahead/behind Riemann states across a front."""

    ahead: RiemannPair
    behind: RiemannPair


_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(8)
_GAUSS_S = 0.5 * (_GAUSS_X + 1.0)
_GAUSS_W01 = 0.5 * _GAUSS_W


def stress_jump(eos: eos_mod.BarotropicEos, jp: JumpPair) -> StressComponents:
    """Stress jumps [T] = T(behind) - T(ahead), to relative accuracy.

    Direct subtraction of the O(1) stress components leaves absolute
    rounding of order ulp(T), which downstream divisions by powers of the
    front strength amplify beyond any useful tolerance near coincidence.
    Integrating the closed-form stress derivatives along the straight
    segment between the states keeps every term proportional to the jump,
    so only relative rounding remains.  The fixed 8-point Gauss-Legendre
    rule is exact to machine precision for admissible front strengths
    (the integrand is analytic with O(1) variation scale, so the defect
    is of 16th order in the strength).
    """
    da = jp.behind.alpha - jp.ahead.alpha
    db = jp.behind.beta - jp.ahead.beta
    dtt = dtr = drr = 0.0
    for s, w in zip(_GAUSS_S, _GAUSS_W01):
        d = stress_derivatives(
            eos, RiemannPair(jp.ahead.alpha + s * da, jp.ahead.beta + s * db)
        )
        dtt += w * (d.tt_alpha * da + d.tt_beta * db)
        dtr += w * (d.tr_alpha * da + d.tr_beta * db)
        drr += w * (d.rr_alpha * da + d.rr_beta * db)
    return StressComponents(dtt, dtr, drr)


def jump_J(eos: eos_mod.BarotropicEos, jp: JumpPair) -> float:
    """Scalar jump function J = [T^tt][T^rr] - [T^tr]^2."""
    dT = stress_jump(eos, jp)
    return dT.tt * dT.rr - dT.tr**2


def jump_scale(eos: eos_mod.BarotropicEos, state: RiemannPair) -> float:
    """Natural size of J: (rho + p)^2 at the given state."""
    d = point_data(eos, state)
    return (d.G * d.h**2) ** 2


def cubic_coefficient(eos: eos_mod.BarotropicEos, state: RiemannPair) -> float:
    """Leading coefficient G0 = -mu^2/(192 eta^2) of the cubic jump law."""
    d = point_data(eos, state)
    mu = eos_mod.mu_coefficient(eos, d.rho_tilde)
    return -(mu**2) / (192.0 * d.eta2)


def _dJ_dbeta_behind(eos: eos_mod.BarotropicEos, jp: JumpPair) -> float:
    dT = stress_jump(eos, jp)
    db = stress_derivatives(eos, jp.behind)
    return db.tt_beta * dT.rr + dT.tt * db.rr_beta - 2.0 * dT.tr * db.tr_beta


def solve_jump_beta(
    eos: eos_mod.BarotropicEos,
    alpha_plus: float,
    ahead: RiemannPair,
    dalpha_cap: float = 0.5,
    j_tol_rel: float = 1e-13,
    max_expand: int = 4,
) -> float:
    """Behind beta on the physical branch of J = 0 at a given behind alpha.

    Seeds with the cubic law, brackets around the seed with width
    8 |G0 dalpha^3| + 1e-14 (doubled up to ``max_expand`` times if needed),
    and runs safeguarded Newton to |J| < j_tol_rel * (rho+p)^2, then
    polishes to a machine-precision root.

    Raises:
        OutOfRange: |alpha_plus - ahead.alpha| exceeds dalpha_cap.
        NoRoot: no sign change after all bracket expansions.
    """
    dalpha = alpha_plus - ahead.alpha
    if abs(dalpha) > dalpha_cap:
        raise OutOfRange(
            f"jump in alpha {dalpha} exceeds the configured cap {dalpha_cap}"
        )
    if dalpha == 0.0:
        return ahead.beta

    g0 = cubic_coefficient(eos, ahead)
    seed = ahead.beta + g0 * dalpha**3
    width = 8.0 * abs(g0 * dalpha**3) + 1e-14
    scale = jump_scale(eos, ahead)

    def f(b: float) -> float:
        return jump_J(eos, JumpPair(ahead, RiemannPair(alpha_plus, b)))

    def df(b: float) -> float:
        return _dJ_dbeta_behind(eos, JumpPair(ahead, RiemannPair(alpha_plus, b)))

    lo, hi = seed - width, seed + width
    for _ in range(max_expand + 1):
        if f(lo) * f(hi) <= 0:
            break
        width *= 2.0
        lo, hi = seed - width, seed + width
    else:
        raise NoRoot(
            f"no sign change of J around the cubic seed after {max_expand} expansions"
        )
    return fitting.safeguarded_newton(
        f, df, seed, lo, hi, f_tol=j_tol_rel * scale, polish=8
    )


def shock_speed(eos: eos_mod.BarotropicEos, jp: JumpPair) -> float:
    """Front speed V = [T^tr]/[T^tt].

    Raises:
        DegenerateJump: the states (nearly) coincide and V is 0/0.
    """
    dT = stress_jump(eos, jp)
    if abs(dT.tt) <= 2e-14 * abs(stress(eos, jp.ahead).tt):
        raise DegenerateJump("states coincide; front speed is indeterminate")
    return dT.tr / dT.tt


def jump_balance_residuals(eos: eos_mod.BarotropicEos, jp: JumpPair):
    """Residuals of both conservation conditions at V = [T^tr]/[T^tt].

    Returns:
        (-[T^tt] V + [T^tr], -[T^tr] V + [T^rr]); the first vanishes by
        construction, the second vanishes iff J = 0.
    """
    dT = stress_jump(eos, jp)
    V = shock_speed(eos, jp)
    return -dT.tt * V + dT.tr, -dT.tr * V + dT.rr


def entropy_q(eos: eos_mod.BarotropicEos, state: RiemannPair) -> float:
    """Steepness functional q = (1/eta^2 - 1)/sigma^2 (decreases across

    a physical front).
    """
    d = point_data(eos, state)
    return (1.0 / d.eta2 - 1.0) / d.sigma**2


def determinism_margin(eos: eos_mod.BarotropicEos, jp: JumpPair):
    """Margins that make the front deterministic.

    Returns:
        (m_ahead, m_behind):
        m_ahead  = [eta sigma / sqrt(1 - eta^2)] (behind minus ahead);
                   positive exactly when the behind state is the denser one.
        m_behind = c_plus(behind) - V, the subsonic margin of the front as
                   seen from behind.
        Coincident states return (0.0, 0.0).
    """

    def val(state):
        d = point_data(eos, state)
        return d.eta * d.sigma / math.sqrt(1.0 - d.eta2)

    if jp.ahead == jp.behind:
        return 0.0, 0.0
    m_ahead = val(jp.behind) - val(jp.ahead)
    try:
        V = shock_speed(eos, jp)
    except DegenerateJump:
        return 0.0, 0.0
    cp_behind, _ = char_speeds(eos, jp.behind)
    return m_ahead, cp_behind - V


def hugoniot_residual(eos: eos_mod.BarotropicEos, jp: JumpPair) -> float:
    """Taub-adiabat mismatch h+^2 - h-^2 - (p+ - p-)(h+/sigma+ + h-/sigma-).

    Zero at coincidence and of cubic order in the jump strength along the
    J = 0 branch (the flow potential is not exactly conserved across a
    front; its production enters at third order).
    """
    da = point_data(eos, jp.ahead)
    db = point_data(eos, jp.behind)
    return (
        db.h**2
        - da.h**2
        - (db.p - da.p) * (db.h / db.sigma + da.h / da.sigma)
    )


def coincidence_structure(
    eos: eos_mod.BarotropicEos,
    state: RiemannPair,
    step: float = 1e-2,
    refine: bool = True,
) -> dict:
    """Derivative structure of J at a coincident pair, by 4th-order stencils.

    Returns:
        dict with the first four pure behind-alpha derivatives ("d1".."d4")
        and the mixed behind-(alpha, beta) second derivative ("mixed"),
        Richardson-refined over steps (step, step/2) when ``refine``.
    """

    def J_of(da: float, db: float = 0.0) -> float:
        behind = RiemannPair(state.alpha + da, state.beta + db)
        return jump_J(eos, JumpPair(state, behind))

    def all_at(h: float) -> dict:
        out = {
            f"d{k}": fitting.derivative(lambda a: J_of(a), 0.0, order=k, step=h)
            for k in (1, 2, 3, 4)
        }
        out["mixed"] = fitting.mixed_second(J_of, 0.0, 0.0, h, h)
        return out

    coarse = all_at(step)
    if not refine:
        return coarse
    fine = all_at(step / 2)
    return {k: fitting.richardson(coarse[k], fine[k], order=4) for k in coarse}
