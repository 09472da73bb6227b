"""Equation-of-state chain: pressure law, sound speed, wave potentials.

Walks the barotropic thermodynamic chain for the two built-in pressure
laws and checks, numerically, the self-consistency identity that ties
the fluid velocity, the enthalpy, and the sound-speed profile together.
"""

import numpy as np

import shockdev
from shockdev import eos as eos_mod


def describe(eos, rhos):
    print(f"-- {eos.label} --")
    print(f"{'rho':>8} {'p':>12} {'eta^2':>10} {'h':>10} {'rho~':>10} {'mu':>10}")
    for rho in rhos:
        p = eos_mod.pressure(eos, rho)
        eta2 = eos_mod.sound_speed_sq(eos, rho)
        h = eos_mod.enthalpy(eos, rho)
        rt = eos_mod.potential_of_rho(eos, rho)
        mu = eos_mod.mu_coefficient(eos, rt)
        print(f"{rho:>8.3f} {p:>12.6f} {eta2:>10.6f} {h:>10.6f} {rt:>10.6f} {mu:>10.6f}")

    # Round-trip through the wave potential and back.
    rho = rhos[len(rhos) // 2]
    rt = eos_mod.potential_of_rho(eos, rho)
    back = eos_mod.rho_of_potential(eos, rt)
    print(f"potential round trip at rho={rho}: |back - rho| = {abs(back - rho):.3e}")

    # The finite-difference self-consistency identity along the chain.
    worst = 0.0
    for rho in rhos:
        lhs, rhs = eos_mod.eos_identity_residual(eos, rho)
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs)))
    print(f"chain identity, worst relative defect: {worst:.3e}")
    print()


def main():
    rhos = np.linspace(0.4, 2.5, 6)

    rad = shockdev.radiation()
    describe(rad, rhos)
    eta2 = [eos_mod.sound_speed_sq(rad, r) for r in rhos]
    print(f"radiation sound speed squared is exactly 1/3: "
          f"max defect {max(abs(e - 1 / 3) for e in eta2):.2e}")
    gh = [eos_mod.big_g(rad, h) / h for h in np.linspace(0.5, 2.0, 5)]
    print(f"radiation wave-speed weight G/H = 4/3: "
          f"max defect {max(abs(x - 4 / 3) for x in gh):.2e}")
    print()

    describe(shockdev.poly2(0.1), rhos)


if __name__ == "__main__":
    main()
