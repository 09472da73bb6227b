"""Fluid states from invariant pairs: speeds, ordering, stress tensor.

A state is a pair of wave invariants (alpha, beta). This demo shows the
velocity and characteristic speeds they induce, verifies the ordering
c- < v < c+ and subluminality on a random sample, and compares the
closed-form stress derivatives against finite differences.
"""

import numpy as np

import shockdev
from shockdev.state import RiemannPair, char_speeds, stress, stress_derivatives, velocity


def main():
    eos = shockdev.radiation()

    print("state table (alpha = outgoing, beta = incoming invariant):")
    print(f"{'alpha':>8} {'beta':>8} {'v':>10} {'c-':>10} {'c+':>10}")
    for a, b in [(0.0, 0.0), (0.3, 0.1), (-0.2, 0.4), (0.5, -0.5)]:
        s = RiemannPair(a, b)
        cp, cm = char_speeds(eos, s)
        print(f"{a:>8.2f} {b:>8.2f} {velocity(eos, s):>10.6f} {cm:>10.6f} {cp:>10.6f}")

    rng = np.random.default_rng(7)
    gap = np.inf
    for _ in range(200):
        s = RiemannPair(*rng.uniform(-0.6, 0.6, size=2))
        cp, cm = char_speeds(eos, s)
        vf = velocity(eos, s)
        assert abs(cp) < 1 and abs(cm) < 1, "superluminal speed"
        gap = min(gap, cp - vf, vf - cm)
    print(f"\nordering c- < v < c+ on 200 random states; min gap {gap:.4f}")

    s = RiemannPair(0.25, -0.1)
    d = stress_derivatives(eos, s)
    step = 1e-6
    worst = 0.0
    for comp in ("tt", "tr", "rr"):
        fd_a = (getattr(stress(eos, RiemannPair(s.alpha + step, s.beta)), comp)
                - getattr(stress(eos, RiemannPair(s.alpha - step, s.beta)), comp)) / (2 * step)
        worst = max(worst, abs(fd_a - getattr(d, f"{comp}_alpha")))
    print(f"closed-form stress derivatives vs finite differences: "
          f"worst defect {worst:.3e}")


if __name__ == "__main__":
    main()
