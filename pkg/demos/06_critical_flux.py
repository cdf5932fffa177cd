"""Shoot for the critical decay rate of the flux-driven profile.

For m > 1 the critical grow-up rate comes from a one-parameter shooting
problem: profiles F with F(0) = A and flux -(F^m)'(0) = K A^p either
cross zero (rate too small) or bottom out and grow without bound (rate
too large).  Bisection on the rate pins the compactly supported
separatrix between them.  The rescaling family F(xi) = A G(K A^{p-m} xi)
means one shot at A = K = 1 settles every amplitude.
"""

from pathlib import Path

from growup import (
    integrate_F,
    profile_energy,
    rescaled_profile_residual,
    shoot_beta_star,
)

OUT = Path(__file__).with_name("out")


def main():
    OUT.mkdir(exist_ok=True)
    star = shoot_beta_star(3.0)
    lo, hi = star.bracket
    print(f"m=3: beta* = {star.beta_star:.10f} "
          f"(bracket width {hi - lo:.1e}, {star.iterations} bisections)")

    prof = star.critical_profile
    print(f"critical profile: F(0)=1, support edge at xi = {prof.edge:.4f}, "
          f"classification {prof.classification!r}")
    E = profile_energy(prof)
    print(f"profile energy non-increasing: {E.is_nonincreasing()}")

    for beta_fac, expect in ((0.5, "crosses-zero"),
                             (2.0, "positive-minimum-then-unbounded")):
        side = integrate_F(3.0, 2.0, beta_fac * star.beta_star, 1.0, 1.0)
        print(f"  rate x{beta_fac}: {side.classification} "
              f"(expected {expect})")

    for A, K in ((2.5, 0.7), (0.4, 1.3)):
        r = rescaled_profile_residual(star, A, K)
        print(f"rescaling identity at A={A}, K={K}: residual {r:.1e}")

    with open(OUT / "critical_profile_m3.csv", "w") as fh:
        fh.write("xi,F\n")
        for xi, F in zip(prof.xi[::10], prof.F[::10]):
            fh.write(f"{xi!r},{F!r}\n")
    print("wrote out/critical_profile_m3.csv")


if __name__ == "__main__":
    main()
