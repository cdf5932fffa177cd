"""Principal eigenvalue of the linear problem (m = p = 1).

For u_t = u_xx + 1_{(-L,L)} u the growth rate of the slowest-decaying
symmetric mode e^{lam t} phi(|x|) solves

    phi'' + (1 - lam) phi = 0   on (0, L),      phi(0) = 1, phi'(0) = 0,
    phi'' -     lam  phi = 0   on (L, oo),

with C^1 matching at r = L.  Writing the outer part as
C1 e^{sqrt(lam) r} + C2 e^{-sqrt(lam) r}, the matching eliminates the
growing mode exactly when

    h(lam, L) = sqrt(lam) cos(L sqrt(1-lam)) - sqrt(1-lam) sin(L sqrt(1-lam))

vanishes.  h has a single sign change from negative to positive inside the
admissible window (max{0, 1 - (pi/(2L))^2}, 1), and its root lam0(L) in
(0, 1) is the exponential grow-up rate of the critical linear case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError

# Root accuracy in lam; the residual |h| at the returned root is checked
# against the same figure.
LAMBDA_TOL = 1e-12

# Offset keeping the bracket strictly inside the admissible window.
_WINDOW_PAD = 1e-9


def h(lam: float, L: float) -> float:
    """Matching function whose root in (0, 1) is lam0(L).

    Defined for 0 <= lam <= 1 (the square roots are real there).
    """
    if L <= 0.0:
        raise ValueError(f"L must be positive, got {L}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lam must lie in [0, 1], got {lam}")
    sl = math.sqrt(lam)
    sq = math.sqrt(1.0 - lam)
    return sl * math.cos(L * sq) - sq * math.sin(L * sq)


def _bisect_secant(f, a: float, b: float, xtol: float) -> float:
    """Root of f on a sign-changing bracket [a, b].

    Plain bisection with a secant candidate tried first each round; the
    secant step is only accepted if it lands comfortably inside the current
    bracket, so the bisection convergence guarantee is never lost.
    """
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if fa * fb > 0.0:
        raise NumericalError(f"no sign change on [{a}, {b}]")
    for _ in range(200):
        if b - a <= xtol:
            break
        x = None
        if fb != fa:
            s = b - fb * (b - a) / (fb - fa)
            margin = 0.01 * (b - a)
            if a + margin < s < b - margin:
                x = s
        if x is None:
            x = 0.5 * (a + b)
        fx = f(x)
        if fx == 0.0:
            return x
        if fa * fx < 0.0:
            b, fb = x, fx
        else:
            a, fa = x, fx
    return 0.5 * (a + b)


def lambda0(L: float) -> float:
    """Principal growth rate lam0(L): the root of h(., L) in (0, 1).

    lam0 increases with L, approaching 1 as L -> oo (reaction everywhere)
    and 0 as L -> 0.
    """
    if L <= 0.0:
        raise ValueError(f"L must be positive, got {L}")
    lo = max(0.0, 1.0 - (math.pi / (2.0 * L)) ** 2) + _WINDOW_PAD
    hi = 1.0
    if h(lo, L) >= 0.0:
        raise NumericalError(f"window bottom not negative for L={L}")
    root = _bisect_secant(lambda lam: h(lam, L), lo, hi, 1e-14)
    if abs(h(root, L)) > LAMBDA_TOL:
        raise NumericalError(
            f"residual |h|={abs(h(root, L)):.3e} above {LAMBDA_TOL} at L={L}")
    return root


@dataclass(frozen=True)
class EigenProfile:
    """Two-piece symmetric mode profile for a given (lam, L).

    phi(r) = cos(sqrt(1-lam) r)                      for r < L,
             C1 e^{sqrt(lam) r} + C2 e^{-sqrt(lam) r} for r >= L.

    C1 is proportional to h(lam, L): it vanishes at lam = lam0(L) (pure
    decay), and for lam < lam0 it is negative, so the profile crosses zero
    at vanish_radius and the truncated positive part is the natural
    compactly supported comparison profile.
    """

    lam: float
    L: float
    C1: float
    C2: float
    vanish_radius: float | None

    def __call__(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if (r < 0.0).any():
            raise ValueError("profile is radial; r must be nonnegative")
        sl = math.sqrt(self.lam)
        sq = math.sqrt(1.0 - self.lam)
        inner = np.cos(sq * r)
        outer = self.C1 * np.exp(sl * r) + self.C2 * np.exp(-sl * r)
        return np.where(r < self.L, inner, outer)

    def truncated(self, r) -> np.ndarray:
        """max(phi, 0): compact support when vanish_radius is finite."""
        return np.maximum(self(r), 0.0)


def eigen_profile(lam: float, L: float) -> EigenProfile:
    """Construct the C^1-matched two-piece profile for (lam, L)."""
    if L <= 0.0:
        raise ValueError(f"L must be positive, got {L}")
    if not 0.0 < lam < 1.0:
        raise ValueError(f"lam must lie in (0, 1), got {lam}")
    sl = math.sqrt(lam)
    sq = math.sqrt(1.0 - lam)
    c, s = math.cos(L * sq), math.sin(L * sq)
    C1 = math.exp(-sl * L) / (2.0 * sl) * (sl * c - sq * s)
    C2 = math.exp(sl * L) / (2.0 * sl) * (sl * c + sq * s)
    vanish = None
    if C1 < 0.0 and C2 > 0.0:
        vanish = math.log(-C2 / C1) / (2.0 * sl)
    return EigenProfile(lam=lam, L=L, C1=C1, C2=C2, vanish_radius=vanish)
