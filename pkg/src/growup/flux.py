"""Boundary-flux self-similar profiles for slow diffusion (p < m).

When p < m the reaction term localized on (-L, L) acts, at leading order,
as a flux boundary condition on the outer medium: the one-sided problem

    V_t = (V^m)_xx,   -(V^m)_x(0, t) = K V^p(0, t),   x > 0,

admits self-similar solutions V = t^alpha F(xi), xi = x t^{-(m-p) alpha},
alpha = 1/(m+1-2p), whose profile solves

    (F^m)'' = alpha F - (m-p) alpha xi F',
    F(0) = A,   -(F^m)'(0) = K F(0)^p,

and, at the single exponent p = (m+1)/2 (only above 1, so m > 1), the
exponential counterpart V = e^{lambda t} G(x e^{-(m-p) lambda t}) with the
same profile equation, rate beta in place of alpha.  Integration runs in
the variables (v, s) = (F^m, (F^m)'), which stay regular at a vanishing
point of F.

The natural energy E = (1/2) |(F^m)'|^2 - (alpha m / (m+1)) F^{m+1} is
non-increasing in xi, which yields the amplitude threshold for profiles
with E(0) < 0 (positive minimum, then unbounded growth), the lower bound
on that minimum, and the gradient bound carried by compactly supported
critical profiles.  The matched field w glues an interior parabola of
w^m to a translate of V so that w is C^1 at |x| = L.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .core import BOUNDARY_TOL
from .errors import NumericalError

GROW_FACTOR = 100.0  # unbounded once v = F^m returns above GROW_FACTOR*v(0)
EDGE_FRAC = 1e-12    # crossing event at v = EDGE_FRAC * v(0)
XI_SPAN = 1e6        # no event by here is an integration failure
FLUX_TOL = 1e-10     # boundary-flux identity tolerance


@dataclass
class FluxProfile:
    """One integrated flux-driven profile with its classification."""

    m: float
    p: float
    kind: str                  # "power" | "exponential"
    rate: float                # alpha (power) or beta/lambda (exponential)
    K: float
    A: float
    xi: np.ndarray
    F: np.ndarray
    dFm: np.ndarray            # s = (F^m)'
    classification: str        # "crosses-zero" | "positive-minimum-then-unbounded"
    edge: float | None         # support edge when it crosses

    @property
    def flux_residual(self) -> float:
        """|-(F^m)'(0) - K F(0)^p|, zero by construction."""
        return abs(-self.dFm[0] - self.K * self.F[0] ** self.p)

    def min_value(self) -> float:
        return float(self.F.min())


def _kind_of(m: float, p: float) -> str:
    if m > 1.0 and abs(p - 0.5 * (m + 1.0)) <= BOUNDARY_TOL:
        return "exponential"
    return "power"


def integrate_F(m: float, p: float, alpha: float, K: float, A: float,
                mode: str | None = None) -> FluxProfile:
    """Shoot the flux profile ODE from F(0) = A, -(F^m)'(0) = K A^p.

    alpha is the similarity rate (the power rate for p < (m+1)/2, the
    exponential rate at p = (m+1)/2).  mode, when given, asserts the
    construction role: "super" expects the unbounded branch, "sub" the
    crossing branch; a mismatch raises NumericalError.
    """
    if m <= 0.0 or m == 1.0:
        raise ValueError(f"m must be positive and different from 1, got {m}")
    if not 0.0 < p < m:
        raise ValueError(f"need 0 < p < m, got p={p}, m={m}")
    if alpha <= 0.0:
        raise ValueError(f"rate must be positive, got {alpha}")
    if K < 0.0 or A <= 0.0:
        raise ValueError(f"need K >= 0 and A > 0, got K={K}, A={A}")
    if mode not in (None, "sub", "super"):
        raise ValueError(f"mode must be None, 'sub' or 'super', got {mode!r}")

    v0 = A ** m
    z0 = [v0, -K * A ** p]
    drift = (m - p) * alpha / m
    inv_m = 1.0 / m

    def rhs(xi, z):
        v, s = z
        vv = v if v > 1e-300 else 1e-300
        return (s, alpha * vv ** inv_m - drift * xi * s * vv ** (inv_m - 1.0))

    def jac(xi, z):
        v, s = z
        vv = v if v > 1e-300 else 1e-300
        return [[0.0, 1.0],
                [alpha * inv_m * vv ** (inv_m - 1.0)
                 - drift * xi * s * (inv_m - 1.0) * vv ** (inv_m - 2.0),
                 -drift * xi * vv ** (inv_m - 1.0)]]

    # Growth event: any profile that returns above its head value has
    # passed a positive minimum, where E = -(rate m/(m+1)) F^{m+1} < 0;
    # E is non-increasing and a zero crossing needs E = s^2/2 >= 0, so no
    # crossing can follow and the branch is the unbounded one.  (An
    # absolute cap like F = 1e8 is unreachable here: the far field is
    # F ~ c xi^{1/(m-p)} with c -> 0 near the critical rate.)
    floor = EDGE_FRAC * v0
    crosses = lambda _x, z: z[0] - floor
    crosses.terminal = True
    crosses.direction = -1
    grows = lambda _x, z: z[0] - GROW_FACTOR * v0
    grows.terminal = True
    grows.direction = 1

    # LSODA: traversing a near-critical dip (v small, s reviving) is stiff
    # for explicit steppers, with local Lipschitz rate ~ xi v^{1/m - 1}
    sol = solve_ivp(rhs, (0.0, XI_SPAN), z0, method="LSODA", jac=jac,
                    rtol=1e-10, atol=[1e-16 * max(1.0, v0),
                                      1e-14 * max(1.0, abs(z0[1]))],
                    dense_output=True, events=[crosses, grows])
    if sol.status != 1:
        raise NumericalError(
            f"flux profile integration unresolved by xi={XI_SPAN}: "
            f"{sol.message}")

    xi_end = float(sol.t[-1])
    edge = None
    if sol.t_events[0].size:
        xi_ev = float(sol.t_events[0][0])
        v_ev, s_ev = sol.sol(xi_ev)
        if s_ev >= 0.0:
            raise NumericalError("touched the floor while not decreasing")
        # Below the floor the drift term dominates the reaction term
        # (their ratio is O(v^{1+1/m})), so ds/dv = -drift xi v^{1/m-1}
        # integrates to s(0) = s_ev + m drift xi v_ev^{1/m}.  A degenerate
        # edge v ~ c (xi0-xi)^{m/(m-1)} lands exactly on s(0) = 0, so the
        # sign decides the branch without resolving v below the floor.
        s_at_zero = float(s_ev + m * drift * xi_ev * v_ev ** inv_m)
        if s_at_zero < 0.0:
            classification = "crosses-zero"
            edge = xi_ev + float(v_ev / -s_ev)
        else:
            # the dip turns at a positive minimum; by the energy argument
            # above the branch is then the unbounded one
            classification = "positive-minimum-then-unbounded"
    else:
        classification = "positive-minimum-then-unbounded"

    if mode == "super" and classification != "positive-minimum-then-unbounded":
        raise NumericalError(
            f"mode='super' expected the unbounded branch, got {classification}")
    if mode == "sub" and classification != "crosses-zero":
        raise NumericalError(
            f"mode='sub' expected the crossing branch, got {classification}")

    xi = np.linspace(0.0, xi_end, 801)
    Z = sol.sol(xi)
    v = np.maximum(Z[0], 0.0)
    return FluxProfile(m=m, p=p, kind=_kind_of(m, p), rate=alpha, K=K, A=A,
                       xi=xi, F=v ** (1.0 / m), dFm=Z[1],
                       classification=classification, edge=edge)


# --------------------------------------------------------------------------
# energy along profiles
# --------------------------------------------------------------------------

@dataclass
class ProfileEnergy:
    xi: np.ndarray
    E: np.ndarray

    def is_nonincreasing(self, rel_slack: float = 1e-6) -> bool:
        scale = float(np.abs(self.E).max()) or 1.0
        return bool((np.diff(self.E) <= rel_slack * scale).all())


def profile_energy(prof: FluxProfile) -> ProfileEnergy:
    """E = (1/2) s^2 - (rate m / (m+1)) F^{m+1}, non-increasing in xi."""
    E = (0.5 * prof.dFm ** 2
         - prof.rate * prof.m / (prof.m + 1.0) * prof.F ** (prof.m + 1.0))
    return ProfileEnergy(xi=prof.xi.copy(), E=E)


def threshold_amplitude(m: float, p: float, K: float, alpha: float) -> float:
    """Head value above which E(0) < 0, forcing the unbounded branch.

    E(0) = K^2 A^{2p}/2 - (alpha m/(m+1)) A^{m+1} < 0 exactly when
    A^{m+1-2p} > K^2 (m+1) / (2 alpha m).
    """
    if not 0.0 < p < 0.5 * (m + 1.0):
        raise ValueError(f"need 0 < p < (m+1)/2, got p={p}, m={m}")
    if K <= 0.0 or alpha <= 0.0:
        raise ValueError("need K > 0 and alpha > 0")
    return (K * K * (m + 1.0) / (2.0 * alpha * m)) ** (1.0 / (m + 1.0 - 2.0 * p))


def minimum_bound(m: float, p: float, K: float, alpha: float,
                  A: float) -> float:
    """Lower bound on min F for the unbounded branch, valid when the
    correction q = 2 K^2 (m+1)/(alpha m) A^{2p-m-1} satisfies q < 1:

        min F >= A (1 - q)^{1/(m+1)}.
    """
    q = 2.0 * K * K * (m + 1.0) / (alpha * m) * A ** (2.0 * p - m - 1.0)
    if q >= 1.0:
        raise ValueError(
            f"head amplitude too close to threshold (q={q:.3g} >= 1)")
    return A * (1.0 - q) ** (1.0 / (m + 1.0))


# --------------------------------------------------------------------------
# explicit compactly supported subsolution profile
# --------------------------------------------------------------------------

@dataclass
class ExplicitFluxProfile:
    """F(xi) = (A - B xi)_+^gamma with B pinned by the flux identity."""

    m: float
    p: float
    K: float
    A: float
    gamma: float
    B: float

    @property
    def edge(self) -> float:
        return self.A / self.B

    def __call__(self, xi):
        xi = np.asarray(xi, dtype=float)
        return np.maximum(self.A - self.B * xi, 0.0) ** self.gamma

    def flux_residual(self) -> float:
        head = self.gamma * self.m * self.B * self.A ** (self.gamma * self.m - 1.0)
        return abs(head - self.K * self.A ** (self.gamma * self.p))


def explicit_flux_profile(m: float, p: float, K: float,
                          A: float) -> ExplicitFluxProfile:
    if m <= 0.0 or m == 1.0:
        raise ValueError(f"m must be positive and different from 1, got {m}")
    if not 0.0 < p < m:
        raise ValueError(f"need 0 < p < m, got p={p}, m={m}")
    if K <= 0.0 or A <= 0.0:
        raise ValueError("need K > 0 and A > 0")
    gamma = 2.0 / m if m < 1.0 else 1.0 / (m - 1.0)
    # -(F^m)'(0) = gamma m B A^{gamma m - 1} must equal K A^{gamma p}
    B = (K / (gamma * m)) * A ** (gamma * (p - m) + 1.0)
    return ExplicitFluxProfile(m=m, p=p, K=K, A=A, gamma=gamma, B=B)


def check_explicit_subsolution(prof: ExplicitFluxProfile,
                               n: int = 400) -> bool:
    """alpha (F - (m-p) xi F') <= (F^m)'' across the support interior.

    Uses closed forms; holds for A small enough at fixed K.
    """
    m, p, g, A, B = prof.m, prof.p, prof.gamma, prof.A, prof.B
    alpha = 1.0 / (m + 1.0 - 2.0 * p)
    xi = np.linspace(0.0, prof.edge, n + 1)[:-1]
    y = A - B * xi
    F = y ** g
    dF = -g * B * y ** (g - 1.0)
    lhs = alpha * (F - (m - p) * xi * dF)
    gm = g * m
    rhs = gm * (gm - 1.0) * B * B * y ** (gm - 2.0)
    return bool((lhs <= rhs + 1e-12 * np.abs(rhs).max()).all())


# --------------------------------------------------------------------------
# exponential-rate shooting (the p = (m+1)/2 > 1 profile)
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class BetaStarResult:
    m: float
    p: float
    beta_star: float
    bracket: tuple[float, float]
    iterations: int
    critical_profile: FluxProfile     # crossing-side profile at the bracket


def shoot_beta_star(m: float, tol: float = 1e-6) -> BetaStarResult:
    """Critical exponential rate for the normalized profile G(0) = 1,
    -(G^m)'(0) = 1, at p = (m+1)/2.

    Small beta lets G cross zero; large beta sends it to the unbounded
    branch.  Geometric bracketing from beta = 1 and bisection to a
    bracket of width tol.  Classification stays monotone in beta across
    every evaluation (checked).
    """
    if m <= 1.0:
        raise ValueError(f"need m > 1 so that p = (m+1)/2 > 1, got m={m}")
    p = 0.5 * (m + 1.0)

    def classify(beta: float) -> str:
        return integrate_F(m, p, beta, 1.0, 1.0).classification

    lo = hi = 1.0
    iterations = 0
    if classify(1.0) == "crosses-zero":
        while classify(hi * 2.0) == "crosses-zero":
            hi *= 2.0
            iterations += 1
            if hi > 1e6:
                raise NumericalError("no unbounded branch below beta = 1e6")
        lo, hi = hi, hi * 2.0
    else:
        while classify(lo * 0.5) != "crosses-zero":
            lo *= 0.5
            iterations += 1
            if lo < 1e-6:
                raise NumericalError("no crossing branch above beta = 1e-6")
        lo, hi = lo * 0.5, lo

    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if classify(mid) == "crosses-zero":
            lo = mid
        else:
            hi = mid
        iterations += 1

    return BetaStarResult(
        m=m, p=p, beta_star=0.5 * (lo + hi), bracket=(lo, hi),
        iterations=iterations,
        critical_profile=integrate_F(m, p, lo, 1.0, 1.0, mode="sub"))


def gradient_bound_constant(m: float) -> float:
    """C_m = (m-1)^2 / (2m(m+1)): crossing profiles keep
    |(G^{(m-1)/2})'|^2 >= C_m beta wherever G > 0."""
    if m <= 1.0:
        raise ValueError(f"need m > 1, got m={m}")
    return (m - 1.0) ** 2 / (2.0 * m * (m + 1.0))


def check_gradient_bound(prof: FluxProfile, rel_slack: float = 1e-6) -> bool:
    """E >= 0 up to the crossing, so s^2 >= (2 rate m/(m+1)) G^{m+1} and
    the composite gradient is bounded below wherever G > 0."""
    if prof.classification != "crosses-zero":
        raise ValueError("gradient bound applies to crossing profiles")
    m = prof.m
    sel = prof.F > 0.0
    grad_sq = ((m - 1.0) / (2.0 * m)) ** 2 * prof.dFm[sel] ** 2 \
        * prof.F[sel] ** (-(m + 1.0))
    target = gradient_bound_constant(m) * prof.rate
    return bool((grad_sq >= target * (1.0 - rel_slack)).all())


def rescaled_profile_residual(result: BetaStarResult, A: float,
                              K: float) -> float:
    """Max relative mismatch of F(xi) = A G(K A^{p-m} xi) against a direct
    integration with head A and flux constant K, at the same lambda =
    beta K^2.  Exact only at p = (m+1)/2: the two scalings then agree.
    """
    G = result.critical_profile
    m, p = result.m, result.p
    lam = G.rate * K * K
    direct = integrate_F(m, p, lam, K, A)
    scale = K * A ** (p - m)
    xi_max = min(direct.xi[-1], G.xi[-1] / scale)
    xi = np.linspace(0.0, xi_max, 200)
    F_direct = np.interp(xi, direct.xi, direct.F)
    F_mapped = A * np.interp(scale * xi, G.xi, G.F)
    ref = max(A, float(np.abs(F_direct).max()))
    return float(np.abs(F_direct - F_mapped).max() / ref)


# --------------------------------------------------------------------------
# matched interior-exterior field
# --------------------------------------------------------------------------

@dataclass
class SelfSimilarV:
    """Evaluates V(x, t) = t^rate F(x t^{-(m-p) rate}) (power kind) or
    e^{rate t} F(x e^{-(m-p) rate t}) (exponential kind) from a profile."""

    profile: object            # FluxProfile or ExplicitFluxProfile
    m: float
    p: float
    rate: float
    kind: str                  # "power" | "exponential"

    def _F(self, xi):
        prof = self.profile
        if isinstance(prof, FluxProfile):
            if np.any(np.asarray(xi) > prof.xi[-1]):
                raise ValueError("xi beyond the integrated profile range")
            if not hasattr(self, "_spl"):
                from scipy.interpolate import CubicSpline
                # spline in v = F^m: smooth there, and accurate enough for
                # one-sided slope probes at the matching point
                object.__setattr__(self, "_spl",
                                   CubicSpline(prof.xi, prof.F ** self.m))
            return np.maximum(self._spl(xi), 0.0) ** (1.0 / self.m)
        return prof(xi)

    def value(self, x, t):
        x = np.asarray(x, dtype=float)
        if self.kind == "power":
            stretch = t ** (-(self.m - self.p) * self.rate)
            return t ** self.rate * self._F(x * stretch)
        stretch = math.exp(-(self.m - self.p) * self.rate * t)
        return math.exp(self.rate * t) * self._F(x * stretch)


@dataclass
class MatchedField:
    """w(x, t): interior parabola of w^m glued C^1 to V(|x| - L, t).

        w^m = V^m(0,t) + (K / 2L) V^p(0,t) (L^2 - x^2)   for |x| < L,
        w   = V(|x| - L, t)                              for |x| >= L.

    The glue is C^1 only when K here equals the flux constant the profile
    inside V was integrated with (both one-sided slopes are then -K V^p).
    """

    V: SelfSimilarV
    K: float
    L: float

    def value(self, x, t: float):
        x = np.abs(np.asarray(x, dtype=float))
        v0 = float(self.V.value(0.0, t))
        wm_in = (v0 ** self.V.m
                 + self.K / (2.0 * self.L) * v0 ** self.V.p
                 * (self.L ** 2 - x ** 2))
        inside = wm_in ** (1.0 / self.V.m)
        outside = self.V.value(np.maximum(x - self.L, 0.0), t)
        return np.where(x < self.L, inside, outside)

    def interior_residual(self, x, t: float, ht_rel: float = 1e-5):
        """w_t - (w^m)_xx - w^p for |x| < L; (w^m)_xx = -(K/L) V^p(0,t)
        exactly, only w_t is numerical."""
        x = np.asarray(x, dtype=float)
        if np.any(np.abs(x) >= self.L):
            raise ValueError("interior residual needs |x| < L")
        ht = ht_rel * max(t, 1.0)
        wt = (self.value(x, t + ht) - self.value(x, t - ht)) / (2.0 * ht)
        v0 = float(self.V.value(0.0, t))
        w = self.value(x, t)
        return wt + self.K / self.L * v0 ** self.V.p - w ** self.V.p

    def slope_jump(self, t: float, hx_rel: float = 1e-6) -> float:
        """Relative mismatch of one-sided d(w^m)/dx at x = L (C^1 check)."""
        h = hx_rel * self.L
        m = self.V.m
        wl = self.value(np.array([self.L - 2 * h, self.L - h]), t) ** m
        wr = self.value(np.array([self.L + h, self.L + 2 * h]), t) ** m
        left = (wl[1] - wl[0]) / h
        right = (wr[1] - wr[0]) / h
        scale = max(abs(left), abs(right), 1e-300)
        return abs(left - right) / scale


def matched_w(V: SelfSimilarV, K: float, L: float) -> MatchedField:
    if K < 0.0 or L <= 0.0:
        raise ValueError(f"need K >= 0 and L > 0, got K={K}, L={L}")
    return MatchedField(V=V, K=K, L=L)


# --------------------------------------------------------------------------
# sqrt-head subsolution criterion (p = m case on a half line)
# --------------------------------------------------------------------------

def pk_subsolution_check(m: float, B: float, n: int = 2000) -> bool:
    """Whether F^m = (1 - B sqrt(xi))_+ satisfies (F^m)'' + xi F'/2 >= 0
    on the interior of its support, which reduces to

        m / (2 xi^2) >= (1 - B sqrt(xi))^{(2-m)/m},   0 < xi < 1/B^2.

    True for B large (support tucked where the left side is big), false
    as B -> 0+.
    """
    if not 0.0 < m < 1.0:
        raise ValueError(f"m must lie in (0, 1), got {m}")
    if B <= 0.0:
        raise ValueError(f"B must be positive, got {B}")
    edge = 1.0 / (B * B)
    xi = np.geomspace(edge * 1e-9, edge * (1.0 - 1e-9), n)
    lhs = m / (2.0 * xi * xi)
    rhs = (1.0 - B * np.sqrt(xi)) ** ((2.0 - m) / m)
    return bool((lhs >= rhs).all())
