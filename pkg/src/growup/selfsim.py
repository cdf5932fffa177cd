"""Self-similar profiles for the fast-diffusion outer region (0 < m < 1).

Outside the reaction interval the solution follows the pure diffusion
equation U_t = (U^m)_xx, whose matched self-similar form

    U(x,t) = t^alpha f(xi),  xi = |x| t^beta      (m < p < 1)
    U(x,t) = e^{alpha t} f(xi),  xi = |x| e^{beta t}   (p = 1)

reduces to the profile ODE

    (f^m)'' = alpha f + beta xi f',    xi > 0,

with alpha = 1/(1-p) (p < 1) or 1 (p = 1) and beta = (p-m) alpha / 2, so
that (1-m) alpha - 2 beta is 1 (subcritical closure) or 0 (critical).

The substitution X = xi f'/f, Y = xi^2 f^{1-m}/m, eta = log xi turns the
profile ODE into the autonomous system

    dX/deta = X - m X^2 + Y (alpha + beta X),
    dY/deta = (2 + (1-m) X) Y,

whose critical points are A = (0,0) (a repelling node), B = (1/m, 0), and,
for the subcritical closure only, the saddle C = (-2/(1-m), 2(1+m)/(1-m)).
The admissible decreasing profile is the separatrix from A to C (or, in
the critical closure, to the point at infinity with X = -2/(1-m)); its two
ends give f ~ 1 near xi = 0 and the far-field decay

    f ~ xi^{-2/(1-m)}                       (closure 1)
    f ~ (log xi / xi^2)^{1/(1-m)}           (closure 0).

Because A repels, every orbit looks alike near A and the connection is
selected globally; the separatrix is therefore computed BACKWARD from the
C end, where the reversed flow is attracting: from the stable
eigendirection of C (closure 1), or from the derived far-field asymptote
X = -2/(1-m) + K_c/Y, Y ~ (1-m) K_c eta with K_c = 2(1+m)/(beta (1-m)^2)
(closure 0), down to Y = 1e-8 at the A end.

This module also carries the two separable constructions for p <= 1: the
p = m profile classification with its critical lambda*, and the compactly
supported reaction profile (phi^m)'' + phi^p = 0 with its time factor psi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.integrate import solve_ivp
from scipy.interpolate import CubicSpline

from .errors import NumericalError

# Terminal smallness of Y at the A end of a separatrix.
SEPARATRIX_EPS = 1e-8
# Tolerance on the closure relation (1-m) alpha - 2 beta in {0, 1}.
CLOSURE_TOL = 1e-9
# Reconstruction grid (log-spaced: the asymptotics are power laws).
XI_MIN, XI_MAX = 1e-3, 1e4


class Closure(Enum):
    POWER_SUBCRITICAL = 1   # (1-m) alpha - 2 beta = 1  (p < 1)
    POWER_CRITICAL = 0      # (1-m) alpha - 2 beta = 0  (p = 1)


@dataclass(frozen=True)
class SimilarityExponents:
    """(alpha, beta) pair for the outer self-similar form, with closure."""

    m: float
    alpha: float
    beta: float
    closure: Closure

    def __post_init__(self):
        if not 0.0 < self.m < 1.0:
            raise ValueError(f"m must lie in (0, 1), got {self.m}")
        if self.alpha <= 0.0 or self.beta <= 0.0:
            raise ValueError("alpha and beta must be positive")
        gap = (1.0 - self.m) * self.alpha - 2.0 * self.beta
        if abs(gap - self.closure.value) > CLOSURE_TOL:
            raise ValueError(
                f"(1-m)*alpha - 2*beta = {gap} does not match closure "
                f"{self.closure.name}")

    @classmethod
    def from_parameters(cls, m: float, p: float) -> "SimilarityExponents":
        """Exponents for the outer region of the (m, p) problem, m < p <= 1."""
        if not 0.0 < m < 1.0:
            raise ValueError(f"m must lie in (0, 1), got {m}")
        if not m < p <= 1.0:
            raise ValueError(f"need m < p <= 1, got m={m}, p={p}")
        alpha = 1.0 if p == 1.0 else 1.0 / (1.0 - p)
        beta = 0.5 * (p - m) * alpha
        closure = Closure.POWER_CRITICAL if p == 1.0 \
            else Closure.POWER_SUBCRITICAL
        return cls(m=m, alpha=alpha, beta=beta, closure=closure)

    @property
    def X_limit(self) -> float:
        """Far-field value of X on the separatrix: -2/(1-m)."""
        return -2.0 / (1.0 - self.m)


def phase_field(X, Y, alpha: float, beta: float, m: float):
    """Right-hand side (dX/deta, dY/deta) of the autonomous system."""
    if not 0.0 < m < 1.0:
        raise ValueError(f"m must lie in (0, 1), got {m}")
    if alpha <= 0.0 or beta <= 0.0:
        raise ValueError("alpha and beta must be positive")
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    dX = X - m * X * X + Y * (alpha + beta * X)
    dY = (2.0 + (1.0 - m) * X) * Y
    return dX, dY


def critical_points(exps: SimilarityExponents) -> dict[str, tuple[float, float]]:
    """A, B, and (subcritical closure only) C."""
    pts = {"A": (0.0, 0.0), "B": (1.0 / exps.m, 0.0)}
    if exps.closure is Closure.POWER_SUBCRITICAL:
        pts["C"] = (exps.X_limit, 2.0 * (1.0 + exps.m) / (1.0 - exps.m))
    return pts


def omega_bound_Y(X, exps: SimilarityExponents):
    """Upper boundary of the invariant region: Y = (m X^2 - X)/(alpha + beta X)."""
    X = np.asarray(X, dtype=float)
    return (exps.m * X * X - X) / (exps.alpha + exps.beta * X)


@dataclass(frozen=True)
class PhasePoint:
    X: float
    Y: float
    eta: float


@dataclass
class PhasePath:
    """Separatrix tabulation with eta increasing (eta = log xi, f0 = 1)."""

    exps: SimilarityExponents
    eta: np.ndarray
    X: np.ndarray
    Y: np.ndarray

    def __len__(self):
        return self.eta.size

    def __getitem__(self, i) -> PhasePoint:
        return PhasePoint(X=float(self.X[i]), Y=float(self.Y[i]),
                          eta=float(self.eta[i]))

    @property
    def terminal_X(self) -> float:
        return float(self.X[-1])


def _phase_rhs(alpha: float, beta: float, m: float, sign: float):
    def rhs(_s, z):
        X, Y = z
        return (sign * (X - m * X * X + Y * (alpha + beta * X)),
                sign * (2.0 + (1.0 - m) * X) * Y)

    def jac(_s, z):
        X, Y = z
        return (np.array([[1.0 - 2.0 * m * X + beta * Y, alpha + beta * X],
                          [(1.0 - m) * Y, 2.0 + (1.0 - m) * X]]) * sign)
    return rhs, jac


def separatrix(alpha: float, beta: float, m: float,
               eta_max: float | None = None) -> PhasePath:
    """The admissible orbit out of A, computed backward from its far end.

    Returns the path with eta calibrated so that Y ~ e^{2 eta}/m near A,
    i.e. the profile reconstructed from it has f(0+) = 1.  eta_max, when
    given, truncates the emitted path.
    """
    exps_closure = (1.0 - m) * alpha - 2.0 * beta
    if abs(exps_closure - 1.0) <= CLOSURE_TOL:
        closure = Closure.POWER_SUBCRITICAL
    elif abs(exps_closure) <= CLOSURE_TOL:
        closure = Closure.POWER_CRITICAL
    else:
        raise ValueError(
            f"(1-m)*alpha - 2*beta = {exps_closure} is neither 0 nor 1")
    exps = SimilarityExponents(m=m, alpha=alpha, beta=beta, closure=closure)

    X_C = exps.X_limit
    if closure is Closure.POWER_SUBCRITICAL:
        # launch just off C along its stable eigendirection, inside Omega
        Y_C = 2.0 * (1.0 + m) / (1.0 - m)
        J11 = (1.0 + 3.0 * m + 2.0 * beta * (1.0 + m)) / (1.0 - m)
        J12 = 1.0 / (1.0 - m)
        J21 = 2.0 * (1.0 + m)
        mu = 0.5 * (J11 - math.sqrt(J11 * J11 + 4.0 * J12 * J21))  # < 0
        v = np.array([1.0, J21 / mu])       # dX > 0, dY < 0: points into Omega
        v /= math.hypot(v[0], v[1])
        delta = 1e-8 * max(abs(X_C), Y_C)
        z0 = np.array([X_C + delta * v[0], Y_C + delta * v[1]])
    else:
        # launch on the derived far-field asymptote X = X_C + K_c/Y, high
        # enough that the endpoint X error K_c/Y0 is ~0.25% of |X_C|
        K_c = 2.0 * (1.0 + m) / (beta * (1.0 - m) ** 2)
        Y0 = max(1e3, 200.0 * (1.0 - m) * K_c)
        z0 = np.array([X_C + K_c / Y0, Y0])

    hit_A = lambda _s, z: z[1] - SEPARATRIX_EPS
    hit_A.terminal = True
    hit_A.direction = -1
    # Radau: off the slow manifold the flow contracts at rate ~beta*Y,
    # which is stiff at the far launch of the critical closure
    rhs, jac = _phase_rhs(alpha, beta, m, -1.0)
    sol = solve_ivp(rhs, (0.0, 4000.0), z0, method="Radau", jac=jac,
                    rtol=1e-10, atol=1e-14, dense_output=True,
                    events=[hit_A])
    if sol.status != 1 or sol.t_events[0].size == 0:
        raise NumericalError(
            f"separatrix integration did not reach the A end: {sol.message}")
    s_end = float(sol.t_events[0][0])

    # dense resample, uniform in s (= uniform in eta)
    n = min(200_000, max(2000, int(s_end / 0.005)))
    s = np.linspace(0.0, s_end, n)
    Z = sol.sol(s)
    X, Y = Z[0], Z[1]

    # calibrate eta so that near A (s = s_end): Y = e^{2 eta}/m, i.e. f0 = 1
    eta_end = 0.5 * math.log(m * Y[-1])
    eta = eta_end + (s_end - s)

    # emit with eta increasing
    eta, X, Y = eta[::-1].copy(), X[::-1].copy(), Y[::-1].copy()
    if eta_max is not None:
        keep = eta <= eta_max
        if not keep.any():
            raise ValueError(f"eta_max={eta_max} below the path start")
        eta, X, Y = eta[keep], X[keep], Y[keep]

    # second-quadrant / invariant-region contract
    if X.max() > 1e-6 or X.min() < X_C - 1e-6 or Y.min() < -1e-12:
        raise NumericalError(
            "separatrix escaped the invariant region "
            f"(X in [{X.min():.6f}, {X.max():.6f}], Ymin={Y.min():.3e})")
    return PhasePath(exps=exps, eta=eta, X=X, Y=Y)


# --------------------------------------------------------------------------
# profile reconstruction
# --------------------------------------------------------------------------

@dataclass
class SimilarityProfile:
    """Tabulated decreasing profile with exact slope data from the path.

    Samples live on a geometric xi grid; value_and_slope interpolates the
    underlying phase path with cubic splines, so derivative probes of the
    profile ODE stay accurate.
    """

    exponents: SimilarityExponents
    xi: np.ndarray
    f: np.ndarray
    df: np.ndarray             # f'(xi), from X = xi f'/f
    f0: float
    asymptotic_class: str      # "pure-power" | "log-corrected"
    _spl_logY: CubicSpline = field(repr=False)
    _spl_X: CubicSpline = field(repr=False)
    _eta_span: tuple[float, float] = field(repr=False)

    def value_and_slope(self, xi) -> tuple[np.ndarray, np.ndarray]:
        xi = np.asarray(xi, dtype=float)
        m = self.exponents.m
        lam_s = self.f0 ** (0.5 * (1.0 - m))
        eta = np.log(lam_s * xi)
        lo, hi = self._eta_span
        if (eta > hi).any():
            raise ValueError("xi beyond the computed path range")
        eta_c = np.maximum(eta, lo)   # below the path: A-end plateau
        Y = np.exp(self._spl_logY(eta_c))
        X = self._spl_X(eta_c)
        f1 = (m * Y * np.exp(-2.0 * eta_c)) ** (1.0 / (1.0 - m))
        f = self.f0 * f1
        df = np.where(eta >= lo, X * f / xi, 0.0)
        return f, df

    def rescaled(self, lam: float) -> "_RescaledProfile":
        """Member f_lam(xi) = lam^{2/(1-m)} f(lam xi) of the scaling family."""
        return _RescaledProfile(self, lam)


@dataclass
class _RescaledProfile:
    base: SimilarityProfile
    lam: float

    @property
    def exponents(self) -> SimilarityExponents:
        return self.base.exponents

    def value_and_slope(self, xi):
        m = self.exponents.m
        c = self.lam ** (2.0 / (1.0 - m))
        f, df = self.base.value_and_slope(self.lam * np.asarray(xi, float))
        return c * f, c * self.lam * df


def reconstruct_profile(path: PhasePath, f0: float = 1.0,
                        xi_grid: np.ndarray | None = None) -> SimilarityProfile:
    """Recover f from the path via f = (m Y / xi^2)^{1/(1-m)}, scaled to f0.

    The scaling family f_lam(xi) = lam^{2/(1-m)} f(lam xi) maps the f0 = 1
    path onto any other origin value, so no re-integration is needed.
    """
    if f0 <= 0.0:
        raise ValueError(f"f0 must be positive, got {f0}")
    m = path.exps.m
    if xi_grid is None:
        xi_grid = np.geomspace(XI_MIN, XI_MAX, 701)
    spl_logY = CubicSpline(path.eta, np.log(path.Y))
    spl_X = CubicSpline(path.eta, path.X)
    kind = ("pure-power"
            if path.exps.closure is Closure.POWER_SUBCRITICAL
            else "log-corrected")
    prof = SimilarityProfile(
        exponents=path.exps, xi=np.asarray(xi_grid, float),
        f=np.empty(0), df=np.empty(0), f0=f0, asymptotic_class=kind,
        _spl_logY=spl_logY, _spl_X=spl_X,
        _eta_span=(float(path.eta[0]), float(path.eta[-1])))
    f, df = prof.value_and_slope(prof.xi)
    if not (np.diff(f) <= 1e-12 * f[0]).all():
        raise NumericalError("reconstructed profile is not decreasing")
    if not (f > 0.0).all():
        raise NumericalError("reconstructed profile is not positive")
    prof.f, prof.df = f, df
    return prof


def supersolution_residual(profile) -> float:
    """min over samples of alpha f + beta xi f' = f (alpha + beta X) >= 0."""
    e = profile.exponents
    return float(np.min(e.alpha * profile.f + e.beta * profile.xi * profile.df))


def profile_ode_residual(prof, xi_points, rel_h: float = 2e-4) -> float:
    """Max relative residual of (f^m)'' - alpha f - beta xi f' at xi_points.

    (f^m)' = m f^{m-1} f' is exact from the path; only one differentiation
    is done numerically (central, step rel_h*xi), keeping the probe well
    below the 1e-6 relative target.
    """
    e = prof.exponents
    m = e.m
    worst = 0.0
    for xi in np.atleast_1d(np.asarray(xi_points, dtype=float)):
        hh = rel_h * xi
        (fp, dfp), (fm_, dfm) = (prof.value_and_slope(xi + hh),
                                 prof.value_and_slope(xi - hh))
        d2 = (m * fp ** (m - 1.0) * dfp - m * fm_ ** (m - 1.0) * dfm) / (2 * hh)
        f, df = prof.value_and_slope(xi)
        rhs = e.alpha * f + e.beta * xi * df
        denom = max(abs(rhs), abs(d2), 1e-300)
        worst = max(worst, abs(d2 - rhs) / denom)
    return float(worst)


# --------------------------------------------------------------------------
# separable profiles, p = m < 1
# --------------------------------------------------------------------------

@dataclass
class SeparableProfile:
    """Shooting outcome for (phi^m)'' + a(r) phi^m - lam phi = 0."""

    m: float
    lam: float
    L: float
    classification: str          # "crosses-zero" | "positive-unbounded"
    R: float | None              # first zero when it crosses
    r: np.ndarray
    phi: np.ndarray
    capped: bool = False         # no event by r = R_CAP: read as R = infinity


R_CAP = 1e6
# growth cap in v = phi^m; modest, because v'' ~ lam v^{1/m} is superlinear
# and v reaches any level within a vanishing distance of its singularity
_V_CAP = 1e6


def separable_profile_pm(m: float, lam: float, L: float = 1.0,
                         ) -> SeparableProfile:
    """Integrate the p = m profile ODE in v = phi^m and classify it.

    v'' = lam v^{1/m} - a(r) v with v(0) = 1, v'(0) = 0 and a = 1 on
    (0, L).  Either v crosses zero at finite R (classification
    crosses-zero) or it eventually grows without bound.
    """
    if not 0.0 < m < 1.0:
        raise ValueError(f"m must lie in (0, 1), got {m}")
    if lam < 0.0:
        raise ValueError(f"lam must be nonnegative, got {lam}")
    if L <= 0.0:
        raise ValueError(f"L must be positive, got {L}")

    def rhs_in(_r, z):
        v, vp = z
        vv = max(v, 0.0)
        return (vp, lam * vv ** (1.0 / m) - vv)

    def rhs_out(_r, z):
        v, vp = z
        return (vp, lam * max(v, 0.0) ** (1.0 / m))

    crosses = lambda _r, z: z[0]
    crosses.terminal = True
    crosses.direction = -1
    grows = lambda _r, z: z[0] - _V_CAP
    grows.terminal = True
    grows.direction = 1

    rs, vs = [np.array([0.0])], [np.array([1.0])]
    z = np.array([1.0, 0.0])
    R = None
    classification = None
    capped = False
    for rhs, (r0, r1) in ((rhs_in, (0.0, L)), (rhs_out, (L, R_CAP))):
        sol = solve_ivp(rhs, (r0, r1), z, method="RK45",
                        rtol=1e-9, atol=1e-12, dense_output=True,
                        events=[crosses, grows])
        rr = np.linspace(r0, sol.t[-1], 400)
        zz = sol.sol(rr)
        rs.append(rr)
        vs.append(zz[0])
        if sol.status == 1:
            if sol.t_events[0].size:
                classification = "crosses-zero"
                R = float(sol.t_events[0][0])
            else:
                classification = "positive-unbounded"
            break
        if sol.status != 0:
            raise NumericalError(f"profile integration failed: {sol.message}")
        z = sol.y[:, -1]
    if classification is None:
        # reached R_CAP with neither event: interpreted as R = infinity
        classification = "positive-unbounded"
        capped = True
    r = np.concatenate(rs)
    v = np.maximum(np.concatenate(vs), 0.0)
    return SeparableProfile(m=m, lam=lam, L=L, classification=classification,
                            R=R, r=r, phi=v ** (1.0 / m), capped=capped)


@dataclass(frozen=True)
class LambdaStar:
    m: float
    L: float
    lam_star: float
    bracket: tuple[float, float]
    crossings: tuple            # (lam, R) pairs from the crossing side


def lambda_star(m: float, L: float = 1.0, tol: float = 1e-8) -> LambdaStar:
    """Critical lam separating crossing from globally positive profiles.

    Bisection on [0, 1]: lam = 0 crosses, lam = 1 stays at 1 on (0, L) and
    then increases.  R_lam grows without bound as lam -> lam*^-.
    """
    lo, hi = 0.0, 1.0
    if separable_profile_pm(m, lo, L).classification != "crosses-zero":
        raise NumericalError("lam=0 did not cross zero")
    if separable_profile_pm(m, hi, L).classification != "positive-unbounded":
        raise NumericalError("lam=1 did not grow")
    crossings = []
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        prof = separable_profile_pm(m, mid, L)
        if prof.classification == "crosses-zero":
            lo = mid
            crossings.append((mid, prof.R))
        else:
            hi = mid
    return LambdaStar(m=m, L=L, lam_star=0.5 * (lo + hi), bracket=(lo, hi),
                      crossings=tuple(crossings))


# --------------------------------------------------------------------------
# compactly supported reaction profile, m < p <= 1
# --------------------------------------------------------------------------

@dataclass
class CompactReactionProfile:
    """Solution of (phi^m)'' + phi^p = 0 rescaled to vanish at L.

    The normalized profile (phi(0)=1, phi'(0)=0) has a first zero R0
    because phi^m is concave; varphi(x) = A phi(A^{(p-m)/2} x) with
    A = (R0/L)^{2/(p-m)} then vanishes exactly at L.
    """

    m: float
    p: float
    L: float
    R0: float
    A: float
    x: np.ndarray
    phi: np.ndarray              # rescaled varphi on [0, L]


def compact_reaction_profile(m: float, p: float, L: float = 1.0,
                             ) -> CompactReactionProfile:
    if not 0.0 < m < 1.0:
        raise ValueError(f"m must lie in (0, 1), got {m}")
    if not m < p <= 1.0:
        raise ValueError(f"need m < p <= 1, got m={m}, p={p}")
    if L <= 0.0:
        raise ValueError(f"L must be positive, got {L}")

    def rhs(_r, z):
        v, vp = z
        return (vp, -max(v, 0.0) ** (p / m))

    crosses = lambda _r, z: z[0]
    crosses.terminal = True
    crosses.direction = -1
    sol = solve_ivp(rhs, (0.0, 1e3), [1.0, 0.0], method="RK45",
                    rtol=1e-10, atol=1e-13, dense_output=True,
                    events=[crosses])
    if sol.status != 1 or sol.t_events[0].size == 0:
        raise NumericalError("normalized reaction profile did not vanish")
    R0 = float(sol.t_events[0][0])
    A = (R0 / L) ** (2.0 / (p - m))

    x = np.linspace(0.0, L, 401)
    scale = A ** (0.5 * (p - m))
    v = np.maximum(sol.sol(np.minimum(scale * x, R0))[0], 0.0)
    phi = A * v ** (1.0 / m)
    return CompactReactionProfile(m=m, p=p, L=L, R0=R0, A=A, x=x, phi=phi)


def integrate_psi(m: float, p: float, A: float, psi0: float,
                  t_end: float, n: int = 400) -> tuple[np.ndarray, np.ndarray]:
    """Time factor for the compact-profile subsolution w = psi(t) varphi(x):

        psi' = (psi^p - psi^m) / A^{1-p},    psi(0) = psi0 > 1.

    psi' ~ psi^p / A^{1-p} for large t, so psi grows like
    ((1-p) t)^{1/(1-p)} when p < 1 and exponentially when p = 1.
    """
    if psi0 <= 1.0:
        raise ValueError(f"psi0 must exceed 1, got {psi0}")
    if not m < p <= 1.0:
        raise ValueError(f"need m < p <= 1, got m={m}, p={p}")
    denom = A ** (1.0 - p)

    def rhs(_t, z):
        psi = z[0]
        return ((psi ** p - psi ** m) / denom,)

    t = np.linspace(0.0, t_end, n)
    sol = solve_ivp(rhs, (0.0, t_end), [psi0], method="RK45",
                    rtol=1e-9, atol=1e-12, t_eval=t)
    if sol.status != 0:
        raise NumericalError(f"psi integration failed: {sol.message}")
    return t, sol.y[0]
