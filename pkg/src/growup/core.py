"""Problem definitions and exponent algebra for

    u_t = (u^m)_xx + 1_{(-L,L)}(x) * u^p,   x in R, t > 0,  m, p, L > 0,

a diffusion equation whose reaction acts only on the interval I = (-L, L).
Solutions that exist globally but become unbounded ("grow-up") do so at
rates governed by two critical exponents,

    p0 = max{1, (m+1)/2}      (below p0: every solution grows up),
    pF = m + 1                (above pF: small data survive, large data blow up),

and, for p < p0, by the power

    alpha = min{ 1/(1-p), 1/(m+1-2p) },

which switches branch at p = m.  At p = p0 the power laws degenerate into
exponentials whose rate depends on the sign of m - 1.  This module holds the
parameter containers, the exponent formulas, the regime partition of the
(m, p) quadrant, and the predicted grow-up rate laws inside and outside I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

# Absolute tolerance for classifying p against the critical values.
BOUNDARY_TOL = 1e-12


class ExponentialRegime:
    """Marker value returned where a power exponent degenerates (p = p0)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):  # pragma: no cover - cosmetic
        return "<exponential regime>"


EXPONENTIAL_REGIME = ExponentialRegime()


def compute_p0(m: float) -> float:
    """Exponent below which every solution grows up: max{1, (m+1)/2}."""
    if m <= 0.0:
        raise ValueError(f"m must be positive, got {m}")
    return max(1.0, 0.5 * (m + 1.0))


def compute_pF(m: float) -> float:
    """Exponent separating the band where all solutions blow up: m + 1."""
    if m <= 0.0:
        raise ValueError(f"m must be positive, got {m}")
    return m + 1.0


def compute_alpha(m: float, p: float) -> float | ExponentialRegime:
    """Grow-up power exponent alpha = min{1/(1-p), 1/(m+1-2p)} for p < p0.

    The min is realized piecewise: 1/(1-p) for p >= m and 1/(m+1-2p) for
    p < m (both equal 1/(1-m) at p = m), which avoids evaluating the other
    branch where its denominator may vanish or change sign.  At p = p0 the
    power law gives way to exponential growth and the tagged
    EXPONENTIAL_REGIME value is returned instead of a float.
    """
    p0 = compute_p0(m)
    if p <= 0.0:
        raise ValueError(f"p must be positive, got {p}")
    if p > p0 + BOUNDARY_TOL:
        raise ValueError(f"no grow-up exponent for p={p} > p0={p0}")
    if p >= p0 - BOUNDARY_TOL:
        return EXPONENTIAL_REGIME
    if p >= m:
        return 1.0 / (1.0 - p)
    return 1.0 / (m + 1.0 - 2.0 * p)


def beta_exponent(alpha: float, m: float) -> float:
    """Spatial scale exponent beta = (alpha*(m-1) + 1)/2 of the rescaling
    u(x,t) = t^alpha * U(x*t^-beta, log t)."""
    return 0.5 * (alpha * (m - 1.0) + 1.0)


def gamma_exponent(alpha: float, p: float) -> float:
    """Forcing exponent gamma = alpha*(p-1) + 1 of the rescaled equation."""
    return alpha * (p - 1.0) + 1.0


# --------------------------------------------------------------------------
# regime partition of the (m, p) quadrant
# --------------------------------------------------------------------------

class RegimeTag(Enum):
    GROW_UP_SUBCRITICAL = "grow-up-subcritical"   # p < p0: power-law grow-up
    GROW_UP_CRITICAL = "grow-up-critical"         # p = p0: exponential grow-up
    BLOW_UP_BAND = "blow-up-band"                 # p0 < p <= pF: all blow up
    COMPETITIVE = "competitive"                   # p > pF: data-dependent


class CriticalBranch(Enum):
    """Sub-classification at p = p0 by the sign of m - 1."""
    M_BELOW_ONE = "m<1"
    M_EQUAL_ONE = "m=1"
    M_ABOVE_ONE = "m>1"


@dataclass(frozen=True)
class Regime:
    tag: RegimeTag
    branch: CriticalBranch | None = None

    def __str__(self):
        if self.branch is None:
            return self.tag.value
        return f"{self.tag.value} ({self.branch.value})"


def classify_regime(m: float, p: float) -> Regime:
    """Place (m, p) in the four-way partition of behaviors.

    Boundary comparisons use BOUNDARY_TOL; p = pF lands in the blow-up band
    (the band is p0 < p <= pF).
    """
    p0 = compute_p0(m)
    pF = compute_pF(m)
    if p <= 0.0:
        raise ValueError(f"p must be positive, got {p}")
    if p < p0 - BOUNDARY_TOL:
        return Regime(RegimeTag.GROW_UP_SUBCRITICAL)
    if p <= p0 + BOUNDARY_TOL:
        if m < 1.0 - BOUNDARY_TOL:
            branch = CriticalBranch.M_BELOW_ONE
        elif m <= 1.0 + BOUNDARY_TOL:
            branch = CriticalBranch.M_EQUAL_ONE
        else:
            branch = CriticalBranch.M_ABOVE_ONE
        return Regime(RegimeTag.GROW_UP_CRITICAL, branch)
    if p <= pF + BOUNDARY_TOL:
        return Regime(RegimeTag.BLOW_UP_BAND)
    return Regime(RegimeTag.COMPETITIVE)


# --------------------------------------------------------------------------
# predicted rate laws
# --------------------------------------------------------------------------

class RateForm(Enum):
    POWER = "power"                    # u ~ t^value
    EXPONENTIAL = "exponential"        # u ~ e^{value * t}
    LOG_EXPONENTIAL = "log-exponential"  # log(u)/t -> value


@dataclass(frozen=True)
class RateLaw:
    form: RateForm
    value: float

    def describe(self) -> str:
        if self.form is RateForm.POWER:
            return f"t^{self.value:g}"
        if self.form is RateForm.EXPONENTIAL:
            return f"e^({self.value:g} t)"
        return f"log u / t -> {self.value:g}"


def predicted_rates(m: float, p: float, L: float,
                    ) -> tuple[RateLaw, RateLaw | None]:
    """Predicted grow-up rate laws (inside I, outside I) for p <= p0.

    Inside I the rate is t^alpha for p < p0 and exponential at p = p0 with
    rate 1 (m < 1), lam0(L) from the linear eigenvalue problem (m = 1), or
    beta_star * L^2 from the critical flux shooting problem (m > 1).

    Outside I the power law is t^{1/(m+1-2p)} for p <= m (the same alpha) and
    t^{1/(1-m)} for m < p <= 1, the latter valid for initial data whose far
    field matches |x|^2 u0^{1-m} ~ 1 (p < 1) or ~ log|x| (p = 1).  At p = p0
    with m < 1 no outside law is asserted and None is returned; for m >= 1
    the exponential rate holds on every compact set.

    Raises ValueError for p > p0 (no grow-up).
    """
    if L <= 0.0:
        raise ValueError(f"L must be positive, got {L}")
    alpha = compute_alpha(m, p)  # validates m, p and rejects p > p0

    if alpha is EXPONENTIAL_REGIME:
        if m < 1.0 - BOUNDARY_TOL:
            return RateLaw(RateForm.EXPONENTIAL, 1.0), None
        if m <= 1.0 + BOUNDARY_TOL:
            from .eigen import lambda0
            lam = lambda0(L)
            law = RateLaw(RateForm.LOG_EXPONENTIAL, lam)
            return law, law
        from .flux import shoot_beta_star
        beta_star = shoot_beta_star(m).beta_star
        law = RateLaw(RateForm.LOG_EXPONENTIAL, beta_star * L * L)
        return law, law

    inside = RateLaw(RateForm.POWER, alpha)
    if p <= m:
        outside = RateLaw(RateForm.POWER, 1.0 / (m + 1.0 - 2.0 * p))
    elif p <= 1.0 + BOUNDARY_TOL:
        outside = RateLaw(RateForm.POWER, 1.0 / (1.0 - m))
    else:
        # p in (max(1, m), p0) requires p0 > 1, i.e. m > 1, i.e. p < m;
        # unreachable, kept as a guard.
        raise ValueError(f"unsupported exponent pair m={m}, p={p}")
    return inside, outside


@dataclass(frozen=True)
class ExponentReport:
    """Everything the exponent algebra can say about one (m, p, L) triple."""

    m: float
    p: float
    L: float
    p0: float
    pF: float
    alpha: float | None          # None in the exponential regime
    beta: float | None           # rescaling exponents, None with alpha
    gamma: float | None
    regime: Regime
    rate_inside: RateLaw | None
    rate_outside: RateLaw | None

    def to_dict(self) -> dict:
        def law(r: RateLaw | None):
            if r is None:
                return None
            return {"form": r.form.value, "value": r.value}
        return {
            "m": self.m, "p": self.p, "L": self.L,
            "p0": self.p0, "pF": self.pF,
            "alpha": self.alpha, "beta": self.beta, "gamma": self.gamma,
            "regime": self.regime.tag.value,
            "critical_branch":
                self.regime.branch.value if self.regime.branch else None,
            "rate_inside": law(self.rate_inside),
            "rate_outside": law(self.rate_outside),
        }


def exponent_report(m: float, p: float, L: float, *,
                    resolve_critical: bool = True) -> ExponentReport:
    """Assemble the full exponent/regime/rate summary for (m, p, L).

    resolve_critical=False skips the eigenvalue / shooting computations that
    the critical rates need (useful for coarse parameter sweeps); the rate
    laws are then omitted at p = p0.
    """
    regime = classify_regime(m, p)
    alpha = beta = gamma = None
    rate_in = rate_out = None
    if regime.tag is RegimeTag.GROW_UP_SUBCRITICAL:
        alpha = compute_alpha(m, p)
        beta = beta_exponent(alpha, m)
        gamma = gamma_exponent(alpha, p)
        rate_in, rate_out = predicted_rates(m, p, L)
    elif regime.tag is RegimeTag.GROW_UP_CRITICAL and resolve_critical:
        rate_in, rate_out = predicted_rates(m, p, L)
    return ExponentReport(m=m, p=p, L=L,
                          p0=compute_p0(m), pF=compute_pF(m),
                          alpha=alpha, beta=beta, gamma=gamma,
                          regime=regime,
                          rate_inside=rate_in, rate_outside=rate_out)


# --------------------------------------------------------------------------
# initial data
# --------------------------------------------------------------------------

INITIAL_KINDS = ("constant-plateau", "gaussian-bump", "power-tail", "exp-tail")


@dataclass(frozen=True)
class InitialData:
    """Symmetric nonnegative initial profile, selected by kind.

    constant-plateau   u0(x) = amplitude
    gaussian-bump      u0(x) = amplitude * exp(-x^2 / (2 sigma^2))
    power-tail         u0(x) = amplitude * (1 + (x/x0)^2)^(-1/(1-m)), with the
                       scale x0 fixed so that |x|^2 u0^{1-m} -> 1; needs m < 1.
                       log_corrected=True multiplies by a slowly varying factor
                       so that |x|^2 u0^{1-m} ~ log|x| instead.
    exp-tail           u0(x) = amplitude * exp(-decay * |x|)
    """

    kind: str
    amplitude: float = 1.0
    sigma: float = 1.0           # gaussian-bump width
    decay: float = 1.0           # exp-tail rate
    log_corrected: bool = False  # power-tail variant

    def __post_init__(self):
        if self.kind not in INITIAL_KINDS:
            raise ValueError(f"unknown initial data kind {self.kind!r}; "
                             f"expected one of {INITIAL_KINDS}")
        if self.amplitude <= 0.0:
            raise ValueError("amplitude must be positive")
        if self.sigma <= 0.0:
            raise ValueError("sigma must be positive")
        if self.decay <= 0.0:
            raise ValueError("decay must be positive")


def build_initial_data(init: InitialData, x: np.ndarray,
                       m: float | None = None,
                       L: float | None = None) -> np.ndarray:
    """Sample the initial profile on the nodes x.

    power-tail needs the diffusion exponent m (< 1) to shape its far field.
    When L is given the result is checked to be strictly positive on
    [-L, L]; a zero there would start the reaction from nothing.
    """
    x = np.asarray(x, dtype=float)
    A = init.amplitude
    if init.kind == "constant-plateau":
        u0 = np.full_like(x, A)
    elif init.kind == "gaussian-bump":
        u0 = A * np.exp(-0.5 * (x / init.sigma) ** 2)
    elif init.kind == "power-tail":
        if m is None:
            raise ValueError("power-tail initial data needs m")
        if m >= 1.0:
            raise ValueError("power-tail initial data needs m < 1")
        # x0 chosen so that x^2 u0^{1-m} -> A^{1-m} x0^2 = 1 at infinity
        x0sq = A ** (m - 1.0)
        q = x * x / x0sq
        u0 = A * (1.0 + q) ** (-1.0 / (1.0 - m))
        if init.log_corrected:
            u0 = u0 * np.log(math.e + q) ** (1.0 / (1.0 - m))
    else:  # exp-tail
        u0 = A * np.exp(-init.decay * np.abs(x))
    if L is not None:
        inside = np.abs(x) <= L
        if inside.any() and not (u0[inside] > 0.0).all():
            raise ValueError("initial data vanishes somewhere on [-L, L]")
    return u0


@dataclass(frozen=True)
class ProblemParams:
    """One full problem instance: exponents, reaction half-width, data."""

    m: float
    p: float
    L: float
    init: InitialData | None = None

    def __post_init__(self):
        if self.m <= 0.0:
            raise ValueError(f"m must be positive, got {self.m}")
        if self.p <= 0.0:
            raise ValueError(f"p must be positive, got {self.p}")
        if self.L <= 0.0:
            raise ValueError(f"L must be positive, got {self.L}")
        if self.init is not None:
            # probe positivity on a fine sample of [-L, L]
            xs = np.linspace(-self.L, self.L, 257)
            build_initial_data(self.init, xs, m=self.m, L=self.L)

    def initial_values(self, x: np.ndarray) -> np.ndarray:
        if self.init is None:
            raise ValueError("no initial data attached to these parameters")
        return build_initial_data(self.init, x, m=self.m, L=self.L)
