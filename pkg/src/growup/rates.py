"""Rate extraction: fit growth laws to recorded series and judge them.

fit_power and fit_exponential are least-squares fits of log u against
log t and t respectively, over a time window that defaults to the last
1.5 decades of the record (transients die off early; the tail is where
the asymptotic law lives).  verdict() lines fitted values up against the
predicted laws for (m, p, L) and returns a JSON-ready per-probe table.

Only exponents and rates are estimated, never the constants in front:
the theory pins u between c1*t^alpha and c2*t^alpha without naming c1,
c2, so there is nothing to check them against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .core import BOUNDARY_TOL, ExponentReport, RateForm
from .solver import TimeSeries

# acceptance bands for desk-scale horizons; the laws are asymptotic and
# nothing says how fast they set in, so these are deliberately loose
POWER_TOL = 0.15
EXPONENTIAL_TOL = 0.10

WINDOW_DECADES = 1.5


@dataclass(frozen=True)
class RateFit:
    """One fitted growth law at one probe location."""

    law: RateForm
    fitted: float                 # exponent (power) or rate (exponential)
    window: tuple[float, float]
    residual: float               # RMS of the fit in log u
    probe: float
    log_ratio_end: float | None = None   # log(u)/t at the window end

    def to_dict(self) -> dict:
        return {
            "law": self.law.value,
            "fitted": self.fitted,
            "window": [self.window[0], self.window[1]],
            "residual": self.residual,
            "probe": self.probe,
            "log_ratio_end": self.log_ratio_end,
        }


def default_window(series: TimeSeries,
                   decades: float = WINDOW_DECADES) -> tuple[float, float]:
    """Fitting window: the last `decades` decades of the recorded times.

    The lower end is additionally kept at or above ten times the first
    positive recorded time, so very short records do not sneak their
    start-up transient into the fit.
    """
    if decades <= 0.0:
        raise ValueError(f"decades must be positive, got {decades}")
    pos = series.t[series.t > 0.0]
    if pos.size < 2:
        raise ValueError("series records fewer than two positive times")
    t_hi = float(pos[-1])
    t_lo = max(t_hi / 10.0 ** decades, 10.0 * float(pos[0]))
    if t_lo >= t_hi:
        raise ValueError(
            f"window [{t_lo:g}, {t_hi:g}] is empty; record a longer run")
    return t_lo, t_hi


def _column(series: TimeSeries, probe: float) -> np.ndarray:
    for j, x in enumerate(series.probes):
        if x == probe or abs(x - probe) <= 1e-12 * max(1.0, abs(x)):
            return series.values[:, j]
    raise ValueError(
        f"probe {probe} not recorded; series has probes {series.probes}")


def _windowed(series: TimeSeries, probe: float,
              window: tuple[float, float] | None,
              ) -> tuple[np.ndarray, np.ndarray, tuple[float, float]]:
    t_lo, t_hi = window if window is not None else default_window(series)
    if not 0.0 < t_lo < t_hi:
        raise ValueError(f"need 0 < t_lo < t_hi, got [{t_lo:g}, {t_hi:g}]")
    sel = (series.t >= t_lo) & (series.t <= t_hi)
    if int(np.count_nonzero(sel)) < 3:
        raise ValueError(
            f"window [{t_lo:g}, {t_hi:g}] holds fewer than three samples")
    u = _column(series, probe)[sel]
    if np.any(u <= 0.0):
        raise ValueError(
            f"non-positive values at probe {probe} inside the window; "
            "a power/exponential law cannot be fitted there")
    return series.t[sel], u, (t_lo, t_hi)


def _lsq(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, intercept = np.polyfit(x, y, 1)
    rms = math.sqrt(float(np.mean((y - slope * x - intercept) ** 2)))
    return float(slope), rms


def fit_power(series: TimeSeries, probe: float,
              window: tuple[float, float] | None = None) -> RateFit:
    """Least-squares exponent of u ~ t^a at a probe: slope of log u vs log t.

    The window (given or default) must span at least one decade; a
    shorter stretch cannot tell a power from its local tangent.
    """
    t, u, win = _windowed(series, probe, window)
    if win[1] < 10.0 * win[0] * (1.0 - 1e-12):
        raise ValueError(
            f"window [{win[0]:g}, {win[1]:g}] spans less than one decade")
    slope, rms = _lsq(np.log(t), np.log(u))
    return RateFit(law=RateForm.POWER, fitted=slope, window=win,
                   residual=rms, probe=probe)


def fit_exponential(series: TimeSeries, probe: float,
                    window: tuple[float, float] | None = None) -> RateFit:
    """Least-squares rate of u ~ e^{rt} at a probe: slope of log u vs t.

    log_ratio_end carries the pointwise log(u)/t at the window end; the
    critical theory guarantees that ratio's limit, which is weaker than
    u ~ e^{rt} itself, so both numbers are reported and neither is
    silently preferred.
    """
    t, u, win = _windowed(series, probe, window)
    slope, rms = _lsq(t, np.log(u))
    ratio_end = float(np.log(u[-1]) / t[-1])
    return RateFit(law=RateForm.EXPONENTIAL, fitted=slope, window=win,
                   residual=rms, probe=probe, log_ratio_end=ratio_end)


def flat_upper_bound(t, M: float, p: float):
    """Ceiling from the space-flat comparison solution y' = y^p, y(0) = M.

    (M^{1-p} + (1-p) t)^{1/(1-p)} for p < 1 and M e^t at p = 1; every
    solution maximum, hence every probe, stays below it.  p > 1 is
    rejected (the flat solution then blows up in finite time and bounds
    nothing useful here).
    """
    if M <= 0.0:
        raise ValueError(f"M must be positive, got {M}")
    if p > 1.0 + BOUNDARY_TOL:
        raise ValueError(f"flat bound only applies for p <= 1, got p={p}")
    t = np.asarray(t, dtype=float)
    if np.any(t < 0.0):
        raise ValueError("t must be nonnegative")
    if abs(p - 1.0) <= BOUNDARY_TOL:
        return M * np.exp(t)
    q = 1.0 - p
    return (M ** q + q * t) ** (1.0 / q)


# --------------------------------------------------------------------------
# verdicts
# --------------------------------------------------------------------------

# an exponential fit is the right instrument for both exponential laws;
# the log-exponential one only asserts the pointwise ratio limit
_FIT_FOR = {
    RateForm.POWER: RateForm.POWER,
    RateForm.EXPONENTIAL: RateForm.EXPONENTIAL,
    RateForm.LOG_EXPONENTIAL: RateForm.EXPONENTIAL,
}


def verdict(report: ExponentReport, fits: Sequence[RateFit],
            power_tol: float = POWER_TOL,
            exponential_tol: float = EXPONENTIAL_TOL) -> dict:
    """Compare fitted laws with the predicted ones, probe by probe.

    Probes with |x| < L are judged against the inside-interval law,
    all others against the outside one.  A probe whose side has no
    predicted law (the fast-diffusion critical case outside the
    interval) is reported as "unspecified" and does not count against
    all_pass; a fit whose law form disagrees with the prediction fails
    outright.  The returned dict is JSON-ready.
    """
    rows = []
    passes = []
    covered = {"inside": False, "outside": False}
    for f in fits:
        side = "inside" if abs(f.probe) < report.L - BOUNDARY_TOL \
            else "outside"
        covered[side] = True
        predicted = report.rate_inside if side == "inside" \
            else report.rate_outside
        row: dict = {"probe": f.probe, "side": side, "fit": f.to_dict()}
        if predicted is None:
            row["predicted"] = None
            row["status"] = "unspecified"
        else:
            row["predicted"] = {"form": predicted.form.value,
                                "value": predicted.value}
            tol = power_tol if predicted.form is RateForm.POWER \
                else exponential_tol
            row["tolerance"] = tol
            if f.law is not _FIT_FOR[predicted.form]:
                row["status"] = "fail"
                row["note"] = (f"law form mismatch: fitted {f.law.value}, "
                               f"predicted {predicted.form.value}")
                passes.append(False)
            else:
                rel = abs(f.fitted - predicted.value) / abs(predicted.value)
                row["rel_delta"] = rel
                ok = rel <= tol
                row["status"] = "pass" if ok else "fail"
                passes.append(ok)
        rows.append(row)
    return {
        "m": report.m, "p": report.p, "L": report.L,
        "regime": report.regime.tag.value,
        "tolerances": {"power": power_tol, "exponential": exponential_tol},
        "coverage": covered,
        "probes": rows,
        "all_pass": bool(passes) and all(passes),
    }


def fits_to_csv(fits: Sequence[RateFit], path: str) -> None:
    """Write a fit table, one row per probe."""
    cols = "probe,law,fitted,t_lo,t_hi,residual,log_ratio_end"
    rows = [cols]
    for f in fits:
        tail = "" if f.log_ratio_end is None else repr(f.log_ratio_end)
        rows.append(f"{f.probe!r},{f.law.value},{f.fitted!r},"
                    f"{f.window[0]!r},{f.window[1]!r},{f.residual!r},{tail}")
    with open(path, "w") as fh:
        fh.write("\n".join(rows) + "\n")
