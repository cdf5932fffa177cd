"""Command line front end (console script ``growup``).

Subcommands:

    exponents   critical exponents, regime and predicted rates for (m, p, L)
    eigen       principal eigenvalue lam0(L) and its matched mode profile
    profile     outer self-similar profile for 0 < m < 1, m < p <= 1
    shoot-beta  critical rate beta* of the boundary-flux problem (m > 1)
    simulate    run the PDE solver from a config file and emit artifacts
    verdict     fit the recorded series and judge it against the predictions
    sweep       regime map over an (m, p) grid, optionally confirmed by runs

Experiment configs are ini-style key = value files; ExperimentConfig
documents the sections.  The env var GROWUP_OUT, when set, is prepended
to every relative output directory.  Artifact files are written via a
temp-then-rename, and a command that fails part way removes whatever it
had already written, so an output directory never holds a torn set.

Exit codes: 0 ok, 1 invalid input, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import (BOUNDARY_TOL, InitialData, ProblemParams, RateForm,
                   build_initial_data, classify_regime, exponent_report,
                   RegimeTag)
from .eigen import eigen_profile, h, lambda0
from .errors import NumericalError
from .flux import shoot_beta_star
from .rates import fit_exponential, fit_power, fits_to_csv, verdict
from .selfsim import SimilarityExponents, reconstruct_profile, separatrix
from .solver import (BLEW_UP, REACHED_T, UNDERFLOW, Grid, TimeSeries,
                     make_grid, run, source_weights)


# --------------------------------------------------------------------------
# experiment configuration
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment: problem, datum, grid, horizon, probes, fit window.

    File form (ini): sections [params] m/p/L, [initial] kind/amplitude/
    sigma/decay/log_corrected, [grid] R/n, [horizon] T_max/u_cap,
    [probes] x (comma separated), optional [fit] window = t_lo, t_hi,
    [output] dir.  to_text() and from_text() round-trip exactly.
    """

    m: float
    p: float
    L: float
    init: InitialData
    R: float
    n: int
    T_max: float
    u_cap: float
    probes: tuple[float, ...] = (0.0,)
    window: tuple[float, float] | None = None
    outdir: str = "out"

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        cp = configparser.ConfigParser()
        cp.optionxform = str
        try:
            cp.read_string(text)
            init = InitialData(
                kind=cp.get("initial", "kind"),
                amplitude=cp.getfloat("initial", "amplitude", fallback=1.0),
                sigma=cp.getfloat("initial", "sigma", fallback=1.0),
                decay=cp.getfloat("initial", "decay", fallback=1.0),
                log_corrected=cp.getboolean("initial", "log_corrected",
                                            fallback=False))
            win = cp.get("fit", "window", fallback="").strip()
            return cls(
                m=cp.getfloat("params", "m"),
                p=cp.getfloat("params", "p"),
                L=cp.getfloat("params", "L"),
                init=init,
                R=cp.getfloat("grid", "R"),
                n=cp.getint("grid", "n"),
                T_max=cp.getfloat("horizon", "T_max"),
                u_cap=cp.getfloat("horizon", "u_cap"),
                probes=_floats(cp.get("probes", "x", fallback="0.0")),
                window=_pair(win) if win else None,
                outdir=cp.get("output", "dir", fallback="out"))
        except (configparser.Error, KeyError, TypeError) as exc:
            raise ValueError(f"bad config: {exc}") from exc

    @classmethod
    def from_file(cls, path: str) -> "ExperimentConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ValueError(f"cannot read config {path}: {exc}") from exc
        return cls.from_text(text)

    def to_text(self) -> str:
        i = self.init
        lines = [
            "[params]",
            f"m = {self.m!r}", f"p = {self.p!r}", f"L = {self.L!r}", "",
            "[initial]",
            f"kind = {i.kind}",
            f"amplitude = {i.amplitude!r}",
            f"sigma = {i.sigma!r}",
            f"decay = {i.decay!r}",
            f"log_corrected = {'true' if i.log_corrected else 'false'}", "",
            "[grid]", f"R = {self.R!r}", f"n = {self.n}", "",
            "[horizon]",
            f"T_max = {self.T_max!r}", f"u_cap = {self.u_cap!r}", "",
            "[probes]", f"x = {', '.join(repr(x) for x in self.probes)}", "",
        ]
        if self.window is not None:
            lines += ["[fit]",
                      f"window = {self.window[0]!r}, {self.window[1]!r}", ""]
        lines += ["[output]", f"dir = {self.outdir}", ""]
        return "\n".join(lines)

    def validate(self) -> tuple[ProblemParams, Grid]:
        """Construct and cross-check every piece before any run starts."""
        params = ProblemParams(self.m, self.p, self.L, self.init)
        grid = Grid(R=self.R, n=self.n)
        source_weights(grid, self.L)          # alignment
        u0 = build_initial_data(self.init, grid.x, m=self.m, L=self.L)
        if self.u_cap < 1e3 * float(u0.max()):
            raise ValueError(
                f"u_cap={self.u_cap:g} below 1e3 * max(u0)={u0.max():g}")
        for x in self.probes:
            if abs(x) > grid.R:
                raise ValueError(f"probe x={x} outside the grid [-R, R]")
        if self.T_max <= 0.0:
            raise ValueError(f"T_max must be positive, got {self.T_max}")
        if self.window is not None:
            lo, hi = self.window
            if not 0.0 < lo < hi:
                raise ValueError(f"fit window [{lo}, {hi}] is not ordered")
        return params, grid


def _floats(text: str) -> tuple[float, ...]:
    parts = [s.strip() for s in text.split(",") if s.strip()]
    return tuple(float(s) for s in parts)


def _pair(text: str) -> tuple[float, float]:
    vals = _floats(text)
    if len(vals) != 2:
        raise ValueError(f"expected two comma-separated numbers, got {text!r}")
    return vals[0], vals[1]


# --------------------------------------------------------------------------
# artifact plumbing
# --------------------------------------------------------------------------

def _resolve_out(outdir: str) -> Path:
    root = os.environ.get("GROWUP_OUT", "")
    path = Path(outdir)
    if root and not path.is_absolute():
        path = Path(root) / path
    path.mkdir(parents=True, exist_ok=True)
    return path


def _atomic(path: Path, writer, sink: list[Path]) -> None:
    """Run writer on a temp name, rename into place, record the file."""
    tmp = path.with_name(path.name + ".tmp")
    try:
        writer(str(tmp))
        os.replace(tmp, path)
    except BaseException:
        tmp.unlink(missing_ok=True)
        raise
    sink.append(path)


def _text(content: str):
    return lambda p: Path(p).write_text(content)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _cleanup(written: list[Path]) -> None:
    for f in written:
        f.unlink(missing_ok=True)


def _plot_csv(series: TimeSeries) -> str:
    """t against log10 of each probe column and of umax; blanks where
    a value is zero (log of a dead probe is not a number worth plotting)."""
    cols = ["t"] + [f"log10_u@x={x!r}" for x in series.probes] \
        + ["log10_umax"]
    rows = [",".join(cols)]
    for i in range(series.t.size):
        vals = [repr(float(series.t[i]))]
        for v in (*series.values[i], series.umax[i]):
            vals.append(repr(math.log10(v)) if v > 0.0 else "")
        rows.append(",".join(vals))
    return "\n".join(rows) + "\n"


def _energy_csv(series: TimeSeries) -> str:
    rows = ["t,energy"]
    rows += [f"{float(t)!r},{float(e)!r}"
             for t, e in zip(series.t, series.energy)]
    return "\n".join(rows) + "\n"


def _xy_csv(header: str, *columns) -> str:
    rows = [header]
    for vals in zip(*columns):
        rows.append(",".join(repr(float(v)) for v in vals))
    return "\n".join(rows) + "\n"


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def cmd_exponents(args) -> int:
    rep = exponent_report(args.m, args.p, args.L)
    d = rep.to_dict()
    branch = f"/{d['critical_branch']}" if d["critical_branch"] else ""
    print(f"regime: {d['regime']}{branch}   (p0={rep.p0:g}, pF={rep.pF:g})")
    for side, law in (("inside", rep.rate_inside),
                      ("outside", rep.rate_outside)):
        print(f"rate {side} I: "
              f"{law.describe() if law is not None else 'unspecified'}")
    print(_json(d), end="")
    if args.out:
        written: list[Path] = []
        _atomic(_resolve_out(args.out) / "report.json",
                _text(_json(d)), written)
    return 0


def cmd_eigen(args) -> int:
    lam = lambda0(args.L)
    prof = eigen_profile(lam, args.L)
    print(f"lambda0({args.L:g}) = {lam:.12g}")
    if args.out:
        outdir = _resolve_out(args.out)
        r = np.linspace(0.0, 3.0 * args.L, 601)
        report = {"L": args.L, "lambda0": lam, "C1": prof.C1, "C2": prof.C2,
                  "h_residual": h(lam, args.L)}
        written: list[Path] = []
        try:
            _atomic(outdir / "profile.csv",
                    _text(_xy_csv("r,phi", r, prof(r))), written)
            _atomic(outdir / "report.json", _text(_json(report)), written)
        except BaseException:
            _cleanup(written)
            raise
    return 0


def cmd_profile(args) -> int:
    exps = SimilarityExponents.from_parameters(args.m, args.p)
    path = separatrix(exps.alpha, exps.beta, args.m)
    prof = reconstruct_profile(path, f0=args.f0)
    x_end = float(path.X[-1])
    print(f"alpha = {exps.alpha:g}, beta = {exps.beta:g}, "
          f"closure {exps.closure.name}, {prof.asymptotic_class} tail")
    print(f"far-field X = {x_end:.8g}  (limit {exps.X_limit:g})")
    if args.out:
        outdir = _resolve_out(args.out)
        report = {"m": args.m, "p": args.p,
                  "alpha": exps.alpha, "beta": exps.beta,
                  "closure": exps.closure.name, "f0": args.f0,
                  "asymptotic_class": prof.asymptotic_class,
                  "X_end": x_end, "X_limit": exps.X_limit}
        written: list[Path] = []
        try:
            _atomic(outdir / "profile.csv",
                    _text(_xy_csv("xi,f,df", prof.xi, prof.f, prof.df)),
                    written)
            _atomic(outdir / "report.json", _text(_json(report)), written)
        except BaseException:
            _cleanup(written)
            raise
    return 0


def cmd_shoot_beta(args) -> int:
    res = shoot_beta_star(args.m, tol=args.tol)
    d = {"m": res.m, "p": res.p, "beta_star": res.beta_star,
         "bracket": [res.bracket[0], res.bracket[1]],
         "iterations": res.iterations}
    print(_json(d), end="")
    if args.out:
        written: list[Path] = []
        _atomic(_resolve_out(args.out) / "report.json",
                _text(_json(d)), written)
    return 0


def cmd_simulate(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    params, grid = cfg.validate()
    outdir = _resolve_out(cfg.outdir)
    series, state = run(params, grid, cfg.T_max, cfg.u_cap,
                        probes=cfg.probes)
    if state.status == UNDERFLOW:
        raise NumericalError(f"run gave up: {state.note}")
    report = {
        "params": {"m": cfg.m, "p": cfg.p, "L": cfg.L},
        "initial": {"kind": cfg.init.kind, "amplitude": cfg.init.amplitude,
                    "sigma": cfg.init.sigma, "decay": cfg.init.decay,
                    "log_corrected": cfg.init.log_corrected},
        "grid": {"R": grid.R, "n": grid.n, "dx": grid.dx},
        "horizon": {"T_max": cfg.T_max, "u_cap": cfg.u_cap},
        "status": state.status, "note": state.note,
        "t_final": state.t,
        "umax_final": float(series.umax[-1]),
        "energy_final": float(series.energy[-1]),
    }
    written: list[Path] = []
    try:
        _atomic(outdir / "series.csv", series.to_csv, written)
        _atomic(outdir / "energy.csv", _text(_energy_csv(series)), written)
        _atomic(outdir / "profile.csv",
                _text(_xy_csv("x,u", grid.x, state.u)), written)
        _atomic(outdir / "plot.csv", _text(_plot_csv(series)), written)
        _atomic(outdir / "report.json", _text(_json(report)), written)
    except BaseException:
        _cleanup(written)
        raise
    print(f"simulate: {state.status} at t = {state.t:g}, "
          f"max u = {series.umax[-1]:.6g}")
    print(f"wrote {len(written)} files to {outdir}")
    return 0


def cmd_verdict(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    cfg.validate()
    rep = exponent_report(cfg.m, cfg.p, cfg.L)
    if rep.rate_inside is None and rep.rate_outside is None:
        raise ValueError(f"regime '{rep.regime.tag.value}' predicts no "
                         "grow-up rates; nothing to verify")
    outdir = _resolve_out(cfg.outdir)
    series_path = outdir / "series.csv"
    if not series_path.exists():
        raise ValueError(f"{series_path} not found; run simulate first")
    series = TimeSeries.from_csv(str(series_path))
    fits = []
    for x in cfg.probes:
        law = rep.rate_inside if abs(x) < cfg.L - BOUNDARY_TOL \
            else rep.rate_outside
        if law is not None and law.form is RateForm.POWER:
            fits.append(fit_power(series, x, cfg.window))
        else:
            fits.append(fit_exponential(series, x, cfg.window))
    out = verdict(rep, fits)
    written: list[Path] = []
    try:
        _atomic(outdir / "fits.csv",
                lambda p: fits_to_csv(fits, p), written)
        _atomic(outdir / "verdict.json", _text(_json(out)), written)
    except BaseException:
        _cleanup(written)
        raise
    judged = [r for r in out["probes"] if r["status"] != "unspecified"]
    npass = sum(r["status"] == "pass" for r in judged)
    word = "PASS" if out["all_pass"] else "FAIL"
    print(f"verdict: {word} ({npass}/{len(judged)} judged probes within "
          f"tolerance; {len(out['probes']) - len(judged)} unspecified)")
    return 0


_GROW_TAGS = (RegimeTag.GROW_UP_SUBCRITICAL, RegimeTag.GROW_UP_CRITICAL)


def _confirm_cell(m: float, p: float, L: float) -> tuple[str, str]:
    """Short desk-scale run; returns (observed status, consistency).

    Crossing the cap is consistent with grow-up as well as blow-up (any
    unbounded solution crosses any cap), so grow-up cells confirm on
    either growth-to-horizon or a cap crossing, and a blow-up-band cell
    that merely reaches the horizon is indeterminate, not wrong.
    """
    grid = make_grid(L, 2, 6.0 * L)
    params = ProblemParams(m, p, L, InitialData("gaussian-bump"))
    series, state = run(params, grid, 8.0, 1e6)
    tag = classify_regime(m, p).tag
    if tag in _GROW_TAGS:
        grew = float(series.umax[-1]) > 1.5 * float(series.umax[0])
        ok = state.status == BLEW_UP or (state.status == REACHED_T and grew)
        return state.status, ("yes" if ok else "no")
    if tag is RegimeTag.BLOW_UP_BAND:
        return state.status, \
            ("yes" if state.status == BLEW_UP else "indeterminate")
    return state.status, "yes"    # competitive: both behaviours admissible


def cmd_sweep(args) -> int:
    cells = [(mi, pi) for mi in args.m for pi in args.p]

    def one(cell: tuple[float, float]) -> dict:
        mi, pi = cell
        row = {"m": mi, "p": pi, "regime": "", "branch": "",
               "observed": "", "consistent": "", "note": ""}
        try:
            reg = classify_regime(mi, pi)
            row["regime"] = reg.tag.value
            row["branch"] = reg.branch.value if reg.branch else ""
            if args.confirm:
                row["observed"], row["consistent"] = \
                    _confirm_cell(mi, pi, args.L)
        except Exception as exc:           # record, keep sweeping
            row["regime"] = "error"
            row["note"] = str(exc)
        return row

    workers = max(1, min(args.workers, len(cells) or 1))
    if cells:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            rows = list(ex.map(one, cells))
    else:
        rows = []
    lines = ["m,p,regime,branch,observed,consistent,note"]
    for r in rows:
        note = r["note"].replace("\n", " ").replace(",", ";")
        lines.append(f'{r["m"]!r},{r["p"]!r},{r["regime"]},{r["branch"]},'
                     f'{r["observed"]},{r["consistent"]},{note}')
    outdir = _resolve_out(args.out)
    written: list[Path] = []
    _atomic(outdir / "sweep.csv", _text("\n".join(lines) + "\n"), written)
    print(f"sweep: {len(rows)} cells -> {outdir / 'sweep.csv'}")
    return 0


# --------------------------------------------------------------------------
# argument parsing
# --------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):          # usage errors are invalid input
        raise ValueError(message)


def _build_parser() -> _Parser:
    ap = _Parser(prog="growup",
                 description="grow-up laboratory for "
                             "u_t = (u^m)_xx + 1_{(-L,L)} u^p")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    x = sub.add_parser("exponents", help="exponents, regime, rate laws")
    x.add_argument("--m", type=float, required=True)
    x.add_argument("--p", type=float, required=True)
    x.add_argument("--L", type=float, default=1.0)
    x.add_argument("--out", help="also write report.json under this dir")
    x.set_defaults(func=cmd_exponents)

    e = sub.add_parser("eigen", help="principal eigenvalue lam0(L)")
    e.add_argument("--L", type=float, required=True)
    e.add_argument("--out", help="write profile.csv and report.json")
    e.set_defaults(func=cmd_eigen)

    f = sub.add_parser("profile",
                       help="outer self-similar profile (0<m<1, m<p<=1)")
    f.add_argument("--m", type=float, required=True)
    f.add_argument("--p", type=float, required=True)
    f.add_argument("--f0", type=float, default=1.0,
                   help="origin value f(0) (default 1)")
    f.add_argument("--out", help="write profile.csv and report.json")
    f.set_defaults(func=cmd_profile)

    b = sub.add_parser("shoot-beta", help="critical flux rate beta* (m>1)")
    b.add_argument("--m", type=float, required=True)
    b.add_argument("--tol", type=float, default=1e-6)
    b.add_argument("--out", help="also write report.json under this dir")
    b.set_defaults(func=cmd_shoot_beta)

    s = sub.add_parser("simulate", help="run the solver from a config file")
    s.add_argument("--config", required=True)
    s.set_defaults(func=cmd_simulate)

    v = sub.add_parser("verdict",
                       help="judge a recorded run against predicted rates")
    v.add_argument("--config", required=True)
    v.set_defaults(func=cmd_verdict)

    w = sub.add_parser("sweep", help="regime map over an (m, p) grid")
    w.add_argument("--m", type=_floats, required=True,
                   help="comma-separated m values")
    w.add_argument("--p", type=_floats, required=True,
                   help="comma-separated p values")
    w.add_argument("--L", type=float, default=1.0)
    w.add_argument("--confirm", action="store_true",
                   help="run a short solve per cell and check consistency")
    w.add_argument("--workers", type=int, default=4)
    w.add_argument("--out", default=".", help="directory for sweep.csv")
    w.set_defaults(func=cmd_sweep)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        return args.func(args)
    except NumericalError as exc:
        print(f"growup: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"growup: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
