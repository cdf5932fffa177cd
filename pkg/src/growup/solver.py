"""Explicit finite-difference solver for u_t = (u^m)_xx + a(x) u^p.

The scheme is the plain second difference of w = u^m with explicit Euler
in time, on a symmetric cell-centered grid with homogeneous Dirichlet
data on w at +-R.  Each step picks dt from the frozen-coefficient
parabolic bound 0.4 dx^2 / max(m u^{m-1}) (u floored at 1e-8 so fast
diffusion tails cannot collapse dt) capped by the reaction time scale
0.1 (max u)^{1-p}.  A step that would push any cell below -1e-14 is
rejected and retried at half dt; smaller violations are clamped to zero.

The time loop between two output times runs inside a numba kernel; the
python-level step() mirrors one accepted full-grid kernel step exactly
and exists for inspection and tests.  (Symmetric data is evolved on the
x >= 0 half only; reflected left cells then agree with a full-grid pass
to an ulp per step, not bitwise, since the stencil sum order flips.)
Runs record probe values, the field maximum and the discrete energy at
geometrically spaced times, so power laws land equispaced in log t.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .core import ProblemParams

CFL = 0.4           # dt <= CFL dx^2 / max(m u^{m-1})
REACT_CAP = 0.1     # dt <= REACT_CAP (max u)^{1-p}
U_FLOOR = 1e-8      # CFL evaluation floor for m < 1 tails
NEG_TOL = 1e-14     # clamp threshold; worse means reject and halve dt
DT_FLOOR = 1e-14    # dt below DT_FLOOR*max(t, 1) is an underflow
OUT_RATIO = 1.2     # default geometric output spacing

RUNNING = "running"
REACHED_T = "reached-T"
BLEW_UP = "blow-up-detected"
UNDERFLOW = "underflow"


@dataclass(frozen=True)
class Grid:
    """Symmetric cell-centered grid on [-R, R] with an odd cell count.

    Centers sit at integer multiples of dx (0 included), so +-L lie on
    centers exactly when L/dx is an integer.
    """

    R: float
    n: int
    x: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.R <= 0.0:
            raise ValueError(f"R must be positive, got {self.R}")
        if self.n < 3 or self.n % 2 == 0:
            raise ValueError(f"n must be odd and >= 3, got {self.n}")
        dx = self.dx
        object.__setattr__(
            self, "x",
            (np.arange(self.n) - (self.n - 1) // 2) * dx)

    @property
    def dx(self) -> float:
        return 2.0 * self.R / self.n

    def aligned(self, L: float) -> bool:
        """Whether +-L land on cell centers and fit strictly inside."""
        k = L / self.dx
        return L < self.R and abs(k - round(k)) <= 1e-9 * max(1.0, k)


def make_grid(L: float, k: int, R_min: float) -> Grid:
    """Smallest aligned grid with dx = L/k covering at least [-R_min, R_min]."""
    if L <= 0.0 or k < 1:
        raise ValueError(f"need L > 0 and k >= 1, got L={L}, k={k}")
    if R_min <= L:
        raise ValueError(f"need R_min > L, got R_min={R_min}, L={L}")
    dx = L / k
    n = max(int(math.ceil(2.0 * R_min / dx)), 2 * k + 3)
    if n % 2 == 0:
        n += 1
    return Grid(R=0.5 * n * dx, n=n)


def source_weights(grid: Grid, L: float) -> np.ndarray:
    """Fraction of each cell covered by the reaction interval (-L, L).

    1 strictly inside, 1/2 for the cells centered at +-L, 0 beyond; the
    weights integrate to 2L exactly, which keeps the discrete reaction
    and the energy quadrature consistent with each other.
    """
    if not grid.aligned(L):
        raise ValueError(
            f"grid (dx={grid.dx}) is not aligned to L={L}; "
            "choose n so that L/dx is an integer")
    half = 0.5 * grid.dx
    return np.clip((L + half - np.abs(grid.x)) / grid.dx, 0.0, 1.0)


@dataclass
class SolverState:
    t: float
    u: np.ndarray
    dt: float
    status: str = RUNNING
    note: str = ""


# --------------------------------------------------------------------------
# time stepping
# --------------------------------------------------------------------------

@njit(cache=True, fastmath=False)
def _pass(src, dst, a, m, p, r, dt, lo2, hi2, track_min, mirror):
    """One fused explicit step over cells [lo2, hi2], src -> dst.

    Returns (negmin, newmax, newmin): the most negative raw update, and
    the extrema of the clamped field over the pass range.
    """
    negmin = 0.0
    newmax = 0.0
    newmin = np.inf
    # rolling w values; the cell left of the window is zero (or the
    # Dirichlet ghost), so w there is zero either way -- except the
    # mirror cell when the pass starts at the centre
    if mirror and lo2 == 0:
        v = src[1]
        wl = v if m == 1.0 else (v * v if m == 2.0 else v ** m)
    else:
        wl = 0.0
    v = src[lo2]
    wc = v if m == 1.0 else (v * v if m == 2.0 else v ** m)
    for i in range(lo2, hi2 + 1):
        # right of the pass range sits a zero cell or the wall ghost;
        # either way its w is zero
        if i < hi2:
            v = src[i + 1]
            wr = v if m == 1.0 else (v * v if m == 2.0 else v ** m)
        else:
            wr = 0.0
        val = src[i] + r * (wl - 2.0 * wc + wr)
        if a[i] > 0.0:
            val += dt * a[i] * (src[i] if p == 1.0 else src[i] ** p)
        if val < negmin:
            negmin = val
        pv = val if val > 0.0 else 0.0
        dst[i] = pv
        if pv > newmax:
            newmax = pv
        if track_min and pv < newmin:
            newmin = pv
        wl = wc
        wc = wr
    return negmin, newmax, newmin


@njit(cache=True, fastmath=False)
def _advance(u, un, a, m, p, dx, t, t_stop, u_cap, mirror):
    """Advance u in place until t_stop, a u_cap crossing, or dt underflow.

    Returns (t, dt, code, steps) with code 0 = hit t_stop, 1 = u_cap
    crossed, 2 = dt underflow.

    One fused pass per step over the active window (the support plus one
    cell each side).  Cells whose whole stencil is zero stay zero under
    the explicit update, so restricting to the window is exact; the
    window grows by at most one cell per step.

    With mirror=True, u is the right half of an even field (index 0 at
    x=0) and the left neighbour of cell 0 is cell 1.  The half pass is
    bit-identical to the full-grid pass on x >= 0; mirrored left cells
    can differ from a full-grid pass by an ulp per step because the
    stencil sum there runs in the opposite operand order.
    """
    n = u.shape[0]
    inv_dx2 = 1.0 / (dx * dx)
    dt = 0.0
    steps = 0

    # active window: [lo, hi] covers every nonzero cell.  Both buffers
    # stay exactly zero outside it (un is scratch, so scrub it first).
    lo = n
    hi = -1
    for i in range(n):
        un[i] = 0.0
        if u[i] > 0.0:
            if i < lo:
                lo = i
            hi = i
    if hi < 0:
        lo = n // 2
        hi = n // 2
    umax = 0.0
    umin = np.inf
    for i in range(lo, hi + 1):
        if u[i] > umax:
            umax = u[i]
        if u[i] < umin:
            umin = u[i]
    if hi - lo + 1 < n:
        umin = 0.0

    cur = u
    nxt = un
    in_u = True
    code = 0
    while t < t_stop * (1.0 - 1e-13):
        if m >= 1.0:
            base = umax if umax > U_FLOOR else U_FLOOR
        else:
            base = umin if umin > U_FLOOR else U_FLOOR
        dt = CFL * dx * dx / (m * base ** (m - 1.0))
        if umax > 0.0 and p != 1.0:
            cap = REACT_CAP * umax ** (1.0 - p)
        else:
            cap = REACT_CAP
        if cap < dt:
            dt = cap
        if dt < DT_FLOOR * max(t, 1.0):
            code = 2
            break
        if t + dt > t_stop:
            dt = t_stop - t

        lo2 = lo - 1 if lo > 0 else 0
        hi2 = hi + 1 if hi < n - 1 else n - 1
        track_min = m < 1.0
        while True:
            negmin, newmax, newmin = _pass(cur, nxt, a, m, p, dt * inv_dx2,
                                           dt, lo2, hi2, track_min, mirror)
            if negmin >= -NEG_TOL:
                break
            dt *= 0.5
            if dt < DT_FLOOR * max(t, 1.0):
                code = 2
                break
        if code == 2:
            break

        # accept: swap buffers, expand the window onto newborn cells
        tmp = cur
        cur = nxt
        nxt = tmp
        in_u = not in_u
        if cur[lo2] > 0.0:
            lo = lo2
        if cur[hi2] > 0.0:
            hi = hi2
        umax = newmax
        # cells the pass skipped are exactly zero and count toward the min
        umin = newmin if lo2 == 0 and hi2 == n - 1 else min(newmin, 0.0)
        t += dt
        steps += 1
        if umax >= u_cap:
            code = 1
            break
    if code == 0:
        t = t_stop

    if not in_u:
        for i in range(n):
            u[i] = cur[i]
    return t, dt, code, steps


def step(state: SolverState, params: ProblemParams, grid: Grid,
         t_stop: float = math.inf, reaction: bool = True) -> SolverState:
    """One accepted explicit step; mirrors the kernel's arithmetic exactly.

    reaction=False zeroes the source term (pure-diffusion oracle runs).
    """
    if state.status != RUNNING:
        raise ValueError(f"cannot step a {state.status!r} state")
    m, p = params.m, params.p
    u = state.u
    a = source_weights(grid, params.L)
    if not reaction:
        a = np.zeros_like(a)
    dx = grid.dx

    umax = float(np.max(u))
    if m >= 1.0:
        base = max(umax, U_FLOOR)
    else:
        base = max(float(np.min(u)), U_FLOOR)
    dt = CFL * dx * dx / (m * base ** (m - 1.0))
    if umax > 0.0 and p != 1.0:
        dt = min(dt, REACT_CAP * umax ** (1.0 - p))
    else:
        dt = min(dt, REACT_CAP)
    if dt < DT_FLOOR * max(state.t, 1.0):
        return SolverState(t=state.t, u=u.copy(), dt=dt, status=UNDERFLOW,
                           note=f"dt={dt:.3e} underflow at t={state.t:.6e}")
    landed = state.t + dt > t_stop
    if landed:
        dt = t_stop - state.t

    inv_dx2 = 1.0 / (dx * dx)
    while True:
        w = u if m == 1.0 else u ** m
        lap = np.empty_like(u)
        lap[1:-1] = w[:-2] - 2.0 * w[1:-1] + w[2:]
        lap[0] = -2.0 * w[0] + w[1]
        lap[-1] = w[-2] - 2.0 * w[-1]
        un = u + (dt * inv_dx2) * lap
        un = un + dt * a * u ** p
        if float(np.min(un)) >= -NEG_TOL:
            break
        dt *= 0.5
        landed = False
        if dt < DT_FLOOR * max(state.t, 1.0):
            return SolverState(t=state.t, u=u.copy(), dt=dt, status=UNDERFLOW,
                               note=f"dt={dt:.3e} underflow at t={state.t:.6e}")
    # a landing step ends exactly on t_stop, as the kernel's loop does
    t_new = t_stop if landed else state.t + dt
    return SolverState(t=t_new, u=np.maximum(un, 0.0), dt=dt,
                       status=RUNNING)


# --------------------------------------------------------------------------
# energy and recording
# --------------------------------------------------------------------------

def _energy(u: np.ndarray, m: float, p: float, a: np.ndarray,
            dx: float) -> float:
    w = u if m == 1.0 else u ** m
    g = (w[1:] - w[:-1]) / dx
    grad = 0.5 * float(np.sum(g * g)) * dx
    react = m / (p + m) * float(np.sum(a * u ** (p + m))) * dx
    return grad - react


def discrete_energy(state: SolverState, params: ProblemParams,
                    grid: Grid) -> float:
    """E_u = 1/2 int |(u^m)_x|^2 - m/(p+m) int_{-L}^{L} u^{p+m}.

    Midpoint quadrature; the gradient uses the staggered differences over
    interior cell edges, so a constant field has zero gradient energy.
    """
    a = source_weights(grid, params.L)
    return _energy(state.u, params.m, params.p, a, grid.dx)


@dataclass(frozen=True)
class TimeSeries:
    """Immutable probe/energy record of one completed run."""

    probes: tuple[float, ...]
    t: np.ndarray              # strictly increasing
    values: np.ndarray         # shape (len(t), len(probes))
    umax: np.ndarray
    energy: np.ndarray

    def to_csv(self, path: str) -> None:
        cols = ["t"] + [f"u@x={p!r}" for p in self.probes] \
            + ["umax", "energy"]
        rows = [",".join(cols)]
        for i in range(self.t.size):
            vals = [self.t[i], *self.values[i], self.umax[i], self.energy[i]]
            rows.append(",".join(repr(float(v)) for v in vals))
        with open(path, "w") as fh:
            fh.write("\n".join(rows) + "\n")

    @classmethod
    def from_csv(cls, path: str) -> "TimeSeries":
        """Inverse of to_csv; values round-trip exactly (repr floats)."""
        with open(path) as fh:
            header = fh.readline().strip().split(",")
        mid = header[1:-2]
        if header[:1] != ["t"] or header[-2:] != ["umax", "energy"] \
                or not mid or not all(c.startswith("u@x=") for c in mid):
            raise ValueError(f"{path} is not a recorded series file")
        probes = tuple(float(c[4:]) for c in mid)
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(probes=probes, t=data[:, 0],
                   values=data[:, 1:1 + len(probes)],
                   umax=data[:, -2], energy=data[:, -1])


def output_times(T_max: float, t_first: float = 1.0,
                 ratio: float = OUT_RATIO) -> list[float]:
    """Geometric schedule t_first, t_first*ratio, ... capped at T_max."""
    if T_max <= 0.0 or t_first <= 0.0 or ratio <= 1.0:
        raise ValueError("need T_max > 0, t_first > 0, ratio > 1")
    times = []
    tk = t_first
    while tk < T_max * (1.0 - 1e-12):
        times.append(tk)
        tk *= ratio
    times.append(T_max)
    return times


def run(params: ProblemParams, grid: Grid, T_max: float, u_cap: float,
        probes: tuple[float, ...] = (0.0,), t_first: float = 1.0,
        ratio: float = OUT_RATIO, reaction: bool = True,
        u0: np.ndarray | None = None) -> tuple[TimeSeries, SolverState]:
    """Advance from params.init until T_max, a u_cap crossing, or underflow.

    u0 overrides the sampled initial field (oracle comparisons start from
    closed-form profiles); reaction=False zeroes the source term.
    """
    if params.init is None and u0 is None:
        raise ValueError("params.init must be set to run")
    a = source_weights(grid, params.L)          # also checks alignment
    if not reaction:
        a = np.zeros_like(a)
    for xp in probes:
        if abs(xp) > grid.R:
            raise ValueError(f"probe x={xp} outside the domain [-R, R]")
    if u0 is None:
        u = params.initial_values(grid.x)
    else:
        u = np.array(u0, dtype=float)
        if u.shape != grid.x.shape:
            raise ValueError(f"u0 has shape {u.shape}, grid needs "
                             f"{grid.x.shape}")
        if float(np.min(u)) < 0.0:
            raise ValueError("u0 must be nonnegative")
    umax0 = float(np.max(u))
    if u_cap < 1e3 * umax0:
        raise ValueError(
            f"u_cap={u_cap} too low; need at least 1e3*max(u0)={1e3 * umax0}")

    m, p = params.m, params.p
    dx = grid.dx

    # an even field stays even, so evolve only x >= 0 when we can; the
    # half-grid pass matches the full one bitwise on x >= 0
    mirror = bool(np.array_equal(u, u[::-1]))
    if mirror:
        c = (grid.n - 1) // 2
        uw = np.ascontiguousarray(u[c:])
        aw = np.ascontiguousarray(a[c:])
    else:
        uw = u
        aw = a
    un = np.empty_like(uw)

    def full() -> np.ndarray:
        return np.concatenate((uw[:0:-1], uw)) if mirror else uw

    ts: list[float] = [0.0]
    vals: list[np.ndarray] = [np.interp(probes, grid.x, u)]
    umaxs: list[float] = [umax0]
    energies: list[float] = [_energy(u, m, p, a, dx)]

    t = 0.0
    dt = 0.0
    status = RUNNING
    note = ""
    total_steps = 0
    for t_next in output_times(T_max, t_first, ratio):
        t, dt, code, steps = _advance(uw, un, aw, m, p, dx,
                                      t, t_next, u_cap, mirror)
        total_steps += steps
        if t > ts[-1]:
            uf = full()
            ts.append(t)
            vals.append(np.interp(probes, grid.x, uf))
            umaxs.append(float(np.max(uf)))
            energies.append(_energy(uf, m, p, a, dx))
        if code == 1:
            status = BLEW_UP
            note = f"max u crossed u_cap={u_cap:g} at t={t:.6e}"
            break
        if code == 2:
            status = UNDERFLOW
            note = f"dt={dt:.3e} underflow at t={t:.6e} after {total_steps} steps"
            break
    else:
        status = REACHED_T

    series = TimeSeries(probes=tuple(float(xp) for xp in probes),
                        t=np.array(ts), values=np.vstack(vals),
                        umax=np.array(umaxs), energy=np.array(energies))
    return series, SolverState(t=t, u=full(), dt=dt, status=status, note=note)


def comparison_probe(run_a: TimeSeries, run_b: TimeSeries) -> bool:
    """Discrete comparison check: a-values never exceed b-values by more
    than 1e-8 of b's field maximum at any recorded time."""
    if run_a.probes != run_b.probes or run_a.t.shape != run_b.t.shape:
        raise ValueError("series must share probes and schedule")
    if not np.allclose(run_a.t, run_b.t, rtol=1e-12, atol=0.0):
        raise ValueError("series must share the recording times")
    slack = 1e-8 * run_b.umax
    ok_vals = bool((run_a.values <= run_b.values + slack[:, None]).all())
    ok_max = bool((run_a.umax <= run_b.umax + slack).all())
    return ok_vals and ok_max
