"""Godunov solver and theorem-checkers for the scalar law v_t + g(v)_x = 0.

The solver is first-order explicit Godunov with exact Riemann interface
fluxes. Alongside it live the measurement functions the test suite uses:
exact Riemann fans (the convergence oracle), one-sided slope excess,
entropy residuals against space-time test functions, and the localized
comparison defect.
"""
import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import CellField, Trajectory, total_variation, _window_slice
from .errors import InvalidArgument, NumericalBlowup, UnsupportedFlux

_BISECT_TOL = 1e-12


def _bisect(fn, lo, hi, tol=_BISECT_TOL):
    flo = fn(lo)
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if (fn(mid) > 0.0) == (flo > 0.0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def critical_point(flux, lo, hi):
    """Location of g' = 0 in [lo, hi], or +-inf when g' has one sign there.

    For convex g the point is the minimum, for concave the maximum. The
    sign convention of the return value is chosen so the Godunov selection
    formulas clamp correctly in both cases.
    """
    if lo > hi:
        lo, hi = hi, lo
    dlo = float(flux.gprime(lo))
    dhi = float(flux.gprime(hi))
    if flux.convexity == "convex":
        if dlo >= 0.0:
            return -math.inf
        if dhi <= 0.0:
            return math.inf
    elif flux.convexity == "concave":
        if dlo <= 0.0:
            return -math.inf
        if dhi >= 0.0:
            return math.inf
    else:
        raise UnsupportedFlux("need convex or concave flux")
    return _bisect(lambda z: float(flux.gprime(z)), lo, hi, tol=1e-14)


def godunov_flux(flux, a, b):
    """min of g over [a,b] when a <= b, else max over [b,a]."""
    lo, hi = (a, b) if a <= b else (b, a)
    omega = critical_point(flux, lo, hi)
    g_omega = float(flux.g(omega)) if math.isfinite(omega) else 0.0
    G = _kernels.godunov_fluxes(
        np.array([float(a)]), np.array([float(b)]),
        np.array([float(flux.g(a))]), np.array([float(flux.g(b))]),
        g_omega, omega, 1 if flux.convexity == "convex" else 0)
    return float(G[0])


class RiemannFan:
    """Exact self-similar entropy solution of a two-state problem."""

    def __init__(self, flux, v_l, v_r):
        if flux.convexity not in ("convex", "concave"):
            raise UnsupportedFlux(
                "Riemann fan needs strictly monotone g' between the states")
        self.flux = flux
        self.v_l = float(v_l)
        self.v_r = float(v_r)
        if v_l == v_r:
            self.kind = "constant"
            self.speed = float(flux.gprime(v_l))
        else:
            compressive = (v_l > v_r) if flux.convexity == "convex" else (v_l < v_r)
            if compressive:
                self.kind = "shock"
                self.speed = (float(flux.g(v_r)) - float(flux.g(v_l))) / (v_r - v_l)
            else:
                self.kind = "rarefaction"
                dl = float(flux.gprime(v_l))
                dr = float(flux.gprime(v_r))
                self.edge_speeds = (min(dl, dr), max(dl, dr))

    def eval(self, xi):
        """Solution value at x/t = xi (vectorized)."""
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        if self.kind == "constant":
            out = np.full_like(xi, self.v_l)
        elif self.kind == "shock":
            out = np.where(xi < self.speed, self.v_l, self.v_r)
        else:
            xi1, xi2 = self.edge_speeds
            out = np.where(xi <= xi1, self.v_l, self.v_r)
            mid = (xi > xi1) & (xi < xi2)
            if np.any(mid):
                out[mid] = self._invert_gprime(xi[mid])
        return out if out.shape != (1,) else float(out[0])

    def _invert_gprime(self, xi):
        # vectorized bisection for g'(v) = xi; g' strictly monotone between states
        lo = np.full_like(xi, min(self.v_l, self.v_r))
        hi = np.full_like(xi, max(self.v_l, self.v_r))
        increasing = self.flux.convexity == "convex"
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            gm = np.asarray(self.flux.gprime(mid), dtype=float)
            if increasing:
                take_lo = gm < xi
            else:
                take_lo = gm > xi
            lo = np.where(take_lo, mid, lo)
            hi = np.where(take_lo, hi, mid)
            if np.max(hi - lo) <= _BISECT_TOL:
                break
        return 0.5 * (lo + hi)


def riemann_eval(flux, v_l, v_r, xi):
    return RiemannFan(flux, v_l, v_r).eval(xi)


@dataclass
class ScalarConfig:
    t_end: float
    cfl: float = 0.45
    record_times: list = field(default_factory=list)
    record_fluxes: bool = False
    fixed_dt: float = None

    def __post_init__(self):
        if not (0.0 < self.cfl < 1.0):
            raise InvalidArgument("cfl must lie in (0, 1)")
        if self.t_end <= 0.0:
            raise InvalidArgument("t_end must be positive")
        if self.fixed_dt is not None and self.fixed_dt <= 0.0:
            raise InvalidArgument("fixed_dt must be positive")
        for t in self.record_times:
            if not (0.0 <= t <= self.t_end):
                raise InvalidArgument("record times must lie in [0, t_end]")


def cfl_dt(flux, fieldv, cfl):
    vals = fieldv.values if isinstance(fieldv, CellField) else np.asarray(fieldv)
    L = flux.L_of_range(float(np.min(vals)), float(np.max(vals)))
    dx = fieldv.grid.dx if isinstance(fieldv, CellField) else None
    if dx is None:
        raise InvalidArgument("cfl_dt needs a CellField")
    if L == 0.0:
        return cfl * dx
    return cfl * dx / L


def _record_plan(config):
    """Sorted strictly-positive stop times, always ending at t_end."""
    stops = sorted({float(t) for t in config.record_times if t > 0.0})
    if not stops or stops[-1] != config.t_end:
        if config.t_end not in stops:
            stops.append(config.t_end)
    return stops


def solve_scalar(flux, init, config):
    """March the Godunov scheme to t_end, recording the requested times.

    The returned Trajectory always includes t=0. meta carries the per-step
    dt schedule and (with config.record_fluxes) every interface flux array,
    which is what lets the transport stage replay the run in lockstep.
    """
    flux.check_admissible(init.values)
    if not np.all(np.isfinite(init.values)):
        raise InvalidArgument("initial data must be finite")
    grid = init.grid
    dx = grid.dx
    periodic = init.boundary == "periodic"
    convex = 1 if flux.convexity == "convex" else 0
    if flux.convexity == "none":
        raise UnsupportedFlux("solver needs a convex or concave flux")

    stops = _record_plan(config)
    want_zero = 0.0 in config.record_times or not config.record_times
    v = init.values.astype(float).copy()
    times = [0.0]
    fields = [init.copy()]
    dt_schedule = []
    fluxes = [] if config.record_fluxes else None
    record_steps = []
    speed_bound = 0.0

    t = 0.0
    step = 0
    if config.fixed_dt is not None:
        n_steps = round(config.t_end / config.fixed_dt)
        if abs(n_steps * config.fixed_dt - config.t_end) > 1e-9 * config.t_end:
            raise InvalidArgument("t_end is not a multiple of fixed_dt")
        stop_steps = []
        for s in stops:
            js = round(s / config.fixed_dt)
            if abs(js * config.fixed_dt - s) > 1e-9 * max(s, config.fixed_dt):
                raise InvalidArgument("record time not aligned with fixed_dt")
            stop_steps.append(js)

    stop_iter = iter(stops)
    next_stop = next(stop_iter)
    while True:
        if config.fixed_dt is not None:
            if step >= n_steps:
                break
            dt = config.fixed_dt
            lands = (step + 1) in stop_steps
            t_next = (step + 1) * dt
        else:
            if t >= config.t_end:
                break
            dt = cfl_dt(flux, CellField(grid, v, init.boundary), config.cfl)
            lands = t + dt >= next_stop - 1e-14 * max(1.0, next_stop)
            if lands:
                dt = next_stop - t
                t_next = next_stop
            else:
                t_next = t + dt

        field_now = CellField(grid, v, init.boundary)
        L = flux.L_of_range(float(v.min()), float(v.max()))
        speed_bound = max(speed_bound, L)
        ve = field_now.extended(1)
        gve = np.asarray(flux.g(ve), dtype=float)
        omega = critical_point(flux, float(ve.min()), float(ve.max()))
        g_omega = float(flux.g(omega)) if math.isfinite(omega) else 0.0
        G = _kernels.godunov_fluxes(ve[:-1], ve[1:], gve[:-1], gve[1:],
                                    g_omega, omega, convex)
        v = _kernels.scalar_step(v, np.asarray(G), dt / dx)
        if not np.all(np.isfinite(v)):
            raise NumericalBlowup(step)

        dt_schedule.append(dt)
        if fluxes is not None:
            fluxes.append(np.asarray(G))
        t = t_next
        step += 1
        if lands:
            times.append(t)
            fields.append(CellField(grid, v.copy(), init.boundary))
            record_steps.append(step)
            if config.fixed_dt is None:
                nxt = next(stop_iter, None)
                if nxt is None:
                    break
                next_stop = nxt

    meta = {
        "dt_schedule": dt_schedule,
        "record_steps": record_steps,
        "speed_bound": speed_bound,
        "cfl": config.cfl,
        "flux_name": flux.name,
        "fixed_dt": config.fixed_dt,
        "includes_zero": want_zero,
    }
    if fluxes is not None:
        meta["fluxes"] = fluxes
    return Trajectory(times, fields, meta)


def oleinik_excess(fieldv, t, c, orientation="convex"):
    """Positive part of the worst one-sided slope violation at time t.

    Convex flux bounds forward slopes by 1/(c t); the concave case is the
    x-reflection of that.
    """
    if t <= 0.0:
        raise InvalidArgument("Oleinik bound needs t > 0")
    if c <= 0.0:
        raise InvalidArgument("need a positive convexity constant")
    if orientation not in ("convex", "concave"):
        raise InvalidArgument("orientation must be convex or concave")
    slopes = np.diff(fieldv.values) / fieldv.grid.dx
    bound = 1.0 / (c * t)
    if orientation == "concave":
        slopes = -slopes
    worst = float(np.max(slopes - bound)) if len(slopes) else 0.0
    return max(0.0, worst)


def kruzkov_pair(flux, kappa):
    """Kruzkov entropy |v - kappa| with its flux."""
    gk = float(flux.g(kappa))

    def eta(v):
        return np.abs(v - kappa)

    def q(v):
        return np.sign(v - kappa) * (np.asarray(flux.g(v), dtype=float) - gk)

    return eta, q


def _check_test_fns(traj, test_fns):
    t_end = traj.times[-1]
    for tf in test_fns:
        if tf.t_support[0] <= 0.0:
            raise InvalidArgument("test function must vanish near t=0")
        if tf.t_support[1] >= t_end + 1e-12:
            raise InvalidArgument("test function must vanish before t_end")


def _spacetime_quadrature(traj, cell_arrays_at, test_fn):
    """Trapezoid in t, midpoint in x of  A*phi_t + B*phi_x  over the records.

    cell_arrays_at(j) returns the pair (A_j, B_j) on the grid at record j.
    """
    grid = traj.grid
    x = grid.centers()
    slabs = []
    for j, tj in enumerate(traj.times):
        A, B = cell_arrays_at(j)
        phit = np.asarray(test_fn.dt(tj, x), dtype=float)
        phix = np.asarray(test_fn.dx(tj, x), dtype=float)
        slabs.append(grid.dx * math.fsum(map(float, A * phit + B * phix)))
    total = 0.0
    for j in range(len(slabs) - 1):
        dt = traj.times[j + 1] - traj.times[j]
        total += 0.5 * dt * (slabs[j] + slabs[j + 1])
    return total


def entropy_residual(traj, entropy_pair, test_fns):
    """Largest positive part of the weak entropy residual over the test set.

    Admissible trajectories keep this at quadrature-error scale; an
    expansion shock drives it to a fixed positive level.
    """
    eta, q = entropy_pair
    _check_test_fns(traj, test_fns)
    worst = 0.0
    for tf in test_fns:
        def arrays(j):
            vals = traj.fields[j].values
            return (np.asarray(eta(vals), dtype=float),
                    np.asarray(q(vals), dtype=float))

        r = -_spacetime_quadrature(traj, arrays, tf)
        worst = max(worst, max(0.0, r))
    return worst


def tvd_defect(traj, window=None):
    """Worst growth of total variation over the initial value."""
    tv0 = total_variation(traj.fields[0], window)
    worst = 0.0
    for f in traj.fields[1:]:
        worst = max(worst, total_variation(f, window) - tv0)
    return max(0.0, worst)


def max_principle_defect(traj):
    v0 = traj.fields[0].values
    lo, hi = float(v0.min()), float(v0.max())
    worst = 0.0
    for f in traj.fields[1:]:
        worst = max(worst, float(f.values.max()) - hi, lo - float(f.values.min()))
    return max(0.0, worst)


def _positive_part_integral(fieldv, window):
    idx = _window_slice(fieldv.grid, window)
    vals = fieldv.values[idx]
    return fieldv.grid.dx * math.fsum(float(v) for v in vals if v > 0.0)


def comparison_defect(traj_u, traj_v, R):
    """Kruzkov localized comparison: the L1 positive part of u - v inside
    |x| <= R must not exceed the initial positive part inside the widened
    window |x| <= R + L t."""
    if traj_u.grid != traj_v.grid:
        raise InvalidArgument("trajectories on different grids")
    if traj_u.times != traj_v.times:
        raise InvalidArgument("trajectories with different record times")
    grid = traj_u.grid
    L = max(traj_u.meta.get("speed_bound", 0.0), traj_v.meta.get("speed_bound", 0.0))
    diff0 = traj_u.fields[0].with_values(
        traj_u.fields[0].values - traj_v.fields[0].values)
    worst = 0.0
    for j, t in enumerate(traj_u.times):
        Rt = R + L * t
        if -Rt < grid.x_min or Rt > grid.x_max:
            raise InvalidArgument("comparison window exceeds the domain")
        diff = traj_u.fields[j].with_values(
            traj_u.fields[j].values - traj_v.fields[j].values)
        now = _positive_part_integral(diff, (-R, R))
        init = _positive_part_integral(diff0, (-Rt, Rt))
        worst = max(worst, now - init)
    return max(0.0, worst)
