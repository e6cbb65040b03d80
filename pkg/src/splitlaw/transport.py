"""Continuity equation w_t + (b(v) w)_x = 0 driven by a recorded scalar run.

Two independent routes to the same solution: the matched upwind scheme
that replays the scalar trajectory step for step, and a mollified
characteristics construction whose flow map transports the initial
ratio w/v. Their agreement (after smoothing) is the renormalization
story; the exact discrete invariants |w| <= v and sign preservation
belong to the upwind route alone.
"""
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import CellField, FluxFunction, Trajectory, _window_slice
from .errors import DegenerateDensity, InvalidArgument, OutOfDomain

_SIGN_EPS = 0.0  # b must be strictly positive on the sampled range


def joint_speed_flux(flux, b_of):
    """Same flux, with the speed bound raised to cover the transport stage.

    The lockstep update w -> lam*(v - mu G) + lam_left*(mu G) is a convex
    combination only while mu b(v) <= 1, and b can exceed g' (for v/(1+v)
    it always does). Scalar runs meant to drive a transport stage must
    take their time steps from max(sup|g'|, sup b).
    """

    def L(lo, hi):
        base = flux.L_of_range(lo, hi)
        z = np.linspace(lo, hi, 1025) if hi > lo else np.asarray([lo])
        return max(base, float(np.max(np.abs(np.asarray(b_of(z), dtype=float)))))

    return FluxFunction(g=flux.g, gprime=flux.gprime, convexity=flux.convexity,
                        c=flux.c, L_of_range=L, name=flux.name,
                        admissible_min=flux.admissible_min)


@dataclass
class MollifierSpec:
    epsilon: float
    kind: str = "gaussian"

    def __post_init__(self):
        if self.epsilon <= 0.0:
            raise InvalidArgument("mollifier width must be positive")
        if self.kind != "gaussian":
            raise InvalidArgument("only the gaussian mollifier is available")


def mollify(fieldv, spec):
    """Discrete convolution with a normalized gaussian of width epsilon."""
    dx = fieldv.grid.dx
    if spec.epsilon < dx:
        raise InvalidArgument("mollifier width below the grid scale")
    K = int(math.ceil(6.0 * spec.epsilon / dx))
    offsets = np.arange(-K, K + 1) * dx
    weights = np.exp(-offsets * offsets / (2.0 * spec.epsilon * spec.epsilon))
    weights /= math.fsum(map(float, weights))
    ext = fieldv.extended(K)
    sm = np.convolve(ext, weights[::-1], mode="valid")
    return fieldv.with_values(sm)


class TransportPair:
    """A scalar trajectory v together with the velocity b(v) it induces."""

    def __init__(self, rho_traj, b_of, C=None, window=None):
        self.rho = rho_traj
        self.b_of = b_of
        self.C = C
        self.window = window

    @property
    def grid(self):
        return self.rho.grid

    def rho_at(self, t):
        """Density at time t, linear in t between records."""
        times = self.rho.times
        if t < times[0] - 1e-12 or t > times[-1] + 1e-12:
            raise OutOfDomain("time outside the recorded range")
        j = int(np.searchsorted(times, t))
        if j < len(times) and abs(times[j] - t) <= 1e-12:
            return self.rho.fields[j].copy()
        j = max(1, min(j, len(times) - 1))
        t0, t1 = times[j - 1], times[j]
        theta = (t - t0) / (t1 - t0)
        vals = ((1.0 - theta) * self.rho.fields[j - 1].values
                + theta * self.rho.fields[j].values)
        return self.rho.fields[j].with_values(vals)

    def velocity_at(self, t):
        rho = self.rho_at(t)
        return rho.with_values(np.asarray(self.b_of(rho.values), dtype=float))

    def continuity_residual(self, w_traj, test_fns):
        """Weak residual of w_t + (b w)_x against space-time tests."""
        from .scalar import _check_test_fns, _spacetime_quadrature
        _check_test_fns(w_traj, test_fns)
        worst = 0.0
        for tf in test_fns:
            def arrays(j):
                w = w_traj.fields[j].values
                v = self.rho.fields[j].values
                b = np.asarray(self.b_of(v), dtype=float)
                return w, b * w

            r = _spacetime_quadrature(w_traj, arrays, tf)
            worst = max(worst, abs(r))
        return worst


def solve_continuity_upwind(v_traj, b_of_v, w0):
    """Advance w with the flux-split upwind scheme locked to a scalar run.

    The scalar trajectory must carry its interface fluxes and dt schedule.
    Each step recomputes the scalar update with the same floating-point
    association, so the replayed density matches the recorded one bitwise;
    any mismatch means the inputs are inconsistent and is an error.
    """
    if "fluxes" not in v_traj.meta:
        raise InvalidArgument("scalar trajectory lacks recorded fluxes")
    if w0.grid != v_traj.grid:
        raise InvalidArgument("w0 grid differs from the scalar grid")
    if w0.boundary != v_traj.fields[0].boundary:
        raise InvalidArgument("w0 boundary differs from the scalar run")
    dt_schedule = v_traj.meta["dt_schedule"]
    fluxes = v_traj.meta["fluxes"]
    record_steps = v_traj.meta["record_steps"]
    if len(dt_schedule) != len(fluxes):
        raise InvalidArgument("inconsistent scalar metadata")

    grid = v_traj.grid
    dx = grid.dx
    periodic = 1 if w0.boundary == "periodic" else 0
    v = v_traj.fields[0].values.astype(float).copy()
    w = w0.values.astype(float).copy()

    b0 = np.asarray(b_of_v(v), dtype=float)
    if np.any(b0 <= _SIGN_EPS):
        raise InvalidArgument("transport velocity must be positive")

    times = [v_traj.times[0]]
    fields = [w0.copy()]
    rec = {s: i + 1 for i, s in enumerate(record_steps)}
    for step, (dt, G) in enumerate(zip(dt_schedule, fluxes)):
        G = np.asarray(G, dtype=float)
        mu = dt / dx
        tol = 1e-12 * max(1.0, float(np.max(np.abs(v))))
        if float(np.min(v - mu * G[1:])) < -tol or float(np.min(G)) < -tol:
            raise InvalidArgument(
                "recorded scalar run took steps too large for the transport "
                "stage; solve it with joint_speed_flux")
        v, w = _kernels.upwind_step(v, w, G, mu, periodic)
        if (step + 1) in rec:
            i = rec[step + 1]
            ref = v_traj.fields[i].values
            if not np.array_equal(v, ref):
                raise InvalidArgument(
                    "scalar replay diverged from the recorded trajectory")
            times.append(v_traj.times[i])
            fields.append(CellField(grid, w.copy(), w0.boundary))

    meta = {"locked_to": v_traj.meta.get("flux_name", ""),
            "dt_schedule": list(dt_schedule)}
    return Trajectory(times, fields, meta)


def weighted_sup_norm(w_field, v_field):
    """sup |w|/v with 0/0 counted as 0 and w/0 for w != 0 as inf."""
    w = w_field.values
    v = v_field.values
    out = 0.0
    for wi, vi in zip(w, v):
        if vi == 0.0:
            if wi != 0.0:
                return math.inf
            continue
        out = max(out, abs(wi) / vi)
    return out


def regularized_velocity(pair, spec, t):
    """Smoothed velocity mollify(b rho)/mollify(rho) at time t."""
    rho = pair.rho_at(t)
    b = np.asarray(pair.b_of(rho.values), dtype=float)
    num = mollify(rho.with_values(b * rho.values), spec)
    den = mollify(rho, spec)
    if np.any(den.values <= 0.0):
        raise DegenerateDensity("mollified density vanishes")
    return rho.with_values(num.values / den.values)


class VelocityField:
    """Time-indexed sampler of the regularized velocity."""

    def __init__(self, pair, spec):
        self.pair = pair
        self.spec = spec
        self._cache = {}
        self._pad = None

    def at(self, t):
        key = round(float(t), 14)
        if key not in self._cache:
            self._cache[key] = regularized_velocity(self.pair, self.spec, t)
        return self._cache[key]

    def _padding(self):
        # Characteristics launched inside the box drift at most
        # speed * horizon beyond it; only queries past that margin
        # are genuine escapes.
        if self._pad is None:
            b_max = 0.0
            for f in self.pair.rho.fields:
                b = np.asarray(self.pair.b_of(f.values), dtype=float)
                b_max = max(b_max, float(np.max(np.abs(b))))
            horizon = self.pair.rho.times[-1]
            self._pad = (b_max * horizon + 6.0 * self.spec.epsilon
                         + self.pair.grid.dx)
        return self._pad

    def sample(self, t, x):
        """Velocity at (t, x): linear interpolation between cell midpoints,
        edge values extended through the padded band outside the box."""
        f = self.at(t)
        grid = f.grid
        x = np.asarray(x, dtype=float)
        pad = self._padding()
        if np.any(x < grid.x_min - pad) or np.any(x > grid.x_max + pad):
            raise OutOfDomain("characteristic left the padded domain")
        centers = grid.centers()
        return np.interp(x, centers, f.values)


def flow_map(velocity, t0, t1, x0):
    """RK4 integration of dx/dt = velocity.sample(t, x) from t0 to t1."""
    x = np.atleast_1d(np.asarray(x0, dtype=float)).copy()
    dx = velocity.pair.grid.dx
    h_target = min(dx, velocity.spec.epsilon / 4.0)
    span = t1 - t0
    if span == 0.0:
        return x if np.ndim(x0) else float(x[0])
    n = max(1, int(math.ceil(abs(span) / h_target)))
    h = span / n
    t = t0
    for _ in range(n):
        k1 = velocity.sample(t, x)
        k2 = velocity.sample(t + 0.5 * h, x + 0.5 * h * k1)
        k3 = velocity.sample(t + 0.5 * h, x + 0.5 * h * k2)
        k4 = velocity.sample(t + h, x + h * k3)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return x if np.ndim(x0) else float(x[0])


def solve_by_characteristics(pair, w0, spec, record_times):
    """Transport the smoothed ratio w0/rho0 along regularized characteristics.

    For each record time t, cells are traced backward to time 0 through the
    mollified velocity; the ratio there multiplies the mollified density at
    time t. Smooth route: approximate by construction, used as the
    independent cross-check against the upwind scheme.
    """
    rho0 = pair.rho_at(0.0)
    lam0_num = mollify(w0, spec)
    lam0_den = mollify(rho0, spec)
    if np.any(lam0_den.values <= 0.0):
        raise DegenerateDensity("mollified initial density vanishes")
    lam0 = lam0_num.values / lam0_den.values

    velocity = VelocityField(pair, spec)
    grid = pair.grid
    centers = grid.centers()
    times = []
    fields = []
    for t in record_times:
        if t == 0.0:
            w_vals = lam0 * mollify(rho0, spec).values
        else:
            back = flow_map(_Reversed(velocity, t), 0.0, t, centers)
            lam = np.interp(back, centers, lam0)
            rho_t = mollify(pair.rho_at(t), spec)
            w_vals = lam * rho_t.values
        times.append(float(t))
        fields.append(CellField(grid, w_vals, w0.boundary))
    return Trajectory(times, fields, {"mollifier": spec.epsilon})


class _Reversed:
    """Time-reflected, negated velocity: integrating it forward over [0, t]
    realizes the backward flow of the original field from t to 0."""

    def __init__(self, velocity, t_top):
        self.velocity = velocity
        self.t_top = t_top
        self.pair = velocity.pair
        self.spec = velocity.spec

    def sample(self, s, x):
        return -self.velocity.sample(self.t_top - s, x)


def renorm_residual(pair, w_traj, beta, beta_prime, test_fns):
    """Weak residual of the renormalized equation for u = w/rho.

    Tests  rho beta(u) phi_t + b rho beta(u) phi_x  against each test
    function; for solutions of the continuity equation with the recorded
    density this vanishes up to discretization error.
    """
    from .scalar import _check_test_fns, _spacetime_quadrature
    _check_test_fns(w_traj, test_fns)
    del beta_prime  # reserved for a chain-rule variant; unused here
    worst = 0.0
    for tf in test_fns:
        def arrays(j):
            v = pair.rho.fields[j].values
            w = w_traj.fields[j].values
            u = np.where(v != 0.0, w / np.where(v != 0.0, v, 1.0), 0.0)
            bu = np.asarray(beta(u), dtype=float)
            b = np.asarray(pair.b_of(v), dtype=float)
            return v * bu, b * v * bu

        r = _spacetime_quadrature(w_traj, arrays, tf)
        worst = max(worst, abs(r))
    return worst


def strong_continuity_modulus(traj, t0, window=None):
    """L1 distances to the t0 snapshot at each later record time."""
    f0 = traj.at(t0)
    idx = _window_slice(traj.grid, window)
    out = []
    for t, f in zip(traj.times, traj.fields):
        if t <= t0:
            continue
        d = traj.grid.dx * math.fsum(
            float(a) for a in np.abs(f.values[idx] - f0.values[idx]))
        out.append((t, d))
    return out


def discrete_divergence(values, grid):
    """Centered difference divergence diagnostic for a 1D cell field."""
    v = np.asarray(values, dtype=float)
    out = np.zeros_like(v)
    out[1:-1] = (v[2:] - v[:-2]) / (2.0 * grid.dx)
    out[0] = (v[1] - v[0]) / grid.dx
    out[-1] = (v[-1] - v[-2]) / grid.dx
    return out
