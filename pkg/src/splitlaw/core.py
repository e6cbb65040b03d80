"""Grids, cell fields, flux descriptions, and the small measurement toolbox
shared by every solver: total variation, mass, Lp distances, weak pairings.

All quantities live on uniform 1D cell-centered grids. Accumulations that
feed tolerance checks go through math.fsum so that the documented 1e-12
bounds hold independent of summation order.
"""
import math

import numpy as np

from .errors import InvalidArgument

BOUNDARY_MODES = ("outflow", "periodic", "constant-extension")


class Grid1D:
    """Uniform cell grid on [x_min, x_max] with n cells."""

    def __init__(self, x_min, x_max, n):
        if not (x_max > x_min):
            raise InvalidArgument("need x_max > x_min")
        if n < 2:
            raise InvalidArgument("need at least 2 cells")
        self.x_min = float(x_min)
        self.x_max = float(x_max)
        self.n = int(n)
        self.dx = (self.x_max - self.x_min) / self.n

    def centers(self):
        return self.x_min + (np.arange(self.n) + 0.5) * self.dx

    def __eq__(self, other):
        return (isinstance(other, Grid1D) and self.x_min == other.x_min
                and self.x_max == other.x_max and self.n == other.n)

    def __hash__(self):
        return hash((self.x_min, self.x_max, self.n))

    def __repr__(self):
        return f"Grid1D({self.x_min}, {self.x_max}, n={self.n})"


def make_grid(x_min, x_max, n):
    return Grid1D(x_min, x_max, n)


class CellField:
    """Cell-averaged values plus a ghost-cell policy.

    'outflow' and 'constant-extension' are two names for the same ghost rule
    (copy the edge cell); both are kept because configs use either term.
    """

    def __init__(self, grid, values, boundary="constant-extension"):
        if boundary not in BOUNDARY_MODES:
            raise InvalidArgument(f"unknown boundary mode {boundary!r}")
        values = np.asarray(values, dtype=float)
        if values.shape != (grid.n,):
            raise InvalidArgument(
                f"values shape {values.shape} does not match grid n={grid.n}")
        self.grid = grid
        self.values = values
        self.boundary = boundary

    def with_values(self, values):
        return CellField(self.grid, values, self.boundary)

    def extended(self, ng=1):
        """Values with ng ghost cells on each side."""
        v = self.values
        if self.boundary == "periodic":
            return np.concatenate([v[-ng:], v, v[:ng]])
        edge_l = np.full(ng, v[0])
        edge_r = np.full(ng, v[-1])
        return np.concatenate([edge_l, v, edge_r])

    def copy(self):
        return CellField(self.grid, self.values.copy(), self.boundary)


def project(fn, grid, boundary="constant-extension"):
    """Sample fn at cell midpoints."""
    return CellField(grid, np.asarray(fn(grid.centers()), dtype=float), boundary)


class FluxFunction:
    """Scalar flux g with derivative, convexity class, and a speed bound.

    convexity is one of 'convex', 'concave', 'none'; c is the uniform
    convexity (or concavity) constant, 0 when unknown. L_of_range defaults to
    sampling |g'| on a 1025-point grid of the requested interval.
    """

    def __init__(self, g, gprime, convexity="none", c=0.0, L_of_range=None,
                 name="flux", admissible_min=None):
        if convexity not in ("convex", "concave", "none"):
            raise InvalidArgument(f"unknown convexity {convexity!r}")
        self.g = g
        self.gprime = gprime
        self.convexity = convexity
        self.c = float(c)
        self.name = name
        self.admissible_min = admissible_min
        self._L = L_of_range

    def L_of_range(self, lo, hi):
        if lo > hi:
            lo, hi = hi, lo
        if self._L is not None:
            return self._L(lo, hi)
        if hi == lo:
            return abs(float(self.gprime(lo)))
        z = np.linspace(lo, hi, 1025)
        return float(np.max(np.abs(self.gprime(z))))

    def check_admissible(self, values):
        if self.admissible_min is not None and np.min(values) < self.admissible_min:
            raise InvalidArgument(
                f"flux {self.name} requires values >= {self.admissible_min}")

    def __repr__(self):
        return f"FluxFunction({self.name}, {self.convexity}, c={self.c})"


def chromatography_flux():
    """g(v) = v/(1+v): increasing, uniformly concave on bounded v >= 0."""
    return FluxFunction(
        g=lambda v: v / (1.0 + v),
        gprime=lambda v: 1.0 / (1.0 + v) ** 2,
        convexity="concave",
        c=0.0,  # range-dependent; use chromatography_c(v_max)
        L_of_range=lambda lo, hi: 1.0 / (1.0 + max(lo, 0.0)) ** 2,
        name="v/(1+v)",
        admissible_min=0.0,
    )


def burgers_flux():
    """g(rho) = rho^2, uniformly convex with g'' = 2."""
    return FluxFunction(
        g=lambda r: r * r,
        gprime=lambda r: 2.0 * r,
        convexity="convex",
        c=2.0,
        name="rho^2",
    )


# chromatography concavity constant depends on the value range; |g''| = 2/(1+v)^3
def chromatography_c(v_max):
    return 2.0 / (1.0 + v_max) ** 3


class Trajectory:
    """Recorded states of a time-dependent cell field.

    times[0] is always the initial time; fields[j] is the CellField at
    times[j]. meta carries solver bookkeeping (dt schedule, recorded fluxes,
    speed bound) consumed by the transport stage and the diagnostics.
    """

    def __init__(self, times, fields, meta=None):
        if len(times) != len(fields):
            raise InvalidArgument("times and fields length mismatch")
        self.times = list(map(float, times))
        self.fields = list(fields)
        self.meta = dict(meta or {})

    @property
    def grid(self):
        return self.fields[0].grid

    def at(self, t):
        for tj, fj in zip(self.times, self.fields):
            if tj == t or abs(tj - t) <= 1e-13 * max(1.0, abs(t)):
                return fj
        raise InvalidArgument(f"t={t} is not a record time")

    def values_matrix(self):
        return np.stack([f.values for f in self.fields])

    def __len__(self):
        return len(self.times)


def _window_slice(grid, window):
    """Indices of cells whose centers lie in the closed window."""
    if window is None:
        return np.arange(grid.n)
    lo, hi = window
    if lo > hi:
        raise InvalidArgument("window lo > hi")
    x = grid.centers()
    return np.nonzero((x >= lo) & (x <= hi))[0]


def total_variation(field, window=None):
    idx = _window_slice(field.grid, window)
    if len(idx) < 2:
        return 0.0
    v = field.values[idx[0]:idx[-1] + 1]
    return math.fsum(abs(float(d)) for d in np.diff(v))


def mass(field, window=None):
    idx = _window_slice(field.grid, window)
    return field.grid.dx * math.fsum(float(field.values[i]) for i in idx)


def lp_distance(a, b, p=1, window=None):
    if a.grid != b.grid:
        raise InvalidArgument("fields on different grids")
    idx = _window_slice(a.grid, window)
    diff = np.abs(a.values[idx] - b.values[idx])
    if p == 1:
        return a.grid.dx * math.fsum(map(float, diff))
    if p in (np.inf, "inf", math.inf):
        return float(diff.max()) if len(diff) else 0.0
    raise InvalidArgument("p must be 1 or inf")


def weak_pairing(field, test_fn, window=None):
    """Midpoint quadrature of v * phi over the window."""
    idx = _window_slice(field.grid, window)
    x = field.grid.centers()[idx]
    phi = np.asarray(test_fn(x), dtype=float)
    return field.grid.dx * math.fsum(
        float(v * p) for v, p in zip(field.values[idx], phi))


class SpaceTimeTest:
    """C^1 space-time test function with analytic partial derivatives."""

    def __init__(self, fn, dt_fn, dx_fn, t_support, x_support):
        self.fn = fn
        self.dt = dt_fn
        self.dx = dx_fn
        self.t_support = (float(t_support[0]), float(t_support[1]))
        self.x_support = (float(x_support[0]), float(x_support[1]))


def _cos_bump(a, b):
    """Nonnegative C^1 bump on (a, b): 0.5*(1 - cos(2 pi s)), s=(x-a)/(b-a)."""
    width = b - a

    def f(x):
        s = (np.asarray(x, dtype=float) - a) / width
        inside = (s > 0) & (s < 1)
        out = np.where(inside, 0.5 * (1.0 - np.cos(2.0 * np.pi * s)), 0.0)
        return out

    def df(x):
        s = (np.asarray(x, dtype=float) - a) / width
        inside = (s > 0) & (s < 1)
        out = np.where(inside,
                       (np.pi / width) * np.sin(2.0 * np.pi * s), 0.0)
        return out

    return f, df


def bump_test(t0, t1, x0, x1):
    """Tensor-product bump supported in (t0,t1) x (x0,x1), nonnegative."""
    ft, dft = _cos_bump(t0, t1)
    fx, dfx = _cos_bump(x0, x1)
    return SpaceTimeTest(
        fn=lambda t, x: ft(t) * fx(x),
        dt_fn=lambda t, x: dft(t) * fx(x),
        dx_fn=lambda t, x: ft(t) * dfx(x),
        t_support=(t0, t1),
        x_support=(x0, x1),
    )
