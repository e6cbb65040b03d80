"""Godunov solver, exact Riemann fans, and the scalar theorem-checkers."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitlaw.core import (
    CellField,
    FluxFunction,
    Grid1D,
    Trajectory,
    bump_test,
    burgers_flux,
    chromatography_flux,
    lp_distance,
    mass,
    project,
)
from splitlaw.errors import InvalidArgument, UnsupportedFlux
from splitlaw.scalar import (
    RiemannFan,
    ScalarConfig,
    cfl_dt,
    comparison_defect,
    critical_point,
    entropy_residual,
    godunov_flux,
    kruzkov_pair,
    max_principle_defect,
    oleinik_excess,
    riemann_eval,
    solve_scalar,
    tvd_defect,
)


def _riemann(grid, left, right):
    return project(lambda x: np.where(np.asarray(x) < 0.0, left, right), grid)


def test_critical_point_interior_minimum():
    assert abs(critical_point(burgers_flux(), -1.0, 2.0)) <= 1e-12
    # argument order does not matter
    assert abs(critical_point(burgers_flux(), 2.0, -1.0)) <= 1e-12


def test_critical_point_monotone_ranges_return_infinities():
    flux = burgers_flux()
    assert critical_point(flux, 0.5, 2.0) == -math.inf
    assert critical_point(flux, -2.0, -0.5) == math.inf
    # v/(1+v) is increasing everywhere, concave convention gives +inf
    assert critical_point(chromatography_flux(), 0.0, 3.0) == math.inf


def test_critical_point_needs_curvature_class():
    linear = FluxFunction(g=lambda v: v, gprime=lambda v: np.ones_like(
        np.asarray(v, dtype=float)), convexity="none")
    with pytest.raises(UnsupportedFlux):
        critical_point(linear, 0.0, 1.0)


def test_godunov_flux_extremes():
    flux = burgers_flux()
    assert godunov_flux(flux, 1.0, 0.0) == pytest.approx(1.0)
    assert godunov_flux(flux, 0.0, 1.0) == pytest.approx(0.0)
    assert godunov_flux(flux, -1.0, 1.0) == pytest.approx(0.0, abs=1e-24)
    assert godunov_flux(flux, 1.0, -1.0) == pytest.approx(1.0)
    chrom = chromatography_flux()
    # increasing flux: always the upwind (left) value
    assert godunov_flux(chrom, 0.5, 2.0) == pytest.approx(0.5 / 1.5)
    assert godunov_flux(chrom, 2.0, 0.5) == pytest.approx(2.0 / 3.0)


@given(
    a=st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
    b=st.floats(min_value=-2.0, max_value=2.0, allow_nan=False),
    d=st.floats(min_value=0.0, max_value=1.0, allow_nan=False),
)
@settings(max_examples=200, deadline=None)
def test_godunov_flux_consistency_and_monotonicity(a, b, d):
    """H(a, a) = g(a); H grows in the left state and shrinks in the right."""
    flux = burgers_flux()
    assert godunov_flux(flux, a, a) == float(flux.g(a))
    base = godunov_flux(flux, a, b)
    assert godunov_flux(flux, a + d, b) >= base - 1e-12
    assert godunov_flux(flux, a, b + d) <= base + 1e-12


def test_riemann_fan_shock_kinds():
    fan = RiemannFan(burgers_flux(), 1.0, 0.0)
    assert fan.kind == "shock"
    assert fan.speed == pytest.approx(1.0)
    assert fan.eval(0.99) == 1.0
    assert fan.eval(1.01) == 0.0
    # concave flux: increasing jump is the compressive one
    chrom = RiemannFan(chromatography_flux(), 0.0, 1.0)
    assert chrom.kind == "shock"
    assert chrom.speed == pytest.approx(0.5)


def test_riemann_fan_rarefaction_profile():
    fan = RiemannFan(burgers_flux(), 0.0, 1.0)
    assert fan.kind == "rarefaction"
    assert fan.edge_speeds == (0.0, 2.0)
    assert fan.eval(-0.1) == 0.0
    assert fan.eval(2.1) == 1.0
    assert fan.eval(1.0) == pytest.approx(0.5, abs=1e-10)
    chrom = RiemannFan(chromatography_flux(), 1.0, 0.0)
    assert chrom.kind == "rarefaction"
    assert chrom.edge_speeds == (0.25, 1.0)
    # g'(v) = 1/2 at v = sqrt(2) - 1
    assert chrom.eval(0.5) == pytest.approx(math.sqrt(2.0) - 1.0, abs=1e-10)


def test_riemann_fan_constant_and_flux_requirements():
    fan = RiemannFan(burgers_flux(), 0.7, 0.7)
    assert fan.kind == "constant"
    assert fan.eval(np.array([-1.0, 0.0, 1.0])).tolist() == [0.7, 0.7, 0.7]
    linear = FluxFunction(g=lambda v: v, gprime=lambda v: 1.0, convexity="none")
    with pytest.raises(UnsupportedFlux):
        RiemannFan(linear, 0.0, 1.0)


def test_riemann_eval_matches_fan_object():
    xi = np.linspace(-1.0, 3.0, 17)
    fan = RiemannFan(burgers_flux(), 0.0, 1.0)
    assert np.array_equal(riemann_eval(burgers_flux(), 0.0, 1.0, xi),
                          fan.eval(xi))


def test_scalar_config_validation():
    with pytest.raises(InvalidArgument):
        ScalarConfig(t_end=1.0, cfl=1.5)
    with pytest.raises(InvalidArgument):
        ScalarConfig(t_end=0.0)
    with pytest.raises(InvalidArgument):
        ScalarConfig(t_end=1.0, fixed_dt=-0.1)
    with pytest.raises(InvalidArgument):
        ScalarConfig(t_end=1.0, record_times=[1.5])


def test_cfl_dt_uses_the_range_speed_bound():
    grid = Grid1D(-2.0, 2.0, 64)
    f = project(lambda x: np.clip(x, 0.0, 1.0), grid)
    # chromatography speed on [0, 1] is at most 1, attained at v = 0
    assert cfl_dt(chromatography_flux(), f, 0.45) == pytest.approx(
        0.45 * grid.dx)


def test_solver_shock_tracks_the_exact_fan():
    grid = Grid1D(-2.0, 2.0, 512)
    v0 = _riemann(grid, 1.0, 0.0)
    cfg = ScalarConfig(t_end=0.5, record_times=[0.5])
    traj = solve_scalar(chromatography_flux(), v0, cfg)
    fan = RiemannFan(chromatography_flux(), 1.0, 0.0)
    exact = CellField(grid, fan.eval(grid.centers() / 0.5))
    assert lp_distance(traj.at(0.5), exact, 1) <= 0.02
    assert tvd_defect(traj) == 0.0
    assert max_principle_defect(traj) == 0.0


def test_solver_mass_balance_through_boundaries():
    # constant-extension ghosts: boundary fluxes are g at the edge states
    grid = Grid1D(-2.0, 2.0, 256)
    v0 = _riemann(grid, 1.0, 0.0)
    cfg = ScalarConfig(t_end=0.5, record_times=[0.25, 0.5])
    traj = solve_scalar(chromatography_flux(), v0, cfg)
    g = chromatography_flux().g
    for t in (0.25, 0.5):
        expected = mass(traj.at(0.0)) + t * (float(g(1.0)) - float(g(0.0)))
        assert mass(traj.at(t)) == pytest.approx(expected, abs=1e-10)


def test_fixed_dt_alignment_is_enforced():
    grid = Grid1D(-2.0, 2.0, 32)
    v0 = _riemann(grid, 1.0, 0.0)
    with pytest.raises(InvalidArgument):
        solve_scalar(chromatography_flux(), v0,
                     ScalarConfig(t_end=1.0, fixed_dt=0.3))
    with pytest.raises(InvalidArgument):
        solve_scalar(chromatography_flux(), v0,
                     ScalarConfig(t_end=1.0, record_times=[0.3],
                                  fixed_dt=0.125))


def test_solver_input_validation():
    grid = Grid1D(-2.0, 2.0, 32)
    v0 = _riemann(grid, 1.0, 0.0)
    linear = FluxFunction(g=lambda v: v, gprime=lambda v: np.ones_like(
        np.asarray(v, dtype=float)), convexity="none")
    with pytest.raises(UnsupportedFlux):
        solve_scalar(linear, v0, ScalarConfig(t_end=0.1))
    with pytest.raises(InvalidArgument):
        solve_scalar(chromatography_flux(), _riemann(grid, -1.0, 0.5),
                     ScalarConfig(t_end=0.1))
    bad = CellField(grid, np.full(32, np.nan))
    with pytest.raises(InvalidArgument):
        solve_scalar(burgers_flux(), bad, ScalarConfig(t_end=0.1))


def test_requested_records_are_present():
    grid = Grid1D(-2.0, 2.0, 64)
    v0 = _riemann(grid, 1.0, 0.0)
    cfg = ScalarConfig(t_end=0.5, record_times=[0.25, 0.5])
    traj = solve_scalar(chromatography_flux(), v0, cfg)
    assert traj.times == [0.0, 0.25, 0.5]
    assert "dt_schedule" in traj.meta
    assert "speed_bound" in traj.meta


def test_oleinik_excess_measures_one_sided_slopes():
    grid = Grid1D(-2.0, 2.0, 64)
    # rarefaction profile at t = 1: slopes exactly at the 1/(c t) bound
    fan = project(lambda x: np.clip(x / 2.0, 0.0, 1.0), grid)
    assert oleinik_excess(fan, 1.0, 2.0) <= 1e-12
    jump_up = project(lambda x: np.where(np.asarray(x) < 0.0, 0.0, 1.0), grid)
    assert oleinik_excess(jump_up, 1.0, 2.0) > 1.0
    # concave orientation looks at the reflected slopes
    jump_dn = project(lambda x: np.where(np.asarray(x) < 0.0, 1.0, 0.0), grid)
    assert oleinik_excess(jump_dn, 1.0, 2.0) == 0.0
    assert oleinik_excess(jump_dn, 1.0, 2.0, orientation="concave") > 1.0
    with pytest.raises(InvalidArgument):
        oleinik_excess(fan, 0.0, 2.0)
    with pytest.raises(InvalidArgument):
        oleinik_excess(fan, 1.0, -1.0)
    with pytest.raises(InvalidArgument):
        oleinik_excess(fan, 1.0, 2.0, orientation="sideways")


def test_kruzkov_pair_values():
    eta, q = kruzkov_pair(burgers_flux(), 0.5)
    assert float(eta(1.5)) == 1.0
    assert float(eta(0.5)) == 0.0
    # sign(v - kappa) * (g(v) - g(kappa))
    assert float(q(1.5)) == pytest.approx(2.25 - 0.25)
    assert float(q(-0.5)) == pytest.approx(-(0.25 - 0.25))
    assert float(q(0.0)) == pytest.approx(-(0.0 - 0.25))


def test_entropy_residual_flags_a_frozen_expansion_shock():
    grid = Grid1D(-1.0, 1.0, 200)
    frozen = CellField(grid, np.where(grid.centers() < 0.0, -1.0, 1.0))
    times = np.linspace(0.0, 0.5, 21)
    traj = Trajectory(times, [frozen.copy() for _ in times])
    pair = kruzkov_pair(burgers_flux(), 0.0)
    tests = [bump_test(0.1, 0.4, -0.5, 0.5)]
    assert entropy_residual(traj, pair, tests) >= 0.1


def test_entropy_residual_small_for_the_computed_rarefaction():
    grid = Grid1D(-2.0, 2.0, 256)
    v0 = _riemann(grid, -1.0, 1.0)
    cfg = ScalarConfig(t_end=0.5,
                       record_times=list(np.linspace(0.0, 0.5, 21)))
    traj = solve_scalar(burgers_flux(), v0, cfg)
    pair = kruzkov_pair(burgers_flux(), 0.0)
    tests = [bump_test(0.1, 0.4, -1.0, 1.0)]
    assert entropy_residual(traj, pair, tests) <= 0.02


def test_entropy_residual_requires_interior_test_support():
    grid = Grid1D(-1.0, 1.0, 16)
    f = CellField(grid, np.zeros(16))
    traj = Trajectory([0.0, 0.5], [f, f.copy()])
    pair = kruzkov_pair(burgers_flux(), 0.0)
    with pytest.raises(InvalidArgument):
        entropy_residual(traj, pair, [bump_test(0.0, 0.4, -0.5, 0.5)])
    with pytest.raises(InvalidArgument):
        entropy_residual(traj, pair, [bump_test(0.1, 0.6, -0.5, 0.5)])


def test_tvd_and_max_principle_defects_on_constructed_data():
    grid = Grid1D(0.0, 1.0, 3)
    a = CellField(grid, [0.0, 1.0, 0.0])
    b = CellField(grid, [0.0, 2.0, 0.0])
    traj = Trajectory([0.0, 1.0], [a, b])
    assert tvd_defect(traj) == pytest.approx(2.0)
    assert max_principle_defect(traj) == pytest.approx(1.0)
    flat = Trajectory([0.0, 1.0], [a, a.copy()])
    assert tvd_defect(flat) == 0.0
    assert max_principle_defect(flat) == 0.0


def test_comparison_defect_vanishes_for_ordered_data():
    grid = Grid1D(-2.0, 2.0, 128)
    cfg = ScalarConfig(t_end=0.25, record_times=[0.25], fixed_dt=0.0078125)
    flux = chromatography_flux()
    traj_u = solve_scalar(flux, _riemann(grid, 1.0, 0.5), cfg)
    traj_v = solve_scalar(flux, _riemann(grid, 0.5, 0.25), cfg)
    assert comparison_defect(traj_u, traj_v, 1.0) == 0.0
    with pytest.raises(InvalidArgument):
        comparison_defect(traj_u, traj_v, 2.0)  # widened window leaves domain


def test_comparison_defect_requires_matching_runs():
    grid_a = Grid1D(-2.0, 2.0, 64)
    grid_b = Grid1D(-2.0, 2.0, 32)
    cfg = ScalarConfig(t_end=0.25, record_times=[0.25], fixed_dt=0.0078125)
    flux = chromatography_flux()
    ta = solve_scalar(flux, _riemann(grid_a, 1.0, 0.5), cfg)
    tb = solve_scalar(flux, _riemann(grid_b, 1.0, 0.5), cfg)
    with pytest.raises(InvalidArgument):
        comparison_defect(ta, tb, 1.0)
