import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shoreline.evaluator import (
    DEFAULT_EPSILON_FACTOR,
    CRReport,
    DirectionProfile,
    UncoveredDirectionError,
    direction_profile,
    evaluate_cr,
    records_to_ratio,
)
from shoreline.trajectory import Fleet, LogSpiral, Polyline, Ray


def make_profile(records):
    ts = np.array([t for t, _ in records], dtype=float)
    vs = np.array([v for _, v in records], dtype=float)
    cov = float(vs[-1]) if len(records) else 0.0
    return DirectionProfile(theta=0.0, times=ts, values=vs, coverage=cov)


# ---------------------------------------------------------------- profiles


def test_profile_single_ray_own_direction():
    fleet = Fleet((Ray(0.0),))
    prof = direction_profile(fleet, 0.0, horizon=10.0, t_steps=512)
    assert prof.coverage == pytest.approx(10.0)
    # support equals elapsed time along the ray's own bearing, so each
    # record's break time matches the previous record's value
    assert prof.times[0] < 1e-6
    np.testing.assert_allclose(prof.times[1:], prof.values[:-1], atol=1e-7)


def test_profile_oblique_direction_break_times():
    phi = math.pi / 5
    fleet = Fleet((Ray(0.0),))
    prof = direction_profile(fleet, phi, horizon=10.0, t_steps=512)
    assert prof.coverage == pytest.approx(10.0 * math.cos(phi), rel=1e-12)
    # each record time is the instant the previous record value was beaten
    lhs = prof.times[1:] * math.cos(phi)
    np.testing.assert_allclose(lhs, prof.values[:-1], atol=1e-7)


def test_profile_values_strictly_increase():
    fleet = Fleet((Ray(0.0), Ray(2.0)))
    prof = direction_profile(fleet, 1.0, horizon=8.0, t_steps=777)
    assert np.all(np.diff(prof.values) > 0)
    assert np.all(np.diff(prof.times) >= -1e-12)
    assert prof.coverage == pytest.approx(float(prof.values[-1]))


def test_profile_records_property():
    prof = make_profile([(1.0, 0.5), (3.0, 2.0)])
    assert prof.records == [(1.0, 0.5), (3.0, 2.0)]


@given(
    a=st.floats(0.0, 6.28),
    b=st.floats(0.1, 1.5),
    theta=st.floats(0.0, 6.28),
)
@settings(max_examples=30, deadline=None)
def test_profile_invariants_mixed_fleet(a, b, theta):
    fleet = Fleet((Ray(a), LogSpiral(growth=b, start_radius=0.05)))
    prof = direction_profile(fleet, theta, horizon=6.0, t_steps=512)
    assert prof.values.size > 0
    assert np.all(np.diff(prof.values) > 0)
    assert np.all(prof.times >= -1e-12)
    assert np.all(prof.times <= 6.0 + 1e-9)
    # at each break time the support equals the level being broken, and a
    # unit-speed robot starting within 0.05 of the origin cannot project
    # farther than elapsed time plus that start offset
    assert np.all(prof.values[:-1] <= prof.times[1:] + 0.05 + 1e-6)


def test_profile_geometric_spacing_requires_start():
    fleet = Fleet((Ray(0.0),))
    with pytest.raises(ValueError):
        direction_profile(fleet, 0.0, horizon=5.0, spacing="geometric", t_start=0.0)
    prof = direction_profile(
        fleet, 0.0, horizon=5.0, t_steps=256, spacing="geometric", t_start=0.01
    )
    assert prof.coverage == pytest.approx(5.0)


def test_profile_unknown_spacing():
    with pytest.raises(ValueError, match="spacing"):
        direction_profile(Fleet((Ray(0.0),)), 0.0, horizon=5.0, spacing="log")


# ------------------------------------------------------------ ratio logic


def test_records_to_ratio_worked_example():
    prof = make_profile([(1.0, 0.5), (3.0, 2.0)])
    ratio, delta, time = records_to_ratio(prof, epsilon=0.5)
    assert ratio == pytest.approx(6.0)
    assert delta == pytest.approx(0.5)
    assert time == pytest.approx(3.0)


def test_records_to_ratio_single_record_boundary():
    prof = make_profile([(1.0, 0.5)])
    ratio, delta, time = records_to_ratio(prof, epsilon=0.5)
    # only the boundary line just above epsilon is payable
    assert ratio == pytest.approx(2.0)
    assert delta == pytest.approx(0.5)
    assert time == pytest.approx(1.0)


def test_records_to_ratio_boundary_uses_preceding_value():
    # first eligible record is not the first record; the adversary places
    # the line just above the last value below the cutoff
    prof = make_profile([(1.0, 0.9), (2.0, 1.5), (5.0, 4.0)])
    ratio, delta, time = records_to_ratio(prof, epsilon=1.0)
    # candidates: boundary 2.0/1.0 = 2.0, pair 5.0/1.5 = 3.33..
    assert ratio == pytest.approx(5.0 / 1.5)
    assert delta == pytest.approx(1.5)
    assert time == pytest.approx(5.0)


def test_records_to_ratio_window_filters():
    prof = make_profile([(1.0, 0.5), (3.0, 2.0), (10.0, 8.0)])
    ratio, delta, _ = records_to_ratio(prof, epsilon=0.1, window=(1.0, 5.0))
    # only the record value 2.0 sits inside the window; boundary level is
    # max(1.0, 0.5) = 1.0 paid at its break time 3.0
    assert delta == pytest.approx(2.0)
    assert ratio == pytest.approx(10.0 / 2.0)


def test_records_to_ratio_uncovered():
    prof = make_profile([(1.0, 0.5)])
    with pytest.raises(UncoveredDirectionError) as err:
        records_to_ratio(prof, epsilon=0.8)
    assert err.value.theta == 0.0


def test_records_to_ratio_rejects_bad_epsilon():
    prof = make_profile([(1.0, 0.5)])
    with pytest.raises(ValueError):
        records_to_ratio(prof, epsilon=0.0)


# ------------------------------------------------------------- evaluate_cr


@pytest.mark.parametrize("n", [3, 4, 6])
def test_evaluate_cr_uniform_rays(n, ray_fleet):
    # n evenly spread unit-speed rays pay 1/cos(pi/n) against lines whose
    # normal bisects two adjacent headings
    report = evaluate_cr(ray_fleet(n), horizon=10.0, theta_steps=720, t_steps=1024)
    assert report.cr_estimate == pytest.approx(1.0 / math.cos(math.pi / n), abs=1e-3)


def test_evaluate_cr_witness_invariant(ray_fleet):
    report = evaluate_cr(ray_fleet(5), horizon=10.0, theta_steps=720, t_steps=1024)
    assert report.witness.delta > 0
    assert report.cr_estimate == pytest.approx(
        report.witness_time / report.witness.delta, rel=1e-9
    )


def test_evaluate_cr_report_fields(ray_fleet):
    report = evaluate_cr(ray_fleet(4), horizon=8.0, theta_steps=360, t_steps=512)
    assert isinstance(report, CRReport)
    assert report.horizon == 8.0
    assert report.theta_steps == 360
    assert report.t_steps == 512
    assert report.epsilon == pytest.approx(DEFAULT_EPSILON_FACTOR * 8.0)
    assert report.spacing == "uniform"
    assert report.window is None
    assert report.profiles is None
    # worst direction over the grid determines the coverage radius
    assert report.coverage_radius == pytest.approx(8.0 * math.cos(math.pi / 4), rel=1e-3)


def test_evaluate_cr_keep_profiles(ray_fleet):
    report = evaluate_cr(
        ray_fleet(4), horizon=6.0, theta_steps=64, t_steps=256, keep_profiles=True
    )
    assert report.profiles is not None
    assert len(report.profiles) == 64
    assert all(p.coverage >= report.epsilon for p in report.profiles)


def test_evaluate_cr_rotation_by_grid_step(ray_fleet):
    # rotating the fleet by exactly one theta-grid step relabels directions
    # without changing the measured ratio; the window keeps witness offsets
    # >= 1 so bisection jitter on break times stays below 1e-8
    steps = 360
    base = evaluate_cr(ray_fleet(4), horizon=10.0, theta_steps=steps, t_steps=512,
                       window=(1.0, 5.0))
    turned = evaluate_cr(
        ray_fleet(4, offset=2.0 * math.pi / steps),
        horizon=10.0,
        theta_steps=steps,
        t_steps=512,
        window=(1.0, 5.0),
    )
    assert turned.cr_estimate == pytest.approx(base.cr_estimate, rel=1e-7)


def test_evaluate_cr_horizon_scale_free(ray_fleet):
    # ray fleets have no length scale; doubling the horizon (and epsilon
    # with it) leaves the ratio alone
    a = evaluate_cr(ray_fleet(5), horizon=10.0, theta_steps=360, t_steps=512)
    b = evaluate_cr(ray_fleet(5), horizon=20.0, theta_steps=360, t_steps=512)
    assert a.cr_estimate == pytest.approx(b.cr_estimate, rel=1e-9)


def test_evaluate_cr_workers_deterministic(ray_fleet):
    one = evaluate_cr(ray_fleet(6), horizon=10.0, theta_steps=180, t_steps=512,
                      workers=1)
    four = evaluate_cr(ray_fleet(6), horizon=10.0, theta_steps=180, t_steps=512,
                       workers=4)
    assert one.cr_estimate == four.cr_estimate
    assert one.witness == four.witness
    assert one.witness_time == four.witness_time


def test_evaluate_cr_single_ray_uncovered():
    with pytest.raises(UncoveredDirectionError) as err:
        evaluate_cr(Fleet((Ray(0.0),)), horizon=10.0, theta_steps=90, t_steps=256)
    # the unreachable half plane lies behind the ray
    gap = abs(err.value.theta - math.pi)
    assert min(gap, 2 * math.pi - gap) < math.pi / 2 + 1e-9


def test_evaluate_cr_window_above_coverage():
    # a parked robot covers nothing beyond its endpoint, so a window past it
    # captures no records
    fleet = Fleet((Polyline(((0.0, 0.0), (1.0, 0.0))),))
    with pytest.raises(UncoveredDirectionError):
        evaluate_cr(
            fleet, horizon=10.0, theta_steps=8, t_steps=256,
            epsilon=0.5, window=(2.0, 3.0),
        )


def test_evaluate_cr_window_recorded(ray_fleet):
    report = evaluate_cr(
        ray_fleet(4), horizon=10.0, theta_steps=360, t_steps=512, window=(1.0, 5.0)
    )
    assert report.window == (1.0, 5.0)
    assert 1.0 <= report.witness.delta <= 5.0
    assert report.cr_estimate == pytest.approx(math.sqrt(2.0), abs=1e-3)


def test_evaluate_cr_validates_arguments(ray_fleet):
    fleet = ray_fleet(4)
    with pytest.raises(ValueError):
        evaluate_cr(fleet, horizon=0.0)
    with pytest.raises(ValueError):
        evaluate_cr(fleet, horizon=10.0, theta_steps=0)
    with pytest.raises(ValueError):
        evaluate_cr(fleet, horizon=10.0, epsilon=-1.0)
    with pytest.raises(ValueError):
        evaluate_cr(fleet, horizon=10.0, window=(5.0, 1.0))
    with pytest.raises(ValueError):
        evaluate_cr(fleet, horizon=10.0, t_steps=1)


def test_evaluate_cr_refinement_stability(ray_fleet):
    # the bisection polish makes the estimate insensitive to time-grid
    # density for piecewise-linear supports (offsets >= 1 keep the residual
    # break-time jitter out of the ratio)
    coarse = evaluate_cr(ray_fleet(4), horizon=10.0, theta_steps=360, t_steps=128,
                         window=(1.0, 5.0))
    fine = evaluate_cr(ray_fleet(4), horizon=10.0, theta_steps=360, t_steps=4096,
                       window=(1.0, 5.0))
    assert coarse.cr_estimate == pytest.approx(fine.cr_estimate, rel=1e-7)


def test_evaluate_cr_more_robots_never_hurt(ray_fleet):
    # adding robots can only raise support curves, hence can only lower
    # (or keep) every record ratio measured on the same grids
    small = evaluate_cr(ray_fleet(3), horizon=10.0, theta_steps=360, t_steps=512)
    large = evaluate_cr(ray_fleet(6), horizon=10.0, theta_steps=360, t_steps=512)
    assert large.cr_estimate <= small.cr_estimate + 1e-9
