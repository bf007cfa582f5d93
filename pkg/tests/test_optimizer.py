import math

import pytest

from shoreline.optimizer import (
    ConvergenceError,
    OptimizeResult,
    golden_section,
    optimize_spiral,
    spiral_eval_params,
    spiral_fleet,
    steady_state_cr,
)
from shoreline.trajectory import AntipodalOf, LogSpiral


def test_golden_section_quadratic():
    res = golden_section(lambda x: (x - 2.0) ** 2, 0.0, 5.0, tol=1e-8)
    assert res.converged
    assert res.parameter == pytest.approx(2.0, abs=1e-6)
    assert res.value == pytest.approx(0.0, abs=1e-12)


def test_golden_section_nonsmooth():
    res = golden_section(lambda x: abs(x - 1.0), -3.0, 4.0, tol=1e-8)
    assert res.converged
    assert res.parameter == pytest.approx(1.0, abs=1e-6)


def test_golden_section_affine_invariance():
    f = lambda x: (x - 0.7) ** 2
    g = lambda x: 100.0 * (x - 0.7) ** 2 + 5.0
    a = golden_section(f, 0.0, 2.0, tol=1e-9)
    b = golden_section(g, 0.0, 2.0, tol=1e-9)
    # both land inside the same final bracket of width tol
    assert a.parameter == pytest.approx(b.parameter, abs=1e-8)


def test_golden_section_counts_evaluations():
    calls = []
    res = golden_section(lambda x: (calls.append(x), x * x)[1], -1.0, 1.0, tol=1e-3)
    assert res.evaluations == len(calls)


def test_golden_section_iteration_cap():
    res = golden_section(lambda x: x * x, -1.0, 1.0, tol=1e-12, max_iter=3)
    assert not res.converged
    assert res.bracket[1] - res.bracket[0] > 1e-12


def test_golden_section_validates():
    with pytest.raises(ValueError):
        golden_section(lambda x: x, 1.0, 1.0)
    with pytest.raises(ValueError):
        golden_section(lambda x: x, 0.0, 1.0, tol=-1.0)


def test_spiral_fleet_shapes():
    f1 = spiral_fleet(1, 0.3, r0=0.1)
    assert len(f1) == 1
    assert isinstance(f1.robots[0], LogSpiral)
    f2 = spiral_fleet(2, 0.3, r0=0.1)
    assert len(f2) == 2
    assert isinstance(f2.robots[1], AntipodalOf)
    with pytest.raises(ValueError):
        spiral_fleet(3, 0.3)


def test_spiral_eval_params_shape():
    p = spiral_eval_params(1, 0.2125, r0=1.0)
    lo, hi = p["window"]
    assert 0.0 < lo < hi < p["horizon"]
    assert p["epsilon"] == lo
    assert p["spacing"] == "geometric"
    assert p["t_start"] > 0.0
    # window edges keep one full turn of guard from start radius and horizon
    assert lo == pytest.approx(math.exp(2.0 * math.pi * 0.2125))


def test_spiral_eval_params_scale_with_r0():
    a = spiral_eval_params(2, 0.6, r0=1.0)
    b = spiral_eval_params(2, 0.6, r0=0.1)
    assert b["horizon"] == pytest.approx(0.1 * a["horizon"], rel=1e-9)
    assert b["window"][0] == pytest.approx(0.1 * a["window"][0], rel=1e-9)


def test_steady_state_cr_slow_spiral_pays_heavily():
    # at b = 0.1 a lone spiral needs ~10 radius units of arc per unit of
    # radial progress, so the ratio is far above the optimum near 13.8
    assert steady_state_cr(1, 0.1, t_steps=60_000) > 15.0


def test_steady_state_cr_independent_of_start_radius():
    a = steady_state_cr(2, 0.6465, r0=1.0, t_steps=60_000)
    b = steady_state_cr(2, 0.6465, r0=0.05, t_steps=60_000)
    assert a == pytest.approx(b, rel=1e-3)


def test_steady_state_cr_near_known_optimum():
    assert steady_state_cr(2, 0.6465, t_steps=100_000) == pytest.approx(
        5.26443, abs=2e-3
    )


def test_optimize_spiral_rejects_bad_inputs():
    with pytest.raises(ValueError, match="unsupported"):
        optimize_spiral(3)
    with pytest.raises(ValueError):
        optimize_spiral(1, bracket=(0.5, 0.1))
    with pytest.raises(ValueError):
        optimize_spiral(1, prescan=2)


def test_optimize_spiral_quick_pair():
    res = optimize_spiral(
        2, bracket=(0.55, 0.75), tol=5e-3, prescan=4, t_steps=60_000
    )
    assert isinstance(res, OptimizeResult)
    assert res.converged
    assert res.parameter == pytest.approx(0.6465, abs=0.02)
    assert res.value == pytest.approx(5.2644, abs=5e-3)
    assert res.evaluations >= 4


def test_convergence_error_is_runtime_error():
    assert issubclass(ConvergenceError, RuntimeError)
