import math

import numpy as np
import pytest

from src.backend.expr import Const
from src.backend.harness import independent_alpha_log_alpha_root
from src.backend.models import RECIPROCAL, UNIFORM, Interval, Shape
from src.backend.sugeno import (SugenoSolver, alpha_upper_bound, distribution, distribution_curve, running_sugeno,
                                sugeno_integral, sugeno_oracle)
from src.common.errors import CapReachedError, InvalidInputError

E = math.e
DOMAIN = Interval(0.0, 5.0)


# ---------- 分布函数 ----------
def test_distribution_examples():
    assert distribution("x/(2*exp(1))", DOMAIN, UNIFORM, 0.5) == pytest.approx(5 - E, abs=1e-9)
    assert distribution("exp(1/x)", DOMAIN, UNIFORM, 2.0) == pytest.approx(1 / math.log(2), abs=1e-9)
    assert distribution("3", DOMAIN, UNIFORM, 3.5) == 0.0


def test_distribution_is_nonincreasing():
    alphas = np.linspace(0.0, 3.0, 31)
    F = distribution_curve("(x-2)^2 + 1", DOMAIN, UNIFORM, alphas)
    assert np.all(np.diff(F) <= 1e-12)
    assert F[0] == pytest.approx(5.0)


# ---------- 不动点求解 ----------
def test_example_left_side():
    assert sugeno_integral("x/(2*exp(1))", DOMAIN).value == pytest.approx(5 / (1 + 2 * E), abs=1e-6)


def test_example_right_side():
    assert sugeno_integral("x/2", DOMAIN).value == pytest.approx(5 / 3, abs=1e-6)


def test_exp_reciprocal_equals_root_not_e():
    value = sugeno_integral("exp(1/x)", DOMAIN).value
    assert value == pytest.approx(independent_alpha_log_alpha_root(1.0), abs=1e-6)
    assert value == pytest.approx(1.7632228, abs=1e-6)
    assert abs(value - E) > 0.9


def test_reciprocal_measure():
    # ∫ 1 d(dx/x) on [1, e] = min(1, 1)
    assert sugeno_integral("1", Interval(1.0, E), RECIPROCAL).value == pytest.approx(1.0, abs=1e-12)


def test_constant_rule():
    rng = np.random.default_rng(11)
    for _ in range(50):
        k = float(rng.uniform(0.0, 10.0))
        a = float(rng.uniform(0.0, 5.0))
        b = a + float(rng.uniform(0.1, 5.0))
        value = sugeno_integral(Const(k), Interval(a, b)).value
        assert abs(value - min(k, b - a)) <= 1e-8


def test_certificate_brackets_the_crossing():
    solver = SugenoSolver("x/2", DOMAIN)
    sv = solver.solve()
    assert sv.bracket_width <= 1e-8
    assert sv.alpha_star <= sv.value <= sv.alpha_star + sv.bracket_width
    assert sv.F_at_lower >= sv.alpha_star
    assert sv.F_at_upper < sv.alpha_star + sv.bracket_width
    assert sv.alpha_max == pytest.approx(2.5)
    # 阈值刻画：F(v + 2tol) < v + 2tol，F(v − 2tol) ≥ v − 2tol
    tol = 1e-8
    assert solver.F(sv.value + 2 * tol) < sv.value + 2 * tol
    assert solver.F(sv.value - 2 * tol) >= sv.value - 2 * tol


def test_bounded_by_measure_and_monotone():
    small = sugeno_integral("x/3", DOMAIN).value
    large = sugeno_integral("x/2", DOMAIN).value
    assert small <= large <= DOMAIN.length
    assert sugeno_integral("x/2", Interval(0.0, 4.0)).value <= large


def test_zero_integrand():
    sv = sugeno_integral("0", DOMAIN)
    assert sv.value == 0.0
    assert sv.alpha_max == 0.0


def test_empty_domain():
    assert sugeno_integral("x + 1", Interval(2.0, 2.0)).value == 0.0


def test_cap_reached():
    with pytest.raises(CapReachedError):
        sugeno_integral("1e7", Interval(0.0, 2e6))


def test_invalid_tolerance():
    with pytest.raises(InvalidInputError):
        sugeno_integral("x", DOMAIN, tol=0.0)


def test_alpha_upper_bound():
    assert alpha_upper_bound("x/2", DOMAIN) == pytest.approx(2.5)
    assert alpha_upper_bound("7", Interval(0.0, 3.0)) == 3.0


# ---------- 网格 oracle ----------
def test_oracle_on_examples():
    assert sugeno_oracle("x/2", DOMAIN) == pytest.approx(5 / 3, abs=2.5 / 1e5 + 1e-7)
    assert sugeno_oracle("7", Interval(0.0, 3.0)) == pytest.approx(3.0, abs=1e-12)


def test_oracle_rejects_tiny_grid():
    with pytest.raises(InvalidInputError):
        sugeno_oracle("x", DOMAIN, grid_n=1)


def _assert_matches_oracle(f, domain):
    value = sugeno_integral(f, domain).value
    alpha_max = alpha_upper_bound(f, domain)
    oracle = sugeno_oracle(f, domain)
    assert abs(value - oracle) <= alpha_max / 1e5 + 2e-8


def test_fixed_point_matches_oracle(random_instance):
    rng = np.random.default_rng(5)
    for _ in range(10):
        _assert_matches_oracle(*random_instance(rng))


@pytest.mark.slow
def test_fixed_point_matches_oracle_hundred_instances(random_instance):
    rng = np.random.default_rng(6)
    for _ in range(100):
        _assert_matches_oracle(*random_instance(rng))


# ---------- running Sugeno ----------
XS = np.array([0.0, 0.5, 1.0, 2.0, 5.0])


def test_running_sugeno_nonincreasing():
    out = running_sugeno("1/x", XS, Shape.NONINCREASING, tol=1e-12)
    assert out == pytest.approx([0.0, 0.5, 1.0, 1.0, 1.0], abs=1e-9)


def test_running_sugeno_nondecreasing():
    assert running_sugeno("x", XS, Shape.NONDECREASING, tol=1e-12) == pytest.approx(XS / 2, abs=1e-9)
    assert running_sugeno("1", XS, Shape.NONDECREASING, tol=1e-12) == pytest.approx(np.minimum(XS, 1.0), abs=1e-9)


def test_running_sugeno_unknown_shape_agrees():
    generic = running_sugeno("x", XS, Shape.UNKNOWN, tol=1e-12)
    assert generic == pytest.approx(XS / 2, abs=1e-7)


def test_running_sugeno_relative_accuracy_near_zero():
    xs = np.array([1e-9, 1e-6])
    out = running_sugeno("x", xs, Shape.NONDECREASING, tol=1e-12)
    assert out / xs == pytest.approx([0.5, 0.5], rel=1e-9)
