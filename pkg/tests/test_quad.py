import math

import numpy as np
import pytest

from src.backend.expr import parse
from src.backend.quad import cumulative_from_zero, integrate, integrate_segments, ln_cumulative
from src.common.errors import DivergenceError, EvaluationError, InvalidInputError


def test_smooth_integral():
    res = integrate("1/x", 1.0, 2.0)
    assert res.value == pytest.approx(math.log(2), abs=1e-9)
    assert res.abs_error_estimate <= 1e-9
    assert res.evaluations > 0


def test_integrable_log_singularity_at_zero():
    assert integrate("ln(x)", 0.0, 1.0).value == pytest.approx(-1.0, abs=1e-8)


def test_nonintegrable_singularity_diverges():
    with pytest.raises(DivergenceError) as exc:
        integrate("1/x", 0.0, 1.0)
    assert math.isfinite(exc.value.partial_value)
    assert exc.value.partial_value > 10


def test_linearity():
    f, g = parse("x^2"), parse("exp(x)")
    both = integrate("x^2 + exp(x)", 0.0, 3.0).value
    assert both == pytest.approx(integrate(f, 0.0, 3.0).value + integrate(g, 0.0, 3.0).value, abs=2e-9)
    assert both == pytest.approx(9.0 + math.exp(3) - 1, abs=2e-9)


@pytest.mark.parametrize("text, a, b, exact", [
    ("1/x", 1.0, 2.0, math.log(2)),
    ("exp(x)", 0.0, 3.0, math.exp(3) - 1),
    ("ln(x)", 0.0, 1.0, -1.0),
    ("x^0.5", 0.0, 1.0, 2 / 3),
    ("1/x^0.5", 0.0, 4.0, 4.0),
])
def test_halving_tol_never_increases_true_error(text, a, b, exact):
    tols = [1e-3 / 2 ** k for k in range(24)]
    errors = [abs(integrate(text, a, b, tol).value - exact) for tol in tols]
    for tol, err in zip(tols, errors):
        assert err <= 10 * tol
    for coarse, fine in zip(errors, errors[1:]):
        assert fine <= coarse + 1e-13


@pytest.mark.parametrize("a, b", [(1.0, 1.0), (2.0, 1.0), (0.0, math.inf), (math.nan, 1.0)])
def test_bad_bounds(a, b):
    with pytest.raises(InvalidInputError):
        integrate("x", a, b)


def test_segments_sum_to_whole():
    edges = np.linspace(0.0, 4.0, 17)
    pieces, err, evaluations = integrate_segments("exp(x/2)", edges)
    assert pieces.size == 16
    assert math.fsum(pieces) == pytest.approx(2 * (math.exp(2) - 1), abs=1e-9)
    assert err <= 1e-9


# ---------- [0, x] 上的累积积分 ----------
@pytest.mark.parametrize("x", [0.5, 1.0, 2.0, 5.0])
def test_ln_cumulative_matches_antiderivative(x):
    res = ln_cumulative("x/2", x)
    assert abs(res.value - x * (math.log(x / 2) - 1)) <= 1e-7


def test_ln_cumulative_of_constant_one():
    assert ln_cumulative("1", 3.0).value == pytest.approx(0.0, abs=1e-12)


def test_ln_cumulative_requires_positive_integrand():
    with pytest.raises(EvaluationError):
        ln_cumulative("x-1", 2.0)


def test_ln_cumulative_diverges_for_exp_of_reciprocal():
    with pytest.raises(DivergenceError):
        ln_cumulative("exp(1/x)", 1.0)


def test_cumulative_from_zero_general_integrand():
    assert cumulative_from_zero("x^(-0.5)", 4.0).value == pytest.approx(4.0, abs=1e-8)


def test_cumulative_rejects_nonpositive_x():
    with pytest.raises(InvalidInputError):
        cumulative_from_zero("x", 0.0)
