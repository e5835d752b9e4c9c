import math

import pytest

from src.backend.levelset import LevelSetScanner, detect_shape, level_set, probe, tail_value
from src.backend.models import Interval, LevelSetOptions, Shape
from src.common.errors import EvaluationError, InvalidInputError

DOMAIN = Interval(0.0, 5.0)


def test_increasing_level_set():
    u = level_set("x/(2*exp(1))", DOMAIN, 0.5)
    assert len(u) == 1
    iv = u.intervals[0]
    assert iv.lo == pytest.approx(math.e, abs=1e-9)
    assert iv.hi == 5.0


def test_decreasing_level_set_with_singular_endpoint():
    u = level_set("exp(1/x)", DOMAIN, 2.0)
    assert len(u) == 1
    iv = u.intervals[0]
    assert iv.lo == 0.0
    assert iv.hi == pytest.approx(1 / math.log(2), abs=1e-9)


def test_declared_shape_gives_same_set():
    scanned = level_set("exp(1/x)", DOMAIN, 2.0)
    declared = level_set("exp(1/x)", DOMAIN, 2.0, LevelSetOptions(declared_shape=Shape.NONINCREASING))
    assert len(declared) == len(scanned) == 1
    assert declared.intervals[0].hi == pytest.approx(scanned.intervals[0].hi, abs=1e-9)


def test_multi_interval_level_set():
    u = level_set("(x-2)^2", DOMAIN, 1.0)
    assert len(u) == 2
    (a, b), (c, d) = u.to_list()
    assert (a, d) == (0.0, 5.0)
    assert b == pytest.approx(1.0, abs=1e-9)
    assert c == pytest.approx(3.0, abs=1e-9)


def test_constant_level_set():
    assert level_set("3", DOMAIN, 2.0).to_list() == [[0.0, 5.0]]
    assert level_set("3", DOMAIN, 3.5).is_empty


def test_level_sets_are_nested():
    f = "(x-2)^2 + x/3"
    lengths = [level_set(f, DOMAIN, a).total_length() for a in (0.5, 1.0, 2.0, 4.0, 8.0)]
    assert all(x >= y for x, y in zip(lengths, lengths[1:]))


def test_negative_alpha_rejected():
    with pytest.raises(InvalidInputError):
        level_set("x", DOMAIN, -0.1)


def test_out_of_domain_run_raises():
    with pytest.raises(EvaluationError) as exc:
        level_set("ln(x-1)", DOMAIN, 0.5)
    assert exc.value.signal is not None


def test_scanner_reuses_grid():
    scanner = LevelSetScanner("x^2", DOMAIN, LevelSetOptions(scan_points=64))
    scanner.level_set(1.0)
    after_first = scanner.evaluations
    scanner.level_set(1.0)
    assert scanner.evaluations - after_first < 64
    assert scanner.sup_estimate() == pytest.approx(25.0)


# ---------- 形状探测 ----------
@pytest.mark.parametrize("text, shape", [
    ("x/2", Shape.NONDECREASING),
    ("7", Shape.NONDECREASING),
    ("exp(1/x)", Shape.NONINCREASING),
    ("(x-2)^2", Shape.UNKNOWN),
    ("ln(x-1)", Shape.UNKNOWN),
])
def test_detect_shape(text, shape):
    assert detect_shape(text, DOMAIN, 1024) is shape


def test_probe_stays_inside_open_interval():
    xs, values, ok = probe("1/x", DOMAIN, 10)
    assert xs.size == 10
    assert xs[0] > 0 and xs[-1] < 5
    assert ok.all()


def test_tail_value():
    assert tail_value("x/2", DOMAIN) == 2.5
    # 端点越界时改在内部探测
    assert tail_value("1/(x-5)", DOMAIN) < -1e9
