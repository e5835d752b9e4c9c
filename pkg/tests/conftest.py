import numpy as np
import pytest

from src.backend.expr import parse
from src.backend.models import Interval


def _random_instance(rng: np.random.Generator):
    """单调递增、单调递减与 U 形三类随机被积函数"""
    b = round(float(rng.uniform(0.5, 5.0)), 6)
    kind = int(rng.integers(3))
    a = round(float(rng.uniform(0.1, 2.0)), 6)
    c = round(float(rng.uniform(0.0, 1.0)), 6)
    if kind == 0:
        p = round(float(rng.uniform(1.0, 3.0)), 6)
        text = f"{a}*x^{p}+{c}"
    elif kind == 1:
        k = round(float(rng.uniform(0.2, 3.0)), 6)
        text = f"{a}*exp(-{k}*x)+{c}"
    else:
        m = round(float(rng.uniform(0.0, b)), 6)
        text = f"{a}*(x-{m})^2"
    return parse(text), Interval(0.0, b)


@pytest.fixture
def random_instance():
    return _random_instance
