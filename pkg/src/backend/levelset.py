"""α-水平集 {x ∈ domain : f(x) ≥ α} 的计算：网格扫描 + 变号区间二分；声明单调时只做一次二分"""
import logging
import math
from typing import List, Optional, Tuple

import numpy as np

from src.backend.expr import OutOfDomain, as_integrand
from src.backend.measure import normalize
from src.backend.models import Interval, IntervalUnion, LevelSetOptions, Shape
from src.common import messages
from src.common.errors import EvaluationError, InvalidInputError

logger = logging.getLogger(__name__)

# 端点越界时向内探测的相对偏移
PROBE_OFFSET = 2.0 ** -40


class LevelSetScanner:
    """
    绑定 (f, domain, opts) 的水平集计算器。
    网格值只算一次，Sugeno 求解对不同 α 反复调用 level_set 时复用。
    """

    def __init__(self, f, domain: Interval, opts: Optional[LevelSetOptions] = None):
        self.f = as_integrand(f)
        self.domain = domain
        self.opts = opts or LevelSetOptions()
        if not domain.finite:
            raise InvalidInputError(messages.ERR_INFINITE_DOMAIN.format(lo=domain.lo, hi=domain.hi))
        self._xs: Optional[np.ndarray] = None
        self._values: Optional[np.ndarray] = None
        self._ok: Optional[np.ndarray] = None
        self.evaluations = 0

    # ---------- 单点求值 ----------
    def value_at(self, x: float) -> Optional[float]:
        """越界返回 None"""
        self.evaluations += 1
        v = self.f.value(x)
        if isinstance(v, OutOfDomain):
            return None
        return v

    def endpoint_value(self, at_lo: bool) -> Optional[float]:
        """端点值；端点越界时改在开区间内部探测"""
        lo, hi = self.domain.lo, self.domain.hi
        x = lo if at_lo else hi
        v = self.value_at(x)
        if v is None and hi > lo:
            inward = (hi - lo) * PROBE_OFFSET
            v = self.value_at(lo + inward if at_lo else hi - inward)
        return v

    # ---------- 网格扫描 ----------
    def grid(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        if self._xs is None:
            lo, hi = self.domain.lo, self.domain.hi
            xs = np.linspace(lo, hi, self.opts.scan_points)
            values, ok = self.f.values(xs)
            self.evaluations += xs.size
            values = values.copy()
            ok = ok.copy()
            for idx, at_lo in ((0, True), (-1, False)):
                if not ok[idx]:
                    v = self.endpoint_value(at_lo)
                    if v is not None:
                        values[idx] = v
                        ok[idx] = True
            self._check_runs(xs, ok)
            self._xs, self._values, self._ok = xs, values, ok
        return self._xs, self._values, self._ok

    def _check_runs(self, xs: np.ndarray, ok: np.ndarray):
        """连续两个以上网格点越界视为正测度子集越界"""
        bad = ~ok
        runs = bad[:-1] & bad[1:]
        if np.any(runs):
            x = float(xs[np.argmax(runs)])
            signal = self.f.value(x)
            detail = signal.describe() if isinstance(signal, OutOfDomain) else f"x={x!r}"
            raise EvaluationError(
                messages.ERR_EVAL_RUN.format(lo=self.domain.lo, hi=self.domain.hi, detail=detail),
                signal if isinstance(signal, OutOfDomain) else None,
            )

    def sup_estimate(self) -> float:
        """探测网格上的上确界（可能为 +inf）"""
        _, values, ok = self.grid()
        if not np.any(ok):
            return 0.0
        return float(np.max(values[ok]))

    # ---------- 边界二分 ----------
    def _bisect(self, x_false: float, x_true: float, alpha: float) -> float:
        """在 f < α 与 f ≥ α 的两点之间二分，返回 f ≥ α 一侧的点"""
        tol = self.opts.root_tol
        while abs(x_true - x_false) > tol:
            mid = 0.5 * (x_false + x_true)
            if mid == x_false or mid == x_true:
                break
            v = self.value_at(mid)
            if v is not None and v >= alpha:
                x_true = mid
            else:
                x_false = mid
        return x_true

    # ---------- 水平集 ----------
    def level_set(self, alpha: float) -> IntervalUnion:
        if not alpha >= 0:
            raise InvalidInputError(messages.ERR_NEGATIVE_ALPHA.format(alpha=alpha))
        shape = self.opts.declared_shape
        if shape is Shape.NONDECREASING:
            return self._monotone(alpha, increasing=True)
        if shape is Shape.NONINCREASING:
            return self._monotone(alpha, increasing=False)
        return self._scan(alpha)

    def _monotone(self, alpha: float, increasing: bool) -> IntervalUnion:
        lo, hi = self.domain.lo, self.domain.hi
        far = self.endpoint_value(at_lo=not increasing)    # 取值最大的一端
        if far is None or far < alpha:
            return IntervalUnion()
        near = self.endpoint_value(at_lo=increasing)       # 取值最小的一端
        if near is not None and near >= alpha:
            return IntervalUnion((Interval(lo, hi),))
        if increasing:
            return IntervalUnion((Interval(self._bisect(lo, hi, alpha), hi),))
        return IntervalUnion((Interval(lo, self._bisect(hi, lo, alpha)),))

    def _scan(self, alpha: float) -> IntervalUnion:
        xs, values, ok = self.grid()
        lo, hi = self.domain.lo, self.domain.hi
        with np.errstate(invalid="ignore"):
            mask = ok & (values >= alpha)
        if not np.any(mask):
            return IntervalUnion()
        n = xs.size
        steps = np.diff(mask.astype(np.int8))
        starts = list(np.nonzero(steps == 1)[0] + 1)
        ends = list(np.nonzero(steps == -1)[0])
        if mask[0]:
            starts.insert(0, 0)
        if mask[-1]:
            ends.append(n - 1)
        pieces: List[Interval] = []
        for s, e in zip(starts, ends):
            left = lo if s == 0 else self._bisect(float(xs[s - 1]), float(xs[s]), alpha)
            right = hi if e == n - 1 else self._bisect(float(xs[e + 1]), float(xs[e]), alpha)
            pieces.append(Interval(left, max(left, right)))
        return normalize(pieces)


def level_set(f, domain: Interval, alpha: float, opts: Optional[LevelSetOptions] = None) -> IntervalUnion:
    """{x ∈ domain : f(x) ≥ α}"""
    return LevelSetScanner(f, domain, opts).level_set(alpha)


def probe(f, domain: Interval, points: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """开区间内部的等距探测点及其取值，返回 (xs, values, ok)"""
    xs = np.linspace(domain.lo, domain.hi, points + 2)[1:-1]
    values, ok = as_integrand(f).values(xs)
    return xs, values, ok


def detect_shape(f, domain: Interval, points: int) -> Shape:
    """在探测网格上判断单调性；常函数按单调不减处理，出现越界点时返回 UNKNOWN"""
    _, values, ok = probe(f, domain, points)
    if not np.all(ok):
        return Shape.UNKNOWN
    with np.errstate(invalid="ignore"):
        steps = np.diff(values)
        steps = np.where(np.isnan(steps), 0.0, steps)
        slack = 1e-12 * (1.0 + np.abs(np.where(np.isfinite(values[:-1]), values[:-1], 0.0)))
    if np.all(steps >= -slack):
        return Shape.NONDECREASING
    if np.all(steps <= slack):
        return Shape.NONINCREASING
    return Shape.UNKNOWN


def tail_value(f, domain: Interval) -> float:
    """截断区间右端的函数值，写入报告说明"""
    v = LevelSetScanner(f, domain, LevelSetOptions(scan_points=2)).endpoint_value(at_lo=False)
    return math.nan if v is None else v
