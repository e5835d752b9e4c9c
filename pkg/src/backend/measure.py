"""区间并的规范化、求交，以及带权单调测度 μ(E) = ∫_E w(t)dt"""
import logging
import math
from typing import Iterable, List

import numpy as np

from src.backend.expr import evaluate_array, parse
from src.backend.models import Interval, IntervalUnion, MeasureSpec, WeightKind
from src.backend.quad import integrate
from src.common import config, messages
from src.common.errors import InvalidInputError, InvalidMeasureError, SugenoError

logger = logging.getLogger(__name__)

DENSITY_PROBE_POINTS = 65


def normalize(raw: Iterable[Interval]) -> IntervalUnion:
    """排序并合并（相接的区间也合并），结果与输入的并集相等"""
    ordered = sorted(raw, key=lambda iv: (iv.lo, iv.hi))
    merged: List[List[float]] = []
    for iv in ordered:
        if merged and iv.lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], iv.hi)
        else:
            merged.append([iv.lo, iv.hi])
    return IntervalUnion(tuple(Interval(lo, hi) for lo, hi in merged))


def intersect(u: IntervalUnion, d: Interval) -> IntervalUnion:
    """A ∩ F_α：精确求交后规范化"""
    pieces = []
    for iv in u:
        lo = max(iv.lo, d.lo)
        hi = min(iv.hi, d.hi)
        if lo <= hi:
            pieces.append(Interval(lo, hi))
    return normalize(pieces)


def parse_measure(text: str) -> MeasureSpec:
    """命令行格式：uniform | reciprocal | density:<expr>"""
    if text is None:
        raise InvalidMeasureError(messages.ERR_INVALID_MEASURE.format(text=text))
    raw = text.strip()
    if raw == WeightKind.UNIFORM.value:
        return MeasureSpec(WeightKind.UNIFORM)
    if raw == WeightKind.RECIPROCAL.value:
        return MeasureSpec(WeightKind.RECIPROCAL)
    prefix = WeightKind.DENSITY.value + ":"
    if raw.startswith(prefix):
        try:
            return MeasureSpec(WeightKind.DENSITY, parse(raw[len(prefix):]))
        except InvalidInputError as exc:
            raise InvalidMeasureError(messages.ERR_INVALID_MEASURE.format(text=text)) from exc
    raise InvalidMeasureError(messages.ERR_INVALID_MEASURE.format(text=text))


def measure(m: MeasureSpec, u: IntervalUnion, tol: float = config.MEASURE_TOL) -> float:
    """μ(u)，结果 ≥ 0，可能为 +inf"""
    if m.weight is WeightKind.UNIFORM:
        return math.fsum(iv.hi - iv.lo for iv in u)
    if m.weight is WeightKind.RECIPROCAL:
        total = []
        for iv in u:
            if iv.hi == iv.lo:
                continue
            if iv.lo == 0 or math.isinf(iv.hi):
                return math.inf
            total.append(math.log(iv.hi / iv.lo))
        return math.fsum(total)
    return _density_measure(m, u, tol)


def _density_measure(m: MeasureSpec, u: IntervalUnion, tol: float) -> float:
    if not tol > 0:
        raise InvalidInputError(messages.ERR_TOL_POSITIVE.format(name="tol", value=tol))
    pieces = [iv for iv in u if iv.hi > iv.lo]
    if not pieces:
        return 0.0
    share = tol / len(pieces)
    total = []
    for iv in pieces:
        if math.isinf(iv.hi):
            raise InvalidInputError(messages.ERR_DENSITY_UNBOUNDED.format(lo=iv.lo, hi=iv.hi))
        # 抽样检查密度非负（端点可能奇异，只取内部点）
        probe = np.linspace(iv.lo, iv.hi, DENSITY_PROBE_POINTS + 2)[1:-1]
        values, ok = evaluate_array(m.density, probe)
        bad = ~ok | (np.where(ok, values, 0.0) < 0)
        if np.any(bad):
            x = float(probe[np.argmax(bad)])
            raise InvalidMeasureError(messages.ERR_NEGATIVE_DENSITY.format(density=m.to_text(), x=x))
        # 每片容差 share·max(1, 抽样估计的片段测度)
        scale = max(1.0, float(np.mean(values)) * (iv.hi - iv.lo))
        try:
            res = integrate(m.density, iv.lo, iv.hi, share * scale)
        except SugenoError:
            logger.debug("密度 %s 在 [%r, %r] 上求积失败", m.to_text(), iv.lo, iv.hi)
            raise
        if res.value < 0:
            raise InvalidMeasureError(messages.ERR_NEGATIVE_DENSITY.format(density=m.to_text(), x=iv.lo))
        total.append(res.value)
    return math.fsum(total)


def cell_weights(m: MeasureSpec, edges: np.ndarray) -> np.ndarray:
    """相邻节点构成的各小格的测度（density 用中点规则近似），供暴力 oracle 使用"""
    edges = np.asarray(edges, dtype=float)
    lo, hi = edges[:-1], edges[1:]
    if m.weight is WeightKind.UNIFORM:
        return hi - lo
    if m.weight is WeightKind.RECIPROCAL:
        with np.errstate(divide="ignore"):
            return np.where(lo > 0, np.log(hi / np.where(lo > 0, lo, 1.0)), np.inf)
    mid = 0.5 * (lo + hi)
    values, ok = evaluate_array(m.density, mid)
    bad = ~ok | (np.where(ok, values, 0.0) < 0)
    if np.any(bad):
        raise InvalidMeasureError(messages.ERR_NEGATIVE_DENSITY.format(density=m.to_text(), x=float(mid[np.argmax(bad)])))
    return values * (hi - lo)
