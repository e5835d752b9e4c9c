"""
经典（Riemann）求积：Gauss-Kronrod 7-15 开型规则的全局自适应细分，
以及向奇异端点 0 几何加密的累积积分 ∫₀ˣ h(t)dt。端点永不求值。
"""
import heapq
import logging
import math
from typing import List, Tuple

import numpy as np

from src.backend.expr import Integrand, OutOfDomain, as_integrand, is_expr, ln_of
from src.backend.models import QuadResult
from src.common import config, messages
from src.common.errors import DivergenceError, EvaluationError, InvalidInputError

logger = logging.getLogger(__name__)

# ---------- Gauss-Kronrod 节点与权重 ----------
# Kronrod 正节点（降序，最后为 0），其中下标 1、3、5、7 同时是 7 点 Gauss 节点
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

_NODES = np.concatenate([-_XGK[:7], _XGK[:7], _XGK[7:]])
_KRONROD_W = np.concatenate([_WGK[:7], _WGK[:7], _WGK[7:]])
_GAUSS_W = np.zeros(15)
for _k, _i in enumerate((1, 3, 5)):
    _GAUSS_W[_i] = _GAUSS_W[_i + 7] = _WG[_k]
_GAUSS_W[14] = _WG[3]

_EPS = np.finfo(float).eps
_TINY = np.finfo(float).tiny
POINTS_PER_PANEL = len(_NODES)


def _gk15(h: Integrand, a: np.ndarray, b: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """对一批子区间同时施加 G7-K15，返回 (积分值, 误差估计)"""
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    points = center[:, None] + half[:, None] * _NODES[None, :]
    values, ok = h.values(points.ravel())
    if not np.all(ok):
        bad = float(points.ravel()[np.argmin(ok)])
        signal = h.value(bad)
        detail = signal.describe() if isinstance(signal, OutOfDomain) else f"x={bad!r}"
        raise EvaluationError(detail, signal if isinstance(signal, OutOfDomain) else None)
    values = values.reshape(points.shape)
    with np.errstate(all="ignore"):
        resk = values @ _KRONROD_W
        resg = values @ _GAUSS_W
        reskh = 0.5 * resk
        resasc = np.abs(values - reskh[:, None]) @ _KRONROD_W * np.abs(half)
        resabs = np.abs(values) @ _KRONROD_W * np.abs(half)
        result = resk * half
        err = np.abs((resk - resg) * half)
        scale = (resasc != 0) & (err != 0)
        err = np.where(scale, resasc * np.minimum(1.0, (200.0 * err / np.where(scale, resasc, 1.0)) ** 1.5), err)
        err = np.where(resabs > _TINY / (50 * _EPS), np.maximum(50 * _EPS * resabs, err), err)
        err = np.where(np.isfinite(err) & np.isfinite(result), err, np.inf)
    return result, err


def _check_bounds(a: float, b: float, tol: float):
    if not (math.isfinite(a) and math.isfinite(b) and a < b):
        raise InvalidInputError(messages.ERR_BAD_BOUNDS.format(a=a, b=b))
    if not tol > 0:
        raise InvalidInputError(messages.ERR_TOL_POSITIVE.format(name="tol", value=tol))


# ---------- 自适应求积 ----------
def integrate(f, a: float, b: float, tol: float = config.QUAD_TOL,
              max_subdivisions: int = config.QUAD_MAX_SUBDIVISIONS) -> QuadResult:
    """
    ∫_a^b f(t)dt，每次细分误差最大的子区间，直到误差估计总和 ≤ tol。
    达到细分上限仍未收敛时抛出 DivergenceError（携带部分值）。
    """
    _check_bounds(a, b, tol)
    h = as_integrand(f)
    value, err = _gk15(h, np.array([a]), np.array([b]))
    evaluations = POINTS_PER_PANEL
    # 最大堆：(-误差, 左端, 右端, 积分值)
    heap: List[Tuple[float, float, float, float]] = [(-float(err[0]), a, b, float(value[0]))]
    total_err = float(err[0])
    subdivisions = 1
    while total_err > tol:
        neg_err, lo, hi, _ = heap[0]
        mid = 0.5 * (lo + hi)
        # 误差为无穷说明节点处已溢出，继续细分无意义
        if subdivisions >= max_subdivisions or not (lo < mid < hi) or math.isinf(neg_err):
            partial = math.fsum(item[3] for item in heap if math.isfinite(item[3]))
            logger.debug("integrate [%r, %r]: 未收敛，子区间 %d，误差 %r", a, b, subdivisions, total_err)
            raise DivergenceError(
                messages.ERR_DIVERGENCE.format(partial=partial, error=total_err),
                partial, total_err, evaluations,
            )
        heapq.heappop(heap)
        values, errs = _gk15(h, np.array([lo, mid]), np.array([mid, hi]))
        evaluations += 2 * POINTS_PER_PANEL
        subdivisions += 1
        heapq.heappush(heap, (-float(errs[0]), lo, mid, float(values[0])))
        heapq.heappush(heap, (-float(errs[1]), mid, hi, float(values[1])))
        total_err = total_err + neg_err + float(errs[0]) + float(errs[1])
        if not math.isfinite(total_err) or subdivisions % 64 == 0 or total_err <= tol:
            total_err = math.fsum(-item[0] for item in heap)

    total = math.fsum(item[3] for item in heap)
    logger.debug("integrate [%r, %r] = %r ± %r（子区间 %d）", a, b, total, total_err, subdivisions)
    return QuadResult(total, total_err, evaluations)


def integrate_segments(f, edges: np.ndarray, tol: float = config.QUAD_TOL) -> Tuple[np.ndarray, float, int]:
    """
    一次性计算相邻节点间各段的积分，返回 (各段积分, 误差总和, 求值次数)。
    批量 G7-K15 未达到 tol/段数 的段再单独自适应细分。
    """
    edges = np.asarray(edges, dtype=float)
    if edges.size < 2:
        return np.zeros(0), 0.0, 0
    h = as_integrand(f)
    a, b = edges[:-1], edges[1:]
    n = a.size
    results = np.zeros(n)
    errors = np.zeros(n)
    live = b > a
    evaluations = 0
    if np.any(live):
        values, errs = _gk15(h, a[live], b[live])
        results[live] = values
        errors[live] = errs
        evaluations += POINTS_PER_PANEL * int(np.count_nonzero(live))
    share = tol / n
    for i in np.nonzero(errors > share)[0]:
        res = integrate(h, float(a[i]), float(b[i]), share)
        results[i] = res.value
        errors[i] = res.abs_error_estimate
        evaluations += res.evaluations
    return results, float(errors.sum()), evaluations


# ---------- 向 0 几何加密的累积积分 ----------
def cumulative_from_zero(f, x: float, tol: float = config.QUAD_TOL,
                         max_panels: int = config.QUAD_MAX_GEOMETRIC_PANELS) -> QuadResult:
    """
    ∫₀ˣ h(t)dt：子区间 [x/2^(k+1), x/2^k] 逐个求积，
    相邻两块之和低于 tol/8 时停止，剩余尾部以最后一块的绝对值计入误差。
    """
    if not (math.isfinite(x) and x > 0):
        raise InvalidInputError(messages.ERR_X_POSITIVE.format(x=x))
    if not tol > 0:
        raise InvalidInputError(messages.ERR_TOL_POSITIVE.format(name="tol", value=tol))
    h = as_integrand(f)
    panel_tol = tol / 128
    pieces: List[float] = []
    total_err = 0.0
    evaluations = 0
    hi = x
    previous = math.inf
    for k in range(max_panels):
        lo = hi / 2
        try:
            res = integrate(h, lo, hi, panel_tol)
        except DivergenceError as exc:
            partial = math.fsum(pieces) + exc.partial_value
            raise DivergenceError(
                messages.ERR_DIVERGENCE.format(partial=partial, error=math.inf),
                partial, math.inf, evaluations + exc.evaluations,
            ) from exc
        pieces.append(res.value)
        total_err += res.abs_error_estimate
        evaluations += res.evaluations
        current = abs(res.value)
        if k >= 1 and current + previous <= tol / 8:
            total = math.fsum(pieces)
            logger.debug("cumulative_from_zero(%r) = %r，几何块 %d", x, total, k + 1)
            return QuadResult(total, total_err + current, evaluations)
        previous = current
        hi = lo
    partial = math.fsum(pieces)
    raise DivergenceError(
        messages.ERR_DIVERGENCE.format(partial=partial, error=math.inf),
        partial, math.inf, evaluations,
    )


def ln_cumulative(f, x: float, tol: float = config.QUAD_TOL, probe_points: int = 256) -> QuadResult:
    """∫₀ˣ ln f(t)dt，先在 (0, x) 内部探测 f > 0"""
    if not (math.isfinite(x) and x > 0):
        raise InvalidInputError(messages.ERR_X_POSITIVE.format(x=x))
    if not is_expr(f):
        f = as_integrand(f).expr
    probe = np.linspace(0.0, x, probe_points + 2)[1:-1]
    values, ok = as_integrand(f).values(probe)
    bad = ~ok | (np.where(ok, values, 1.0) <= 0)
    if np.any(bad):
        t = float(probe[np.argmax(bad)])
        signal = as_integrand(ln_of(f)).value(t)
        detail = signal.describe() if isinstance(signal, OutOfDomain) else f"t={t!r}"
        raise EvaluationError(detail, signal if isinstance(signal, OutOfDomain) else None)
    return cumulative_from_zero(ln_of(f), x, tol)
