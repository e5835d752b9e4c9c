"""
Sugeno 积分：分布函数 F(α) = μ(A ∩ {f ≥ α})，不动点求解 sup{α : F(α) ≥ α}，
网格暴力 oracle，以及内层积分用的 running Sugeno（[0, x] 上、均匀测度）。
"""
import logging
import math
from typing import Optional, Tuple

import numpy as np

from src.backend.expr import as_integrand
from src.backend.levelset import LevelSetScanner, PROBE_OFFSET
from src.backend.measure import cell_weights, intersect, measure
from src.backend.models import (UNIFORM, Interval, IntervalUnion, LevelSetOptions, MeasureSpec,
                                Shape, SugenoValue)
from src.common import config, messages
from src.common.errors import CapReachedError, InvalidInputError

logger = logging.getLogger(__name__)

# oracle 中一次展开的 (小格, α) 对数上限
_ORACLE_PAIR_CHUNK = 4_000_000


def _max_iterations(alpha_max: float, tol: float) -> int:
    ratio = alpha_max / tol
    return (math.ceil(math.log2(ratio)) if ratio > 1 else 0) + 8


# ---------- 不动点求解 ----------
class SugenoSolver:
    """对固定的 (f, A, μ) 求 Sugeno 积分；水平集扫描网格在多次 F(α) 调用间复用"""

    def __init__(self, f, A: Interval, m: MeasureSpec = UNIFORM, tol: float = config.SOLVER_TOL,
                 opts: Optional[LevelSetOptions] = None, cap: float = config.ALPHA_CAP,
                 measure_tol: float = config.MEASURE_TOL):
        if not tol > 0:
            raise InvalidInputError(messages.ERR_TOL_POSITIVE.format(name="tol", value=tol))
        if not A.finite:
            raise InvalidInputError(messages.ERR_INFINITE_DOMAIN.format(lo=A.lo, hi=A.hi))
        self.scanner = LevelSetScanner(f, A, opts)
        self.A = A
        self.m = m
        self.tol = tol
        self.cap = cap
        self.measure_tol = measure_tol
        self.evaluations = 0

    def F(self, alpha: float) -> float:
        """分布函数 F(α) = μ(A ∩ {f ≥ α})"""
        self.evaluations += 1
        u = self.scanner.level_set(alpha)
        return measure(self.m, intersect(u, self.A), self.measure_tol)

    def bounds(self) -> Tuple[float, float, float]:
        """(α_max, μ(A), sup f)；两者都超过上限时报错"""
        mu_A = measure(self.m, IntervalUnion((self.A,)), self.measure_tol)
        sup_f = self.scanner.sup_estimate()
        alpha_max = min(mu_A, sup_f)
        if alpha_max > self.cap:
            raise CapReachedError(messages.ERR_CAP_REACHED.format(measure=mu_A, sup=sup_f, cap=self.cap))
        return alpha_max, mu_A, sup_f

    def solve(self) -> SugenoValue:
        alpha_max, mu_A, sup_f = self.bounds()
        if not alpha_max > 0:
            F0 = self.F(0.0)
            return SugenoValue(0.0, 0.0, F0, F0, self.evaluations, 0.0, 0.0)

        F_top = self.F(alpha_max)
        if F_top >= alpha_max:
            return SugenoValue(alpha_max, alpha_max, F_top, F_top, self.evaluations, 0.0, alpha_max)

        lo, hi = 0.0, alpha_max
        F_lo, F_hi = self.F(0.0), F_top
        for _ in range(_max_iterations(alpha_max, self.tol)):
            if hi - lo <= self.tol:
                break
            mid = 0.5 * (lo + hi)
            F_mid = self.F(mid)
            if F_mid >= mid:
                lo, F_lo = mid, F_mid
            else:
                hi, F_hi = mid, F_mid
        value = 0.5 * (lo + hi)
        logger.debug("sugeno %s on [%r, %r] (%s): %r, 括号 [%r, %r]，F 求值 %d 次",
                     self.scanner.f.describe(), self.A.lo, self.A.hi, self.m.to_text(),
                     value, lo, hi, self.evaluations)
        return SugenoValue(value, lo, F_lo, F_hi, self.evaluations, hi - lo, alpha_max)


def alpha_upper_bound(f, A: Interval, m: MeasureSpec = UNIFORM, opts: Optional[LevelSetOptions] = None,
                      cap: float = config.ALPHA_CAP, measure_tol: float = config.MEASURE_TOL) -> float:
    """二分上端 α_max = min(μ(A), 探测网格上的 sup f)"""
    return SugenoSolver(f, A, m, opts=opts, cap=cap, measure_tol=measure_tol).bounds()[0]


def distribution(f, A: Interval, m: MeasureSpec, alpha: float, opts: Optional[LevelSetOptions] = None,
                 measure_tol: float = config.MEASURE_TOL) -> float:
    """F(α) = μ(A ∩ {f ≥ α})"""
    return SugenoSolver(f, A, m, opts=opts, measure_tol=measure_tol).F(alpha)


def sugeno_integral(f, A: Interval, m: MeasureSpec = UNIFORM, tol: float = config.SOLVER_TOL,
                    opts: Optional[LevelSetOptions] = None, cap: float = config.ALPHA_CAP,
                    measure_tol: float = config.MEASURE_TOL) -> SugenoValue:
    """∫_A f dμ = sup{α ∈ [0, α_max] : F(α) ≥ α}"""
    return SugenoSolver(f, A, m, tol, opts, cap, measure_tol).solve()


def distribution_curve(f, A: Interval, m: MeasureSpec, alphas: np.ndarray,
                       opts: Optional[LevelSetOptions] = None,
                       measure_tol: float = config.MEASURE_TOL) -> np.ndarray:
    """在一列 α 上求 F(α)，供画图数据使用"""
    solver = SugenoSolver(f, A, m, opts=opts, measure_tol=measure_tol)
    return np.array([solver.F(float(a)) for a in alphas])


# ---------- 网格暴力 oracle ----------
def sugeno_oracle(f, A: Interval, m: MeasureSpec = UNIFORM, grid_n: int = config.ORACLE_GRID_N,
                  cells: int = config.ORACLE_CELLS, opts: Optional[LevelSetOptions] = None,
                  cap: float = config.ALPHA_CAP, measure_tol: float = config.MEASURE_TOL) -> float:
    """
    max_j min(α_j, F(α_j))，α_j 为 [0, α_max] 上的 grid_n 个等距点。
    F 不经过水平集二分：f 在细格节点上取值，格内按线性插值计算 {f ≥ α} 所占比例。
    """
    if grid_n < 2:
        raise InvalidInputError(messages.ERR_GRID_N.format(value=grid_n))
    solver = SugenoSolver(f, A, m, opts=opts, cap=cap, measure_tol=measure_tol)
    alpha_max, _, _ = solver.bounds()
    if not alpha_max > 0:
        return 0.0
    alphas = np.linspace(0.0, alpha_max, grid_n)
    F = _oracle_distribution(as_integrand(f), A, m, alphas, cells)
    return float(np.max(np.minimum(alphas, F)))


def _oracle_distribution(h, A: Interval, m: MeasureSpec, alphas: np.ndarray, cells: int) -> np.ndarray:
    edges = np.linspace(A.lo, A.hi, cells + 1)
    values, ok = h.values(edges)
    values, ok = values.copy(), ok.copy()
    inward = (A.hi - A.lo) * PROBE_OFFSET
    for idx, x in ((0, A.lo + inward), (-1, A.hi - inward)):
        if not ok[idx]:
            v, good = h.values(np.array([x]))
            values[idx], ok[idx] = v[0], good[0]
    weights = cell_weights(m, edges)

    cell_ok = ok[:-1] & ok[1:]
    low = np.minimum(values[:-1], values[1:])
    high = np.maximum(values[:-1], values[1:])
    span = high - low
    with np.errstate(invalid="ignore"):
        sloped = cell_ok & np.isfinite(high) & np.isfinite(weights) & (span > 0)
    stepped = cell_ok & ~sloped

    # 整格：min(f) ≥ α 的格整块计入
    F = np.zeros(alphas.size)
    lows = np.concatenate([low[stepped], low[sloped]])
    full_w = np.concatenate([weights[stepped], weights[sloped]])
    order = np.argsort(lows)
    lows, full_w = lows[order], full_w[order]
    suffix = np.concatenate([np.cumsum(full_w[::-1])[::-1], [0.0]])
    F += suffix[np.searchsorted(lows, alphas, side="left")]

    # 部分格：min(f) < α < max(f) 的格按线性比例计入
    s_low, s_high, s_w, s_span = low[sloped], high[sloped], weights[sloped], span[sloped]
    first = np.searchsorted(alphas, s_low, side="right")
    last = np.searchsorted(alphas, s_high, side="left")
    counts = np.maximum(last - first, 0)
    start = 0
    while start < counts.size:
        stop = start
        total = 0
        while stop < counts.size and (total == 0 or total + counts[stop] <= _ORACLE_PAIR_CHUNK):
            total += int(counts[stop])
            stop += 1
        if total:
            c = counts[start:stop]
            cell_idx = np.repeat(np.arange(start, stop), c)
            offsets = np.repeat(np.cumsum(c) - c, c)
            alpha_idx = first[cell_idx] + (np.arange(total) - offsets)
            frac = (s_high[cell_idx] - alphas[alpha_idx]) / s_span[cell_idx]
            F += np.bincount(alpha_idx, weights=s_w[cell_idx] * frac, minlength=alphas.size)
        start = stop
    return F


# ---------- running Sugeno：内层积分 ----------
def running_sugeno(h, xs: np.ndarray, shape: Shape, tol: float = config.SOLVER_TOL,
                   opts: Optional[LevelSetOptions] = None, cap: float = config.ALPHA_CAP) -> np.ndarray:
    """
    对每个 x 求 SINT_[0,x] h(t)dt（均匀测度），误差相对 x 不超过 tol，使 S(x)/x 在 x → 0 时仍准确。
    单调不减：{h ≥ α} ∩ [0,x] = [t*, x]，故 F_x(α) ≥ α ⇔ h(x − α) ≥ α，对全部 x 同步二分；
    单调不增：{h ≥ α} ∩ [0,x] = [0, min(x, T(α))]，故结果为 min(x, sup{α : h(α) ≥ α})；
    其他形状逐点调用 sugeno_integral。
    """
    h = as_integrand(h)
    xs = np.asarray(xs, dtype=float)
    out = np.zeros(xs.shape)
    positive = xs > 0
    if not np.any(positive):
        return out
    x = xs[positive]

    if shape is Shape.NONDECREASING:
        with np.errstate(invalid="ignore"):
            v0, ok0 = h.values(np.zeros(x.shape))
            saturated = ok0 & (v0 >= x)
            lo = np.zeros(x.shape)
            hi = x.copy()
            for _ in range(_max_iterations(1.0, tol)):
                mid = 0.5 * (lo + hi)
                v, ok = h.values(x - mid)
                good = ok & (v >= mid)
                lo = np.where(good, mid, lo)
                hi = np.where(good, hi, mid)
                if np.all(hi - lo <= tol * x):
                    break
        out[positive] = np.where(saturated, x, 0.5 * (lo + hi))
        return out

    if shape is Shape.NONINCREASING:
        out[positive] = np.minimum(x, _diagonal_crossing(h, float(x.max()), tol))
        return out

    for i in np.nonzero(positive)[0]:
        x_i = float(xs[i])
        out[i] = sugeno_integral(h, Interval(0.0, x_i), UNIFORM, tol * x_i, opts, cap).value
    return out


def _diagonal_crossing(h, upper: float, tol: float) -> float:
    """sup{α ∈ [0, upper] : h(α) ≥ α}，h 单调不增时该谓词先真后假"""
    v, ok = h.values(np.array([upper]))
    if ok[0] and v[0] >= upper:
        return upper
    lo, hi = 0.0, upper
    for _ in range(_max_iterations(upper, tol)):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        v, ok = h.values(np.array([mid]))
        if ok[0] and v[0] >= mid:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
