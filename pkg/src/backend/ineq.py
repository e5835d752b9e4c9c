"""
Pólya-Knopp（两种情形）、推广形式与 Hardy-Knopp 型不等式的数值校验。

每条校验分别计算左右两端的 Sugeno 积分，给出 slack = rhs − lhs，
并在探测网格上检查不等式的前提（结果写入 hypothesis_flags，不作硬性报错）。
"""
import logging
import math
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

from src.backend.expr import (Expr, OutOfDomain, Var, as_integrand, evaluate_array, exp_of, ln_of, parse,
                              print_canonical, substitute)
from src.backend.levelset import detect_shape, probe, tail_value
from src.backend.models import (RECIPROCAL, UNIFORM, HypothesisFlag, IneqConfig, IneqId, IneqReport, InnerKind,
                                Interval, LevelSetOptions, MeasureSpec, QuadResult, Shape, SugenoValue, WeightKind)
from src.backend.quad import cumulative_from_zero, integrate, integrate_segments, ln_cumulative
from src.backend.sugeno import running_sugeno, sugeno_integral
from src.common import messages
from src.common.errors import InvalidBijectionError, InvalidInputError

logger = logging.getLogger(__name__)

E = math.e
_EXP = exp_of(Var())
_TINY = 1e-300


def _expr(f) -> Expr:
    return parse(f) if isinstance(f, str) else f


# ---------- 数组型被积函数 ----------
class _ArrayIntegrand:
    """只实现 values 的被积函数；value 由单点数组求值得到"""

    node: Expr = Var()

    def values(self, xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def value(self, x: float):
        v, ok = self.values(np.array([x], dtype=float))
        if ok[0]:
            return float(v[0])
        reason = messages.ERR_REASON_DIV_ZERO if x <= 0 else messages.ERR_REASON_NAN
        return OutOfDomain(self.node, x, reason)


class _AverageIntegrand(_ArrayIntegrand):
    """
    g(x) = outer(I(x) / x)，I(x) 为 [0, x] 上的内层积分；x ≤ 0 处越界。
    同一次校验内按 x 记忆化。
    """

    def __init__(self, outer: Expr, label: str):
        self.outer = outer
        self.node = outer
        self.label = label
        self._memo: Dict[float, float] = {}

    def inner_values(self, xs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def values(self, xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        xs = np.asarray(xs, dtype=float)
        flat = xs.ravel()
        positive = flat > 0
        pending = sorted({float(x) for x in flat[positive]} - self._memo.keys())
        if pending:
            todo = np.array(pending)
            averages = self.inner_values(todo) / todo
            g, ok = evaluate_array(self.outer, averages)
            for x, v, good in zip(pending, g, ok):
                self._memo[x] = float(v) if good else math.nan
        out = np.array([self._memo[float(x)] if p else math.nan for x, p in zip(flat, positive)])
        ok = positive & ~np.isnan(out)
        return out.reshape(xs.shape), ok.reshape(xs.shape)

    def describe(self) -> str:
        return self.label


class RiemannAverageIntegrand(_AverageIntegrand):
    """
    g(x) = outer((1/x)·∫₀ˣ h(t)dt)。
    累积积分先在外层扫描网格的节点上一次算好：首个正节点用 head（向 0 几何加密），
    其余为相邻节点间的分段积分之和；网格外的 x 从下方最近节点补一段。
    """

    def __init__(self, h, outer: Expr, domain: Interval, scan_points: int, tol: float,
                 head: Optional[Callable[[float, float], QuadResult]] = None, label: str = ""):
        super().__init__(outer, label)
        self.h = as_integrand(h)
        self.domain = domain
        self.scan_points = scan_points
        self.tol = tol
        self.head = head or (lambda x, t: cumulative_from_zero(self.h, x, t))
        self._knots: Optional[np.ndarray] = None
        self._cumulative: Optional[np.ndarray] = None

    def _prepare(self):
        lo, hi = self.domain.lo, self.domain.hi
        grid = np.linspace(lo, hi, self.scan_points)
        knots = grid if lo == 0 else np.concatenate([[0.0], grid])
        first = self.head(float(knots[1]), self.tol / 2).value
        segments, err, evaluations = integrate_segments(self.h, knots[1:], self.tol / 2)
        self._knots = knots
        self._cumulative = np.concatenate([[0.0, first], first + np.cumsum(segments)])
        logger.debug("%s：累积积分缓存 %d 个节点，误差 %r，求值 %d 次", self.label, knots.size, err, evaluations)

    def inner_values(self, xs: np.ndarray) -> np.ndarray:
        if self._knots is None:
            self._prepare()
        knots, cumulative = self._knots, self._cumulative
        pos = np.searchsorted(knots, xs, side="right") - 1
        out = cumulative[pos].copy()
        for i in np.nonzero(knots[pos] != xs)[0]:
            k, x = int(pos[i]), float(xs[i])
            if k == 0:
                out[i] = self.head(x, self.tol).value
            else:
                out[i] = cumulative[k] + integrate(self.h, float(knots[k]), x, self.tol).value
        return out


class SugenoAverageIntegrand(_AverageIntegrand):
    """g(x) = outer((1/x)·SINT_[0,x] h(t)dt)，内层为均匀测度下的 Sugeno 积分"""

    def __init__(self, h, outer: Expr, shape: Shape, tol: float, opts: Optional[LevelSetOptions] = None,
                 cap: float = 1e6, label: str = ""):
        super().__init__(outer, label)
        self.h = as_integrand(h)
        self.shape = shape
        self.tol = tol
        self.opts = opts
        self.cap = cap

    def inner_values(self, xs: np.ndarray) -> np.ndarray:
        return running_sugeno(self.h, xs, self.shape, self.tol, self.opts, self.cap)


# ---------- 双射的数值逆 ----------
class NumericInverse:
    """
    F⁻¹(y)：对每个 y 在 z 上二分求 F(z) = y。
    搜索区间从一个 F 有定义的种子点出发，两端按步长倍增向外扩展；
    候选点无定义或破坏单调次序时步长减半：端点几何地逼近定义域边界（如 ln 与 1/x 的 0），不越过极点。
    """

    SEEDS = (1.0, 2.0, 0.5, 0.0, -1.0, 10.0, 0.1)
    MAX_EXPANSIONS = 400
    MAX_ITERATIONS = 200

    def __init__(self, bij: Expr, tol: float):
        self.bij = bij
        self.tol = tol
        seeds = np.array(self.SEEDS)
        v, ok = evaluate_array(bij, seeds)
        if not np.any(ok):
            raise InvalidBijectionError(messages.ERR_BIJECTION_SEED.format(seeds=list(self.SEEDS)))
        i = int(np.argmax(ok))
        self.z0, f0 = float(seeds[i]), float(v[i])
        self.increasing = self._orientation(f0)

    def _orientation(self, f0: float) -> bool:
        step = 1.0
        for _ in range(60):
            v, ok = evaluate_array(self.bij, np.array([self.z0 + step]))
            if ok[0] and v[0] != f0:
                return bool(v[0] > f0)
            step *= 0.5
        raise InvalidBijectionError(messages.ERR_BIJECTION_FLAT.format(z=self.z0))

    def _sign(self) -> float:
        return 1.0 if self.increasing else -1.0

    def _below(self, z: np.ndarray, ys: np.ndarray) -> np.ndarray:
        v, ok = evaluate_array(self.bij, z)
        with np.errstate(invalid="ignore"):
            return ok & (self._sign() * v <= self._sign() * ys)

    def _above(self, z: np.ndarray, ys: np.ndarray) -> np.ndarray:
        v, ok = evaluate_array(self.bij, z)
        with np.errstate(invalid="ignore"):
            return ok & (self._sign() * v >= self._sign() * ys)

    def _expand(self, ys: np.ndarray, direction: float) -> np.ndarray:
        """direction = −1 扩展下端直到 F(z) 不超过 y，+1 扩展上端直到 F(z) 不低于 y（按单调方向）"""
        s = direction * self._sign()
        z = np.full(ys.shape, self.z0)
        step = np.ones(ys.shape)
        for _ in range(self.MAX_EXPANSIONS):
            v, ok = evaluate_array(self.bij, z)
            with np.errstate(invalid="ignore"):
                pending = ok & (s * v < s * ys)
            if not np.any(pending):
                break
            candidate = z + direction * step
            cv, cok = evaluate_array(self.bij, candidate)
            with np.errstate(invalid="ignore"):
                accept = pending & cok & (s * cv > s * v)
            z = np.where(accept, candidate, z)
            step = np.where(accept, 2.0 * step, np.where(pending, 0.5 * step, step))
        return z

    def invert(self, ys: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        ys = np.asarray(ys, dtype=float)
        lo = self._expand(ys, -1.0)
        hi = self._expand(ys, 1.0)
        ok = ~np.isnan(ys) & self._below(lo, ys) & self._above(hi, ys)
        for _ in range(self.MAX_ITERATIONS):
            # 相对容差：逆像可能贴近 0（如 ln 的逆）
            if np.all(hi - lo <= self.tol * np.maximum(np.maximum(np.abs(lo), np.abs(hi)), _TINY)):
                break
            mid = 0.5 * (lo + hi)
            good = self._below(mid, ys)
            lo = np.where(good, mid, lo)
            hi = np.where(good, hi, mid)
        return 0.5 * (lo + hi), ok

    def check_monotone(self, ys: np.ndarray, points: int):
        """在覆盖 ys 逆像的 z 区间上检查 F 严格单调，否则抛出 InvalidBijectionError"""
        finite = ys[np.isfinite(ys)]
        if finite.size == 0:
            return
        z, ok = self.invert(np.array([finite.min(), finite.max()]))
        if not np.all(ok):
            bad = finite.min() if not ok[0] else finite.max()
            raise InvalidBijectionError(messages.ERR_BIJECTION_RANGE.format(y=float(bad)))
        zs = np.linspace(z.min(), z.max(), points)
        v, good = evaluate_array(self.bij, zs)
        steps = np.diff(v)
        usable = good[:-1] & good[1:] & np.isfinite(v[:-1]) & np.isfinite(v[1:])
        strict = steps > 0 if self.increasing else steps < 0
        if not np.all(good) or not np.all(strict[usable]):
            at = float(zs[np.argmin(good)]) if not np.all(good) else float(zs[:-1][usable & ~strict][0])
            raise InvalidBijectionError(messages.ERR_BIJECTION.format(detail=f"z={at!r}"))


class InverseComposition(_ArrayIntegrand):
    """h(t) = F⁻¹(f(t))"""

    def __init__(self, inverse: NumericInverse, f):
        self.inverse = inverse
        self.f = as_integrand(f)
        self.node = inverse.bij

    def values(self, ts: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        ts = np.asarray(ts, dtype=float)
        y, ok = self.f.values(ts)
        z, found = self.inverse.invert(np.where(ok, y, np.nan))
        good = ok & found
        return np.where(good, z, np.nan), good

    def describe(self) -> str:
        return f"F⁻¹({self.f.describe()})"


# ---------- 辅助 ----------
def alpha_log_alpha_root(c: float) -> Optional[float]:
    """α·ln α = c 在 α ≥ 1 上的根；c < 0 时不存在"""
    if not (math.isfinite(c) and c >= 0):
        return None
    lo, hi = 1.0, c + 1.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if mid * math.log(mid) < c:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _nonnegative(f, domain: Interval, points: int, strict: bool = False) -> bool:
    _, values, ok = probe(f, domain, points)
    with np.errstate(invalid="ignore"):
        good = values > 0 if strict else values >= 0
    return bool(np.all(ok & good))


def _phi_checks(phi: Expr, lo: float, hi: float, points: int) -> Tuple[bool, bool]:
    """(φ 在 (lo, hi) 上为正, 三点中点凸性检验通过)"""
    if not hi > lo:
        hi = lo + 1.0
    span = Interval(lo, hi)
    _, values, ok = probe(phi, span, points)
    if not np.all(ok):
        return False, False
    with np.errstate(invalid="ignore"):
        positive = bool(np.all(values > 0))
        mid = values[1:-1]
        chord = 0.5 * (values[:-2] + values[2:])
        finite = np.isfinite(mid) & np.isfinite(chord)
        slack = 1e-12 * (1.0 + np.abs(chord[finite]))
        convex = bool(np.all(mid[finite] <= chord[finite] + slack))
    return positive, convex


def _certificate(sv: SugenoValue) -> Dict[str, Any]:
    return sv.to_dict()


def _report(ineq_id: IneqId, lhs: float, rhs: float, cfg: IneqConfig, flags: List[HypothesisFlag],
            notes: List[str], details: Dict[str, Any], exploratory: bool = False) -> IneqReport:
    slack = rhs - lhs
    holds = bool(slack >= -cfg.violation_tol)
    for flag in flags:
        if not flag.holds:
            logger.warning("%s：前提 %s 不满足", ineq_id.value, flag.name)
    logger.info("%s：lhs=%r rhs=%r slack=%r", ineq_id.value, lhs, rhs, slack)
    return IneqReport(ineq_id, lhs, rhs, slack, holds, flags, " ".join(notes), details, exploratory)


def _check_b(b: float):
    if not (math.isfinite(b) and b > 0):
        raise InvalidInputError(messages.ERR_B_POSITIVE.format(b=b))


def _tail_note(f, domain: Interval) -> Tuple[str, float]:
    tail = tail_value(f, domain)
    return messages.NOTE_TAIL_VALUE.format(lo=domain.lo, hi=domain.hi, tail=tail), tail


def _solve(f, domain: Interval, m: MeasureSpec, cfg: IneqConfig) -> SugenoValue:
    return sugeno_integral(f, domain, m, cfg.solver_tol, cfg.level_set, cfg.cap, cfg.measure_tol)


# ---------- Pólya-Knopp：第一种情形 ----------
def pk_case1(f, b: float, cfg: Optional[IneqConfig] = None) -> IneqReport:
    """SINT exp((1/x)∫₀ˣ ln f(t)dt)dx ≤ SINT f(x)dx，在 [0, b] 上按均匀测度计算"""
    cfg = cfg or IneqConfig()
    _check_b(b)
    f = _expr(f)
    domain = Interval(0.0, b)
    flags = [
        HypothesisFlag("nondecreasing", detect_shape(f, domain, cfg.probe_points) is Shape.NONDECREASING),
        HypothesisFlag("positive", _nonnegative(f, domain, cfg.probe_points, strict=True)),
    ]
    notes = [messages.NOTE_PK1_FACTOR_E]
    if not flags[0].holds:
        notes.append(messages.NOTE_NOT_NONDECREASING)
    if not flags[1].holds:
        notes.append(messages.NOTE_NOT_POSITIVE)

    g = RiemannAverageIntegrand(
        ln_of(f), _EXP, domain, cfg.level_set.scan_points, cfg.quad_tol,
        head=lambda x, tol: ln_cumulative(f, x, tol),
        label=f"exp((1/x)·∫ ln {print_canonical(f)})",
    )
    lhs = _solve(g, domain, UNIFORM, cfg)
    rhs = _solve(f, domain, UNIFORM, cfg)
    tail_note, tail = _tail_note(f, domain)
    notes.append(tail_note)
    details = {
        "lhs_certificate": _certificate(lhs),
        "rhs_certificate": _certificate(rhs),
        "holds_with_factor_e": bool(E * rhs.value - lhs.value >= -cfg.violation_tol),
        "tail_value": tail,
    }
    return _report(IneqId.PK1, lhs.value, rhs.value, cfg, flags, notes, details)


# ---------- Pólya-Knopp：第二种情形 ----------
def pk_case2(f, b: float, cfg: Optional[IneqConfig] = None) -> IneqReport:
    """SINT exp((1/x) SINT₀ˣ ln f(t)dt)dx ≤ e·SINT f(x)dx，内层也是 Sugeno 积分"""
    cfg = cfg or IneqConfig()
    _check_b(b)
    f = _expr(f)
    domain = Interval(0.0, b)
    h = ln_of(f)
    inner_shape = detect_shape(h, domain, cfg.probe_points)
    flags = [
        HypothesisFlag("inner_integrand_nonnegative", _nonnegative(h, domain, cfg.probe_points)),
        HypothesisFlag("positive", _nonnegative(f, domain, cfg.probe_points, strict=True)),
    ]
    notes = [messages.NOTE_INNER_SHAPE.format(shape=inner_shape.value)]
    if not flags[0].holds:
        notes.append(messages.NOTE_INNER_NEGATIVE.format(inner=print_canonical(h)))
    if not flags[1].holds:
        notes.append(messages.NOTE_NOT_POSITIVE)

    g = SugenoAverageIntegrand(
        h, _EXP, inner_shape, cfg.level_set.root_tol, cfg.level_set, cfg.cap,
        label=f"exp((1/x)·SINT {print_canonical(h)})",
    )
    lhs = _solve(g, domain, UNIFORM, cfg)
    rhs_integral = _solve(f, domain, UNIFORM, cfg)
    rhs = E * rhs_integral.value

    # 证明按 q = e·SINT f 与 e 的大小分两种情形
    q = rhs
    if q > E:
        proof_case, bound = 1, None
        notes.append(messages.NOTE_PK2_CASE1.format(q=q))
    else:
        proof_case = 2
        bound = alpha_log_alpha_root(math.log(q)) if q > 0 else None
        notes.append(messages.NOTE_PK2_CASE2.format(q=q, bound=bound))
    tail_note, tail = _tail_note(f, domain)
    notes.append(tail_note)
    details = {
        "lhs_certificate": _certificate(lhs),
        "rhs_certificate": _certificate(rhs_integral),
        "q": q,
        "proof_case": proof_case,
        "proof_bound": bound,
        "inner_shape": inner_shape.value,
        "tail_value": tail,
    }
    return _report(IneqId.PK2, lhs.value, rhs, cfg, flags, notes, details)


# ---------- 推广形式：任意双射 F ----------
def generalized_pk(f, bij, inner: InnerKind, b: float, cfg: Optional[IneqConfig] = None,
                   outer_measure: MeasureSpec = UNIFORM, a: float = 0.0) -> IneqReport:
    """
    SINT F((1/x)·I(x))dx ≤ e·SINT f(x)dx，I(x) 为 F⁻¹∘f 在 [0, x] 上的内层积分（Riemann 或 Sugeno）。
    外层测度可取 dx/x，此时外层区间为 [a, b] 且 a > 0。
    """
    cfg = cfg or IneqConfig()
    _check_b(b)
    f, bij = _expr(f), _expr(bij)
    if outer_measure.weight is WeightKind.RECIPROCAL and not a > 0:
        raise InvalidInputError(messages.ERR_RECIPROCAL_DOMAIN.format(a=a))
    domain = Interval(a, b)
    inner_domain = Interval(0.0, b)

    inverse = NumericInverse(bij, cfg.level_set.root_tol)
    _, fv, fok = probe(f, inner_domain, cfg.probe_points)
    inverse.check_monotone(fv[fok], cfg.probe_points)
    h = InverseComposition(inverse, f)

    flags = [HypothesisFlag("bijection_monotone", True)]
    notes = [messages.NOTE_INNER_DT, messages.NOTE_GPK_MEASURE.format(measure=outer_measure.to_text())]
    label = f"{print_canonical(bij)}∘(1/x)·{inner.value} {h.describe()}"
    if inner is InnerKind.RIEMANN:
        ineq_id = IneqId.GPK1
        nondecreasing = detect_shape(f, inner_domain, cfg.probe_points) is Shape.NONDECREASING
        flags.append(HypothesisFlag("nondecreasing", nondecreasing))
        if not nondecreasing:
            notes.append(messages.NOTE_NOT_NONDECREASING)
        g = RiemannAverageIntegrand(h, bij, domain, cfg.level_set.scan_points, cfg.quad_tol, label=label)
    else:
        ineq_id = IneqId.GPK2
        inner_shape = detect_shape(h, inner_domain, cfg.probe_points)
        nonnegative = _nonnegative(h, inner_domain, cfg.probe_points)
        flags.append(HypothesisFlag("inner_integrand_nonnegative", nonnegative))
        notes.append(messages.NOTE_INNER_SHAPE.format(shape=inner_shape.value))
        if not nonnegative:
            notes.append(messages.NOTE_INNER_NEGATIVE.format(inner=h.describe()))
        g = SugenoAverageIntegrand(h, bij, inner_shape, cfg.level_set.root_tol, cfg.level_set, cfg.cap,
                                   label=label)

    lhs = _solve(g, domain, outer_measure, cfg)
    rhs_integral = _solve(f, domain, outer_measure, cfg)
    tail_note, tail = _tail_note(f, domain)
    notes.append(tail_note)
    details = {
        "lhs_certificate": _certificate(lhs),
        "rhs_certificate": _certificate(rhs_integral),
        "bijection": print_canonical(bij),
        "inner": inner.value,
        "outer_measure": outer_measure.to_text(),
        "increasing_bijection": inverse.increasing,
        "tail_value": tail,
    }
    return _report(ineq_id, lhs.value, E * rhs_integral.value, cfg, flags, notes, details)


# ---------- Hardy-Knopp ----------
def hardy_knopp(f, phi, a: float, b: float, cfg: Optional[IneqConfig] = None) -> IneqReport:
    """SINT φ((1/x)·SINT₀ˣ f(t)dt) dx/x ≤ e·SINT φ(f(x)) dx/x，外层在 [a, b] 上"""
    cfg = cfg or IneqConfig()
    if not (math.isfinite(a) and math.isfinite(b) and 0 < a < b):
        raise InvalidInputError(messages.ERR_HK_DOMAIN.format(a=a, b=b))
    f, phi = _expr(f), _expr(phi)
    domain = Interval(a, b)
    inner_domain = Interval(0.0, b)

    _, fv, fok = probe(f, inner_domain, cfg.probe_points)
    finite = fv[fok & np.isfinite(fv)]
    # 内层平均 SINT₀ˣ f / x 落在 [0, 1]，φ 需在 [0, 1] 与 f 的取值范围上检查
    hi = max(1.0, float(finite.max())) if finite.size else 1.0
    phi_positive, phi_convex = _phi_checks(phi, 0.0, hi, cfg.probe_points)
    flags = [
        HypothesisFlag("phi_convex", phi_convex),
        HypothesisFlag("phi_positive", phi_positive),
        HypothesisFlag("integrand_nonnegative", _nonnegative(f, inner_domain, cfg.probe_points)),
    ]
    inner_shape = detect_shape(f, inner_domain, cfg.probe_points)
    notes = [messages.NOTE_INNER_SHAPE.format(shape=inner_shape.value)]
    if not phi_convex:
        notes.append(messages.NOTE_HK_NOT_CONVEX)
    if not phi_positive:
        notes.append(messages.NOTE_HK_NOT_POSITIVE)

    g = SugenoAverageIntegrand(f, phi, inner_shape, cfg.level_set.root_tol, cfg.level_set, cfg.cap,
                               label=f"{print_canonical(phi)}∘(1/x)·SINT {print_canonical(f)}")
    lhs = _solve(g, domain, RECIPROCAL, cfg)
    rhs_integral = _solve(substitute(phi, f), domain, RECIPROCAL, cfg)
    tail_note, tail = _tail_note(f, domain)
    notes.append(tail_note)
    details = {
        "lhs_certificate": _certificate(lhs),
        "rhs_certificate": _certificate(rhs_integral),
        "phi": print_canonical(phi),
        "inner_shape": inner_shape.value,
        "tail_value": tail,
    }
    return _report(IneqId.HK, lhs.value, E * rhs_integral.value, cfg, flags, notes, details)


# ---------- Jensen 型探针 ----------
def jensen_probe(g, x: float, cfg: Optional[IneqConfig] = None) -> IneqReport:
    """exp(SINT_[0,x] g) 与 SINT_[0,x] exp(g) 的比较，只记录结果"""
    cfg = cfg or IneqConfig()
    _check_b(x)
    g = _expr(g)
    domain = Interval(0.0, x)
    flags = [HypothesisFlag("integrand_nonnegative", _nonnegative(g, domain, cfg.probe_points))]
    inner = _solve(g, domain, UNIFORM, cfg)
    rhs = _solve(exp_of(g), domain, UNIFORM, cfg)
    details = {"lhs_certificate": _certificate(inner), "rhs_certificate": _certificate(rhs)}
    return _report(IneqId.JENSEN_PROBE, math.exp(inner.value), rhs.value, cfg, flags,
                   [messages.NOTE_JENSEN_EXPLORATORY], details, exploratory=True)


# ---------- 统一入口 ----------
def run_check(ineq_id: IneqId, f, domain: Interval, cfg: Optional[IneqConfig] = None, phi=None, bij=None,
              outer_measure: MeasureSpec = UNIFORM) -> IneqReport:
    """按 id 分派到各校验；命令行与批量校验共用。gpk1 的内层为 Riemann 积分，gpk2 为 Sugeno 积分"""
    cfg = cfg or IneqConfig()
    if ineq_id in (IneqId.PK1, IneqId.PK2, IneqId.JENSEN_PROBE) and domain.lo != 0:
        raise InvalidInputError(messages.ERR_DOMAIN_FROM_ZERO.format(ineq=ineq_id.value, lo=domain.lo, hi=domain.hi))
    if ineq_id is IneqId.PK1:
        return pk_case1(f, domain.hi, cfg)
    if ineq_id is IneqId.PK2:
        return pk_case2(f, domain.hi, cfg)
    if ineq_id is IneqId.JENSEN_PROBE:
        return jensen_probe(f, domain.hi, cfg)
    if ineq_id is IneqId.HK:
        if phi is None:
            raise InvalidInputError(messages.ERR_MISSING_OPTION.format(command="hk", option="--phi"))
        return hardy_knopp(f, phi, domain.lo, domain.hi, cfg)
    if bij is None:
        raise InvalidInputError(messages.ERR_MISSING_OPTION.format(command="gpk", option="--bij"))
    inner = InnerKind.RIEMANN if ineq_id is IneqId.GPK1 else InnerKind.SUGENO
    return generalized_pk(f, bij, inner, domain.hi, cfg, outer_measure, domain.lo)


# ---------- 稳定性审计 ----------
def stability_audit(report_fn: Callable[[IneqConfig], IneqReport], cfg: Optional[IneqConfig] = None) -> Dict[str, Any]:
    """同一校验在 cfg 与 cfg.refined() 下各跑一次，返回两端的最大变化量"""
    cfg = cfg or IneqConfig()
    base = report_fn(cfg)
    refined = report_fn(cfg.refined())
    change = max(abs(base.lhs - refined.lhs), abs(base.rhs - refined.rhs))
    return {
        "base": base.to_dict(),
        "refined": refined.to_dict(),
        "max_change": change,
        "stable": change < cfg.violation_tol,
    }
