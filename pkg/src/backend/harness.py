"""
随机函数族、不等式批量校验与文献算例审计。

所有随机量（族成员、φ 的选择、子区间）在试验开始前由种子一次性抽取，
试验可以在进程池中乱序完成，汇总时按试验编号排序，报告与调度无关。
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor, as_completed
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from src.backend.expr import Binary, BinaryOp, Const, Expr, Unary, UnaryOp, Var, parse, print_canonical
from src.backend.ineq import pk_case1, pk_case2, run_check
from src.backend.levelset import detect_shape, probe
from src.backend.models import (FamilyName, FamilySpec, IneqConfig, IneqId, IneqReport, Interval, Shape,
                                SweepReport, TrialResult)
from src.common import config, messages
from src.common.errors import InvalidInputError, RejectionBudgetError, SugenoError

logger = logging.getLogger(__name__)

# 各族参数的默认取值区间
DEFAULT_RANGES: Dict[FamilyName, Dict[str, Tuple[float, float]]] = {
    FamilyName.AFFINE_INCREASING: {"a": (0.1, 3.0), "c": (0.0, 2.0)},
    FamilyName.POWER_INCREASING: {"a": (0.1, 2.0), "p": (0.5, 3.0), "c": (0.0, 2.0)},
    FamilyName.EXP_INCREASING: {"a": (0.05, 1.0)},
    FamilyName.SHIFTED: {"s": (1.0, 3.0)},
    FamilyName.PIECEWISE_LINEAR_INCREASING: {"c": (0.0, 2.0), "slope": (0.1, 2.0), "knots": (1, 4)},
}

SWEEPABLE = (IneqId.PK1, IneqId.PK2, IneqId.HK, IneqId.JENSEN_PROBE)
HK_MIN_A = 0.1
HK_POWER_RANGE = (1.5, 4.0)


# ---------- 表达式模板 ----------
def _add(a: Expr, b: Expr) -> Expr:
    return Binary(BinaryOp.ADD, a, b)


def _mul(a: Expr, b: Expr) -> Expr:
    return Binary(BinaryOp.MUL, a, b)


def _pow(a: Expr, b: Expr) -> Expr:
    return Binary(BinaryOp.POW, a, b)


def _ramp(knot: float) -> Expr:
    """max(x − k, 0) = ((x − k) + ((x − k)^2)^0.5) / 2"""
    u = Binary(BinaryOp.SUB, Var(), Const(knot))
    return Binary(BinaryOp.DIV, _add(u, _pow(_pow(u, Const(2.0)), Const(0.5))), Const(2.0))


def _uniform(rng: np.random.Generator, ranges: Dict[str, Tuple[float, float]], name: str) -> float:
    lo, hi = ranges[name]
    return float(rng.uniform(lo, hi))


def _draw(family: FamilyName, ranges: Dict[str, Tuple[float, float]], rng: np.random.Generator,
          base: FamilyName, domain: Tuple[float, float]) -> Expr:
    if family is FamilyName.AFFINE_INCREASING:
        a, c = _uniform(rng, ranges, "a"), _uniform(rng, ranges, "c")
        return _add(_mul(Const(a), Var()), Const(c))
    if family is FamilyName.POWER_INCREASING:
        a, p, c = _uniform(rng, ranges, "a"), _uniform(rng, ranges, "p"), _uniform(rng, ranges, "c")
        return _add(_mul(Const(a), _pow(Var(), Const(p))), Const(c))
    if family is FamilyName.EXP_INCREASING:
        return Unary(UnaryOp.EXP, _mul(Const(_uniform(rng, ranges, "a")), Var()))
    if family is FamilyName.SHIFTED:
        inner = {**DEFAULT_RANGES[base], **ranges}
        member = _draw(base, inner, rng, base, domain)
        return _add(member, Const(_uniform(rng, ranges, "s")))
    # 分段线性：c + s0·x + Σ s_i·max(x − k_i, 0)，斜率全为正
    lo_k, hi_k = ranges["knots"]
    count = int(rng.integers(int(lo_k), int(hi_k) + 1))
    expr = _add(Const(_uniform(rng, ranges, "c")), _mul(Const(_uniform(rng, ranges, "slope")), Var()))
    knots = np.sort(rng.uniform(domain[0], domain[1], count))
    for k in knots:
        expr = _add(expr, _mul(Const(_uniform(rng, ranges, "slope")), _ramp(float(k))))
    return expr


def _certified(family: FamilyName, e: Expr, domain: Interval) -> bool:
    """族的形状声明：探测网格上单调不减，shifted 族还要求处处 ≥ 1"""
    if detect_shape(e, domain, config.FAMILY_PROBE_POINTS) is not Shape.NONDECREASING:
        return False
    if family is FamilyName.SHIFTED:
        _, values, ok = probe(e, domain, config.FAMILY_PROBE_POINTS)
        return bool(np.all(ok & (values >= 1.0)))
    return True


def _resolve_ranges(spec: FamilySpec) -> Dict[str, Tuple[float, float]]:
    ranges = {**DEFAULT_RANGES[spec.family], **spec.ranges}
    for name, (lo, hi) in ranges.items():
        if not (math.isfinite(lo) and math.isfinite(hi) and lo <= hi):
            raise InvalidInputError(messages.ERR_BAD_RANGE.format(name=name, value=(lo, hi)))
    return ranges


def generate(spec: FamilySpec) -> List[Expr]:
    """按种子生成 count 个通过形状探测的族成员，同一种子结果完全相同"""
    if spec.count < 1:
        raise InvalidInputError(messages.ERR_BAD_RANGE.format(name="count", value=spec.count))
    if spec.family is FamilyName.SHIFTED and spec.base is FamilyName.SHIFTED:
        raise InvalidInputError(messages.ERR_BAD_RANGE.format(name="base", value=spec.base.value))
    ranges = _resolve_ranges(spec)
    domain = Interval(*spec.probe_domain)
    rng = np.random.default_rng(spec.seed)
    budget = spec.count * config.REJECTION_FACTOR
    members: List[Expr] = []
    attempts = 0
    while len(members) < spec.count:
        if attempts >= budget:
            raise RejectionBudgetError(messages.ERR_REJECTION_BUDGET.format(
                family=spec.family.value, accepted=len(members), count=spec.count))
        attempts += 1
        e = _draw(spec.family, ranges, rng, spec.base, spec.probe_domain)
        if _certified(spec.family, e, domain):
            members.append(e)
        else:
            logger.debug("拒绝 %s 的抽样 %s", spec.family.value, print_canonical(e))
    return members


# ---------- 批量校验 ----------
def _hk_draw(seed: int, index: int, domain: Interval) -> Tuple[Expr, float, float]:
    """Hardy-Knopp 试验的 φ 与子区间 [a, b]"""
    rng = np.random.default_rng([seed, 1, index])
    kind = int(rng.integers(3))
    if kind == 0:
        phi = Unary(UnaryOp.EXP, Var())
    elif kind == 1:
        phi = _pow(Var(), Const(2.0))
    else:
        phi = _pow(Var(), Const(float(rng.uniform(*HK_POWER_RANGE))))
    lo = max(domain.lo, HK_MIN_A)
    a, b = np.sort(rng.uniform(lo, domain.hi, 2))
    if not b > a:
        b = domain.hi
    return phi, float(a), float(b)


def _tasks(ineq_id: IneqId, spec: FamilySpec, domain: Interval, cfg: IneqConfig) -> List[Tuple]:
    members = generate(spec)
    tasks = []
    for i, f in enumerate(members):
        inputs: Dict[str, Any] = {"f": print_canonical(f), "domain": [domain.lo, domain.hi]}
        if ineq_id is IneqId.HK:
            phi, a, b = _hk_draw(spec.seed, i, domain)
            inputs["phi"] = print_canonical(phi)
            inputs["domain"] = [a, b]
        tasks.append((i, ineq_id.value, inputs, cfg))
    return tasks


def _run_trial(task: Tuple) -> TrialResult:
    """单次试验；错误记入结果，不向外抛出"""
    index, ineq_value, inputs, cfg = task
    try:
        report = run_check(
            IneqId(ineq_value), parse(inputs["f"]), Interval(*inputs["domain"]), cfg,
            phi=parse(inputs["phi"]) if "phi" in inputs else None,
        )
        return TrialResult(index, inputs, report=report)
    except (SugenoError, ArithmeticError) as exc:
        return TrialResult(index, inputs, error=str(exc))


def sweep(ineq_id: IneqId, spec: FamilySpec, domain: Interval, cfg: Optional[IneqConfig] = None,
          jobs: int = 1) -> SweepReport:
    """对族中每个成员运行对应校验并汇总；jobs > 1 时使用进程池"""
    if ineq_id not in SWEEPABLE:
        raise InvalidInputError(messages.ERR_UNSUPPORTED_SWEEP.format(ineq=ineq_id.value))
    cfg = cfg or IneqConfig()
    tasks = _tasks(ineq_id, spec, domain, cfg)
    results: Dict[int, TrialResult] = {}
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            futures = {ex.submit(_run_trial, task): task[0] for task in tasks}
            for future in as_completed(futures):
                result = future.result()
                results[result.index] = result
                if len(results) % 50 == 0:
                    logger.info("sweep %s：已完成 %d/%d", ineq_id.value, len(results), len(tasks))
    else:
        for task in tasks:
            result = _run_trial(task)
            results[result.index] = result
    ordered = [results[i] for i in range(len(tasks))]
    return summarize(ineq_id, spec, ordered)


def summarize(ineq_id: IneqId, spec: FamilySpec, trials: List[TrialResult]) -> SweepReport:
    """按试验顺序汇总：违反次数、最小 slack 及其输入"""
    violations = 0
    min_slack = math.inf
    worst: Optional[Dict[str, Any]] = None
    error_messages: List[str] = []
    for trial in trials:
        if not trial.ok:
            error_messages.append(f"#{trial.index}: {trial.error}")
            continue
        report: IneqReport = trial.report
        if not report.holds:
            violations += 1
        if report.slack < min_slack:
            min_slack = report.slack
            worst = {**trial.inputs, "index": trial.index, "lhs": report.lhs, "rhs": report.rhs,
                     "slack": report.slack}
    if error_messages:
        logger.warning("sweep %s：%d 次试验出错", ineq_id.value, len(error_messages))
    return SweepReport(
        ineq_id=ineq_id,
        trials=len(trials),
        violations=violations,
        errors=len(error_messages),
        min_slack=min_slack,
        worst_case=worst,
        seed=spec.seed,
        family=spec.family.value,
        error_messages=error_messages,
    )


# ---------- 独立的根求解 oracle ----------
def independent_alpha_log_alpha_root(c: float = 1.0) -> Optional[float]:
    """α·ln α = c 的根，在 [1, max(e, c + 1)] 上逐位二分，与 ineq 中的求根互不依赖"""
    if not (math.isfinite(c) and c >= 0):
        return None
    lo, hi = 1.0, max(math.e, c + 1.0)
    for _ in range(2000):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if mid * math.log(mid) < c:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def independent_neg_log_log_root() -> float:
    """α = −ln ln α 在 (1, e) 内的根"""
    lo, hi = 1.0, math.e
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if mid + math.log(math.log(mid)) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------- 文献算例审计 ----------
PAPER_EXAMPLE_B = 5.0
PAPER_PRINTED_PK1 = (0.781, 1.6)


def _paper_integrals() -> Dict[Tuple[str, float, float], Tuple[str, str, float]]:
    """算例中出现的单个 Sugeno 积分：(规范表达式, a, b) → (文献打印值, 精确值记号, 精确值)"""
    e = math.e
    return {
        (print_canonical(parse("x/(2*exp(1))")), 0.0, 5.0): ("5/(2e+1)=0.781", "5/(1+2e)", 5 / (1 + 2 * e)),
        (print_canonical(parse("x/2")), 0.0, 5.0): ("5/3=1.6", "5/3", 5 / 3),
        (print_canonical(parse("exp(1/x)")), 0.0, 5.0): ("e", "α·ln α = 1 的根", independent_alpha_log_alpha_root(1.0)),
    }


def paper_integral_note(f: Expr, domain: Interval, value: float) -> str:
    """若 (f, domain) 是算例中的积分，返回打印值与精确值的对照说明，否则返回空串"""
    entry = _paper_integrals().get((print_canonical(f), domain.lo, domain.hi))
    if entry is None:
        return ""
    printed, label, exact = entry
    return messages.AUDIT_INTEGRAL.format(printed=printed, exact_label=label, exact=exact, value=value)


def paper_examples(cfg: Optional[IneqConfig] = None) -> List[IneqReport]:
    """复现两个算例，在 notes 与 details.audit 中并列文献打印值、精确值与计算值"""
    cfg = cfg or IneqConfig()
    e = math.e

    first = pk_case1("x/2", PAPER_EXAMPLE_B, cfg)
    lhs_exact, rhs_exact = 5 / (1 + 2 * e), 5 / 3
    first.notes = messages.AUDIT_EXAMPLE_PK1.format(
        lhs_exact=lhs_exact, rhs_exact=rhs_exact, lhs=first.lhs, rhs=first.rhs) + " " + first.notes
    first.details["audit"] = {
        "paper_lhs": PAPER_PRINTED_PK1[0],
        "paper_rhs": PAPER_PRINTED_PK1[1],
        "exact_lhs": lhs_exact,
        "exact_rhs": rhs_exact,
    }

    second = pk_case2("exp(1/x)", PAPER_EXAMPLE_B, cfg)
    root = independent_alpha_log_alpha_root(1.0)
    second.notes = messages.AUDIT_EXAMPLE_PK2.format(root=root, e=e, lhs=second.lhs, rhs=second.rhs) \
        + " " + second.notes
    second.details["audit"] = {
        "paper_lhs": e,
        "paper_rhs": e * e,
        "alpha_log_alpha_root": root,
        "exact_rhs": e * root,
    }
    return [first, second]
