from enum import Enum
from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Tuple
import math

from src.backend.expr import Expr, print_canonical
from src.common import config, messages
from src.common.errors import InvalidInputError


# ---------- 基础枚举定义 ----------
class WeightKind(Enum):
    UNIFORM = "uniform"          # 标准 Lebesgue 测度
    RECIPROCAL = "reciprocal"    # 权重 dx/x
    DENSITY = "density"          # 用户给定的密度表达式


class Shape(Enum):
    UNKNOWN = "unknown"
    NONDECREASING = "nondecreasing"
    NONINCREASING = "nonincreasing"


class IneqId(Enum):
    PK1 = "pk1"
    PK2 = "pk2"
    GPK1 = "gpk1"
    GPK2 = "gpk2"
    HK = "hk"
    JENSEN_PROBE = "jensen_probe"


class InnerKind(Enum):
    RIEMANN = "riemann"
    SUGENO = "sugeno"


class FamilyName(Enum):
    AFFINE_INCREASING = "affine_increasing"                      # a·x + c
    POWER_INCREASING = "power_increasing"                        # a·x^p + c
    EXP_INCREASING = "exp_increasing"                            # exp(a·x)
    SHIFTED = "shifted"                                          # 上述任一族 + s，s ≥ 1
    PIECEWISE_LINEAR_INCREASING = "piecewise_linear_increasing"  # k 个折点


# ---------- 区间与区间并 ----------
@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        if math.isnan(self.lo) or math.isnan(self.hi) or self.lo < 0 or self.hi < self.lo or math.isinf(self.lo):
            raise InvalidInputError(messages.ERR_INVALID_INTERVAL.format(lo=self.lo, hi=self.hi))

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def finite(self) -> bool:
        return math.isfinite(self.hi)

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class IntervalUnion:
    intervals: Tuple[Interval, ...] = ()

    def __iter__(self):
        return iter(self.intervals)

    def __len__(self) -> int:
        return len(self.intervals)

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def total_length(self) -> float:
        return sum(iv.length for iv in self.intervals)

    def contains(self, x: float) -> bool:
        return any(iv.contains(x) for iv in self.intervals)

    def to_list(self) -> List[List[float]]:
        return [[iv.lo, iv.hi] for iv in self.intervals]


# ---------- 测度 ----------
@dataclass(frozen=True)
class MeasureSpec:
    weight: WeightKind = WeightKind.UNIFORM
    density: Optional[Expr] = None

    def to_text(self) -> str:
        if self.weight is WeightKind.DENSITY:
            return f"density:{print_canonical(self.density)}"
        return self.weight.value


UNIFORM = MeasureSpec(WeightKind.UNIFORM)
RECIPROCAL = MeasureSpec(WeightKind.RECIPROCAL)


# ---------- 水平集选项 ----------
@dataclass(frozen=True)
class LevelSetOptions:
    scan_points: int = config.SCAN_POINTS
    root_tol: float = config.ROOT_TOL
    declared_shape: Shape = Shape.UNKNOWN

    def __post_init__(self):
        if self.scan_points < 2:
            raise InvalidInputError(messages.ERR_SCAN_POINTS.format(value=self.scan_points))
        if not self.root_tol > 0:
            raise InvalidInputError(messages.ERR_TOL_POSITIVE.format(name="root_tol", value=self.root_tol))


# ---------- 求积结果 ----------
@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float
    evaluations: int


# ---------- Sugeno 积分结果 ----------
@dataclass(frozen=True)
class SugenoValue:
    value: float
    alpha_star: float
    F_at_lower: float
    F_at_upper: float
    evaluations: int
    bracket_width: float
    alpha_max: float = 0.0   # 二分的上端 min(μ(A), sup f)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# ---------- 不等式校验 ----------
@dataclass(frozen=True)
class HypothesisFlag:
    name: str
    holds: bool

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "holds": self.holds}


@dataclass
class IneqReport:
    id: IneqId
    lhs: float
    rhs: float
    slack: float
    holds: bool
    hypothesis_flags: List[HypothesisFlag] = field(default_factory=list)
    notes: str = ""
    details: Dict[str, Any] = field(default_factory=dict)
    exploratory: bool = False

    def flag(self, name: str) -> Optional[bool]:
        for f in self.hypothesis_flags:
            if f.name == name:
                return f.holds
        return None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.id.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "holds": self.holds,
            "hypothesis_flags": [f.to_dict() for f in self.hypothesis_flags],
            "notes": self.notes,
            "details": self.details,
            "exploratory": self.exploratory,
        }


@dataclass(frozen=True)
class IneqConfig:
    """不等式校验的全部容差"""
    violation_tol: float = config.VIOLATION_TOL
    solver_tol: float = config.SOLVER_TOL
    quad_tol: float = config.QUAD_TOL
    measure_tol: float = config.MEASURE_TOL
    cap: float = config.ALPHA_CAP
    probe_points: int = config.PROBE_POINTS
    level_set: LevelSetOptions = field(default_factory=LevelSetOptions)

    def __post_init__(self):
        for name in ("violation_tol", "solver_tol", "quad_tol", "measure_tol"):
            value = getattr(self, name)
            if not value > 0:
                raise InvalidInputError(messages.ERR_TOL_POSITIVE.format(name=name, value=value))

    def refined(self) -> "IneqConfig":
        """扫描点加倍、所有容差减半，用于稳定性审计"""
        return IneqConfig(
            violation_tol=self.violation_tol,
            solver_tol=self.solver_tol / 2,
            quad_tol=self.quad_tol / 2,
            measure_tol=self.measure_tol / 2,
            cap=self.cap,
            probe_points=self.probe_points,
            level_set=LevelSetOptions(
                self.level_set.scan_points * 2,
                self.level_set.root_tol / 2,
                self.level_set.declared_shape,
            ),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "violation_tol": self.violation_tol,
            "solver_tol": self.solver_tol,
            "quad_tol": self.quad_tol,
            "measure_tol": self.measure_tol,
            "cap": self.cap,
            "probe_points": self.probe_points,
            "scan_points": self.level_set.scan_points,
            "root_tol": self.level_set.root_tol,
        }


# ---------- 批量校验 ----------
@dataclass(frozen=True)
class FamilySpec:
    family: FamilyName
    count: int
    seed: int
    ranges: Dict[str, Tuple[float, float]] = field(default_factory=dict)
    base: FamilyName = FamilyName.AFFINE_INCREASING   # shifted 族的底族
    probe_domain: Tuple[float, float] = config.DEFAULT_SWEEP_DOMAIN

    def to_dict(self) -> Dict[str, Any]:
        return {
            "family": self.family.value,
            "count": self.count,
            "seed": self.seed,
            "ranges": {k: list(v) for k, v in sorted(self.ranges.items())},
            "base": self.base.value,
            "probe_domain": list(self.probe_domain),
        }


@dataclass
class TrialResult:
    index: int
    inputs: Dict[str, Any]
    report: Optional[IneqReport] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.report is not None


@dataclass
class SweepReport:
    ineq_id: IneqId
    trials: int
    violations: int
    errors: int
    min_slack: float
    worst_case: Optional[Dict[str, Any]]
    seed: int
    family: str = ""
    error_messages: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.ineq_id.value,
            "trials": self.trials,
            "violations": self.violations,
            "errors": self.errors,
            "min_slack": self.min_slack,
            "worst_case": self.worst_case,
            "seed": self.seed,
            "family": self.family,
            "error_messages": self.error_messages,
        }
