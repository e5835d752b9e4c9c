# 异常层次：输入错误（退出码 2）与数值失败（退出码 3）
from typing import Any, Optional


class SugenoError(Exception):
    """所有业务异常的基类"""
    exit_code = 3


# ---------- 输入错误 ----------
class InvalidInputError(SugenoError, ValueError):
    exit_code = 2


class ExprSyntaxError(InvalidInputError):
    def __init__(self, message: str, position: int):
        super().__init__(message)
        self.position = position


class UnknownIdentifierError(InvalidInputError):
    def __init__(self, message: str, name: str, position: int):
        super().__init__(message)
        self.name = name
        self.position = position


class InvalidMeasureError(InvalidInputError):
    pass


class InvalidBijectionError(InvalidInputError):
    pass


# ---------- 数值失败 ----------
class NumericalError(SugenoError):
    exit_code = 3


class EvaluationError(NumericalError):
    def __init__(self, message: str, signal: Optional[Any] = None):
        super().__init__(message)
        self.signal = signal  # 触发失败的 OutOfDomain 标记


class DivergenceError(NumericalError):
    def __init__(self, message: str, partial_value: float, error_estimate: float, evaluations: int = 0):
        super().__init__(message)
        self.partial_value = partial_value
        self.error_estimate = error_estimate
        self.evaluations = evaluations


class CapReachedError(NumericalError):
    pass


class RejectionBudgetError(NumericalError):
    pass
