"""异常定义

每个异常类带有 ``exit_code``，命令行直接据此退出：
2 校验失败，3 解析失败，4 数值失败。
"""
from typing import Any, Optional


class PMGraphError(Exception):
    """所有业务异常的基类"""

    exit_code: int = 1

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def __str__(self) -> str:
        return self.message


# --- 校验错误 (exit 2) ---

class GraphValidationError(PMGraphError):
    exit_code = 2


class DisconnectedGraph(GraphValidationError):
    pass


class NonpositiveEdgeLength(GraphValidationError):
    pass


class NonEffectiveCanonicalDivisor(GraphValidationError):
    pass


class DuplicateVertexId(GraphValidationError):
    pass


class UnknownVertex(GraphValidationError):
    pass


class UnknownEdge(GraphValidationError):
    pass


class EmptyGraph(GraphValidationError):
    pass


class NotAdequate(GraphValidationError):
    pass


class InvalidGenus(GraphValidationError):
    pass


class GenusMismatch(GraphValidationError):
    pass


class NonzeroPolarization(GraphValidationError):
    pass


class NotRegular(GraphValidationError):
    pass


class BadParameter(GraphValidationError):
    pass


class BadParameterCount(BadParameter):
    pass


# --- 解析错误 (exit 3) ---

class ParseError(PMGraphError):
    exit_code = 3

    def __init__(self, message: str, field: Optional[str] = None,
                 line: Optional[int] = None):
        location = []
        if line is not None:
            location.append(f"第 {line} 行")
        if field:
            location.append(f"字段 {field}")
        full = f"{message} ({', '.join(location)})" if location else message
        super().__init__(full, field=field, line=line)
        self.field = field
        self.line = line


# --- 数值错误 (exit 4) ---

class NumericError(PMGraphError):
    exit_code = 4


class SingularMatrix(NumericError):
    pass


class PrecisionLoss(NumericError):
    pass


class PrecisionLossWarning(UserWarning):
    """浮点模式下 Penrose 残差超过容差"""
