"""标量算术后端

三种模式共享同一套接口，上层公式只依赖这些方法:
  - ExactArithmetic: fractions.Fraction + 无分数 Bareiss 消元求逆
  - BigFloatArithmetic: mpmath 独立上下文 (dps 可配置)，LU 部分主元求逆
  - MachineArithmetic: numpy float64，LAPACK LU 求逆，可选 Cholesky (scipy)
"""
import logging
import math
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple

import mpmath
import numpy as np
from scipy import linalg as sla

from app.core.exceptions import SingularMatrix
from app.models.models import ModeKind, Scalar, ScalarMode
from app.utils.rational import format_fraction

logger = logging.getLogger(__name__)

# 稀疏装配: (i, j) -> 值
Entries = Dict[Tuple[int, int], Fraction]


class Arithmetic(ABC):
    """矩阵内核接口: 稠密矩阵的具体表示由子类决定"""

    mode: ScalarMode

    @abstractmethod
    def scalar(self, value) -> Scalar:
        """把 int / Fraction 转成本模式的标量"""

    @abstractmethod
    def assemble(self, size: int, entries: Entries) -> Any:
        """按稀疏条目装配 size x size 稠密矩阵"""

    @abstractmethod
    def add_constant(self, matrix, value) -> Any:
        """返回 matrix + value * J"""

    @abstractmethod
    def inverse(self, matrix) -> Any:
        """一般方阵求逆，奇异时抛 SingularMatrix"""

    def spd_inverse(self, matrix) -> Any:
        return self.inverse(matrix)

    @abstractmethod
    def get(self, matrix, i: int, j: int) -> Scalar:
        ...

    @abstractmethod
    def size(self, matrix) -> int:
        ...

    @abstractmethod
    def matmul(self, a, b) -> Any:
        ...

    @abstractmethod
    def subtract(self, a, b) -> Any:
        ...

    @abstractmethod
    def transpose(self, matrix) -> Any:
        ...

    @abstractmethod
    def max_abs(self, matrix) -> Scalar:
        ...

    @abstractmethod
    def to_rows(self, matrix) -> List[List[Scalar]]:
        ...

    @abstractmethod
    def format(self, value: Scalar, digits: int) -> str:
        ...

    def diagonal(self, matrix) -> List[Scalar]:
        return [self.get(matrix, i, i) for i in range(self.size(matrix))]

    def trace(self, matrix) -> Scalar:
        return sum(self.diagonal(matrix), self.scalar(0))

    def row_sums(self, matrix) -> List[Scalar]:
        return [sum(row, self.scalar(0)) for row in self.to_rows(matrix)]

    def quadratic_form(self, matrix, vector: Sequence[Scalar]) -> Scalar:
        """xᵀ M x"""
        n = self.size(matrix)
        total = self.scalar(0)
        for i in range(n):
            if vector[i] == 0:
                continue
            acc = self.scalar(0)
            for j in range(n):
                if vector[j] != 0:
                    acc += self.get(matrix, i, j) * vector[j]
            total += vector[i] * acc
        return total

    def resistance_rows(self, pinv) -> List[List[Scalar]]:
        """r(p,q) = l⁺_pp - 2 l⁺_pq + l⁺_qq 的全部条目"""
        rows = self.to_rows(pinv)
        n = len(rows)
        diag = [rows[i][i] for i in range(n)]
        return [[diag[i] - 2 * rows[i][j] + diag[j] for j in range(n)]
                for i in range(n)]

    def is_close(self, a: Scalar, b: Scalar, rtol: float = 1e-9) -> bool:
        scale = max(abs(a), abs(b), 1)
        return abs(a - b) <= rtol * scale

    def to_float(self, value: Scalar) -> float:
        return float(value)


class ExactArithmetic(Arithmetic):

    def __init__(self):
        self.mode = ScalarMode.exact()

    def scalar(self, value) -> Fraction:
        return Fraction(value)

    def assemble(self, size, entries):
        zero = Fraction(0)
        rows = [[zero] * size for _ in range(size)]
        for (i, j), value in entries.items():
            rows[i][j] = Fraction(value)
        return rows

    def add_constant(self, matrix, value):
        value = Fraction(value)
        return [[x + value for x in row] for row in matrix]

    def inverse(self, matrix):
        return bareiss_inverse(matrix)

    def get(self, matrix, i, j):
        return matrix[i][j]

    def size(self, matrix):
        return len(matrix)

    def matmul(self, a, b):
        columns = list(zip(*b))
        return [[sum((x * y for x, y in zip(row, col) if x and y), Fraction(0))
                 for col in columns] for row in a]

    def subtract(self, a, b):
        return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]

    def transpose(self, matrix):
        return [list(col) for col in zip(*matrix)]

    def max_abs(self, matrix):
        return max((abs(x) for row in matrix for x in row), default=Fraction(0))

    def to_rows(self, matrix):
        return [list(row) for row in matrix]

    def format(self, value, digits):
        return format_fraction(Fraction(value))

    def is_close(self, a, b, rtol=1e-9):
        return a == b


class BigFloatArithmetic(Arithmetic):

    def __init__(self, digits: int = 30):
        self.mode = ScalarMode.bigfloat(digits)
        # 独立上下文，避免修改全局 mpmath.mp 的精度
        self.ctx = mpmath.MPContext()
        self.ctx.dps = digits

    def scalar(self, value):
        if isinstance(value, Fraction):
            return self.ctx.mpf(value.numerator) / value.denominator
        return self.ctx.mpf(value)

    def assemble(self, size, entries):
        matrix = self.ctx.zeros(size, size)
        for (i, j), value in entries.items():
            matrix[i, j] = self.scalar(value)
        return matrix

    def add_constant(self, matrix, value):
        value = self.scalar(value)
        n = matrix.rows
        result = matrix.copy()
        for i in range(n):
            for j in range(n):
                result[i, j] += value
        return result

    def inverse(self, matrix):
        try:
            return self.ctx.inverse(matrix)
        except ZeroDivisionError as e:
            raise SingularMatrix("矩阵奇异，无法求逆") from e

    def get(self, matrix, i, j):
        return matrix[i, j]

    def size(self, matrix):
        return matrix.rows

    def matmul(self, a, b):
        return a * b

    def subtract(self, a, b):
        return a - b

    def transpose(self, matrix):
        return matrix.T

    def max_abs(self, matrix):
        return max((abs(x) for row in matrix.tolist() for x in row),
                   default=self.ctx.mpf(0))

    def to_rows(self, matrix):
        return [[matrix[i, j] for j in range(matrix.cols)]
                for i in range(matrix.rows)]

    def format(self, value, digits):
        return self.ctx.nstr(self.scalar(value), digits)

    def is_close(self, a, b, rtol=None):
        if rtol is None:
            rtol = self.ctx.mpf(10) ** (-(self.ctx.dps - 8))
        return super().is_close(a, b, rtol)


class MachineArithmetic(Arithmetic):

    def __init__(self):
        self.mode = ScalarMode.machine()

    def scalar(self, value):
        return float(value)

    def assemble(self, size, entries):
        matrix = np.zeros((size, size), dtype=np.float64)
        for (i, j), value in entries.items():
            matrix[i, j] = float(value)
        return matrix

    def add_constant(self, matrix, value):
        return matrix + float(value)

    def inverse(self, matrix):
        try:
            return np.linalg.inv(matrix)
        except np.linalg.LinAlgError as e:
            raise SingularMatrix("矩阵奇异，无法求逆") from e

    def spd_inverse(self, matrix):
        """对称正定矩阵用 Cholesky 分解求逆"""
        try:
            factor = sla.cho_factor(matrix, lower=True, check_finite=False)
        except np.linalg.LinAlgError as e:
            raise SingularMatrix("矩阵非正定，Cholesky 分解失败") from e
        identity = np.eye(matrix.shape[0])
        return sla.cho_solve(factor, identity, check_finite=False)

    def get(self, matrix, i, j):
        return float(matrix[i, j])

    def size(self, matrix):
        return matrix.shape[0]

    def matmul(self, a, b):
        return a @ b

    def subtract(self, a, b):
        return a - b

    def transpose(self, matrix):
        return matrix.T

    def max_abs(self, matrix):
        return float(np.max(np.abs(matrix))) if matrix.size else 0.0

    def to_rows(self, matrix):
        return matrix.tolist()

    def diagonal(self, matrix):
        return np.diag(matrix).tolist()

    def trace(self, matrix):
        return float(np.trace(matrix))

    def row_sums(self, matrix):
        return matrix.sum(axis=1).tolist()

    def quadratic_form(self, matrix, vector):
        x = np.asarray(vector, dtype=np.float64)
        return float(x @ matrix @ x)

    def resistance_rows(self, pinv):
        diag = np.diag(pinv)
        return (diag[:, None] - 2 * pinv + diag[None, :]).tolist()

    def format(self, value, digits):
        return f"{float(value):.{digits}g}"


def bareiss_inverse(rows: List[List[Fraction]]) -> List[List[Fraction]]:
    """无分数 Gauss-Jordan (Bareiss) 求有理矩阵的逆

    先乘以分母的最小公倍数化为整数矩阵 B，对 [B | I] 做整数消元；
    每一步的除法都是整除，结束时左半为 d·I，右半为 d·B⁻¹。
    """
    n = len(rows)
    if n == 0:
        return []
    scale = math.lcm(*(x.denominator for row in rows for x in row))
    m = []
    for i, row in enumerate(rows):
        ints = [int(x * scale) for x in row]
        m.append(ints + [1 if i == j else 0 for j in range(n)])

    prev = 1
    for k in range(n):
        pivot_row = next((r for r in range(k, n) if m[r][k] != 0), None)
        if pivot_row is None:
            raise SingularMatrix("矩阵奇异，无法求逆", column=k)
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
        row_k = m[k]
        pivot = row_k[k]
        for i in range(n):
            if i == k:
                continue
            row_i = m[i]
            factor = row_i[k]
            m[i] = [(pivot * a - factor * b) // prev
                    for a, b in zip(row_i, row_k)]
        prev = pivot

    det = prev
    return [[Fraction(scale * m[i][n + j], det) for j in range(n)]
            for i in range(n)]


def arithmetic_for(mode: ScalarMode) -> Arithmetic:
    if mode.kind == ModeKind.EXACT:
        return ExactArithmetic()
    if mode.kind == ModeKind.BIGFLOAT:
        return BigFloatArithmetic(mode.digits)
    return MachineArithmetic()
