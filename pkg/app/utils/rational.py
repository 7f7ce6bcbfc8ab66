from decimal import Decimal
from fractions import Fraction
from numbers import Rational


def to_fraction(value) -> Fraction:
    """把边长字面量转换为精确有理数

    接受 int、Fraction、"p/q"、"12"、十进制小数 "0.25" 或 "1e-3"。
    小数按其字面十进制值转换 (0.1 -> 1/10)，float 按二进制值转换。
    """
    if isinstance(value, bool):
        raise ValueError(f"无法解析边长: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Rational):
        return Fraction(int(value.numerator), int(value.denominator))
    if isinstance(value, (Decimal, float)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text:
            raise ValueError("边长为空")
        try:
            if "/" in text:
                return Fraction(text)
            return Fraction(Decimal(text))
        except (ValueError, ZeroDivisionError, ArithmeticError) as e:
            raise ValueError(f"无法解析边长: {value!r}") from e
    raise ValueError(f"无法解析边长: {value!r}")


def format_fraction(value: Fraction) -> str:
    """精确模式输出: 整数不带分母，其余为 p/q"""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
