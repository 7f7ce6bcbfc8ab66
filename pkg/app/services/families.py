"""示例与表格中用到的图族生成器，顶点统一命名为 v0..vk"""
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

from app.core.exceptions import BadParameter, BadParameterCount
from app.models.models import FamilySpec, PMGraph
from app.services.graph import build_graph
from app.utils.rational import to_fraction


def _positive(name: str, value) -> Fraction:
    try:
        length = to_fraction(value)
    except ValueError as e:
        raise BadParameter(f"参数 {name} 无法解析: {value!r}") from e
    if length <= 0:
        raise BadParameter(f"参数 {name} 必须为正: {value}")
    return length


def _names(n: int):
    return [f"v{i}" for i in range(n)]


def complete_graph(n: int, lengths: Sequence, q=0) -> PMGraph:
    """K_n，边长按顶点对的字典序 (v0v1, v0v2, ..., v{n-2}v{n-1}) 给出"""
    if n < 2:
        raise BadParameter(f"完全图至少需要 2 个顶点: n = {n}")
    expected = n * (n - 1) // 2
    if len(lengths) != expected:
        raise BadParameterCount(
            f"K_{n} 需要 {expected} 个边长，实际 {len(lengths)} 个")
    qs = list(q) if isinstance(q, (list, tuple)) else [q] * n
    if len(qs) != n:
        raise BadParameterCount(f"K_{n} 需要 {n} 个 q 值，实际 {len(qs)} 个")
    names = _names(n)
    edges = [(names[i], names[j], _positive(f"lengths[{k}]", lengths[k]))
             for k, (i, j) in enumerate(combinations(range(n), 2))]
    return build_graph(zip(names, qs), edges)


def ladder(n: int, a=1, b=1) -> PMGraph:
    """L_n(a,b): 2n 个顶点，n 根长 b 的横档，2(n-1) 条长 a 的侧边

    上侧 v0..v{n-1}，下侧 v{n}..v{2n-1}。
    """
    if n < 2:
        raise BadParameter(f"梯子图要求 n ≥ 2: n = {n}")
    a, b = _positive("a", a), _positive("b", b)
    names = _names(2 * n)
    edges = []
    for i in range(n):
        edges.append((names[i], names[n + i], b))
        if i + 1 < n:
            edges.append((names[i], names[i + 1], a))
            edges.append((names[n + i], names[n + i + 1], a))
    return build_graph(names, edges)


def bouquet(loop_lengths: Sequence, q: int = 0) -> PMGraph:
    """一个顶点带若干自环"""
    if not loop_lengths:
        raise BadParameter("bouquet 至少需要一个自环")
    if q < 0:
        raise BadParameter(f"q 必须非负: {q}")
    lengths = [_positive(f"loops[{i}]", x) for i, x in enumerate(loop_lengths)]
    return build_graph([("v0", q)], [("v0", "v0", x) for x in lengths])


def circle(length) -> PMGraph:
    return bouquet([length], 0)


def example3(a=1, b=1, c=1, d=1, e=1) -> PMGraph:
    """带自环、非零 q 和重边的示例图

    v0 (q=1) 与 v1 (q=3) 之间: 长 b 的边，以及经 v2 (q=0, 价 2) 的两段长 c 的路径；
    v0 上一个长 3a 的自环；悬挂边 v0–v3 (长 d) 与 v1–v4 (长 e)，叶子 q = 3。
    g = 2, ḡ = 12, ℓ = 3a + b + 2c + d + e。
    """
    a, b, c = _positive("a", a), _positive("b", b), _positive("c", c)
    d, e = _positive("d", d), _positive("e", e)
    vertices = [("v0", 1), ("v1", 3), ("v2", 0), ("v3", 3), ("v4", 3)]
    edges = [
        ("v0", "v1", b),
        ("v0", "v2", c),
        ("v2", "v1", c),
        ("v0", "v0", 3 * a),
        ("v0", "v3", d),
        ("v1", "v4", e),
    ]
    return build_graph(vertices, edges)


def from_spec(spec: FamilySpec) -> PMGraph:
    params = dict(spec.parameters)
    if spec.family == "complete":
        return complete_graph(params["n"], params["lengths"],
                              params.get("q", 0))
    if spec.family == "ladder":
        return ladder(params["n"], params.get("a", 1), params.get("b", 1))
    if spec.family == "bouquet":
        return bouquet(params["loops"], params.get("q", 0))
    if spec.family == "circle":
        return circle(params.get("length", 1))
    return example3(**{k: params[k] for k in "abcde" if k in params})


def family_label(spec: FamilySpec) -> Optional[str]:
    p = spec.parameters
    if spec.family == "ladder":
        return f"L_{p['n']}({p.get('a', 1)},{p.get('b', 1)})"
    if spec.family == "complete":
        return f"K_{p['n']}"
    return spec.family
