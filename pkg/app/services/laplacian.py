"""离散拉普拉斯矩阵、Moore-Penrose 伪逆与有效电阻"""
import logging
import warnings
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from app.core.exceptions import NotAdequate, PrecisionLoss, \
    PrecisionLossWarning, UnknownEdge, UnknownVertex
from app.models.models import Edge, ModeKind, PMGraph, Scalar
from app.services.arithmetic import Arithmetic, ExactArithmetic

logger = logging.getLogger(__name__)

Variant = Literal["minus", "plus", "spd"]


@dataclass(frozen=True, eq=False)
class LaplacianSystem:
    """顶点顺序、L、L⁺ 以及底层的适当图"""
    graph: PMGraph
    ordering: List[str]
    laplacian: Any
    arithmetic: Arithmetic
    pseudo_inverse: Optional[Any] = None
    index: Dict[str, int] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.ordering)

    def position(self, vertex_id: str) -> int:
        try:
            return self.index[vertex_id]
        except KeyError:
            raise UnknownVertex(f"顶点 {vertex_id} 不在拉普拉斯系统中",
                                vertex=vertex_id) from None

    def pinv(self):
        if self.pseudo_inverse is None:
            raise ValueError("尚未计算伪逆")
        return self.pseudo_inverse


def check_adequate(graph: PMGraph) -> None:
    """适当顶点集: 无自环、无重边"""
    seen = set()
    for e in graph.edges:
        if e.is_loop:
            raise NotAdequate(f"边 {e.id} 是自环", edge=e.id)
        key = frozenset((e.u, e.v))
        if key in seen:
            raise NotAdequate(f"边 {e.id} 与另一条边平行", edge=e.id)
        seen.add(key)


def build_laplacian(graph: PMGraph,
                    arithmetic: Optional[Arithmetic] = None) -> LaplacianSystem:
    """L = D - A，非对角元 -1/L_k，对角元为该行非对角元之和的相反数"""
    arithmetic = arithmetic or ExactArithmetic()
    check_adequate(graph)
    ordering = graph.vertex_ids
    if len(ordering) < 2:
        raise NotAdequate("拉普拉斯矩阵至少需要两个顶点")
    index = {vid: i for i, vid in enumerate(ordering)}

    entries: Dict[tuple, Fraction] = {}
    for e in graph.edges:
        i, j = index[e.u], index[e.v]
        conductance = 1 / e.length
        entries[(i, j)] = -conductance
        entries[(j, i)] = -conductance
        entries[(i, i)] = entries.get((i, i), Fraction(0)) + conductance
        entries[(j, j)] = entries.get((j, j), Fraction(0)) + conductance

    matrix = arithmetic.assemble(len(ordering), entries)
    logger.debug("拉普拉斯矩阵装配完成",
                 extra={"vertices": len(ordering), "edges": len(graph.edges),
                        "mode": arithmetic.mode.kind.value})
    return LaplacianSystem(graph=graph, ordering=ordering, laplacian=matrix,
                           arithmetic=arithmetic, index=index)


def pseudo_inverse(laplacian, arithmetic: Optional[Arithmetic] = None,
                   variant: Variant = "minus"):
    """L⁺ = (L - J/v)⁻¹ + J/v

    plus 变体: (L + J/v)⁻¹ - J/v，矩阵对称正定；spd 变体在机器浮点下
    用 Cholesky 求这个正定矩阵的逆，其他模式退回 plus。
    """
    arithmetic = arithmetic or ExactArithmetic()
    v = arithmetic.size(laplacian)
    j_over_v = Fraction(1, v)
    if variant == "minus":
        shifted = arithmetic.add_constant(laplacian, -j_over_v)
        return arithmetic.add_constant(arithmetic.inverse(shifted), j_over_v)

    shifted = arithmetic.add_constant(laplacian, j_over_v)
    if variant == "spd" and arithmetic.mode.kind == ModeKind.MACHINE:
        inverse = arithmetic.spd_inverse(shifted)
    else:
        if variant == "spd":
            logger.debug("spd 变体仅用于机器浮点，改用 plus 变体")
        inverse = arithmetic.inverse(shifted)
    return arithmetic.add_constant(inverse, -j_over_v)


def with_pseudo_inverse(system: LaplacianSystem,
                        variant: Variant = "minus") -> LaplacianSystem:
    pinv = pseudo_inverse(system.laplacian, system.arithmetic, variant)
    return replace(system, pseudo_inverse=pinv)


def solve_system(graph: PMGraph, arithmetic: Optional[Arithmetic] = None,
                 variant: Variant = "minus") -> LaplacianSystem:
    return with_pseudo_inverse(build_laplacian(graph, arithmetic), variant)


def penrose_residuals(system: LaplacianSystem) -> Dict[str, Scalar]:
    """四个 Penrose 条件与行和为零的最大范数残差"""
    ar = system.arithmetic
    lap, pinv = system.laplacian, system.pinv()
    lp = ar.matmul(lap, pinv)
    pl = ar.matmul(pinv, lap)
    residuals = {
        "lpl": ar.max_abs(ar.subtract(ar.matmul(lp, lap), lap)),
        "plp": ar.max_abs(ar.subtract(ar.matmul(pl, pinv), pinv)),
        "lp_symmetric": ar.max_abs(ar.subtract(lp, ar.transpose(lp))),
        "pl_symmetric": ar.max_abs(ar.subtract(pl, ar.transpose(pl))),
        "centering": max(abs(x) for x in ar.row_sums(pinv)),
    }
    return residuals


def check_precision(system: LaplacianSystem, tolerance: float,
                    strict: bool = False) -> Dict[str, Scalar]:
    """浮点模式下检查伪逆残差；超出容差时告警，strict 时抛 PrecisionLoss

    容差按矩阵尺度放大: tolerance * max(1, |L|·|L⁺|) * max(1, v/100)。
    """
    ar = system.arithmetic
    residuals = penrose_residuals(system)
    scale = max(1.0, ar.to_float(ar.max_abs(system.laplacian))
                * ar.to_float(ar.max_abs(system.pinv())))
    limit = tolerance * scale * max(1.0, system.size / 100)
    worst = max(ar.to_float(r) for r in residuals.values())
    if worst > limit:
        message = f"伪逆残差 {worst:.3e} 超过容差 {limit:.3e}"
        logger.warning(message, extra={"residual": worst, "limit": limit,
                                       "vertices": system.size})
        if strict:
            raise PrecisionLoss(message, residual=worst, limit=limit)
        warnings.warn(message, PrecisionLossWarning, stacklevel=2)
    return residuals


def resistance(system: LaplacianSystem, p: str, q: str) -> Scalar:
    """r(p,q) = l⁺_pp - 2 l⁺_pq + l⁺_qq"""
    i, j = system.position(p), system.position(q)
    if i == j:
        return system.arithmetic.scalar(0)
    ar, pinv = system.arithmetic, system.pinv()
    return ar.get(pinv, i, i) - 2 * ar.get(pinv, i, j) + ar.get(pinv, j, j)


def resistance_matrix(system: LaplacianSystem) -> List[List[Scalar]]:
    return system.arithmetic.resistance_rows(system.pinv())


def kirchhoff_index(system: LaplacianSystem) -> Scalar:
    """Σ_{p<q} r(p,q) = v · tr(L⁺)"""
    return system.size * system.arithmetic.trace(system.pinv())


def find_edge(system: LaplacianSystem, edge) -> Edge:
    """按边对象、边 id 或 (p, q) 端点对查找图中的边"""
    if isinstance(edge, Edge):
        key = edge.id
    elif isinstance(edge, str):
        key = edge
    else:
        key = None
    for e in system.graph.edges:
        if key is not None and e.id == key:
            return e
        if key is None and {e.u, e.v} == {edge[0], edge[1]}:
            return e
    raise UnknownEdge(f"边 {edge} 不在图中", edge=str(edge))


def resistance_complement(system: LaplacianSystem, edge) -> Optional[Scalar]:
    """删去边 e_i 内部后两端点间的电阻 R_i

    由 r = L_i R_i / (L_i + R_i) 反解 R_i = L_i r / (L_i - r)；
    桥 (r = L_i) 返回 None 表示无穷大。
    """
    e = find_edge(system, edge)
    ar = system.arithmetic
    length = ar.scalar(e.length)
    r = resistance(system, e.u, e.v)
    if ar.is_close(r, length):
        return None
    return length * r / (length - r)
