"""度量图的数据校验与组合量: 亏格、总长度、典范除子权重"""
import logging
from collections import defaultdict
from fractions import Fraction
from typing import Dict, Iterable, List, Set

import networkx as nx

from app.core.exceptions import DisconnectedGraph, DuplicateVertexId, \
    EmptyGraph, NonEffectiveCanonicalDivisor, NonpositiveEdgeLength, \
    UnknownVertex
from app.models.models import Edge, GenusData, PMGraph, ValidationOutcome, \
    Vertex, Violation

logger = logging.getLogger(__name__)


def build_graph(vertices: Iterable, edges: Iterable) -> PMGraph:
    """由 (id, q) 和 (u, v, length) 三元组构造 PMGraph，边编号为 e0, e1, ..."""
    vs = []
    for item in vertices:
        if isinstance(item, Vertex):
            vs.append(item)
        elif isinstance(item, str):
            vs.append(Vertex(id=item))
        else:
            vid, q = item
            vs.append(Vertex(id=vid, q=q))
    es = []
    for index, item in enumerate(edges):
        if isinstance(item, Edge):
            es.append(item)
        else:
            u, v, length = item
            es.append(Edge(id=f"e{index}", u=u, v=v, length=length))
    return PMGraph(vertices=tuple(vs), edges=tuple(es))


def valences(graph: PMGraph) -> Dict[str, int]:
    """每个顶点的价 (自环计 2，即从 p 出发的方向数)"""
    result = {vid: 0 for vid in graph.vertex_ids}
    for e in graph.edges:
        if e.u in result:
            result[e.u] += 1
        if e.v in result:
            result[e.v] += 1
    return result


def incidence(graph: PMGraph) -> Dict[str, List[Edge]]:
    """顶点 -> 关联边 (自环出现两次)"""
    result: Dict[str, List[Edge]] = defaultdict(list)
    for e in graph.edges:
        result[e.u].append(e)
        result[e.v].append(e)
    return result


def to_networkx(graph: PMGraph) -> nx.MultiGraph:
    g = nx.MultiGraph()
    g.add_nodes_from(graph.vertex_ids)
    for e in graph.edges:
        g.add_edge(e.u, e.v, key=e.id, length=e.length)
    return g


def is_connected(graph: PMGraph) -> bool:
    if not graph.vertices:
        return False
    return nx.is_connected(to_networkx(graph))


def validate(graph: PMGraph, require_effective: bool = False) -> ValidationOutcome:
    """检查连通性、边长为正，以及 (可选) 典范除子 K 是否有效

    返回全部违规项，不抛异常；见 raise_for_violations。
    """
    violations: List[Violation] = []

    seen: Set[str] = set()
    for v in graph.vertices:
        if v.id in seen:
            violations.append(Violation(kind="duplicate_vertex", subject=v.id,
                                        detail="顶点 id 重复"))
        seen.add(v.id)

    if not graph.vertices or not graph.edges:
        violations.append(Violation(kind="empty", subject="graph",
                                    detail="图至少需要一个顶点和一条边"))

    endpoints_ok = True
    for e in graph.edges:
        for end in (e.u, e.v):
            if end not in seen:
                endpoints_ok = False
                violations.append(Violation(kind="unknown_vertex", subject=e.id,
                                            detail=f"端点 {end} 不存在"))
        if e.length <= 0:
            violations.append(Violation(kind="nonpositive_length", subject=e.id,
                                        detail=f"边长 {e.length} 不为正"))

    if graph.vertices and endpoints_ok and not is_connected(graph):
        components = list(nx.connected_components(to_networkx(graph)))
        for comp in components[1:]:
            violations.append(Violation(kind="disconnected",
                                        subject=sorted(comp)[0],
                                        detail=f"{len(components)} 个连通分支"))

    if require_effective and endpoints_ok:
        for vid, weight in canonical_weights(graph).items():
            if weight < 0:
                violations.append(Violation(
                    kind="non_effective", subject=vid,
                    detail=f"val(p) - 2 + 2q(p) = {weight}"))

    if violations:
        logger.info("图校验未通过", extra={"violations": len(violations)})
    return ValidationOutcome(violations=violations)


_VIOLATION_ERRORS = {
    "duplicate_vertex": DuplicateVertexId,
    "empty": EmptyGraph,
    "unknown_vertex": UnknownVertex,
    "nonpositive_length": NonpositiveEdgeLength,
    "disconnected": DisconnectedGraph,
    "non_effective": NonEffectiveCanonicalDivisor,
}


def raise_for_violations(outcome: ValidationOutcome) -> None:
    """按优先级把第一类违规转换为对应异常"""
    for kind, error in _VIOLATION_ERRORS.items():
        found = outcome.of_kind(kind)
        if found:
            subjects = ", ".join(v.subject for v in found)
            raise error(f"{found[0].detail}: {subjects}",
                        subjects=[v.subject for v in found])


def ensure_valid(graph: PMGraph, require_effective: bool = False) -> None:
    raise_for_violations(validate(graph, require_effective))


def genus(graph: PMGraph) -> GenusData:
    """g = e - v + 1, ḡ = g + Σ q(p), deg K = 2ḡ - 2"""
    g = len(graph.edges) - len(graph.vertices) + 1
    gbar = g + sum(v.q for v in graph.vertices)
    return GenusData(g=g, gbar=gbar, deg_k=2 * gbar - 2)


def total_length(graph: PMGraph) -> Fraction:
    return sum((e.length for e in graph.edges), Fraction(0))


def canonical_weights(graph: PMGraph) -> Dict[str, int]:
    vals = valences(graph)
    return {v.id: vals[v.id] - 2 + 2 * v.q for v in graph.vertices}


def canonical_weight(graph: PMGraph, p: str) -> int:
    """K 在 p 处的系数 val(p) - 2 + 2q(p)"""
    vertex = graph.vertex(p)
    if vertex is None:
        raise UnknownVertex(f"顶点 {p} 不存在", vertex=p)
    return valences(graph)[p] - 2 + 2 * vertex.q
