"""把任意 pm-graph 约化为适当表示 (无自环、无重边)，并记录自环修正"""
import logging
from collections import defaultdict
from fractions import Fraction
from typing import Dict, List, Literal, Optional, Set, Tuple

from app.core.exceptions import GenusMismatch, InvalidGenus
from app.models.models import CorrectionLedger, Edge, InvariantSet, \
    PMGraph, Vertex
from app.services.arithmetic import Arithmetic, ExactArithmetic
from app.services.graph import genus, total_length

logger = logging.getLogger(__name__)

LoopStrategy = Literal["analytic", "subdivide"]


def _fresh_id(base: str, taken: Set[str]) -> str:
    candidate = base
    counter = 1
    while candidate in taken:
        candidate = f"{base}{counter}"
        counter += 1
    taken.add(candidate)
    return candidate


def eliminate_valence2(graph: PMGraph) -> PMGraph:
    """合并所有可消去顶点 (q = 0、价 2、两端通向两条不同边)

    两条边 (长度 a, b) 合并为一条长度 a + b 的边；图只剩一个顶点时停止，
    因此圆周至少保留一个顶点 (一个自环)。
    """
    vertices: List[Vertex] = list(graph.vertices)
    edges: List[Edge] = list(graph.edges)
    edge_ids = {e.id for e in edges}
    merged = 0

    while len(vertices) >= 2:
        ends: Dict[str, List[Edge]] = defaultdict(list)
        for e in edges:
            ends[e.u].append(e)
            ends[e.v].append(e)
        target = None
        for vertex in vertices:
            incident = ends[vertex.id]
            if (vertex.q == 0 and len(incident) == 2
                    and incident[0].id != incident[1].id):
                target = vertex
                break
        if target is None:
            break

        first, second = ends[target.id]
        x, y = first.other_end(target.id), second.other_end(target.id)
        edge_ids -= {first.id, second.id}
        joined = Edge(id=_fresh_id(f"{first.id}+{second.id}", edge_ids),
                      u=x, v=y, length=first.length + second.length)
        position = edges.index(first)
        edges = [e for e in edges if e.id not in (first.id, second.id)]
        edges.insert(min(position, len(edges)), joined)
        vertices = [v for v in vertices if v.id != target.id]
        merged += 1

    if merged:
        logger.debug("消去价 2 顶点", extra={"merged": merged})
    return PMGraph(vertices=tuple(vertices), edges=tuple(edges))


def subdivide_parallel_edges(graph: PMGraph,
                             ratio: Fraction = Fraction(1, 2)) -> PMGraph:
    """对每组 k ≥ 2 条重边，把其中 k - 1 条在 ratio 处一分为二

    新顶点 q = 0；总长度不变。自环不处理。
    """
    ratio = Fraction(ratio)
    if not 0 < ratio < 1:
        raise ValueError("分割比例必须在 (0, 1) 内")
    taken = set(graph.vertex_ids)
    vertices = list(graph.vertices)
    edges: List[Edge] = []
    edge_ids = {e.id for e in graph.edges}
    seen: Set[frozenset] = set()
    for e in graph.edges:
        key = frozenset((e.u, e.v))
        if e.is_loop or key not in seen:
            seen.add(key)
            edges.append(e)
            continue
        middle = _fresh_id(f"{e.id}~m", taken)
        vertices.append(Vertex(id=middle, q=0))
        edges.append(Edge(id=_fresh_id(f"{e.id}.1", edge_ids), u=e.u,
                          v=middle, length=e.length * ratio))
        edges.append(Edge(id=_fresh_id(f"{e.id}.2", edge_ids), u=middle,
                          v=e.v, length=e.length * (1 - ratio)))
    return PMGraph(vertices=tuple(vertices), edges=tuple(edges))


def subdivide_self_loops(graph: PMGraph) -> PMGraph:
    """另一种自环处理: 每个长度 L 的自环在环上加两个 q = 0 顶点，变成三条 L/3 的边"""
    taken = set(graph.vertex_ids)
    vertices = list(graph.vertices)
    edges: List[Edge] = []
    edge_ids = {e.id for e in graph.edges}
    for e in graph.edges:
        if not e.is_loop:
            edges.append(e)
            continue
        a = _fresh_id(f"{e.id}~a", taken)
        b = _fresh_id(f"{e.id}~b", taken)
        vertices.extend([Vertex(id=a, q=0), Vertex(id=b, q=0)])
        third = e.length / 3
        for index, (u, v) in enumerate(((e.u, a), (a, b), (b, e.v)), 1):
            edges.append(Edge(id=_fresh_id(f"{e.id}.{index}", edge_ids),
                              u=u, v=v, length=third))
    return PMGraph(vertices=tuple(vertices), edges=tuple(edges))


def strip_self_loops(graph: PMGraph) -> Tuple[PMGraph, CorrectionLedger]:
    """删除自环 (锚点价 ≥ 3)，每删一个锚点 q + 1；ḡ 不变

    只有一个顶点时为 bouquet: 图不变，只记录总环长。
    """
    gbar = genus(graph).gbar
    loops = graph.loops
    if not loops:
        return graph, CorrectionLedger(gbar=gbar)

    if len(graph.vertices) == 1:
        ledger = CorrectionLedger(loop_length_total=total_length(graph),
                                  bouquet_flag=True, gbar=gbar)
        return graph, ledger

    increments: Dict[str, int] = defaultdict(int)
    removed = Fraction(0)
    for e in loops:
        increments[e.u] += 1
        removed += e.length

    vertices = tuple(Vertex(id=v.id, q=v.q + increments.get(v.id, 0))
                     for v in graph.vertices)
    edges = tuple(e for e in graph.edges if not e.is_loop)
    logger.debug("删除自环", extra={"loops": len(loops),
                                    "anchors": len(increments)})
    ledger = CorrectionLedger(loop_length_total=removed,
                              q_increments=dict(increments), gbar=gbar)
    return PMGraph(vertices=vertices, edges=edges), ledger


def is_adequate(graph: PMGraph) -> bool:
    pairs = [frozenset((e.u, e.v)) for e in graph.edges]
    return (not graph.loops) and len(pairs) == len(set(pairs))


def reduce_to_adequate(graph: PMGraph,
                       loop_strategy: LoopStrategy = "analytic",
                       ratio: Fraction = Fraction(1, 2)
                       ) -> Tuple[PMGraph, CorrectionLedger]:
    """eliminate_valence2 -> 自环处理 -> subdivide_parallel_edges"""
    gbar = genus(graph).gbar
    current = eliminate_valence2(graph) if len(graph.vertices) >= 2 else graph

    if loop_strategy == "subdivide":
        current = subdivide_self_loops(current)
        ledger = CorrectionLedger(gbar=gbar)
    else:
        current, ledger = strip_self_loops(current)
        if ledger.bouquet_flag:
            return current, ledger

    current = subdivide_parallel_edges(current, ratio)
    logger.debug("约化完成", extra={"vertices": len(current.vertices),
                                   "edges": len(current.edges),
                                   "strategy": loop_strategy})
    return current, ledger


def bouquet_invariants(total_loop_length, gbar: int,
                       g: Optional[int] = None,
                       arithmetic: Optional[Arithmetic] = None) -> InvariantSet:
    """一个顶点带 e ≥ 1 个自环: τ = ℓ/12, θ = 0，其余为 ℓ 的闭式倍数"""
    if gbar < 1:
        raise InvalidGenus(f"ḡ = {gbar} < 1", gbar=gbar)
    ar = arithmetic or ExactArithmetic()
    length = ar.scalar(total_loop_length)
    return InvariantSet(
        length=length,
        g=gbar if g is None else g,
        gbar=gbar,
        tau=length / 12,
        theta=ar.scalar(0),
        phi=length * (gbar - 1) / (6 * gbar),
        z=length * (2 * gbar - 1) / (12 * gbar ** 2),
        lambda_inv=length * gbar / (8 * gbar + 4),
        epsilon=length * (gbar - 1) / (3 * gbar),
    )


def apply_corrections(core: InvariantSet, ledger: CorrectionLedger,
                      arithmetic: Optional[Arithmetic] = None) -> InvariantSet:
    """把删去的自环 (总长 L) 加回: τ += L/12，θ 不变，φ/Z/λ/ε 按闭式修正"""
    if ledger.is_empty:
        return core
    if ledger.gbar is not None and ledger.gbar != core.gbar:
        raise GenusMismatch(
            f"修正记录的 ḡ = {ledger.gbar} 与核心图的 ḡ = {core.gbar} 不一致")
    ar = arithmetic or ExactArithmetic()
    gbar = core.gbar
    loop = ar.scalar(ledger.loop_length_total)
    return InvariantSet(
        length=core.length + loop,
        g=core.g + ledger.removed_loops,
        gbar=gbar,
        tau=core.tau + loop / 12,
        theta=core.theta,
        phi=core.phi + loop * (gbar - 1) / (6 * gbar),
        z=core.z + loop * (2 * gbar - 1) / (12 * gbar ** 2),
        lambda_inv=core.lambda_inv + loop * gbar / (8 * gbar + 4),
        epsilon=core.epsilon + loop * (gbar - 1) / (3 * gbar),
    )
