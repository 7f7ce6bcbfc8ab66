"""图文件格式 (JSON) 的解析与导出"""
import json
import logging
from decimal import Decimal
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, \
    ValidationError, field_validator

from app.core.exceptions import ParseError
from app.models.models import Edge, PMGraph, Vertex
from app.utils.rational import format_fraction, to_fraction

logger = logging.getLogger(__name__)


class VertexDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: str
    q: StrictInt = Field(default=0, ge=0)


class EdgeDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    id: Optional[str] = None
    u: str
    v: str
    length: Union[int, str, Decimal]

    @field_validator("length", mode="before")
    @classmethod
    def _reject_bool(cls, value):
        if isinstance(value, bool):
            raise ValueError("边长不能是布尔值")
        return value


class GraphDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: List[VertexDocument]
    edges: List[EdgeDocument]


def _location(loc) -> str:
    return ".".join(str(part) for part in loc)


def parse_graph(text: str) -> PMGraph:
    """把 JSON 文本解析为 PMGraph

    语法与字段类型错误抛 ParseError；边长非正、不连通等语义问题留给 validate。
    """
    try:
        data = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as e:
        raise ParseError(f"JSON 语法错误: {e.msg}", line=e.lineno) from e

    try:
        document = GraphDocument.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ParseError(f"图文件格式错误: {first['msg']}",
                         field=_location(first["loc"])) from e

    vertices = tuple(Vertex(id=v.id, q=v.q) for v in document.vertices)
    edges = []
    seen = set()
    for index, item in enumerate(document.edges):
        edge_id = item.id or f"e{index}"
        if edge_id in seen:
            raise ParseError(f"边 id 重复: {edge_id}", field=f"edges.{index}.id")
        seen.add(edge_id)
        try:
            length = to_fraction(item.length)
        except ValueError as e:
            raise ParseError(str(e), field=f"edges.{index}.length") from e
        edges.append(Edge(id=edge_id, u=item.u, v=item.v, length=length))

    logger.debug("图文件解析完成", extra={"vertices": len(vertices),
                                        "edges": len(edges)})
    return PMGraph(vertices=vertices, edges=tuple(edges))


def graph_to_document(graph: PMGraph) -> GraphDocument:
    return GraphDocument(
        vertices=[VertexDocument(id=v.id, q=v.q) for v in graph.vertices],
        edges=[EdgeDocument(id=e.id, u=e.u, v=e.v,
                            length=format_fraction(e.length))
               for e in graph.edges],
    )


def dump_graph(graph: PMGraph) -> str:
    return graph_to_document(graph).model_dump_json(indent=2)
