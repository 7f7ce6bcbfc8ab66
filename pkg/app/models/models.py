from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator, \
    model_validator

from app.utils.rational import to_fraction

# 标量: Fraction (exact), mpmath.mpf (bigfloat) 或 float (machine)
Scalar = Any


class ModeKind(str, Enum):
    EXACT = "exact"
    BIGFLOAT = "bigfloat"
    MACHINE = "machine"


class ScalarMode(BaseModel):
    """算术模式: 精确有理数 / 可配置精度浮点 / 机器浮点"""
    model_config = ConfigDict(frozen=True)

    kind: ModeKind = ModeKind.EXACT
    digits: Optional[int] = None

    @model_validator(mode="after")
    def _check_digits(self):
        if self.kind == ModeKind.BIGFLOAT:
            if self.digits is None or self.digits < 18:
                raise ValueError("bigfloat 模式要求 digits >= 18")
        return self

    @classmethod
    def exact(cls) -> "ScalarMode":
        return cls(kind=ModeKind.EXACT)

    @classmethod
    def bigfloat(cls, digits: int = 30) -> "ScalarMode":
        return cls(kind=ModeKind.BIGFLOAT, digits=digits)

    @classmethod
    def machine(cls) -> "ScalarMode":
        return cls(kind=ModeKind.MACHINE)

    @property
    def is_exact(self) -> bool:
        return self.kind == ModeKind.EXACT


# 顶点 (带极化值 q)
class Vertex(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str
    q: int = Field(default=0, ge=0)


# 边: u == v 为自环，重复的 (u, v) 为重边
class Edge(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: str
    u: str
    v: str
    length: Fraction

    @field_validator("length", mode="before")
    @classmethod
    def _coerce_length(cls, value):
        return to_fraction(value)

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other_end(self, vertex_id: str) -> str:
        return self.v if vertex_id == self.u else self.u


class PMGraph(BaseModel):
    """极化度量图 (Γ, q)，构造后不可变

    顶点顺序即输入顺序，矩阵的行列顺序与之一致。
    """
    model_config = ConfigDict(frozen=True)

    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...]

    @property
    def vertex_ids(self) -> List[str]:
        return [v.id for v in self.vertices]

    @property
    def polarization(self) -> Dict[str, int]:
        return {v.id: v.q for v in self.vertices}

    @property
    def loops(self) -> List[Edge]:
        return [e for e in self.edges if e.is_loop]

    def vertex(self, vertex_id: str) -> Optional[Vertex]:
        for v in self.vertices:
            if v.id == vertex_id:
                return v
        return None


class GenusData(BaseModel):
    model_config = ConfigDict(frozen=True)

    g: int
    gbar: int
    deg_k: int


# 约化过程中记录的自环修正
class CorrectionLedger(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    loop_length_total: Fraction = Fraction(0)
    q_increments: Dict[str, int] = Field(default_factory=dict)
    bouquet_flag: bool = False
    gbar: Optional[int] = None

    @property
    def removed_loops(self) -> int:
        return sum(self.q_increments.values())

    @property
    def is_empty(self) -> bool:
        return not self.q_increments and not self.bouquet_flag


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: Literal["disconnected", "nonpositive_length", "non_effective",
                  "duplicate_vertex", "unknown_vertex", "empty"]
    subject: str
    detail: str = ""


class ValidationOutcome(BaseModel):
    violations: List[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def of_kind(self, kind: str) -> List[Violation]:
        return [v for v in self.violations if v.kind == kind]


class InvariantSet(BaseModel):
    """一个 pm-graph 的全部不变量"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    length: Scalar
    g: int
    gbar: int
    tau: Scalar
    theta: Scalar
    epsilon: Scalar
    phi: Scalar
    lambda_inv: Scalar
    z: Scalar

    def scalar_fields(self) -> Dict[str, Scalar]:
        return {
            "length": self.length,
            "tau": self.tau,
            "theta": self.theta,
            "phi": self.phi,
            "lambda": self.lambda_inv,
            "epsilon": self.epsilon,
            "z": self.z,
        }


class MeasureReport(BaseModel):
    """μ_can 或 μ_ad 的分解: 顶点点质量 + 每条边上 dx 的常数密度系数"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    which: Literal["canonical", "admissible"]
    point_masses: Dict[str, Scalar]
    edge_densities: Dict[str, Scalar]
    edge_lengths: Dict[str, Scalar]

    def total_mass(self) -> Scalar:
        total = sum(self.point_masses.values())
        for edge_id, density in self.edge_densities.items():
            total = total + density * self.edge_lengths[edge_id]
        return total


class FamilySpec(BaseModel):
    family: Literal["complete", "ladder", "bouquet", "circle", "example3"]
    parameters: Dict[str, Any] = Field(default_factory=dict)


class ComputationResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    invariants: InvariantSet
    core: Optional[PMGraph] = None
    ledger: CorrectionLedger = Field(default_factory=CorrectionLedger)
    canonical: Optional[MeasureReport] = None
    admissible: Optional[MeasureReport] = None
