"""Request and response models for the HTTP service.

Graphs travel as their text format; specs as a builtin name or the JSON
config mapping. Every response carries a meta block with the tool version,
the seed in play (when any), and the caps that shaped the computation, so a
report alone is enough to reproduce it. Responses never include timing.
"""

from __future__ import annotations

from typing import Optional, Union

from pydantic import BaseModel, Field

from ..oracle import DEFAULT_ENUM_CAP, DEFAULT_SUBSET_CAP

SpecField = Union[str, dict]


class Meta(BaseModel):
    version: str
    seed: Optional[int] = None
    caps: dict[str, Optional[int]] = Field(default_factory=dict)


class ErrorBody(BaseModel):
    kind: str  # "input" | "resource" | "internal"
    message: str


# -- solver ------------------------------------------------------------------


class SolveRequest(BaseModel):
    graph: str
    budget: Optional[int] = None


class SolveStatsModel(BaseModel):
    nodes: int
    propagations: int
    backtracks: int


class SolveResponse(BaseModel):
    status: str
    assignment: Optional[list[int]] = None
    stats: SolveStatsModel
    meta: Meta


# -- oracle ------------------------------------------------------------------


class OracleRequest(BaseModel):
    graph: str
    spec: SpecField = "one_pm"
    enum_cap: int = DEFAULT_ENUM_CAP
    jobs: int = 1


class NablaResponse(BaseModel):
    nabla: int
    optimal_edges: list[int]
    meta: Meta


class DeficiencyModel(BaseModel):
    holds: bool
    lhs: int
    rhs: int


class SideListsInt(BaseModel):
    x: list[list[int]]
    y: list[list[int]]


class SideListsStr(BaseModel):
    x: list[str]
    y: list[str]


class DecomposeResponse(BaseModel):
    nabla: int
    optimal_edges: list[int]
    degree_sets: SideListsInt
    partition: SideListsStr
    critical: bool
    d_component_count: int
    deficiency: DeficiencyModel
    meta: Meta


class CriticalResponse(BaseModel):
    critical: bool
    nabla: int
    meta: Meta


class AuditCheckModel(BaseModel):
    name: str
    passed: bool
    details: dict


class AuditResponse(BaseModel):
    passed: bool
    checks: list[AuditCheckModel]
    meta: Meta


class WitnessRequest(BaseModel):
    graph: str
    subset_cap: int = DEFAULT_SUBSET_CAP
    enum_cap: int = DEFAULT_ENUM_CAP
    jobs: int = 1


class WitnessComponentModel(BaseModel):
    x: list[int]
    y: list[int]


class WitnessModel(BaseModel):
    s: list[int]
    q: int
    critical_components: list[WitnessComponentModel]


class WitnessResponse(BaseModel):
    found: bool
    witness: Optional[WitnessModel] = None
    meta: Meta


class DichotomyResponse(BaseModel):
    branch: str
    meta: Meta


# -- generators ---------------------------------------------------------------


class GenRegularRequest(BaseModel):
    n: int
    k: int
    seed: int = 0


class GenCycleRequest(BaseModel):
    n: int


class GenThetaRequest(BaseModel):
    path_lengths: list[int]
    branch_side: str = "x"


class GenHFamilyRequest(BaseModel):
    max_x: int


class GraphResponse(BaseModel):
    graph: str
    meta: Meta


class GraphListResponse(BaseModel):
    graphs: list[str]
    count: int
    meta: Meta


# -- reduction ----------------------------------------------------------------


class ReducePackRequest(BaseModel):
    graph: str
    budget: Optional[int] = None


class CoverModel(BaseModel):
    edges: list[list[int]]
    triangles: list[list[int]]


class ReducePackResponse(BaseModel):
    status: str
    cover: Optional[CoverModel] = None
    cover_text: Optional[str] = None
    stats: SolveStatsModel
    meta: Meta


class ReduceOracleRequest(BaseModel):
    graph: str
    cap: int = 12


class ReduceOracleResponse(BaseModel):
    found: bool
    cover: Optional[CoverModel] = None
    cover_text: Optional[str] = None
    meta: Meta


# -- campaign -----------------------------------------------------------------


class VerifyTheoremRequest(BaseModel):
    count: int = 500
    seed: int = 0
    ks: list[int] = Field(default_factory=lambda: [3, 4, 5])
    x_range: tuple[int, int] = (4, 50)
    budget: Optional[int] = None
    oracle_max_x: int = 6
    enum_cap: int = 30
    jobs: int = 1


class VerifyTheoremResponse(BaseModel):
    count: int
    seed: int
    ks: list[int]
    x_range: list[int]
    oracle_checked: int
    failures: list[dict]
    all_passed: bool
    solver_totals: dict[str, int]
    meta: Meta


class HealthResponse(BaseModel):
    status: str
    version: str
