from typing import Literal, Optional

from pydantic import BaseModel, Field

ObjectiveSense = Literal["min", "max"]
Assignment = dict[str, str]


class SolveReport(BaseModel):
    objective: ObjectiveSense
    order: list[str]
    optimum: float
    solution: Assignment
    optima: Optional[list[Assignment]] = None


class OracleReport(BaseModel):
    objective: ObjectiveSense
    optimum: float
    argopt: list[Assignment]
    joint_size: int = Field(..., ge=1)


class CheckReport(BaseModel):
    objective: ObjectiveSense
    solver_optimum: float
    oracle_optimum: float
    solution_value: float
    optima_compared: bool = False
    missing_optima: list[Assignment] = Field(default_factory=list)
    extra_optima: list[Assignment] = Field(default_factory=list)
    passed: bool


class TreeEdge(BaseModel):
    child: list[str]
    parent: list[str]
    eliminates: Optional[str] = None


class TreeReport(BaseModel):
    order: list[str]
    vertices: list[list[str]]
    edges: list[TreeEdge]
    max_frame_size: int
