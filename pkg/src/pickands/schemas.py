"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field

from .bench import DEFAULT_ESTIMATORS, DEFAULT_REPLICATIONS, DEFAULT_STEP
from .models import DependenceModel, model_from_dict


class ModelSpec(BaseModel):
    """JSON form of a dependence model, as used in configs and requests."""

    family: Literal["symlog", "asymlog", "independence"]
    r: Optional[float] = None
    theta: float = 0.0
    phi: float = 0.0
    psi: float = 0.0
    p: int = 3

    def to_model(self) -> DependenceModel:
        return model_from_dict(self.model_dump())


class HealthResponse(BaseModel):
    status: str
    version: str


class SimulateRequest(BaseModel):
    model: ModelSpec
    n: int = Field(ge=1)
    seed: int = Field(ge=0)
    stream: int = Field(default=0, ge=0)


class SimulateResponse(BaseModel):
    csv: str
    model_tag: str
    n: int
    seed: int
    stream: int


class EstimateRequest(BaseModel):
    sample_csv: str
    estimators: list[str] = ["cfg", "ols"]
    step: float = DEFAULT_STEP
    grid_csv: Optional[str] = None
    shape_correct: bool = False


class EstimateResponse(BaseModel):
    csv: str


class AsymptoticsRequest(BaseModel):
    model: ModelSpec
    step: float = 0.1
    grid_csv: Optional[str] = None
    nodes: int = Field(default=512, ge=64)


class AsymptoticsResponse(BaseModel):
    csv: str


class BenchRequest(BaseModel):
    model: ModelSpec
    n: list[int]
    replications: int = Field(default=DEFAULT_REPLICATIONS, ge=1)
    seed: int = Field(ge=0)
    step: float = DEFAULT_STEP
    estimators: list[str] = list(DEFAULT_ESTIMATORS)
    shape_correct: bool = False


class BenchResponse(BaseModel):
    summary_csv: str
    plot_script: str
