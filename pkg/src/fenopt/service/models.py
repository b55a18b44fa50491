"""Pydantic request/response models for the service API."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class HealthResponse(BaseModel):
    status: str = "ok"
    version: str


class CatalogRequest(BaseModel):
    catalog_path: Optional[str] = None   # None -> bundled catalog
    orientation: Literal["N", "E", "SE", "S", "SW", "W"] = "S"


class CompositionRow(BaseModel):
    code: str
    u_g: float
    shgc: float
    vt: float


class CatalogResponse(BaseModel):
    orientation: str
    count: int
    compositions: list[CompositionRow]


class InspectRequest(BaseModel):
    solution: dict


class InspectResponse(BaseModel):
    report: str
    solution: dict


class CampaignRequest(BaseModel):
    config: dict
    wait: bool = True


class CampaignJob(BaseModel):
    job_id: str
    status: Literal["queued", "running", "done", "failed"]
    completed_runs: int = 0
    total_runs: int = 0
    error: Optional[str] = None
    manifest: Optional[dict] = None


class CompareRequest(BaseModel):
    dirs_a: list[str]
    dirs_b: list[str]
    alpha: float = 0.01


class CompareResponse(BaseModel):
    report: dict
    summary: str


class BenchRequest(BaseModel):
    function: Literal["sphere", "rastrigin"] = "sphere"
    dim: int = Field(default=20, ge=1, le=200)
    budget: int = Field(default=20000, ge=10)
    runs: int = Field(default=15, ge=1, le=100)
    base_seed: int = 1
    algorithms: list[str] = ["hybrid", "ga"]


class BenchResponse(BaseModel):
    report: dict
