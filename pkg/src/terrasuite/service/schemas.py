"""Pydantic request/response models for the HTTP service."""

from __future__ import annotations

from typing import Optional

from pydantic import BaseModel, Field


class CatalogEntryOut(BaseModel):
    name: str
    obs_dim: int
    act_dim: int
    description: str


class CatalogOut(BaseModel):
    count: int
    envs: list[CatalogEntryOut]


class CreateSessionIn(BaseModel):
    env_name: str
    seed: Optional[int] = None


class SessionOut(BaseModel):
    session_id: str
    env_name: str
    obs_dim: int
    act_dim: int
    terrain_len: int


class SessionCountOut(BaseModel):
    open_sessions: int


class SeedIn(BaseModel):
    seed: int


class ObservationOut(BaseModel):
    observation: list[float]
    terrain_len: int


class StepIn(BaseModel):
    action: list[float] = Field(..., description="flat action vector")


class StepOut(BaseModel):
    observation: list[float]
    reward: float
    done: bool
    info: dict


class SpacesOut(BaseModel):
    action_min: list[float]
    action_max: list[float]
    observation_min: list[float]
    observation_max: list[float]


class HealthOut(BaseModel):
    status: str
    version: str


class ErrorDetail(BaseModel):
    code: str
    message: str
    suggestions: list[str] = []
