"""Request/response models for the HTTP service.

Requests carry raw string parameters in the same `key = value` vocabulary as
config files and CLI flags; the server validates them with the shared
config schema so all three front doors agree on defaults and error text.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class ScenarioRequest(BaseModel):
    params: dict[str, str] = Field(default_factory=dict)


class FilePayload(BaseModel):
    relpath: str
    content: str


class ScenarioResponse(BaseModel):
    table: list[tuple[str, str]]
    files: list[FilePayload]

    def render_table(self) -> str:
        return "\n".join(f"{k} = {v}" for k, v in self.table) + "\n"


class HealthResponse(BaseModel):
    status: str
    version: str
