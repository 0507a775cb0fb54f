from .app import create_app
from .schemas import FilePayload, HealthResponse, ScenarioRequest, ScenarioResponse

__all__ = [
    "create_app",
    "ScenarioRequest",
    "ScenarioResponse",
    "FilePayload",
    "HealthResponse",
]
