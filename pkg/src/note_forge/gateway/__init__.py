from .client import (
    ENV_KEY,
    ENV_URL,
    EndpointConfig,
    GatewayClient,
    GenerationParams,
)
from .mock import (
    ALL_CAPABILITIES,
    JUDGE_MARKER,
    MOCK_MODEL_NAME,
    MockServer,
    build_mock_app,
    hash_int,
)

__all__ = [
    "ALL_CAPABILITIES",
    "ENV_KEY",
    "ENV_URL",
    "EndpointConfig",
    "GatewayClient",
    "GenerationParams",
    "JUDGE_MARKER",
    "MOCK_MODEL_NAME",
    "MockServer",
    "build_mock_app",
    "hash_int",
]
