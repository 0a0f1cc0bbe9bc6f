"""HTTP client for the model gateway routes.

The client never logs request or response bodies unless log_payloads is
set; default logging carries only the route, latency, and request id.
"""

from __future__ import annotations

import logging
import os
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional, Sequence

import httpx
import numpy as np

from ..errors import CapabilityError, GatewayError, ValidationError

logger = logging.getLogger(__name__)

ENV_URL = "NOTE_GATEWAY_URL"
ENV_KEY = "NOTE_GATEWAY_KEY"

MAX_ATTEMPTS = 3


@dataclass(frozen=True)
class EndpointConfig:
    base_url: str
    api_key: str = ""
    model_name: str = "default"
    timeout: float = 30.0
    max_parallel: int = 4

    def __post_init__(self):
        if not self.base_url:
            raise ValidationError("base_url is required")
        if self.timeout <= 0:
            raise ValidationError(f"timeout must be positive, got {self.timeout}")
        if self.max_parallel < 1:
            raise ValidationError(
                f"max_parallel must be at least 1, got {self.max_parallel}")

    @classmethod
    def from_env(cls, **overrides) -> "EndpointConfig":
        url = overrides.pop("base_url", None) or os.environ.get(ENV_URL)
        if not url:
            raise ValidationError(f"no gateway URL: set {ENV_URL} or pass base_url")
        key = overrides.pop("api_key", None)
        if key is None:
            key = os.environ.get(ENV_KEY, "")
        return cls(base_url=url, api_key=key, **overrides)


@dataclass(frozen=True)
class GenerationParams:
    max_new_tokens: int = 256
    temperature: float = 0.0
    seed: Optional[int] = None

    def __post_init__(self):
        if self.max_new_tokens < 1:
            raise ValidationError(
                f"max_new_tokens must be at least 1, got {self.max_new_tokens}")
        if self.temperature < 0:
            raise ValidationError(
                f"temperature must be non-negative, got {self.temperature}")


class GatewayClient:
    """Thread-safe client; at most config.max_parallel requests in flight."""

    def __init__(self, config: EndpointConfig | None = None, *,
                 log_payloads: bool = False, retry_backoff: float = 0.5,
                 transport: httpx.BaseTransport | None = None):
        self.config = config or EndpointConfig.from_env()
        headers = {}
        if self.config.api_key:
            headers["Authorization"] = f"Bearer {self.config.api_key}"
        self._http = httpx.Client(base_url=self.config.base_url,
                                  timeout=self.config.timeout,
                                  headers=headers, transport=transport)
        self._semaphore = threading.BoundedSemaphore(self.config.max_parallel)
        self._log_payloads = log_payloads
        self._retry_backoff = retry_backoff
        self._capabilities = None
        self._capabilities_lock = threading.Lock()

    # -- plumbing ------------------------------------------------------------

    def _request(self, method: str, route: str, payload: dict | None = None) -> dict:
        request_id = str(uuid.uuid4())
        headers = {"X-Request-Id": request_id}
        if self._log_payloads and payload is not None:
            logger.debug("%s payload: %r", route, payload)
        last_error = None
        with self._semaphore:
            started = time.monotonic()
            for attempt in range(MAX_ATTEMPTS):
                if attempt:
                    time.sleep(self._retry_backoff * (2 ** (attempt - 1)))
                try:
                    response = self._http.request(method, route, json=payload,
                                                  headers=headers)
                except httpx.TransportError as exc:
                    # transport failures are safe to retry: the request id
                    # lets the server deduplicate if it ever got through
                    last_error = exc
                    continue
                if response.status_code >= 400:
                    raise GatewayError(
                        f"{route} returned HTTP {response.status_code}",
                        endpoint=self.config.base_url + route,
                        status=response.status_code)
                elapsed_ms = (time.monotonic() - started) * 1000.0
                logger.info("%s completed in %.1f ms [request %s]",
                            route, elapsed_ms, request_id)
                return response.json()
        raise GatewayError(
            f"could not reach {self.config.base_url + route} "
            f"after {MAX_ATTEMPTS} attempts: {last_error}",
            endpoint=self.config.base_url + route)

    def capabilities(self) -> dict:
        with self._capabilities_lock:
            if self._capabilities is None:
                self._capabilities = self._request("GET", "/v1/capabilities")
            return self._capabilities

    def _require(self, name: str):
        # checked before any payload leaves the process
        advertised = self.capabilities().get("capabilities", [])
        if name not in advertised:
            raise CapabilityError(
                f"endpoint does not support {name!r} (advertised: {advertised})",
                endpoint=self.config.base_url)

    # -- the four model operations -------------------------------------------

    def generate(self, prompt: str, params: GenerationParams | None = None) -> str:
        self._require("generate")
        params = params or GenerationParams()
        body = self._request("POST", "/v1/generate", {
            "prompt": prompt,
            "max_new_tokens": params.max_new_tokens,
            "temperature": params.temperature,
            "seed": params.seed,
        })
        if "text" not in body:
            raise GatewayError("malformed generate response: no text field",
                               endpoint=self.config.base_url)
        return body["text"]

    def logprobs(self, text: str) -> list:
        if not text:
            raise ValidationError("text must be non-empty")
        self._require("logprobs")
        body = self._request("POST", "/v1/logprobs", {"text": text})
        return [float(v) for v in body.get("logprobs", [])]

    def logits(self, text: str) -> np.ndarray:
        if not text:
            raise ValidationError("text must be non-empty")
        self._require("logits")
        body = self._request("POST", "/v1/logits", {"text": text})
        matrix = np.asarray(body.get("logits", []), dtype=np.float64)
        if matrix.size and matrix.ndim != 2:
            raise GatewayError("malformed logits response: not a matrix",
                               endpoint=self.config.base_url)
        if matrix.size == 0:
            matrix = matrix.reshape(0, int(body.get("vocab_size", 0)))
        return matrix

    def embed(self, tokens: Sequence[str]) -> np.ndarray:
        if not tokens:
            raise ValidationError("tokens must be non-empty")
        self._require("embeddings")
        body = self._request("POST", "/v1/embeddings", {"tokens": list(tokens)})
        return np.asarray(body.get("vectors", []), dtype=np.float64)

    # -- lifecycle -----------------------------------------------------------

    def close(self):
        self._http.close()

    def __enter__(self) -> "GatewayClient":
        return self

    def __exit__(self, *exc_info):
        self.close()
