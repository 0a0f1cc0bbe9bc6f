"""Deterministic in-process model server for tests and demos.

Every response is a pure function of (rule_seed, request payload), so two
servers built with the same seed answer identically and any test can
recompute an expected value from the rules below.

Published rules, bit-exact:

* generate. A prompt starting with "echo: " completes to the remainder of
  the prompt. A prompt containing the scorecard directive marker
  ("Summary of Scores") completes to a well-formed scorecard transcript
  whose seven scores are ``hash(rule_seed, "judge", prompt, i) % 11``.
  Any other prompt completes to itself. Completions longer than
  max_new_tokens whitespace tokens are truncated to the first
  max_new_tokens tokens (joined with single spaces).
* logprobs. Tokens come from the same lowercase word tokenizer the
  metrics use. The first token has no conditional probability, so a text
  of n tokens yields n-1 values, one per position i = 1..n-1. Under the
  "hashed" rule each value is
  ``-(0.05 + 7.95 * ((hash(rule_seed, "lp", i, token_i) % 10**6) / 10**6))``
  which lies in [-8.0, -0.05]. Under the "uniform" rule every value is
  ``ln(1 / vocab_size)``.
* logits. One row per token, vocab_size columns;
  ``cell(r, c) = ((hash(rule_seed, "logit", r, c, token_r) % 2001) - 1000) / 250``
  which lies in [-4.0, 4.0].
* embeddings. Token t maps to a draw from
  ``numpy.random.default_rng(hash(rule_seed, "emb", t))`` of embedding_dim
  standard normals, L2-normalized.

``hash(...)`` is the first 8 bytes, big-endian, of the SHA-256 of the
arguments joined with ":".
"""

from __future__ import annotations

import asyncio
import hashlib
import math
import threading
import time
from typing import Optional

import numpy as np
import uvicorn
from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from ..errors import GatewayError
from ..metrics.lexical import tokenize

MOCK_MODEL_NAME = "note-forge-mock"
JUDGE_MARKER = "Summary of Scores"
ALL_CAPABILITIES = ("generate", "logprobs", "logits", "embeddings")

DEFAULT_VOCAB_SIZE = 50
DEFAULT_EMBEDDING_DIM = 32


def hash_int(*parts) -> int:
    joined = ":".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(joined.encode("utf-8")).digest()[:8], "big")


class GenerateRequest(BaseModel):
    prompt: str
    max_new_tokens: int = Field(default=256, ge=1)
    temperature: float = Field(default=0.0, ge=0.0)
    seed: Optional[int] = None


class TextRequest(BaseModel):
    text: str = Field(min_length=1)


class EmbeddingsRequest(BaseModel):
    tokens: list[str] = Field(min_length=1)


def _judge_scores(rule_seed: int, prompt: str, count: int) -> list[int]:
    return [hash_int(rule_seed, "judge", prompt, i) % 11 for i in range(count)]


def _judge_transcript(rule_seed: int, prompt: str) -> str:
    # imported lazily: judge owns the criterion list, and it imports nothing
    # from the gateway, so there is no cycle at runtime either way
    from ..judge import CRITERIA

    scores = _judge_scores(rule_seed, prompt, len(CRITERIA))
    lines = []
    for criterion, score in zip(CRITERIA, scores):
        lines.append(f"{criterion}: *{score}/10* Judged from the supplied record.")
    lines.append("")
    lines.append(f"{JUDGE_MARKER}: *{sum(scores)}/70*")
    return "\n".join(lines)


def _truncate(text: str, max_new_tokens: int) -> str:
    words = text.split()
    if len(words) <= max_new_tokens:
        return text
    return " ".join(words[:max_new_tokens])


def build_mock_app(rule_seed: int = 0,
                   vocab_size: int = DEFAULT_VOCAB_SIZE,
                   embedding_dim: int = DEFAULT_EMBEDDING_DIM,
                   logprob_rule: str = "hashed",
                   capabilities: tuple = ALL_CAPABILITIES,
                   delay: float = 0.0) -> FastAPI:
    if logprob_rule not in ("hashed", "uniform"):
        raise ValueError(f"unknown logprob rule: {logprob_rule!r}")

    app = FastAPI(title=MOCK_MODEL_NAME)
    stats = {"in_flight": 0, "max_in_flight": 0, "total_requests": 0}
    stats_lock = threading.Lock()

    @app.middleware("http")
    async def _concurrency_counter(request, call_next):
        counted = request.method == "POST" and request.url.path.startswith("/v1/")
        if counted:
            with stats_lock:
                stats["in_flight"] += 1
                stats["total_requests"] += 1
                stats["max_in_flight"] = max(stats["max_in_flight"],
                                             stats["in_flight"])
            if delay:
                await asyncio.sleep(delay)
        try:
            return await call_next(request)
        finally:
            if counted:
                with stats_lock:
                    stats["in_flight"] -= 1

    def _require(name: str):
        if name not in capabilities:
            raise HTTPException(status_code=404,
                                detail=f"capability {name!r} not enabled")

    @app.get("/v1/capabilities")
    def get_capabilities():
        return {
            "capabilities": list(capabilities),
            "vocab_size": vocab_size,
            "embedding_dim": embedding_dim,
            "model": MOCK_MODEL_NAME,
        }

    @app.get("/v1/stats")
    def get_stats():
        with stats_lock:
            return dict(stats)

    @app.post("/v1/generate")
    def generate(request: GenerateRequest):
        _require("generate")
        if JUDGE_MARKER in request.prompt:
            completion = _judge_transcript(rule_seed, request.prompt)
        elif request.prompt.startswith("echo: "):
            completion = request.prompt[len("echo: "):]
        else:
            completion = request.prompt
        return {"text": _truncate(completion, request.max_new_tokens),
                "model": MOCK_MODEL_NAME}

    @app.post("/v1/logprobs")
    def logprobs(request: TextRequest):
        _require("logprobs")
        tokens = tokenize(request.text)
        if logprob_rule == "uniform":
            values = [math.log(1.0 / vocab_size)] * max(len(tokens) - 1, 0)
        else:
            values = [
                -(0.05 + 7.95 * ((hash_int(rule_seed, "lp", i, tokens[i])
                                  % 10**6) / 10**6))
                for i in range(1, len(tokens))
            ]
        return {"logprobs": values, "tokens": tokens}

    @app.post("/v1/logits")
    def logits(request: TextRequest):
        _require("logits")
        tokens = tokenize(request.text)
        matrix = [
            [((hash_int(rule_seed, "logit", r, c, tokens[r]) % 2001) - 1000) / 250.0
             for c in range(vocab_size)]
            for r in range(len(tokens))
        ]
        return {"logits": matrix, "vocab_size": vocab_size}

    @app.post("/v1/embeddings")
    def embeddings(request: EmbeddingsRequest):
        _require("embeddings")
        vectors = []
        for token in request.tokens:
            rng = np.random.default_rng(hash_int(rule_seed, "emb", token))
            vector = rng.standard_normal(embedding_dim)
            norm = float(np.linalg.norm(vector))
            if norm == 0.0:
                vector[0] = 1.0
                norm = 1.0
            vectors.append((vector / norm).tolist())
        return {"vectors": vectors, "embedding_dim": embedding_dim}

    return app


class MockServer:
    """Runs the mock app on a uvicorn thread; port=0 picks a free port."""

    def __init__(self, port: int = 0, rule_seed: int = 0, **app_kwargs):
        self.app = build_mock_app(rule_seed=rule_seed, **app_kwargs)
        self.rule_seed = rule_seed
        self.port = None
        self._requested_port = port
        self._server = None
        self._thread = None

    @property
    def base_url(self) -> str:
        if self.port is None:
            raise GatewayError("mock server is not running")
        return f"http://127.0.0.1:{self.port}"

    def start(self) -> "MockServer":
        config = uvicorn.Config(self.app, host="127.0.0.1",
                                port=self._requested_port, log_level="warning")
        self._server = uvicorn.Server(config)
        self._thread = threading.Thread(target=self._run, daemon=True)
        self._thread.start()
        deadline = time.monotonic() + 10.0
        while time.monotonic() < deadline:
            if self._server.started:
                self.port = self._server.servers[0].sockets[0].getsockname()[1]
                return self
            if not self._thread.is_alive():
                break
            time.sleep(0.01)
        raise GatewayError(
            f"mock server failed to start on port {self._requested_port}")

    def _run(self):
        try:
            self._server.run()
        except SystemExit:
            pass

    def stop(self):
        if self._server is not None:
            self._server.should_exit = True
        if self._thread is not None:
            self._thread.join(timeout=10.0)
        self.port = None

    def __enter__(self) -> "MockServer":
        return self.start()

    def __exit__(self, *exc_info):
        self.stop()
