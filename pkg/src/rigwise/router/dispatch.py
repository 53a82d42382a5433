"""Provider dispatch with ordered failover."""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import dataclass, field

from ..errors import AllProvidersFailed
from .health import Failure, HealthTracker, Success
from .registry import GenerationSettings, RoutingDecision

DEFAULT_TIMEOUT_S = 30.0


class ProviderFailure(Exception):
    """Transport failure or timeout from a provider adapter."""


@dataclass(frozen=True)
class PromptRequest:
    prompt: str
    settings: GenerationSettings = field(default_factory=GenerationSettings)
    path_index: int = 0


@dataclass(frozen=True)
class ProviderResponse:
    text: str
    provider: str
    attempts: int
    latency_ms: float
    failed_providers: tuple = ()


def prompt_digest(prompt: str) -> str:
    return hashlib.sha256(prompt.encode("utf-8")).hexdigest()[:12]


class MockProvider:
    """Scripted provider keyed by (prompt digest, path index).

    Script: {digest or "default": [entry, ...]} where an entry is an answer
    string or {"error": reason}. The entry list is indexed by path_index
    (modulo length), so multi-path sampling gets scripted diversity.
    """

    def __init__(self, script: dict, name: str = "mock"):
        self.script = script
        self.name = name

    @classmethod
    def from_file(cls, path: str, name: str = "mock") -> "MockProvider":
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh), name=name)

    def complete(self, request: PromptRequest, timeout: float = DEFAULT_TIMEOUT_S) -> str:
        entries = self.script.get(prompt_digest(request.prompt))
        if entries is None:
            entries = self.script.get("default")
        if not entries:
            raise ProviderFailure(f"{self.name}: no scripted response")
        entry = entries[request.path_index % len(entries)]
        if isinstance(entry, dict):
            raise ProviderFailure(f"{self.name}: {entry.get('error', 'scripted failure')}")
        return str(entry)


class ScriptedProvider:
    """Fixed outcome sequence for tests: "FAIL" raises, anything else returns.

    After the sequence is exhausted the last outcome repeats.
    """

    def __init__(self, outcomes: list, name: str = "scripted"):
        if not outcomes:
            raise ValueError("outcomes must be non-empty")
        self.outcomes = list(outcomes)
        self.name = name
        self.calls = 0

    def complete(self, request: PromptRequest, timeout: float = DEFAULT_TIMEOUT_S) -> str:
        outcome = self.outcomes[min(self.calls, len(self.outcomes) - 1)]
        self.calls += 1
        if outcome == "FAIL":
            raise ProviderFailure(f"{self.name}: scripted failure")
        return str(outcome)


class HttpChatProvider:
    """Minimal JSON-over-HTTPS chat adapter (not used by the test suite).

    Reads the endpoint and API key from RIGWISE_<ID>_ENDPOINT and
    RIGWISE_<ID>_API_KEY; posts an OpenAI-style chat body.
    """

    def __init__(self, model_id: str, endpoint: str | None = None,
                 api_key: str | None = None):
        env = model_id.upper().replace("-", "_").replace(".", "_")
        self.model_id = model_id
        self.endpoint = endpoint or os.environ.get(f"RIGWISE_{env}_ENDPOINT", "")
        self.api_key = api_key or os.environ.get(f"RIGWISE_{env}_API_KEY", "")

    def complete(self, request: PromptRequest, timeout: float = DEFAULT_TIMEOUT_S) -> str:
        if not self.endpoint:
            raise ProviderFailure(f"{self.model_id}: no endpoint configured")
        import httpx

        body = {
            "model": self.model_id,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.settings.temperature,
            "top_p": request.settings.top_p,
        }
        headers = {"Authorization": f"Bearer {self.api_key}"} if self.api_key else {}
        try:
            resp = httpx.post(self.endpoint, json=body, headers=headers, timeout=timeout)
            resp.raise_for_status()
            return resp.json()["choices"][0]["message"]["content"]
        except Exception as exc:  # transport, timeout, schema
            raise ProviderFailure(f"{self.model_id}: {exc}") from exc


def dispatch_with_failover(decision: RoutingDecision, providers: dict,
                           request: PromptRequest,
                           timeout: float = DEFAULT_TIMEOUT_S,
                           tracker: HealthTracker | None = None) -> ProviderResponse:
    """Try the chosen provider, then each alternate in order.

    Failures are recorded against the tracker (when given); the response
    names the provider that answered and every provider that failed first.
    """
    causes: dict[str, str] = {}
    order = (decision.chosen,) + tuple(decision.alternates)
    for model_id in order:
        provider = providers.get(model_id)
        if provider is None:
            causes[model_id] = "no adapter configured"
            continue
        if tracker is not None:
            tracker.begin_request(model_id)
        start = time.perf_counter()
        try:
            text = provider.complete(request, timeout=timeout)
        except ProviderFailure as exc:
            causes[model_id] = str(exc)
            if tracker is not None:
                tracker.record(model_id, Failure(str(exc)))
            continue
        finally:
            if tracker is not None:
                tracker.end_request(model_id)
        latency_ms = (time.perf_counter() - start) * 1000.0
        if tracker is not None:
            tracker.record(model_id, Success(quality=1.0, latency_ms=latency_ms))
        return ProviderResponse(
            text=text,
            provider=model_id,
            attempts=len(causes) + 1,
            latency_ms=latency_ms,
            failed_providers=tuple(sorted(causes.items())),
        )
    raise AllProvidersFailed(causes)
