"""Provider health state: failure arming, quality/latency EWMAs."""

from __future__ import annotations

import threading
from dataclasses import dataclass, replace

EWMA_ALPHA = 0.2
FAILURE_THRESHOLD = 3


@dataclass(frozen=True)
class ProviderHealth:
    available: bool = True
    consecutive_failures: int = 0
    outstanding_requests: int = 0
    quality_ewma: float = 1.0
    latency_ewma: float = 0.0


@dataclass(frozen=True)
class Success:
    quality: float
    latency_ms: float

    def __post_init__(self):
        if not (0.0 <= self.quality <= 1.0):
            raise ValueError("quality must be in [0, 1]")


@dataclass(frozen=True)
class Failure:
    cause: str = ""


def update_health(health: ProviderHealth, outcome,
                  alpha: float = EWMA_ALPHA,
                  failure_threshold: int = FAILURE_THRESHOLD) -> ProviderHealth:
    """Success resets the failure run and updates EWMAs; failure arms the
    availability flag once the run reaches the threshold."""
    if isinstance(outcome, Success):
        failures = 0
        quality = (1 - alpha) * health.quality_ewma + alpha * outcome.quality
        latency = (1 - alpha) * health.latency_ewma + alpha * outcome.latency_ms
    elif isinstance(outcome, Failure):
        failures = health.consecutive_failures + 1
        quality = health.quality_ewma
        latency = health.latency_ewma
    else:
        raise TypeError(f"outcome must be Success or Failure, got {type(outcome)}")
    return replace(
        health,
        consecutive_failures=failures,
        quality_ewma=quality,
        latency_ewma=latency,
        available=failures < failure_threshold,
    )


class HealthTracker:
    """Shared mutable health map updated via atomic read-modify-write."""

    def __init__(self, model_ids=(), alpha: float = EWMA_ALPHA,
                 failure_threshold: int = FAILURE_THRESHOLD):
        self._lock = threading.Lock()
        self._alpha = alpha
        self._threshold = failure_threshold
        self._state: dict[str, ProviderHealth] = {
            m: ProviderHealth() for m in model_ids
        }

    def get(self, model_id: str) -> ProviderHealth:
        with self._lock:
            return self._state.setdefault(model_id, ProviderHealth())

    def snapshot(self) -> dict[str, ProviderHealth]:
        with self._lock:
            return dict(self._state)

    def record(self, model_id: str, outcome) -> ProviderHealth:
        with self._lock:
            current = self._state.setdefault(model_id, ProviderHealth())
            updated = update_health(current, outcome, self._alpha, self._threshold)
            self._state[model_id] = updated
            return updated

    def begin_request(self, model_id: str) -> None:
        with self._lock:
            current = self._state.setdefault(model_id, ProviderHealth())
            self._state[model_id] = replace(
                current, outstanding_requests=current.outstanding_requests + 1)

    def end_request(self, model_id: str) -> None:
        with self._lock:
            current = self._state.setdefault(model_id, ProviderHealth())
            self._state[model_id] = replace(
                current, outstanding_requests=max(0, current.outstanding_requests - 1))
