"""Deterministic provider selection.

Rule order:
  1. non-text attachments -> a model supporting them, largest modality set
  2. long queries (exceeding at least one available window) -> the smallest
     context window that fits
  3. complex_reasoning / code_generation -> highest reasoning score
  4. otherwise -> best reasoning score per cost
Ties fall through to fewest outstanding requests, then model id. The same
key ranks the alternates, so dropping the chosen model and re-routing yields
the former first alternate.
"""

from __future__ import annotations

import math

from ..errors import NoProviderAvailable, QueryTooLarge
from .health import ProviderHealth
from .registry import GenerationSettings, ModelSpec, QueryProfile, RoutingDecision

REASONING_TASKS = ("complex_reasoning", "code_generation")


def _sort_key(profile: QueryProfile, spec: ModelSpec, health: ProviderHealth,
              window_rule_active: bool):
    non_text = {m for m in profile.attachment_modalities if m != "text"}
    if non_text:
        modality_key = (0 if non_text <= spec.modalities else 1, -len(spec.modalities))
    else:
        modality_key = (0, 0)

    fits = profile.est_tokens <= spec.context_window
    window_key = (0 if fits else 1,
                  spec.context_window if window_rule_active else 0)

    if profile.task_class in REASONING_TASKS:
        quality_key = -spec.reasoning_score
    else:
        value = (spec.reasoning_score / spec.cost_per_mtok
                 if spec.cost_per_mtok > 0 else math.inf)
        quality_key = -value

    return (modality_key, window_key, quality_key,
            health.outstanding_requests, spec.model_id)


def route(profile: QueryProfile, registry: list[ModelSpec],
          health: dict[str, ProviderHealth] | None = None,
          settings: GenerationSettings | None = None) -> RoutingDecision:
    if not registry:
        raise NoProviderAvailable("registry is empty")
    health = health or {}
    available = [m for m in registry
                 if health.get(m.model_id, ProviderHealth()).available]
    if not available:
        raise NoProviderAvailable("no available provider")
    if all(profile.est_tokens > m.context_window for m in available):
        raise QueryTooLarge(
            f"{profile.est_tokens} tokens exceeds every available context window")

    # long-query trigger is judged against the whole registry so the ranking
    # is stable when providers drop out (re-route lands on the old alternate)
    window_rule_active = any(profile.est_tokens > m.context_window for m in registry)
    ranked = sorted(
        available,
        key=lambda m: _sort_key(profile, m,
                                health.get(m.model_id, ProviderHealth()),
                                window_rule_active),
    )

    non_text = {m for m in profile.attachment_modalities if m != "text"}
    if non_text:
        tag = "modality"
    elif window_rule_active:
        tag = "context_window"
    elif profile.task_class in REASONING_TASKS:
        tag = "reasoning"
    else:
        tag = "value"

    return RoutingDecision(
        chosen=ranked[0].model_id,
        alternates=tuple(m.model_id for m in ranked[1:]),
        rationale_tags=(tag,),
        settings=settings or GenerationSettings(),
    )
