from .registry import (
    GenerationSettings,
    ModelSpec,
    QueryProfile,
    RoutingDecision,
    MODALITIES,
    TASK_CLASSES,
    load_registry,
    parse_registry,
)
from .classify import Lexicon, classify_query
from .routing import route
from .health import (
    ProviderHealth,
    Success,
    Failure,
    update_health,
    HealthTracker,
    EWMA_ALPHA,
    FAILURE_THRESHOLD,
)
from .dispatch import (
    PromptRequest,
    ProviderResponse,
    ProviderFailure,
    MockProvider,
    ScriptedProvider,
    HttpChatProvider,
    dispatch_with_failover,
    prompt_digest,
    DEFAULT_TIMEOUT_S,
)

__all__ = [
    "GenerationSettings", "ModelSpec", "QueryProfile", "RoutingDecision",
    "MODALITIES", "TASK_CLASSES", "load_registry", "parse_registry",
    "Lexicon", "classify_query", "route",
    "ProviderHealth", "Success", "Failure", "update_health", "HealthTracker",
    "EWMA_ALPHA", "FAILURE_THRESHOLD",
    "PromptRequest", "ProviderResponse", "ProviderFailure", "MockProvider",
    "ScriptedProvider", "HttpChatProvider", "dispatch_with_failover",
    "prompt_digest", "DEFAULT_TIMEOUT_S",
]
