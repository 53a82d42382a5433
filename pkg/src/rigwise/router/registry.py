"""Provider registry types and loaders."""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

MODALITIES = ("text", "image", "document", "video", "code")

TASK_CLASSES = (
    "reservoir_characterization",
    "production_forecasting",
    "drilling_optimization",
    "safety_assessment",
    "complex_reasoning",
    "code_generation",
    "documentation_analysis",
    "multimodal",
)


@dataclass(frozen=True)
class GenerationSettings:
    temperature: float = 0.0
    top_p: float = 0.95

    def __post_init__(self):
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")
        if not (0 < self.top_p <= 1):
            raise ValueError("top_p must be in (0, 1]")


@dataclass(frozen=True)
class ModelSpec:
    model_id: str
    context_window: int
    modalities: frozenset
    reasoning_score: float
    cost_per_mtok: float
    primary_use: str = ""

    def __post_init__(self):
        if self.context_window <= 0:
            raise ValueError("context_window must be positive")
        if not (0 <= self.reasoning_score <= 100):
            raise ValueError("reasoning_score must be in [0, 100]")
        if self.cost_per_mtok < 0:
            raise ValueError("cost_per_mtok must be >= 0")
        bad = set(self.modalities) - set(MODALITIES)
        if bad:
            raise ValueError(f"unknown modalities {sorted(bad)}")


@dataclass(frozen=True)
class QueryProfile:
    task_class: str
    est_tokens: int
    attachment_modalities: frozenset = frozenset()
    priority: str = "routine"

    def __post_init__(self):
        if self.task_class not in TASK_CLASSES:
            raise ValueError(f"unknown task_class {self.task_class!r}")
        if self.est_tokens < 0:
            raise ValueError("est_tokens must be >= 0")
        if self.priority not in ("routine", "critical"):
            raise ValueError("priority must be routine or critical")
        non_text = {m for m in self.attachment_modalities if m != "text"}
        if (self.task_class == "multimodal") != bool(non_text):
            raise ValueError("multimodal task_class iff a non-text attachment present")


@dataclass(frozen=True)
class RoutingDecision:
    chosen: str
    alternates: tuple
    rationale_tags: tuple
    settings: GenerationSettings = field(default_factory=GenerationSettings)


def parse_registry(data: dict) -> list[ModelSpec]:
    specs = []
    seen = set()
    for row in data.get("models", []):
        spec = ModelSpec(
            model_id=row["model_id"],
            context_window=int(row["context_window"]),
            modalities=frozenset(row.get("modalities", ["text"])),
            reasoning_score=float(row["reasoning_score"]),
            cost_per_mtok=float(row["cost_per_mtok"]),
            primary_use=row.get("primary_use", ""),
        )
        if spec.model_id in seen:
            raise ValueError(f"duplicate model_id {spec.model_id!r}")
        seen.add(spec.model_id)
        specs.append(spec)
    return specs


def load_registry(path: str) -> list[ModelSpec]:
    with open(path, encoding="utf-8") as fh:
        return parse_registry(yaml.safe_load(fh) or {})
