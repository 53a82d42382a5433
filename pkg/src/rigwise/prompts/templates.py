"""Reasoning templates with persona, numbered steps, and named slots."""

from __future__ import annotations

from dataclasses import dataclass, field

import yaml

from ..errors import MissingSlot, ShotCountMismatch

PERSONAS = ("reservoir_engineer", "production_engineer", "geologist", "safety_officer")

PERSONA_TITLES = {
    "reservoir_engineer": "senior reservoir engineer",
    "production_engineer": "senior production engineer",
    "geologist": "senior petroleum geologist",
    "safety_officer": "senior process safety officer",
}

SHOT_CHOICES = (0, 3, 5)
STEP_CHOICES = (3, 5)

_SLOTS = ("{context}", "{examples}", "{question}")


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    persona: str
    steps: tuple
    body: str

    def __post_init__(self):
        if self.persona not in PERSONAS:
            raise ValueError(f"unknown persona {self.persona!r}")
        missing = [s for s in _SLOTS if s not in self.body]
        if missing:
            raise MissingSlot(f"template {self.template_id} lacks slots {missing}")

    @classmethod
    def from_yaml(cls, text: str) -> "PromptTemplate":
        data = yaml.safe_load(text)
        return cls(
            template_id=data["template_id"],
            persona=data["persona"],
            steps=tuple(data["steps"]),
            body=data["body"],
        )


@dataclass(frozen=True)
class PromptParams:
    shots: int = 0
    persona: str = "reservoir_engineer"
    step_count: int = 5
    include_citations: bool = False

    def __post_init__(self):
        if self.shots not in SHOT_CHOICES:
            raise ValueError(f"shots must be one of {SHOT_CHOICES}")
        if self.persona not in PERSONAS:
            raise ValueError(f"unknown persona {self.persona!r}")
        if self.step_count not in STEP_CHOICES:
            raise ValueError(f"step_count must be one of {STEP_CHOICES}")


@dataclass(frozen=True)
class RenderedPassage:
    """Context entry: provenance ref plus text."""
    ref: str
    text: str


def _steps_block(template: PromptTemplate, step_count: int) -> str:
    steps = template.steps[:step_count]
    return "\n".join(f"Step {i + 1}: {title}" for i, title in enumerate(steps))


def _examples_block(shots) -> str:
    lines = ["Worked examples:"]
    for i, case in enumerate(shots, start=1):
        lines.append(f"Example {i} ({case.basin}, {case.reservoir_type}):")
        lines.append(f"  Input: {case.input_text}")
        lines.append(f"  Output: {case.output_text}")
    return "\n".join(lines)


def _context_block(passages) -> str:
    if not passages:
        return "Reference material: (none retrieved)"
    lines = ["Reference material:"]
    for p in passages:
        ref = getattr(p, "ref", None) or f"{p.doc_id}#{p.ordinal}"
        lines.append(f"  [{ref}] {p.text}")
    return "\n".join(lines)


def render_prompt(template: PromptTemplate, params: PromptParams,
                  context, shots, question: str) -> str:
    """Deterministic prompt assembly.

    The examples block appears iff params.shots > 0; the shot list length must
    equal params.shots. Output always requests an "ANSWER:" final line, which
    the consensus layer keys on.
    """
    shots = list(shots or [])
    if len(shots) != params.shots:
        raise ShotCountMismatch(f"expected {params.shots} shots, got {len(shots)}")

    preamble = (f"You are a {PERSONA_TITLES[params.persona]} advising field "
                "operations. Work through the numbered steps, stating your "
                "reasoning for each.")
    rendered = template.body
    rendered = rendered.replace("{persona_preamble}", preamble)
    rendered = rendered.replace("{steps}", _steps_block(template, params.step_count))
    rendered = rendered.replace("{context}", _context_block(context))
    rendered = rendered.replace("{examples}",
                                _examples_block(shots) if shots else "")
    rendered = rendered.replace("{question}", question)
    if params.include_citations:
        rendered += "\nCite the [doc#chunk] references supporting each conclusion."
    # collapse the blank gap an elided examples block leaves behind
    while "\n\n\n" in rendered:
        rendered = rendered.replace("\n\n\n", "\n\n")
    return rendered
