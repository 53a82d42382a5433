"""Loaders for the data files shipped inside the package."""

from __future__ import annotations

import json
from importlib import resources

import yaml

from ..rag.jargon import JargonDictionary
from ..router.classify import Lexicon
from ..router.registry import ModelSpec, parse_registry


def _read_text(name: str) -> str:
    return resources.files("rigwise").joinpath("data").joinpath(name).read_text("utf-8")


def default_registry() -> list[ModelSpec]:
    return parse_registry(yaml.safe_load(_read_text("registry.yaml")))


def default_lexicon() -> Lexicon:
    return Lexicon.from_text(_read_text("lexicon.tsv"))


def default_jargon() -> JargonDictionary:
    entries = {}
    for line in _read_text("jargon.tsv").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        term, _, rest = line.partition("\t")
        entries[term.strip()] = [p.strip() for p in rest.split(",") if p.strip()]
    return JargonDictionary(entries)


def default_fewshot_cases() -> list[dict]:
    return json.loads(_read_text("fewshot_library.json"))


def template_text(name: str) -> str:
    return resources.files("rigwise").joinpath("data/templates").joinpath(name).read_text("utf-8")


def list_templates() -> list[str]:
    folder = resources.files("rigwise").joinpath("data/templates")
    return sorted(p.name for p in folder.iterdir() if p.name.endswith(".yaml"))
