"""Probe construction from a value-theory spec, and response cleaning."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

from .errors import ConfigError, InputError

PROMPT_PREFIX = "Elaborate on: "
UNMAPPED = "unmapped"
PROBE_KINDS = ("item", "definition", "name")

_KIND_ALIASES = {
    "item": "item", "items": "item",
    "definition": "definition", "definitions": "definition",
    "name": "name", "names": "name",
}

# Boilerplate openers such as "As an AI language model, ...".
PRETEXT_PATTERN = re.compile(r"AI language model,|As AI,|As a sentient AI|language model AI|As an AI")
_SENTENCE_END = re.compile(r"[.!?]")


@dataclass(frozen=True)
class FineType:
    id: str
    parent_value: str
    item_texts: tuple[str, ...]
    definition_text: str
    name_text: str

    @property
    def mapped(self) -> bool:
        return self.parent_value != UNMAPPED


@dataclass(frozen=True)
class ValueSpec:
    fine_types: tuple[FineType, ...]
    circle_order: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.circle_order)) != len(self.circle_order) or len(self.circle_order) < 3:
            raise ConfigError("circle_order must list at least three distinct value names")
        ids = [ft.id for ft in self.fine_types]
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise ConfigError(f"duplicate fine type ids: {dupes}")
        allowed = set(self.circle_order) | {UNMAPPED}
        bad = [ft.id for ft in self.fine_types if ft.parent_value not in allowed]
        if bad:
            raise ConfigError(f"fine types with a parent outside circle_order: {bad}")

    def fine_type(self, fine_type_id: str) -> FineType:
        for ft in self.fine_types:
            if ft.id == fine_type_id:
                return ft
        raise KeyError(fine_type_id)

    def parent_of(self, fine_type_id: str) -> str:
        return self.fine_type(fine_type_id).parent_value

    @property
    def mapped_fine_types(self) -> list[FineType]:
        return [ft for ft in self.fine_types if ft.mapped]

    def congruence_map(self) -> dict[str, str]:
        """Row label -> congruent column, for fine ids and for parent names themselves."""
        mapping = {name: name for name in self.circle_order}
        mapping.update({ft.id: ft.parent_value for ft in self.mapped_fine_types})
        return mapping

    @property
    def item_count(self) -> int:
        return sum(len(ft.item_texts) for ft in self.fine_types)


@dataclass(frozen=True)
class Prompt:
    fine_type_id: str
    text: str


@dataclass(frozen=True)
class ProbeSet:
    kind: str
    prompts: tuple[Prompt, ...]

    def __len__(self):
        return len(self.prompts)

    def __iter__(self):
        return iter(self.prompts)


def normalize_kind(kind: str) -> str:
    try:
        return _KIND_ALIASES[kind.lower()]
    except KeyError:
        raise ConfigError(f"unknown probe kind {kind!r}; expected one of {PROBE_KINDS}") from None


def value_spec_from_dict(data: dict) -> ValueSpec:
    try:
        circle = tuple(data["circle_order"])
        fine_types = tuple(
            FineType(
                id=str(ft["id"]),
                parent_value=str(ft["parent_value"]),
                item_texts=tuple(ft.get("item_texts", ())),
                definition_text=ft.get("definition_text") or "",
                name_text=ft.get("name_text") or "",
            )
            for ft in data["fine_types"]
        )
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"value spec is missing a required field: {exc}") from exc
    return ValueSpec(fine_types, circle)


def load_value_spec(path: str | Path | None = None) -> ValueSpec:
    """Load a value spec file; ``None`` loads the bundled worked example."""
    try:
        if path is None:
            text = resources.files("valueprobe.data").joinpath("value_spec.json").read_text(encoding="utf-8")
        else:
            text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read value spec {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"value spec {path or '<bundled>'} is not valid JSON: {exc}") from exc
    return value_spec_from_dict(data)


def build_probes(spec: ValueSpec, kind: str) -> ProbeSet:
    kind = normalize_kind(kind)
    prompts: list[Prompt] = []
    if kind == "item":
        for ft in spec.fine_types:
            prompts.extend(Prompt(ft.id, PROMPT_PREFIX + text) for text in ft.item_texts)
    else:
        field = "definition_text" if kind == "definition" else "name_text"
        missing = [ft.id for ft in spec.fine_types if not getattr(ft, field).strip()]
        if missing:
            raise ConfigError(f"{field} is empty for fine types {missing}")
        prompts = [Prompt(ft.id, PROMPT_PREFIX + getattr(ft, field)) for ft in spec.fine_types]
    return ProbeSet(kind, tuple(prompts))


def split_first_sentence(text: str) -> tuple[str, str]:
    m = _SENTENCE_END.search(text)
    if m is None:
        return text, ""
    return text[: m.end()], text[m.end():]


def clean_response(raw_text: str) -> str:
    """Drop the first sentence when it is AI-disclaimer boilerplate.

    Single pass: at most one sentence is removed per call.
    """
    first, rest = split_first_sentence(raw_text)
    if PRETEXT_PATTERN.search(first):
        return rest.lstrip()
    return raw_text


def circular_distance(a: str, b: str, circle_order: Sequence[str]) -> int:
    n = len(circle_order)
    d = abs(list(circle_order).index(a) - list(circle_order).index(b))
    return min(d, n - d)
