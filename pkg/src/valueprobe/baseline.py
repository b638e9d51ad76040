"""Dictionary baseline on the questionnaire items themselves.

Scores each item text with the lexicon and lists every matched token,
flagging those counted under a category other than the item's own value.
"""
from __future__ import annotations

from dataclasses import dataclass
from types import SimpleNamespace

from .errors import ValidationError
from .lexicon import Lexicon, counts_vector, score_text, tokenize
from .matrix import CountMatrix, aggregate_matrix, build_count_matrix
from .metrics.validity import HitResult, hits
from .probes import ValueSpec


@dataclass(frozen=True)
class TokenMatch:
    fine_type_id: str
    parent_value: str
    item_index: int
    position: int
    token: str
    entry: str
    category: str

    @property
    def congruent(self) -> bool:
        return self.category == self.parent_value


@dataclass(frozen=True)
class ItemScore:
    fine_type_id: str
    parent_value: str
    item_index: int
    text: str
    token_total: int
    counts: tuple[int, ...]


@dataclass(frozen=True)
class InstrumentBaseline:
    categories: tuple[str, ...]
    items: tuple[ItemScore, ...]
    matches: tuple[TokenMatch, ...]
    fine: CountMatrix
    aggregated: CountMatrix
    fine_hits: HitResult
    value_hits: HitResult

    @property
    def mismatches(self) -> list[TokenMatch]:
        return [m for m in self.matches if not m.congruent and m.parent_value in self.categories]


def instrument_baseline(spec: ValueSpec, lexicon: Lexicon) -> InstrumentBaseline:
    circle = tuple(spec.circle_order)
    if set(lexicon.category_names) != set(circle):
        raise ValidationError(
            f"dictionary categories {lexicon.category_names} do not match the value spec circle {list(circle)}"
        )
    items, matches, records = [], [], []
    for ft in spec.fine_types:
        for k, text in enumerate(ft.item_texts):
            tokens = tokenize(text)
            counts = score_text(text, lexicon)
            items.append(ItemScore(ft.id, ft.parent_value, k, text, len(tokens), tuple(counts_vector(counts, circle))))
            for pos, token in enumerate(tokens):
                for entry in lexicon.matching_entries(token):
                    for cid in sorted(entry.category_ids):
                        matches.append(TokenMatch(ft.id, ft.parent_value, k, pos, token, entry.source_form,
                                                  lexicon.category_name(cid)))
            records.append(SimpleNamespace(fine_type_id=ft.id, cleaned_text=text, ok=True))
    fine = build_count_matrix(records, lexicon, spec)
    agg = aggregate_matrix(fine)
    return InstrumentBaseline(circle, tuple(items), tuple(matches), fine, agg, hits(fine), hits(agg))
