"""LIWC-style category dictionaries: parsing, tokenizing, and raw counting.

A dictionary file looks like::

    %
    1<TAB>SE
    2<TAB>CO
    %
    alarm<TAB>1
    obey*<TAB>2

Entries ending in ``*`` match any token with that prefix. Counts are raw
occurrence counts; nothing is normalized by document length.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

import regex

from .errors import InputError, ParseError

# Letter runs, apostrophes allowed only between letters.
_TOKEN_RE = regex.compile(r"\p{L}+(?:['’]\p{L}+)*")


@dataclass(frozen=True)
class Entry:
    pattern: str
    wildcard: bool
    category_ids: frozenset[int]

    @property
    def source_form(self) -> str:
        return self.pattern + "*" if self.wildcard else self.pattern

    def matches(self, token: str) -> bool:
        if self.wildcard:
            return token.startswith(self.pattern)
        return token == self.pattern


class _TrieNode:
    __slots__ = ("children", "entries")

    def __init__(self):
        self.children: dict[str, _TrieNode] = {}
        self.entries: list[int] = []


@dataclass(frozen=True)
class Lexicon:
    """Immutable category dictionary.

    ``categories`` keeps the header order as ``(id, name)`` pairs and
    ``entries`` keeps the file order.
    """

    categories: tuple[tuple[int, str], ...]
    entries: tuple[Entry, ...]
    _exact: dict = field(init=False, repr=False, compare=False)
    _trie: _TrieNode = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = [name for _, name in self.categories]
        if len(set(names)) != len(names):
            raise ParseError("duplicate category names")
        ids = {cid for cid, _ in self.categories}
        if len(ids) != len(self.categories):
            raise ParseError("duplicate category ids")
        seen = set()
        exact: dict[str, list[int]] = {}
        root = _TrieNode()
        for i, entry in enumerate(self.entries):
            if not entry.pattern:
                raise ParseError(f"entry {i} has an empty pattern")
            if not entry.category_ids or not entry.category_ids <= ids:
                raise ParseError(f"entry {entry.source_form!r} refers to undeclared categories")
            key = (entry.pattern, entry.wildcard)
            if key in seen:
                raise ParseError(f"duplicate entry {entry.source_form!r}")
            seen.add(key)
            if entry.wildcard:
                node = root
                for ch in entry.pattern:
                    node = node.children.setdefault(ch, _TrieNode())
                node.entries.append(i)
            else:
                exact.setdefault(entry.pattern, []).append(i)
        object.__setattr__(self, "_exact", exact)
        object.__setattr__(self, "_trie", root)

    @property
    def category_names(self) -> list[str]:
        return [name for _, name in self.categories]

    def category_name(self, category_id: int) -> str:
        for cid, name in self.categories:
            if cid == category_id:
                return name
        raise KeyError(category_id)

    def entries_in(self, name: str) -> list[Entry]:
        cid = next(cid for cid, n in self.categories if n == name)
        return [e for e in self.entries if cid in e.category_ids]

    def matching_entries(self, token: str) -> list[Entry]:
        """All entries matching ``token``: its exact entry plus every wildcard prefix."""
        hits = list(self._exact.get(token, ()))
        node = self._trie
        for ch in token:
            node = node.children.get(ch)
            if node is None:
                break
            hits.extend(node.entries)
        return [self.entries[i] for i in hits]


@dataclass(frozen=True)
class CategoryCounts:
    counts: dict[str, int]
    token_total: int

    def __getitem__(self, name: str) -> int:
        return self.counts[name]

    def __add__(self, other: "CategoryCounts") -> "CategoryCounts":
        merged = dict(self.counts)
        for name, n in other.counts.items():
            merged[name] = merged.get(name, 0) + n
        return CategoryCounts(merged, self.token_total + other.token_total)


def parse_lexicon(source_text: str, source: str | None = None) -> Lexicon:
    lines = source_text.splitlines()
    if lines and lines[0].startswith("\ufeff"):
        lines[0] = lines[0][1:]

    i = 0
    while i < len(lines) and not lines[i].strip():
        i += 1
    if i >= len(lines) or lines[i].strip() != "%":
        raise ParseError("expected '%' opening the category header", i + 1 if i < len(lines) else None, source)
    i += 1

    categories: list[tuple[int, str]] = []
    names: set[str] = set()
    while True:
        if i >= len(lines):
            raise ParseError("category header is not closed with '%'", None, source)
        line = lines[i].strip()
        if line == "%":
            i += 1
            break
        if line:
            parts = _split_fields(line)
            if len(parts) != 2:
                raise ParseError(f"malformed category line {line!r}", i + 1, source)
            try:
                cid = int(parts[0])
            except ValueError:
                raise ParseError(f"category id {parts[0]!r} is not an integer", i + 1, source) from None
            if any(cid == c for c, _ in categories):
                raise ParseError(f"duplicate category id {cid}", i + 1, source)
            if parts[1] in names:
                raise ParseError(f"duplicate category name {parts[1]!r}", i + 1, source)
            categories.append((cid, parts[1]))
            names.add(parts[1])
        i += 1

    declared = {cid for cid, _ in categories}
    entries: list[Entry] = []
    seen: set[tuple[str, bool]] = set()
    for lineno in range(i, len(lines)):
        line = lines[lineno].strip()
        if not line:
            continue
        parts = _split_fields(line)
        raw = parts[0].lower()
        wildcard = raw.endswith("*")
        pattern = raw[:-1] if wildcard else raw
        if not pattern or "*" in pattern:
            raise ParseError(f"invalid pattern {parts[0]!r}", lineno + 1, source)
        if len(parts) < 2:
            raise ParseError(f"entry {parts[0]!r} lists no categories", lineno + 1, source)
        try:
            ids = frozenset(int(p) for p in parts[1:])
        except ValueError:
            raise ParseError(f"non-integer category id in entry {parts[0]!r}", lineno + 1, source) from None
        unknown = sorted(ids - declared)
        if unknown:
            raise ParseError(f"entry {parts[0]!r} uses unknown category id(s) {unknown}", lineno + 1, source)
        if (pattern, wildcard) in seen:
            raise ParseError(f"duplicate entry {parts[0]!r}", lineno + 1, source)
        seen.add((pattern, wildcard))
        entries.append(Entry(pattern, wildcard, ids))

    return Lexicon(tuple(categories), tuple(entries))


def _split_fields(line: str) -> list[str]:
    if "\t" in line:
        return [p.strip() for p in line.split("\t") if p.strip()]
    return line.split()


def load_lexicon(path: str | Path) -> Lexicon:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read dictionary {path}: {exc}") from exc
    return parse_lexicon(text, source=str(path))


def tokenize(text: str) -> list[str]:
    return [m.group(0).lower() for m in _TOKEN_RE.finditer(text)]


def iter_matches(tokens: Iterable[str], lexicon: Lexicon) -> Iterator[tuple[str, Entry]]:
    """Yield every (token, entry) pair that matches, in token order."""
    for token in tokens:
        for entry in lexicon.matching_entries(token):
            yield token, entry


def score_document(tokens: Sequence[str], lexicon: Lexicon) -> CategoryCounts:
    # Identical tokens share one lookup.
    by_id: Counter[int] = Counter()
    for token, n in Counter(tokens).items():
        for entry in lexicon.matching_entries(token):
            for cid in entry.category_ids:
                by_id[cid] += n
    counts = {name: by_id.get(cid, 0) for cid, name in lexicon.categories}
    return CategoryCounts(counts, len(tokens))


def score_text(text: str, lexicon: Lexicon) -> CategoryCounts:
    return score_document(tokenize(text), lexicon)


def zero_counts(lexicon: Lexicon) -> CategoryCounts:
    return CategoryCounts({name: 0 for name in lexicon.category_names}, 0)


def counts_vector(counts: CategoryCounts | Mapping[str, int], order: Sequence[str]) -> list[int]:
    mapping = counts.counts if isinstance(counts, CategoryCounts) else counts
    return [mapping[name] for name in order]
