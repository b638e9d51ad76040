"""English-frequency statistics of dictionary entries, per category."""
from __future__ import annotations

import bisect
import csv
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Optional

from ..errors import InputError, ParseError
from ..lexicon import Entry, Lexicon


@dataclass(frozen=True)
class FrequencyStats:
    category: str
    n_entries: int
    count: int
    mean: Optional[float]
    sd: Optional[float]
    median: Optional[float]
    min: Optional[int]
    max: Optional[int]
    range: Optional[int]
    missing: tuple[str, ...]

    @property
    def empty(self) -> bool:
        return self.count == 0


class UnigramTable:
    """word -> corpus count, with prefix lookups for wildcard entries."""

    def __init__(self, counts: Mapping[str, int]):
        self.counts = dict(counts)
        self._sorted = sorted(self.counts)

    def __len__(self):
        return len(self.counts)

    def with_prefix(self, prefix: str) -> list[str]:
        lo = bisect.bisect_left(self._sorted, prefix)
        out = []
        for word in self._sorted[lo:]:
            if not word.startswith(prefix):
                break
            out.append(word)
        return out

    def entry_frequency(self, entry: Entry) -> Optional[int]:
        """Count for an exact entry; summed count of all prefix matches for a wildcard."""
        if entry.wildcard:
            words = self.with_prefix(entry.pattern)
            return sum(self.counts[w] for w in words) if words else None
        return self.counts.get(entry.pattern)


def read_unigram_csv(path: str | Path) -> UnigramTable:
    """Read a two-column ``word,count`` table; a header row is optional."""
    path = Path(path)
    counts: dict[str, int] = {}
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            for lineno, row in enumerate(csv.reader(fh), start=1):
                if not row:
                    continue
                if len(row) < 2:
                    raise ParseError("expected word,count", lineno, str(path))
                word, raw = row[0].strip().lower(), row[1].strip()
                try:
                    n = int(raw)
                except ValueError:
                    if lineno == 1:
                        continue
                    raise ParseError(f"count {raw!r} is not an integer", lineno, str(path)) from None
                if word:
                    counts[word] = counts.get(word, 0) + n
    except OSError as exc:
        raise InputError(f"cannot read unigram table {path}: {exc}") from exc
    return UnigramTable(counts)


def category_frequency_stats(lexicon: Lexicon, unigrams: UnigramTable | Mapping[str, int]) -> list[FrequencyStats]:
    table = unigrams if isinstance(unigrams, UnigramTable) else UnigramTable(unigrams)
    out = []
    for name in lexicon.category_names:
        entries = lexicon.entries_in(name)
        freqs, missing = [], []
        for entry in entries:
            f = table.entry_frequency(entry)
            if f is None:
                missing.append(entry.source_form)
            else:
                freqs.append(f)
        if freqs:
            sd = statistics.stdev(freqs) if len(freqs) > 1 else 0.0
            out.append(FrequencyStats(
                category=name,
                n_entries=len(entries),
                count=len(freqs),
                mean=statistics.fmean(freqs),
                sd=sd,
                median=statistics.median(freqs),
                min=min(freqs),
                max=max(freqs),
                range=max(freqs) - min(freqs),
                missing=tuple(missing),
            ))
        else:
            out.append(FrequencyStats(name, len(entries), 0, None, None, None, None, None, None, tuple(missing)))
    return out
