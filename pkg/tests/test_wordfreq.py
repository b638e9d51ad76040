import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valueprobe.errors import ParseError
from valueprobe.lexicon import parse_lexicon
from valueprobe.metrics import UnigramTable, category_frequency_stats, read_unigram_csv

TOY = """%
1\tAC
2\tHE
3\tPO
%
achiev*\t1
success\t1
capable\t1
fun\t2
enjoy*\t2
zzzz\t3
"""

UNIGRAMS = {
    "achieve": 500, "achievement": 300, "achieved": 200,
    "success": 900, "capable": 40,
    "fun": 1000, "enjoy": 70, "enjoyed": 30,
    "the": 10**9, "achy": 5,
}


def spreadsheet_stats(values):
    """MEDIAN / STDEV.S style computations written out longhand."""
    v = sorted(values)
    n = len(v)
    mean = sum(v) / n
    median = v[n // 2] if n % 2 else (v[n // 2 - 1] + v[n // 2]) / 2
    sd = math.sqrt(sum((x - mean) ** 2 for x in v) / (n - 1)) if n > 1 else 0.0
    return dict(count=n, mean=mean, sd=sd, median=median, min=v[0], max=v[-1], range=v[-1] - v[0])


def expand(entry_pattern, wildcard, table):
    if wildcard:
        hits = [w for w in table if w.startswith(entry_pattern)]
        return sum(table[w] for w in hits) if hits else None
    return table.get(entry_pattern)


def test_toy_table_against_oracle():
    lex = parse_lexicon(TOY)
    stats = {s.category: s for s in category_frequency_stats(lex, UNIGRAMS)}
    ac = stats["AC"]
    assert [ac.count, ac.median, ac.min, ac.max] == [3, 900, 40, 1000]
    oracle = spreadsheet_stats([1000, 900, 40])
    for key, value in oracle.items():
        assert getattr(ac, key) == pytest.approx(value)
    he = stats["HE"]
    assert he.median == 550.0  # midpoint of 100 and 1000
    assert he.sd == pytest.approx(math.sqrt(2) * 450)


def test_empty_category_is_flagged():
    stats = {s.category: s for s in category_frequency_stats(parse_lexicon(TOY), UNIGRAMS)}
    po = stats["PO"]
    assert po.empty
    assert po.missing == ("zzzz",)
    assert po.mean is po.median is po.sd is None


def test_single_entry_category():
    lex = parse_lexicon("%\n1\tA\n%\nword\t1\n")
    (s,) = category_frequency_stats(lex, {"word": 77})
    assert s.mean == s.median == s.min == s.max == 77
    assert s.sd == 0.0 and s.range == 0


_words = st.text(alphabet="abcd", min_size=1, max_size=5)


@settings(max_examples=60)
@given(st.dictionaries(_words, st.integers(1, 10**6), min_size=1, max_size=40),
       st.lists(st.tuples(_words, st.booleans(), st.integers(1, 2)), min_size=1, max_size=12,
                unique_by=lambda t: (t[0], t[1])))
def test_random_tables_match_oracle(table, entries):
    src = "%\n1\tA\n2\tB\n%\n" + "".join(f"{p}{'*' if w else ''}\t{c}\n" for p, w, c in entries)
    lex = parse_lexicon(src)
    for s in category_frequency_stats(lex, UnigramTable(table)):
        cid = 1 if s.category == "A" else 2
        freqs = [expand(p, w, table) for p, w, c in entries if c == cid]
        found = [f for f in freqs if f is not None]
        assert s.count == len(found)
        assert len(s.missing) == len(freqs) - len(found)
        if found:
            for key, value in spreadsheet_stats(found).items():
                assert getattr(s, key) == pytest.approx(value, rel=1e-12)


def test_read_unigram_csv(tmp_path):
    p = tmp_path / "u.csv"
    p.write_text("word,count\nThe,10\nthe,5\nfun,3\n", encoding="utf-8")
    table = read_unigram_csv(p)
    assert table.counts == {"the": 15, "fun": 3}


def test_read_unigram_csv_bad_count(tmp_path):
    p = tmp_path / "u.csv"
    p.write_text("word,count\nfun,3\nsad,many\n", encoding="utf-8")
    with pytest.raises(ParseError) as err:
        read_unigram_csv(p)
    assert err.value.line == 3
