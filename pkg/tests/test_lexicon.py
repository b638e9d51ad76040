import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valueprobe.errors import ParseError
from valueprobe.lexicon import Entry, Lexicon, parse_lexicon, score_document, score_text, tokenize

HEADER = "%\n1\tSE\n2\tCO\n3\tUN\n%\n"


def char_tokenize(text):
    """Reference tokenizer: walk characters one at a time."""
    tokens, cur = [], ""
    for i, ch in enumerate(text):
        if ch.isalpha():
            cur += ch
        elif ch in "'’" and cur and i + 1 < len(text) and text[i + 1].isalpha():
            cur += ch
        else:
            if cur:
                tokens.append(cur.lower())
            cur = ""
    if cur:
        tokens.append(cur.lower())
    return tokens


def brute_force_counts(tokens, lexicon):
    counts = {name: 0 for name in lexicon.category_names}
    for tok in tokens:
        for entry in lexicon.entries:
            hit = tok.startswith(entry.pattern) if entry.wildcard else tok == entry.pattern
            if hit:
                for cid in entry.category_ids:
                    counts[lexicon.category_name(cid)] += 1
    return counts


def test_parse_basic():
    lex = parse_lexicon(HEADER + "alarm\t1\nachiev*\t2\nboth\t1\t3\n")
    assert lex.category_names == ["SE", "CO", "UN"]
    assert lex.entries[1] == Entry("achiev", True, frozenset({2}))
    assert lex.entries[2].category_ids == {1, 3}


def test_bundled_dictionary_shape(lexicon):
    assert lexicon.category_names == ["SE", "CO", "TR", "BE", "UN", "SD", "ST", "HE", "AC", "PO"]
    assert len(lexicon.entries) > 50


def test_empty_dictionary():
    lex = parse_lexicon(HEADER)
    assert len(lex.categories) == 3
    assert lex.entries == ()


def test_thousand_entry_dictionary():
    body = "".join(f"word{i}\t{i % 3 + 1}\n" for i in range(1068))
    assert len(parse_lexicon(HEADER + body).entries) == 1068


def test_patterns_lowercased_and_bom_tolerated():
    lex = parse_lexicon("﻿" + HEADER + "Alarm\t1\n")
    assert lex.entries[0].pattern == "alarm"


@pytest.mark.parametrize("text, line", [
    ("1\tSE\n%\n", 1),
    ("%\n1\tSE\n", None),
    ("%\nx\tSE\n%\n", 2),
    (HEADER + "alarm\t9\n", 6),
    (HEADER + "*\t1\n", 6),
    (HEADER + "alarm\t1\nalarm\t2\n", 7),
    (HEADER + "alarm\n", 6),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(ParseError) as err:
        parse_lexicon(text, source="toy.dic")
    assert err.value.line == line
    if line is not None:
        assert f"line {line}" in str(err.value)


@pytest.mark.parametrize("text, expected", [
    ("It is important to him/her", ["it", "is", "important", "to", "him", "her"]),
    ("", []),
    ("Alarm—danger! THREAT's caution", ["alarm", "danger", "threat's", "caution"]),
    ("'quoted' rock'n'roll 2nd", ["quoted", "rock'n'roll", "nd"]),
    ("café naïve", ["café", "naïve"]),
])
def test_tokenize_examples(text, expected):
    assert tokenize(text) == expected
    assert char_tokenize(text) == expected


@given(st.text(alphabet=st.sampled_from(list("abcXYZéß'’ -.!?1—\n")), max_size=80))
def test_tokenize_matches_character_oracle(text):
    assert tokenize(text) == char_tokenize(text)


def test_security_words(lexicon):
    counts = score_document(["alarm", "caution", "danger", "threat"], lexicon)
    assert counts["SE"] == 4
    assert counts.token_total == 4


def test_empty_document(lexicon):
    counts = score_document([], lexicon)
    assert set(counts.counts.values()) == {0}
    assert counts.token_total == 0


def test_exact_and_wildcard_both_count():
    lex = parse_lexicon(HEADER + "protect\t3\nprotect*\t1\n")
    counts = score_text("protect protection", lex)
    assert counts["UN"] == 1
    assert counts["SE"] == 2


def test_multi_category_entry_counts_everywhere():
    lex = parse_lexicon(HEADER + "fair\t1\t3\n")
    counts = score_text("fair", lex)
    assert counts["SE"] == counts["UN"] == 1


_letters = st.text(alphabet="abcde", min_size=1, max_size=4)


@st.composite
def lexicon_and_doc(draw):
    patterns = draw(st.lists(st.tuples(_letters, st.booleans()), max_size=20, unique=True))
    entries = tuple(
        Entry(p, w, frozenset(draw(st.sets(st.integers(1, 3), min_size=1, max_size=2))))
        for p, w in patterns
    )
    lex = Lexicon(((1, "SE"), (2, "CO"), (3, "UN")), entries)
    tokens = draw(st.lists(st.text(alphabet="abcde", min_size=1, max_size=6), max_size=200))
    return lex, tokens


@settings(max_examples=100)
@given(lexicon_and_doc())
def test_scoring_matches_brute_force(case):
    lex, tokens = case
    counts = score_document(tokens, lex)
    assert counts.counts == brute_force_counts(tokens, lex)
    assert counts.token_total == len(tokens)


@given(lexicon_and_doc(), st.lists(st.text(alphabet="abcde", min_size=1, max_size=6), max_size=50))
def test_additive_and_monotone(case, extra):
    lex, tokens = case
    a, b = score_document(tokens, lex), score_document(extra, lex)
    joined = score_document(tokens + extra, lex)
    assert joined.counts == (a + b).counts
    assert all(joined[c] >= a[c] for c in lex.category_names)


@given(st.text(alphabet="abcdeABCDE ", max_size=60))
def test_case_invariance(text):
    lex = parse_lexicon(HEADER + "ab*\t1\nc\t2\nde\t3\n")
    assert score_text(text, lex).counts == score_text(text.swapcase(), lex).counts
