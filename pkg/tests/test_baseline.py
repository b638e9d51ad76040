from valueprobe.baseline import instrument_baseline
from valueprobe.probes import value_spec_from_dict

CIRCLE = ["SE", "CO", "TR", "BE", "UN", "SD", "ST", "HE", "AC", "PO"]


def spec_with(items: dict):
    return value_spec_from_dict({
        "circle_order": CIRCLE,
        "fine_types": [{"id": ft, "parent_value": parent, "item_texts": texts, "definition_text": "d", "name_text": "n"}
                       for ft, (parent, texts) in items.items()],
    })


def test_security_items_flag_protect_and_avoid(lexicon):
    spec = spec_with({"Security-Personal": ("SE", [
        "It is important to him to avoid anything that might endanger his safety.",
        "It is important to him that the state protect its citizens.",
    ])})
    base = instrument_baseline(spec, lexicon)
    mismatches = {(m.token, m.category) for m in base.mismatches}
    assert mismatches == {("avoid", "CO"), ("protect", "UN")}
    assert base.fine.row("Security-Personal")["SE"] == 1  # "safety" via safe*


def test_items_without_dictionary_words(lexicon):
    base = instrument_baseline(spec_with({"Hedonism": ("HE", ["Nothing here matches at all."])}), lexicon)
    assert base.matches == ()
    assert base.items[0].counts == (0,) * 10
    assert base.fine_hits.row_hits == 0
    assert base.fine_hits.row_status == (None,)


def test_three_item_spec_hand_scored(lexicon):
    spec = spec_with({
        "Achievement": ("AC", ["Success and ambition; he wants to achieve and lead."]),
        "Tradition": ("TR", ["Customs and faith, family first."]),
        "Face": ("unmapped", ["Status and power matter."]),
    })
    base = instrument_baseline(spec, lexicon)
    by_item = {i.fine_type_id: dict(zip(CIRCLE, i.counts)) for i in base.items}
    assert by_item["Achievement"]["AC"] == 3 and by_item["Achievement"]["PO"] == 1
    assert by_item["Tradition"]["TR"] == 2 and by_item["Tradition"]["BE"] == 1
    assert by_item["Face"]["PO"] == 2
    # unmapped types are scored per item but left out of the matrices
    assert base.fine.row_labels == ("Achievement", "Tradition")
    assert base.fine_hits.row_hits == 2
    assert sum(not m.congruent for m in base.mismatches) == 2
