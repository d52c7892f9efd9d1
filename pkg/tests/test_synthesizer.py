from __future__ import annotations

import json
import random
import re

import pytest

from sartool import default_catalog, parse
from sartool.errors import ConfigError
from sartool.nl_frontend import nl_to_sar
from sartool.preprocess import LiteralDict
from sartool.synthesizer import (
    Lexicon,
    ParallelExample,
    SynthConfig,
    _targets,
    default_lexicon,
    mutate,
    mutate_corpus,
    mutation_rng,
    parse_ratios,
    read_corpus,
    split,
    synthesize,
    synthesize_one,
    write_corpus,
)

SWITCH_PLAYER_NL = "Create an app that has an audio player with source string0, a switch. If the switch is flipped, play player."


def test_exactly_n_and_reproducible():
    cfg = SynthConfig(seed=3)
    a, b = synthesize(cfg, 50), synthesize(cfg, 50)
    assert len(a) == 50
    assert [x.to_line() for x in a] == [x.to_line() for x in b]
    assert synthesize_one(cfg, 17).to_line() == a[17].to_line()
    assert synthesize(SynthConfig(seed=4), 50)[0].to_line() != a[0].to_line() or \
        synthesize(SynthConfig(seed=4), 50)[1].to_line() != a[1].to_line()


def test_degenerate_single_button_range():
    cfg = SynthConfig(components=(1, 1), kinds=("button",))
    for ex in synthesize(cfg, 40):
        app = parse(ex.sar, literals=LiteralDict(ex.literals))
        (screen,) = app.screens
        assert [c.kind for c in screen.components] == ["button"]
        assert screen.events == ()


def test_switch_and_player_plan():
    cfg = SynthConfig(components=(2, 2), kinds=("switch", "player"), max_repeats=1, event_prob=1.0)
    for ex in synthesize(cfg, 30):
        app = parse(ex.sar, literals=LiteralDict(ex.literals))
        assert sorted(c.kind for c in app.screens[0].components) == ["player", "switch"]
        assert nl_to_sar(ex.nl, literals=ex.literals).sar == ex.sar


def test_singletons_never_repeat(corpus):
    catalog = default_catalog()
    for ex in corpus[:1000]:
        for screen in parse(ex.sar, catalog, LiteralDict(ex.literals)).screens:
            kinds = [c.kind for c in screen.components]
            for k in set(kinds):
                if catalog.lookup(k).singleton:
                    assert kinds.count(k) == 1


def test_placeholders_numbered_in_reading_order(corpus):
    for ex in corpus[:500]:
        seen = re.findall(r"\b(string|number)(\d+)\b", ex.nl)
        for family in ("string", "number"):
            nums = [int(n) for f, n in seen if f == family]
            assert nums == list(range(len(nums)))
        assert set(ex.literals) == {f + n for f, n in seen}


@pytest.mark.parametrize("raw", [
    {"components": [3, 1]},
    {"arg_prob": 1.5},
    {"kinds": ["spreadsheet"]},
    {"screens": [0, 1]},
])
def test_bad_configs(raw):
    with pytest.raises(ConfigError):
        synthesize(SynthConfig.from_dict(raw), 1)


def test_unknown_config_key(tmp_path):
    with pytest.raises(ConfigError):
        SynthConfig.from_dict({"colour": 1})
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"seed": 9, "components": [2, 3]}))
    cfg = SynthConfig.from_file(path)
    assert cfg.seed == 9 and cfg.components == (2, 3)
    assert SynthConfig.from_dict(cfg.to_dict()) == cfg


def test_corpus_file_round_trip(tmp_path):
    corpus = synthesize(SynthConfig(seed=1), 30)
    write_corpus(corpus, tmp_path / "c.tsv")
    back = read_corpus(tmp_path / "c.tsv")
    assert [(e.nl, e.sar, dict(e.literals)) for e in back] == [(e.nl, e.sar, dict(e.literals)) for e in corpus]
    with pytest.raises(ValueError):
        ParallelExample.from_line("only\ttwo")


# ---------------------------------------------------------------- mutation


def test_rate_zero_is_identity():
    assert mutate(SWITCH_PLAYER_NL, 0.0, default_lexicon(), random.Random(0)) == SWITCH_PLAYER_NL


def test_switch_player_style_substitution():
    lex = Lexicon({"demo": {"audio": ["external"], "is": ["gets"]}})
    out = mutate(SWITCH_PLAYER_NL, 1.0, lex, random.Random(0))
    assert out == SWITCH_PLAYER_NL.replace("audio", "external").replace("is flipped", "gets flipped")


def _changed(a: str, b: str) -> set[int]:
    return {i for i, (x, y) in enumerate(zip(a.split(), b.split())) if x != y}


def test_changed_word_count_tracks_rate(corpus):
    lex = default_lexicon()
    for i, ex in enumerate(corpus[:300]):
        n = len(ex.nl.split())
        for rate in (0.02, 0.05, 0.1, 0.3):
            out = mutate(ex.nl, rate, lex, mutation_rng(0, i))
            k = len(_changed(ex.nl, out))
            spots = len(_changed(ex.nl, mutate(ex.nl, 1.0, lex, mutation_rng(0, i))))
            assert k <= spots
            if spots >= rate * n + 1:
                assert abs(k - rate * n) < 1


def test_mutated_positions_are_nested_across_rates(corpus):
    lex = default_lexicon()
    for i, ex in enumerate(corpus[:300]):
        sets = [_changed(ex.nl, mutate(ex.nl, r, lex, mutation_rng(0, i))) for r in (0.02, 0.05, 0.1)]
        assert sets[0] <= sets[1] <= sets[2]


def test_mutation_spares_placeholders_and_component_words(corpus):
    out = mutate_corpus(corpus[:300], 0.3, seed=1)
    for before, after in zip(corpus, out):
        assert re.findall(r"\b(?:string|number)\d+\b", after.nl) == re.findall(r"\b(?:string|number)\d+\b", before.nl)
        assert after.sar == before.sar


def test_mutate_rejects_bad_rate():
    with pytest.raises(ValueError):
        mutate("x", 1.5, default_lexicon(), random.Random(0))


# ---------------------------------------------------------------- split


def test_split_sizes():
    corpus = synthesize(SynthConfig(seed=2), 10)
    assert [len(p) for p in split(corpus, (0.8, 0.1, 0.1))] == [8, 1, 1]
    assert _targets(50000, (0.8, 0.1, 0.1)) == [40000, 5000, 5000]
    assert _targets(5000, parse_ratios("8:1:1")) == [4000, 500, 500]
    assert sum(_targets(7, (0.5, 0.25, 0.25))) == 7


def test_split_is_disjoint_and_complete(corpus):
    parts = split(corpus, (0.8, 0.1, 0.1), seed=0)
    assert [len(p) for p in parts] == [4000, 500, 500]
    keys = [{(e.nl, e.sar) for e in p} for p in parts]
    assert not (keys[0] & keys[1] or keys[0] & keys[2] or keys[1] & keys[2])
    assert sorted(e.index for p in parts for e in p) == list(range(len(corpus)))


def test_split_ratios_must_sum_to_one():
    with pytest.raises(ConfigError):
        split([], (0.5, 0.5, 0.5))
    with pytest.raises(ConfigError):
        parse_ratios("8:1")
    assert parse_ratios("0.8,0.1,0.1") == pytest.approx((0.8, 0.1, 0.1))
