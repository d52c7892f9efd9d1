from __future__ import annotations

import pytest

from conftest import SPEAK_IT_NL, SPEAK_IT_SAR

from sartool.errors import NoComponentsFound
from sartool.nl_frontend import nl_to_sar
from sartool.synthesizer import SynthConfig, synthesize

SWITCH_PLAYER_NL = "Create an app that has an audio player with source string0, a switch. If the switch is flipped, play player."


def test_two_textboxes_and_a_plus_button():
    tr = nl_to_sar("make an app with a textbox, a textbox, and a button named string0", literals={"string0": "+"})
    assert tr.sar == "<complist> <textbox> <textbox> <button> string0 </button> </complist>"
    assert dict(tr.literals) == {"string0": "+"}


def test_quoted_literals_are_extracted_first():
    tr = nl_to_sar('make an app with a textbox, and a button named "+"')
    assert tr.sar == "<complist> <textbox> <button> string0 </button> </complist>"
    assert dict(tr.literals) == {"string0": "+"}


def test_speak_it_description():
    tr = nl_to_sar(SPEAK_IT_NL)
    assert tr.sar == SPEAK_IT_SAR and tr.report.clean


def test_switch_player_original():
    tr = nl_to_sar(SWITCH_PLAYER_NL, literals={"string0": "song.mp3"})
    assert tr.sar == ("<complist> <player> string0 </player> <switch> </complist> <code> <switch1_flipped> "
                      "<player1_start> </switch1_flipped> </code>")


def test_switch_player_augmented_wording_still_translates():
    augmented = SWITCH_PLAYER_NL.replace("audio", "external").replace("is flipped", "gets flipped")
    assert nl_to_sar(augmented, literals={"string0": "s.mp3"}).sar == nl_to_sar(SWITCH_PLAYER_NL, literals={"string0": "s.mp3"}).sar


def test_abstract_request():
    with pytest.raises(NoComponentsFound) as err:
        nl_to_sar("make a photo editing app")
    assert "abstract" in str(err.value)


def test_counted_components_and_ordinals():
    tr = nl_to_sar("make an app with two buttons and a text2speech. when the second button is clicked, "
                   'speak "hi"')
    assert tr.sar == ("<complist> <button> <button> <text2speech> </complist> <code> <button2_clicked> "
                      "<speak> string0 </speak> </button2_clicked> </code>")


def test_unknown_words_are_ignored_not_fatal():
    tr = nl_to_sar("please kindly make an app with a button, thanks")
    assert tr.sar == "<complist> <button> </complist>"


def test_no_implied_components():
    # the text2speech is never declared, so the speak action has nothing to run on
    tr = nl_to_sar("make an app with a button. when the button is clicked, speak the time")
    assert "<speak>" not in tr.sar


def test_multi_screen_round_trip():
    corpus = synthesize(SynthConfig(seed=11, screens=(2, 3)), 200)
    assert any("<NEXT>" in ex.sar for ex in corpus)
    for ex in corpus:
        assert nl_to_sar(ex.nl, literals=ex.literals).sar == ex.sar
