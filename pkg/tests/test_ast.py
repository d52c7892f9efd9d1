from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SPEAK_IT_SAR

from sartool import default_catalog, parse, serialize, validate
from sartool.ast import ArgBinding, ComponentInst, ComponentRef, EventBlock, EventRef, SarApp, Screen, ValueRef
from sartool.ast import ActionInst
from sartool.preprocess import LiteralDict
from sartool.synthesizer import SynthConfig, synthesize_one


def codes(app, literals=None):
    return [d.code for d in validate(app, default_catalog(), literals)]


def speak_it_app() -> SarApp:
    return SarApp((Screen(
        (ComponentInst("textbox", 1), ComponentInst("button", 1, (ArgBinding("text", "string0"),)),
         ComponentInst("text2speech", 1)),
        (EventBlock(EventRef(ComponentRef("button", 1), "clicked"),
                    (ActionInst("speak", None, (ValueRef.of_property(ComponentRef("textbox", 1), "text"),)),)),),
    ),))


def test_serialize_minimal_screen():
    app = SarApp((Screen((ComponentInst("button", 1),), ()),))
    assert serialize(app) == "<complist> <button> </complist> <code> </code>"


def test_serialize_speak_it():
    assert serialize(speak_it_app()) == SPEAK_IT_SAR


def test_serialize_two_textboxes_and_plus_button():
    literals = LiteralDict()
    app = parse('<complist> <textbox> <textbox> <button> + </button> </complist>', literals=literals)
    assert serialize(app) == "<complist> <textbox> <textbox> <button> string0 </button> </complist>"
    assert dict(literals) == {"string0": "+"}


def test_speak_it_validates_cleanly():
    assert codes(speak_it_app(), {"string0": "Speak"}) == []


def test_two_text2speech_is_a_singleton_violation():
    app = parse("<complist> <text2speech> <text2speech> </complist>")
    assert "SINGLETON_VIOLATION" in codes(app)


def test_event_on_undeclared_button_dangles():
    app = parse("<complist> <button> <text2speech> </complist> <code> <button2_clicked> <speak> string0 </speak> "
                "</button2_clicked> </code>")
    assert "DANGLING_COMPONENT_REF" in codes(app)


def test_unbound_placeholder_is_reported_only_with_literals():
    app = parse("<complist> <button> string0 </button> </complist>")
    assert codes(app) == []
    assert codes(app, {}) == ["MISSING_LITERAL"]


def test_speak_arity_is_checked_after_parsing():
    app = parse("<complist> <text2speech> <button> </complist> <code> <button1_clicked> "
                "<speak> string0 string1 </speak> </button1_clicked> </code>")
    assert "ARITY_MISMATCH" in codes(app)


def test_duplicate_event_handler():
    block = "<button1_clicked> <speak> string0 </speak> </button1_clicked>"
    app = parse(f"<complist> <button> <text2speech> </complist> <code> {block} {block} </code>")
    assert "DUPLICATE_EVENT" in codes(app)


def test_placeholders_in_first_use_order():
    app = parse("<complist> <button> string1 </button> <text2speech> </complist> <code> <button1_clicked> "
                "<speak> string0 </speak> </button1_clicked> </code>")
    assert app.placeholders() == ["string1", "string0"]


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 10**6), lo=st.integers(1, 4), extra=st.integers(0, 3), screens=st.integers(1, 3))
def test_parse_serialize_round_trip(seed, lo, extra, screens):
    cfg = SynthConfig(seed=seed, components=(lo, lo + extra), screens=(1, screens))
    ex = synthesize_one(cfg, 0)
    app = parse(ex.sar, literals=LiteralDict(ex.literals))
    assert serialize(app) == ex.sar
    assert parse(serialize(app)) == app
