"""Blocks files: Blockly XML with one event handler block per SAR event."""

from __future__ import annotations

import random
import string
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from ..ast import ActionInst, Screen, ValueRef, resolve_target
from ..catalog import ActionSpec, Catalog, default_catalog
from ..errors import DanglingRef, NotFound, UnsupportedAction, UnsupportedValue
from .scm import literal_value, render_literal

XHTML_NS = "http://www.w3.org/1999/xhtml"
# Blockly's id soup: printable ASCII minus quotes, ampersand, angle brackets and backslash.
ID_CHARS = "!#$%()*+,-./:;=?@[]^_`{|}~" + string.ascii_letters + string.digits
ID_LENGTH = 20
EVENT_X = -184
EVENT_Y = 91
EVENT_Y_STEP = 150


def block_id(rng: random.Random) -> str:
    return "".join(rng.choice(ID_CHARS) for _ in range(ID_LENGTH))


@dataclass
class BkyDocument:
    root: ET.Element

    def text(self) -> str:
        tree = ET.ElementTree(self.root)
        ET.indent(tree, space="  ")
        return ET.tostring(self.root, encoding="unicode", short_empty_elements=False) + "\n"

    @property
    def events(self) -> list[ET.Element]:
        return [b for b in self.root.findall("block") if b.get("type") == "component_event"]

    def statement_calls(self) -> list[tuple[str, str, str, str]]:
        """(event instance, event name, instance, member) for each statement block, in run order."""
        out = []
        for ev in self.events:
            evm = ev.find("mutation")
            block = ev.find("statement[@name='DO']/block")
            while block is not None:
                m = block.find("mutation")
                member = m.get("method_name") or m.get("property_name")
                out.append((evm.get("instance_name"), evm.get("event_name"), m.get("instance_name"), member))
                block = block.find("next/block")
        return out

    @classmethod
    def from_text(cls, text: str) -> BkyDocument:
        root = ET.fromstring(text)
        for el in root.iter():
            if el.tag.startswith("{"):
                el.tag = el.tag.split("}", 1)[1]
        root.set("xmlns", XHTML_NS)
        return cls(root)


class _Emitter:
    def __init__(self, screen: Screen, literals, rng: random.Random, catalog: Catalog):
        self.screen = screen
        self.literals = literals
        self.rng = rng
        self.catalog = catalog
        self.declared = {(c.kind, c.index) for c in screen.components}

    def block(self, parent: ET.Element | None, type_: str, **attrs) -> ET.Element:
        attrib = {"type": type_, "id": block_id(self.rng), **attrs}
        return ET.Element("block", attrib) if parent is None else ET.SubElement(parent, "block", attrib)

    def instance(self, kind: str, index: int) -> tuple[str, str]:
        if (kind, index) not in self.declared:
            raise DanglingRef(f"{kind}{index} is not declared on this screen")
        entry = self.catalog.lookup(kind)
        return entry.type_name, entry.instance_name(index)

    def event(self, block, offset: int) -> ET.Element:
        ref = block.event.component
        type_name, inst = self.instance(ref.kind, ref.index)
        spec = self.catalog.lookup(ref.kind).events.get(block.event.event)
        if spec is None:
            raise UnsupportedAction(f"{ref.kind} raises no {block.event.event!r} event")
        el = self.block(None, "component_event", x=str(EVENT_X), y=str(EVENT_Y + offset * EVENT_Y_STEP))
        ET.SubElement(el, "mutation", {
            "component_type": type_name,
            "is_generic": "false",
            "instance_name": inst,
            "event_name": spec.block_event,
        })
        ET.SubElement(el, "field", name="COMPONENT_SELECTOR").text = inst
        holder = ET.SubElement(el, "statement", name="DO")
        for i, act in enumerate(block.actions):
            stmt = self.action(holder, act)
            if i + 1 < len(block.actions):
                holder = ET.SubElement(stmt, "next")
        return el

    def action_spec(self, act: ActionInst) -> tuple[ActionSpec, str, str]:
        target = resolve_target(act, self.catalog)
        if target is None:
            raise UnsupportedAction(f"unknown action {act.action!r}")
        try:
            spec = self.catalog.action(target.kind, act.action)
        except NotFound:
            raise UnsupportedAction(f"{target.kind} has no action {act.action!r}") from None
        type_name, inst = self.instance(target.kind, target.index)
        return spec, type_name, inst

    def action(self, parent: ET.Element, act: ActionInst) -> ET.Element:
        spec, type_name, inst = self.action_spec(act)
        if spec.op == "set":
            el = self.block(parent, "component_set_get")
            ET.SubElement(el, "mutation", {
                "component_type": type_name,
                "set_or_get": "set",
                "property_name": spec.block_name,
                "is_generic": "false",
                "instance_name": inst,
            })
            ET.SubElement(el, "field", name="COMPONENT_SELECTOR").text = inst
            ET.SubElement(el, "field", name="PROP").text = spec.block_name
            self.value(ET.SubElement(el, "value", name="VALUE"), spec.params[0], act.values[0])
            return el
        el = self.block(parent, "component_method")
        ET.SubElement(el, "mutation", {
            "component_type": type_name,
            "method_name": spec.block_name,
            "is_generic": "false",
            "instance_name": inst,
        })
        ET.SubElement(el, "field", name="COMPONENT_SELECTOR").text = inst
        slot = 0
        for typ, raw in spec.const_args:
            self.constant(ET.SubElement(el, "value", name=f"ARG{slot}"), typ, raw)
            slot += 1
        for param, value in zip(spec.params, act.values):
            self.value(ET.SubElement(el, "value", name=f"ARG{slot}"), param, value)
            slot += 1
        return el

    def constant(self, parent: ET.Element, typ: str, raw: str) -> None:
        if typ == "number":
            ET.SubElement(self.block(parent, "math_number"), "field", name="NUM").text = raw
        elif typ == "color":
            block_type, hexval = self._color(raw)
            ET.SubElement(self.block(parent, block_type), "field", name="COLOR").text = hexval
        else:
            ET.SubElement(self.block(parent, "text"), "field", name="TEXT").text = raw

    def _color(self, raw: str) -> tuple[str, str]:
        found = self.catalog.color(raw)
        if found is None:
            raise UnsupportedValue(f"{raw!r} is not a known color")
        return found

    def value(self, parent: ET.Element, param: str, value: ValueRef) -> None:
        if value.is_literal:
            raw = render_literal(literal_value(self.literals, value.name))
            typ = "number" if value.name.startswith("number") and param in ("text", "number") else param
            self.constant(parent, "color" if param == "color" else typ, raw)
            return
        ref = value.component
        type_name, inst = self.instance(ref.kind, ref.index)
        vspec = self.catalog.lookup(ref.kind).values.get(value.prop)
        if vspec is None:
            raise UnsupportedValue(f"{ref.kind} exposes no value {value.prop!r}")
        el = self.block(parent, "component_set_get")
        ET.SubElement(el, "mutation", {
            "component_type": type_name,
            "set_or_get": "get",
            "property_name": vspec.property,
            "is_generic": "false",
            "instance_name": inst,
        })
        ET.SubElement(el, "field", name="COMPONENT_SELECTOR").text = inst
        ET.SubElement(el, "field", name="PROP").text = vspec.property


def emit_bky(screen: Screen, literals, rng: random.Random, *, catalog: Catalog | None = None) -> BkyDocument:
    """Build the blocks document for one screen; ids are drawn from ``rng`` in document order."""
    catalog = catalog or default_catalog()
    em = _Emitter(screen, literals, rng, catalog)
    root = ET.Element("xml", xmlns=XHTML_NS)
    for offset, block in enumerate(screen.events):
        root.append(em.event(block, offset))
    ET.SubElement(root, "yacodeblocks", {
        "ya-version": catalog.ya_version,
        "language-version": catalog.language_version,
    })
    return BkyDocument(root)
