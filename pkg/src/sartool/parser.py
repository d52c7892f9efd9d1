"""Tokenizer and recursive-descent parser for SAR text.

The grammar is LL(1) once an opening tag has been classified against the
catalog: a component tag opens an argument list only when the next token is
a value or one of that kind's argument tags, and an action tag expects a
closing tag only when its catalog arity is non-zero.

Accepted relaxations of the printed grammar: the ``<code>`` section may be
omitted or empty, the component list may be empty, and zero-arity actions
(``<player1_start>``) are written bare. Alias spellings ``<button1clicked>``
and ``<textboxtext1>`` parse to the canonical forms.
"""

from __future__ import annotations

import re
from functools import cached_property
from typing import NamedTuple, Sequence

from .ast import (
    ActionInst,
    ArgBinding,
    ComponentInst,
    ComponentRef,
    EventBlock,
    EventRef,
    SarApp,
    Screen,
    ValueRef,
    is_placeholder,
)
from .catalog import Catalog, default_catalog
from .errors import SarSyntaxError
from .preprocess import NUMBER_RE, LiteralDict

NEXT_TOKENS = ("<NEXT>", "<next>")
_TOKEN_RE = re.compile(r"\S+")


class Token(NamedTuple):
    text: str
    start: int
    end: int

    @property
    def span(self) -> tuple[int, int]:
        return (self.start, self.end)


def tokenize(source: str) -> list[Token]:
    return [Token(m.group(0), m.start(), m.end()) for m in _TOKEN_RE.finditer(source)]


def _tag(text: str) -> tuple[str, bool] | None:
    """(name, is_closing) for tag tokens, None for bare values."""
    if len(text) > 2 and text[0] == "<" and text[-1] == ">":
        inner = text[1:-1]
        if inner.startswith("/"):
            return inner[1:], True
        return inner, False
    return None


class _Grammar:
    """Catalog-derived token classifiers, built once per catalog."""

    _cache: dict[int, _Grammar] = {}

    def __init__(self, catalog: Catalog):
        self.catalog = catalog
        kinds = sorted(catalog.entries, key=len, reverse=True)
        kind_alt = "|".join(map(re.escape, kinds))
        events = sorted({e for entry in catalog.entries.values() for e in entry.events}, key=len, reverse=True)
        props = sorted({v for entry in catalog.entries.values() for v in entry.values}, key=len, reverse=True)
        ev_alt = "|".join(map(re.escape, events)) or "(?!)"
        prop_alt = "|".join(map(re.escape, props)) or "(?!)"
        self.event_re = re.compile(rf"(?P<kind>{kind_alt})(?P<index>[1-9][0-9]*)_?(?P<event>{ev_alt})")
        self.loose_event_re = re.compile(rf"(?P<kind>{kind_alt})(?P<index>[1-9][0-9]*)?_?(?P<event>{ev_alt})")
        self.instance_re = re.compile(rf"(?P<kind>{kind_alt})(?P<index>[1-9][0-9]*)(?:_(?P<suffix>[a-z0-9_]+))?")
        self.prop_re = re.compile(
            rf"(?P<kind>{kind_alt})(?:(?P<index>[1-9][0-9]*)(?P<prop>{prop_alt})"
            rf"|(?P<prop2>{prop_alt})(?P<index2>[1-9][0-9]*))"
        )
        self.suffixes = {
            kind: {a.suffix: a for a in entry.actions.values() if a.token is None}
            for kind, entry in catalog.entries.items()
        }

    @classmethod
    def of(cls, catalog: Catalog) -> _Grammar:
        g = cls._cache.get(id(catalog))
        if g is None or g.catalog is not catalog:
            g = cls._cache[id(catalog)] = cls(catalog)
        return g

    def event(self, name: str) -> EventRef | None:
        m = self.event_re.fullmatch(name)
        if m is None:
            return None
        return EventRef(ComponentRef(m["kind"], int(m["index"])), m["event"])

    def action(self, name: str):
        """(ActionSpec, target or None) for an action tag name."""
        spec = self.catalog.fixed_tokens.get(name)
        if spec is not None:
            return spec, None
        m = self.instance_re.fullmatch(name)
        if m is None:
            return None
        spec = self.suffixes.get(m["kind"], {}).get(m["suffix"] or "")
        if spec is None:
            return None
        return spec, ComponentRef(m["kind"], int(m["index"]))

    def prop(self, name: str) -> ValueRef | None:
        m = self.prop_re.fullmatch(name)
        if m is None:
            return None
        kind = m["kind"]
        prop = m["prop"] or m["prop2"]
        index = int(m["index"] or m["index2"])
        if prop not in self.catalog.lookup(kind).values:
            return None
        return ValueRef.of_property(ComponentRef(kind, index), prop)


class _Parser:
    def __init__(self, tokens: Sequence[Token], catalog: Catalog, literals: LiteralDict, end: int):
        self.toks = list(tokens)
        self.pos = 0
        self.catalog = catalog
        self.g = _Grammar.of(catalog)
        self.literals = literals
        self.end = end

    @cached_property
    def reserved(self) -> list[str]:
        return [t.text for t in self.toks if is_placeholder(t.text)]

    # token helpers
    def peek(self) -> Token | None:
        return self.toks[self.pos] if self.pos < len(self.toks) else None

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail("unexpected end of input")
        self.pos += 1
        return tok

    def fail(self, message: str, tok: Token | None = None):
        span = tok.span if tok is not None else (self.end, self.end)
        raise SarSyntaxError(message, span)

    def expect(self, text: str, context: str) -> Token:
        tok = self.peek()
        if tok is None:
            self.fail(f"expected {text} {context}, found end of input")
        if tok.text != text:
            self.fail(f"expected {text} {context}, found {tok.text}", tok)
        self.pos += 1
        return tok

    def literal(self, tok: Token, typ: str) -> str:
        if is_placeholder(tok.text):
            return tok.text
        family = "number" if typ == "number" and NUMBER_RE.fullmatch(tok.text) else "string"
        return self.literals.add(tok.text, family, self.reserved)

    # grammar
    def app(self) -> SarApp:
        screens = [self.screen()]
        while self.peek() is not None and self.peek().text in NEXT_TOKENS:
            self.advance()
            screens.append(self.screen())
        tok = self.peek()
        if tok is not None:
            self.fail(f"unexpected token {tok.text} after end of screen", tok)
        return SarApp(tuple(screens))

    def screen(self) -> Screen:
        self.expect("<complist>", "to open a screen")
        comps: list[ComponentInst] = []
        counts: dict[str, int] = {}
        while True:
            tok = self.peek()
            if tok is None:
                self.fail("unclosed <complist>")
            if tok.text == "</complist>":
                self.advance()
                break
            tag = _tag(tok.text)
            if tag == ("code", False):
                self.fail("misplaced <code>: component list is still open", tok)
            if tag is None or tag[1] or tag[0] not in self.catalog:
                self.fail(f"unknown token {tok.text} in component list", tok)
            self.advance()
            kind = tag[0]
            counts[kind] = counts.get(kind, 0) + 1
            comps.append(self.component(kind, counts[kind], tok))
        code = None
        tok = self.peek()
        if tok is not None and tok.text == "<code>":
            self.advance()
            blocks = []
            while True:
                tok = self.peek()
                if tok is None:
                    self.fail("unclosed <code>")
                if tok.text == "</code>":
                    self.advance()
                    break
                blocks.append(self.event_block())
            code = tuple(blocks)
        return Screen(tuple(comps), code)

    def component(self, kind: str, index: int, open_tok: Token) -> ComponentInst:
        schema = self.catalog.lookup(kind).args
        names = {a.name for a in schema}
        nxt = self.peek()
        if nxt is None:
            return ComponentInst(kind, index)
        tag = _tag(nxt.text)
        if tag is not None and not (tag[0] in names and not tag[1]):
            return ComponentInst(kind, index)
        args: list[ArgBinding] = []
        bound: set[str] = set()
        while True:
            tok = self.peek()
            if tok is None:
                self.fail(f"unclosed {open_tok.text}")
            if tok.text == f"</{kind}>":
                self.advance()
                break
            tag = _tag(tok.text)
            if tag is None:
                slot = next((a for a in schema if a.name not in bound), None)
                if slot is None:
                    self.fail(f"too many arguments for {kind}", tok)
                self.advance()
                args.append(ArgBinding(slot.name, self.literal(tok, slot.type)))
                bound.add(slot.name)
            elif not tag[1] and tag[0] in names:
                self.advance()
                if tag[0] in bound:
                    self.fail(f"argument {tag[0]} given twice", tok)
                val = self.peek()
                if val is None or _tag(val.text) is not None:
                    self.fail(f"argument {tok.text} needs a value", val)
                self.advance()
                slot = next(a for a in schema if a.name == tag[0])
                args.append(ArgBinding(slot.name, self.literal(val, slot.type)))
                bound.add(slot.name)
                self.expect(f"</{tag[0]}>", f"to close {tok.text}")
            else:
                self.fail(f"unexpected {tok.text} inside {open_tok.text}", tok)
        return ComponentInst(kind, index, tuple(args))

    def event_block(self) -> EventBlock:
        tok = self.advance()
        tag = _tag(tok.text)
        ev = self.g.event(tag[0]) if tag and not tag[1] else None
        if ev is None:
            self.fail(f"expected an event tag, found {tok.text}", tok)
        actions = []
        while True:
            nxt = self.peek()
            if nxt is None:
                self.fail(f"unclosed {tok.text}")
            ntag = _tag(nxt.text)
            if ntag is not None and ntag[1]:
                if self.g.event(ntag[0]) == ev:
                    self.advance()
                    break
                self.fail(f"mismatched {nxt.text} inside {tok.text}", nxt)
            actions.append(self.action())
        if not actions:
            self.fail(f"event {tok.text} has no actions", nxt)
        return EventBlock(ev, tuple(actions))

    def action(self) -> ActionInst:
        tok = self.advance()
        tag = _tag(tok.text)
        found = self.g.action(tag[0]) if tag and not tag[1] else None
        if found is None:
            self.fail(f"unknown action {tok.text}", tok)
        spec, target = found
        name = spec.name if target is not None else spec.token
        if spec.arity == 0:
            return ActionInst(name, target, ())
        values: list[ValueRef] = []
        while True:
            nxt = self.peek()
            if nxt is None:
                self.fail(f"unclosed {tok.text}")
            if nxt.text == f"</{tag[0]}>":
                self.advance()
                break
            ntag = _tag(nxt.text)
            if ntag is None:
                typ = spec.params[len(values)] if len(values) < spec.arity else "text"
                self.advance()
                values.append(ValueRef.literal(self.literal(nxt, typ)))
                continue
            ref = self.g.prop(ntag[0]) if not ntag[1] else None
            if ref is None:
                self.fail(f"unexpected {nxt.text} inside {tok.text}", nxt)
            self.advance()
            values.append(ref)
        if not values:
            self.fail(f"{tok.text} needs a value", nxt)
        return ActionInst(name, target, tuple(values))


def parse(source: str | Sequence[Token], catalog: Catalog | None = None, literals: LiteralDict | None = None) -> SarApp:
    """Parse SAR text (or pre-split tokens) into a :class:`SarApp`.

    Raw literal words inside tags (``<button> tweet </button>``) are bound to
    fresh ``string<N>`` placeholders in ``literals`` when one is supplied.
    """
    catalog = catalog or default_catalog()
    if isinstance(source, str):
        tokens = tokenize(source)
        end = len(source)
    else:
        tokens = list(source)
        end = tokens[-1].end if tokens else 0
    if literals is None:
        literals = LiteralDict()
    return _Parser(tokens, catalog, literals, end).app()


def parse_sar(source: str, catalog: Catalog | None = None) -> tuple[SarApp, LiteralDict]:
    """Parse and also return the literals interned from raw words."""
    literals = LiteralDict()
    return parse(source, catalog, literals), literals


def parse_event_token(name: str, catalog: Catalog | None = None) -> EventRef | None:
    """``button1_clicked`` / ``<button1clicked>`` / ``accelerometer_shaken`` -> EventRef, or None.

    Outside SAR text the instance number may be left out; it defaults to 1.
    """
    name = name.strip()
    if name.startswith("<") and name.endswith(">"):
        name = name[1:-1]
    m = _Grammar.of(catalog or default_catalog()).loose_event_re.fullmatch(name)
    if m is None:
        return None
    return EventRef(ComponentRef(m["kind"], int(m["index"] or 1)), m["event"])
