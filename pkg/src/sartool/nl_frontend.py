"""Deterministic English to SAR translation for template-style descriptions.

The recognizer is compiled from the same snippet tables the synthesizer
samples from. A sentence is first reduced to a stream of symbols (component
nouns, ordinals, event verbs, attribute markers, placeholders, separators,
template content words); everything else, including unknown words, is
dropped. Declaration sentences are then read left to right, and each action
clause of an event sentence is matched against every action template by a
small backtracking matcher.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple

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
    serialize,
    validate,
)
from .catalog import ActionSpec, Catalog, default_catalog
from .errors import InvariantViolation, NoComponentsFound
from .preprocess import LiteralDict, extract_literals
from .snippets import SLOT_RE, STOPWORDS, Snippets, default_snippets, load_snippets, words_of

SENTENCE_RE = re.compile(r"[.;!?\n]+")
TOKEN_RE = re.compile(r"[a-z0-9_]+|,")


@dataclass(frozen=True)
class Sym:
    type: str  # KIND DEVICE ORD CARD EV STARTER ATTR LIT SEP SCREEN WORD
    word: str
    value: object = None


@dataclass
class Report:
    unmatched: list[str] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    dropped: list[str] = field(default_factory=list)

    @property
    def clean(self) -> bool:
        return not (self.unmatched or self.warnings or self.dropped)

    def as_dict(self) -> dict:
        return {"unmatched": self.unmatched, "warnings": self.warnings, "dropped": self.dropped}


class Translation(NamedTuple):
    sar: str
    literals: LiteralDict
    report: Report
    app: SarApp


@dataclass(frozen=True)
class _Pattern:
    elems: tuple[tuple[str, str | None], ...]  # ("WORD", w) | ("TARGET", None) | ("VALUE", None)
    spec: ActionSpec
    template: str
    order: int


class Recognizer:
    """Symbol tables and action patterns derived from a catalog plus snippet tables."""

    def __init__(self, catalog: Catalog | None = None, snippets: Snippets | None = None):
        self.catalog = catalog or default_catalog()
        if snippets is None:
            snippets = default_snippets() if catalog is None else load_snippets(None, self.catalog)
        self.sn = snippets
        self.nouns = snippets.noun_phrases
        self.max_noun = max(len(k) for k in self.nouns)
        self.devices: dict[tuple[str, ...], list[str]] = {}
        for kind in self.catalog.kinds:
            for noun in snippets.event_nouns(kind):
                self.devices.setdefault(tuple(words_of(noun)), []).append(kind)
        self.max_device = max((len(k) for k in self.devices), default=0)
        self.ordinals = {w.lower(): i for i, w in enumerate(snippets.ordinals, 1)}
        self.cardinals = {w.lower(): n for w, n in snippets.cardinals.items()}
        self.verbs: dict[str, list[str]] = {}
        for event, verbs in snippets.events.items():
            for v in verbs:
                self.verbs.setdefault(v.lower(), []).append(event)
        self.starters = {s.lower() for s in snippets.starters}
        self.screen_words = set(snippets.screen_words)
        self.attrs = snippets.attr_words
        self.patterns = self._compile_patterns()
        self.content_words = {w for p in self.patterns for kind, w in p.elems if kind == "WORD"}

    def _compile_patterns(self) -> list[_Pattern]:
        out = []
        order = 0
        for entry in self.catalog.entries.values():
            for spec in entry.actions.values():
                for template in self.sn.actions[spec.name]:
                    elems = []
                    pos = 0
                    for m in SLOT_RE.finditer(template):
                        elems += [("WORD", w) for w in words_of(template[pos:m.start()]) if w not in STOPWORDS]
                        elems.append(("TARGET" if m.group(1) == "target" else "VALUE", None))
                        pos = m.end()
                    elems += [("WORD", w) for w in words_of(template[pos:]) if w not in STOPWORDS]
                    out.append(_Pattern(tuple(elems), spec, template, order))
                    order += 1
        out.sort(key=lambda p: (-len(p.elems), p.order))
        return out

    # ------------------------------------------------------------ symbols

    def symbolize(self, sentence: str) -> list[Sym]:
        words = TOKEN_RE.findall(sentence.lower())
        out: list[Sym] = []
        i = 0
        while i < len(words):
            hit = self._phrase(words, i)
            if hit is not None:
                sym, width = hit
                out.append(sym)
                i += width
                continue
            w = words[i]
            i += 1
            if is_placeholder(w):
                out.append(Sym("LIT", w, w))
            elif w in self.cardinals:
                out.append(Sym("CARD", w, self.cardinals[w]))
            elif w.isdigit() and w[0] != "0":
                out.append(Sym("CARD", w, int(w)))
            elif w in self.ordinals:
                out.append(Sym("ORD", w, self.ordinals[w]))
            elif w in self.verbs:
                out.append(Sym("EV", w, tuple(self.verbs[w])))
            elif w in self.starters:
                out.append(Sym("STARTER", w))
            elif w in self.screen_words:
                out.append(Sym("SCREEN", w))
            elif w in (",", "and"):
                out.append(Sym("SEP", w))
            elif w in self.attrs:
                out.append(Sym("ATTR", w, self.attrs[w]))
            elif w in self.content_words:
                out.append(Sym("WORD", w))
        return out

    def _phrase(self, words: list[str], i: int):
        for width in range(min(self.max_noun, len(words) - i), 0, -1):
            key = tuple(words[i:i + width])
            if key in self.nouns:
                kind, is_plural = self.nouns[key]
                return Sym("KIND", " ".join(key), (kind, is_plural)), width
        for width in range(min(self.max_device, len(words) - i), 0, -1):
            key = tuple(words[i:i + width])
            if key in self.devices:
                return Sym("DEVICE", " ".join(key), tuple(self.devices[key])), width
        return None


class _ScreenState:
    def __init__(self):
        self.components: list[ComponentInst] = []
        self.blocks: dict[str, list] = {}  # event token -> [EventRef, actions]

    def count(self, kind: str) -> int:
        return sum(1 for c in self.components if c.kind == kind)

    def declared(self, ref: ComponentRef) -> bool:
        return 1 <= ref.index <= self.count(ref.kind)


class _Translator:
    def __init__(self, rec: Recognizer, literals: LiteralDict, report: Report):
        self.rec = rec
        self.catalog = rec.catalog
        self.literals = literals
        self.report = report
        self.screens: list[_ScreenState] = [_ScreenState()]
        self.found_kind = False

    @property
    def screen(self) -> _ScreenState:
        return self.screens[-1]

    def sentence(self, text: str) -> None:
        syms = self.rec.symbolize(text)
        if not syms:
            return
        if any(s.type == "KIND" for s in syms):
            self.found_kind = True
        if any(s.type == "EV" for s in syms):
            self.event_sentence(text, syms)
        elif any(s.type == "STARTER" for s in syms):
            self.report.unmatched.append(text.strip())
        else:
            self.declaration(text, syms)

    # ------------------------------------------------------------ declarations

    def declaration(self, text: str, syms: list[Sym]) -> None:
        if any(s.type == "SCREEN" for s in syms) and self.screen.components:
            self.screens.append(_ScreenState())
        pending_card: int | None = None
        last: ComponentInst | None = None
        prev: Sym | None = None
        i = 0
        while i < len(syms):
            s = syms[i]
            if s.type == "CARD":
                pending_card = s.value
            elif s.type == "KIND":
                kind, is_plural = s.value
                n = pending_card if pending_card is not None and (is_plural or pending_card == 1) else 1
                pending_card = None
                for _ in range(n):
                    last = self.add_component(kind) or last
            elif s.type == "ATTR" and i + 1 < len(syms) and syms[i + 1].type == "LIT":
                if last is None:
                    self.report.unmatched.append(f"{s.word} {syms[i + 1].word}")
                else:
                    last = self.bind(last, s.value, syms[i + 1].word, s.word)
                i += 1
            elif s.type == "LIT":
                if prev is not None and prev.type == "KIND" and last is not None:
                    last = self.bind(last, None, s.word, s.word)
                else:
                    self.report.unmatched.append(s.word)
            prev = s
            i += 1

    def add_component(self, kind: str) -> ComponentInst | None:
        screen = self.screen
        entry = self.catalog.lookup(kind)
        if entry.singleton and screen.count(kind):
            self.report.warnings.append(f"{kind} can appear only once per screen; extra mention ignored")
            return None
        comp = ComponentInst(kind, screen.count(kind) + 1)
        screen.components.append(comp)
        return comp

    def bind(self, comp: ComponentInst, name: str | None, placeholder: str, marker: str) -> ComponentInst:
        entry = self.catalog.lookup(comp.kind)
        bound = {a.name for a in comp.args}
        if name is None:
            spec = next((a for a in entry.args if a.name not in bound), None)
        else:
            spec = entry.arg(name)
        if spec is None or spec.name in bound:
            self.report.unmatched.append(f"{marker} {placeholder}".strip() if marker != placeholder else placeholder)
            return comp
        if (spec.type == "number") != placeholder.startswith("number"):
            self.report.unmatched.append(f"{marker} {placeholder}")
            return comp
        new = ComponentInst(comp.kind, comp.index, comp.args + (ArgBinding(spec.name, placeholder),))
        comps = self.screen.components
        comps[comps.index(comp)] = new
        return new

    # ------------------------------------------------------------ events

    def event_sentence(self, text: str, syms: list[Sym]) -> None:
        ev_i = next(i for i, s in enumerate(syms) if s.type == "EV")
        st_i = max((i for i in range(ev_i) if syms[i].type == "STARTER"), default=None)
        ref_start = (st_i + 1) if st_i is not None else 0
        ref_syms = [s for s in syms[ref_start:ev_i] if s.type in ("ORD", "KIND", "DEVICE")]
        event = self.event_ref(ref_syms, syms[ev_i], text)
        pre = syms[:st_i] if st_i is not None else []
        post = syms[ev_i + 1:]
        actions = []
        for clause in _split(pre) + _split(post):
            act = self.action(clause)
            if act is not None:
                actions.append(act)
        if event is None:
            return
        if not actions:
            self.report.unmatched.append(f"no action recognised for {event.token}")
            return
        slot = self.screen.blocks.setdefault(event.token, [event, []])
        slot[1].extend(actions)

    def event_ref(self, ref_syms: list[Sym], ev: Sym, text: str) -> EventRef | None:
        index = 1
        kinds: tuple[str, ...] = ()
        for s in ref_syms:
            if s.type == "ORD":
                index = s.value
            elif s.type == "KIND":
                kinds = (s.value[0],)
            elif s.type == "DEVICE":
                kinds = s.value
        if not kinds:
            self.report.unmatched.append(f"event without a component: {text.strip()}")
            return None
        for kind in kinds:
            entry = self.catalog.lookup(kind)
            names = [e for e in ev.value if e in entry.events]
            ref = ComponentRef(kind, index)
            if names and self.screen.declared(ref):
                return EventRef(ref, names[0])
        ref = ComponentRef(kinds[0], index)
        if not self.screen.declared(ref):
            self.report.dropped.append(f"{ref.name} is not declared; event ignored")
        else:
            self.report.unmatched.append(f"{kinds[0]} cannot be {ev.word}")
        return None

    def action(self, clause: list[Sym]) -> ActionInst | None:
        text = " ".join(s.word for s in clause)
        found: list[ActionInst] = []
        dangling = False
        for pat in self.rec.patterns:
            for target, values in _match(pat.elems, clause, self.rec, pat.spec):
                act = self._build(pat.spec, target, values)
                if act is None:
                    continue
                if not self._declared(act):
                    dangling = True
                    continue
                if act not in found:
                    found.append(act)
        if not found:
            if dangling:
                self.report.dropped.append(f"action refers to an undeclared component: {text}")
            else:
                self.report.unmatched.append(text)
            return None
        if len(found) > 1:
            self.report.warnings.append(f"ambiguous action {text!r}; using the first reading")
        return found[0]

    def _build(self, spec: ActionSpec, target: ComponentRef | None, values: list[ValueRef]) -> ActionInst | None:
        for param, value in zip(spec.params, values):
            if not _fits(param, value, self.catalog):
                return None
        if spec.token is not None:
            return ActionInst(spec.token, None, tuple(values))
        return ActionInst(spec.name, target, tuple(values))

    def _declared(self, act: ActionInst) -> bool:
        target = act.target
        if target is None:
            spec = self.catalog.fixed_tokens[act.action]
            target = ComponentRef(spec.kind, 1)
        if not self.screen.declared(target):
            return False
        return all(v.is_literal or self.screen.declared(v.component) for v in act.values)

    # ------------------------------------------------------------ result

    def app(self) -> SarApp:
        screens = []
        for st in self.screens:
            if not st.components:
                continue
            blocks = tuple(EventBlock(ev, tuple(acts)) for ev, acts in st.blocks.values())
            screens.append(Screen(tuple(st.components), blocks or None))
        return SarApp(tuple(screens))


def _split(syms: list[Sym]) -> list[list[Sym]]:
    out, cur = [], []
    for s in syms:
        if s.type == "SEP":
            if cur:
                out.append(cur)
            cur = []
        elif s.type not in ("STARTER", "SCREEN", "CARD"):
            cur.append(s)
    if cur:
        out.append(cur)
    return out


def _fits(param: str, value: ValueRef, catalog: Catalog) -> bool:
    if value.is_literal:
        is_number = value.name.startswith("number")
        return param == "text" or (param == "number") == is_number
    if param in ("color", "asset"):
        return False
    vtype = catalog.lookup(value.component.kind).values[value.prop].type
    return param == "text" or vtype == param


def _refs(clause: list[Sym], j: int, kind: str | None = None):
    """[ORD] KIND starting at j -> (ComponentRef, next j)."""
    index = 1
    k = j
    if k < len(clause) and clause[k].type == "ORD":
        index = clause[k].value
        k += 1
    if k < len(clause) and clause[k].type == "KIND" and not clause[k].value[1]:
        found = clause[k].value[0]
        if kind is None or found == kind:
            yield ComponentRef(found, index), k + 1


def _values(clause: list[Sym], j: int, rec: Recognizer):
    if j >= len(clause):
        return
    s = clause[j]
    if s.type == "LIT":
        yield ValueRef.literal(s.value), j + 1
        return
    for ref, k in _refs(clause, j):
        props = rec.catalog.lookup(ref.kind).values
        if not props:
            continue
        if k < len(clause) and clause[k].type == "ATTR" and clause[k].value in props:
            yield ValueRef.of_property(ref, clause[k].value), k + 1
        yield ValueRef.of_property(ref, next(iter(props))), k
    if s.type == "ATTR":
        for ref, k in _refs(clause, j + 1):
            if s.value in rec.catalog.lookup(ref.kind).values:
                yield ValueRef.of_property(ref, s.value), k


def _match(elems, clause: list[Sym], rec: Recognizer, spec: ActionSpec, i: int = 0, j: int = 0,
           target: ComponentRef | None = None, values: tuple[ValueRef, ...] = ()):
    if i == len(elems):
        if j == len(clause):
            yield target, list(values)
        return
    kind, word = elems[i]
    if kind == "WORD":
        if j < len(clause) and clause[j].word == word and clause[j].type in ("WORD", "ATTR"):
            yield from _match(elems, clause, rec, spec, i + 1, j + 1, target, values)
    elif kind == "TARGET":
        for ref, k in _refs(clause, j, spec.kind):
            yield from _match(elems, clause, rec, spec, i + 1, k, ref, values)
    else:
        for value, k in _values(clause, j, rec):
            yield from _match(elems, clause, rec, spec, i + 1, k, target, values + (value,))


_DEFAULT: Recognizer | None = None


def default_recognizer() -> Recognizer:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = Recognizer()
    return _DEFAULT


def nl_to_sar(nl: str, catalog: Catalog | None = None, literals=None, snippets: Snippets | None = None) -> Translation:
    """Translate a description into canonical SAR.

    Quoted strings and bare numbers are pulled out first; ``literals``
    supplies values for placeholders already present in ``nl``. Raises
    NoComponentsFound when nothing in the text names a component.
    """
    if catalog is None and snippets is None:
        rec = default_recognizer()
    else:
        rec = Recognizer(catalog, snippets)
    templated, found = extract_literals(nl, rec.sn.quantity_words)
    merged = LiteralDict()
    if literals:
        merged.update(literals)
    merged.update(found)
    report = Report()
    tr = _Translator(rec, merged, report)
    for sentence in SENTENCE_RE.split(templated):
        if sentence.strip():
            tr.sentence(sentence)
    app = tr.app()
    if not tr.found_kind or not app.screens:
        raise NoComponentsFound(
            "no supported component is named in the description; it may be too abstract. "
            "Name the components explicitly, e.g. 'an app with a button and a text to speech'.",
            report,
        )
    problems = validate(app, rec.catalog)
    if problems:
        raise InvariantViolation(problems)
    return Translation(serialize(app, rec.catalog), merged, report, app)
