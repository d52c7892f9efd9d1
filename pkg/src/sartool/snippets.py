"""Natural-language snippet tables and the vocabulary derived from them.

The synthesizer samples phrasings from these tables; the rule-based
frontend builds its recognizer from the very same tables, which is what
makes it an exact inverse on unmutated synthetic text.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .catalog import Catalog, default_catalog, load_json_resource
from .errors import ConfigError

STOPWORDS = frozenset(
    "a an the to of in on is gets with that this for from into at it its by".split()
)
WORD_RE = re.compile(r"[a-z0-9_]+|[,;]")
SLOT_RE = re.compile(r"\{(\w+)\}")


def words_of(text: str) -> list[str]:
    return WORD_RE.findall(text.lower())


def plural(noun: str) -> str:
    head, _, last = noun.rpartition(" ")
    if last.endswith(("s", "x", "z", "ch", "sh")):
        last += "es"
    else:
        last += "s"
    return f"{head} {last}" if head else last


def article(word: str) -> str:
    return "an" if word[:1].lower() in "aeiou" else "a"


@dataclass
class Snippets:
    data: dict
    catalog: Catalog = field(default_factory=default_catalog)

    def __post_init__(self) -> None:
        d = self.data
        self.intros: list[str] = list(d["intros"])
        self.screen_intros: list[str] = list(d.get("screen_intros", []))
        self.screen_words = [w.lower() for w in d.get("screen_words", ["screen"])]
        self.starters: list[str] = list(d["event_starters"])
        self.event_templates: list[str] = list(d["event_templates"])
        self.ordinals: list[str] = list(d["ordinals"])
        self.cardinals: dict[str, int] = dict(d.get("cardinals", {}))
        self.components: dict[str, dict] = d["components"]
        self.args: dict[str, list[str]] = d["args"]
        self.events: dict[str, list[str]] = d["events"]
        self.values: dict[str, list[str]] = d["values"]
        self.actions: dict[str, list[str]] = d["actions"]
        self.literal_pools: dict[str, list[str]] = d["literal_pools"]
        self.check()

    def check(self) -> None:
        """Every catalog capability needs a non-empty phrase table."""
        cat = self.catalog
        for name, table in (("intros", self.intros), ("event_starters", self.starters),
                            ("event_templates", self.event_templates), ("ordinals", self.ordinals)):
            if not table:
                raise ConfigError(f"snippet table {name!r} is empty")
        for kind, entry in cat.entries.items():
            if not self.components.get(kind, {}).get("nouns"):
                raise ConfigError(f"no nouns for component {kind!r}")
            for arg in entry.args:
                if not self.args.get(arg.name):
                    raise ConfigError(f"no phrasing for argument {kind}.{arg.name}")
            for ev in entry.events:
                if not self.events.get(ev):
                    raise ConfigError(f"no verbs for event {kind}.{ev}")
            for v in entry.values:
                if not self.values.get(v):
                    raise ConfigError(f"no phrasing for value {kind}.{v}")
            for action in entry.actions.values():
                templates = self.actions.get(action.name)
                if not templates:
                    raise ConfigError(f"no phrasing for action {kind}.{action.name}")
                for t in templates:
                    slots = set(SLOT_RE.findall(t))
                    if ("value" in slots) != (action.arity == 1) or action.arity > 1:
                        raise ConfigError(f"template {t!r} does not fit {kind}.{action.name}")
                    if ("target" in slots) == (action.token is not None):
                        raise ConfigError(f"template {t!r} target slot does not fit {kind}.{action.name}")
        for family in ("text", "number", "color", "asset"):
            if not self.literal_pools.get(family):
                raise ConfigError(f"literal pool {family!r} is empty")

    def nouns(self, kind: str) -> list[str]:
        return list(self.components[kind]["nouns"])

    def modifiers(self, kind: str) -> list[str]:
        return list(self.components[kind].get("modifiers", []))

    def event_nouns(self, kind: str) -> list[str]:
        return list(self.components[kind].get("event_nouns", []))

    @property
    def noun_phrases(self) -> dict[tuple[str, ...], tuple[str, bool]]:
        """word tuple -> (kind, is_plural), singular and plural forms."""
        table: dict[tuple[str, ...], tuple[str, bool]] = {}
        for kind, spec in self.components.items():
            for noun in spec["nouns"]:
                table[tuple(words_of(noun))] = (kind, False)
                table.setdefault(tuple(words_of(plural(noun))), (kind, True))
        return table

    @property
    def keywords(self) -> frozenset[str]:
        """Words that identify components and instances; never mutated."""
        out: set[str] = set()
        for words in self.noun_phrases:
            out.update(words)
        for spec in self.components.values():
            out.update(w for n in spec.get("event_nouns", []) for w in words_of(n))
        out.update(o.lower() for o in self.ordinals)
        out.update(self.screen_words)
        return frozenset(out)

    @property
    def quantity_words(self) -> frozenset[str]:
        """First words of component nouns; a number right before one is a count."""
        return frozenset(words[0] for words in self.noun_phrases)

    @property
    def attr_words(self) -> dict[str, str]:
        """Argument/property marker word -> canonical attribute name."""
        out: dict[str, str] = {}
        for name, phrases in self.args.items():
            out[name] = name
            for p in phrases:
                before = [w for w in words_of(p.split("{value}")[0]) if w not in STOPWORDS]
                if before:
                    out.setdefault(before[-1], name)
        for name in self.values:
            out.setdefault(name, name)
        return out


def load_snippets(path: str | Path | None = None, catalog: Catalog | None = None) -> Snippets:
    if path is None and catalog is None:
        return default_snippets()
    data = load_json_resource("snippets.json") if path is None else json.loads(Path(path).read_text("utf-8"))
    return Snippets(data, catalog or default_catalog())


@lru_cache(maxsize=1)
def default_snippets() -> Snippets:
    return Snippets(load_json_resource("snippets.json"), default_catalog())
