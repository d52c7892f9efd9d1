"""Parallel NL/SAR corpus synthesis, lexicon mutation and corpus splitting.

Every example is generated from its own ``random.Random(f"{seed}:{i}")``
stream, so example ``i`` never depends on how many examples precede it.
The NL side is assembled from the snippet tables in :mod:`sartool.snippets`;
placeholders are handed out in the order they appear in the sentence, which
is also the order :func:`sartool.preprocess.extract_literals` would assign.
"""

from __future__ import annotations

import json
import math
import random
import re
from dataclasses import asdict, dataclass, field, fields
from decimal import Decimal
from pathlib import Path
from typing import Iterable, Sequence

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
)
from .catalog import ActionSpec, Catalog, default_catalog, load_catalog, load_json_resource
from .errors import ConfigError
from .preprocess import LiteralDict
from .snippets import Snippets, article, default_snippets, load_snippets, plural


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    components: tuple[int, int] = (1, 4)
    screens: tuple[int, int] = (1, 1)
    max_repeats: int = 3
    kinds: tuple[str, ...] | None = None  # None: every catalog kind
    count_bias: float = 2.0  # P(count = c) is proportional to c ** count_bias
    arg_prob: float = 0.35
    event_prob: float = 0.85
    max_actions: int = 2
    literal_prob: float = 0.5  # literal vs component property for text/number values
    modifier_prob: float = 0.3
    group_prob: float = 0.5  # "two buttons" instead of "a button, a button"
    mutation_rate: float = 0.0
    snippets: str | None = None
    catalog: str | None = None

    @classmethod
    def from_dict(cls, raw: dict) -> SynthConfig:
        known = {f.name for f in fields(cls)}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
        data = dict(raw)
        for key in ("components", "screens"):
            if key in data:
                data[key] = tuple(data[key])
        if data.get("kinds") is not None:
            data["kinds"] = tuple(data["kinds"])
        return cls(**data)

    @classmethod
    def from_file(cls, path: str | Path) -> SynthConfig:
        try:
            return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
        except (OSError, json.JSONDecodeError, TypeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ParallelExample:
    nl: str
    sar: str
    literals: LiteralDict = field(hash=False, compare=False)
    seed: int = 0
    index: int = 0

    def to_line(self) -> str:
        return f"{_one_line(self.nl)}\t{self.sar}\t{self.literals.to_json()}"

    @classmethod
    def from_line(cls, line: str, index: int = 0) -> ParallelExample:
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 3:
            raise ValueError(f"corpus line {index + 1}: expected 3 tab-separated fields, got {len(parts)}")
        return cls(parts[0], parts[1], LiteralDict.from_json(parts[2]), index=index)


def _one_line(text: str) -> str:
    return " ".join(text.split())


# ---------------------------------------------------------------- synthesis


class _Example:
    """Mutable scratch state for one example."""

    def __init__(self, rng: random.Random, cfg: SynthConfig, catalog: Catalog, snippets: Snippets):
        self.rng = rng
        self.cfg = cfg
        self.catalog = catalog
        self.sn = snippets
        self.literals = LiteralDict()
        self.sentences: list[str] = []

    def literal(self, family: str, pool: str) -> str:
        value = self.rng.choice(self.sn.literal_pools[pool])
        return self.literals.add(Decimal(value) if family == "number" else value, family)

    # declarations
    def component_phrase(self, comp: ComponentInst) -> str:
        rng, sn = self.rng, self.sn
        noun = rng.choice(sn.nouns(comp.kind))
        mods = sn.modifiers(comp.kind)
        if mods and rng.random() < self.cfg.modifier_prob:
            noun = f"{rng.choice(mods)} {noun}"
        parts = [f"{article(noun)} {noun}"]
        phrases = [rng.choice(sn.args[a.name]).format(value=a.value) for a in comp.args]
        if phrases:
            parts.append(" and ".join(phrases))
        return " ".join(parts)

    def sample_args(self, kind: str) -> tuple[ArgBinding, ...]:
        out = []
        for spec in self.catalog.lookup(kind).args:
            if self.rng.random() < self.cfg.arg_prob:
                family = "number" if spec.type == "number" else "string"
                out.append(ArgBinding(spec.name, self.literal(family, spec.type)))
        return tuple(out)

    def declare(self, kinds: list[str]) -> tuple[list[ComponentInst], list[str]]:
        """Build component instances and their phrases; placeholders follow phrase order."""
        comps: list[ComponentInst] = []
        phrases: list[str] = []
        counts: dict[str, int] = {}
        i = 0
        while i < len(kinds):
            kind = kinds[i]
            run = 1
            while i + run < len(kinds) and kinds[i + run] == kind:
                run += 1
            grouped = run >= 2 and run in self.sn.cardinals.values() and self.rng.random() < self.cfg.group_prob
            if grouped:
                word = next(w for w, v in self.sn.cardinals.items() if v == run)
                noun = plural(self.rng.choice(self.sn.nouns(kind)))
                phrases.append(f"{word} {noun}")
                for _ in range(run):
                    counts[kind] = counts.get(kind, 0) + 1
                    comps.append(ComponentInst(kind, counts[kind]))
                i += run
                continue
            counts[kind] = counts.get(kind, 0) + 1
            comp = ComponentInst(kind, counts[kind], self.sample_args(kind))
            comps.append(comp)
            phrases.append(self.component_phrase(comp))
            i += 1
        return comps, phrases

    def join_list(self, items: Sequence[str]) -> str:
        if len(items) == 1:
            return items[0]
        style = self.rng.choice(("oxford", "and", "comma"))
        if style == "comma":
            return ", ".join(items)
        if len(items) == 2:
            return f"{items[0]} and {items[1]}"
        sep = ", and " if style == "oxford" else " and "
        return ", ".join(items[:-1]) + sep + items[-1]

    # references
    def noun_ref(self, ref: ComponentRef, counts: dict[str, int], nouns: list[str] | None = None) -> str:
        noun = self.rng.choice(nouns or self.sn.nouns(ref.kind))
        if counts[ref.kind] > 1:
            return f"{self.sn.ordinals[ref.index - 1]} {noun}"
        return noun

    def target_ref(self, ref: ComponentRef, counts: dict[str, int]) -> str:
        inner = self.noun_ref(ref, counts)
        if counts[ref.kind] > 1 or self.rng.random() < 0.85:
            return f"the {inner}"
        return inner

    def value_phrase(self, value: ValueRef, counts: dict[str, int]) -> str:
        if value.is_literal:
            return value.name
        entry = self.catalog.lookup(value.component.kind)
        templates = list(self.sn.values[value.prop])
        if next(iter(entry.values)) != value.prop:
            templates = [t for t in templates if t.strip() != "the {ref}"]
        return self.rng.choice(templates).format(ref=self.noun_ref(value.component, counts))

    # code
    def action_pool(self, comps: list[ComponentInst]) -> list[tuple[ActionSpec, ComponentRef]]:
        pool = []
        for comp in comps:
            for spec in self.catalog.lookup(comp.kind).actions.values():
                pool.append((spec, comp.ref))
        return pool

    def value_for(self, param: str, props: list[tuple[ComponentRef, str, str]]) -> ValueRef:
        rng = self.rng
        if param == "text":
            choices = props
            if choices and rng.random() >= self.cfg.literal_prob:
                ref, prop, _ = rng.choice(choices)
                return ValueRef.of_property(ref, prop)
            return ValueRef.literal(self.literal("string", "text"))
        if param == "number":
            choices = [p for p in props if p[2] == "number"]
            if choices and rng.random() >= self.cfg.literal_prob:
                ref, prop, _ = rng.choice(choices)
                return ValueRef.of_property(ref, prop)
            return ValueRef.literal(self.literal("number", "number"))
        return ValueRef.literal(self.literal("string", param))

    def code(self, comps: list[ComponentInst], counts: dict[str, int]) -> tuple[EventBlock, ...] | None:
        pool = self.action_pool(comps)
        if not pool:
            return None
        props = [
            (c.ref, name, spec.type)
            for c in comps
            for name, spec in self.catalog.lookup(c.kind).values.items()
        ]
        blocks = []
        for comp in comps:
            entry = self.catalog.lookup(comp.kind)
            for ev_name in entry.events:
                if self.rng.random() >= self.cfg.event_prob:
                    continue
                n_actions = self.rng.randint(1, self.cfg.max_actions)
                actions, phrases = [], []
                ev_ref = self.event_ref(comp.ref, counts)
                for _ in range(n_actions):
                    spec, target = self.rng.choice(pool)
                    values = tuple(self.value_for(p, props) for p in spec.params)
                    explicit = spec.token is None
                    actions.append(ActionInst(spec.name if explicit else spec.token, target if explicit else None, values))
                    template = self.rng.choice(self.sn.actions[spec.name])
                    slots = {}
                    if "{target}" in template:
                        slots["target"] = self.target_ref(target, counts)
                    if "{value}" in template:
                        slots["value"] = self.value_phrase(values[0], counts)
                    phrases.append(template.format(**slots))
                head = self.rng.choice(self.sn.event_templates).format(
                    starter=self.rng.choice(self.sn.starters),
                    ref=ev_ref,
                    verb=self.rng.choice(self.sn.events[ev_name]),
                )
                self.sentences.append(f"{head}, {self.join_actions(phrases)}.")
                blocks.append(EventBlock(EventRef(comp.ref, ev_name), tuple(actions)))
        return tuple(blocks) or None

    def event_ref(self, ref: ComponentRef, counts: dict[str, int]) -> str:
        extra = self.sn.event_nouns(ref.kind)
        nouns = self.sn.nouns(ref.kind) + extra if counts[ref.kind] == 1 else None
        return f"the {self.noun_ref(ref, counts, nouns)}"

    def join_actions(self, phrases: list[str]) -> str:
        if len(phrases) == 1:
            return phrases[0]
        joiner = self.rng.choice((" and ", ", ", ", then "))
        return ", ".join(phrases[:-1]) + joiner + phrases[-1]


def _capacity(kinds: Iterable[str], catalog: Catalog, max_repeats: int) -> int:
    return sum(1 if catalog.lookup(k).singleton else max_repeats for k in kinds)


def check_config(cfg: SynthConfig, catalog: Catalog, snippets: Snippets) -> list[str]:
    kinds = list(cfg.kinds) if cfg.kinds is not None else catalog.kinds
    if not kinds:
        raise ConfigError("no component kinds allowed")
    for k in kinds:
        if k not in catalog:
            raise ConfigError(f"unknown component kind {k!r} in config")
    lo, hi = cfg.components
    if lo < 1 or hi < lo:
        raise ConfigError(f"impossible component count range {cfg.components}")
    s_lo, s_hi = cfg.screens
    if s_lo < 1 or s_hi < s_lo:
        raise ConfigError(f"impossible screen count range {cfg.screens}")
    if cfg.max_repeats < 1 or cfg.max_actions < 1:
        raise ConfigError("max_repeats and max_actions must be at least 1")
    if lo > _capacity(kinds, catalog, cfg.max_repeats):
        raise ConfigError(f"cannot place {lo} components with kinds {kinds} and max_repeats {cfg.max_repeats}")
    if s_hi > 1 and not snippets.screen_intros:
        raise ConfigError("multi-screen synthesis needs a non-empty screen_intros table")
    for name in ("arg_prob", "event_prob", "literal_prob", "modifier_prob", "group_prob", "mutation_rate"):
        p = getattr(cfg, name)
        if not 0.0 <= p <= 1.0:
            raise ConfigError(f"{name} must lie in [0, 1], got {p}")
    if cfg.count_bias < 0:
        raise ConfigError("count_bias must be non-negative")
    return kinds


def _resources(cfg: SynthConfig) -> tuple[Catalog, Snippets]:
    catalog = load_catalog(cfg.catalog) if cfg.catalog else default_catalog()
    if cfg.snippets or cfg.catalog:
        snippets = load_snippets(cfg.snippets, catalog)
    else:
        snippets = default_snippets()
    return catalog, snippets


def synthesize_one(cfg: SynthConfig, index: int, catalog: Catalog | None = None, snippets: Snippets | None = None,
                   lexicon: Lexicon | None = None) -> ParallelExample:
    if catalog is None or snippets is None:
        catalog, snippets = _resources(cfg)
    kinds = check_config(cfg, catalog, snippets)
    rng = random.Random(f"{cfg.seed}:{index}")
    ex = _Example(rng, cfg, catalog, snippets)
    screens = []
    lo, hi = cfg.components
    sizes = list(range(lo, hi + 1))
    weights = [c ** cfg.count_bias for c in sizes]
    for s in range(rng.randint(*cfg.screens)):
        n = rng.choices(sizes, weights)[0]
        chosen = _sample_kinds(rng, n, kinds, catalog, cfg.max_repeats)
        comps, phrases = ex.declare(chosen)
        intro = rng.choice(snippets.intros if s == 0 else snippets.screen_intros)
        ex.sentences.append(f"{intro} {ex.join_list(phrases)}.")
        counts: dict[str, int] = {}
        for c in comps:
            counts[c.kind] = counts.get(c.kind, 0) + 1
        screens.append(Screen(tuple(comps), ex.code(comps, counts)))
    app = SarApp(tuple(screens))
    nl = " ".join(ex.sentences)
    if cfg.mutation_rate > 0:
        nl = mutate(nl, cfg.mutation_rate, lexicon or default_lexicon(), mutation_rng(cfg.seed, index),
                    snippets.keywords)
    return ParallelExample(nl, serialize(app, catalog), ex.literals, cfg.seed, index)


def _sample_kinds(rng: random.Random, n: int, kinds: list[str], catalog: Catalog, max_repeats: int) -> list[str]:
    counts: dict[str, int] = {}
    out = []
    for _ in range(n):
        avail = [k for k in kinds if counts.get(k, 0) < (1 if catalog.lookup(k).singleton else max_repeats)]
        if not avail:
            break
        k = rng.choice(avail)
        counts[k] = counts.get(k, 0) + 1
        out.append(k)
    return out


def synthesize(config: SynthConfig, n: int) -> list[ParallelExample]:
    """Generate exactly ``n`` examples; example ``i`` depends only on ``(config.seed, i)``."""
    if n < 0:
        raise ConfigError("n must be non-negative")
    catalog, snippets = _resources(config)
    check_config(config, catalog, snippets)
    lexicon = default_lexicon() if config.mutation_rate > 0 else None
    return [synthesize_one(config, i, catalog, snippets, lexicon) for i in range(n)]


# ---------------------------------------------------------------- mutation

TOKEN_RE = re.compile(r"[A-Za-z0-9_]+")


@dataclass
class Lexicon:
    """Word -> same-class alternatives. Class names are informational."""

    classes: dict

    def __post_init__(self) -> None:
        self._table: dict[str, tuple[str, ...]] = {}
        for cls_name, words in self.classes.items():
            for word, alts in words.items():
                alts = tuple(a for a in alts if a.lower() != word.lower())
                if not alts:
                    raise ConfigError(f"lexicon entry {cls_name}.{word} has no alternatives")
                self._table[word.lower()] = alts

    def alternatives(self, word: str) -> tuple[str, ...]:
        return self._table.get(word.lower(), ())

    def __contains__(self, word: str) -> bool:
        return word.lower() in self._table


def load_lexicon(path: str | Path | None = None) -> Lexicon:
    if path is None:
        return default_lexicon()
    return Lexicon(json.loads(Path(path).read_text(encoding="utf-8"))["classes"])


_DEFAULT_LEXICON: Lexicon | None = None


def default_lexicon() -> Lexicon:
    global _DEFAULT_LEXICON
    if _DEFAULT_LEXICON is None:
        _DEFAULT_LEXICON = Lexicon(load_json_resource("lexicon.json")["classes"])
    return _DEFAULT_LEXICON


def mutation_rng(seed, index: int) -> random.Random:
    return random.Random(f"{seed}:mutate:{index}")


def mutate(nl: str, rate: float, lexicon: Lexicon, rng: random.Random, keywords: Iterable[str] | None = None) -> str:
    """Swap about ``rate * len(nl.split())`` lexicon words for same-class alternatives.

    Placeholders and component keywords are never touched. All random draws
    happen before ``rate`` is consulted, so for a fixed rng state the words
    changed at a lower rate are a subset of those changed at a higher one.
    """
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"rate must lie in [0, 1], got {rate}")
    protected = frozenset(w.lower() for w in (default_snippets().keywords if keywords is None else keywords))
    spots = [
        m for m in TOKEN_RE.finditer(nl)
        if not is_placeholder(m.group(0)) and m.group(0).lower() not in protected and m.group(0) in lexicon
    ]
    order = list(range(len(spots)))
    rng.shuffle(order)
    u = rng.random()
    picks = [rng.choice(lexicon.alternatives(m.group(0))) for m in spots]
    budget = rate * len(nl.split())
    k = min(len(spots), math.floor(budget) + (1 if u < budget - math.floor(budget) else 0))
    chosen = sorted(order[:k])
    out, pos = [], 0
    for i in chosen:
        m = spots[i]
        word = picks[i]
        if m.group(0)[0].isupper():
            word = word[0].upper() + word[1:]
        out.append(nl[pos:m.start()])
        out.append(word)
        pos = m.end()
    out.append(nl[pos:])
    return "".join(out)


def mutate_corpus(corpus: Sequence[ParallelExample], rate: float, seed=0, lexicon: Lexicon | None = None,
                  keywords: Iterable[str] | None = None) -> list[ParallelExample]:
    lexicon = lexicon or default_lexicon()
    keywords = default_snippets().keywords if keywords is None else frozenset(keywords)
    return [
        ParallelExample(mutate(ex.nl, rate, lexicon, mutation_rng(seed, i), keywords), ex.sar, ex.literals,
                        ex.seed, ex.index)
        for i, ex in enumerate(corpus)
    ]


# ---------------------------------------------------------------- splitting


def parse_ratios(text: str) -> tuple[float, ...]:
    """``"8:1:1"`` or ``"0.8,0.1,0.1"`` -> normalized ratios."""
    parts = [p for p in re.split(r"[:,/]", text) if p.strip()]
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        raise ConfigError(f"bad ratios {text!r}") from None
    if len(vals) != 3 or any(v < 0 for v in vals) or sum(vals) <= 0:
        raise ConfigError(f"ratios need three non-negative parts, got {text!r}")
    total = sum(vals)
    return tuple(v / total for v in vals)


def _targets(n: int, ratios: Sequence[float]) -> list[int]:
    raw = [n * r for r in ratios]
    base = [math.floor(x) for x in raw]
    short = n - sum(base)
    by_remainder = sorted(range(len(raw)), key=lambda i: (-(raw[i] - base[i]), i))
    for i in by_remainder[:short]:
        base[i] += 1
    return base


def split(corpus: Sequence[ParallelExample], ratios: Sequence[float] = (0.8, 0.1, 0.1), seed=0):
    """Shuffle and cut into (train, valid, test).

    Identical (nl, sar) pairs travel together, so no pair lands in two
    splits; sizes hit the largest-remainder targets whenever the duplicate
    groups allow it.
    """
    ratios = tuple(ratios)
    if len(ratios) != 3 or any(r < 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise ConfigError(f"ratios must be three non-negative numbers summing to 1, got {ratios}")
    groups: dict[tuple[str, str], list[ParallelExample]] = {}
    for ex in corpus:
        groups.setdefault((ex.nl, ex.sar), []).append(ex)
    order = list(groups.values())
    random.Random(f"{seed}:split").shuffle(order)
    room = _targets(len(corpus), ratios)
    parts: list[list[ParallelExample]] = [[], [], []]
    for group in order:
        j = next((j for j in range(3) if room[j] >= len(group)), None)
        if j is None:
            j = max(range(3), key=lambda j: (room[j], -j))
        parts[j].extend(group)
        room[j] -= len(group)
    return tuple(parts)


# ---------------------------------------------------------------- corpus files


def write_corpus(corpus: Iterable[ParallelExample], path_or_file) -> None:
    text = "".join(ex.to_line() + "\n" for ex in corpus)
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        Path(path_or_file).write_text(text, encoding="utf-8")


def read_corpus(source) -> list[ParallelExample]:
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text(encoding="utf-8")
    return [ParallelExample.from_line(line, i) for i, line in enumerate(text.splitlines()) if line.strip()]
