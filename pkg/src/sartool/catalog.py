"""Component catalog: the declarative manifest every other module consults.

The manifest (``data/catalog.json``) lists each supported component kind with
its App Inventor type and version, argument schema and defaults, the events it
raises, the actions it performs, and the properties it exposes as values.
New components are added by editing the manifest; no code changes are needed
as long as they reuse the existing op kinds (``method`` / ``set``) and value
types (``text`` / ``number`` / ``color`` / ``asset``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

from .ast import ArgBinding
from .errors import ConfigError, NotFound

VALUE_TYPES = ("text", "number", "color", "asset")


@dataclass(frozen=True)
class ArgSpec:
    name: str
    type: str
    property: str
    default: str
    emit_default: bool = True


@dataclass(frozen=True)
class EventSpec:
    name: str
    block_event: str
    toggle: str | None = None


@dataclass(frozen=True)
class ValueSpec:
    name: str
    property: str
    type: str


@dataclass(frozen=True)
class ActionSpec:
    name: str
    kind: str
    op: str  # "method" or "set"
    block_name: str
    params: tuple[str, ...] = ()
    token: str | None = None  # fixed SAR token, singleton kinds only
    suffix: str | None = None
    const_args: tuple[tuple[str, str], ...] = ()
    effect: str = ""
    effect_args: tuple[str, ...] = ()
    state: tuple[tuple[str, Any], ...] = ()
    assign: str | None = None
    count: str | None = None

    @property
    def arity(self) -> int:
        return len(self.params)

    def instance_token(self, instance: str) -> str:
        """Token text (without brackets) for an instance-targeted action."""
        if self.token is not None:
            return self.token
        return f"{instance}_{self.suffix}" if self.suffix else instance


@dataclass(frozen=True)
class CatalogEntry:
    kind: str
    type_name: str
    version: str
    visible: bool
    singleton: bool
    args: tuple[ArgSpec, ...]
    events: dict[str, EventSpec] = field(hash=False)
    actions: dict[str, ActionSpec] = field(hash=False)
    values: dict[str, ValueSpec] = field(hash=False)
    state: dict[str, Any] = field(hash=False)
    container: str | None = None

    def arg(self, name: str) -> ArgSpec | None:
        for spec in self.args:
            if spec.name == name:
                return spec
        return None

    def instance_name(self, index: int) -> str:
        """App Inventor instance name, e.g. ``TextToSpeech1``."""
        return f"{self.type_name}{index}"


@dataclass(frozen=True)
class ContainerSpec:
    kind: str
    type_name: str
    version: str
    properties: tuple[tuple[str, str], ...]


class Catalog:
    def __init__(self, manifest: dict):
        self.manifest = manifest
        form = manifest["form"]
        self.form_type = form["type"]
        self.form_version = form["version"]
        self.ya_version = form["ya_version"]
        self.language_version = form["language_version"]
        self.auth_url = list(form["auth_url"])
        self.colors: dict[str, tuple[str, str]] = {
            name: (block, hexval) for name, (block, hexval) in manifest["colors"].items()
        }
        self.media: dict[str, tuple[str, ...]] = {
            family: tuple(exts) for family, exts in manifest["media"].items()
        }
        self.containers = {
            kind: ContainerSpec(kind, c["type"], c["version"], tuple(c.get("properties", {}).items()))
            for kind, c in manifest.get("containers", {}).items()
        }
        self.entries: dict[str, CatalogEntry] = {}
        for kind, raw in manifest["components"].items():
            self.entries[kind] = _load_entry(kind, raw)
        self.fixed_tokens: dict[str, ActionSpec] = {}
        for entry in self.entries.values():
            for action in entry.actions.values():
                if action.token is not None:
                    self.fixed_tokens[action.token] = action
        self._check()

    def _check(self) -> None:
        kinds = set(self.entries)
        for entry in self.entries.values():
            for arg in entry.args:
                if arg.name in kinds:
                    raise ConfigError(f"{entry.kind}: argument {arg.name!r} collides with a component kind")
                if arg.type not in VALUE_TYPES:
                    raise ConfigError(f"{entry.kind}.{arg.name}: unknown type {arg.type!r}")
            if entry.container and entry.container not in self.containers:
                raise ConfigError(f"{entry.kind}: unknown container {entry.container!r}")
            for action in entry.actions.values():
                if action.token is not None and not entry.singleton:
                    raise ConfigError(f"{entry.kind}.{action.name}: fixed tokens need a singleton kind")
                if action.token is None and action.suffix is None:
                    raise ConfigError(f"{entry.kind}.{action.name}: needs a token or a suffix")
                if action.op not in ("method", "set"):
                    raise ConfigError(f"{entry.kind}.{action.name}: unknown op {action.op!r}")
                if action.op == "set" and action.arity != 1:
                    raise ConfigError(f"{entry.kind}.{action.name}: setters take exactly one value")
                for p in action.params:
                    if p not in VALUE_TYPES:
                        raise ConfigError(f"{entry.kind}.{action.name}: unknown param type {p!r}")
        if len(self.fixed_tokens) != sum(
            1 for e in self.entries.values() for a in e.actions.values() if a.token is not None
        ):
            raise ConfigError("duplicate fixed action token")

    @property
    def kinds(self) -> list[str]:
        return list(self.entries)

    def __contains__(self, kind: str) -> bool:
        return kind in self.entries

    def lookup(self, kind: str) -> CatalogEntry:
        try:
            return self.entries[kind]
        except KeyError:
            raise NotFound(kind) from None

    def default_args(self, kind: str, index: int = 1) -> list[ArgBinding]:
        """Every schema slot bound to its default value (not a placeholder)."""
        entry = self.lookup(kind)
        name = entry.instance_name(index)
        return [ArgBinding(a.name, a.default.format(name=name)) for a in entry.args]

    def action(self, kind: str, name: str) -> ActionSpec:
        entry = self.lookup(kind)
        try:
            return entry.actions[name]
        except KeyError:
            raise NotFound(f"{kind}.{name}") from None

    def event_kinds(self) -> list[str]:
        return [k for k, e in self.entries.items() if e.events]

    def color(self, value: str) -> tuple[str, str] | None:
        """Map a color literal to (block type, #rrggbb); None if unknown."""
        key = " ".join(str(value).lower().replace("_", " ").split())
        if key in self.colors:
            return self.colors[key]
        return None

    def media_family(self, filename: str) -> str | None:
        ext = Path(filename).suffix.lower().lstrip(".")
        for family, exts in self.media.items():
            if ext in exts:
                return family
        return None


def _load_entry(kind: str, raw: dict) -> CatalogEntry:
    args = tuple(
        ArgSpec(a["name"], a["type"], a["property"], a.get("default", ""), a.get("emit_default", True))
        for a in raw.get("args", [])
    )
    events = {
        name: EventSpec(name, e["block_event"], e.get("toggle"))
        for name, e in raw.get("events", {}).items()
    }
    values = {
        name: ValueSpec(name, v["property"], v["type"]) for name, v in raw.get("values", {}).items()
    }
    actions = {}
    for name, a in raw.get("actions", {}).items():
        actions[name] = ActionSpec(
            name=name,
            kind=kind,
            op=a["op"],
            block_name=a["name"],
            params=tuple(a.get("params", [])),
            token=a.get("token"),
            suffix=a.get("suffix"),
            const_args=tuple((c["type"], c["value"]) for c in a.get("const_args", [])),
            effect=a.get("effect", ""),
            effect_args=tuple(a.get("effect_args", [])),
            state=tuple(a.get("state", {}).items()),
            assign=a.get("assign"),
            count=a.get("count"),
        )
    return CatalogEntry(
        kind=kind,
        type_name=raw["type"],
        version=raw["version"],
        visible=raw.get("visible", True),
        singleton=raw.get("singleton", False),
        args=args,
        events=events,
        actions=actions,
        values=values,
        state=dict(raw.get("state", {})),
        container=raw.get("container"),
    )


def load_json_resource(name: str) -> dict:
    return json.loads(resources.files("sartool.data").joinpath(name).read_text(encoding="utf-8"))


def load_catalog(path: str | Path | None = None) -> Catalog:
    if path is None:
        return default_catalog()
    return Catalog(json.loads(Path(path).read_text(encoding="utf-8")))


@lru_cache(maxsize=1)
def default_catalog() -> Catalog:
    return Catalog(load_json_resource("catalog.json"))
