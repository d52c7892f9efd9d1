"""Headless interpreter for SAR apps.

State is a plain mapping ``instance -> field -> value`` plus an append-only
effect log. ``set_value`` and ``fire`` return new states and never mutate
their input. Only the first screen is simulated.
"""

from __future__ import annotations

import copy
import shlex
from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation

from .ast import ActionInst, ComponentRef, SarApp, Screen, ValueRef, resolve_target, validate
from .catalog import Catalog, default_catalog
from .errors import InvariantViolation, SarError
from .parser import parse_event_token


@dataclass(frozen=True)
class Effect:
    kind: str
    args: tuple = ()

    def __str__(self) -> str:
        return f"{self.kind}({', '.join(_show(a) for a in self.args)})"


def _show(value) -> str:
    if isinstance(value, ComponentRef):
        return value.name
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return str(value)


@dataclass(frozen=True)
class TraceStep:
    event: str  # canonical event token, e.g. button1_clicked
    instance: str  # App Inventor instance name, e.g. TextToSpeech1
    member: str  # method or property name as emitted in the blocks file


@dataclass
class AppState:
    app: SarApp
    catalog: Catalog
    literals: dict
    components: dict[str, dict] = field(default_factory=dict)
    effects: list[Effect] = field(default_factory=list)
    trace: list[TraceStep] = field(default_factory=list)

    @property
    def screen(self) -> Screen:
        return self.app.screens[0]

    def get(self, component: str, name: str):
        return self.components[component][name]

    def copy(self) -> AppState:
        return AppState(self.app, self.catalog, self.literals, copy.deepcopy(self.components),
                        list(self.effects), list(self.trace))


def _default_value(arg, entry, index: int):
    raw = arg.default.format(name=entry.instance_name(index))
    if arg.type == "number":
        return Decimal(raw) if raw else Decimal(0)
    return raw


def init(app: SarApp, literals=None, catalog: Catalog | None = None) -> AppState:
    """Fresh state for screen 1: catalog defaults overlaid with bound arguments."""
    catalog = catalog or default_catalog()
    problems = validate(app, catalog, literals if literals is not None else None)
    if problems:
        raise InvariantViolation(problems)
    literals = dict(literals or {})
    state = AppState(app, catalog, literals)
    for comp in app.screens[0].components:
        entry = catalog.lookup(comp.kind)
        fields_ = copy.deepcopy(entry.state)
        for key, value in list(fields_.items()):
            if isinstance(value, (int, float)) and not isinstance(value, bool):
                fields_[key] = Decimal(value)
        for arg in entry.args:
            bound = comp.arg(arg.name)
            fields_[arg.name] = literals[bound] if bound is not None else _default_value(arg, entry, comp.index)
        state.components[comp.ref.name] = fields_
    return state


def _coerce(current, value):
    if isinstance(current, bool):
        if isinstance(value, str):
            return value.strip().lower() in ("1", "true", "on", "yes")
        return bool(value)
    if isinstance(current, Decimal):
        try:
            return Decimal(str(value))
        except InvalidOperation:
            raise SarError(f"{value!r} is not a number") from None
    return value if isinstance(value, str) else str(value)


def set_value(state: AppState, component: str, name: str, value) -> AppState:
    """Simulate user input, e.g. typing into ``textbox1``'s ``text``."""
    if component not in state.components:
        raise SarError(f"{component} is not declared on the active screen")
    fields_ = state.components[component]
    if name not in fields_:
        raise SarError(f"{component} has no field {name!r}")
    new = state.copy()
    new.components[component][name] = _coerce(fields_[name], value)
    return new


def _read(state: AppState, value: ValueRef):
    if value.is_literal:
        return state.literals.get(value.name, value.name)
    return state.components[value.component.name][value.prop]


def _execute(state: AppState, event_token: str, act: ActionInst) -> None:
    catalog = state.catalog
    target = resolve_target(act, catalog)
    spec = catalog.action(target.kind, act.action)
    entry = catalog.lookup(target.kind)
    fields_ = state.components[target.name]
    values = [_read(state, v) for v in act.values]
    for key, const in spec.state:
        fields_[key] = const
    if spec.assign is not None and values:
        fields_[spec.assign] = values[0]
    if spec.count is not None:
        fields_[spec.count] = fields_.get(spec.count, Decimal(0)) + 1
    args = []
    for name in spec.effect_args:
        if name == "component":
            args.append(target)
        elif name == "value":
            args.append(values[0])
    state.effects.append(Effect(spec.effect, tuple(args)))
    state.trace.append(TraceStep(event_token, entry.instance_name(target.index), spec.block_name))


def fire(state: AppState, event: str, inputs: dict | None = None) -> AppState:
    """Raise ``event`` (``button1_clicked`` or an alias) and run its handler.

    ``inputs`` are applied with :func:`set_value` first, as ``{"textbox1.text": "hi"}``.
    Events that are unknown, undeclared or unhandled change nothing beyond
    the component's own toggle (a switch still flips without a handler).
    """
    for key, value in (inputs or {}).items():
        comp, _, name = key.partition(".")
        state = set_value(state, comp, name, value)
    ref = parse_event_token(event, state.catalog)
    if ref is None or ref.component.name not in state.components:
        return state
    entry = state.catalog.lookup(ref.component.kind)
    spec = entry.events.get(ref.event)
    if spec is None:
        return state
    new = state.copy()
    if spec.toggle:
        fields_ = new.components[ref.component.name]
        fields_[spec.toggle] = not fields_.get(spec.toggle, False)
    for block in new.screen.events:
        if block.event == ref:
            for act in block.actions:
                _execute(new, ref.token, act)
    return new


def run_script(state: AppState, script: str) -> AppState:
    """Apply ``set <component> <field> <value...>`` and ``fire <event> [k=v ...]`` lines."""
    for lineno, raw in enumerate(script.splitlines(), 1):
        try:
            words = shlex.split(raw, comments=True)
        except ValueError as exc:
            raise SarError(f"script line {lineno}: {exc}") from None
        if not words:
            continue
        cmd = words[0]
        if cmd == "set" and len(words) >= 4:
            state = set_value(state, words[1], words[2], " ".join(words[3:]))
        elif cmd == "fire" and len(words) >= 2:
            inputs = {}
            for item in words[2:]:
                key, sep, value = item.partition("=")
                if not sep:
                    raise SarError(f"script line {lineno}: expected key=value, got {item!r}")
                inputs[key] = value
            state = fire(state, words[1], inputs)
        else:
            raise SarError(f"script line {lineno}: cannot understand {raw.strip()!r}")
    return state
