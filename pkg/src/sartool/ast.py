"""SAR abstract syntax tree, validation, and canonical serialization.

All node types are frozen dataclasses built from tuples, so an app can be
shared freely once constructed. Serialization always emits the canonical
spelling (``<button1_clicked>``, ``<textbox1text>``) regardless of which
alias the parser saw.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import TYPE_CHECKING, Iterator

from .errors import InvariantViolation

if TYPE_CHECKING:
    from .catalog import Catalog

PLACEHOLDER_RE = re.compile(r"(string|number)(0|[1-9][0-9]*)")
NEXT = "<NEXT>"


def is_placeholder(text: str) -> bool:
    return PLACEHOLDER_RE.fullmatch(text) is not None


@dataclass(frozen=True)
class ComponentRef:
    kind: str
    index: int

    @property
    def name(self) -> str:
        return f"{self.kind}{self.index}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class ArgBinding:
    name: str
    value: str


@dataclass(frozen=True)
class ComponentInst:
    kind: str
    index: int
    args: tuple[ArgBinding, ...] = ()

    @property
    def ref(self) -> ComponentRef:
        return ComponentRef(self.kind, self.index)

    def arg(self, name: str) -> str | None:
        for a in self.args:
            if a.name == name:
                return a.value
        return None


@dataclass(frozen=True)
class ValueRef:
    variant: str  # "literal" or "property"
    name: str
    component: ComponentRef | None = None
    prop: str | None = None

    @classmethod
    def literal(cls, name: str) -> ValueRef:
        return cls("literal", name)

    @classmethod
    def of_property(cls, component: ComponentRef, prop: str) -> ValueRef:
        return cls("property", f"{component.name}{prop}", component, prop)

    @property
    def is_literal(self) -> bool:
        return self.variant == "literal"


@dataclass(frozen=True)
class EventRef:
    component: ComponentRef
    event: str

    @property
    def token(self) -> str:
        return f"{self.component.name}_{self.event}"


@dataclass(frozen=True)
class ActionInst:
    action: str
    target: ComponentRef | None = None  # None for fixed-token actions such as <speak>
    values: tuple[ValueRef, ...] = ()


@dataclass(frozen=True)
class EventBlock:
    event: EventRef
    actions: tuple[ActionInst, ...]


@dataclass(frozen=True)
class Screen:
    components: tuple[ComponentInst, ...] = ()
    code: tuple[EventBlock, ...] | None = None  # None: no <code> section at all

    @property
    def events(self) -> tuple[EventBlock, ...]:
        return self.code or ()

    def component(self, ref: ComponentRef) -> ComponentInst | None:
        for c in self.components:
            if c.kind == ref.kind and c.index == ref.index:
                return c
        return None


@dataclass(frozen=True)
class SarApp:
    screens: tuple[Screen, ...]

    def placeholders(self) -> list[str]:
        """Literal placeholder names in first-use order."""
        seen: dict[str, None] = {}
        for screen in self.screens:
            for comp in screen.components:
                for a in comp.args:
                    seen.setdefault(a.value, None)
            for block in screen.events:
                for act in block.actions:
                    for v in act.values:
                        if v.is_literal:
                            seen.setdefault(v.name, None)
        return list(seen)


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    path: str

    def __str__(self) -> str:
        return f"{self.code} at {self.path}: {self.message}"

    def as_dict(self) -> dict:
        return {"code": self.code, "message": self.message, "path": self.path}


def resolve_target(action: ActionInst, catalog: Catalog) -> ComponentRef | None:
    """The component an action operates on, including implicit singleton targets."""
    if action.target is not None:
        return action.target
    spec = catalog.fixed_tokens.get(action.action)
    if spec is None:
        return None
    return ComponentRef(spec.kind, 1)


def _value_fits(param: str, value: ValueRef, screen: Screen, catalog: Catalog) -> bool:
    if value.is_literal:
        family = PLACEHOLDER_RE.fullmatch(value.name).group(1)
        if param == "text":
            return True
        if param == "number":
            return family == "number"
        return family == "string"  # color, asset
    if param in ("color", "asset"):
        return False
    vspec = catalog.lookup(value.component.kind).values[value.prop]
    return param == "text" or vspec.type == param


def validate(app: SarApp, catalog: Catalog | None = None, literals=None) -> list[Diagnostic]:
    """Check every structural and catalog rule. Empty list means the app is valid.

    When ``literals`` is given, placeholders must also be bound there and
    color literals must name a known color.
    """
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    return list(_diagnose(app, catalog, literals))


def _diagnose(app: SarApp, catalog: Catalog, literals) -> Iterator[Diagnostic]:
    if not app.screens:
        yield Diagnostic("NO_SCREENS", "an app needs at least one screen", "screens")
    for s, screen in enumerate(app.screens):
        yield from _diagnose_screen(screen, f"screens[{s}]", catalog, literals)


def _check_literal(name: str, path: str, literals, want_color: bool, catalog: Catalog):
    if literals is None:
        return
    if name not in literals:
        yield Diagnostic("MISSING_LITERAL", f"{name} is not bound", path)
    elif want_color and catalog.color(literals[name]) is None:
        yield Diagnostic("UNKNOWN_COLOR", f"{literals[name]!r} is not a known color", path)


def _diagnose_screen(screen: Screen, base: str, catalog: Catalog, literals) -> Iterator[Diagnostic]:
    counts: dict[str, int] = {}
    for c, comp in enumerate(screen.components):
        path = f"{base}.components[{c}]"
        if comp.kind not in catalog:
            yield Diagnostic("UNKNOWN_COMPONENT", f"{comp.kind!r} is not in the catalog", path)
            continue
        entry = catalog.lookup(comp.kind)
        counts[comp.kind] = counts.get(comp.kind, 0) + 1
        if comp.index != counts[comp.kind]:
            yield Diagnostic(
                "BAD_INDEX",
                f"{comp.kind} instance should be numbered {counts[comp.kind]}, got {comp.index}",
                path,
            )
        if entry.singleton and counts[comp.kind] == 2:
            yield Diagnostic("SINGLETON_VIOLATION", f"{comp.kind} can only appear once per screen", path)
        seen_args: set[str] = set()
        for a, arg in enumerate(comp.args):
            apath = f"{path}.args[{a}]"
            spec = entry.arg(arg.name)
            if spec is None:
                yield Diagnostic("UNKNOWN_ARG", f"{comp.kind} has no argument {arg.name!r}", apath)
                continue
            if arg.name in seen_args:
                yield Diagnostic("DUPLICATE_ARG", f"argument {arg.name!r} bound twice", apath)
            seen_args.add(arg.name)
            m = PLACEHOLDER_RE.fullmatch(arg.value)
            if m is None:
                yield Diagnostic("BAD_PLACEHOLDER", f"{arg.value!r} is not a literal placeholder", apath)
                continue
            if (spec.type == "number") != (m.group(1) == "number"):
                yield Diagnostic("VALUE_TYPE", f"{arg.name} expects a {spec.type} literal", apath)
            yield from _check_literal(arg.value, apath, literals, spec.type == "color", catalog)

    declared = {(c.kind, c.index) for c in screen.components}
    handled: set[str] = set()
    for e, block in enumerate(screen.events):
        path = f"{base}.code[{e}]"
        ref = block.event.component
        if ref.kind not in catalog:
            yield Diagnostic("UNKNOWN_COMPONENT", f"{ref.kind!r} is not in the catalog", path)
        elif (ref.kind, ref.index) not in declared:
            yield Diagnostic("DANGLING_COMPONENT_REF", f"{ref.name} is not declared on this screen", path)
        elif block.event.event not in catalog.lookup(ref.kind).events:
            yield Diagnostic("UNSUPPORTED_EVENT", f"{ref.kind} has no event {block.event.event!r}", path)
        if block.event.token in handled:
            yield Diagnostic("DUPLICATE_EVENT", f"{block.event.token} is handled twice", path)
        handled.add(block.event.token)
        if not block.actions:
            yield Diagnostic("EMPTY_ACTIONS", "an event needs at least one action", path)
        for a, act in enumerate(block.actions):
            yield from _diagnose_action(act, f"{path}.actions[{a}]", screen, declared, catalog, literals)


def _diagnose_action(act, path, screen, declared, catalog, literals) -> Iterator[Diagnostic]:
    fixed = catalog.fixed_tokens.get(act.action)
    if fixed is not None:
        if act.target is not None:
            yield Diagnostic("TARGET_MISMATCH", f"{act.action} takes no explicit target", path)
            return
        spec = fixed
        target = ComponentRef(fixed.kind, 1)
    else:
        if act.target is None:
            yield Diagnostic("MISSING_TARGET", f"{act.action} needs a target component", path)
            return
        target = act.target
        if target.kind not in catalog:
            yield Diagnostic("UNKNOWN_COMPONENT", f"{target.kind!r} is not in the catalog", path)
            return
        spec = catalog.lookup(target.kind).actions.get(act.action)
        if spec is None or spec.token is not None:
            yield Diagnostic("UNSUPPORTED_ACTION", f"{target.kind} has no action {act.action!r}", path)
            return
    if (target.kind, target.index) not in declared:
        yield Diagnostic("DANGLING_COMPONENT_REF", f"{target.name} is not declared on this screen", path)
    if len(act.values) != spec.arity:
        yield Diagnostic(
            "ARITY_MISMATCH", f"{act.action} takes {spec.arity} value(s), got {len(act.values)}", path
        )
        return
    for v, (param, value) in enumerate(zip(spec.params, act.values)):
        vpath = f"{path}.values[{v}]"
        if value.is_literal:
            if not is_placeholder(value.name):
                yield Diagnostic("BAD_PLACEHOLDER", f"{value.name!r} is not a literal placeholder", vpath)
                continue
        else:
            ref = value.component
            if ref is None or ref.kind not in catalog:
                yield Diagnostic("UNKNOWN_PROPERTY", f"{value.name!r} names no component", vpath)
                continue
            if (ref.kind, ref.index) not in declared:
                yield Diagnostic("DANGLING_COMPONENT_REF", f"{ref.name} is not declared on this screen", vpath)
                continue
            if value.prop not in catalog.lookup(ref.kind).values:
                yield Diagnostic("UNKNOWN_PROPERTY", f"{ref.kind} exposes no value {value.prop!r}", vpath)
                continue
        if not _value_fits(param, value, screen, catalog):
            yield Diagnostic("VALUE_TYPE", f"{act.action} expects a {param} value, got {value.name}", vpath)
        elif value.is_literal:
            yield from _check_literal(value.name, vpath, literals, param == "color", catalog)


def serialize(app: SarApp, catalog: Catalog | None = None) -> str:
    """Canonical space-separated SAR text. Raises InvariantViolation on invalid apps."""
    if catalog is None:
        from .catalog import default_catalog

        catalog = default_catalog()
    problems = validate(app, catalog)
    if problems:
        raise InvariantViolation(problems)
    return " ".join(tokens_of(app, catalog))


def tokens_of(app: SarApp, catalog: Catalog) -> list[str]:
    out: list[str] = []
    for s, screen in enumerate(app.screens):
        if s:
            out.append(NEXT)
        out.append("<complist>")
        for comp in screen.components:
            out.extend(_component_tokens(comp, catalog))
        out.append("</complist>")
        if screen.code is not None:
            out.append("<code>")
            for block in screen.code:
                tok = block.event.token
                out.append(f"<{tok}>")
                for act in block.actions:
                    out.extend(_action_tokens(act, catalog))
                out.append(f"</{tok}>")
            out.append("</code>")
    return out


def _component_tokens(comp: ComponentInst, catalog: Catalog) -> list[str]:
    if not comp.args:
        return [f"<{comp.kind}>"]
    schema = catalog.lookup(comp.kind).args
    out = [f"<{comp.kind}>"]
    for i, arg in enumerate(comp.args):
        if i == 0 and arg.name == schema[0].name:
            out.append(arg.value)
        else:
            out.extend((f"<{arg.name}>", arg.value, f"</{arg.name}>"))
    out.append(f"</{comp.kind}>")
    return out


def _action_tokens(act: ActionInst, catalog: Catalog) -> list[str]:
    if act.target is None:
        tok = act.action
        spec = catalog.fixed_tokens[tok]
    else:
        spec = catalog.action(act.target.kind, act.action)
        tok = spec.instance_token(act.target.name)
    if spec.arity == 0:
        return [f"<{tok}>"]
    return [f"<{tok}>", *(_value_token(v) for v in act.values), f"</{tok}>"]


def _value_token(value: ValueRef) -> str:
    return value.name if value.is_literal else f"<{value.name}>"
