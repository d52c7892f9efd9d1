"""Screen designer files: a scheme block comment wrapping one JSON object."""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..ast import Screen
from ..catalog import ArgSpec, Catalog, CatalogEntry, default_catalog
from ..errors import MissingLiteral, NotFound, UnknownComponent, UnsupportedValue
from .assets import resolve_asset

UUID_MIN = 100_000_000
UUID_MAX = 2_147_483_647


def num_uuid(rng: random.Random) -> str:
    """Positive 32-bit decimal id, 9 or 10 digits."""
    return str(rng.randint(UUID_MIN, UUID_MAX))


def literal_value(literals, name: str):
    if literals is None or name not in literals:
        raise MissingLiteral(name)
    return literals[name]


def render_literal(value) -> str:
    """Decimals keep their original spelling (``2.50`` stays ``2.50``)."""
    return str(value)


def paint_color(catalog: Catalog, value: str) -> str:
    found = catalog.color(value)
    if found is None:
        raise UnsupportedValue(f"{value!r} is not a known color")
    return "&HFF" + found[1].lstrip("#").upper()


@dataclass
class ScmDocument:
    body: dict
    assets: list[Path] = field(default_factory=list)

    @property
    def components(self) -> list[dict]:
        return self.body["Properties"].get("$Components", [])

    def text(self) -> str:
        return "#|\n$JSON\n" + json.dumps(self.body, ensure_ascii=False, separators=(",", ":")) + "\n|#\n"

    @classmethod
    def from_text(cls, text: str) -> ScmDocument:
        body = text.strip()
        if not (body.startswith("#|") and body.endswith("|#")):
            raise ValueError("missing #| ... |# framing")
        body = body[2:-2].strip()
        if not body.startswith("$JSON"):
            raise ValueError("missing $JSON marker")
        return cls(json.loads(body[len("$JSON"):]))


def _arg_value(spec: ArgSpec, entry: CatalogEntry, index: int, bound: str | None, literals, catalog: Catalog,
               assets_dir, assets: list[Path]) -> str | None:
    if bound is not None:
        value = render_literal(literal_value(literals, bound))
    elif spec.emit_default and spec.default:
        value = spec.default.format(name=entry.instance_name(index))
    else:
        return None
    if spec.type == "color":
        return paint_color(catalog, value)
    if spec.type == "asset" and assets_dir is not None and value:
        path = resolve_asset(value, assets_dir, catalog)
        assets.append(path)
        return path.name
    return value


def emit_scm(screen: Screen, literals, appname: str, rng: random.Random, *, catalog: Catalog | None = None,
             screen_name: str = "Screen1", assets_dir: str | Path | None = None) -> ScmDocument:
    """Build the designer document for one screen.

    Components keep declaration order; kinds that live in a container are
    grouped into one container instance placed where the first of them appears.
    """
    catalog = catalog or default_catalog()
    assets: list[Path] = []
    props: dict = {
        "$Name": screen_name,
        "$Type": catalog.form_type,
        "$Version": catalog.form_version,
    }
    if screen_name == "Screen1":
        props["AppName"] = appname
    props["Title"] = screen_name
    props["Uuid"] = "0"
    out: list[dict] = []
    containers: dict[str, dict] = {}
    for comp in screen.components:
        try:
            entry = catalog.lookup(comp.kind)
        except NotFound:
            raise UnknownComponent(comp.kind) from None
        if entry.container is not None:
            box = containers.get(entry.container)
            if box is None:
                spec = catalog.containers[entry.container]
                box = {"$Name": f"{spec.type_name}1", "$Type": spec.type_name, "$Version": spec.version}
                box.update(spec.properties)
                box["Uuid"] = num_uuid(rng)
                box["$Components"] = []
                containers[entry.container] = box
                out.append(box)
            sink = box["$Components"]
        else:
            sink = out
        node = {"$Name": entry.instance_name(comp.index), "$Type": entry.type_name, "$Version": entry.version}
        for spec in entry.args:
            value = _arg_value(spec, entry, comp.index, comp.arg(spec.name), literals, catalog, assets_dir, assets)
            if value is not None:
                node[spec.property] = value
        node["Uuid"] = num_uuid(rng)
        sink.append(node)
    if out:
        props["$Components"] = out
    body = {
        "authURL": list(catalog.auth_url),
        "YaVersion": catalog.ya_version,
        "Source": "Form",
        "Properties": props,
    }
    return ScmDocument(body, assets)
