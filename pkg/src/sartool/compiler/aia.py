"""Project archive assembly with reproducible zip bytes."""

from __future__ import annotations

import io
import random
import re
import zipfile
from dataclasses import dataclass, field
from pathlib import Path

from ..ast import SarApp, validate
from ..catalog import Catalog, default_catalog
from ..errors import ConfigError, InvariantViolation, IoError, MissingLiteral
from .bky import BkyDocument, emit_bky
from .scm import ScmDocument, emit_scm

APP_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
ZIP_EPOCH = (1980, 1, 1, 0, 0, 0)
PROPERTIES_PATH = "youngandroidproject/project.properties"


def screen_rng(seed: int | str, index: int) -> random.Random:
    """Independent stream per screen, so screens can be emitted in any order."""
    return random.Random(f"{seed}:screen{index}")


def project_properties(appname: str, user: str = "user") -> str:
    lines = [
        f"main=appinventor.ai_{user}.{appname}.Screen1",
        f"name={appname}",
        "assets=../assets",
        "source=../src",
        "build=../build",
        "versioncode=1",
        "versionname=1.0",
        "useslocation=False",
        f"aname={appname}",
        "sizing=Responsive",
        "showlistsasjson=True",
        "tutorialurl=",
        "subsetjson=",
        "actionbar=True",
        "theme=AppTheme.Light.DarkActionBar",
        "color.primary=&HFF3F51B5",
        "color.primary.dark=&HFF303F9F",
        "color.accent=&HFFFF4081",
    ]
    return "\n".join(lines) + "\n"


@dataclass
class AiaPackage:
    appname: str
    user: str = "user"
    entries: dict[str, bytes] = field(default_factory=dict)

    def source_dir(self) -> str:
        return f"src/appinventor/ai_{self.user}/{self.appname}"

    def to_bytes(self) -> bytes:
        buf = io.BytesIO()
        with zipfile.ZipFile(buf, "w", zipfile.ZIP_DEFLATED) as zf:
            for name, data in self.entries.items():
                info = zipfile.ZipInfo(name, date_time=ZIP_EPOCH)
                info.compress_type = zipfile.ZIP_DEFLATED
                info.external_attr = 0o644 << 16
                info.create_system = 3
                zf.writestr(info, data)
        return buf.getvalue()

    def write(self, out: str | Path) -> Path:
        out = Path(out)
        try:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_bytes(self.to_bytes())
        except OSError as exc:
            raise IoError(f"cannot write {out}: {exc}") from exc
        return out


@dataclass
class CompiledScreen:
    name: str
    scm: ScmDocument
    bky: BkyDocument


def compile_screens(app: SarApp, literals, appname: str, *, seed: int | str = 0, catalog: Catalog | None = None,
                    assets_dir: str | Path | None = None) -> list[CompiledScreen]:
    catalog = catalog or default_catalog()
    problems = validate(app, catalog, literals)
    missing = [d for d in problems if d.code == "MISSING_LITERAL"]
    if missing:
        raise MissingLiteral(missing[0].message.split()[0])
    if problems:
        raise InvariantViolation(problems)
    out = []
    for i, screen in enumerate(app.screens, 1):
        rng = screen_rng(seed, i)
        name = f"Screen{i}"
        scm = emit_scm(screen, literals, appname, rng, catalog=catalog, screen_name=name, assets_dir=assets_dir)
        bky = emit_bky(screen, literals, rng, catalog=catalog)
        out.append(CompiledScreen(name, scm, bky))
    return out


def compile_app(app: SarApp, literals, appname: str, *, seed: int | str = 0, user: str = "user",
                catalog: Catalog | None = None, assets_dir: str | Path | None = None) -> AiaPackage:
    """Compile every screen and collect the archive entries in memory."""
    if not APP_NAME_RE.fullmatch(appname):
        raise ConfigError(f"app name {appname!r} must start with a letter and use only letters, digits and _")
    if not APP_NAME_RE.fullmatch(user):
        raise ConfigError(f"user name {user!r} must start with a letter and use only letters, digits and _")
    pkg = AiaPackage(appname, user)
    pkg.entries[PROPERTIES_PATH] = project_properties(appname, user).encode("utf-8")
    assets: dict[str, bytes] = {}
    for screen in compile_screens(app, literals, appname, seed=seed, catalog=catalog, assets_dir=assets_dir):
        base = f"{pkg.source_dir()}/{screen.name}"
        pkg.entries[f"{base}.scm"] = screen.scm.text().encode("utf-8")
        pkg.entries[f"{base}.bky"] = screen.bky.text().encode("utf-8")
        for path in screen.scm.assets:
            assets.setdefault(path.name, path.read_bytes())
    for name in sorted(assets):
        pkg.entries[f"assets/{name}"] = assets[name]
    return pkg


def package_aia(app: SarApp, literals, appname: str, out: str | Path, *, seed: int | str = 0, user: str = "user",
                catalog: Catalog | None = None, assets_dir: str | Path | None = None) -> AiaPackage:
    """Compile and write ``out``. Same inputs and seed give the same bytes."""
    pkg = compile_app(app, literals, appname, seed=seed, user=user, catalog=catalog, assets_dir=assets_dir)
    pkg.write(out)
    return pkg
