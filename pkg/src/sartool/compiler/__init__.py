"""SAR to App Inventor compiler: designer (.scm), blocks (.bky) and .aia packaging."""

from __future__ import annotations

from .aia import (
    AiaPackage,
    CompiledScreen,
    compile_app,
    compile_screens,
    package_aia,
    project_properties,
    screen_rng,
)
from .assets import edit_distance, resolve_asset
from .bky import BkyDocument, block_id, emit_bky
from .scm import ScmDocument, emit_scm, num_uuid

__all__ = [
    "AiaPackage",
    "BkyDocument",
    "CompiledScreen",
    "ScmDocument",
    "block_id",
    "compile_app",
    "compile_screens",
    "edit_distance",
    "emit_bky",
    "emit_scm",
    "num_uuid",
    "package_aia",
    "project_properties",
    "resolve_asset",
    "screen_rng",
]
