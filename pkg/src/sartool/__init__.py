"""Toolchain for the Simplified App Representation (SAR) language.

Parse and validate SAR, compile it to App Inventor project archives,
synthesize parallel NL/SAR corpora, translate template-style English to
SAR, and run SAR apps in a headless simulator.
"""

from __future__ import annotations

from .ast import SarApp, serialize, validate
from .catalog import Catalog, default_catalog, load_catalog
from .errors import SarError
from .parser import parse, parse_sar, tokenize
from .preprocess import LiteralDict, extract_literals, restore_literals

__all__ = [
    "Catalog",
    "LiteralDict",
    "SarApp",
    "SarError",
    "default_catalog",
    "extract_literals",
    "load_catalog",
    "parse",
    "parse_sar",
    "restore_literals",
    "serialize",
    "tokenize",
    "validate",
]

__version__ = "0.1.0"
