"""Literal separation: swap quoted strings and bare numbers for placeholders.

Translation works on templated text (``a button named string0``) and the
literal values travel alongside in a :class:`LiteralDict` until the compiler
puts them back.
"""

from __future__ import annotations

import json
import re
from decimal import Decimal, InvalidOperation
from pathlib import Path
from typing import Iterable

from .ast import PLACEHOLDER_RE
from .errors import MissingLiteral, UnbalancedQuote

PLACEHOLDER_IN_TEXT = re.compile(r"(?<![\w])(string|number)(0|[1-9][0-9]*)(?![\w])")
NUMBER_RE = re.compile(r"(?<![\w.])-?(?:0|[1-9][0-9]*)(?:\.[0-9]+)?(?![\w]|\.[0-9])")
NEXT_WORD = re.compile(r"\s*([A-Za-z][A-Za-z0-9]*)")

# opening quote -> closing quote; "'" is handled separately because of apostrophes
QUOTE_PAIRS = {'"': '"', "\u201c": "\u201d", "\u2018": "\u2019"}
QUOTE_CHARS = "\"'\u201c\u201d\u2018\u2019"


class LiteralDict(dict):
    """Ordered placeholder -> value mapping.

    String values are ``str``; number values are ``Decimal`` so that the
    original spelling (``5.50``) survives a round trip.
    """

    def __init__(self, other=(), **kw):
        super().__init__()
        self.update(other, **kw)

    def __setitem__(self, name, value):
        m = PLACEHOLDER_RE.fullmatch(name)
        if m is None:
            raise ValueError(f"{name!r} is not a literal placeholder name")
        if m.group(1) == "number" and not isinstance(value, Decimal):
            value = Decimal(str(value))
        super().__setitem__(name, value)

    def update(self, other=(), **kw):
        items = other.items() if hasattr(other, "items") else other
        for k, v in items:
            self[k] = v
        for k, v in kw.items():
            self[k] = v

    def next_name(self, family: str, reserved: Iterable[str] = ()) -> str:
        top = -1
        for name in list(self) + list(reserved):
            m = PLACEHOLDER_RE.fullmatch(name)
            if m and m.group(1) == family:
                top = max(top, int(m.group(2)))
        return f"{family}{top + 1}"

    def add(self, value, family: str | None = None, reserved: Iterable[str] = ()) -> str:
        """Bind ``value`` to the next free placeholder of its family and return the name."""
        if family is None:
            family = "number" if isinstance(value, (int, float, Decimal)) else "string"
        name = self.next_name(family, reserved)
        self[name] = value
        return name

    def render(self, name: str) -> str:
        """Plain-text form of a bound value."""
        value = self[name]
        return str(value)

    # sidecar: one "name<TAB>value" per line
    def to_sidecar(self) -> str:
        return "".join(f"{k}\t{_escape(str(v))}\n" for k, v in self.items())

    @classmethod
    def from_sidecar(cls, text: str) -> LiteralDict:
        out = cls()
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            name, sep, value = line.partition("\t")
            if not sep:
                raise ValueError(f"sidecar line {lineno}: expected name<TAB>value")
            out[name.strip()] = _parse_value(name.strip(), _unescape(value))
        return out

    def to_json(self) -> str:
        return json.dumps({k: str(v) for k, v in self.items()}, ensure_ascii=False, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> LiteralDict:
        out = cls()
        for k, v in json.loads(text).items():
            out[k] = _parse_value(k, v)
        return out


def _parse_value(name: str, raw: str):
    if name.startswith("number"):
        try:
            return Decimal(raw)
        except InvalidOperation:
            raise ValueError(f"{name}: {raw!r} is not a number") from None
    return raw


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n").replace("\r", "\\r")


def _unescape(s: str) -> str:
    return re.sub(r"\\([\\tnr])", lambda m: {"\\": "\\", "t": "\t", "n": "\n", "r": "\r"}[m.group(1)], s)


def read_sidecar(path: str | Path) -> LiteralDict:
    return LiteralDict.from_sidecar(Path(path).read_text(encoding="utf-8"))


def write_sidecar(literals: LiteralDict, path: str | Path) -> None:
    Path(path).write_text(literals.to_sidecar(), encoding="utf-8")


def _quoted_spans(text: str) -> list[tuple[int, int, str]]:
    """(start, end, inner text) of every quoted span, in order."""
    spans = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in QUOTE_PAIRS:
            close = text.find(QUOTE_PAIRS[ch], i + 1)
            if close < 0:
                raise UnbalancedQuote(i, ch)
            spans.append((i, close + 1, text[i + 1 : close]))
            i = close + 1
            continue
        if ch == "'" and (i == 0 or not (text[i - 1].isalnum() or text[i - 1] == "_")):
            close = _single_quote_close(text, i)
            if close is not None:
                spans.append((i, close + 1, text[i + 1 : close]))
                i = close + 1
                continue
        i += 1
    return spans


def _single_quote_close(text: str, start: int) -> int | None:
    j = start + 1
    while True:
        j = text.find("'", j)
        if j < 0:
            return None
        after = text[j + 1] if j + 1 < len(text) else ""
        if not (after.isalnum() or after == "_"):
            return j
        j += 1


def _default_quantity_words() -> frozenset[str]:
    from .snippets import default_snippets

    return default_snippets().quantity_words


def extract_literals(nl: str, quantity_words: Iterable[str] | None = None) -> tuple[str, LiteralDict]:
    """Replace quoted spans with ``string<N>`` and bare numbers with ``number<N>``.

    Numbers that count components (``2 buttons``) stay in the text. Text that
    already holds placeholders keeps them; new ones continue the numbering.
    """
    words = _default_quantity_words() if quantity_words is None else frozenset(quantity_words)
    reserved = [m.group(0) for m in PLACEHOLDER_IN_TEXT.finditer(nl)]
    literals = LiteralDict()
    out: list[str] = []
    pos = 0
    for start, end, inner in _quoted_spans(nl):
        out.append(_template_numbers(nl[pos:start], nl, pos, literals, reserved, words))
        out.append(literals.add(inner, "string", reserved))
        pos = end
    out.append(_template_numbers(nl[pos:], nl, pos, literals, reserved, words))
    return "".join(out), literals


def _template_numbers(segment, full, offset, literals, reserved, words) -> str:
    def repl(m: re.Match) -> str:
        follow = NEXT_WORD.match(full, offset + m.end())
        if follow and follow.group(1).lower() in words:
            return m.group(0)
        return literals.add(Decimal(m.group(0)), "number", reserved)

    return NUMBER_RE.sub(repl, segment)


def quote(value: str) -> str:
    if '"' not in value:
        return f'"{value}"'
    if "'" not in value:
        return f"'{value}'"
    return f"\u201c{value}\u201d"


def restore_literals(templated: str, literals) -> str:
    """Inverse of :func:`extract_literals`, up to the choice of quote characters."""

    def repl(m: re.Match) -> str:
        name = m.group(0)
        if name not in literals:
            raise MissingLiteral(name)
        value = literals[name]
        if m.group(1) == "number":
            return str(value)
        return quote(str(value))

    return PLACEHOLDER_IN_TEXT.sub(repl, templated)


def strip_quotes(text: str) -> str:
    return "".join(ch for ch in text if ch not in QUOTE_CHARS)
