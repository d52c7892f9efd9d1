"""Independent reference implementations used as test oracles.

Nothing here imports sartool: the grammar, recognizer, edit distance and
document normalizers are written from the format descriptions alone so that
agreement with the package is evidence rather than tautology.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from functools import lru_cache
from itertools import product

# ---------------------------------------------------------------- SAR grammar over {button, textbox, text2speech}


class Term:
    """Terminal class: a named predicate plus the sample tokens used for enumeration."""

    def __init__(self, name: str, pattern: str, samples: tuple[str, ...]):
        self.name = name
        self.regex = re.compile(pattern)
        self.samples = samples

    def match(self, tok: str) -> bool:
        return self.regex.fullmatch(tok) is not None

    def __repr__(self) -> str:
        return self.name


def is_tag(tok: str) -> bool:
    return len(tok) > 2 and tok.startswith("<") and tok.endswith(">")


class _ValTerm(Term):
    def __init__(self, samples):
        super().__init__("VAL", r".*", samples)

    def match(self, tok: str) -> bool:
        return not is_tag(tok)


VAL = _ValTerm(("string0", "tweet"))
PROP = Term("PROP", r"<textbox[1-9][0-9]*text>|<textboxtext[1-9][0-9]*>", ("<textbox1text>", "<textboxtext1>"))
NEXT = Term("NEXT", r"<NEXT>|<next>", ("<NEXT>",))
MAX_INDEX = 9


def _event_terms(n: int) -> tuple[Term, Term]:
    open_ = Term(f"EOPEN{n}", rf"<button{n}_?clicked>", (f"<button{n}_clicked>", f"<button{n}clicked>"))
    close = Term(f"ECLOSE{n}", rf"</button{n}_?clicked>", (f"</button{n}_clicked>",))
    return open_, close


def _grammar() -> dict[str, list[tuple]]:
    g: dict[str, list[tuple]] = {
        "SAR": [("SCREEN",), ("SCREEN", NEXT, "SAR")],
        "SCREEN": [
            ("<complist>", "COMPS", "</complist>"),
            ("<complist>", "COMPS", "</complist>", "<code>", "EVENTS", "</code>"),
        ],
        "COMPS": [(), ("COMP", "COMPS")],
        "COMP": [
            ("<button>",),
            ("<button>", VAL, "</button>"),
            ("<button>", "<text>", VAL, "</text>", "</button>"),
            ("<textbox>",),
            ("<textbox>", VAL, "</textbox>"),
            ("<textbox>", "<hint>", VAL, "</hint>", "</textbox>"),
            ("<text2speech>",),
        ],
        "EVENTS": [(), ("EVENT", "EVENTS")],
        "ACTIONS": [("ACTION",), ("ACTION", "ACTIONS")],
        "ACTION": [("<speak>", "SPEAKARGS", "</speak>")],
        "SPEAKARGS": [(VAL,), (PROP,), (VAL, "SPEAKARGS"), (PROP, "SPEAKARGS")],
        "EVENT": [],
    }
    for n in range(1, MAX_INDEX + 1):
        o, c = _event_terms(n)
        g["EVENT"].append((o, "ACTIONS", c))
    return g


GRAMMAR = _grammar()
START = "SAR"


def _is_nt(sym) -> bool:
    return isinstance(sym, str) and sym in GRAMMAR


def _term_matches(sym, tok: str) -> bool:
    return sym.match(tok) if isinstance(sym, Term) else sym == tok


# -------------------------------------------------------------- enumeration


def enumerate_sentences(max_depth: int = 6, max_event_index: int = 2) -> list[tuple[str, ...]]:
    """All token sequences whose derivation tree has nonterminal depth <= max_depth.

    Depth is ordinary parse-tree height: the root sits at depth 1, a terminal
    leaf adds one level and a terminal class (VAL, PROP, ...) acts as a
    preterminal, adding one more. Classes are instantiated from their samples.
    """

    @lru_cache(maxsize=None)
    def gen(sym: str, depth: int) -> frozenset:
        if depth <= 0:
            return frozenset()
        out = set()
        for prod in GRAMMAR[sym]:
            if sym == "EVENT" and int(prod[0].name[5:]) > max_event_index:
                continue
            options = []
            ok = True
            for s in prod:
                if _is_nt(s):
                    sub = gen(s, depth - 1)
                    if not sub:
                        ok = False
                        break
                    options.append(sub)
                elif depth < 2 or (isinstance(s, Term) and depth < 3):
                    ok = False
                    break
                elif isinstance(s, Term):
                    options.append(frozenset((t,) for t in s.samples))
                else:
                    options.append(frozenset({(s,)}))
            if not ok:
                continue
            for combo in product(*options):
                out.add(sum(combo, ()))
        return frozenset(out)

    return sorted(gen(START, max_depth))


# -------------------------------------------------------------- Earley recognizer


def recognizes(tokens) -> bool:
    """Textbook Earley recognizer over GRAMMAR with predicate terminals."""
    tokens = list(tokens)
    n = len(tokens)
    chart: list[dict] = [dict() for _ in range(n + 1)]  # item -> None, ordered

    def add(i, item):
        if item not in chart[i]:
            chart[i][item] = None
            return True
        return False

    for p, prod in enumerate(GRAMMAR[START]):
        add(0, (START, p, 0, 0))
    nullable = _nullable()
    for i in range(n + 1):
        agenda = list(chart[i])
        k = 0
        while k < len(agenda):
            lhs, p, dot, origin = agenda[k]
            k += 1
            prod = GRAMMAR[lhs][p]
            if dot < len(prod):
                sym = prod[dot]
                if _is_nt(sym):
                    for q, _ in enumerate(GRAMMAR[sym]):
                        item = (sym, q, 0, i)
                        if add(i, item):
                            agenda.append(item)
                    if sym in nullable:
                        item = (lhs, p, dot + 1, origin)
                        if add(i, item):
                            agenda.append(item)
                elif i < n and _term_matches(sym, tokens[i]):
                    add(i + 1, (lhs, p, dot + 1, origin))
            else:
                for (l2, p2, d2, o2) in list(chart[origin]):
                    prod2 = GRAMMAR[l2][p2]
                    if d2 < len(prod2) and prod2[d2] == lhs:
                        item = (l2, p2, d2 + 1, o2)
                        if add(i, item):
                            agenda.append(item)
    return any(lhs == START and dot == len(GRAMMAR[lhs][p]) and origin == 0
               for (lhs, p, dot, origin) in chart[n])


@lru_cache(maxsize=1)
def _nullable() -> frozenset:
    out: set[str] = set()
    changed = True
    while changed:
        changed = False
        for lhs, prods in GRAMMAR.items():
            if lhs in out:
                continue
            if any(all(_is_nt(s) and s in out for s in prod) for prod in prods):
                out.add(lhs)
                changed = True
    return frozenset(out)


def _token_regex(sym) -> str:
    if isinstance(sym, _ValTerm):
        return r"(?!<\S+>(?: |$))\S+"
    if isinstance(sym, Term):
        return "(?:" + sym.regex.pattern + ")"
    return re.escape(sym)


@lru_cache(maxsize=1)
def _compiled() -> re.Pattern:
    """The grammar as one regular expression over space-joined tokens.

    Every recursive production is right-recursive on its own left-hand side
    (``A -> alpha A``), so ``A`` is ``(alpha1|alpha2...)* (beta1|beta2...)``.
    Any other recursion would make this conversion unsound, hence the assert.
    """
    memo: dict[str, str] = {}

    def nt(name: str, stack: tuple = ()) -> str:
        if name in memo:
            return memo[name]
        assert name not in stack, f"non-tail recursion through {name}"
        loops, exits = [], []
        for prod in GRAMMAR[name]:
            if prod and prod[-1] == name:
                loops.append(seq(prod[:-1], stack + (name,)))
            else:
                exits.append(seq(prod, stack + (name,)))
        body = "(?:" + "|".join(exits) + ")"
        if loops:
            body = "(?:" + "|".join(loops) + ")*" + body
        memo[name] = body
        return body

    def seq(prod, stack) -> str:
        return "".join(nt(s, stack) if _is_nt(s) else "(?:" + _token_regex(s) + " )" for s in prod)

    return re.compile(nt(START))


def recognizes_fast(tokens) -> bool:
    """Same language as :func:`recognizes`, via the compiled expression."""
    tokens = list(tokens)
    joined = " ".join(tokens)
    if joined.split() != tokens:  # a token was empty or contained whitespace
        return False
    return _compiled().fullmatch(joined + " ") is not None


def random_derivation(rng, max_depth: int = 9, max_event_index: int = 2) -> tuple[str, ...]:
    """A random sentence whose nonterminal height is at most ``max_depth``."""
    shortest = _min_height()

    def expand(sym, depth) -> list[str]:
        prods = [p for p in GRAMMAR[sym]
                 if not (sym == "EVENT" and int(p[0].name[5:]) > max_event_index)
                 and all(shortest[s] <= depth - 1 for s in p if _is_nt(s))]
        prod = rng.choice(prods)
        out: list[str] = []
        for s in prod:
            if _is_nt(s):
                out += expand(s, depth - 1)
            elif isinstance(s, Term):
                out.append(rng.choice(s.samples))
            else:
                out.append(s)
        return out

    return tuple(expand(START, max_depth))


@lru_cache(maxsize=1)
def _min_height() -> dict[str, int]:
    h = {nt: 10**9 for nt in GRAMMAR}
    changed = True
    while changed:
        changed = False
        for lhs, prods in GRAMMAR.items():
            for prod in prods:
                v = 1 + max((h[s] for s in prod if _is_nt(s)), default=0)
                if v < h[lhs]:
                    h[lhs] = v
                    changed = True
    return h


CORRUPTION_TOKENS = (
    "<complist>", "</complist>", "<code>", "</code>", "<NEXT>", "<next>",
    "<button>", "</button>", "<textbox>", "</textbox>", "<text2speech>", "</text2speech>",
    "<text>", "</text>", "<hint>", "</hint>", "<speak>", "</speak>",
    "<button1_clicked>", "</button1_clicked>", "<button2clicked>", "</button2_clicked>",
    "<textbox1text>", "<textboxtext2>", "string0", "number3", "tweet",
    "<label>", "<foo>", "</foo>", "<button1text>", "<>",
)


def corrupt(tokens, rng) -> tuple[str, ...]:
    """One random single-token edit: substitute, delete or insert."""
    toks = list(tokens)
    op = rng.choice(("sub", "del", "ins")) if toks else "ins"
    if op == "sub":
        i = rng.randrange(len(toks))
        choices = [t for t in CORRUPTION_TOKENS if t != toks[i]]
        toks[i] = rng.choice(choices)
    elif op == "del":
        del toks[rng.randrange(len(toks))]
    else:
        toks.insert(rng.randrange(len(toks) + 1), rng.choice(CORRUPTION_TOKENS))
    return tuple(toks)


# ---------------------------------------------------------------- edit distance


def levenshtein(a: str, b: str) -> int:
    """Plain recursive definition, memoized."""

    @lru_cache(maxsize=None)
    def d(i: int, j: int) -> int:
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


# ---------------------------------------------------------------- document normalizers


def scm_body(text: str) -> dict:
    """Parse a designer file: '#|', '$JSON', one JSON object, '|#'."""
    lines = text.strip().splitlines()
    assert lines[0].strip() == "#|", lines[0]
    assert lines[1].strip() == "$JSON", lines[1]
    assert lines[-1].strip() == "|#", lines[-1]
    return json.loads("\n".join(lines[2:-1]))


def normalize_scm(body):
    """Ordered (key, value) form with every non-screen Uuid blanked."""
    if isinstance(body, dict):
        out = []
        for k, v in body.items():
            if k == "Uuid" and v != "0":
                v = "<uuid>"
            out.append((k, normalize_scm(v)))
        return out
    if isinstance(body, list):
        return [normalize_scm(v) for v in body]
    return body


def normalize_bky(text: str):
    """Nested (tag, attrs, text, children) with ids blanked and namespaces dropped."""
    root = ET.fromstring(text)

    def walk(el):
        tag = el.tag.split("}", 1)[-1]
        attrs = {k: ("<id>" if k == "id" else v) for k, v in el.attrib.items()}
        text_ = (el.text or "").strip()
        return (tag, tuple(sorted(attrs.items())), text_, tuple(walk(c) for c in el))

    return walk(root)
