"""``sartool`` command line: parse, compile, nl2sar, synth, split, simulate.

Data goes to stdout, diagnostics to stderr. Exit status is 0 on success,
1 when the input produced diagnostics or errors, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .ast import serialize, validate
from .catalog import default_catalog, load_catalog
from .errors import InvariantViolation, MissingLiteral, SarError, SarSyntaxError
from .parser import parse
from .preprocess import LiteralDict, read_sidecar, write_sidecar

ASSETS_ENV = "SAR_ASSETS_DIR"


class _Failure(Exception):
    """Carries diagnostics up to main() for uniform reporting."""

    def __init__(self, diagnostics: list[dict]):
        self.diagnostics = diagnostics
        super().__init__(diagnostics[0]["message"] if diagnostics else "failed")


def _diag_from(exc: Exception) -> list[dict]:
    if isinstance(exc, InvariantViolation):
        return [d.as_dict() for d in exc.diagnostics]
    if isinstance(exc, SarSyntaxError):
        return [{"code": "SYNTAX_ERROR", "message": exc.message, "path": f"{exc.span[0]}:{exc.span[1]}"}]
    if isinstance(exc, MissingLiteral):
        return [{"code": "MISSING_LITERAL", "message": str(exc), "path": exc.name}]
    return [{"code": type(exc).__name__, "message": str(exc), "path": ""}]


def _read_text(path: str | None) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SarError(f"cannot read {path}: {exc.strerror}") from None


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _catalog(args):
    return load_catalog(args.catalog) if getattr(args, "catalog", None) else default_catalog()


def _load_sar(args, catalog):
    literals = read_sidecar(args.literals) if getattr(args, "literals", None) else LiteralDict()
    app = parse(_read_text(args.sar), catalog, literals)
    return app, literals


# ---------------------------------------------------------------- commands


def cmd_parse(args) -> int:
    catalog = _catalog(args)
    literals = read_sidecar(args.literals) if args.literals else None
    scratch = LiteralDict(literals or {})
    app = parse(_read_text(args.file), catalog, scratch)
    problems = validate(app, catalog, scratch if literals is not None else None)
    if problems:
        raise _Failure([d.as_dict() for d in problems])
    sys.stdout.write(serialize(app, catalog) + "\n")
    return 0


def cmd_compile(args) -> int:
    from .compiler import package_aia
    from .synthesizer import read_corpus

    catalog = _catalog(args)
    assets = args.assets or os.environ.get(ASSETS_ENV) or None
    if args.corpus:
        out_dir = Path(args.output)
        corpus = read_corpus(args.corpus)
        failures = 0
        for i, ex in enumerate(corpus):
            try:
                app = parse(ex.sar, catalog, ex.literals)
                package_aia(app, ex.literals, f"app{i}", out_dir / f"app{i}.aia", seed=args.seed,
                            user=args.user, catalog=catalog, assets_dir=assets)
            except SarError as exc:
                failures += 1
                _emit(args, [{**d, "path": f"line {i + 1}: {d['path']}"} for d in _diag_from(exc)])
        print(f"compiled {len(corpus) - failures} apps, {failures} failures", file=sys.stderr)
        return 1 if failures else 0
    app, literals = _load_sar(args, catalog)
    name = args.name or _name_from(args.output)
    pkg = package_aia(app, literals, name, args.output, seed=args.seed, user=args.user, catalog=catalog,
                      assets_dir=assets)
    for entry in pkg.entries:
        print(entry, file=sys.stderr)
    return 0


def _name_from(output: str) -> str:
    stem = Path(output).stem
    return stem if stem[:1].isalpha() and stem.replace("_", "").isalnum() else "app"


def cmd_nl2sar(args) -> int:
    from .nl_frontend import nl_to_sar
    from .synthesizer import ParallelExample, read_corpus

    catalog = _catalog(args) if args.catalog else None
    if args.corpus:
        corpus = read_corpus(args.corpus)
        lines, exact, failed = [], 0, 0
        for ex in corpus:
            try:
                tr = nl_to_sar(ex.nl, catalog, ex.literals)
                sar = tr.sar
            except SarError as exc:
                failed += 1
                sar = ""
                if args.verbose:
                    _emit(args, _diag_from(exc))
            exact += sar == ex.sar
            lines.append(ParallelExample(ex.nl, sar, ex.literals).to_line() + "\n")
        _write_text(args.output, "".join(lines))
        total = len(corpus)
        print(f"exact match {exact}/{total} ({exact / total:.2%}), {failed} failed" if total else "empty corpus",
              file=sys.stderr)
        return 0
    tr = nl_to_sar(_read_text(args.file), catalog, read_sidecar(args.literals) if args.literals else None)
    _write_text(args.output, tr.sar + "\n")
    sidecar = args.literals_out or (f"{args.output}.literals" if args.output and args.output != "-" else None)
    if sidecar:
        write_sidecar(tr.literals, sidecar)
    elif tr.literals:
        sys.stderr.write(tr.literals.to_sidecar())
    if not tr.report.clean:
        _emit(args, [{"code": "NL_" + key.upper(), "message": msg, "path": ""}
                     for key, msgs in tr.report.as_dict().items() for msg in msgs], warn=True)
    return 0


def cmd_synth(args) -> int:
    from .synthesizer import SynthConfig, synthesize, write_corpus

    cfg = SynthConfig.from_file(args.config) if args.config else SynthConfig()
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.rate is not None:
        overrides["mutation_rate"] = args.rate
    if overrides:
        cfg = SynthConfig.from_dict({**cfg.to_dict(), **overrides})
    corpus = synthesize(cfg, args.n)
    if args.output and args.output != "-":
        write_corpus(corpus, args.output)
    else:
        write_corpus(corpus, sys.stdout)
    return 0


def cmd_mutate(args) -> int:
    from .synthesizer import load_lexicon, mutate_corpus, read_corpus, write_corpus

    corpus = read_corpus(args.input if args.input and args.input != "-" else sys.stdin)
    if not 0.0 <= args.rate <= 1.0:
        raise _Failure([{"code": "ConfigError", "message": "--rate must lie in [0, 1]", "path": ""}])
    out = mutate_corpus(corpus, args.rate, seed=args.seed or 0, lexicon=load_lexicon(args.lexicon))
    write_corpus(out, args.output if args.output and args.output != "-" else sys.stdout)
    return 0


def cmd_split(args) -> int:
    from .synthesizer import parse_ratios, read_corpus, split, write_corpus

    ratios = parse_ratios(args.ratios_pos or args.ratios)
    corpus = read_corpus(args.input if args.input and args.input != "-" else sys.stdin)
    parts = split(corpus, ratios, seed=args.seed)
    for name, part in zip(("train", "valid", "test"), parts):
        write_corpus(part, f"{args.prefix}.{name}.tsv")
        print(f"{name}\t{len(part)}")
    return 0


def cmd_simulate(args) -> int:
    from .simulator import init, run_script

    catalog = _catalog(args)
    app, literals = _load_sar(args, catalog)
    state = run_script(init(app, literals, catalog), _read_text(args.script))
    for effect in state.effects:
        print(effect)
    return 0


# ---------------------------------------------------------------- plumbing


def _emit(args, diagnostics: list[dict], warn: bool = False) -> None:
    if getattr(args, "json", False):
        print(json.dumps({"ok": warn, "diagnostics": diagnostics}), file=sys.stderr)
        return
    label = "warning" if warn else "error"
    for d in diagnostics:
        where = f" at {d['path']}" if d.get("path") else ""
        print(f"{label}: {d['code']}{where}: {d['message']}", file=sys.stderr)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sartool", description="SAR toolchain")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable diagnostics on stderr")
    common.add_argument("--catalog", help="alternative component manifest (JSON)")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", parents=[common], help="validate SAR and print its canonical form")
    sp.add_argument("file", nargs="?", default="-")
    sp.add_argument("--literals", help="literal sidecar; also checks that every placeholder is bound")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("compile", parents=[common], help="compile SAR to an .aia archive")
    sp.add_argument("sar", nargs="?", default="-")
    sp.add_argument("--literals", help="literal sidecar (name<TAB>value lines)")
    sp.add_argument("--name", help="app name (default: output file stem)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--assets", help=f"media directory (default: ${ASSETS_ENV})")
    sp.add_argument("--user", default="user")
    sp.add_argument("--corpus", help="compile every line of a corpus; -o names a directory")
    sp.add_argument("-o", "--output", required=True)
    sp.set_defaults(func=cmd_compile)

    sp = sub.add_parser("nl2sar", parents=[common], help="translate a description to SAR")
    sp.add_argument("file", nargs="?", default="-")
    sp.add_argument("--literals", help="values for placeholders already present in the text")
    sp.add_argument("--literals-out", help="where to write the literal sidecar")
    sp.add_argument("--corpus", help="translate the NL column of a corpus file")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_nl2sar)

    sp = sub.add_parser("synth", parents=[common], help="synthesize a parallel corpus")
    sp.add_argument("--config", help="JSON synthesis config")
    sp.add_argument("-n", type=int, default=1000)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--rate", type=float, help="mutation rate applied to the NL side")
    sp.add_argument("-o", "--output")
    sp.set_defaults(func=cmd_synth)
    synth_sub = sp.add_subparsers(dest="synth_command")
    mp = synth_sub.add_parser("mutate", parents=[common], help="mutate the NL side of a corpus")
    mp.add_argument("--rate", type=float, required=True)
    mp.add_argument("--seed", type=int, default=0)
    mp.add_argument("--lexicon", help="alternative lexicon (JSON)")
    mp.add_argument("-i", "--input")
    mp.add_argument("-o", "--output")
    mp.set_defaults(func=cmd_mutate)

    sp = sub.add_parser("split", parents=[common], help="split a corpus into train/valid/test")
    sp.add_argument("ratios_pos", nargs="?", metavar="RATIOS")
    sp.add_argument("--ratios", default="8:1:1")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-i", "--input")
    sp.add_argument("--prefix", default="corpus")
    sp.set_defaults(func=cmd_split)

    sp = sub.add_parser("simulate", parents=[common], help="run a set/fire script against a SAR app")
    sp.add_argument("sar")
    sp.add_argument("--script", required=True)
    sp.add_argument("--literals")
    sp.set_defaults(func=cmd_simulate)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Failure as exc:
        _emit(args, exc.diagnostics)
        return 1
    except SarError as exc:
        _emit(args, _diag_from(exc))
        return 1
    except ValueError as exc:
        _emit(args, [{"code": "ValueError", "message": str(exc), "path": ""}])
        return 1


if __name__ == "__main__":
    sys.exit(main())
