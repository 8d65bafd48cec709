"""Command-line entry point: ``depgram <command> [input]``.

Tree commands read FDG documents separated by blank lines (or JSON
records, one per line, for ``convert``) from a file or stdin and handle
them one at a time.  Exit status: 0 success, 1 findings (axiom
violations, non-projective trees under ``--require-projective``,
unrecognized sentences, differing languages), 2 usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterable, Iterator

from . import coordination, fdg, gaifman, nucleus, projectivity, render
from .tree import TreeError, validate_axioms

COMMANDS = ("parse", "validate", "projectivity", "segment", "expand", "convert", "render", "lang", "equiv")
OK, FINDINGS, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    input: str | None = None  # None or "-" means stdin
    output: str | None = None
    grammar: str | None = None
    rules: str | None = None
    cap: int = coordination.DEFAULT_CAP
    max_len: int = 8
    format: str | None = None
    report: str = "text"
    require_projective: bool = False
    jobs: int = 1
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.cap < 1 or self.max_len < 1 or self.jobs < 1:
            raise UsageError("--cap, --max-len and --jobs must be positive")


@dataclass
class Result:
    text: str
    record: dict
    status: int = OK


# -- per-document handlers ---------------------------------------------------


def _load_tree(lineno: int, text: str, validate: bool = True):
    if text.lstrip().startswith("{"):
        try:
            return fdg.loads_json(text, validate=validate)
        except json.JSONDecodeError as e:
            raise fdg.FdgSyntaxError(e.msg, lineno) from e
    return fdg.document_to_tree(fdg.parse_document(text, lineno), validate=validate)


def _emit(tree, fmt: str) -> str:
    if fmt == "json":
        return fdg.dumps_json(tree) + "\n"
    if fmt in render.FORMATS:
        return render.render(tree, fmt)
    return fdg.write_fdg(tree, lossy=True)


def do_validate(cfg: CliConfig, lineno: int, text: str) -> Result:
    tree = _load_tree(lineno, text, validate=False)
    found = validate_axioms(tree)
    if not found:
        return Result("axioms: ok\n", {"ok": True, "violations": []})
    lines = "".join(f"axioms: {v.kind} {list(v.ids)} {v.message}".rstrip() + "\n" for v in found)
    return Result(lines, {"ok": False, "violations": [
        {"kind": v.kind, "ids": list(v.ids), "message": v.message} for v in found]}, FINDINGS)


def _arc(tree, c) -> str:
    return render._arc_name(tree, c)


def do_projectivity(cfg: CliConfig, lineno: int, text: str) -> Result:
    tree = _load_tree(lineno, text)
    pairs = projectivity.crossing_arcs(tree)
    triples = projectivity.marcus_violations(tree)
    ok = projectivity.is_projective(tree)
    out = [f"projective: {'yes' if ok else 'no'}"]
    out += [f"crossing: {_arc(tree, p.arc1)} x {_arc(tree, p.arc2)}" for p in pairs]
    out.append(f"marcus-violations: {len(triples)}")
    record = {"projective": ok,
              "crossings": [[_arc(tree, p.arc1), _arc(tree, p.arc2)] for p in pairs],
              "marcus_violations": [[t.dependent, t.regent, t.intervener] for t in triples]}
    status = FINDINGS if cfg.require_projective and not ok else OK
    return Result("\n".join(out) + "\n", record, status)


def do_expand(cfg: CliConfig, lineno: int, text: str) -> Result:
    tree = _load_tree(lineno, text)
    expanded = coordination.expand_combinations(tree, cfg.cap)
    fmt = cfg.format or "fdg"
    body = "\n".join(_emit(t, fmt) for t in expanded) if fmt != "text" else \
        "".join(coordination.realize(t) + "\n" for t in expanded)
    record = {"sentences": [coordination.realize(t) for t in expanded],
              "flags": sorted(set().union(*(t.flags for t in expanded)))}
    return Result(body, record)


def do_convert(cfg: CliConfig, lineno: int, text: str) -> Result:
    tree = _load_tree(lineno, text)
    fmt = cfg.format or ("fdg" if text.lstrip().startswith("{") else "json")
    return Result(_emit(tree, fmt), {"tree": fdg.tree_to_dict(tree)})


def do_render(cfg: CliConfig, lineno: int, text: str) -> Result:
    tree = _load_tree(lineno, text)
    fmt = cfg.format or "ascii"
    if fmt not in render.FORMATS:
        raise UsageError(f"render supports --format {' or '.join(render.FORMATS)}")
    out = render.render(tree, fmt)
    return Result(out, {"format": fmt, "text": out})


def do_parse(cfg: CliConfig, lineno: int, text: str) -> Result:
    grammar = cfg.extra["grammar"]
    words = text.split()
    trees = gaifman.parse_all(grammar, words, cfg.cap)
    fmt = cfg.format or "fdg"
    body = "\n".join(_emit(t, fmt) for t in trees) if trees else f"no analysis: {text.strip()}\n"
    record = {"sentence": text.strip(), "recognized": bool(trees), "parses": len(trees),
              "cap_exceeded": trees.cap_exceeded}
    return Result(body, record, OK if trees else FINDINGS)


def do_segment(cfg: CliConfig, lineno: int, text: str) -> Result:
    nuclei = nucleus.segment(text.split(), cfg.extra["rules"])
    out = []
    for n in nuclei:
        kind = n.attributes.get("kind", "word")
        out.append(f"#{n.id}\t{n.surface}\t{n.base_form}\t{' '.join(n.morph_tags)}\t{kind}")
    record = {"nuclei": [{"id": n.id, "surface": n.surface, "base_form": n.base_form,
                          "morph_tags": list(n.morph_tags),
                          "positions": [s.position for s in n.segments]} for n in nuclei]}
    return Result("\n".join(out) + "\n", record)


HANDLERS: dict[str, Callable[[CliConfig, int, str], Result]] = {
    "validate": do_validate, "projectivity": do_projectivity, "expand": do_expand,
    "convert": do_convert, "render": do_render, "parse": do_parse, "segment": do_segment,
}


def _safe(cfg: CliConfig, lineno: int, text: str) -> Result:
    try:
        result = HANDLERS[cfg.command](cfg, lineno, text)
    except fdg.FdgSyntaxError as e:
        return Result("", {"error": str(e)}, USAGE)
    except (fdg.FdgError, TreeError, gaifman.GrammarError, nucleus.RuleError) as e:
        return Result("", {"error": f"line {lineno}: {type(e).__name__}: {e}"}, FINDINGS)
    result.record = {"line": lineno, **result.record}
    return result


def _worker(args):
    return _safe(*args)


# -- input -------------------------------------------------------------------


def _read_text(path: str | None) -> Iterable[str]:
    if path in (None, "-"):
        return sys.stdin
    try:
        return open(path, encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from e


def _units(cfg: CliConfig, lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    if cfg.command in ("parse", "segment"):
        # one sentence per line
        for lineno, raw in enumerate(lines, 1):
            if raw.strip() and not raw.lstrip().startswith("#"):
                yield lineno, raw.strip()
        return
    first = None
    lines = iter(lines)
    for raw in lines:
        if raw.strip():
            first = raw
            break
    if first is None:
        return
    if first.lstrip().startswith("{"):
        lineno = 1
        for lineno, raw in enumerate([first, *lines], 1):
            if raw.strip():
                yield lineno, raw
        return
    yield from fdg.split_documents(_chain_first(first, lines))


def _chain_first(first: str, rest: Iterable[str]) -> Iterator[str]:
    yield first
    yield from rest


def _grammar(cfg: CliConfig) -> gaifman.GaifmanGrammar:
    if not cfg.grammar:
        raise UsageError(f"{cfg.command} needs --grammar")
    try:
        text = Path(cfg.grammar).read_text(encoding="utf-8")
    except OSError as e:
        raise UsageError(f"cannot read {cfg.grammar}: {e.strerror}") from e
    try:
        return gaifman.parse_grammar(text)
    except gaifman.GrammarError as e:
        raise UsageError(f"{cfg.grammar}: {e}") from e


def _language_commands(cfg: CliConfig, out) -> int:
    grammar = _grammar(cfg)
    try:
        if cfg.command == "lang":
            via = cfg.extra.get("via", "gaifman")
            source = gaifman.to_cfg(grammar) if via == "cfg" else grammar
            strings = sorted(gaifman.enumerate_language(source, cfg.max_len),
                             key=lambda s: (len(s.split()), s))
            if cfg.report == "json-lines":
                for s in strings:
                    out.write(json.dumps({"string": s}) + "\n")
            else:
                out.write("".join(s + "\n" for s in strings))
            return OK
        left = gaifman.enumerate_language(grammar, cfg.max_len)
        right = gaifman.enumerate_language(gaifman.to_cfg(grammar), cfg.max_len)
    except gaifman.BoundExceeded as e:
        raise UsageError(str(e)) from e
    equal = left == right
    if cfg.report == "json-lines":
        out.write(json.dumps({"grammar": cfg.grammar, "equal": equal, "size": len(left),
                              "only_dependency": sorted(left - right),
                              "only_cfg": sorted(right - left)}) + "\n")
    else:
        out.write(f"{'equal' if equal else 'differ'} ({len(left)} strings up to length {cfg.max_len})\n")
        for s in sorted(left - right):
            out.write(f"  only dependency grammar: {s}\n")
        for s in sorted(right - left):
            out.write(f"  only context-free grammar: {s}\n")
    return OK if equal else FINDINGS


def run(cfg: CliConfig, out=None, err=None) -> int:
    """Execute one command; returns the exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        if cfg.command in ("lang", "equiv"):
            return _language_commands(cfg, out)
        if cfg.command == "parse":
            cfg.extra["grammar"] = _grammar(cfg)
        if cfg.command == "segment":
            try:
                cfg.extra["rules"] = nucleus.load_rules(cfg.rules)
            except OSError as e:
                raise UsageError(f"cannot read rules {cfg.rules}: {e.strerror}") from e
            except nucleus.RuleError as e:
                raise UsageError(f"{cfg.rules}: {e}") from e
        units = _units(cfg, _read_text(cfg.input))
        if cfg.jobs > 1:
            pool = ProcessPoolExecutor(cfg.jobs)
            results = pool.map(_worker, ((cfg, ln, text) for ln, text in units), chunksize=4)
        else:
            pool = None
            results = (_safe(cfg, ln, text) for ln, text in units)
        status = OK
        try:
            for r in results:
                if r.status != OK and "error" in r.record:
                    err.write(f"{cfg.input or '<stdin>'}: {r.record['error']}\n")
                if cfg.report == "json-lines":
                    out.write(json.dumps({"status": r.status, **r.record}, ensure_ascii=False) + "\n")
                elif r.text:
                    out.write(r.text)
                status = max(status, r.status)
        finally:
            if pool:
                pool.shutdown()
        return status
    except UsageError as e:
        err.write(f"depgram: {e}\n")
        return USAGE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="depgram", description="Dependency grammar toolkit.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("input", nargs="?", help="input file (default: stdin)")
    common.add_argument("-o", "--output", help="output file (default: stdout)")
    common.add_argument("--report", choices=("text", "json-lines"), default="text")
    common.add_argument("--jobs", type=int, default=1, help="worker processes; output keeps input order")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def add(name, help, **flags):
        p = sub.add_parser(name, parents=[common], help=help)
        if flags.get("grammar"):
            p.add_argument("--grammar", required=True, help="grammar file")
        if flags.get("cap"):
            p.add_argument("--cap", type=int, default=coordination.DEFAULT_CAP)
        if flags.get("formats"):
            p.add_argument("--format", choices=flags["formats"])
        if flags.get("max_len"):
            p.add_argument("--max-len", type=int, default=8)
        return p

    add("parse", "parse sentences (one per line) with a dependency grammar",
        grammar=True, cap=True, formats=("fdg", "json", "ascii", "dot"))
    add("validate", "check FDG documents against the tree axioms")
    p = add("projectivity", "report crossing arcs and subordination violations")
    p.add_argument("--require-projective", action="store_true", help="exit 1 on any non-projective tree")
    p = add("segment", "group tagged tokens (surface/TAG) into nuclei")
    p.add_argument("--rules", help="segmentation rule file (default: built-in English rules)")
    add("expand", "expand coordination into simple sentences", cap=True,
        formats=("fdg", "json", "ascii", "dot", "text"))
    add("convert", "convert between FDG and JSON", formats=("fdg", "json"))
    add("render", "draw trees", formats=render.FORMATS)
    p = add("lang", "list the strings a grammar generates", grammar=True, max_len=True)
    p.add_argument("--via", choices=("gaifman", "cfg"), default="gaifman")
    add("equiv", "compare a grammar with its context-free conversion", grammar=True, max_len=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    opts = vars(args)
    known = {k: opts.pop(k) for k in list(opts) if k in CliConfig.__dataclass_fields__}
    try:
        cfg = CliConfig(**known, extra=opts)
    except UsageError as e:
        print(f"depgram: {e}", file=sys.stderr)
        return USAGE
    if cfg.output:
        try:
            with open(cfg.output, "w", encoding="utf-8", newline="\n") as out:
                return run(cfg, out)
        except OSError as e:
            print(f"depgram: cannot write {cfg.output}: {e.strerror}", file=sys.stderr)
            return USAGE
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
