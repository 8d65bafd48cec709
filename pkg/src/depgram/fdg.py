"""Reader and writer for the FDG text-based representation.

A document pairs every surface token line with zero or more analysis
lines::

    <gave>
    	"give" V PAST @+FV #2 main:>0
    <.>

Canonical form: one tab before an analysis line, single spaces between
fields, field order base / tags / ``@`` function / ``#id`` / ``label:>head``,
LF line endings with a final newline.  ``#id`` is written when the nucleus
is the top node, heads an arc, spans several segments, or has an id other
than its first token position + 1; otherwise the reader assigns exactly that id back.

Two extensions beyond the original format (not part of it):

* ``&n`` as the whole analysis line marks a further segment of nucleus
  ``#n`` (multi-word nuclei such as ``was running``);
* a leading ``%a:b:word`` field says the line analyses characters a..b
  of the token as ``word`` (segmented contractions).

Documents in a stream are separated by blank lines.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

from .tree import (ROOT, Connexion, DependencyTree, FunctionInventory, DEFAULT_INVENTORY,
                   Nucleus, WordSegment, validate_axioms)


class FdgError(ValueError):
    pass


class FdgSyntaxError(FdgError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DanglingHead(FdgError):
    def __init__(self, head: int, line: int | None = None):
        super().__init__(f"head #{head} is not declared" + (f" (line {line})" if line else ""))
        self.head = head


class DuplicateId(FdgError):
    def __init__(self, id: int, line: int | None = None):
        super().__init__(f"duplicate id #{id}" + (f" (line {line})" if line else ""))
        self.id = id


class MissingAttributes(FdgError):
    pass


@dataclass
class FdgLine:
    """One analysis line."""

    base_form: str = ""
    morph_tags: list[str] = field(default_factory=list)
    engcg_function: list[str] = field(default_factory=list)
    node_id: int | None = None
    dep: tuple[str, int] | None = None
    continues: int | None = None
    sub_span: tuple[int, int, str] | None = None
    lineno: int = 0

    def format(self) -> str:
        fields = []
        if self.sub_span is not None:
            a, b, word = self.sub_span
            fields.append(f"%{a}:{b}:{word}")
        if self.continues is not None:
            fields.append(f"&{self.continues}")
        else:
            fields.append(f'"{self.base_form}"')
            fields.extend(self.morph_tags)
            fields.extend(self.engcg_function)
            if self.node_id is not None:
                fields.append(f"#{self.node_id}")
            if self.dep is not None:
                fields.append(f"{self.dep[0]}:>{self.dep[1]}")
        return "\t" + " ".join(fields)


@dataclass
class FdgToken:
    surface: str
    analyses: list[FdgLine] = field(default_factory=list)
    lineno: int = 0


@dataclass
class FdgDocument:
    tokens: list[FdgToken] = field(default_factory=list)

    def format(self) -> str:
        out = []
        for t in self.tokens:
            out.append(f"<{t.surface}>")
            out.extend(a.format() for a in t.analyses)
        return "\n".join(out) + "\n"


_DEP = re.compile(r"^(\S+):>(\d+)$")
_ID = re.compile(r"^#(\d+)$")
_CONT = re.compile(r"^&(\d+)$")
_SPAN = re.compile(r"^%(\d+):(\d+):(\S+)$")


def _parse_analysis(body: str, lineno: int) -> FdgLine:
    line = FdgLine(lineno=lineno)
    rest = body.strip()
    if rest.startswith("%"):
        head, _, rest = rest.partition(" ")
        m = _SPAN.match(head)
        if not m:
            raise FdgSyntaxError(f"bad sub-span field {head!r}", lineno)
        line.sub_span = (int(m.group(1)), int(m.group(2)), m.group(3))
        rest = rest.strip()
    m = _CONT.match(rest)
    if m:
        line.continues = int(m.group(1))
        return line
    if not rest.startswith('"'):
        raise FdgSyntaxError("analysis line must start with a quoted base form", lineno)
    end = rest.find('"', 1)
    if end < 0:
        raise FdgSyntaxError("unterminated base form", lineno)
    line.base_form = rest[1:end]
    for f in rest[end + 1:].split():
        if (m := _DEP.match(f)) and not f.startswith("@"):
            if line.dep is not None:
                raise FdgSyntaxError("more than one dependency field", lineno)
            line.dep = (m.group(1), int(m.group(2)))
        elif m := _ID.match(f):
            if line.node_id is not None:
                raise FdgSyntaxError("more than one #id", lineno)
            line.node_id = int(m.group(1))
            if line.node_id == 0:
                raise FdgSyntaxError("#0 is reserved for the virtual root", lineno)
        elif f.startswith("@"):
            line.engcg_function.append(f)
        else:
            if line.dep is not None or line.node_id is not None or line.engcg_function:
                raise FdgSyntaxError(f"tag {f!r} out of order", lineno)
            line.morph_tags.append(f)
    return line


def parse_document(text: str, first_line: int = 1) -> FdgDocument:
    doc = FdgDocument()
    for lineno, raw in enumerate(text.split("\n"), first_line):
        if not raw.strip():
            continue
        if raw[0] in " \t":
            if not doc.tokens:
                raise FdgSyntaxError("analysis line before any token line", lineno)
            doc.tokens[-1].analyses.append(_parse_analysis(raw, lineno))
        elif raw.startswith("<") and raw.rstrip().endswith(">") and len(raw.rstrip()) > 2:
            doc.tokens.append(FdgToken(raw.rstrip()[1:-1], lineno=lineno))
        else:
            raise FdgSyntaxError(f"expected <token> or indented analysis, got {raw!r}", lineno)
    return doc


def document_to_tree(doc: FdgDocument, inventory: FunctionInventory = DEFAULT_INVENTORY,
                     validate: bool = True) -> DependencyTree:
    explicit: dict[int, FdgLine] = {}
    for t in doc.tokens:
        for a in t.analyses:
            if a.node_id is not None:
                if a.node_id in explicit:
                    raise DuplicateId(a.node_id, a.lineno)
                explicit[a.node_id] = a

    used = set(explicit)
    heads: list[tuple[int, FdgLine, WordSegment]] = []
    extra: dict[int, list[WordSegment]] = {}
    for pos, t in enumerate(doc.tokens):
        for a in t.analyses:
            if a.sub_span is not None:
                s, e, word = a.sub_span
                seg = WordSegment(word, pos, (s, e))
            else:
                seg = WordSegment(t.surface, pos)
            if a.continues is not None:
                if a.continues not in explicit:
                    raise DanglingHead(a.continues, a.lineno)
                extra.setdefault(a.continues, []).append(seg)
                continue
            id = a.node_id
            if id is None:
                id = pos + 1
                if id in used:
                    id = max(used) + 1
                used.add(id)
            heads.append((id, a, seg))

    ids = {id for id, _, _ in heads}
    nuclei, arcs = [], []
    for id, a, seg in heads:
        attrs = {"engcg": " ".join(a.engcg_function)} if a.engcg_function else {}
        nuclei.append(Nucleus(id, (seg, *extra.get(id, ())), a.base_form, tuple(a.morph_tags), attrs))
        if a.dep is not None:
            label, head = a.dep
            if head != ROOT and head not in ids:
                raise DanglingHead(head, a.lineno)
            arcs.append(Connexion(head, id, label))
    tree = DependencyTree([t.surface for t in doc.tokens], nuclei, arcs, inventory)
    if validate:
        report = validate_axioms(tree)
        if report:
            raise report[0].to_error()
    return tree


def read_fdg(text: str, inventory: FunctionInventory = DEFAULT_INVENTORY, validate: bool = True) -> DependencyTree:
    """Parse one FDG document into a validated tree."""
    return document_to_tree(parse_document(text), inventory, validate)


def tree_to_document(tree: DependencyTree, lossy: bool = False) -> FdgDocument:
    numbered = {c.regent for c in tree.connexions} | {c.dependent for c in tree.connexions if c.regent == ROOT}
    by_position: dict[int, list[tuple[WordSegment, Nucleus, bool]]] = {}
    for n in tree.nuclei.values():
        if not n.base_form and not lossy:
            raise MissingAttributes(f"nucleus {n.id} has no base form")
        segs = sorted(n.segments, key=lambda s: s.sort_key)
        for k, s in enumerate(segs):
            by_position.setdefault(s.position, []).append((s, n, k == 0))
    doc = FdgDocument()
    for pos, surface in enumerate(tree.sentence):
        tok = FdgToken(surface)
        for seg, n, first in sorted(by_position.get(pos, []), key=lambda x: x[0].sort_key):
            line = FdgLine()
            if seg.sub_span is not None:
                line.sub_span = (*seg.sub_span, seg.surface)
            if not first:
                line.continues = n.id
            else:
                line.base_form = n.base_form or seg.surface.lower()
                line.morph_tags = list(n.morph_tags)
                engcg = n.attributes.get("engcg", "")
                line.engcg_function = engcg.split() if engcg else []
                if n.id in numbered or len(n.segments) > 1 or n.id != pos + 1:
                    line.node_id = n.id
                arcs = [c for c in tree.connexions if c.dependent == n.id]
                if len(arcs) == 1:
                    line.dep = (arcs[0].function, arcs[0].regent)
                elif arcs:
                    raise FdgError(f"nucleus {n.id} has several regents; not representable")
            tok.analyses.append(line)
        doc.tokens.append(tok)
    return doc


def write_fdg(tree: DependencyTree, lossy: bool = False) -> str:
    """Canonical FDG text for a tree.

    Without ``lossy`` every nucleus needs a base form; with it, the
    lowercased surface stands in.
    """
    return tree_to_document(tree, lossy).format()


def split_documents(lines: Iterable[str]) -> Iterator[tuple[int, str]]:
    """Yield (first line number, text) for each blank-line separated document."""
    buf: list[str] = []
    start = 1
    for lineno, raw in enumerate(lines, 1):
        line = raw.rstrip("\n")
        if line.strip():
            if not buf:
                start = lineno
            buf.append(line)
        elif buf:
            yield start, "\n".join(buf) + "\n"
            buf = []
    if buf:
        yield start, "\n".join(buf) + "\n"


def read_stream(stream: TextIO | Iterable[str], inventory: FunctionInventory = DEFAULT_INVENTORY,
                validate: bool = True) -> Iterator[DependencyTree]:
    for start, text in split_documents(stream):
        yield document_to_tree(parse_document(text, start), inventory, validate)


def write_stream(trees: Iterable[DependencyTree]) -> str:
    return "\n".join(write_fdg(t) for t in trees)


# -- JSON canonical form -------------------------------------------------------


def tree_to_dict(tree: DependencyTree) -> dict:
    return {
        "sentence": list(tree.sentence),
        "nuclei": [
            {
                "id": n.id,
                "segments": [[s.surface, s.position, list(s.sub_span) if s.sub_span else None]
                             for s in n.segments],
                "base_form": n.base_form,
                "morph_tags": list(n.morph_tags),
                "attributes": dict(sorted(n.attributes.items())),
            }
            for n in tree.nuclei.values()
        ],
        "connexions": [[c.regent, c.dependent, c.function] for c in tree.connexions],
    }


def tree_from_dict(data: dict, inventory: FunctionInventory = DEFAULT_INVENTORY,
                   validate: bool = True) -> DependencyTree:
    try:
        nuclei = [
            Nucleus(
                n["id"],
                tuple(WordSegment(s, p, tuple(span) if span else None) for s, p, span in n["segments"]),
                n.get("base_form", ""),
                tuple(n.get("morph_tags", ())),
                n.get("attributes", {}),
            )
            for n in data["nuclei"]
        ]
        arcs = [Connexion(r, d, f) for r, d, f in data["connexions"]]
        tree = DependencyTree(data["sentence"], nuclei, arcs, inventory)
    except (KeyError, TypeError, ValueError) as e:
        raise FdgError(f"malformed tree record: {e}") from e
    if validate:
        report = validate_axioms(tree)
        if report:
            raise report[0].to_error()
    return tree


def dumps_json(tree: DependencyTree) -> str:
    return json.dumps(tree_to_dict(tree), ensure_ascii=False, sort_keys=True)


def loads_json(text: str, inventory: FunctionInventory = DEFAULT_INVENTORY, validate: bool = True) -> DependencyTree:
    return tree_from_dict(json.loads(text), inventory, validate)
