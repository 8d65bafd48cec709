"""Nucleus segmentation and projective linearization.

Segmentation turns a tagged token stream into nuclei.  Contractions are
split into words first (keeping a character span back into the original
token), then grouping rules merge words: auxiliaries with their main verb
(``chain``), prepositions with their noun (``prepnoun``).  A group may
skip over material that does not belong to it, which is how the
auxiliary and main verb of a question end up in one nucleus around the
subject.

Rule file syntax, one rule per line, ``#`` comments::

    contraction wo|n't -> will/AUX not/NEG
    contraction -n't -> not/NEG
    chain AUX* NEG? V
    prepnoun PREP N
    exception elect

``|`` splits the contracted surface into the character spans owned by
each expansion word.  A surface starting with ``-`` is a suffix rule:
the rest of the token is kept as its own word.  Pattern elements are tags
with an optional ``?``, ``*`` or ``+``; the last element is the semantic
centre whose lemma becomes the nucleus base form.  ``exception`` keeps a
surface out of every group.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .tree import Capped, DependencyTree, Nucleus, TreeError, WordSegment, take

CHAIN = "chain"
PREPNOUN = "prepnoun"
CONTRACTION = "contraction"
EXCEPTION = "exception"
KINDS = (CHAIN, PREPNOUN, CONTRACTION, EXCEPTION)

BARRIER_TAGS = frozenset({"PUNCT", "CC", "V", "AUX", "PREP"})


class RuleError(ValueError):
    pass


class RuleConflict(TreeError):
    pass


@dataclass(frozen=True)
class Token:
    surface: str
    tag: str = ""
    lemma: str | None = None


@dataclass(frozen=True)
class Word:
    """A word after contraction splitting, with provenance."""

    surface: str
    tag: str
    lemma: str
    position: int
    sub_span: tuple[int, int] | None = None

    def segment(self) -> WordSegment:
        return WordSegment(self.surface, self.position, self.sub_span)


@dataclass(frozen=True)
class SegmentationRule:
    kind: str
    pattern: tuple  # tag elements ((tag, quantifier), ...) or (surface,)
    replacement: tuple = ()  # contraction: ((word, tag or None), ...)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RuleError(f"unknown rule kind {self.kind!r}")
        if self.kind == CONTRACTION and not self.replacement:
            raise RuleError("contraction needs a non-empty expansion")


_ELEMENT = re.compile(r"^([^?*+\s]+)([?*+]?)$")


def parse_rules(text: str) -> list[SegmentationRule]:
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        kind, _, rest = line.partition(" ")
        rest = rest.strip()
        if kind == CONTRACTION:
            surface, arrow, words = rest.partition("->")
            surface = surface.strip()
            if not arrow or not surface or not words.split():
                raise RuleError(f"line {lineno}: expected 'contraction <surface> -> <words>'")
            repl = []
            for w in words.split():
                word, _, tag = w.partition("/")
                repl.append((word, tag or None))
            parts = surface.lstrip("-").split("|")
            if surface.startswith("-") and len(repl) != 1:
                raise RuleError(f"line {lineno}: a suffix rule expands to exactly one word")
            if not surface.startswith("-") and len(parts) != len(repl):
                raise RuleError(f"line {lineno}: {len(parts)} surface parts for {len(repl)} words")
            rules.append(SegmentationRule(CONTRACTION, (surface,), tuple(repl)))
        elif kind in (CHAIN, PREPNOUN):
            elements = []
            for e in rest.split():
                m = _ELEMENT.match(e)
                if not m:
                    raise RuleError(f"line {lineno}: bad pattern element {e!r}")
                elements.append((m.group(1), m.group(2)))
            if not elements or elements[-1][1] in ("?", "*"):
                raise RuleError(f"line {lineno}: pattern must end in a mandatory element")
            rules.append(SegmentationRule(kind, tuple(elements)))
        elif kind == EXCEPTION:
            if not rest:
                raise RuleError(f"line {lineno}: exception needs a surface")
            rules.append(SegmentationRule(EXCEPTION, (rest,)))
        else:
            raise RuleError(f"line {lineno}: unknown rule kind {kind!r}")
    return rules


def load_rules(path: str | Path | None = None) -> list[SegmentationRule]:
    """Read a rule file; without a path, the shipped English defaults."""
    if path is None:
        text = resources.files("depgram.data").joinpath("segmentation.rules").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return parse_rules(text)


def _as_token(t) -> Token:
    if isinstance(t, Token):
        return t
    if isinstance(t, str):
        surface, _, tag = t.rpartition("/") if "/" in t else (t, "", "")
        return Token(surface, tag)
    return Token(*t)


def _match_case(word: str, original: str) -> str:
    if original[:1].isupper() and word[:1].islower():
        return word[:1].upper() + word[1:]
    return word


def expand_contraction(token, rules: Iterable[SegmentationRule], position: int = 0) -> list[Word]:
    """Split a contracted token into words; other tokens come back as one word.

    Every word carries the character span of the token it stands for.
    Whole-token rules are tried before suffix rules.
    """
    token = _as_token(token)
    surface = token.surface
    rules = [r for r in rules if r.kind == CONTRACTION]
    for r in rules:
        pattern = r.pattern[0]
        if pattern.startswith("-"):
            continue
        parts = pattern.split("|")
        if "".join(parts).lower() != surface.lower():
            continue
        if len(parts) == 1:
            (w, tag), = r.replacement
            return [Word(_match_case(w, surface), tag or token.tag, w.lower(), position, None)]
        spans, at = [], 0
        for p in parts:
            spans.append((at, at + len(p)))
            at += len(p)
        words = []
        for k, ((w, tag), span) in enumerate(zip(r.replacement, spans)):
            text = _match_case(w, surface) if k == 0 else w
            words.append(Word(text, tag or token.tag, w.lower(), position, span))
        return words
    for r in rules:
        pattern = r.pattern[0]
        if not pattern.startswith("-"):
            continue
        suffix = pattern[1:]
        if len(surface) < len(suffix) or surface[len(surface) - len(suffix):].lower() != suffix.lower():
            continue
        cut = len(surface) - len(suffix)
        (w, tag), = r.replacement
        if not cut:
            return [Word(w, tag or token.tag, w.lower(), position, None)]
        stem = surface[:cut]
        return [Word(stem, token.tag, stem.lower(), position, (0, cut)),
                Word(w, tag or token.tag, w.lower(), position, (cut, len(surface)))]
    lemma = token.lemma if token.lemma is not None else surface.lower()
    return [Word(surface, token.tag, lemma, position, None)]


def _pattern_regex(pattern: tuple) -> re.Pattern:
    return re.compile("".join(f"(?:{re.escape(t)} ){q}" for t, q in pattern))


def _match(pattern: tuple, words: Sequence[Word], start: int, blocked: set[int]) -> list[int] | None:
    """Longest group starting at ``start``, or None.

    Words whose tag occurs in the pattern are candidates; other words are
    skipped over as a gap unless they are barriers or blocked.
    """
    tags = {t for t, _ in pattern}
    if start in blocked or words[start].tag not in tags:
        return None
    stream = []
    for p in range(start, len(words)):
        tag = words[p].tag
        if p in blocked:
            break
        if tag in tags:
            stream.append(p)
        elif tag in BARRIER_TAGS:
            break
    regex = _pattern_regex(pattern)
    for n in range(len(stream), 1, -1):
        if regex.fullmatch("".join(words[p].tag + " " for p in stream[:n])):
            return stream[:n]
    return None


def _groups(rule: SegmentationRule, words: Sequence[Word], blocked: set[int]) -> list[list[int]]:
    taken = set(blocked)
    out = []
    for s in range(len(words)):
        if s in taken:
            continue
        m = _match(rule.pattern, words, s, taken)
        if m:
            out.append(m)
            taken.update(m)
    return out


def expand_tokens(tokens: Iterable, rules: Iterable[SegmentationRule]) -> list[Word]:
    rules = list(rules)
    words = []
    for pos, t in enumerate(tokens):
        words.extend(expand_contraction(t, rules, pos))
    return words


def segment(tokens: Iterable, rules: Iterable[SegmentationRule] = ()) -> list[Nucleus]:
    """Partition the (contraction-expanded) words of a sentence into nuclei.

    ``tokens`` are :class:`Token` objects, ``(surface, tag[, lemma])``
    tuples or ``"surface/TAG"`` strings.  Nucleus ids are 1..n in linear
    order of their first word.
    """
    rules = list(rules)
    words = expand_tokens(tokens, rules)
    exceptions = {r.pattern[0].lower() for r in rules if r.kind == EXCEPTION}
    blocked = {k for k, w in enumerate(words) if w.surface.lower() in exceptions}

    claimed: dict[int, int] = {}
    groups: list[tuple[list[int], SegmentationRule]] = []
    for ri, rule in enumerate(r for r in rules if r.kind in (CHAIN, PREPNOUN)):
        for g in _groups(rule, words, blocked):
            for k in g:
                if k in claimed:
                    raise RuleConflict(f"word {k} ({words[k].surface!r}) claimed by two rules",
                                       (words[k].position,))
                claimed[k] = ri
            groups.append((g, rule))

    units = [(g, rule) for g, rule in groups]
    units += [([k], None) for k in range(len(words)) if k not in claimed]
    units.sort(key=lambda u: u[0][0])

    nuclei = []
    for nid, (members, rule) in enumerate(units, 1):
        centre = words[members[-1]]
        nuclei.append(Nucleus(
            nid,
            tuple(words[k].segment() for k in members),
            base_form=centre.lemma,
            morph_tags=tuple(words[k].tag for k in members if words[k].tag),
            attributes={"kind": rule.kind} if rule else {},
        ))
    return nuclei


# -- linearization ---------------------------------------------------------


@dataclass(frozen=True)
class Linearization:
    order: tuple[int, ...]


@dataclass(frozen=True)
class LexicalException:
    """Words whose placement flips the default side of an order constraint."""

    base_forms: frozenset[str]

    def __contains__(self, base_form: str) -> bool:
        return base_form in self.base_forms


@dataclass(frozen=True)
class OrderConstraint:
    """Dependents with ``function`` go ``before`` or ``after`` their head."""

    function: str
    side: str
    exceptions: LexicalException = LexicalException(frozenset())

    def __post_init__(self):
        if self.side not in ("before", "after"):
            raise ValueError("side must be 'before' or 'after'")

    def allows(self, dependent: Nucleus, before_head: bool) -> bool:
        want_before = self.side == "before"
        if dependent.base_form in self.exceptions:
            want_before = not want_before
        return before_head == want_before


def _blocks(tree: DependencyTree, id: int, constraints: Sequence[OrderConstraint]) -> Iterator[tuple[int, ...]]:
    arcs = tree.outgoing(id)
    children = [c.dependent for c in arcs]
    rules = {}
    for c in arcs:
        rules[c.dependent] = [k for k in constraints if k.function == c.function]
    items = [id] + children
    for perm in itertools.permutations(items):
        head_at = perm.index(id)
        if not all(k.allows(tree.nuclei[d], perm.index(d) < head_at) for d in children for k in rules[d]):
            continue
        choices = [[(id,)] if x == id else _blocks(tree, x, constraints) for x in perm]
        for combo in itertools.product(*[list(c) for c in choices]):
            yield tuple(itertools.chain.from_iterable(combo))


def enumerate_projective_linearizations(tree: DependencyTree, cap: int | None = None,
                                        constraints: Sequence[OrderConstraint] = ()) -> Capped:
    """Every order of the nuclei in which each subtree is a contiguous block.

    Deterministic: heads and dependents are permuted starting from the
    current linear order.
    """
    gen = (Linearization(order) for order in _blocks(tree, tree.root, list(constraints)))
    return take(gen, cap)


def apply_linearization(tree: DependencyTree, order: Linearization | Sequence[int]) -> DependencyTree:
    """Re-anchor the tree: nucleus ``order[k]`` becomes a single word at position k."""
    order = tuple(order.order if isinstance(order, Linearization) else order)
    if sorted(order) != sorted(tree.nuclei):
        raise ValueError("order must be a permutation of the nucleus ids")
    nuclei = []
    sentence = []
    for pos, id in enumerate(order):
        n = tree.nuclei[id]
        sentence.append(n.surface)
        nuclei.append(n.replace(segments=(WordSegment(n.surface, pos),)))
    return tree.replace(sentence=sentence, nuclei=nuclei)


def linearization_count(tree: DependencyTree) -> int:
    """Product over nuclei of (number of dependents + 1)!."""
    from math import factorial, prod
    return prod(factorial(len(tree.dependents(id)) + 1) for id in tree.nuclei)
