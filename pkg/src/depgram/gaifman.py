"""Gaifman dependency systems.

A rule ``X(Y1 ... Yl * Yl+1 ... Yn)`` lets a word of category X take
exactly the dependents Y1..Yn in that order, itself standing where the
``*`` is.  Such systems only produce projective trees and generate
context-free languages; :func:`to_cfg` gives the constructive conversion
and :func:`enumerate_language` checks the two agree on bounded lengths.

Grammar files are line oriented (``;`` also separates statements)::

    cat V
    cat N
    rule V(N * N)
    word loves:V
    word Bill:N
    root V

Recognition is a chart over spans and polynomial for a fixed grammar.
Only this fragment is handled; the unrestricted parsing problem for
grammars allowing crossing dependencies is NP-hard and out of reach here.
"""
from __future__ import annotations

import itertools
import random
import re
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .tree import ROOT, Capped, Connexion, DependencyTree, Nucleus, WordSegment, take

DEFAULT_BOUND = 10


class GrammarError(ValueError):
    pass


class GrammarSyntaxError(GrammarError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UndeclaredCategory(GrammarError):
    def __init__(self, symbol: str, line: int | None = None):
        where = f"line {line}: " if line else ""
        super().__init__(f"{where}undeclared category {symbol!r}")
        self.symbol = symbol
        self.line = line


class UnknownTerminal(GrammarError):
    def __init__(self, token: str):
        super().__init__(f"unknown terminal {token!r}")
        self.token = token


class BoundExceeded(GrammarError):
    pass


@dataclass(frozen=True)
class GaifmanRule:
    head_category: str
    left: tuple[str, ...] = ()
    right: tuple[str, ...] = ()

    def __str__(self):
        return f"{self.head_category}({' '.join(self.left + ('*',) + self.right)})"


@dataclass(frozen=True)
class GaifmanGrammar:
    categories: tuple[str, ...]
    rules: tuple[GaifmanRule, ...]
    lexicon: tuple[tuple[str, tuple[str, ...]], ...]
    root_categories: tuple[str, ...]

    def __post_init__(self):
        declared = set(self.categories)
        for r in self.rules:
            for c in (r.head_category,) + r.left + r.right:
                if c not in declared:
                    raise UndeclaredCategory(c)
        for _, cats in self.lexicon:
            for c in cats:
                if c not in declared:
                    raise UndeclaredCategory(c)
        for c in self.root_categories:
            if c not in declared:
                raise UndeclaredCategory(c)

    @property
    def terminals(self) -> tuple[str, ...]:
        return tuple(w for w, _ in self.lexicon)

    def categories_of(self, word: str) -> tuple[str, ...]:
        for w, cats in self.lexicon:
            if w == word:
                return cats
        raise UnknownTerminal(word)

    def rules_for(self, category: str) -> tuple[GaifmanRule, ...]:
        """Rules headed by ``category``; a category without rules is a leaf."""
        found = tuple(r for r in self.rules if r.head_category == category)
        return found or (GaifmanRule(category),)

    @property
    def effective_rules(self) -> tuple[GaifmanRule, ...]:
        return tuple(r for c in self.categories for r in self.rules_for(c))

    def to_text(self) -> str:
        lines = [f"cat {c}" for c in self.categories]
        lines += [f"rule {r}" for r in self.rules]
        lines += [f"word {w}:{','.join(cats)}" for w, cats in self.lexicon]
        lines += [f"root {c}" for c in self.root_categories]
        return "\n".join(lines) + "\n"


_RULE = re.compile(r"^(\S+?)\s*\((.*)\)$")


def parse_grammar(text: str) -> GaifmanGrammar:
    categories: list[str] = []
    rules: list[GaifmanRule] = []
    lexicon: dict[str, list[str]] = {}
    roots: list[str] = []
    pending: list[tuple[str, int]] = []

    statements = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        for part in raw.split("#", 1)[0].split(";"):
            if part.strip():
                statements.append((part.strip(), lineno))

    for stmt, lineno in statements:
        keyword, _, rest = stmt.partition(" ")
        rest = rest.strip()
        if keyword == "cat":
            for c in rest.replace(",", " ").split():
                if c not in categories:
                    categories.append(c)
            if not rest:
                raise GrammarSyntaxError("cat needs a symbol", lineno)
        elif keyword == "rule":
            m = _RULE.match(rest)
            if not m:
                raise GrammarSyntaxError(f"malformed rule {rest!r}", lineno)
            head, body = m.group(1), m.group(2).replace(",", " ").replace("*", " * ")
            symbols = body.split()
            if symbols.count("*") != 1:
                raise GrammarSyntaxError("rule needs exactly one '*'", lineno)
            k = symbols.index("*")
            rule = GaifmanRule(head, tuple(symbols[:k]), tuple(symbols[k + 1:]))
            pending.extend((c, lineno) for c in (head,) + rule.left + rule.right)
            if rule not in rules:
                rules.append(rule)
        elif keyword == "word":
            word, sep, cats = rest.rpartition(":")
            if not sep or not word or not cats:
                raise GrammarSyntaxError(f"expected word <surface>:<CAT>, got {rest!r}", lineno)
            entry = lexicon.setdefault(word, [])
            for c in cats.split(","):
                c = c.strip()
                pending.append((c, lineno))
                if c not in entry:
                    entry.append(c)
        elif keyword == "root":
            for c in rest.replace(",", " ").split():
                pending.append((c, lineno))
                if c not in roots:
                    roots.append(c)
        else:
            raise GrammarSyntaxError(f"unknown statement {keyword!r}", lineno)

    declared = set(categories)
    for c, lineno in pending:
        if c not in declared:
            raise UndeclaredCategory(c, lineno)
    return GaifmanGrammar(tuple(categories), tuple(rules),
                          tuple((w, tuple(c)) for w, c in lexicon.items()), tuple(roots))


# -- chart -------------------------------------------------------------------


class _Chart:
    """complete[i][j]: categories X such that words[i:j] form an X-headed subtree."""

    def __init__(self, grammar: GaifmanGrammar, words: Sequence[str]):
        self.g = grammar
        self.words = list(words)
        self.lex = [grammar.categories_of(w) for w in self.words]
        n = len(self.words)
        self.complete = [[set() for _ in range(n + 1)] for _ in range(n + 1)]
        for length in range(1, n + 1):
            for i in range(n - length + 1):
                j = i + length
                for h in range(i, j):
                    for x in self.lex[h]:
                        if x in self.complete[i][j]:
                            continue
                        for r in grammar.rules_for(x):
                            if self._fits(i, h, r.left) and self._fits(h + 1, j, r.right):
                                self.complete[i][j].add(x)
                                break

    def _fits(self, a: int, b: int, cats: Sequence[str]) -> bool:
        reach = {a}
        for c in cats:
            reach = {e for s in reach for e in range(s + 1, b + 1) if c in self.complete[s][e]}
            if not reach:
                return False
        return b in reach

    def splits(self, a: int, b: int, cats: Sequence[str]) -> Iterator[list[tuple[int, int]]]:
        """Ways to cut words[a:b] into complete spans for ``cats``, shortest first."""
        if not cats:
            if a == b:
                yield []
            return
        for e in range(a + 1, b + 1):
            if cats[0] in self.complete[a][e]:
                for rest in self.splits(e, b, cats[1:]):
                    yield [(a, e)] + rest

    def derivations(self, i: int, j: int, x: str) -> Iterator[tuple[int, list]]:
        """(head position, arcs) for every X-headed analysis of words[i:j]."""
        for h in range(i, j):
            if x not in self.lex[h]:
                continue
            for r in self.g.rules_for(x):
                for left in self.splits(i, h, r.left):
                    for right in self.splits(h + 1, j, r.right):
                        parts = [(span, cat, f"dep:l{k}") for k, (span, cat) in enumerate(zip(left, r.left), 1)]
                        parts += [(span, cat, f"dep:r{k}") for k, (span, cat) in enumerate(zip(right, r.right), 1)]
                        yield from self._combine(h, parts)

    def _combine(self, h: int, parts: list) -> Iterator[tuple[int, list]]:
        if not parts:
            yield h, []
            return
        ((a, b), cat, label), rest = parts[0], parts[1:]
        for dh, arcs in self.derivations(a, b, cat):
            for _, more in self._combine(h, rest):
                yield h, [(h, dh, label, cat)] + arcs + more


def recognize(grammar: GaifmanGrammar, sentence: Sequence[str]) -> bool:
    """True iff some projective analysis of the sentence has a root category on top."""
    words = list(sentence)
    for w in words:
        grammar.categories_of(w)
    if not words:
        return False
    chart = _Chart(grammar, words)
    return any(x in chart.complete[0][len(words)] for x in grammar.root_categories)


def _tree(words: Sequence[str], grammar: GaifmanGrammar, top: int, arcs: list, cats: dict) -> DependencyTree:
    nuclei = [Nucleus(k + 1, (WordSegment(w, k),), base_form=w, morph_tags=(cats.get(k, ""),))
              for k, w in enumerate(words)]
    connexions = [Connexion(ROOT, top + 1, "main")]
    connexions += [Connexion(h + 1, d + 1, label) for h, d, label, _ in arcs]
    return DependencyTree(words, nuclei, connexions)


def _analyses(grammar: GaifmanGrammar, words: list[str]) -> Iterator[DependencyTree]:
    chart = _Chart(grammar, words)
    n = len(words)
    seen = set()
    for h in range(n):
        for x in grammar.root_categories:
            if x not in chart.complete[0][n]:
                continue
            for head, arcs in chart.derivations(0, n, x):
                if head != h:
                    continue
                key = (head, x, tuple(sorted(arcs)))
                if key in seen:
                    continue
                seen.add(key)
                cats = {d: c for _, d, _, c in arcs}
                cats[head] = x
                yield _tree(words, grammar, head, arcs, cats)


def parse_all(grammar: GaifmanGrammar, sentence: Sequence[str], cap: int | None = None) -> Capped:
    """Distinct projective analyses, at most ``cap`` of them.

    Order: top word left to right, then rules in declaration order, then
    dependent spans with the shortest leftmost span first.  Arcs carry
    the synthesized labels ``dep:l<k>`` / ``dep:r<k>`` (k-th dependent on
    the left / right of its head).
    """
    words = list(sentence)
    for w in words:
        grammar.categories_of(w)
    if not words:
        return Capped()
    return take(_analyses(grammar, words), cap)


# -- context-free conversion -------------------------------------------------


@dataclass(frozen=True)
class Cfg:
    nonterminals: tuple[str, ...]
    terminals: tuple[str, ...]
    productions: tuple[tuple[str, tuple[str, ...]], ...]
    start: str

    def __str__(self):
        return "\n".join(f"{lhs} -> {' '.join(rhs)}" for lhs, rhs in self.productions)


def phrase_symbol(category: str) -> str:
    return f"{category}'"


def head_symbol(category: str) -> str:
    return f"{category}^"


def to_cfg(grammar: GaifmanGrammar, start: str = "S") -> Cfg:
    """Weakly equivalent context-free grammar.

    Each category X yields a phrase nonterminal X' and a preterminal X^.
    A rule X(Y1..Yl * Yl+1..Yn) becomes X' -> Y1' .. Yl' X^ Yl+1' .. Yn',
    each lexicon entry w:X becomes X^ -> w, and S -> X' for each root
    category.
    """
    while start in {phrase_symbol(c) for c in grammar.categories} | {head_symbol(c) for c in grammar.categories}:
        start += "_"
    prods: list[tuple[str, tuple[str, ...]]] = []
    for x in grammar.root_categories:
        prods.append((start, (phrase_symbol(x),)))
    for r in grammar.effective_rules:
        rhs = tuple(map(phrase_symbol, r.left)) + (head_symbol(r.head_category),) + tuple(map(phrase_symbol, r.right))
        prods.append((phrase_symbol(r.head_category), rhs))
    for w, cats in grammar.lexicon:
        for c in cats:
            prods.append((head_symbol(c), (w,)))
    nts = (start,) + tuple(f(c) for c in grammar.categories for f in (phrase_symbol, head_symbol))
    return Cfg(nts, grammar.terminals, tuple(dict.fromkeys(prods)), start)


# -- bounded languages -------------------------------------------------------


def _check_bound(max_len: int, bound: int):
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    if max_len > bound:
        raise BoundExceeded(f"max_len {max_len} exceeds bound {bound}")


def _gaifman_language(grammar: GaifmanGrammar, max_len: int) -> frozenset[str]:
    # Top-down generation of dependency trees: an X-headed subtree reads as
    # its left dependents' yields, the head word, then its right dependents'.
    heads = defaultdict(list)
    for w, cats in grammar.lexicon:
        for c in cats:
            heads[c].append(w)

    @lru_cache(maxsize=None)
    def yields(cat: str, budget: int) -> frozenset[tuple[str, ...]]:
        out = set()
        if budget < 1 or not heads[cat]:
            return frozenset()
        for r in grammar.rules_for(cat):
            deps = r.left + r.right
            if len(deps) + 1 > budget:
                continue
            for seq in sequences(deps, budget - 1):
                left, right = seq[:len(r.left)], seq[len(r.left):]
                pre = tuple(itertools.chain.from_iterable(left))
                post = tuple(itertools.chain.from_iterable(right))
                for w in heads[cat]:
                    out.add(pre + (w,) + post)
        return frozenset(out)

    def sequences(cats, budget):
        if not cats:
            yield ()
            return
        rest_min = len(cats) - 1
        for y in yields(cats[0], budget - rest_min):
            for more in sequences(cats[1:], budget - len(y)):
                yield (y,) + more

    # Fixpoint on budget: a subtree's yield uses only strictly smaller
    # yields for its dependents, so recursion terminates.
    result = set()
    for c in grammar.root_categories:
        result |= yields(c, max_len)
    return frozenset(" ".join(s) for s in result)


def _cfg_language(cfg: Cfg, max_len: int) -> frozenset[str]:
    # table[A][k]: strings of exactly length k derived from A, built
    # bottom-up by length, iterating unit productions to a fixpoint.
    nts = set(cfg.nonterminals)
    table = {a: defaultdict(set) for a in nts}

    def spans(rhs, k):
        """Strings of total length k from the symbol sequence rhs."""
        if not rhs:
            if k == 0:
                yield ()
            return
        sym, rest = rhs[0], rhs[1:]
        if sym not in nts:
            if k >= 1:
                for tail in spans(rest, k - 1):
                    yield (sym,) + tail
            return
        for m in range(1, k - len(rest) + 1):
            for s in list(table[sym][m]):
                for tail in spans(rest, k - m):
                    yield s + tail

    for k in range(1, max_len + 1):
        changed = True
        while changed:
            changed = False
            for lhs, rhs in cfg.productions:
                if len(rhs) > k:
                    continue
                for s in list(spans(rhs, k)):
                    if s not in table[lhs][k]:
                        table[lhs][k].add(s)
                        changed = True
    return frozenset(" ".join(s) for k in range(1, max_len + 1) for s in table[cfg.start][k])


def enumerate_language(grammar: GaifmanGrammar | Cfg, max_len: int, bound: int = DEFAULT_BOUND) -> frozenset[str]:
    """All accepted strings (space-joined) of length 1..max_len."""
    _check_bound(max_len, bound)
    if isinstance(grammar, Cfg):
        return _cfg_language(grammar, max_len)
    return _gaifman_language(grammar, max_len)


def brute_force_language(grammar: GaifmanGrammar, max_len: int, bound: int = DEFAULT_BOUND) -> frozenset[str]:
    """Run :func:`recognize` on every terminal string up to ``max_len``."""
    _check_bound(max_len, bound)
    out = set()
    for n in range(1, max_len + 1):
        for s in itertools.product(grammar.terminals, repeat=n):
            if recognize(grammar, s):
                out.add(" ".join(s))
    return frozenset(out)


def random_grammar(rng: random.Random, max_categories: int = 6, max_rules: int = 10,
                   max_words: int = 3, max_dependents: int = 3) -> GaifmanGrammar:
    """A small random grammar; every category gets at least one word."""
    cats = [f"C{k}" for k in range(rng.randint(1, max_categories))]
    rules = []
    # at least one leaf rule keeps most languages non-empty
    rules.append(GaifmanRule(rng.choice(cats)))
    for _ in range(rng.randint(0, max_rules - 1)):
        n = rng.randint(0, max_dependents)
        deps = tuple(rng.choice(cats) for _ in range(n))
        k = rng.randint(0, n)
        rules.append(GaifmanRule(rng.choice(cats), deps[:k], deps[k:]))
    rules = list(dict.fromkeys(rules))
    words = [f"w{k}" for k in range(rng.randint(1, max_words))]
    lexicon = {w: [] for w in words}
    for c in cats:
        lexicon[rng.choice(words)].append(c)
    for w in words:
        if not lexicon[w]:
            lexicon[w].append(rng.choice(cats))
        elif rng.random() < 0.3:
            extra = rng.choice(cats)
            if extra not in lexicon[w]:
                lexicon[w].append(extra)
    roots = rng.sample(cats, rng.randint(1, len(cats)))
    return GaifmanGrammar(tuple(cats), tuple(rules), tuple((w, tuple(c)) for w, c in lexicon.items()), tuple(roots))


def weakly_equivalent(grammar: GaifmanGrammar, max_len: int, bound: int = DEFAULT_BOUND) -> bool:
    return enumerate_language(grammar, max_len, bound) == enumerate_language(to_cfg(grammar), max_len, bound)
