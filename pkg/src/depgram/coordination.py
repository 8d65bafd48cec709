"""Coordination chains, gapping, and expansion into simple sentences.

Conjuncts are chained with ``cc`` arcs; a ``cc`` arc marks functional
equivalence, not dependency.  The conjunct attached to the shared regent
(the pivot) carries ``cc`` arcs to the other conjuncts and to the
coordinators.  A coordinator that heads ordinary dependents stands for an
elided verbal nucleus and inherits its properties (gapping); no empty
node is ever added.

Trees where the coordinator itself is the pivot, carrying the
conjuncts' function and ``cc`` arcs to each conjunct, are read the same
way.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field
from math import prod
from typing import Mapping

from .tree import ROOT, Connexion, DependencyTree, Nucleus, TreeError, WordSegment, validate_axioms

COORDINATOR_WORDS = frozenset({"and", "or", "but", "nor"})
DEFAULT_CAP = 1024
NESTED = "nested-coordination"


class CoordinationError(TreeError):
    pass


class MalformedChain(CoordinationError):
    pass


class NoAntecedent(CoordinationError):
    pass


class CombinatorialBound(CoordinationError):
    pass


@dataclass(frozen=True)
class CoordinationChain:
    anchor: int  # regent shared by the conjuncts (0 for a clausal chain at the top)
    function: str  # the function every conjunct bears toward ``anchor``
    pivot: int  # member attached to ``anchor``
    conjuncts: tuple[int, ...]
    coordinators: tuple[int, ...]
    members: frozenset[int] = field(default_factory=frozenset)


@dataclass(frozen=True)
class GapFrame:
    coordinator: int
    inherited_from: int
    inherited_attributes: Mapping[str, str] = field(default_factory=dict, hash=False)
    subcat: tuple[str, ...] = ()  # functions of the antecedent's dependents

    def __post_init__(self):
        object.__setattr__(self, "inherited_attributes", dict(self.inherited_attributes))


def _is_punct(n: Nucleus) -> bool:
    return "PUNCT" in n.morph_tags or all(
        unicodedata.category(ch).startswith("P") for s in n.segments for ch in s.surface)


def is_coordinator(n: Nucleus) -> bool:
    return ("CC" in n.morph_tags or "@CC" in n.attributes.get("engcg", "").split()
            or n.base_form.lower() in COORDINATOR_WORDS or _is_punct(n))


def _cc(tree: DependencyTree) -> str:
    return tree.inventory.non_dependency


def _governs(tree: DependencyTree, id: int) -> bool:
    """Heads at least one ordinary (non-cc) dependent."""
    return any(c.function != _cc(tree) for c in tree.outgoing(id))


def detect_chains(tree: DependencyTree) -> list[CoordinationChain]:
    """Maximal cc-connected groups, ordered by the pivot's position."""
    cc = _cc(tree)
    links: dict[int, set[int]] = {}
    for c in tree.connexions:
        if c.function == cc:
            if c.regent == ROOT:
                raise MalformedChain(f"cc arc from the virtual root to {c.dependent}", (c.dependent,))
            links.setdefault(c.regent, set()).add(c.dependent)
            links.setdefault(c.dependent, set()).add(c.regent)

    chains, seen = [], set()
    for start in sorted(links, key=lambda i: tree.nuclei[i].anchor):
        if start in seen:
            continue
        group, stack = {start}, [start]
        while stack:
            for nxt in links[stack.pop()]:
                if nxt not in group:
                    group.add(nxt)
                    stack.append(nxt)
        seen |= group
        tops = [m for m in group if tree.function_of(m) != cc]
        if len(tops) != 1:
            raise MalformedChain(f"chain {sorted(group)} has no unique attachment", tuple(sorted(group)))
        pivot = tops[0]
        order = sorted(group, key=lambda i: tree.nuclei[i].anchor)
        coordinators = tuple(m for m in order if is_coordinator(tree.nuclei[m]))
        conjuncts = tuple(m for m in order if not is_coordinator(tree.nuclei[m]) or _governs(tree, m))
        if pivot in coordinators and not _governs(tree, pivot):
            conjuncts = tuple(m for m in conjuncts if m != pivot)
        if len(conjuncts) < 2:
            raise MalformedChain(f"chain {order} links fewer than two conjuncts", tuple(order))
        chains.append(CoordinationChain(tree.regent_of(pivot), tree.function_of(pivot), pivot,
                                        conjuncts, coordinators, frozenset(group)))
    return chains


def apply_gapping(tree: DependencyTree) -> DependencyTree:
    """Attach a GapFrame to every coordinator that heads ordinary dependents."""
    cc = _cc(tree)
    frames = []
    for n in tree.ordered():
        if not is_coordinator(n) or not _governs(tree, n.id):
            continue
        arc = tree.connexion_to(n.id)
        a, hops = arc.regent, 0
        if arc.function != cc or a == ROOT:
            raise NoAntecedent(f"coordinator {n.id} heads dependents but has no cc-linked antecedent", (n.id,))
        # a gapped coordinator linked to another gapped one shares its antecedent
        while is_coordinator(tree.nuclei[a]) and _governs(tree, a) and tree.function_of(a) == cc:
            a = tree.regent_of(a)
            hops += 1
            if a == ROOT or hops > len(tree):
                raise NoAntecedent(f"coordinator {n.id} has no verbal antecedent", (n.id,))
        antecedent = tree.nuclei[a]
        subcat = tuple(c.function for c in tree.outgoing(a) if c.function != cc)
        frames.append(GapFrame(n.id, a, dict(antecedent.attributes), subcat))
    return tree.replace(gap_frames=frames)


def _own(tree: DependencyTree, member: int, chain_members: frozenset[int]) -> set[int]:
    """The member plus everything below it that is not another member's."""
    out, stack = {member}, [member]
    while stack:
        for c in tree.outgoing(stack.pop()):
            if c.dependent not in chain_members and c.dependent not in out:
                out.add(c.dependent)
                stack.append(c.dependent)
    return out


def _select(tree: DependencyTree, chain: CoordinationChain, choice: int) -> DependencyTree:
    drop = set()
    for m in chain.members:
        if m != choice:
            drop |= _own(tree, m, chain.members)
    drop -= _own(tree, choice, chain.members)
    frames = {f.coordinator: f for f in tree.gap_frames}

    nuclei = {i: n for i, n in tree.nuclei.items() if i not in drop}
    arcs = [c for c in tree.connexions
            if c.dependent in nuclei and c.regent in nuclei.keys() | {ROOT} and c.dependent != choice]
    arcs.append(Connexion(chain.anchor, choice, chain.function))

    # order key per segment: (position, sub-span start, tiebreak)
    keys: dict[tuple[int, int], list] = {}
    for n in nuclei.values():
        for s in n.segments:
            keys[(n.id, id(s))] = [s.sort_key + (0,), s]

    substituted = None
    if choice in frames:
        f = frames[choice]
        ante = tree.nuclei[f.inherited_from]
        head = nuclei[choice]
        left_functions = {tree.function_of(d.id) for d in tree.dependents(ante.id)
                          if d.anchor < ante.anchor}
        deps = [d for d in tree.dependents(choice) if d.id in nuclei]
        leftish = [d for d in deps if tree.function_of(d.id) in left_functions]
        if leftish:
            last = max((nuclei[x].anchor for x in _own(tree, leftish[-1].id, chain.members) if x in nuclei))
            at = last + (1,)
        elif deps:
            first = min((nuclei[x].anchor for x in _own(tree, deps[0].id, chain.members) if x in nuclei))
            at = first + (-1,)
        else:
            at = head.anchor + (0,)
        for s in head.segments:
            keys.pop((choice, id(s)))
        substituted = ante.replace(id=choice)
        for k, s in enumerate(sorted(substituted.segments, key=lambda s: s.sort_key)):
            keys[(choice, ("sub", k))] = [at + (k,), s]
        nuclei[choice] = substituted

    # compact sentence over the surviving tokens
    order = sorted(keys.items(), key=lambda kv: kv[1][0])
    new_pos: dict = {}
    sentence: list[str] = []
    segments: dict[int, list[WordSegment]] = {}
    for (nid, token), (key, s) in order:
        if substituted is not None and nid == choice:
            slot = ("sub", token)
            text = s.surface
        else:
            slot = s.position
            text = tree.sentence[s.position] if s.position < len(tree.sentence) else s.surface
        if slot not in new_pos:
            new_pos[slot] = len(sentence)
            sentence.append(text)
        segments.setdefault(nid, []).append(WordSegment(s.surface, new_pos[slot], s.sub_span))
    rebuilt = [n.replace(segments=tuple(segments[i])) for i, n in nuclei.items()]
    frames_left = [f for f in tree.gap_frames if f.coordinator in nuclei and f.coordinator != choice]
    return DependencyTree(sentence, rebuilt, arcs, tree.inventory, frames_left, tree.flags)


def _depth(tree: DependencyTree, id: int) -> int:
    d = 0
    while id != ROOT:
        id = tree.regent_of(id)
        d += 1
    return d


def expand_combinations(tree: DependencyTree, cap: int = DEFAULT_CAP) -> list[DependencyTree]:
    """One simple-sentence tree per choice of a conjunct in every chain.

    Chains are resolved outermost first.  When a chain sits inside a
    conjunct of another chain, every output carries the
    ``nested-coordination`` flag.
    """
    if not tree.gap_frames:
        tree = apply_gapping(tree)
    chains = detect_chains(tree)
    if not chains:
        return [tree]
    total = prod(len(c.conjuncts) for c in chains)
    if total > cap:
        raise CombinatorialBound(f"{total} combinations exceed the cap of {cap}")

    nested = False
    for outer in chains:
        owned = set()
        for m in outer.conjuncts:
            owned |= _own(tree, m, outer.members) - {m}
        if any(inner.pivot in owned for inner in chains if inner is not outer):
            nested = True
    first = min(chains, key=lambda c: (_depth(tree, c.pivot), tree.nuclei[c.pivot].anchor))

    out = []
    for choice in first.conjuncts:
        picked = _select(tree, first, choice)
        if nested:
            picked = picked.replace(flags=picked.flags | {NESTED})
        for t in expand_combinations(picked, cap):
            report = validate_axioms(t)
            if report:
                raise report[0].to_error()
            out.append(t.replace(gap_frames=()))
    return out


def realize(tree: DependencyTree) -> str:
    """Surface string of a tree, words as they stand (no re-inflection)."""
    return " ".join(tree.sentence)
