"""Projectivity of dependency trees.

Two formulations are provided.  The subordination formulation reports
triples (i, j, k): a_i is subordinate to a_j, k lies strictly between
them and a_k is not subordinate to a_j.  The arc formulation reports
pairs of interleaving arcs.  Every nucleus is anchored at its first
segment; comparisons use anchor order only.

For the arc formulation the virtual root sits to the left of the first
word, so the root connexion takes part in crossing tests.  Without that,
a tree whose top nucleus is covered by another arc (which is planar but
not projective) would go unreported.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping

from .tree import ROOT, Connexion, DependencyTree, TreeError

ROOT_POSITION = -1


class UnanchoredNucleus(TreeError):
    pass


@dataclass(frozen=True)
class MarcusTriple:
    """a_dependent is subordinate to a_regent but a_intervener, lying between, is not.

    ``i``, ``j`` and ``k`` are the anchor token positions of the three nuclei.
    """

    i: int
    j: int
    k: int
    dependent: int
    regent: int
    intervener: int


@dataclass(frozen=True)
class CrossingArcs:
    arc1: Connexion
    arc2: Connexion


def anchors(tree: DependencyTree) -> dict[int, int]:
    """Rank of each nucleus in linear order (0-based)."""
    for n in tree.nuclei.values():
        if not n.segments:
            raise UnanchoredNucleus(f"nucleus {n.id} has no segments", (n.id,))
    return {n.id: k for k, n in enumerate(tree.ordered())}


def _position(tree: DependencyTree, id: int) -> int:
    return tree.nuclei[id].anchor[0]


def is_projective(tree: DependencyTree) -> bool:
    """True iff every subtree occupies a contiguous block of the linear order."""
    rank = anchors(tree)
    for id in tree.nuclei:
        block = [rank[x] for x in tree.subtree(id)]
        if max(block) - min(block) + 1 != len(block):
            return False
    return True


def marcus_violations(tree: DependencyTree) -> list[MarcusTriple]:
    rank = anchors(tree)
    by_rank = sorted(rank, key=rank.get)
    out = []
    for j in sorted(tree.nuclei, key=rank.get):
        below = tree.subtree(j)
        for i in sorted(below, key=rank.get):
            if i == j:
                continue
            lo, hi = sorted((rank[i], rank[j]))
            for k in by_rank[lo + 1:hi]:
                if k not in below:
                    out.append(MarcusTriple(_position(tree, i), _position(tree, j), _position(tree, k),
                                            i, j, k))
    return out


def crossing_pairs(arcs: Iterable[Connexion], rank: Mapping[int, int]) -> list[CrossingArcs]:
    """All pairs of strictly interleaving arcs under the given anchor ranks.

    The virtual root (id 0) is placed before every word.
    """
    arcs = list(arcs)

    def span(c):
        a = ROOT_POSITION if c.regent == ROOT else rank[c.regent]
        b = rank[c.dependent]
        return (a, b) if a < b else (b, a)

    spans = [span(c) for c in arcs]
    out = []
    for (x, (a, b)), (y, (c, d)) in combinations(enumerate(spans), 2):
        if a < c < b < d or c < a < d < b:
            out.append(CrossingArcs(arcs[x], arcs[y]))
    return out


def crossing_arcs(tree: DependencyTree) -> list[CrossingArcs]:
    return crossing_pairs(tree.connexions, anchors(tree))
