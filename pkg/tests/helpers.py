"""Independent oracles and random generators shared by the tests.

The oracles work on plain head vectors and edge lists and never call the
library, so agreement with it is evidence rather than tautology.
"""
from __future__ import annotations

import itertools
import random
from importlib.resources import files

from depgram.fdg import read_fdg
from depgram.tree import simple_tree

FIGURES = ("what_would_you_like", "dog_was_running", "did_the_dog_run", "coordinated_elements",
           "jack_painted", "gapping_lecture", "bill_and_john")


def figure_text(name: str) -> str:
    return (files("depgram.data.figures") / f"{name}.fdg").read_text(encoding="utf-8")


def figure(name: str):
    return read_fdg(figure_text(name))


def random_heads(rng: random.Random, n: int) -> list[int]:
    """Head vector (1-based, 0 = root) of a uniformly built random tree."""
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = [0] * n
    for k, node in enumerate(order[1:], 1):
        heads[node - 1] = rng.choice(order[:k])
    return heads


def all_head_vectors(n: int):
    """Every rooted labelled tree on nodes 1..n as a head vector."""
    for heads in itertools.product(range(n + 1), repeat=n):
        if is_rooted_tree(n, [(h, d) for d, h in enumerate(heads, 1)]):
            yield list(heads)


def tree_from_heads(heads, functions=None):
    words = [f"w{k}" for k in range(1, len(heads) + 1)]
    return simple_tree(words, heads, functions)


def is_rooted_tree(n: int, edges) -> bool:
    """Edges (regent, dependent) over nodes 1..n plus root 0: a tree iff
    there are exactly n edges, 0 has a single child, nothing points at 0,
    no edge is repeated or a self-loop, and every node is reachable from 0.
    """
    edges = list(edges)
    if len(edges) != n or len(set(edges)) != n:
        return False
    if any(d == 0 or r == d or not (0 <= r <= n and 1 <= d <= n) for r, d in edges):
        return False
    if sum(1 for r, _ in edges if r == 0) != 1:
        return False
    children = {}
    for r, d in edges:
        children.setdefault(r, []).append(d)
    seen, stack = {0}, [0]
    while stack:
        for d in children.get(stack.pop(), []):
            if d not in seen:
                seen.add(d)
                stack.append(d)
    return len(seen) == n + 1


def dominates(heads, j: int, i: int) -> bool:
    """Is node i (1-based) equal to or below node j?"""
    while i != 0:
        if i == j:
            return True
        i = heads[i - 1]
    return False


def brute_projective(heads, positions=None) -> bool:
    """Direct Marcus check: O(n^3) triples, each dominance test O(n)."""
    n = len(heads)
    pos = positions or {i: i - 1 for i in range(1, n + 1)}
    at = {p: i for i, p in pos.items()}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i == j or not dominates(heads, j, i):
                continue
            lo, hi = sorted((pos[i], pos[j]))
            for p in range(lo + 1, hi):
                if not dominates(heads, j, at[p]):
                    return False
    return True


LEXICON = ("dog", "house", "run", "see", "bill", "mary", "red", "in", "the", "quickly")
TAGS = ("N", "V", "A", "DET", "PREP", "SG", "PL", "PAST")
ENGCG = ("@SUBJ", "@OBJ", "@+FV", "@DN>", "@<P", "@ADVL")
LABELS = ("subj", "obj", "v-ch", "det", "loc", "tmp", "pcomp", "pm", "oc", "pnct")


def random_lexical_tree(rng: random.Random, max_nodes: int = 8):
    """A valid tree with lexical fields, optional multi-word and uncovered tokens."""
    from depgram.tree import Connexion, DependencyTree, Nucleus, WordSegment

    n = rng.randint(1, max_nodes)
    width = n + rng.randint(0, 3)
    positions = rng.sample(range(width), n + rng.randint(0, width - n))
    owners = list(range(1, n + 1)) + [rng.randint(1, n) for _ in positions[n:]]
    rng.shuffle(owners)
    ids = rng.sample(range(1, 3 * max_nodes), n)
    sentence = [rng.choice(LEXICON).capitalize() if rng.random() < 0.2 else rng.choice(LEXICON)
                for _ in range(width)]
    segs = {}
    for p, k in zip(positions, owners):
        segs.setdefault(ids[k - 1], []).append(WordSegment(sentence[p], p))
    nuclei = []
    for i in ids:
        engcg = " ".join(rng.sample(ENGCG, rng.randint(0, 2)))
        nuclei.append(Nucleus(i, tuple(sorted(segs[i], key=lambda s: s.position)),
                              rng.choice(LEXICON), tuple(rng.sample(TAGS, rng.randint(0, 3))),
                              {"engcg": engcg} if engcg else {}))
    heads = random_heads(rng, n)
    arcs = [Connexion(0 if h == 0 else ids[h - 1], ids[d], "main" if h == 0 else rng.choice(LABELS))
            for d, h in enumerate(heads)]
    return DependencyTree(sentence, nuclei, arcs)
