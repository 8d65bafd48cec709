import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from depgram.tree import (ROOT, Connexion, Cycle, DanglingReference, DependencyTree, FunctionInventory,
                          InvalidFunction, InvalidNucleus, IsolatedNode, MultipleDependency,
                          MultipleHeads, MultipleRoots, NoRoot, Nucleus, SegmentOverlap, UnknownId,
                          WordSegment, build_tree, canonical_shape, simple_tree, validate_axioms)
from helpers import figure, random_heads, tree_from_heads


def seg(word, pos, span=None):
    return WordSegment(word, pos, span)


def dog_tree():
    sentence = ["The", "dog", "was", "running", "in", "the", "house"]
    nuclei = [
        Nucleus(1, (seg("The", 0),), "the"),
        Nucleus(2, (seg("dog", 1),), "dog"),
        Nucleus(3, (seg("was", 2), seg("running", 3)), "run"),
        Nucleus(4, (seg("in", 4), seg("house", 6)), "in house"),
        Nucleus(5, (seg("the", 5),), "the"),
    ]
    arcs = [Connexion(0, 3, "main"), Connexion(3, 2, "subj"), Connexion(2, 1, "det"),
            Connexion(3, 4, "loc"), Connexion(4, 5, "det")]
    return build_tree(sentence, nuclei, arcs)


def test_dog_tree_is_valid_with_discontiguous_verb_chain():
    t = dog_tree()
    assert validate_axioms(t) == []
    assert [s.position for s in t.nuclei[3].segments] == [2, 3]
    assert t.root == 3
    assert [n.id for n in t.dependents(3)] == [2, 4]
    assert t.regent_of(1) == 2
    assert t.subtree(3) == frozenset(t.nuclei)
    assert t.subtree(5) == {5}


def test_one_node_tree():
    t = build_tree(["Run"], [Nucleus(1, (seg("Run", 0),), "run")], [Connexion(0, 1, "main")])
    assert len(t) == 1 and t.root == 1


def _nodes(n):
    return [Nucleus(i, (seg(f"w{i}", i - 1),), f"w{i}") for i in range(1, n + 1)]


def test_mutual_dependency_is_a_cycle():
    with pytest.raises(Cycle) as e:
        build_tree(["a", "b"], _nodes(2), [Connexion(0, 1, "main"), Connexion(1, 2, "subj"),
                                           Connexion(2, 1, "det")])
    assert list(e.value.ids) == [1, 2]


@pytest.mark.parametrize("arcs, error", [
    ([(0, 1, "main"), (1, 2, "subj"), (1, 3, "obj"), (2, 3, "det")], MultipleHeads),
    ([(1, 2, "subj"), (1, 3, "obj")], NoRoot),
    ([(0, 1, "main"), (0, 2, "main"), (1, 3, "obj")], MultipleRoots),
    ([(0, 1, "main"), (1, 2, "subj")], IsolatedNode),
    ([(0, 1, "main"), (1, 2, "subj"), (1, 2, "obj"), (1, 3, "det")], MultipleDependency),
    ([(0, 1, "main"), (1, 2, "subj"), (1, 9, "obj")], DanglingReference),
    ([(0, 1, "main"), (1, 2, "nonsense"), (1, 3, "obj")], InvalidFunction),
    ([(0, 1, "main"), (1, 2, "main"), (1, 3, "obj")], InvalidFunction),
    ([(0, 1, "subj"), (1, 2, "subj"), (1, 3, "obj")], InvalidFunction),
])
def test_axiom_errors(arcs, error):
    with pytest.raises(error):
        build_tree(["a", "b", "c"], _nodes(3), [Connexion(*a) for a in arcs])


def test_validate_reports_multiple_heads():
    t = DependencyTree(["a", "b", "c"], _nodes(3),
                       [Connexion(0, 1, "main"), Connexion(1, 3, "obj"), Connexion(1, 2, "subj"),
                        Connexion(2, 3, "det")])
    assert [v.kind for v in validate_axioms(t)] == ["MultipleHeads"]


def test_segment_overlap_and_sub_spans():
    nuclei = [Nucleus(1, (seg("will", 0, (0, 2)),), "will"), Nucleus(2, (seg("not", 0, (2, 5)),), "not")]
    arcs = [Connexion(0, 1, "main"), Connexion(1, 2, "pm")]
    assert validate_axioms(DependencyTree(["won't"], nuclei, arcs)) == []
    clash = [Nucleus(1, (seg("a", 0),), "a"), Nucleus(2, (seg("a", 0),), "a")]
    with pytest.raises(SegmentOverlap):
        build_tree(["a"], clash, arcs)


def test_uncovered_tokens_are_allowed():
    t = build_tree(["Run", "!"], [Nucleus(1, (seg("Run", 0),), "run")], [Connexion(0, 1, "main")])
    assert validate_axioms(t) == []


def test_invalid_nuclei():
    with pytest.raises(InvalidNucleus):
        build_tree(["a"], [Nucleus(1, (), "a")], [Connexion(0, 1, "main")])
    with pytest.raises(InvalidNucleus):
        build_tree(["a"], [Nucleus(1, (seg("a", 0),)), Nucleus(1, (seg("a", 0),))], [])


def test_unknown_id():
    with pytest.raises(UnknownId):
        dog_tree().subtree(42)
    with pytest.raises(UnknownId):
        dog_tree().dependents(42)


def test_non_projective_figure_is_axiom_valid():
    assert validate_axioms(figure("what_would_you_like")) == []


def test_inventory_configuration(tmp_path):
    path = tmp_path / "functions.txt"
    path.write_text("main\ncc\nattr  # attributive\nfamily x-\n")
    inv = FunctionInventory.from_file(path)
    assert "attr" in inv and "x-foo" in inv and "subj" not in inv
    assert inv.non_dependency == "cc"
    t = simple_tree(["a", "b"], [0, 1], ["main", "attr"], inventory=inv)
    assert validate_axioms(t) == []
    assert "attr" in FunctionInventory().extend(["attr"])


def test_restrict_and_canonical_shape():
    t = dog_tree()
    sub = t.restrict(4)
    assert set(sub.nuclei) == {4, 5} and sub.root == 4
    assert canonical_shape(t)[2] == ("run", 0, "main")


def test_equality_ignores_connexion_order():
    t = dog_tree()
    assert t == t.replace(connexions=tuple(reversed(t.connexions)))
    assert t != t.replace(connexions=t.connexions[:-1])


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 8))
def test_subtree_properties(seed, n):
    t = tree_from_heads(random_heads(random.Random(seed), n))
    assert validate_axioms(t) == []
    assert len(t.connexions) == len(t.nuclei)
    assert t.subtree(t.root) == frozenset(t.nuclei)
    for v in t.nuclei:
        kids = [d.id for d in t.dependents(v)]
        union = {v}.union(*(t.subtree(c) for c in kids))
        assert union == t.subtree(v)
        for a in range(len(kids)):
            for b in range(a + 1, len(kids)):
                assert not t.subtree(kids[a]) & t.subtree(kids[b])


@settings(max_examples=300, deadline=None)
@given(n=st.integers(1, 5), raw=st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5)), max_size=7))
def test_build_tree_agrees_with_validate(n, raw):
    arcs = [Connexion(r, d, "main" if r == ROOT else "subj") for r, d in raw if r <= n and d <= n]
    t = DependencyTree(["w"] * n, _nodes(n), arcs)
    ok = validate_axioms(t) == []
    try:
        build_tree(["w"] * n, _nodes(n), arcs)
        built = True
    except Exception:
        built = False
    assert ok == built
