import random

from hypothesis import given, settings
from hypothesis import strategies as st

from depgram.projectivity import (ROOT_POSITION, crossing_arcs, crossing_pairs, is_projective,
                                  marcus_violations)
from depgram.tree import Connexion
from helpers import brute_projective, figure, random_heads, tree_from_heads


def names(tree, pair):
    def one(c):
        regent = "ROOT" if c.regent == 0 else tree.nuclei[c.regent].surface
        return (c.function, regent, tree.nuclei[c.dependent].surface)
    return {one(pair.arc1), one(pair.arc2)}


def test_what_would_you_like_is_non_projective():
    t = figure("what_would_you_like")
    assert not is_projective(t)
    ids = {t.nuclei[i].surface: i for i in t.nuclei}
    triples = marcus_violations(t)
    assert any(v.dependent == ids["What"] and v.regent == ids["do"] and v.intervener == ids["would"]
               for v in triples)
    v = next(v for v in triples if v.intervener == ids["would"])
    assert (v.i, v.j, v.k) == (0, 6, 1)
    assert [names(t, p) for p in crossing_arcs(t)] == [{("obj", "do", "What"), ("main", "ROOT", "like")}]


def test_projective_figures():
    for name in ("dog_was_running", "did_the_dog_run", "jack_painted", "coordinated_elements"):
        t = figure(name)
        assert is_projective(t), name
        assert marcus_violations(t) == [] and crossing_arcs(t) == [], name


def test_chain_and_single_arc_trees():
    assert is_projective(tree_from_heads([0, 1, 2, 3, 4]))
    assert crossing_arcs(tree_from_heads([0, 1])) == []


def test_root_is_left_of_the_sentence():
    # 2 heads 1 and 3 while 1 is the top: the root arc to 2 spans position 0..1
    # and crosses nothing; 1 -> 3 covering the top nucleus 2 is what crosses.
    t = tree_from_heads([2, 0, 1])
    assert ROOT_POSITION < 0
    assert not is_projective(t)
    assert len(crossing_arcs(t)) == 1


def test_planar_but_not_projective():
    # top word 2 sits under the arc 1 -> 3; no two word-to-word arcs cross
    t = tree_from_heads([2, 0, 1])
    word_arcs = [c for c in t.connexions if c.regent != 0]
    rank = {i: i - 1 for i in t.nuclei}
    assert crossing_pairs(word_arcs, rank) == []
    assert not brute_projective([2, 0, 1])


@settings(max_examples=300, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 10))
def test_formulations_agree(seed, n):
    heads = random_heads(random.Random(seed), n)
    t = tree_from_heads(heads)
    expected = brute_projective(heads)
    assert is_projective(t) == expected
    assert (marcus_violations(t) == []) == expected
    assert (crossing_arcs(t) == []) == expected


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 9))
def test_projective_subtrees(seed, n):
    t = tree_from_heads(random_heads(random.Random(seed), n))
    if is_projective(t):
        for v in t.nuclei:
            assert is_projective(t.restrict(v))


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 8))
def test_crossings_grow_with_arcs(seed, n):
    rng = random.Random(seed)
    t = tree_from_heads(random_heads(rng, n))
    rank = {i: i - 1 for i in t.nuclei}
    arcs = list(t.connexions)
    before = crossing_pairs(arcs, rank)
    extra = Connexion(rng.randint(1, n), rng.randint(1, n), "dep:x")
    after = crossing_pairs(arcs + [extra], rank)
    assert {(p.arc1, p.arc2) for p in before} <= {(p.arc1, p.arc2) for p in after}
