import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_rewriting.analysis import (
    cyclic_confluence_verdict,
    find_candidates,
    find_cyclical_inclusions,
    find_cyclical_overlaps,
    is_c_defined,
    presuf_guarantees_defined,
    presuf_intersections,
    probe_termination,
    resolve_pair,
    wrap_factorizations,
)
from cyclic_rewriting.cyclic import Tri, cyclic_steps, explore_allseq
from cyclic_rewriting.errors import ContractError
from cyclic_rewriting.rewriting import RewritingSystem, Rule
from cyclic_rewriting.words import Alphabet, are_cyclic_conjugates, canonical_rotation, rotations

from conftest import w


def test_trefoil_c_defined(trefoil):
    assert trefoil.fmt(is_c_defined(trefoil, w(trefoil, "y x z z x"), "r4", "r1")) == "x z z x y"
    assert is_c_defined(trefoil, w(trefoil, "x z z x z z z"), "r4", "r5") is None


def test_c_defined_with_empty_entry(trefoil):
    word = w(trefoil, "y x z z x")
    assert is_c_defined(trefoil, word, "r4", None) == word
    assert is_c_defined(trefoil, word, None, "r1") == w(trefoil, "x z z x y")
    assert is_c_defined(trefoil, word, None, None) == word


def test_c_defined_precondition(trefoil):
    with pytest.raises(ContractError):
        is_c_defined(trefoil, w(trefoil, "y y y"), "r1", "r2")


def test_trefoil_presuf(trefoil):
    a, b = presuf_intersections(trefoil.rule("r4").lhs, trefoil.rule("r5").lhs)
    assert a == b == {w(trefoil, "x")}
    assert not presuf_guarantees_defined(trefoil, "r4", "r5")
    assert presuf_guarantees_defined(trefoil, "r1", "r2")


def test_presuf_sufficient_condition_holds(hm, braid, trefoil):
    # when one intersection is empty, any word carrying both lhs cyclically has a rotation with both
    rng = random.Random(3)
    for s in (hm, braid, trefoil):
        for r1, r2 in product(s.rules, repeat=2):
            if not presuf_guarantees_defined(s, r1, r2):
                continue
            for _ in range(20):
                filler = tuple(rng.randrange(len(s.alphabet)) for _ in range(rng.randint(0, 3)))
                word = r1.lhs + filler + r2.lhs
                assert is_c_defined(s, word, r1, r2) is not None


def test_wrap_factorizations_shape():
    l1, l2 = (0, 1, 2), (2, 3, 0)
    got = list(wrap_factorizations(l1, l2))
    assert ((0,), (1,), (2,), (3,)) in got
    for x, u, y, v in got:
        assert x + u + y == l1 and y + v + x == l2 and x and y


def test_trefoil_overlap_between_r4_and_r5(trefoil):
    ov = find_cyclical_overlaps(trefoil)
    pairs = {(o.r1, o.r2) for o in ov}
    assert ("r4", "r5") in pairs and ("r5", "r4") in pairs
    o = next(o for o in ov if (o.r1, o.r2) == ("r4", "r5"))
    assert trefoil.fmt(o.site) == "x z z x z z z"
    assert o.resolution.verdict == "resolves"


def test_overlap_reducts_are_one_step_from_site(hm, braid, trefoil):
    for s in (hm, braid, trefoil):
        for c in find_candidates(s, budget=None):
            targets = {t.target for t in cyclic_steps(s, c.site)}
            assert c.left in targets and c.right in targets


def test_overlap_symmetry(braid, trefoil):
    # swapping the rules swaps the reducts of the mirrored factorization
    for s in (braid, trefoil):
        ov = find_cyclical_overlaps(s, budget=None, include_trivial=True)
        keyed = {(o.r1, o.r2, o.x, o.y): o for o in ov}
        for o in ov:
            m = keyed[(o.r2, o.r1, o.y, o.x)]
            assert canonical_rotation(m.site) == canonical_rotation(o.site)
            assert {m.left, m.right} == {o.left, o.right}


def test_hm_inclusion_fails(hm):
    inc = find_cyclical_inclusions(hm)
    assert [(i.r1, i.r2, i.mode) for i in inc] == [("r1", "r2", "conjugate")]
    assert inc[0].resolution.verdict == "fails"
    assert {hm.fmt(inc[0].left), hm.fmt(inc[0].right)} == {"ab_", "ba_"}


def test_proper_subword_inclusion(braid):
    inc = find_cyclical_inclusions(braid, budget=None)
    assert any(i.mode == "proper_subword" and (i.r1, i.r2) == ("r2", "r1") for i in inc)


def test_self_candidate_with_trivial_flag():
    a = Alphabet(("a", "b"))
    s = RewritingSystem(a, (Rule((0, 0), (1,), "r1"),))
    assert find_cyclical_overlaps(s, budget=None) == []
    trivial = find_cyclical_overlaps(s, budget=None, include_trivial=True)
    assert trivial and all(o.trivial for o in trivial)


def test_verdicts(shift, hm, braid):
    v = cyclic_confluence_verdict(hm)
    assert v.status == "not_confluent"
    assert hm.fmt(v.witness) == "a b"
    assert {hm.fmt(f) for f in v.witness_forms} == {"ab_", "ba_"}
    v = cyclic_confluence_verdict(shift)
    assert v.status == "confluent" and v.conditional
    assert v.termination is Tri.NO
    assert cyclic_confluence_verdict(braid).status == "confluent"


def test_probe_termination_yes_for_decreasing_rules():
    a = Alphabet(("a", "b"))
    s = RewritingSystem(a, (Rule((0, 1), (), "r1"),))
    assert probe_termination(s)[0] is Tri.YES


def test_resolve_pair_trivial_for_conjugates(hm):
    r = resolve_pair(hm, w(hm, "a b"), w(hm, "b a"))
    assert r.verdict == "resolves" and r.trivial


def _triples(system, max_len):
    for r1, r2 in product(system.rules, repeat=2):
        for n in range(max(len(r1.lhs), len(r2.lhs)), min(max_len, len(r1.lhs) + len(r2.lhs)) + 1):
            for word in product(range(len(system.alphabet)), repeat=n):
                if word != canonical_rotation(word):
                    continue
                rots = [r for _, r in rotations(word)]
                if any(_has(r1.lhs, r) for r in rots) and any(_has(r2.lhs, r) for r in rots):
                    z = is_c_defined(system, word, r1, r2)
                    if z is not None:
                        yield r1, r2, z


def _has(p, word):
    return any(word[i:i + len(p)] == p for i in range(len(word) - len(p) + 1))


@pytest.mark.parametrize("name, max_len", [("shift", 4), ("hm", 4)])
def test_c_defined_triples_are_locally_confluent_up_to_rotation(name, max_len, request):
    # complete systems: on a c-defined triple the two reducts of the common rotation meet again
    system = request.getfixturevalue(name)
    checked = 0
    for r1, r2, z in _triples(system, max_len):
        steps = [t for t in cyclic_steps(system, z) if t.rotation == 0]
        ra = [t.target for t in steps if t.rule == r1.id]
        rb = [t.target for t in steps if t.rule == r2.id]
        for a in ra:
            for b in rb:
                ea, eb = explore_allseq(system, a), explore_allseq(system, b)
                assert ea.explored & eb.explored or are_cyclic_conjugates(a, b)
                checked += 1
    assert checked > 0


@given(st.lists(st.integers(0, 2), min_size=1, max_size=4).map(tuple),
       st.lists(st.integers(0, 2), min_size=1, max_size=4).map(tuple))
@settings(max_examples=200, deadline=None)
def test_wrap_factorizations_complete(l1, l2):
    brute = set()
    for i in range(1, len(l1)):
        for j in range(i, len(l1) + 1):
            x, u, y = l1[:i], l1[i:j], l1[j:]
            if not y or len(x) + len(y) > len(l2):
                continue
            if l2[:len(y)] == y and l2[len(l2) - len(x):] == x:
                brute.add((x, u, y, l2[len(y):len(l2) - len(x)]))
    assert set(wrap_factorizations(l1, l2)) == brute
