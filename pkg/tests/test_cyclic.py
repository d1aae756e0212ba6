from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyclic_rewriting.cyclic import (
    Budget,
    StepKind,
    Tri,
    cyclic_steps,
    explore_allseq,
    format_chain,
    is_cyclically_irreducible,
    rho,
)
from cyclic_rewriting.rewriting import RewritingSystem, Rule
from cyclic_rewriting.words import Alphabet, canonical_rotation, rotate

from cyclic_rewriting.sysfile import load_system

from conftest import fixture_path, w
from oracles import brute_allseq, rule_pairs


SHIFT = load_system(fixture_path("shift"))


def test_shift_steps_from_bcd(shift):
    steps = cyclic_steps(shift, w(shift, "b c d"))
    got = {(s.rotation, s.rule, s.position, shift.fmt(s.target)) for s in steps}
    assert got == {(0, "r2", 1, "b d a"), (1, "r2", 0, "d a b")}
    for s in steps:
        assert s.replay(shift) == s.target
        assert s.kind is StepKind.BASE


def test_shift_witness_cycle(shift):
    rep = explore_allseq(shift, w(shift, "b c d"))
    assert rep.terminates is Tri.NO
    assert rep.converges is Tri.NO
    assert rep.exhaustive
    assert rep.witness.format(shift) == "b c d -> b d a ⟲2 a b d -> b c d"


def test_shift_rho(shift):
    r = rho(shift, w(shift, "a c d"))
    assert r.status == "unique"
    assert shift.fmt(r.end()) == "a d a"
    assert format_chain(shift, r.word, r.chain()) == "a c d -> a d a"


def test_braid_allseq(braid):
    rep = explore_allseq(braid, w(braid, "b a a b a"))
    assert rep.terminates is Tri.NO
    assert rep.witness.format(braid) == "b a a b a -> a b a a b ⟲1 b a a b a"
    assert rep.converges is Tri.YES
    assert rep.irreducible_forms == {canonical_rotation(w(braid, "a a a b a"))}


@pytest.mark.parametrize("n", [2, 3, 4])
def test_braid_rho_family(braid, n):
    r = rho(braid, w(braid, f"b a^{n} b a"))
    assert r.status == "unique"
    assert r.form == canonical_rotation(w(braid, f"b a^{n + 2}"))


def test_hm_delta_a_has_no_form(hm):
    r = rho(hm, w(hm, "D a"))
    assert r.status == "none"
    assert r.report.exhaustive
    assert r.report.witness.format(hm) == "D a -> b D ⟲1 D b -> a D ⟲1 D a"


def test_hm_ab_is_ambiguous(hm):
    r = rho(hm, w(hm, "a b"))
    assert r.status == "ambiguous"
    assert {hm.fmt(f) for f in r.forms} == {"ab_", "ba_"}


def test_chains_replay_to_rotations_of_nodes(braid):
    rep = explore_allseq(braid, w(braid, "b a a a b a"))
    for node in rep.order:
        chain = rep.chain_to(node)
        cur = rep.root
        for s in chain:
            assert s.source == cur
            cur = s.replay(braid)
        assert canonical_rotation(cur) == node


def test_budget_hit_gives_unknown(braid):
    rep = explore_allseq(braid, w(braid, "b a a a a b a b"), Budget(max_nodes=2))
    assert rep.budget_hit and rep.budget_reason
    assert rho(braid, w(braid, "b a a a a b a b"), Budget(max_nodes=2)).status in ("unknown", "ambiguous")


def test_irreducible(hm):
    assert is_cyclically_irreducible(hm, w(hm, "ab_"))
    assert not is_cyclically_irreducible(hm, w(hm, "b a"))
    assert not is_cyclically_irreducible(hm, w(hm, "a b"))


def test_graph_dumps(shift):
    rep = explore_allseq(shift, w(shift, "b c d"))
    assert rep.dot(shift).startswith("digraph")
    assert "b c d" in rep.adjacency(shift)


@given(st.lists(st.sampled_from(range(4)), min_size=1, max_size=6), st.integers(0, 10))
@settings(max_examples=60, deadline=None)
def test_report_is_rotation_invariant(letters, k):
    system = SHIFT
    word = tuple(letters)
    a = explore_allseq(system, word)
    b = explore_allseq(system, rotate(word, k % len(word)))
    assert (a.start, a.order, a.irreducible_forms, a.terminates, a.converges) == \
           (b.start, b.order, b.irreducible_forms, b.terminates, b.converges)


def _random_system(draw_rules, letters):
    a = Alphabet(tuple("abc"[:letters]))
    return RewritingSystem(a, tuple(Rule(l, r, f"r{i + 1}") for i, (l, r) in enumerate(draw_rules)))


word_st = lambda k, lo, hi: st.lists(st.integers(0, k - 1), min_size=lo, max_size=hi).map(tuple)


@st.composite
def small_systems(draw):
    k = draw(st.integers(2, 3))
    rules = []
    for _ in range(draw(st.integers(1, 3))):
        lhs = draw(word_st(k, 1, 3))
        rhs = draw(word_st(k, 0, len(lhs)))
        if lhs != rhs and all(lhs != l for l, _ in rules):
            rules.append((lhs, rhs))
    return _random_system(rules, k)


@given(small_systems(), st.data())
@settings(max_examples=150, deadline=None)
def test_explore_agrees_with_brute_force(system, data):
    k = len(system.alphabet)
    word = data.draw(word_st(k, 1, 5))
    rep = explore_allseq(system, word)
    term, forms = brute_allseq(rule_pairs(system), word)
    assert rep.exhaustive
    assert (rep.terminates is Tri.YES) == term
    assert rep.irreducible_forms == forms
    assert (rep.converges is Tri.YES) == (len(forms) == 1)


def test_length_preserving_exploration_is_bounded(braid):
    # every node has the length of the root, so at most |alphabet|^n nodes
    for n in range(1, 7):
        for word in product(range(2), repeat=n):
            rep = explore_allseq(braid, word)
            assert rep.exhaustive
            assert len(rep.order) <= 2 ** n
