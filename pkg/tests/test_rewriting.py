import random

import pytest

from cyclic_rewriting.errors import BudgetExceeded, ContractError
from cyclic_rewriting.rewriting import (
    CyclicRule,
    RewritingSystem,
    Rule,
    check_local_confluence,
    check_reduced,
    critical_pairs,
    equal_in_monoid,
    normal_form,
    reduce_word,
    termination_check,
)
from cyclic_rewriting.words import Alphabet

from conftest import w


def _naive_nf(rules, word):
    # independent reference: textual replace of the first matching rule
    s = " " + " ".join(map(str, word)) + " "
    changed = True
    while changed:
        changed = False
        for lhs, rhs in rules:
            pat = " " + " ".join(map(str, lhs)) + " "
            if pat in s:
                rep = " " + " ".join(map(str, rhs)) + " " if rhs else " "
                s = s.replace(pat, rep, 1)
                changed = True
                break
    return tuple(int(t) for t in s.split())


def test_braid_reduction(braid):
    assert braid.fmt(reduce_word(braid, w(braid, "b a b"))) == "a b a"


def test_trace_replays(hm):
    word = w(hm, "b a b a a b")
    nf, trace = normal_form(hm, word)
    assert trace.replay(hm) == nf
    assert trace.start == word and trace.end == nf


def test_normal_form_matches_naive_replacement(hm):
    rng = random.Random(7)
    rules = [(r.lhs, r.rhs) for r in hm.rules]
    for _ in range(300):
        word = tuple(rng.randrange(len(hm.alphabet)) for _ in range(rng.randint(0, 9)))
        assert reduce_word(hm, word) == _naive_nf(rules, word)


def test_budget_exceeded_on_looping_rules():
    a = Alphabet(("a", "b"))
    s = RewritingSystem(a, (Rule((0, 1), (1, 0), "r1"), Rule((1, 0), (0, 1), "r2")))
    with pytest.raises(BudgetExceeded):
        normal_form(s, (0, 1), max_steps=50)


def test_rule_contracts():
    with pytest.raises(ContractError):
        Rule((), (0,), "r1")
    with pytest.raises(ContractError):
        Rule((0,), (0,), "r1")
    with pytest.raises(ContractError):
        CyclicRule((0, 1), (1, 0), "c1")


def test_fixtures_are_reduced(shift, hm, braid, trefoil):
    for s in (shift, hm, braid, trefoil):
        assert check_reduced(s) == []


def test_hm_locally_confluent(hm):
    assert check_local_confluence(hm) == []
    assert critical_pairs(hm)


def test_shift_locally_confluent_but_not_shortlex(shift):
    assert check_local_confluence(shift) == []
    assert termination_check(shift) == ["r1", "r2"]


def test_non_confluent_system_detected():
    a = Alphabet(("a", "b", "c"))
    s = RewritingSystem(a, (Rule((0, 1), (2,), "r1"), Rule((1, 0), (0,), "r2")))
    bad = check_local_confluence(s)
    assert bad and all(cp.left_nf != cp.right_nf for cp in bad)


def test_equal_in_monoid(braid):
    assert equal_in_monoid(braid, w(braid, "b a b"), w(braid, "a b a"))
    assert not equal_in_monoid(braid, w(braid, "a"), w(braid, "b"))


def test_unknown_rule_id(hm):
    with pytest.raises(KeyError):
        hm.rule("r99")
