from dataclasses import replace

import pytest

from cyclic_rewriting.conjugacy import (
    Certificate,
    commutativity_relations,
    compose_certificate,
    conjugacy_test,
    parse_certificate,
    tilde_classes,
    transposition_witness,
    verify_certificate,
)
from cyclic_rewriting.cyclic import Budget, cyclic_steps, explore_allseq
from cyclic_rewriting.errors import ContractError, ParseError
from cyclic_rewriting.sysfile import parse_system
from cyclic_rewriting.rewriting import equal_in_monoid
from cyclic_rewriting.words import canonical_rotation

from conftest import w


def _holds(system, u, v, x, y):
    return equal_in_monoid(system, u + x, x + v) and equal_in_monoid(system, y + u, v + y)


def test_every_single_step_satisfies_transposition_identities(hm, braid, trefoil, shift):
    for s in (hm, braid, trefoil, shift):
        for word in s.alphabet.words(4):
            for step in cyclic_steps(s, word):
                x, y = transposition_witness(step)
                assert _holds(s, step.source, step.target, x, y)
                if step.rotation:
                    assert x + y == step.source and y + x == step.rotated


def test_braid_conjugate_through_common_form(braid):
    v = conjugacy_test(braid, w(braid, "b a a b a"), w(braid, "a a b a b"))
    assert v.result == "conjugate"
    c = v.certificate
    assert verify_certificate(braid, c) == []
    assert c.pivot == canonical_rotation(w(braid, "a a a b a"))


def test_braid_a_b_unknown_never_negative(braid):
    v = conjugacy_test(braid, w(braid, "a"), w(braid, "b"))
    assert v.result == "unknown"
    assert v.certificate is None
    assert v.reason == "forms differ"


def test_hm_ambiguous_reason(hm):
    v = conjugacy_test(hm, w(hm, "ab_ D"), w(hm, "D ba_ ba_"))
    assert v.result in ("conjugate", "transposed_chain", "unknown")
    v = conjugacy_test(hm, w(hm, "ab_"), w(hm, "ba_"))
    assert v.result == "unknown"


def test_transposed_chain_when_directly_reachable(shift):
    # abd and bcd lie on one cycle, and rho has no answer for either
    v = conjugacy_test(shift, w(shift, "a b d"), w(shift, "b c d"))
    assert v.result == "transposed_chain"
    assert verify_certificate(shift, v.certificate) == []
    assert len(v.decompositions) == len(v.certificate.chain_u)


def test_identical_words():
    from cyclic_rewriting.sysfile import parse_system

    s = parse_system("alphabet: a\nrule: a a -> a\n")
    v = conjugacy_test(s, (0,), (0,))
    assert v.result == "conjugate" and v.certificate.x == ()


def test_certificate_inverse_and_text_round_trip(braid):
    v = conjugacy_test(braid, w(braid, "b a a a b a"), w(braid, "a a a a a b"))
    c = v.certificate
    assert verify_certificate(braid, c.inverse()) == []
    again = parse_certificate(braid, c.to_text(braid))
    assert again == c
    assert verify_certificate(braid, again) == []


def test_tampered_certificate_is_rejected(braid):
    c = conjugacy_test(braid, w(braid, "b a a b a"), w(braid, "a a b a b")).certificate
    bad = Certificate(c.u, c.v, c.x + (0,), c.y, c.chain_u, c.chain_v, c.pivot)
    assert verify_certificate(braid, bad)
    text = c.to_text(braid).replace("| r1 |", "| r2 |", 1)
    assert verify_certificate(braid, parse_certificate(braid, text))


def test_certificate_parse_errors(braid):
    with pytest.raises(ParseError):
        parse_certificate(braid, "u: a\nv: b\n")
    with pytest.raises(ParseError):
        parse_certificate(braid, "u: a\nv: a\nx: 1\ny: q\n")
    with pytest.raises(ParseError):
        parse_certificate(braid, "u a\n")


def test_compose_rejects_wrong_end(braid):
    rep = explore_allseq(braid, w(braid, "b a b"))
    chain = rep.chain_to(next(iter(rep.irreducible_forms)))
    with pytest.raises(ContractError):
        compose_certificate(braid, chain, w(braid, "b a b"), w(braid, "b b b"))


def test_commutation_relations_from_cycles(shift, hm, braid):
    for s, word in ((shift, "b c d"), (hm, "D a"), (braid, "b a a b a")):
        rep = explore_allseq(s, w(s, word))
        x, y = commutativity_relations(s, rep.witness)
        wt = rep.witness.steps[-1].target
        assert equal_in_monoid(s, y + x + wt, wt + y + x)


def test_shift_classes(shift):
    tc = tilde_classes(shift, 3)
    cls = tc.class_of(w(shift, "b c d"))
    assert {shift.fmt(m) for m in cls.members} == {"a b d", "b c d"}
    assert cls.cyclic and not cls.has_irreducible
    assert sum(len(c.members) for c in tc.classes) >= 20


def test_hm_delta_class(hm):
    tc = tilde_classes(hm, 2, letters=[w(hm, s)[0] for s in ("a", "b", "D")])
    cls = tc.class_of(w(hm, "D a"))
    assert {hm.fmt(m) for m in cls.members} == {"a D", "b D"}
    assert cls.cyclic and not cls.has_irreducible


def test_classes_refusals(hm, shift):
    with pytest.raises(ContractError):
        tilde_classes(shift, 8, budget=Budget(max_nodes=100))
    from cyclic_rewriting.sysfile import parse_system

    s = parse_system("alphabet: a b\nrule: a -> a b\n")
    with pytest.raises(ContractError):
        tilde_classes(s, 2)


def test_terminating_system_has_singleton_classes():
    from cyclic_rewriting.sysfile import parse_system

    s = parse_system("alphabet: a b c\nrule: a b -> c\nrule: c c -> a\n")
    tc = tilde_classes(s, 4)
    assert all(len(c.members) == 1 and not c.cyclic for c in tc.classes)


def test_class_members_get_certificates(shift):
    tc = tilde_classes(shift, 3)
    for cls in tc.classes:
        if not cls.cyclic:
            continue
        for u in cls.members:
            for v in cls.members:
                verdict = conjugacy_test(shift, u, v)
                assert verdict.result in ("conjugate", "transposed_chain")
                assert verify_certificate(shift, verdict.certificate) == []


def test_certificates_in_a_nonterminating_system():
    # a b <-> b a never reaches a normal form, so only the chains can vouch
    s = parse_system("alphabet: a b\nrule: a b -> b a\nrule: b a -> a b\n")
    u, v = w(s, "a a b"), w(s, "b a a")
    verdict = conjugacy_test(s, u, v, Budget(max_nodes=50, max_edges=500, max_steps=200))
    assert verdict.result in ("conjugate", "transposed_chain")
    assert verify_certificate(s, verdict.certificate, max_steps=200) == []
    forged = replace(verdict.certificate, x=w(s, "a"), chain_u=(), chain_v=(), pivot=None)
    assert verify_certificate(s, forged, max_steps=200) != []


def test_inverted_direct_certificate_verifies(shift):
    u, v = w(shift, "b c d"), w(shift, "a b d")
    rep = explore_allseq(shift, u)
    cert = compose_certificate(shift, rep.chain_to(canonical_rotation(v)), u, v)
    inv = cert.inverse()
    assert inv.chain_v and not inv.chain_u and inv.pivot is None
    assert verify_certificate(shift, inv) == []
