"""
Rule-level analysis of cyclic confluence.

Two rules can be applied to rotations of one word without any single
rotation admitting both only when their left-hand sides wrap around each
other (``l1 = x u y``, ``l2 = y v x``), or when one left-hand side is a
rotation, or a proper subword of a rotation, of the other.  These sites are
enumerated here and each is checked by exploring cyclic reductions from its
two one-step reducts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterator

from .cyclic import DEFAULT_BUDGET, Budget, Cycle, Tri, explore_allseq
from .errors import ContractError
from .rewriting import RewritingSystem, Rule
from .words import (
    Word,
    are_cyclic_conjugates,
    canonical_rotation,
    is_subword,
    prefixes,
    rotations,
    suffixes,
)


def _rule(system: RewritingSystem, r) -> Rule | None:
    if r is None or isinstance(r, Rule):
        return r
    return system.rule(r)


def _applies(rule: Rule, w: Word) -> bool:
    return is_subword(rule.lhs, w)


def is_c_defined(system: RewritingSystem, w: Word, r1, r2) -> Word | None:
    """A rotation of ``w`` on which both rules apply, or None.

    Either rule may be None (an empty entry), which any rotation satisfies.
    """
    a, b = _rule(system, r1), _rule(system, r2)
    rots = [r for _, r in rotations(w)]
    for rule in (a, b):
        if rule is not None and not any(_applies(rule, r) for r in rots):
            raise ContractError(f"rule {rule.id} applies to no rotation of the word")
    for r in rots:
        if (a is None or _applies(a, r)) and (b is None or _applies(b, r)):
            return r
    return None


def presuf_intersections(l1: Word, l2: Word) -> tuple[frozenset[Word], frozenset[Word]]:
    """``(pre(l2) & suf(l1), pre(l1) & suf(l2))``."""
    return prefixes(l2) & suffixes(l1), prefixes(l1) & suffixes(l2)


def presuf_guarantees_defined(system: RewritingSystem, r1, r2) -> bool:
    """True when every triple over these two rules is guaranteed c-defined.

    One-way test: False does not mean some triple fails.
    """
    a, b = _rule(system, r1), _rule(system, r2)
    left, right = presuf_intersections(a.lhs, b.lhs)
    return not left or not right


def wrap_factorizations(l1: Word, l2: Word) -> Iterator[tuple[Word, Word, Word, Word]]:
    """All ``(x, u, y, v)`` with ``l1 = x u y``, ``l2 = y v x`` and ``x``, ``y`` non-empty."""
    n1, n2 = len(l1), len(l2)
    for nx in range(1, n1):
        x = l1[:nx]
        if nx >= n2 or l2[n2 - nx:] != x:
            continue
        for ny in range(1, n1 - nx + 1):
            if nx + ny > n2:
                break
            y = l1[n1 - ny:]
            if l2[:ny] != y:
                continue
            yield x, l1[nx:n1 - ny], y, l2[ny:n2 - nx]


@dataclass(frozen=True)
class Resolution:
    """Outcome of exploring the two reducts of an ambiguity site.

    ``resolves``: some word is reachable from both (``z``, a canonical
    node; an irreducible one when possible).  ``fails``: both explorations
    were exhaustive and share nothing.  ``unknown``: a budget was hit.
    """

    verdict: str
    z: Word | None = None
    left_forms: frozenset[Word] = frozenset()
    right_forms: frozenset[Word] = frozenset()
    trivial: bool = False
    reason: str = ""

    @property
    def forms(self) -> frozenset[Word]:
        return self.left_forms | self.right_forms


def resolve_pair(system: RewritingSystem, left: Word, right: Word,
                 budget: Budget = DEFAULT_BUDGET) -> Resolution:
    if are_cyclic_conjugates(left, right):
        z = canonical_rotation(left)
        return Resolution("resolves", z, trivial=True, reason="reducts are cyclic conjugates")
    a = explore_allseq(system, left, budget)
    b = explore_allseq(system, right, budget)
    common = a.explored & b.explored
    if common:
        shared_forms = a.irreducible_forms & b.irreducible_forms
        rank = {v: i for i, v in enumerate(a.order)}
        pool = shared_forms or common
        z = min(pool, key=rank.__getitem__)
        return Resolution("resolves", z, a.irreducible_forms, b.irreducible_forms,
                          reason="common descendant")
    if a.exhaustive and b.exhaustive:
        return Resolution("fails", None, a.irreducible_forms, b.irreducible_forms,
                          reason="no common descendant")
    why = a.budget_reason or b.budget_reason
    return Resolution("unknown", None, a.irreducible_forms, b.irreducible_forms, reason=why)


@dataclass(frozen=True)
class CyclicalOverlap:
    r1: str
    r2: str
    x: Word
    u: Word
    y: Word
    v: Word
    left: Word  # rhs(r1) . v
    right: Word  # rhs(r2) . u
    site: Word  # x u y v
    trivial: bool
    resolution: Resolution | None = field(default=None, compare=False)

    kind = "overlap"

    @property
    def degenerate(self) -> bool:
        # an empty u or v makes this an inclusion in disguise
        return not self.u or not self.v

    def site_rotations(self) -> tuple[int, int]:
        return 0, len(self.x) + len(self.u)


@dataclass(frozen=True)
class CyclicalInclusion:
    r1: str  # l -> v, the including rule
    r2: str  # l' -> v'
    mode: str  # "conjugate" or "proper_subword"
    u: Word
    rotation: int  # l rotated by this amount is u . l'
    left: Word  # v
    right: Word  # u . v'
    site: Word  # l
    trivial: bool
    resolution: Resolution | None = field(default=None, compare=False)

    kind = "inclusion"

    def site_rotations(self) -> tuple[int, int]:
        return 0, self.rotation


Candidate = CyclicalOverlap | CyclicalInclusion


def find_cyclical_overlaps(system: RewritingSystem, budget: Budget | None = DEFAULT_BUDGET, *,
                           include_trivial: bool = False) -> list[CyclicalOverlap]:
    """Wrap-around overlaps over every ordered rule pair (a rule may pair with itself).

    Candidates whose reducts are already cyclic conjugates are dropped unless
    ``include_trivial``.  With ``budget=None`` no resolution check is run.
    """
    out = []
    for a, b in product(system.rules, repeat=2):
        for x, u, y, v in wrap_factorizations(a.lhs, b.lhs):
            left, right = a.rhs + v, b.rhs + u
            trivial = are_cyclic_conjugates(left, right)
            if trivial and not include_trivial:
                continue
            res = resolve_pair(system, left, right, budget) if budget is not None else None
            out.append(CyclicalOverlap(a.id, b.id, x, u, y, v, left, right, x + u + y + v,
                                       trivial, res))
    return out


def find_cyclical_inclusions(system: RewritingSystem, budget: Budget | None = DEFAULT_BUDGET, *,
                             include_trivial: bool = False) -> list[CyclicalInclusion]:
    """Rule pairs whose left-hand sides are rotations of each other (reported once per
    unordered pair) or where one sits inside a rotation of the other (one candidate per
    rotation site)."""
    out = []
    rules = system.rules
    for i, a in enumerate(rules):
        for j, b in enumerate(rules):
            if i == j:
                continue
            la, lb = a.lhs, b.lhs
            cands = []
            if len(la) == len(lb):
                if i < j and are_cyclic_conjugates(la, lb):
                    k = next(k for k, r in rotations(la) if r == lb)
                    cands.append(("conjugate", (), k, a.rhs, b.rhs))
            elif len(lb) < len(la):
                seen_u = set()
                for k, r in rotations(la):
                    if r[len(r) - len(lb):] == lb:
                        u = r[:len(r) - len(lb)]
                        if u in seen_u:
                            continue
                        seen_u.add(u)
                        cands.append(("proper_subword", u, k, a.rhs, u + b.rhs))
            for mode, u, k, left, right in cands:
                trivial = are_cyclic_conjugates(left, right)
                if trivial and not include_trivial:
                    continue
                res = resolve_pair(system, left, right, budget) if budget is not None else None
                out.append(CyclicalInclusion(a.id, b.id, mode, u, k, left, right, la, trivial, res))
    return out


def check_overlap_resolution(system: RewritingSystem, candidate: Candidate,
                             budget: Budget = DEFAULT_BUDGET) -> Resolution:
    return resolve_pair(system, candidate.left, candidate.right, budget)


def find_candidates(system: RewritingSystem, budget: Budget | None = DEFAULT_BUDGET) -> list[Candidate]:
    """Inclusions first, then overlaps; both in rule order."""
    return [*find_cyclical_inclusions(system, budget), *find_cyclical_overlaps(system, budget)]


@dataclass(frozen=True)
class ConfluenceVerdict:
    status: str  # "confluent", "not_confluent", "unknown"
    candidates: tuple = ()
    witness: Word | None = None
    witness_reducts: tuple[Word, Word] | None = None
    witness_forms: frozenset[Word] = frozenset()
    termination: Tri = Tri.UNKNOWN
    termination_witness: Cycle | None = None
    termination_word: Word | None = None
    reason: str = ""

    @property
    def conditional(self) -> bool:
        """A confluent verdict that still depends on unproven cyclic termination."""
        return self.status == "confluent" and self.termination is not Tri.YES


def probe_termination(system: RewritingSystem, budget: Budget = DEFAULT_BUDGET, *,
                      max_length: int = 4, max_words: int = 5_000,
                      extra: tuple[Word, ...] = ()) -> tuple[Tri, Word | None, Cycle | None]:
    """Look for an infinite cyclic-reduction sequence among short words.

    Returns ``yes`` only when every rule is strictly length-decreasing (then no
    infinite sequence exists); otherwise ``no`` with a witness, or ``unknown``.
    """
    if all(len(r.lhs) > len(r.rhs) for r in system.rules) and not system.cyclic_rules:
        return Tri.YES, None, None
    seen = set()
    words = list(extra)
    total = 0
    for n in range(1, max_length + 1):
        total += len(system.alphabet) ** n
        if total > max_words:
            break
        words.extend(system.alphabet.words(n))
    for w in words:
        c = canonical_rotation(w)
        if c in seen:
            continue
        rep = explore_allseq(system, c, budget)
        seen.update(rep.explored)
        if rep.witness is not None:
            return Tri.NO, c, rep.witness
    return Tri.UNKNOWN, None, None


def cyclic_confluence_verdict(system: RewritingSystem, budget: Budget = DEFAULT_BUDGET, *,
                              probe_length: int = 4) -> ConfluenceVerdict:
    """Confluent / not confluent / unknown, never claiming more than was shown.

    No candidates, or every candidate resolving, gives ``confluent`` (which
    presumes cyclic termination; see ``termination``).  A failing candidate
    gives ``not_confluent`` with its site word as witness: the site reduces
    to two words with no common descendant.
    """
    cands = tuple(find_candidates(system, budget))
    sites = tuple(c.site for c in cands)
    term, term_word, term_cycle = probe_termination(system, budget, max_length=probe_length,
                                                   extra=sites)
    failing = [c for c in cands if c.resolution.verdict == "fails"]
    if failing:
        c = failing[0]
        rep = explore_allseq(system, c.site, budget)
        return ConfluenceVerdict("not_confluent", cands, c.site, (c.left, c.right),
                                 rep.irreducible_forms, term, term_cycle, term_word,
                                 reason=f"{c.kind} {c.r1}/{c.r2} does not resolve")
    if any(c.resolution.verdict == "unknown" for c in cands):
        return ConfluenceVerdict("unknown", cands, termination=term, termination_witness=term_cycle,
                                 termination_word=term_word, reason="budget exhausted")
    reason = "no cyclical overlaps or inclusions" if not cands else "every candidate resolves"
    return ConfluenceVerdict("confluent", cands, termination=term, termination_witness=term_cycle,
                             termination_word=term_word, reason=reason)
