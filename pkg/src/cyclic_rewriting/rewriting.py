"""Rewriting systems, leftmost reduction, normal forms and static checks."""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

from .errors import BudgetExceeded, ContractError
from .words import Alphabet, Word, canonical_rotation, is_subword, occurrences, shortlex_key

log = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 1_000_000


class Semantics(str, enum.Enum):
    GENERIC = "generic"
    SPECIAL = "special"
    COMPLETELY_SIMPLE = "completely_simple"


@dataclass(frozen=True)
class Rule:
    lhs: Word
    rhs: Word
    id: str

    def __post_init__(self):
        if not self.lhs:
            raise ContractError(f"rule {self.id}: empty left-hand side")
        if self.lhs == self.rhs:
            raise ContractError(f"rule {self.id}: left- and right-hand sides are equal")


@dataclass(frozen=True)
class CyclicRule:
    """A whole-word reduction ``lhs ~> rhs`` applied only up to rotation.

    Both sides are canonical rotations.  ``certificate`` is kept by the
    completion run that created the rule and is not serialized.
    """

    lhs: Word
    rhs: Word
    id: str
    origin: str = field(default="", compare=False)
    certificate: object = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if canonical_rotation(self.lhs) == canonical_rotation(self.rhs):
            raise ContractError(f"cyclic rule {self.id}: both sides are cyclic conjugates")


@dataclass(frozen=True)
class RewritingSystem:
    alphabet: Alphabet
    rules: tuple[Rule, ...]
    asserted_complete: bool = False
    semantics: Semantics = Semantics.GENERIC
    cyclic_rules: tuple[CyclicRule, ...] = ()
    caveats: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "cyclic_rules", tuple(self.cyclic_rules))
        n = len(self.alphabet)
        ids = set()
        for r in (*self.rules, *self.cyclic_rules):
            if r.id in ids:
                raise ContractError(f"duplicate rule id {r.id}")
            ids.add(r.id)
            for s in (*r.lhs, *r.rhs):
                if not 0 <= s < n:
                    raise ContractError(f"rule {r.id} uses a symbol outside the alphabet")

    @property
    def length_preserving(self) -> bool:
        return all(len(r.lhs) == len(r.rhs) for r in self.rules)

    @property
    def length_nonincreasing(self) -> bool:
        return all(len(r.lhs) >= len(r.rhs) for r in self.rules)

    def rule(self, rule_id: str) -> Rule | CyclicRule:
        for r in (*self.rules, *self.cyclic_rules):
            if r.id == rule_id:
                return r
        raise KeyError(rule_id)

    def base(self) -> RewritingSystem:
        """The same system with every cyclic rule dropped."""
        if not self.cyclic_rules:
            return self
        return RewritingSystem(self.alphabet, self.rules, self.asserted_complete,
                               self.semantics, (), self.caveats)

    def with_cyclic_rules(self, cyclic_rules) -> RewritingSystem:
        return RewritingSystem(self.alphabet, self.rules, self.asserted_complete,
                               self.semantics, tuple(cyclic_rules), self.caveats)

    def fmt(self, w: Word) -> str:
        return self.alphabet.format(w)

    def fmt_rule(self, r: Rule | CyclicRule) -> str:
        arrow = "~>" if isinstance(r, CyclicRule) else "->"
        return f"{self.fmt(r.lhs)} {arrow} {self.fmt(r.rhs)}"


@dataclass(frozen=True)
class ReductionTrace:
    start: Word
    end: Word
    steps: tuple[tuple[str, int], ...]  # (rule id, position)

    def replay(self, system: RewritingSystem) -> Word:
        w = self.start
        for rule_id, pos in self.steps:
            w = apply_rule(system.rule(rule_id), w, pos)
        return w


def apply_rule(rule: Rule, w: Word, pos: int) -> Word:
    m = len(rule.lhs)
    if w[pos:pos + m] != rule.lhs:
        raise ContractError(f"rule {rule.id} does not match at position {pos}")
    return w[:pos] + rule.rhs + w[pos + m:]


def reduce_once(system: RewritingSystem, w: Word) -> tuple[Word, str, int] | None:
    """Apply the first rule (declaration order) that occurs in ``w``, at its leftmost occurrence."""
    for r in system.rules:
        pos = next(occurrences(r.lhs, w), None)
        if pos is not None:
            return apply_rule(r, w, pos), r.id, pos
    return None


def normal_form(system: RewritingSystem, w: Word, *,
                max_steps: int = DEFAULT_MAX_STEPS) -> tuple[Word, ReductionTrace]:
    """Reduce ``w`` to a fixed point, recording every step.

    Uniqueness of the result relies on the system being complete; this is
    not checked here.  Raises :class:`BudgetExceeded` after ``max_steps``.
    """
    steps = []
    cur = w
    while True:
        nxt = reduce_once(system, cur)
        if nxt is None:
            return cur, ReductionTrace(w, cur, tuple(steps))
        if len(steps) >= max_steps:
            raise BudgetExceeded(
                f"normal form not reached after {max_steps} steps; "
                "the system may be non-terminating", steps=max_steps)
        cur, rule_id, pos = nxt
        steps.append((rule_id, pos))


def reduce_word(system: RewritingSystem, w: Word, *, max_steps: int = DEFAULT_MAX_STEPS) -> Word:
    return normal_form(system, w, max_steps=max_steps)[0]


def equal_in_monoid(system: RewritingSystem, u: Word, v: Word, *,
                    max_steps: int = DEFAULT_MAX_STEPS) -> bool:
    if u == v:
        return True
    return reduce_word(system, u, max_steps=max_steps) == reduce_word(system, v, max_steps=max_steps)


def is_irreducible(system: RewritingSystem, w: Word) -> bool:
    return not any(is_subword(r.lhs, w) for r in system.rules)


@dataclass(frozen=True)
class Violation:
    kind: str  # "reducible_rhs" or "inclusion"
    rule: str
    other: str
    detail: str


def check_reduced(system: RewritingSystem) -> list[Violation]:
    out = []
    for r in system.rules:
        for other in system.rules:
            if is_subword(other.lhs, r.rhs):
                out.append(Violation("reducible_rhs", r.id, other.id,
                                     f"rhs of {r.id} contains lhs of {other.id}"))
        for other in system.rules:
            if other is not r and is_subword(other.lhs, r.lhs):
                out.append(Violation("inclusion", r.id, other.id,
                                     f"lhs of {other.id} is a subword of lhs of {r.id}"))
    return out


@dataclass(frozen=True)
class CriticalPair:
    kind: str  # "overlap" or "inclusion"
    r1: str
    r2: str
    word: Word
    left: Word
    right: Word
    left_nf: Word | None = None
    right_nf: Word | None = None


def critical_pairs(system: RewritingSystem) -> list[CriticalPair]:
    """Every ordinary overlap and inclusion ambiguity between rule left-hand sides."""
    out = []
    for r1 in system.rules:
        l1 = r1.lhs
        for r2 in system.rules:
            l2 = r2.lhs
            # proper overlap: a suffix of l1 equals a prefix of l2
            for k in range(1, min(len(l1), len(l2))):
                if l1[-k:] == l2[:k]:
                    word = l1 + l2[k:]
                    out.append(CriticalPair("overlap", r1.id, r2.id, word,
                                            r1.rhs + l2[k:], l1[:-k] + r2.rhs))
            if r1 is not r2:
                for p in occurrences(l2, l1):
                    out.append(CriticalPair("inclusion", r1.id, r2.id, l1,
                                            r1.rhs, l1[:p] + r2.rhs + l1[p + len(l2):]))
    return out


def check_local_confluence(system: RewritingSystem, *,
                           max_steps: int = DEFAULT_MAX_STEPS) -> list[CriticalPair]:
    """Critical pairs whose two sides reach different normal forms."""
    bad = []
    for cp in critical_pairs(system):
        a = reduce_word(system, cp.left, max_steps=max_steps)
        b = reduce_word(system, cp.right, max_steps=max_steps)
        if a != b:
            bad.append(CriticalPair(cp.kind, cp.r1, cp.r2, cp.word, cp.left, cp.right, a, b))
    return bad


def termination_check(system: RewritingSystem) -> list[str]:
    """Ids of rules that are not shortlex-decreasing.

    An empty result proves termination of the one-step relation (shortlex is a
    reduction order); a non-empty one proves nothing either way.
    """
    return [r.id for r in system.rules if shortlex_key(r.lhs) <= shortlex_key(r.rhs)]
