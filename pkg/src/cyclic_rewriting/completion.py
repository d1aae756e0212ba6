"""
Cyclical completion: orient unresolved cyclical ambiguities into whole-word
reductions ``u ~>+ v`` until every ambiguity resolves.

Forms are computed with the base rules only, so every added left-hand side
is cyclically irreducible there.  Orientation is free (shortlex, larger to
smaller) unless a form already takes part in an added reduction; two forms
that are both sources of added reductions with different end points are a
conflict and stop the run.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .analysis import find_candidates, probe_termination, resolve_pair
from .conjugacy import Certificate, Pair, _compose, _invert, _rotation_pair, chain_pair, identities_hold
from .cyclic import DEFAULT_BUDGET, Budget, Tri, cyclic_steps, explore_allseq, is_cyclically_irreducible
from .errors import ConsistencyError, ContractError
from .rewriting import CyclicRule, RewritingSystem
from .words import Word, canonical_rotation, rotation_between, shortlex_key

DEFAULT_MAX_ADDED = 1_000


class CompletionConflict(Exception):
    """Both forms are already sources of added reductions with different targets."""


@dataclass
class OrientationState:
    sources: dict[Word, Word] = field(default_factory=dict)  # lhs -> rhs of added reductions
    targets: set[Word] = field(default_factory=set)

    def terminal(self, w: Word) -> Word:
        w = canonical_rotation(w)
        while w in self.sources:
            w = self.sources[w]
        return w


def orientation_policy(z1: Word, z2: Word, state: OrientationState) -> tuple[Word, Word, str] | None:
    """Return ``(lhs, rhs, why)``, or None when both are the same cyclic word."""
    c1, c2 = canonical_rotation(z1), canonical_rotation(z2)
    if c1 == c2:
        return None
    s1, s2 = c1 in state.sources, c2 in state.sources
    if s1 and s2:
        if state.terminal(c1) == state.terminal(c2):
            return None
        raise CompletionConflict("both forms already reduce by added reductions to different words")
    if s1:
        return c2, c1, "forced: first form is already a source"
    if s2:
        return c1, c2, "forced: second form is already a source"
    t1, t2 = c1 in state.targets, c2 in state.targets
    if t1 != t2:
        return (c2, c1, "forced: first form is already a target") if t1 else \
               (c1, c2, "forced: second form is already a target")
    big, small = sorted((c1, c2), key=shortlex_key, reverse=True)
    return big, small, "free choice: shortlex, larger to smaller"


@dataclass(frozen=True)
class CompletionOutcome:
    status: str  # "completed", "failed" or "budget_exhausted"
    added: tuple[CyclicRule, ...]
    log: tuple[str, ...]
    system: RewritingSystem
    reason: str = ""
    conditional: bool = False  # base cyclic termination not established

    def log_text(self) -> str:
        return "\n".join(self.log) + "\n"


def _align(w: Word, target: Word) -> Pair:
    k = rotation_between(w, target)
    if k is None:
        raise ConsistencyError("words are not rotations of each other")
    return _rotation_pair(w, k)


def _pair_to_form(base, site, reduct, form, budget) -> Pair:
    """Conjugators from the site word to a base form reached through ``reduct``."""
    first = next(s for s in cyclic_steps(base, site) if s.target == reduct)
    rep = explore_allseq(base, reduct, budget)
    chain = rep.chain_to(form)
    end = chain[-1].target if chain else reduct
    pair = _compose(chain_pair(base, (first, *chain)), _align(end, form))
    return pair


def cyclical_completion(system: RewritingSystem, budget: Budget = DEFAULT_BUDGET, *,
                        max_added: int = DEFAULT_MAX_ADDED) -> CompletionOutcome:
    base = system.base()
    fmt = base.fmt
    log: list[str] = []
    state = OrientationState()
    added: list[CyclicRule] = []
    certs: dict[Word, Pair] = {}

    term, _, cyc = probe_termination(base, budget)
    conditional = term is not Tri.YES
    if term is Tri.NO:
        log.append(f"note: base rules are not cyclically terminating ({cyc.format(base)}); "
                   "results hold up to ~")
    elif term is Tri.UNKNOWN:
        log.append("note: cyclic termination of the base rules is not established")

    seen = set()
    sites = []
    for cand in find_candidates(base, budget=None):
        key = tuple(sorted((canonical_rotation(cand.left), canonical_rotation(cand.right))))
        if key[0] == key[1] or key in seen:
            continue
        seen.add(key)
        sites.append(cand)
    log.append(f"ambiguities: {len(sites)}")

    def current():
        return base.with_cyclic_rules(tuple(added))

    def outcome(status, reason=""):
        if reason:
            log.append(f"{status}: {reason}")
        else:
            log.append(f"{status}: {len(added)} added reduction(s)")
        return CompletionOutcome(status, tuple(added), tuple(log), current(), reason, conditional)

    def finish_pair(lhs, rhs):
        # conjugators lhs -> terminal(rhs), following existing added reductions
        pair = certs[(lhs, rhs)]
        w = rhs
        while w in state.sources:
            nxt = state.sources[w]
            pair = _compose(pair, certs[(w, nxt)])
            w = nxt
        return w, pair

    passes = 0
    while True:
        passes += 1
        changed = False
        for n, cand in enumerate(sites, 1):
            res = resolve_pair(current(), cand.left, cand.right, budget)
            if res.verdict == "resolves":
                continue
            label = f"{cand.kind} {cand.r1}/{cand.r2} at {fmt(cand.site)}"
            if res.verdict == "unknown":
                return outcome("budget_exhausted", f"{label}: {res.reason}")
            reps = [explore_allseq(base, w, budget) for w in (cand.left, cand.right)]
            if any(r.budget_hit for r in reps):
                return outcome("budget_exhausted", f"{label}: base exploration hit the budget")
            lf = sorted(reps[0].irreducible_forms, key=shortlex_key)
            rf = sorted(reps[1].irreducible_forms, key=shortlex_key)
            log.append(f"ambiguity {label}: reducts {fmt(cand.left)} | {fmt(cand.right)}")
            log.append(f"  forms: {' , '.join(map(fmt, lf)) or 'none'} | "
                       f"{' , '.join(map(fmt, rf)) or 'none'}")
            if not lf or not rf:
                return outcome("failed", f"{label}: a reduct has no cyclically irreducible form")
            tagged = [(z, cand.left) for z in lf] + [(z, cand.right) for z in rf]
            z1, via1 = tagged[0]
            pick = next(((z, via) for z, via in tagged if state.terminal(z) != state.terminal(z1)), None)
            if pick is None:
                raise ConsistencyError(f"{label}: unresolved but all forms share one end point")
            z2, via2 = pick
            try:
                choice = orientation_policy(z1, z2, state)
            except CompletionConflict as exc:
                return outcome("failed", f"{label}: conflict between {fmt(z1)} and {fmt(z2)}: {exc}")
            if choice is None:
                raise ConsistencyError(f"{label}: orientation rejected an unresolved pair")
            lhs, rhs, why = choice
            if not is_cyclically_irreducible(base, lhs, include_cyclic=False):
                raise ConsistencyError(f"added lhs {fmt(lhs)} is cyclically reducible")
            p1 = _pair_to_form(base, cand.site, via1, z1, budget)
            p2 = _pair_to_form(base, cand.site, via2, z2, budget)
            # site -> z1 and site -> z2 give z2 -> z1 by going back through the site
            certs[(lhs, rhs)] = _orient_pair(lhs, rhs, z1, z2, _compose(_invert(p2), p1))
            state.sources[lhs] = rhs
            state.targets.add(rhs)
            final, full = finish_pair(lhs, rhs)
            log.append(f"  orient: {fmt(lhs)} ~>+ {fmt(rhs)} ({why})")
            if final != rhs:
                log.append(f"  rhs renormalized: {fmt(rhs)} to {fmt(final)}")
            _add_rule(base, added, lhs, final, full, label)
            # earlier reductions that pointed at lhs now point past it
            for i, r in enumerate(added[:-1]):
                if r.rhs == lhs:
                    f2, p = finish_pair(r.lhs, r.rhs)
                    log.append(f"  rhs renormalized: {fmt(r.lhs)} ~>+ {fmt(r.rhs)} now ends at {fmt(f2)}")
                    added[i] = _make_rule(base, r.lhs, f2, p, r.id, r.origin)
            changed = True
            if len(added) >= max_added:
                return outcome("budget_exhausted", f"reached {max_added} added reductions")
        if not changed:
            log.append(f"pass {passes}: every ambiguity resolves")
            break
    final_sys = current()
    for cand in sites:
        res = resolve_pair(final_sys, cand.left, cand.right, budget)
        if res.verdict != "resolves":
            raise ConsistencyError(f"ambiguity at {fmt(cand.site)} unresolved after completion")
    return outcome("completed")


def _orient_pair(lhs, rhs, z1, z2, p21: Pair) -> Pair:
    """Conjugators lhs -> rhs from conjugators z2 -> z1 (words as found, maybe unrotated)."""
    c1, c2 = canonical_rotation(z1), canonical_rotation(z2)
    if (lhs, rhs) == (c2, c1):
        pair = p21
        src, dst = z2, z1
    else:
        pair = _invert(p21)
        src, dst = z1, z2
    return _compose(_compose(_align(lhs, src), pair), _align(dst, rhs))


def _make_rule(base, lhs, rhs, pair, rule_id, origin):
    x, y = pair
    if not identities_hold(base, lhs, rhs, x, y):
        raise ConsistencyError(f"certificate for {base.fmt(lhs)} ~>+ {base.fmt(rhs)} fails")
    return CyclicRule(lhs, rhs, rule_id, origin, Certificate(lhs, rhs, x, y))


def _add_rule(base, added, lhs, rhs, pair, origin):
    added.append(_make_rule(base, lhs, rhs, pair, f"c{len(added) + 1}", origin))


@dataclass(frozen=True)
class CompletenessReport:
    checked: int
    unique: int
    no_form: tuple[Word, ...]
    ambiguous: tuple[tuple[Word, frozenset], ...]
    unknown: tuple[Word, ...]

    @property
    def ok(self) -> bool:
        return not self.ambiguous and not self.unknown


def verify_cyclically_complete(system: RewritingSystem, budget: Budget = DEFAULT_BUDGET,
                               sample=None, *, max_length: int = 5) -> CompletenessReport:
    """Check unique cyclically irreducible forms on sample words (default: all up to ``max_length``)."""
    if sample is None:
        k = len(system.alphabet)
        if sum(k ** n for n in range(1, max_length + 1)) > 200_000:
            raise ContractError("too many words; pass a sample or a smaller max_length")
        sample = (w for n in range(1, max_length + 1) for w in product(range(k), repeat=n))
    done = set()
    unique = 0
    no_form, amb, unk = [], [], []
    for w in sample:
        c = canonical_rotation(tuple(w))
        if c in done:
            continue
        rep = explore_allseq(system, c, budget)
        done.add(c)
        forms = rep.irreducible_forms
        if len(forms) > 1:
            amb.append((c, frozenset(forms)))
        elif rep.budget_hit:
            unk.append(c)
        elif forms:
            unique += 1
        else:
            no_form.append(c)
    return CompletenessReport(len(done), unique, tuple(no_form), tuple(amb), tuple(unk))
