"""
Conjugacy certificates built from cyclic-reduction chains.

A cyclic step ``u = x y  ->  y x  ->  v`` gives ``u x = x v`` and ``y u = v y``
in the monoid.  Chains compose: right conjugators concatenate in order, left
conjugators in reverse.  Every certificate is re-derived from its chains
before it is handed out; normal forms give a second, independent check when
they settle the question.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .cyclic import (
    DEFAULT_BUDGET,
    Budget,
    Cycle,
    CyclicStep,
    StepKind,
    Tri,
    cyclic_steps,
    format_chain,
    rho,
)
from .errors import BudgetExceeded, ConsistencyError, ContractError, ParseError
from .graphs import strongly_connected_components
from .rewriting import DEFAULT_MAX_STEPS, RewritingSystem, Semantics, normal_form
from .words import EMPTY, Word, canonical_rotation, rotation_between

Pair = tuple[Word, Word]  # (right conjugator x, left conjugator y)


def transposition_witness(step: CyclicStep) -> Pair:
    """``(x, y)`` with ``source = x y`` and the rotated word ``y x``; ``(1, source)`` when unrotated."""
    if step.rotation == 0:
        return EMPTY, step.source
    i = step.rotation
    return step.source[:i], step.source[i:]


def _step_pair(system: RewritingSystem, step: CyclicStep) -> Pair:
    if step.kind is StepKind.BASE:
        return transposition_witness(step)
    rule = system.rule(step.rule)
    cert = rule.certificate
    if cert is None:
        raise ContractError(f"cyclic rule {rule.id} carries no certificate")
    x1, y1 = _rotation_pair(step.source, step.rotation)
    return x1 + cert.x, cert.y + y1


def _rotation_pair(w: Word, k: int) -> Pair:
    # pure rotation w = x y -> y x holds in the free monoid
    if k == 0:
        return EMPTY, EMPTY
    return w[:k], w[k:]


def _compose(a: Pair, b: Pair) -> Pair:
    return a[0] + b[0], b[1] + a[1]


def _invert(a: Pair) -> Pair:
    return a[1], a[0]


def chain_pair(system: RewritingSystem, steps) -> Pair:
    pair = (EMPTY, EMPTY)
    for s in steps:
        pair = _compose(pair, _step_pair(system, s))
    return pair


def identities_verdict(system: RewritingSystem, u: Word, v: Word, x: Word, y: Word, *,
                       max_steps: int = DEFAULT_MAX_STEPS) -> Tri:
    """Decide ``u x = x v`` and ``y u = v y`` by base normal forms where possible.

    Equal forms prove equality in any system.  Different forms refute it only
    when the system is asserted complete; otherwise, and when rewriting does
    not terminate within ``max_steps``, the answer is UNKNOWN.
    """
    base = system.base()
    try:
        nf = lambda w: normal_form(base, w, max_steps=max_steps)[0]  # noqa: E731
        same = nf(u + x) == nf(x + v) and nf(y + u) == nf(v + y)
    except BudgetExceeded:
        return Tri.UNKNOWN
    if same:
        return Tri.YES
    return Tri.NO if system.asserted_complete else Tri.UNKNOWN


def identities_hold(system: RewritingSystem, u: Word, v: Word, x: Word, y: Word, *,
                    max_steps: int = DEFAULT_MAX_STEPS) -> bool:
    return identities_verdict(system, u, v, x, y, max_steps=max_steps) is Tri.YES


@dataclass(frozen=True)
class Certificate:
    """``u x = x v`` and ``y u = v y`` in the monoid.

    ``chain_u`` runs from ``u`` and ``chain_v`` from ``v``; both end at
    rotations of ``pivot``.  A chain straight from ``u`` to a rotation of
    ``v`` has ``pivot = None`` and an empty ``chain_v``.
    """

    u: Word
    v: Word
    x: Word
    y: Word
    chain_u: tuple[CyclicStep, ...] = ()
    chain_v: tuple[CyclicStep, ...] = ()
    pivot: Word | None = None

    def inverse(self) -> Certificate:
        return Certificate(self.v, self.u, self.y, self.x, self.chain_v, self.chain_u, self.pivot)

    def decompositions(self) -> list[Pair]:
        """Per-step transposition witnesses along ``chain_u``."""
        return [transposition_witness(s) for s in self.chain_u]

    def to_text(self, system: RewritingSystem) -> str:
        fmt = system.fmt
        lines = [f"u: {fmt(self.u)}", f"v: {fmt(self.v)}", f"x: {fmt(self.x)}", f"y: {fmt(self.y)}"]
        if self.pivot is not None:
            lines.append(f"pivot: {fmt(self.pivot)}")
        for tag, chain in (("step-u", self.chain_u), ("step-v", self.chain_v)):
            for s in chain:
                lines.append(f"{tag}: {fmt(s.source)} | {s.rotation} | {s.rule} | "
                             f"{s.position} | {fmt(s.target)} | {s.kind.value}")
        return "\n".join(lines) + "\n"


def _chain_end(start: Word, steps) -> Word:
    return steps[-1].target if steps else start


def compose_certificate(system: RewritingSystem, chain, u: Word, v: Word, *,
                        max_steps: int = DEFAULT_MAX_STEPS) -> Certificate:
    """Certificate for a chain from ``u`` ending at a rotation of ``v``."""
    chain = tuple(chain)
    end = _chain_end(u, chain)
    k = rotation_between(end, v)
    if k is None:
        raise ContractError("chain does not end at a rotation of v")
    x, y = _compose(chain_pair(system, chain), _rotation_pair(end, k))
    cert = Certificate(u, v, x, y, chain, (), None)
    _check(system, cert, max_steps)
    return cert


def certificate_via_pivot(system: RewritingSystem, u: Word, chain_u, v: Word, chain_v, *,
                          max_steps: int = DEFAULT_MAX_STEPS) -> Certificate:
    """Certificate for ``u`` and ``v`` whose chains end at rotations of one word."""
    chain_u, chain_v = tuple(chain_u), tuple(chain_v)
    eu, ev = _chain_end(u, chain_u), _chain_end(v, chain_v)
    k = rotation_between(eu, ev)
    if k is None:
        raise ContractError("chains do not meet up to rotation")
    pair = _compose(chain_pair(system, chain_u), _rotation_pair(eu, k))
    pair = _compose(pair, _invert(chain_pair(system, chain_v)))
    cert = Certificate(u, v, pair[0], pair[1], chain_u, chain_v, canonical_rotation(eu))
    _check(system, cert, max_steps)
    return cert


def _check(system, cert, max_steps):
    problems = _derivation_problems(system, cert)
    if problems:
        raise ConsistencyError("composed certificate does not follow from its chains: "
                               + "; ".join(problems))


def _replay(system, start, chain, name, problems):
    cur = start
    for n, s in enumerate(chain, 1):
        if s.source != cur:
            problems.append(f"chain from {name}: step {n} does not start where the last ended")
            return None
        try:
            cur = s.replay(system)
        except (ContractError, KeyError) as exc:
            problems.append(f"chain from {name}: step {n} does not replay ({exc})")
            return None
        if cur != s.target:
            problems.append(f"chain from {name}: step {n} does not produce its stated target")
            return None
    return cur


def _chain_problems(system, cert):
    problems = []
    _replay(system, cert.u, cert.chain_u, "u", problems)
    _replay(system, cert.v, cert.chain_v, "v", problems)
    return problems


def _derivation_problems(system, cert):
    """Replay both chains and recompute ``(x, y)`` from them.

    Each step is one rotation and one rule application, so a matching pair
    proves both identities without any appeal to normal forms.
    """
    problems = _chain_problems(system, cert)
    if problems:
        return problems
    eu = _replay(system, cert.u, cert.chain_u, "u", [])
    ev = _replay(system, cert.v, cert.chain_v, "v", [])
    pair = chain_pair(system, cert.chain_u)
    if cert.pivot is None:
        # a direct chain, from u or (for an inverted certificate) from v
        if cert.chain_u and cert.chain_v:
            return ["two chains given without a pivot"]
        if cert.chain_v:
            k = rotation_between(ev, cert.u)
            if k is None:
                return ["chain from v does not end at a rotation of u"]
            pair = _invert(_compose(chain_pair(system, cert.chain_v), _rotation_pair(ev, k)))
        else:
            k = rotation_between(eu, cert.v)
            if k is None:
                return ["chain from u does not end at a rotation of v"]
            pair = _compose(pair, _rotation_pair(eu, k))
    else:
        if not (canonical_rotation(eu) == canonical_rotation(ev) == canonical_rotation(cert.pivot)):
            return ["chains do not end at rotations of the pivot"]
        pair = _compose(pair, _rotation_pair(eu, rotation_between(eu, ev)))
        pair = _compose(pair, _invert(chain_pair(system, cert.chain_v)))
    if pair != (cert.x, cert.y):
        return ["(x, y) is not the pair composed along the chains"]
    return []


def verify_certificate(system: RewritingSystem, cert: Certificate, *,
                       max_steps: int = DEFAULT_MAX_STEPS) -> list[str]:
    """Independent re-check; returns a list of problems (empty when valid).

    Chains must replay.  The pair must then either be the one composed along
    the chains or be confirmed by base normal forms.
    """
    chains = _chain_problems(system, cert)
    if chains:
        return chains
    derivation = _derivation_problems(system, cert)
    if not derivation:
        return []
    verdict = identities_verdict(system, cert.u, cert.v, cert.x, cert.y, max_steps=max_steps)
    if verdict is Tri.YES:
        return []
    if verdict is Tri.NO:
        return derivation + ["u.x = x.v or y.u = v.y fails: the normal forms differ"]
    return derivation + ["normal forms do not settle u.x = x.v and y.u = v.y in this system"]


def parse_certificate(system: RewritingSystem, text: str) -> Certificate:
    fields = {}
    chains = {"step-u": [], "step-v": []}
    parse = system.alphabet.parse
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, body = line.partition(":")
        if not sep:
            raise ParseError("expected 'key: value'", line=lineno, column=1)
        key = key.strip()
        try:
            if key in chains:
                parts = [p.strip() for p in body.split("|")]
                if len(parts) != 6:
                    raise ParseError("step needs 6 '|'-separated fields", line=lineno, column=1)
                src, rot, rule, pos, tgt, kind = parts
                chains[key].append(CyclicStep(parse(src), int(rot), rule, int(pos), parse(tgt),
                                              StepKind(kind)))
            elif key in ("u", "v", "x", "y", "pivot"):
                fields[key] = parse(body)
            else:
                raise ParseError(f"unknown key {key!r}", line=lineno, column=1)
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(exc.message, line=lineno, column=len(key) + 2) from None
            raise
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno, column=len(key) + 2) from None
    missing = [k for k in "uvxy" if k not in fields]
    if missing:
        raise ParseError("certificate lacks " + ", ".join(missing))
    return Certificate(fields["u"], fields["v"], fields["x"], fields["y"],
                       tuple(chains["step-u"]), tuple(chains["step-v"]), fields.get("pivot"))


_NOTES = {
    Semantics.GENERIC: "left and right conjugate in the monoid",
    Semantics.SPECIAL: ("left and right conjugate; for a special complete system "
                        "this also means transposed and left-conjugate"),
    Semantics.COMPLETELY_SIMPLE: ("left and right conjugate; in a completely simple "
                                  "semigroup this also means transposed"),
}


@dataclass(frozen=True)
class ConjugacyVerdict:
    result: str  # "conjugate", "transposed_chain" or "unknown"
    certificate: Certificate | None = None
    route: str = ""
    reason: str = ""
    semantics_note: str = ""
    decompositions: tuple[Pair, ...] = ()


def conjugacy_test(system: RewritingSystem, u: Word, v: Word,
                   budget: Budget = DEFAULT_BUDGET) -> ConjugacyVerdict:
    """Look for a certificate that ``u`` and ``v`` are conjugate.

    Never answers "not conjugate": distinct cyclically irreducible forms do
    not rule conjugacy out.
    """
    note = _NOTES[system.semantics]
    ms = budget.max_steps
    if u == v:
        cert = Certificate(u, v, EMPTY, EMPTY)
        _check(system, cert, ms)
        return ConjugacyVerdict("conjugate", cert, "identical", semantics_note=note)

    ru, rv = rho(system, u, budget), rho(system, v, budget)
    if ru.status == "unique" and rv.status == "unique" and ru.form == rv.form:
        cert = certificate_via_pivot(system, u, ru.chain(), v, rv.chain(), max_steps=ms)
        return ConjugacyVerdict("conjugate", cert, "common cyclically irreducible form",
                                semantics_note=note)

    rep_u, rep_v = ru.report, rv.report
    cv = canonical_rotation(v)
    if cv in rep_u.explored:
        cert = compose_certificate(system, rep_u.chain_to(cv), u, v, max_steps=ms)
        return ConjugacyVerdict("transposed_chain", cert, "u reduces cyclically to v",
                                semantics_note=note, decompositions=tuple(cert.decompositions()))
    cu = canonical_rotation(u)
    if cu in rep_v.explored:
        cert = compose_certificate(system, rep_v.chain_to(cu), v, u, max_steps=ms).inverse()
        return ConjugacyVerdict("transposed_chain", cert, "v reduces cyclically to u",
                                semantics_note=note, decompositions=tuple(cert.decompositions()))

    common = rep_u.explored & rep_v.explored
    if common:
        rank = {w: i for i, w in enumerate(rep_u.order)}
        z = min(common, key=rank.__getitem__)
        cert = certificate_via_pivot(system, u, rep_u.chain_to(z), v, rep_v.chain_to(z), max_steps=ms)
        return ConjugacyVerdict("conjugate", cert, "common descendant", semantics_note=note)

    if rep_u.budget_hit or rep_v.budget_hit:
        reason = "budget: " + (rep_u.budget_reason or rep_v.budget_reason)
    elif "ambiguous" in (ru.status, rv.status):
        reason = "rho ambiguous"
    elif "none" in (ru.status, rv.status):
        reason = "rho nonexistent"
    else:
        reason = "forms differ"
    return ConjugacyVerdict("unknown", None, "", reason, note)


@dataclass(frozen=True)
class TildeClass:
    members: tuple[Word, ...]
    cyclic: bool  # joined by a cycle with at least one rule application
    has_irreducible: bool


@dataclass(frozen=True)
class TildeClasses:
    length: int
    classes: tuple[TildeClass, ...]
    edges: dict = field(repr=False, compare=False)

    def class_of(self, w: Word) -> TildeClass:
        c = canonical_rotation(w)
        for cls in self.classes:
            if c in cls.members:
                return cls
        raise KeyError(w)


def tilde_classes(system: RewritingSystem, length: int, letters=None,
                  budget: Budget = DEFAULT_BUDGET) -> TildeClasses:
    """Mutual cyclic reducibility classes, seeded with all words of one length.

    Needs a length-nonincreasing system so the reachable graph is finite;
    shorter words reached from the seeds appear in classes of their own.
    """
    if not system.length_nonincreasing:
        raise ContractError("classes need a length-nonincreasing system")
    pool = sorted(letters) if letters is not None else list(range(len(system.alphabet)))
    count = len(pool) ** length
    if count > budget.max_nodes:
        raise ContractError(f"refusing to enumerate {count} words (node budget {budget.max_nodes})")
    seeds = sorted({canonical_rotation(w) for w in system.alphabet.words(length, pool)})
    nodes = list(seeds)
    seen = set(seeds)
    edges = {}
    queue = deque(seeds)
    while queue:
        v = queue.popleft()
        out = []
        for s in cyclic_steps(system, v):
            t = canonical_rotation(s.target)
            out.append((t, s))
            if t not in seen:
                seen.add(t)
                nodes.append(t)
                queue.append(t)
        edges[v] = tuple(out)
    succ = {v: [t for t, _ in edges[v]] for v in nodes}
    classes = []
    for comp in strongly_connected_components(nodes, succ):
        members = set(comp)
        cyclic = any(t in members for v in members for t, _ in edges[v])
        has_irr = any(not edges[v] for v in members)
        classes.append(TildeClass(tuple(sorted(members)), cyclic, has_irr))
    classes.sort(key=lambda c: c.members[0])
    return TildeClasses(length, tuple(classes), edges)


def commutativity_relations(system: RewritingSystem, cycle: Cycle, *,
                            max_steps: int = DEFAULT_MAX_STEPS) -> Pair:
    """``(x, y)`` from a cycle ``w ->* w~`` with ``yx w~ = w~ yx`` and ``xy w = w xy``."""
    if not cycle.steps:
        raise ContractError("trivial cycle")
    w = cycle.start
    wt = cycle.steps[-1].target
    x, y = chain_pair(system, cycle.steps)
    # w x = x w~ and y w = w~ y give both commutations directly
    if identities_verdict(system, w, wt, x, y, max_steps=max_steps) is Tri.NO:
        raise ConsistencyError("commutation identities fail for the cycle")
    return x, y


def describe(system: RewritingSystem, verdict: ConjugacyVerdict) -> str:
    if verdict.certificate is None:
        return f"unknown ({verdict.reason})"
    c = verdict.certificate
    chain = format_chain(system, c.u, c.chain_u) if c.chain_u else system.fmt(c.u)
    return f"{verdict.result} via {verdict.route}: {chain}"
