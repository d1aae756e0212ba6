"""
Cyclic reduction: rotate a word, then rewrite once.

Exploration works on a graph whose nodes are canonical rotations and whose
edges are single cyclic steps.  Edges remember the concrete rotation and
rule position so that any path can be replayed on concrete words via
:func:`concretize`.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from .errors import ContractError
from .graphs import adjacency_text, dot_text, strongly_connected_components
from .rewriting import DEFAULT_MAX_STEPS, ReductionTrace, RewritingSystem, apply_rule
from .words import Word, canonical_rotation, occurrences, rotate, rotation_between, rotations

ROT = "⟲"


class Tri(str, enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"


class StepKind(str, enum.Enum):
    BASE = "base"
    ADDED = "added"


@dataclass(frozen=True)
class Budget:
    max_nodes: int = 50_000
    max_edges: int = 500_000
    max_steps: int = DEFAULT_MAX_STEPS


DEFAULT_BUDGET = Budget()


@dataclass(frozen=True)
class CyclicStep:
    source: Word
    rotation: int
    rule: str
    position: int
    target: Word
    kind: StepKind = StepKind.BASE

    @property
    def rotated(self) -> Word:
        return rotate(self.source, self.rotation)

    @property
    def reduction(self) -> ReductionTrace:
        return ReductionTrace(self.rotated, self.target, ((self.rule, self.position),))

    def replay(self, system: RewritingSystem) -> Word:
        """Recompute the target from the source; raises ContractError on mismatch."""
        rotated = self.rotated
        rule = system.rule(self.rule)
        if self.kind is StepKind.BASE:
            out = apply_rule(rule, rotated, self.position)
        else:
            if rotated != rule.lhs:
                raise ContractError(f"cyclic rule {rule.id} does not match {rotated}")
            out = rule.rhs
        if out != self.target:
            raise ContractError(f"step via {self.rule} does not reach its recorded target")
        return out

    def rebase(self, word: Word) -> CyclicStep:
        """The same step started from a rotation ``word`` of its source."""
        if word == self.source:
            return self
        k = rotation_between(word, self.source)
        if k is None:
            raise ContractError("rebase target is not a rotation of the step source")
        j = (k + self.rotation) % max(1, len(word))
        return CyclicStep(word, j, self.rule, self.position, self.target, self.kind)


def cyclic_steps(system: RewritingSystem, w: Word) -> list[CyclicStep]:
    """Every single-rule cyclic step out of ``w``.

    One step per (distinct rotated word, rule, position); cyclic rules of the
    system contribute whole-word steps.
    """
    out = []
    for i, r in rotations(w):
        for rule in system.rules:
            for p in occurrences(rule.lhs, r):
                out.append(CyclicStep(w, i, rule.id, p, r[:p] + rule.rhs + r[p + len(rule.lhs):]))
        for c in system.cyclic_rules:
            if c.lhs == r:
                out.append(CyclicStep(w, i, c.id, 0, c.rhs, StepKind.ADDED))
    return out


def is_cyclically_irreducible(system: RewritingSystem, w: Word, *, include_cyclic: bool = True) -> bool:
    for _, r in rotations(w):
        for rule in system.rules:
            if next(occurrences(rule.lhs, r), None) is not None:
                return False
    if include_cyclic and system.cyclic_rules:
        canon = canonical_rotation(w)
        return all(c.lhs != canon for c in system.cyclic_rules)
    return True


def concretize(start: Word, steps) -> list[CyclicStep]:
    """Rebase a chain of node-level steps onto concrete words, starting at ``start``."""
    out = []
    cur = start
    for s in steps:
        s = s.rebase(cur)
        out.append(s)
        cur = s.target
    return out


def format_chain(system: RewritingSystem, start: Word, steps, closing: int = 0) -> str:
    fmt = system.fmt
    parts = [fmt(start)]
    for s in steps:
        if s.rotation:
            parts.append(f"{ROT}{s.rotation} {fmt(s.rotated)}")
        parts.append(("->+ " if s.kind is StepKind.ADDED else "-> ") + fmt(s.target))
    if closing:
        last = steps[-1].target if steps else start
        parts.append(f"{ROT}{closing} {fmt(rotate(last, closing))}")
    return " ".join(parts)


@dataclass(frozen=True)
class Cycle:
    """An infinite cyclic-reduction sequence: ``lead_in`` then ``steps`` repeated."""

    start: Word
    steps: tuple[CyclicStep, ...]
    closing_rotation: int
    lead_in: tuple[CyclicStep, ...] = ()

    def format(self, system: RewritingSystem) -> str:
        return format_chain(system, self.start, self.steps, self.closing_rotation)


@dataclass(frozen=True)
class AllseqReport:
    root: Word
    start: Word  # canonical node of the root
    order: tuple[Word, ...]  # discovery order of canonical nodes
    edges: dict = field(repr=False, compare=False)  # node -> tuple[(target node, step)]
    expanded: frozenset[Word] = frozenset()
    parents: dict = field(default_factory=dict, repr=False, compare=False)
    irreducible_forms: frozenset[Word] = frozenset()
    witness: Cycle | None = None
    budget_hit: bool = False
    budget_reason: str | None = None
    terminates: Tri = Tri.UNKNOWN
    converges: Tri = Tri.UNKNOWN

    @property
    def explored(self) -> frozenset[Word]:
        return frozenset(self.order)

    @property
    def exhaustive(self) -> bool:
        return not self.budget_hit

    def node_path(self, node: Word) -> list[CyclicStep]:
        """Node-level steps along the BFS tree from the start to ``node``."""
        if node not in self.parents and node != self.start:
            raise KeyError(node)
        path = []
        while node != self.start:
            prev, step = self.parents[node]
            path.append(step)
            node = prev
        path.reverse()
        return path

    def chain_to(self, node: Word) -> list[CyclicStep]:
        """Concrete steps from the root word to a rotation of ``node``."""
        return concretize(self.root, self.node_path(node))

    def adjacency(self, system: RewritingSystem) -> str:
        return adjacency_text(self.order, self.edges, system.fmt, lambda s: _edge_label(s))

    def dot(self, system: RewritingSystem) -> str:
        return dot_text(self.order, self.edges, system.fmt, lambda s: _edge_label(s),
                        name="allseq", highlight=self.irreducible_forms)


def _edge_label(step: CyclicStep) -> str:
    return f"{ROT}{step.rotation} {step.rule}@{step.position}"


def explore_allseq(system: RewritingSystem, w: Word, budget: Budget = DEFAULT_BUDGET) -> AllseqReport:
    """Breadth-first exploration of every cyclic-reduction sequence from any rotation of ``w``."""
    start = canonical_rotation(w)
    order = [start]
    seen = {start}
    parents = {}
    edges = {}
    expanded = set()
    queue = deque([start])
    n_edges = 0
    reason = None
    while queue:
        node = queue.popleft()
        steps = cyclic_steps(system, node)
        if n_edges + len(steps) > budget.max_edges:
            reason = f"edge budget ({budget.max_edges}) exhausted"
            break
        out = []
        for s in steps:
            t = canonical_rotation(s.target)
            out.append((t, s))
            if t not in seen:
                if len(seen) >= budget.max_nodes:
                    reason = f"node budget ({budget.max_nodes}) exhausted"
                    break
                seen.add(t)
                order.append(t)
                parents[t] = (node, s)
                queue.append(t)
        if reason:
            break
        n_edges += len(steps)
        edges[node] = tuple(out)
        expanded.add(node)

    budget_hit = reason is not None
    irreducible = frozenset(v for v in expanded if not edges[v])
    witness = _find_witness(w, start, order, edges, expanded, parents)

    if witness is not None:
        terminates = Tri.NO
    elif budget_hit:
        terminates = Tri.UNKNOWN
    else:
        terminates = Tri.YES
    if len(irreducible) >= 2:
        converges = Tri.NO
    elif budget_hit:
        converges = Tri.UNKNOWN
    else:
        converges = Tri.YES if len(irreducible) == 1 else Tri.NO

    return AllseqReport(w, start, tuple(order), edges, frozenset(expanded), parents,
                        irreducible, witness, budget_hit, reason, terminates, converges)


def _find_witness(root, start, order, edges, expanded, parents):
    # only expanded nodes have known out-edges; unexpanded ones act as sinks
    succ = {v: [t for t, _ in edges[v] if t in expanded] for v in expanded}
    rank = {v: i for i, v in enumerate(order)}
    best = None
    for comp in strongly_connected_components([v for v in order if v in expanded], succ):
        members = set(comp)
        if not any(s.kind is StepKind.BASE and t in members
                   for v in members for t, s in edges[v]):
            continue
        first = min(members, key=rank.__getitem__)  # the start has rank 0
        if best is None or rank[first] < rank[best[0]]:
            best = (first, members)
    if best is None:
        return None
    s0, members = best
    cycle = _shortest_cycle(s0, members, edges)
    if s0 == start:
        lead = []
        begin = root
    else:
        lead = concretize(root, _path(parents, start, s0))
        begin = lead[-1].target
    steps = concretize(begin, cycle)
    closing = rotation_between(steps[-1].target, begin)
    return Cycle(begin, tuple(steps), closing, tuple(lead))


def _path(parents, start, node):
    path = []
    while node != start:
        prev, step = parents[node]
        path.append(step)
        node = prev
    path.reverse()
    return path


def _shortest_cycle(s0, members, edges):
    back = {}
    queue = deque([s0])
    visited = {s0}
    while queue:
        v = queue.popleft()
        for t, s in edges[v]:
            if t == s0:
                path = [s]
                while v != s0:
                    v, prev_step = back[v]
                    path.append(prev_step)
                path.reverse()
                return path
            if t in members and t not in visited:
                visited.add(t)
                back[t] = (v, s)
                queue.append(t)
    raise AssertionError("component has no cycle through its start")


@dataclass(frozen=True)
class RhoResult:
    """Cyclically irreducible form(s) reachable from a word.

    ``status`` is ``unique``, ``ambiguous``, ``none`` (exhaustive search found
    no form) or ``unknown`` (budget hit before the search was exhaustive).
    """

    word: Word
    status: str
    forms: frozenset[Word]
    report: AllseqReport = field(repr=False, compare=False)

    @property
    def form(self) -> Word | None:
        return next(iter(self.forms)) if self.status == "unique" else None

    def chain(self, form: Word | None = None) -> list[CyclicStep]:
        form = self.form if form is None else form
        if form is None:
            raise ContractError("no unique form to build a chain to")
        return self.report.chain_to(form)

    def end(self, form: Word | None = None) -> Word:
        steps = self.chain(form)
        return steps[-1].target if steps else self.word


def rho(system: RewritingSystem, w: Word, budget: Budget = DEFAULT_BUDGET) -> RhoResult:
    report = explore_allseq(system, w, budget)
    forms = report.irreducible_forms
    if len(forms) >= 2:
        status = "ambiguous"
    elif report.budget_hit:
        status = "unknown"
    elif len(forms) == 1:
        status = "unique"
    else:
        status = "none"
    return RhoResult(w, status, forms, report)
