"""
Plain-text system files.

    # comment
    alphabet: a b ab_ ba_ D
    option: complete
    option: semantics=special
    rule: a ba_ -> D
    schema: b a^n b a -> a b a^2 b^(n-1) ; n=2..N
    cyclic-rule: ba_ ~> ab_ ; x=b ; y=a b a

Symbols are whitespace separated.  ``1`` alone denotes the empty word and
``s^k`` repeats a symbol.  In schema lines the exponent may be an affine
expression in ``n`` (``n``, ``2n``, ``(n-1)``...).  The upper bound of a
schema range is an integer or ``N``, resolved from ``schema_bound``.
The optional ``x=``/``y=`` fields of a cyclic rule are conjugators with
``lhs x = x rhs`` and ``y lhs = rhs y``; they are checked on load.
"""

from __future__ import annotations

import logging
import re
from dataclasses import replace
from pathlib import Path

from .errors import ContractError, ParseError
from .rewriting import CyclicRule, RewritingSystem, Rule, Semantics
from .words import EMPTY_TOKEN, Alphabet, Word, canonical_rotation

log = logging.getLogger(__name__)

DEFAULT_SCHEMA_BOUND = 4

_KEY = re.compile(r"^\s*(?P<key>[a-z-]+)\s*:(?P<body>.*)$")
_RANGE = re.compile(r"^\s*n\s*=\s*(?P<lo>\d+)\s*\.\.\s*(?P<hi>\d+|N)\s*$")
_AFFINE = re.compile(r"^(?P<a>\d*)\*?n(?P<b>[+-]\d+)?$")


def _tokens(text, offset):
    """Whitespace tokens with their 1-based columns."""
    for m in re.finditer(r"\S+", text):
        yield m.group(0), offset + m.start() + 1


def _eval_exponent(expr, n):
    e = expr.strip()
    if e.startswith("(") and e.endswith(")"):
        e = e[1:-1].replace(" ", "")
    if e.isdigit():
        return int(e)
    m = _AFFINE.match(e)
    if m is None or n is None:
        raise ValueError(expr)
    a = int(m.group("a")) if m.group("a") else 1
    b = int(m.group("b")) if m.group("b") else 0
    return a * n + b


def _parse_word(alphabet, toks, lineno, n=None):
    if [t for t, _ in toks] == [EMPTY_TOKEN]:
        return ()
    out = []
    for tok, col in toks:
        name, exp = tok, "1"
        if tok not in alphabet and "^" in tok:
            name, exp = tok.split("^", 1)
        if name not in alphabet:
            raise ParseError(f"unknown symbol {name!r}", line=lineno, column=col)
        try:
            k = _eval_exponent(exp, n)
        except ValueError:
            raise ParseError(f"bad exponent {exp!r}", line=lineno, column=col) from None
        if k < 0:
            raise ParseError(f"negative exponent in {tok!r} (n={n})", line=lineno, column=col)
        out.extend([alphabet.index(name)] * k)
    return tuple(out)


def _split_arrow(body, offset, arrow, lineno):
    idx = body.find(arrow)
    if idx < 0:
        raise ParseError(f"missing '{arrow}'", line=lineno, column=offset + 1)
    left = list(_tokens(body[:idx], offset))
    right = list(_tokens(body[idx + len(arrow):], offset + idx + len(arrow)))
    if not left:
        raise ParseError("empty left-hand side", line=lineno, column=offset + idx + 1)
    if not right:
        raise ParseError("empty right-hand side (write 1 for the empty word)",
                         line=lineno, column=offset + idx + len(arrow) + 1)
    return left, right


def parse_system(text: str, *, source=None, schema_bound: int | None = None,
                 semantics: str | None = None) -> RewritingSystem:
    alphabet = None
    rules: list[Rule] = []
    cyclic: list[CyclicRule] = []
    complete = False
    sem = Semantics.GENERIC
    caveats = []
    pending = []

    def fail(msg, lineno, col=None):
        raise ParseError(msg, line=lineno, column=col, source=source)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        m = _KEY.match(line)
        if m is None:
            fail("expected 'key: value'", lineno, len(line) - len(line.lstrip()) + 1)
        key, body = m.group("key"), m.group("body")
        offset = m.start("body")
        try:
            if key == "alphabet":
                if alphabet is not None:
                    fail("alphabet declared twice", lineno, m.start("key") + 1)
                names = [t for t, _ in _tokens(body, offset)]
                if not names:
                    fail("empty alphabet", lineno, offset + 1)
                try:
                    alphabet = Alphabet(tuple(names))
                except ContractError as exc:
                    fail(str(exc), lineno, offset + 1)
                continue
            if key == "option":
                opt = body.strip()
                if opt == "complete":
                    complete = True
                elif opt.startswith("semantics="):
                    try:
                        sem = Semantics(opt.split("=", 1)[1].strip())
                    except ValueError:
                        fail(f"unknown semantics {opt!r}", lineno, offset + 1)
                else:
                    fail(f"unknown option {opt!r}", lineno, offset + 1)
                continue
            if alphabet is None:
                fail("alphabet must be declared before rules", lineno, 1)
            if key == "rule":
                left, right = _split_arrow(body, offset, "->", lineno)
                lhs = _parse_word(alphabet, left, lineno)
                rhs = _parse_word(alphabet, right, lineno)
                rules.append(_make_rule(lhs, rhs, f"r{len(rules) + 1}", lineno, left[0][1]))
            elif key == "schema":
                if ";" not in body:
                    fail("schema needs a range, e.g. '; n=2..N'", lineno, len(line) + 1)
                semi = body.rindex(";")
                rm = _RANGE.match(body[semi + 1:])
                if rm is None:
                    fail("bad schema range, expected 'n=LO..HI'", lineno, offset + semi + 2)
                lo = int(rm.group("lo"))
                hi = rm.group("hi")
                if schema_bound is not None:
                    hi = schema_bound
                elif hi == "N":
                    hi = DEFAULT_SCHEMA_BOUND
                hi = int(hi)
                left, right = _split_arrow(body[:semi], offset, "->", lineno)
                for n in range(lo, hi + 1):
                    lhs = _parse_word(alphabet, left, lineno, n)
                    rhs = _parse_word(alphabet, right, lineno, n)
                    rules.append(_make_rule(lhs, rhs, f"r{len(rules) + 1}", lineno, left[0][1]))
            elif key == "cyclic-rule":
                parts = body.split(";")
                left, right = _split_arrow(parts[0], offset, "~>", lineno)
                lhs = canonical_rotation(_parse_word(alphabet, left, lineno))
                rhs = canonical_rotation(_parse_word(alphabet, right, lineno))
                conj = {}
                pos = offset + len(parts[0]) + 1
                for part in parts[1:]:
                    name, eq, val = part.partition("=")
                    name = name.strip()
                    if not eq or name not in ("x", "y") or name in conj:
                        fail("expected 'x=WORD' or 'y=WORD'", lineno, pos + 1)
                    conj[name] = _parse_word(alphabet, list(_tokens(val, pos + len(name) + 1)), lineno)
                    pos += len(part) + 1
                if len(conj) == 1:
                    fail("cyclic rule needs both x= and y= or neither", lineno, offset + 1)
                try:
                    cyclic.append(CyclicRule(lhs, rhs, f"c{len(cyclic) + 1}", origin="file"))
                except ContractError as exc:
                    fail(str(exc), lineno, left[0][1])
                if conj:
                    pending.append((len(cyclic) - 1, conj["x"], conj["y"], lineno))
            else:
                fail(f"unknown key {key!r}", lineno, m.start("key") + 1)
        except ParseError as exc:
            if exc.source is None and source is not None:
                raise ParseError(exc.message, line=exc.line, column=exc.column,
                                 source=source) from None
            raise
    if alphabet is None:
        raise ParseError("no alphabet declared", source=source)
    if semantics is not None:
        sem = Semantics(semantics)

    grow = [r.id for r in rules if len(r.rhs) > len(r.lhs)]
    if grow:
        msg = ("length-increasing rules " + ", ".join(grow) +
               ": truncated schemas may be unsound for bounded-length analysis")
        caveats.append(msg)
        log.warning(msg)
    system = RewritingSystem(alphabet, tuple(rules), complete, sem, tuple(cyclic), tuple(caveats))
    if pending:
        from .conjugacy import Certificate, identities_hold

        for i, x, y, lineno in pending:
            c = cyclic[i]
            if not identities_hold(system, c.lhs, c.rhs, x, y):
                raise ParseError("conjugators do not satisfy lhs x = x rhs and y lhs = rhs y",
                                 line=lineno, column=1, source=source)
            cyclic[i] = replace(c, certificate=Certificate(c.lhs, c.rhs, x, y))
        system = replace(system, cyclic_rules=tuple(cyclic))
    return system


def _make_rule(lhs, rhs, rule_id, lineno, col):
    try:
        return Rule(lhs, rhs, rule_id)
    except ContractError as exc:
        raise ParseError(str(exc), line=lineno, column=col) from None


def load_system(path, *, schema_bound=None, semantics=None) -> RewritingSystem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read system file: {exc.strerror}", source=path) from None
    return parse_system(text, source=path, schema_bound=schema_bound, semantics=semantics)


def dump_system(system: RewritingSystem, *, header: str | None = None) -> str:
    """Serialize with every schema instance written out as a plain rule."""
    fmt = system.fmt
    lines = []
    if header:
        lines.extend(f"# {h}" for h in header.splitlines())
    lines.append("alphabet: " + " ".join(system.alphabet.symbols))
    if system.asserted_complete:
        lines.append("option: complete")
    if system.semantics is not Semantics.GENERIC:
        lines.append(f"option: semantics={system.semantics.value}")
    for r in system.rules:
        lines.append(f"rule: {fmt(r.lhs)} -> {fmt(r.rhs)}")
    for c in system.cyclic_rules:
        line = f"cyclic-rule: {fmt(c.lhs)} ~> {fmt(c.rhs)}"
        if c.certificate is not None:
            line += f" ; x={fmt(c.certificate.x)} ; y={fmt(c.certificate.y)}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def parse_word(system: RewritingSystem, text: str) -> Word:
    """Parse a command-line word, naming the offending token on error."""
    toks = list(_tokens(text, 0))
    if not toks:
        raise ParseError("empty word argument (write 1 for the empty word)")
    return _parse_word(system.alphabet, toks, None)
