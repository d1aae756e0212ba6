"""Command-line front end (``cyclic-rw``)."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .analysis import cyclic_confluence_verdict
from .completion import cyclical_completion, verify_cyclically_complete
from .conjugacy import conjugacy_test, parse_certificate, tilde_classes, verify_certificate
from .cyclic import Budget, cyclic_steps, explore_allseq, format_chain, rho
from .errors import BudgetExceeded, ConsistencyError, ContractError, ParseError
from .rewriting import DEFAULT_MAX_STEPS, Semantics, normal_form
from .sysfile import dump_system, load_system, parse_word

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class Output:
    """Text lines or one JSON record per line, chosen by ``--format``."""

    def __init__(self, structured: bool, stream=None):
        self.structured = structured
        self.stream = stream or sys.stdout

    def text(self, line: str = "") -> None:
        if not self.structured:
            print(line, file=self.stream)

    def record(self, kind: str, /, **fields) -> None:
        if self.structured:
            print(json.dumps({"record": kind, **fields}, ensure_ascii=False), file=self.stream)


def _budget(args) -> Budget:
    return Budget(args.budget_nodes, args.budget_edges, args.max_steps)


def _tri(t) -> str:
    return t.value


def cmd_reduce(system, args, out):
    w = parse_word(system, args.word)
    nf, trace = normal_form(system, w, max_steps=args.max_steps)
    out.text(system.fmt(nf))
    out.record("reduce", word=system.fmt(w), normal_form=system.fmt(nf), steps=len(trace.steps))
    return EXIT_OK


def cmd_cyclic_reduce(system, args, out):
    w = parse_word(system, args.word)
    r = rho(system, w, _budget(args))
    fmt = system.fmt
    forms = sorted(r.forms)
    if r.status == "unique":
        chain = r.chain()
        out.text(fmt(r.end()))
        out.text(f"  chain: {format_chain(system, w, chain)}")
        out.text(f"  canonical: {fmt(r.form)}")
        out.record("cyclic-reduce", word=fmt(w), status="unique", form=fmt(r.end()),
                   canonical=fmt(r.form), chain=format_chain(system, w, chain))
        return EXIT_OK
    if r.status == "ambiguous":
        out.text("ambiguous: " + " ; ".join(fmt(f) for f in forms))
    elif r.status == "none":
        wit = r.report.witness
        out.text("none: no cyclically irreducible form" + (f" (cycle {wit.format(system)})" if wit else ""))
    else:
        out.text(f"unknown: budget hit ({r.report.budget_reason})")
    out.record("cyclic-reduce", word=fmt(w), status=r.status, forms=[fmt(f) for f in forms],
               budget=r.report.budget_reason)
    return EXIT_OK


def cmd_irreducible(system, args, out):
    w = parse_word(system, args.word)
    steps = cyclic_steps(system, w)
    fmt = system.fmt
    if steps:
        s = steps[0]
        out.text(f"no: {format_chain(system, w, [s])} ({s.rule})")
    else:
        out.text("yes")
    out.record("irreducible", word=fmt(w), irreducible=not steps,
               step=None if not steps else format_chain(system, w, steps[:1]))
    return EXIT_OK


def _report_lines(system, rep):
    fmt = system.fmt
    yield "word", fmt(rep.root)
    yield "explored", f"{len(rep.order)} nodes" + ("" if rep.exhaustive else f" (budget: {rep.budget_reason})")
    yield "terminates", _tri(rep.terminates)
    if rep.witness is not None:
        yield "witness", rep.witness.format(system)
    yield "converges", _tri(rep.converges)
    yield "forms", " ; ".join(fmt(f) for f in sorted(rep.irreducible_forms)) or "none"


def cmd_allseq(system, args, out):
    w = parse_word(system, args.word)
    rep = explore_allseq(system, w, _budget(args))
    for key, val in _report_lines(system, rep):
        out.text(f"{key}: {val}")
    out.record("allseq", **dict(_report_lines(system, rep)), exhaustive=rep.exhaustive)
    _maybe_plot(args, out, lambda p: _plotting().plot_allseq(system, rep, p))
    return EXIT_OK


def cmd_dump_graph(system, args, out):
    w = parse_word(system, args.word)
    rep = explore_allseq(system, w, _budget(args))
    text = rep.dot(system) if args.graph_format == "dot" else rep.adjacency(system)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        out.text(f"wrote {args.out}")
    else:
        out.text(text.rstrip("\n"))
    out.record("dump-graph", word=system.fmt(w), format=args.graph_format, graph=text,
               exhaustive=rep.exhaustive)
    _maybe_plot(args, out, lambda p: _plotting().plot_allseq(system, rep, p))
    return EXIT_OK


def _plotting():
    # matplotlib is slow to import; only pay for it when a figure is asked for
    from . import plotting

    return plotting


def _maybe_plot(args, out, draw):
    if getattr(args, "plot", None):
        path = draw(args.plot)
        out.text(f"figure: {path}")
        out.record("figure", path=str(path))


def _describe_candidate(system, c):
    fmt = system.fmt
    if c.kind == "overlap":
        dec = f"x={fmt(c.x)} u={fmt(c.u)} y={fmt(c.y)} v={fmt(c.v)}"
    else:
        dec = f"mode={c.mode} u={fmt(c.u)} rotation={c.rotation}"
    return dec


def cmd_audit(system, args, out):
    v = cyclic_confluence_verdict(system, _budget(args))
    fmt = system.fmt
    for c in v.candidates:
        res = c.resolution
        detail = res.reason
        if res.verdict == "resolves" and res.z is not None:
            detail += f" at {fmt(res.z)}"
        out.text(f"{c.kind} {c.r1}/{c.r2}: site {fmt(c.site)}; {_describe_candidate(system, c)}; "
                 f"reducts {fmt(c.left)} | {fmt(c.right)}; {res.verdict} ({detail})")
        out.record("candidate", kind=c.kind, r1=c.r1, r2=c.r2, site=fmt(c.site),
                   decomposition=_describe_candidate(system, c), left=fmt(c.left),
                   right=fmt(c.right), verdict=res.verdict, reason=res.reason,
                   z=None if res.z is None else fmt(res.z))
    term = _tri(v.termination)
    out.text(f"candidates: {len(v.candidates)}")
    out.text(f"termination: {term}" + (f" (cycle {v.termination_witness.format(system)})"
                                        if v.termination_witness else ""))
    line = f"verdict: {v.status}"
    if v.status == "not_confluent":
        line += f" (witness {fmt(v.witness)}: forms " + " ; ".join(fmt(f) for f in sorted(v.witness_forms)) + ")"
    elif v.conditional:
        line += " (conditional: cyclic termination " + ("fails" if term == "no" else "not established") + ")"
    out.text(line)
    out.record("verdict", status=v.status, conditional=v.conditional, termination=term,
               witness=None if v.witness is None else fmt(v.witness),
               forms=[fmt(f) for f in sorted(v.witness_forms)], reason=v.reason)
    for cav in system.caveats:
        out.text(f"caveat: {cav}")
    return EXIT_OK


def cmd_complete(system, args, out):
    o = cyclical_completion(system, _budget(args), max_added=args.max_added)
    text = dump_system(o.system, header=f"completion status: {o.status}")
    if args.log:
        Path(args.log).write_text(o.log_text(), encoding="utf-8")
    else:
        for line in o.log:
            out.text(line)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    fmt = system.fmt
    for r in o.added:
        out.text(f"added: {fmt(r.lhs)} ~>+ {fmt(r.rhs)}")
        out.record("added", lhs=fmt(r.lhs), rhs=fmt(r.rhs), x=fmt(r.certificate.x),
                   y=fmt(r.certificate.y), origin=r.origin)
    out.text(f"status: {o.status}" + (f" ({o.reason})" if o.reason else ""))
    out.record("completion", status=o.status, added=len(o.added), reason=o.reason,
               conditional=o.conditional, log=list(o.log), out=args.out)
    return EXIT_OK if o.status == "completed" else EXIT_FAIL


def cmd_conjugate(system, args, out):
    u, v = parse_word(system, args.u), parse_word(system, args.v)
    verdict = conjugacy_test(system, u, v, _budget(args))
    fmt = system.fmt
    cert = verdict.certificate
    if cert is None:
        out.text(f"unknown ({verdict.reason})")
    else:
        out.text(f"{verdict.result} ({verdict.route})")
        out.text(f"  x = {fmt(cert.x)} ; y = {fmt(cert.y)}")
        if cert.chain_u:
            out.text(f"  chain from u: {format_chain(system, cert.u, cert.chain_u)}")
        if cert.chain_v:
            out.text(f"  chain from v: {format_chain(system, cert.v, cert.chain_v)}")
        for i, (x, y) in enumerate(verdict.decompositions, 1):
            out.text(f"  step {i}: x = {fmt(x)}, y = {fmt(y)}")
        if args.certificate_out:
            Path(args.certificate_out).write_text(cert.to_text(system), encoding="utf-8")
            out.text(f"certificate: {args.certificate_out}")
    out.text(f"  note: {verdict.semantics_note}")
    out.record("conjugate", u=fmt(u), v=fmt(v), result=verdict.result, route=verdict.route,
               reason=verdict.reason, x=None if cert is None else fmt(cert.x),
               y=None if cert is None else fmt(cert.y), note=verdict.semantics_note)
    return EXIT_OK


def cmd_classes(system, args, out):
    letters = None
    if args.letters:
        letters = [system.alphabet.index(s) for s in args.letters.split()]
    tc = tilde_classes(system, args.length, letters, _budget(args))
    fmt = system.fmt
    for n, c in enumerate(tc.classes, 1):
        flags = []
        if c.cyclic:
            flags.append("cycle")
        flags.append("irreducible" if c.has_irreducible else "no irreducible member")
        out.text(f"class {n}: {' , '.join(fmt(m) for m in c.members)} [{', '.join(flags)}]")
        out.record("class", index=n, members=[fmt(m) for m in c.members], cyclic=c.cyclic,
                   has_irreducible=c.has_irreducible)
    out.text(f"classes: {len(tc.classes)}")
    _maybe_plot(args, out, lambda p: _plotting().plot_classes(system, tc, p))
    return EXIT_OK


def cmd_verify(system, args, out):
    if args.certificate:
        text = Path(args.certificate).read_text(encoding="utf-8")
        cert = parse_certificate(system, text)
        problems = verify_certificate(system, cert, max_steps=args.max_steps)
        for p in problems:
            out.text(f"problem: {p}")
        out.text("valid" if not problems else "invalid")
        out.record("verify", certificate=args.certificate, valid=not problems, problems=problems)
        return EXIT_OK if not problems else EXIT_FAIL
    rep = verify_cyclically_complete(system, _budget(args), max_length=args.length)
    fmt = system.fmt
    for w, forms in rep.ambiguous:
        out.text(f"ambiguous: {fmt(w)} -> " + " ; ".join(fmt(f) for f in sorted(forms)))
    for w in rep.unknown:
        out.text(f"unknown: {fmt(w)}")
    out.text(f"checked: {rep.checked}; unique: {rep.unique}; no form: {len(rep.no_form)}; "
             f"ambiguous: {len(rep.ambiguous)}; unknown: {len(rep.unknown)}")
    out.record("verify", checked=rep.checked, unique=rep.unique,
               no_form=[fmt(w) for w in rep.no_form],
               ambiguous=[fmt(w) for w, _ in rep.ambiguous], unknown=[fmt(w) for w in rep.unknown])
    return EXIT_OK if not rep.ambiguous else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("system", help="system file")
    common.add_argument("--budget-nodes", type=int, default=50_000, metavar="N")
    common.add_argument("--budget-edges", type=int, default=500_000, metavar="N")
    common.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS, metavar="N",
                        help="rewrite steps per normal-form computation")
    common.add_argument("--schema-bound", type=int, metavar="N",
                        help="instantiate schemas up to n=N (overrides the file)")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--semantics", choices=[s.value for s in Semantics])
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="cyclic-rw", description="Cyclic string rewriting toolkit.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help, words=(), plot=False):
        sp = sub.add_parser(name, parents=[common], help=help)
        for w in words:
            sp.add_argument(w, help="word, symbols separated by spaces (1 for empty)")
        if plot:
            sp.add_argument("--plot", metavar="PATH", help="also render a figure to PATH")
        sp.set_defaults(func=func)
        return sp

    add("reduce", cmd_reduce, "normal form under the rules", ["word"])
    add("cyclic-reduce", cmd_cyclic_reduce, "cyclically irreducible form", ["word"])
    add("irreducible", cmd_irreducible, "is the word cyclically irreducible", ["word"])
    add("allseq", cmd_allseq, "explore every cyclic reduction sequence", ["word"], plot=True)
    add("audit", cmd_audit, "cyclical overlaps, inclusions and a confluence verdict")
    sp = add("complete", cmd_complete, "run cyclical completion")
    sp.add_argument("--out", metavar="PATH", help="write the completed system here")
    sp.add_argument("--log", metavar="PATH", help="write the completion log here")
    sp.add_argument("--max-added", type=int, default=1_000, metavar="N")
    sp = add("conjugate", cmd_conjugate, "look for a conjugacy certificate", ["u", "v"])
    sp.add_argument("--certificate-out", metavar="PATH")
    sp = add("classes", cmd_classes, "mutual cyclic reducibility classes", plot=True)
    sp.add_argument("--length", type=int, required=True)
    sp.add_argument("--letters", help="restrict to these symbols, e.g. 'a b'")
    sp = add("verify", cmd_verify, "check a certificate, or unique forms on short words")
    sp.add_argument("certificate", nargs="?", help="certificate file")
    sp.add_argument("--length", type=int, default=5, help="word length bound without a certificate")
    sp = add("dump-graph", cmd_dump_graph, "explored graph as adjacency list or dot", ["word"], plot=True)
    sp.add_argument("--graph-format", choices=("adjacency", "dot"), default="adjacency")
    sp.add_argument("--out", metavar="PATH")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    out = Output(args.format == "structured")
    try:
        system = load_system(args.system, schema_bound=args.schema_bound, semantics=args.semantics)
        return args.func(system, args, out)
    except (ParseError, ContractError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"cyclic-rw: error: {msg}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cyclic-rw: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"cyclic-rw: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except ConsistencyError as exc:
        print(f"cyclic-rw: internal consistency failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
