"""Command-line front door: ``hodt {reduce,homotopic,kan,model-check,kleisli}``.

Output is NDJSON: one object per record, then a summary object carrying
the exit status.  Exit codes: 0 all checks pass, 1 check failures, 2 usage
or input error, 3 resource bound exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import kleisli as kl
from .category import CategoryError, FinCategory, terminal
from .lam import LambdaError, ParseError, parse, redexes, render
from .model import (CheckReport, HomotopicModel, ModelError, check_axioms, check_reflexive,
                    closed_corpus, soundness_suite)
from .paths import (DEFAULT_FUEL, Bounds, ResourceBoundExceeded, Step, Zigzag, explore, homotopic,
                    residuals_of, valley_normalize)
from .simplicial import DimensionBoundError, SimplicialError, TruncatedSSet, kan_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BOUND = 0, 1, 2, 3
DEFAULT_BUDGET = 200_000
NAMED_REDEXES = {"root": 0, "inner": 1}


class UsageError(Exception):
    """Bad flags or unreadable input; ``where`` locates the problem."""

    def __init__(self, message, where=None):
        super().__init__(message)
        self.where = where


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message, "arguments")


def _positive(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    if v <= 0:
        raise argparse.ArgumentTypeError(f"{text!r} must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--fuel", type=_positive, default=None)
    common.add_argument("--max-size", type=_positive, default=40)
    common.add_argument("--dim", type=_positive, default=None)
    common.add_argument("--budget", type=_positive, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("json", "dot", "text"), default="json")
    common.add_argument("--out", type=Path, default=None)

    p = _Parser(prog="hodt", description="Proof homotopy, Kan complexes, models and Kleisli checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("reduce", parents=[common], help="explore the reduction graph of a term")
    r.add_argument("term")
    r.add_argument("--depth", type=_positive, default=None)

    h = sub.add_parser("homotopic", parents=[common], help="compare two forward proofs")
    h.add_argument("term")
    h.add_argument("--proof1", required=True)
    h.add_argument("--proof2", required=True)
    h.add_argument("--search-depth", type=_positive, default=4)

    k = sub.add_parser("kan", parents=[common], help="check horn filling on a complex file")
    k.add_argument("complex", type=Path)
    k.add_argument("--max-failures", type=_positive, default=10)

    m = sub.add_parser("model-check", parents=[common], help="check a model fixture file")
    m.add_argument("fixture", type=Path)
    m.add_argument("--soundness", action="store_true")

    q = sub.add_parser("kleisli", parents=[common], help="run a Kleisli suite")
    q.add_argument("suite", choices=sorted(SUITES))
    q.add_argument("--set-bound", type=_positive, default=2)
    q.add_argument("--category", type=Path, action="append", default=[],
                   help="category JSON file; repeat to build the family")
    return p


# -- helpers ----------------------------------------------------------------------------

def _budget(args):
    if args.budget is not None:
        return args.budget
    env = os.environ.get("HODT_BUDGET")
    if env is None:
        return DEFAULT_BUDGET
    try:
        v = int(env)
    except ValueError:
        raise UsageError(f"HODT_BUDGET={env!r} is not an integer", "environment")
    if v <= 0:
        raise UsageError(f"HODT_BUDGET={env!r} must be positive", "environment")
    return v


def _read_json(path: Path):
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}", str(path))
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{exc.msg}", f"{path}:{exc.lineno}:{exc.colno}")


def _parse_term(text):
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(str(exc), "term")


def _proof(t, text, which):
    """Forward proof from a comma list of ordinals or of the names root/inner.

    Ordinals count the redexes of the current term.  Names denote redexes
    of the start term, and later steps follow their unique residual.
    """
    items = [s.strip() for s in text.split(",") if s.strip()]
    steps, cur = [], t
    for k, item in enumerate(items):
        where = f"{which}[{k}]"
        if item.isdigit():
            rs = redexes(cur)
            if int(item) >= len(rs):
                raise UsageError(f"step has {len(rs)} redexes, no ordinal {item}", where)
            r = rs[int(item)]
        elif item in NAMED_REDEXES:
            rs = redexes(t)
            if NAMED_REDEXES[item] >= len(rs):
                raise UsageError(f"start term has no {item!r} redex", where)
            tracked, src = [rs[NAMED_REDEXES[item]]], t
            for s in steps:
                tracked = [q for p in tracked for q in residuals_of(src, s.redex, p)]
                src = s.target
            if len(tracked) != 1:
                raise UsageError(f"{item!r} has {len(tracked)} residuals here, expected one", where)
            r = tracked[0]
        else:
            raise UsageError(f"unknown redex name {item!r}", where)
        s = Step(cur, r)
        steps.append(s)
        cur = s.target
    return Zigzag(t, steps)


def _report_lines(report: CheckReport):
    for name, v in sorted(report.verdicts.items()):
        yield {"record": "verdict", "subject": report.subject, **v.to_json()}


class _Out:
    def __init__(self, args):
        self.args = args
        self.lines = []

    def emit(self, obj):
        self.lines.append(obj)

    def text(self, fmt):
        if fmt == "json":
            return "".join(json.dumps(o, ensure_ascii=False) + "\n" for o in self.lines)
        out = []
        for o in self.lines:
            if "dot" in o:
                out.append(o["dot"])
            elif fmt == "text":
                out.append(" ".join(f"{k}={json.dumps(v, ensure_ascii=False)}" for k, v in o.items()))
        return "\n".join(out) + ("\n" if out else "")


# -- subcommands --------------------------------------------------------------------------

def cmd_reduce(args, out: _Out):
    t = _parse_term(args.term)
    bounds = Bounds(depth=args.depth or args.fuel or 10, max_size=args.max_size, max_vertices=_budget(args))
    G = explore([t], bounds)
    if args.format == "dot":
        out.emit({"dot": G.to_dot()})
    else:
        for i, v in enumerate(G.vertices):
            out.emit({"record": "vertex", "id": i, "term": render(v), "normal": not redexes(v)})
        for s, d, r in G.edges:
            out.emit({"record": "edge", "src": s, "dst": d, "redex": list(r)})
    summary = {"vertices": len(G.vertices), "edges": len(G.edges), "truncated": G.truncated}
    if G.truncated:
        return EXIT_BOUND, summary, {"kind": "resource", "message": "exploration hit its bounds"}
    return EXIT_OK, summary, None


def cmd_homotopic(args, out: _Out):
    t = _parse_term(args.term)
    try:
        z1 = _proof(t, args.proof1, "proof1")
        z2 = _proof(t, args.proof2, "proof2")
    except LambdaError as exc:
        raise UsageError(str(exc), "proof")
    if z1.end != z2.end:
        raise UsageError(f"proofs end at {render(z1.end)} and {render(z2.end)}", "proof2")
    fuel = args.fuel or DEFAULT_FUEL
    verdict = homotopic(z1, z2, fuel=fuel, search_depth=args.search_depth)
    p, q = valley_normalize(z1, fuel)
    out.emit({"record": "proofs", "term": render(t), "target": render(z1.end),
              "proof1": [list(s.redex) for s in z1.steps], "proof2": [list(s.redex) for s in z2.steps],
              "valley1": [len(p), len(q)]})
    if not verdict:
        return EXIT_FAIL, {"homotopic": False}, {"kind": "check-failed", "message": "proofs are not homotopic"}
    return EXIT_OK, {"homotopic": True}, None


def cmd_kan(args, out: _Out):
    obj = _read_json(args.complex)
    try:
        K = TruncatedSSet.from_json(obj)
    except SimplicialError as exc:
        raise UsageError(str(exc), str(args.complex))
    if args.format == "dot":
        out.emit({"dot": K.to_dot()})
    rep = kan_check(K, up_to=args.dim, max_failures=args.max_failures)
    if args.format != "dot":
        for h in rep.failures:
            out.emit({"record": "horn-failure", **h.to_json(K)})
    summary = {"pass": rep.passed, "up_to": rep.up_to, "horns_checked": rep.horns_checked,
               "failures": len(rep.failures)}
    if not rep.passed:
        first = rep.failures[0]
        return EXIT_FAIL, summary, {"kind": "check-failed", "message": f"unfillable horn Λ^{first.n}_{first.i}"}
    return EXIT_OK, summary, None


def cmd_model_check(args, out: _Out):
    obj = _read_json(args.fixture)
    try:
        m = HomotopicModel.from_json(obj)
    except (ModelError, SimplicialError) as exc:
        raise UsageError(str(exc), str(args.fixture))
    corpus = closed_corpus(min(args.max_size, 6))
    reports = [check_axioms(m, corpus)]
    if args.soundness:
        reports.append(soundness_suite(m, max_size=min(args.max_size, 6), fuel=args.fuel or 10))
    for rep in reports:
        for line in _report_lines(rep):
            out.emit(line)
    refl = check_reflexive(m, budget=_budget(args))
    out.emit({"record": "reflexive", **refl})
    failed = sorted({f for r in reports for f in r.failed()})
    summary = {"pass": not failed, "failed": failed, **refl}
    if failed:
        return EXIT_FAIL, summary, {"kind": "check-failed", "message": "axioms failed: " + ",".join(failed)}
    return EXIT_OK, summary, None


def _family(args):
    if not args.category:
        return kl.default_family()
    out = []
    for path in args.category:
        try:
            out.append(FinCategory.from_json(_read_json(path)))
        except CategoryError as exc:
            raise UsageError(str(exc), str(path))
    return out


def _suite_laws(args, fam):
    return [kl.kleisli_laws_check(fam, s=args.set_bound, budget=_budget(args))]


def _suite_curry(args, fam):
    reps = []
    for A in fam:
        for B in fam:
            for C in fam:
                if len(A.objects) * len(B.objects) <= 2:
                    reps.append(kl.curry_check(A, B, C, s=min(args.set_bound, 2), reindex_from=fam[:3]))
    return reps


def _suite_monad(args, fam):
    return [kl.monad_laws_check(L, fam) for L in (kl.IdentityMonad(), kl.InitialCompletion())]


def _suite_distributivity(args, fam):
    return [kl.distributivity_check(L, fam) for L in (kl.IdentityMonad(), kl.InitialCompletion())]


def _suite_extension(args, fam):
    return [kl.extend_monad(L, fam) for L in (kl.IdentityMonad(), kl.InitialCompletion())]


def _suite_enough_points(args, fam):
    reps = []
    small = [C for C in fam if len(C.morphisms) <= 3]
    for A in small:
        for B in small:
            extra = (kl.squaring_functor(),) if A == terminal() and B == terminal() else ()
            reps.append(kl.enough_points_check(A, B, s=min(args.set_bound, 2), extra=extra))
    return reps


SUITES = {
    "laws": _suite_laws,
    "curry": _suite_curry,
    "monad": _suite_monad,
    "distributivity": _suite_distributivity,
    "extension": _suite_extension,
    "enough-points": _suite_enough_points,
}


def cmd_kleisli(args, out: _Out):
    fam = _family(args)
    reports = SUITES[args.suite](args, fam)
    for rep in reports:
        for line in _report_lines(rep):
            out.emit(line)
        if rep.notes:
            out.emit({"record": "notes", "subject": rep.subject, "notes": rep.notes})
    failed = sorted({f"{r.subject}:{v}" for r in reports for v in r.failed()})
    summary = {"pass": not failed, "reports": len(reports), "failed": failed}
    if failed:
        return EXIT_FAIL, summary, {"kind": "check-failed", "message": f"{len(failed)} verdicts failed"}
    return EXIT_OK, summary, None


COMMANDS = {
    "reduce": cmd_reduce,
    "homotopic": cmd_homotopic,
    "kan": cmd_kan,
    "model-check": cmd_model_check,
    "kleisli": cmd_kleisli,
}


def run(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    out = _Out(None)
    fmt = "json"
    args = None
    try:
        args = build_parser().parse_args(argv)
        fmt = args.format
        code, summary, reason = COMMANDS[args.command](args, out)
    except UsageError as exc:
        code, summary, reason = EXIT_USAGE, {}, {"kind": "usage", "message": str(exc), "where": exc.where}
    except (ResourceBoundExceeded, kl.BudgetExceeded) as exc:
        code, summary, reason = EXIT_BOUND, {}, {"kind": "resource", "message": str(exc)}
    except DimensionBoundError as exc:
        code, summary, reason = EXIT_USAGE, {}, {"kind": "usage", "message": str(exc), "where": "--dim"}
    except (LambdaError, SimplicialError, CategoryError, kl.KleisliError, ModelError) as exc:
        code, summary, reason = EXIT_USAGE, {}, {"kind": "input", "message": str(exc)}
    final = {"record": "summary", "command": getattr(args, "command", None), "exit": code, **summary}
    if reason is not None:
        final["reason"] = reason
    if fmt == "dot" and code == EXIT_OK:
        text = out.text("dot")
    else:
        out.emit(final)
        text = out.text("json" if fmt == "dot" else fmt)
    if args is not None and args.out is not None:
        try:
            args.out.write_text(text, encoding="utf-8")
        except OSError as exc:
            text = json.dumps({"record": "summary", "command": args.command, "exit": EXIT_USAGE,
                               "reason": {"kind": "usage", "message": exc.strerror, "where": str(args.out)}})
            stdout.write(text + "\n")
            return EXIT_USAGE
        if fmt != "dot":
            stdout.write(json.dumps(final, ensure_ascii=False) + "\n")
    else:
        stdout.write(text)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
