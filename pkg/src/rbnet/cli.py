"""Command-line interface.

Subcommands: ``check`` validates a model, ``infer`` answers scenario queries
by exact variable elimination, ``oracle`` answers them by brute-force
enumeration, ``deps`` prints the symbolic parent formula between two
relations, and ``translate-fol`` compiles a first-order formula into an
equivalent 0/1 probability formula.

Exit codes: 0 success, 1 parse/validation error, 2 inconsistent evidence,
3 well-foundedness failure, 4 enumeration budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import fol, frontend
from .dependency import DependencyAnalyzer, normalize
from .errors import (BudgetExceededError, InconsistentEvidenceError,
                     NotNormalizableError, RbnError, WellFoundednessError)
from .grounding import brute_force_conditional, infer_report
from .model import GroundAtom

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INCONSISTENT = 2
EXIT_NOT_WELLFOUNDED = 3
EXIT_BUDGET = 4


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def format_dependency(d) -> str:
    """Render a parent/ancestor formula; unsatisfiable is 'false'."""
    if d.is_false:
        return "false"

    def lit(l):
        a = l.atom
        if hasattr(a, "name"):  # rigid atom
            body = f"{a.name}({','.join(t.name for t in a.args)})"
            return body if l.positive else f"!{body}"
        op = "=" if l.positive else "!="
        return f"{a.left.name} {op} {a.right.name}"

    parts = []
    for disj in d.disjuncts:
        body = " & ".join(lit(l) for l in disj) or "true"
        parts.append(f"({body})" if len(d.disjuncts) > 1 and len(disj) > 1 else body)
    s = " | ".join(parts)
    if d.exvars:
        return f"exists {','.join(v.name for v in d.exvars)} . {s}"
    return s


def format_normal_form(cnf, variables) -> str:
    """Render a cardinality normal form, one equality type per line."""
    if not cnf.entries:
        return "false"
    lines = []
    for pattern, guard in sorted(cnf.entries.items()):
        classes = {}
        for v, c in zip(variables, pattern):
            classes.setdefault(c, []).append(v.name)
        groups = " ".join("{" + " ".join(names) + "}" for _, names in sorted(classes.items()))
        lines.append(f"{groups}  (|D| >= {guard})")
    return "\n".join(lines)


def cmd_check(args) -> int:
    parsed = frontend.parse_model(_read(args.model))
    n = parsed.network
    print(f"ok: {len(n.labels)} probabilistic relation(s), "
          f"{len(n.vocabulary.rigid)} rigid symbol(s)")
    if n.recursive_relations:
        rec = ", ".join(sorted(n.recursive_relations))
        print(f"note: recursive relation(s) {rec}; "
              "well-foundedness depends on the rigid structure")
    return EXIT_OK


def _scenario(args):
    doc = frontend.parse_scenario(_read(args.scenario))
    return doc, frontend.scenario_structure(doc), frontend.scenario_evidence(doc)


def _print_record(rec, as_json: bool):
    if as_json:
        print(json.dumps(rec))
        return
    line = f"query {rec['query']}: probability {rec['probability']:.12g}"
    if "nodes" in rec:
        line += (f"  nodes={rec['nodes']} edges={rec['edges']} "
                 f"width={rec['width']} time={rec['wall_seconds']:.3f}s")
    if "oracle" in rec:
        line += f"  oracle={rec['oracle']:.12g} delta={rec['delta']:.3g}"
    print(line)


def _report_wellfoundedness(n, s, as_json: bool):
    if not n.recursive_relations:
        return
    analyzer = DependencyAnalyzer(n)
    ok, witness = analyzer.check_wellfounded(s)
    if not ok:
        raise WellFoundednessError(witness)
    if as_json:
        print(json.dumps({"well_founded": True}))
    else:
        print("well-founded: yes")


def cmd_infer(args) -> int:
    parsed = frontend.parse_model(_read(args.model))
    doc, s, e = _scenario(args)
    n, reg = parsed.network, parsed.registry
    _report_wellfoundedness(n, s, args.json)
    for q in doc.queries:
        try:
            res = infer_report(n, s, e, q, reg, order=args.elim_order)
        except ValueError as exc:
            raise RbnError(str(exc)) from None
        rec = {"query": str(q), "probability": res.probability,
               "nodes": res.node_count, "edges": res.edge_count,
               "width": res.width, "wall_seconds": res.wall_seconds}
        if args.oracle:
            p = brute_force_conditional(n, s, e, q, args.budget_bits, reg)
            rec["oracle"] = float(p)
            rec["delta"] = abs(res.probability - float(p))
        _print_record(rec, args.json)
    return EXIT_OK


def cmd_oracle(args) -> int:
    parsed = frontend.parse_model(_read(args.model))
    doc, s, e = _scenario(args)
    n, reg = parsed.network, parsed.registry
    _report_wellfoundedness(n, s, args.json)
    for q in doc.queries:
        try:
            p = brute_force_conditional(n, s, e, q, args.budget_bits, reg)
        except ValueError as exc:
            raise RbnError(str(exc)) from None
        _print_record({"query": str(q), "probability": float(p)}, args.json)
    return EXIT_OK


def cmd_deps(args) -> int:
    parsed = frontend.parse_model(_read(args.model))
    n = parsed.network
    for name in (args.relation, args.parent):
        if name not in n.vocabulary.probabilistic:
            raise RbnError(f"unknown probabilistic relation {name}")
    analyzer = DependencyAnalyzer(n)
    d = analyzer.parent(args.relation, args.parent)
    print(f"pa_{{{args.relation},{args.parent}}}"
          f"({','.join(v.name for v in d.xvars + d.yvars)}) = {format_dependency(d)}")
    try:
        cnf = normalize(d)
    except NotNormalizableError:
        print("normal form: not available (formula mentions rigid symbols)")
    else:
        print("normal form:")
        print(format_normal_form(cnf, d.xvars + d.yvars))
    return EXIT_OK


def cmd_translate_fol(args) -> int:
    phi = frontend.parse_fol(args.formula)
    print(frontend.format_formula(fol.translate(phi)))
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rbn",
                                 description="Relational Bayesian network toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="validate a model file")
    p.add_argument("model")
    p.set_defaults(fn=cmd_check)

    for name, fn in (("infer", cmd_infer), ("oracle", cmd_oracle)):
        p = sub.add_parser(name, help=f"answer scenario queries ({name})")
        p.add_argument("model")
        p.add_argument("scenario")
        p.add_argument("--json", action="store_true")
        p.add_argument("--budget-bits", type=int, default=24)
        if name == "infer":
            p.add_argument("--oracle", action="store_true",
                           help="also run brute force and report the delta")
            p.add_argument("--elim-order", choices=("minfill", "lex"),
                           default="minfill")
        p.set_defaults(fn=fn)

    p = sub.add_parser("deps", help="print the parent formula pa_{r,r'}")
    p.add_argument("model")
    p.add_argument("relation")
    p.add_argument("parent")
    p.set_defaults(fn=cmd_deps)

    p = sub.add_parser("translate-fol",
                       help="compile a first-order formula to a probability formula")
    p.add_argument("formula")
    p.set_defaults(fn=cmd_translate_fol)
    return ap


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except InconsistentEvidenceError as exc:
        print(f"error: inconsistent evidence: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except WellFoundednessError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_WELLFOUNDED
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (RbnError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
