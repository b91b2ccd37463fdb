"""``mh`` command-line front end.

Exit status: 0 on success, 1 when the answer is negative (a failed query,
a fuzz counterexample), 2 on usage, input or parse errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import oracle
from .depgraph import build_dependency_graph, to_dot
from .reduction import layered_remainder, remainder, well_founded_model
from .semantics import (
    brave_query,
    cautious_query,
    classical_hypotheses_set,
    hypotheses_set,
    is_minimal_model,
    is_stable_model,
    solve,
)
from .syntax import (
    GroundingError,
    GroundProgram,
    ParseError,
    SafetyError,
    format_atoms,
    format_program,
    load_ground,
    parse_literals,
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _set(atoms) -> str:
    return "{" + format_atoms(atoms, ", ") + "}"


def _names(atoms) -> list[str]:
    return [str(a) for a in sorted(atoms)]


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _load(path: str) -> GroundProgram:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    return load_ground(text)


def _warn_incomplete(complete: bool):
    if not complete:
        print("warning: enumeration stopped at --limit; results may be partial", file=sys.stderr)


def cmd_ground(args) -> tuple[int, str]:
    p = _load(args.file)
    if args.ids:
        return 0, "".join(f"{r.id}: {r}\n" for r in p.rules)
    return 0, format_program(p)


def cmd_remainder(args) -> tuple[int, str]:
    p = _load(args.file)
    rem, trace = (layered_remainder if args.layered else remainder)(p)
    out = format_program(rem)
    if args.trace:
        out += trace.format()
    return 0, out


def cmd_graph(args) -> tuple[int, str]:
    p = _load(args.file)
    return 0, to_dot(p, build_dependency_graph(p))


def cmd_wfm(args) -> tuple[int, str]:
    w = well_founded_model(_load(args.file))
    if args.json:
        return 0, _dump(
            {
                "true": _names(w.true_atoms),
                "undefined": _names(w.undefined_atoms),
                "false": _names(w.false_atoms),
            }
        )
    lines = [("true:", w.true_atoms), ("undef:", w.undefined_atoms), ("false:", w.false_atoms)]
    return 0, "".join(" ".join([label, *_names(atoms)]) + "\n" for label, atoms in lines)


def cmd_hyps(args) -> tuple[int, str]:
    p = _load(args.file)
    hyps = classical_hypotheses_set(p) if args.classical else hypotheses_set(p)
    if args.json:
        return 0, _dump({"hyps": _names(hyps)})
    return 0, format_atoms(hyps) + "\n"


def cmd_models(args) -> tuple[int, str]:
    models = solve(_load(args.file), args.limit)
    _warn_incomplete(models.complete)
    if args.json:
        return 0, _dump(models.to_json())
    lines = []
    for m in models:
        line = _set(m.true_atoms)
        if args.witnesses:
            line += "  witnesses: " + ", ".join(_set(w) for w in m.witnesses)
        lines.append(line + "\n")
    return 0, "".join(lines)


def cmd_query(args) -> tuple[int, str]:
    p = _load(args.file)
    q = parse_literals(args.query)
    run = brave_query if args.brave else cautious_query
    ans = run(p, q, use_relevance=args.relevance, limit=args.limit)
    _warn_incomplete(ans.complete)
    code = 0 if ans.holds else 1
    if args.json:
        return code, _dump(ans.to_json())
    out = "yes\n" if ans.holds else "no\n"
    if ans.witness is not None:
        label = "witness" if ans.holds else "counter-model"
        out += f"{label}: {_set(ans.witness.true_atoms)}\n"
    return code, out


def cmd_classify(args) -> tuple[int, str]:
    p = _load(args.file)
    models = solve(p, args.limit)
    _warn_incomplete(models.complete)
    lines = []
    for m in models:
        stable = "stable" if is_stable_model(p, m.model) else "non-stable"
        minimal = "minimal" if is_minimal_model(p, m.model) else "non-minimal"
        lines.append(f"{_set(m.true_atoms)} {stable} {minimal}\n")
    return 0, "".join(lines)


def cmd_fuzz(args) -> tuple[int, str]:
    props = oracle.PROPERTIES if args.property == "all" else (args.property,)
    report = oracle.sweep(args.programs, args.atoms, args.rules, args.seed, props, args.orders)
    if report.ok:
        return 0, f"ok: {report.checked} programs, properties: {', '.join(props)}\n"
    out = f"counterexample after {report.checked} programs:\n"
    out += "".join(f"% {f}\n" for f in report.failures)
    out += format_program(report.counterexample)
    return 1, out


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mh", description="Minimal Hypotheses semantics for normal logic programs")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_file(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("file", help="program file (.lp)")
        return sp

    sp = with_file("ground", "print the ground program in canonical form")
    sp.add_argument("--ids", action="store_true", help="list rules with their ids, in id order")
    sp.set_defaults(func=cmd_ground)

    sp = with_file("remainder", "print the remainder of the program")
    sp.add_argument("--layered", action="store_true", help="compute the layered remainder")
    sp.add_argument("--trace", action="store_true", help="append one line per rewrite step")
    sp.set_defaults(func=cmd_remainder)

    sp = with_file("graph", "print the rule dependency graph (DOT)")
    sp.set_defaults(func=cmd_graph)

    sp = with_file("wfm", "print the well-founded model")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_wfm)

    sp = with_file("hyps", "print the assumable hypotheses")
    sp.add_argument("--classical", action="store_true", help="use the remainder instead of the layered remainder")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_hyps)

    sp = with_file("models", "enumerate MH models (denials applied)")
    sp.add_argument("--witnesses", action="store_true", help="show the minimal hypothesis sets of each model")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--limit", type=int, default=None, help="max hypothesis subsets to examine")
    sp.set_defaults(func=cmd_models)

    sp = with_file("query", "brave or cautious query answering")
    mode = sp.add_mutually_exclusive_group(required=True)
    mode.add_argument("--brave", action="store_true")
    mode.add_argument("--cautious", action="store_true")
    sp.add_argument("query", help='ground literals, e.g. "a, not b"')
    sp.add_argument("--relevance", action="store_true", help="restrict single-atom queries to the relevant part")
    sp.add_argument("--json", action="store_true")
    sp.add_argument("--limit", type=int, default=None)
    sp.set_defaults(func=cmd_query)

    sp = with_file("classify", "tag each MH model stable/non-stable and minimal/non-minimal")
    sp.add_argument("--limit", type=int, default=None)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("fuzz", help="check semantic properties on random programs")
    sp.add_argument("--programs", type=int, default=100)
    sp.add_argument("--atoms", type=int, default=8)
    sp.add_argument("--rules", type=int, default=12)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--orders", type=int, default=50, help="random rewrite orders per confluence check")
    sp.add_argument("--property", choices=("all",) + oracle.PROPERTIES, default="all")
    sp.set_defaults(func=cmd_fuzz)
    return parser


def run(argv: Sequence[str]) -> tuple[int, str]:
    """Execute one ``mh`` invocation; returns (exit status, stdout text)."""
    try:
        args = build_parser().parse_args(list(argv))
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
    except (ParseError, SafetyError, GroundingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except SystemExit as exc:  # --help
        return (exc.code if isinstance(exc.code, int) else 0), ""
    return 2, ""


def main(argv: Optional[Sequence[str]] = None) -> int:
    code, out = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
