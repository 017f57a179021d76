"""Command-line interface: ``qslocc4 <command> ...``.

A state argument is either a path to a JSON file, ``-`` for stdin, or the JSON
text itself (anything starting with ``{``).  Exit codes: 0 success,
1 classification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from .scalars import EXACT, FLOAT, ZeroPolicy, format_scalar, parse_scalar
from .state import StateError, parse_state, serialize

EXIT_OK, EXIT_CLASSIFY, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _read_state_text(arg: str) -> str:
    if arg == "-":
        return sys.stdin.read()
    if arg.lstrip().startswith("{"):
        return arg
    try:
        with open(arg) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {arg}: {exc.strerror}") from None


def _load(text: str, backend):
    try:
        s = parse_state(text)
    except StateError as exc:
        raise UsageError(f"malformed state: {exc}") from None
    if backend == FLOAT and s.backend != FLOAT:
        s = s.to_float()
    return s


def _states(args):
    """Yield (label, state) from --inline / positional / --batch, in input order."""
    if args.inline:
        yield "inline", _load(args.inline, args.backend)
    for src in getattr(args, "state", None) or []:
        yield src if not src.lstrip().startswith("{") else "inline", _load(_read_state_text(src), args.backend)
    if getattr(args, "batch", None):
        try:
            lines = open(args.batch).read().splitlines()
        except OSError as exc:
            raise UsageError(f"cannot read {args.batch}: {exc.strerror}") from None
        for n, line in enumerate(lines, 1):
            if line.strip() and not line.lstrip().startswith("#"):
                yield f"{args.batch}:{n}", _load(line, args.backend)


def _emit(args, payload: dict, pretty_text: str):
    if args.format == "pretty":
        print(pretty_text)
    else:
        print(json.dumps(payload, ensure_ascii=False))


# -- commands ----------------------------------------------------------------------
def cmd_classify(args) -> int:
    from .classifier import ClassificationError, verstraete_type
    code = EXIT_OK
    got_any = False
    for label, s in _states(args):
        got_any = True
        try:
            rep = verstraete_type(s, tol=args.tol)
        except ClassificationError as exc:
            code = EXIT_CLASSIFY
            _emit(args, {"input": label, "error": str(exc), "trace": list(exc.trace)},
                  f"{label}: error: {exc}\n" + "\n".join("  - " + t for t in exc.trace))
            continue
        d = rep.as_dict()
        d["input"] = label
        _emit(args, d, rep.pretty())
    if not got_any:
        raise UsageError("no input state given")
    return code


def cmd_invariants(args) -> int:
    from .invariants import invariant_vector
    from .quartics import build_quartics, quartic_report, root_profile
    got_any = False
    for label, s in _states(args):
        got_any = True
        iv = invariant_vector(s)
        pol = ZeroPolicy(args.tol if args.tol is not None else ZeroPolicy().tol, s.scale)
        quartics = []
        for k, q in enumerate(build_quartics(iv), 1):
            try:
                prof = root_profile(q, iv, k, pol)
            except ArithmeticError:
                prof = None
            quartics.append(quartic_report(q, prof))
        d = {"input": label, "invariants": iv.report(), "quartics": quartics}
        text = "\n".join([f"{k} = {v}" for k, v in iv.report().items()] +
                         [f"Q{k} = {q}" for k, q in enumerate(build_quartics(iv), 1)])
        _emit(args, d, text)
    if not got_any:
        raise UsageError("no input state given")
    return EXIT_OK


def cmd_strata(args) -> int:
    from .geometry import stratum_of
    got_any = False
    for label, s in _states(args):
        got_any = True
        rec = stratum_of(s, args.tol if args.tol is not None else ZeroPolicy().tol)
        d = rec.as_dict()
        d["input"] = label
        _emit(args, d, "\n".join(f"{k}: {v}" for k, v in rec.as_dict().items()))
    if not got_any:
        raise UsageError("no input state given")
    return EXIT_OK


def cmd_gen(args) -> int:
    from .normal_forms import family_id, gen_family, specialize
    try:
        fid = family_id(args.family)
        params = [parse_scalar(p) for p in args.params]
        s = specialize(fid, args.where, params) if args.where else gen_family(fid, params)
    except (ValueError, StateError) as exc:
        raise UsageError(str(exc)) from None
    if args.backend == FLOAT:
        s = s.to_float()
    print(serialize(s))
    return EXIT_OK


def cmd_equiv(args) -> int:
    from .classifier import ClassificationError, slocc_equivalent
    if len(args.states) != 2:
        raise UsageError("equiv needs exactly two states")
    s, t = (_load(_read_state_text(x), args.backend) for x in args.states)
    try:
        eq = slocc_equivalent(s, t, tol=args.tol)
    except ClassificationError as exc:
        _emit(args, {"error": str(exc), "trace": list(exc.trace)}, f"error: {exc}")
        return EXIT_CLASSIFY
    verdict = "undecided" if eq.equivalent is None else ("equivalent" if eq.equivalent else "not equivalent")
    _emit(args, eq.as_dict(), f"{verdict}: {eq.reason}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_all
    results = run_all(log=print if args.format == "pretty" else None)
    if args.format != "pretty":
        print(json.dumps([{"suite": r.name, "passed": r.passed, "failed": r.failed, "notes": r.notes}
                          for r in results]))
    return EXIT_OK if all(r.ok for r in results) else EXIT_CLASSIFY


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=(EXACT, FLOAT), default=None,
                        help="arithmetic backend (default: exact when the input parses exactly)")
    common.add_argument("--tol", type=float, default=None, help="zero tolerance for the float backend")
    common.add_argument("--format", choices=("json", "pretty"), default="json")
    common.add_argument("--pretty", dest="format", action="store_const", const="pretty",
                        help="shorthand for --format pretty")

    ap = argparse.ArgumentParser(prog="qslocc4", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (("classify", cmd_classify, "report the Verstraete type"),
                               ("invariants", cmd_invariants, "invariants and the three quartics"),
                               ("strata", cmd_strata, "stratum flags and multirank")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("state", nargs="*", help="JSON file, '-' for stdin, or JSON text")
        p.add_argument("--inline", help="state JSON given on the command line")
        p.add_argument("--batch", help="file with one state JSON per line")
        p.set_defaults(func=fn)

    p = sub.add_parser("gen", parents=[common], help="generate a normal form")
    p.add_argument("family")
    p.add_argument("params", nargs="*")
    p.add_argument("--where", help="linear constraints on the parameters, e.g. 'b=c, d=0'")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("equiv", parents=[common], help="SLOCC equivalence up to qubit relabeling")
    p.add_argument("states", nargs=2)
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("selftest", parents=[common], help="run the embedded oracle suite")
    p.set_defaults(func=cmd_selftest)
    return ap


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"qslocc4 {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # catalog or arithmetic failures surface as classification errors
        from .covariants import CatalogError
        if isinstance(exc, CatalogError):
            print(f"qslocc4: recipe catalog error: {exc}", file=sys.stderr)
            return EXIT_CLASSIFY
        raise


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
