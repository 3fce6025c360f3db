"""Command-line entry point.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import bridge, mould as md, relations as rel
from .derivations import Derivation
from .expr import ParseError, parse_derivation
from .ncalg import NcPoly, NotInCSpan
from .suites import SUITES, run_suite

OK, CHECK_FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _emit(obj, path: str | None, out) -> None:
    text = dump(obj)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=out)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def _load_mould(path: str) -> md.Mould:
    try:
        return md.Mould.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed mould JSON in {path}: {exc}") from exc


def _load_poly(text: str | None, path: str | None) -> NcPoly:
    try:
        if path:
            return NcPoly.from_json(_load_json(path))
        return NcPoly.parse(text)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"cannot read polynomial: {exc}") from exc


def _parse_sweep(text: str) -> range:
    try:
        lo, hi = text.split("..")
        return range(int(lo), int(hi) + 1)
    except ValueError as exc:
        raise UsageError(f"--sweep expects A..B, got {text!r}") from exc


# commands ------------------------------------------------------------------------

def cmd_verify(args, out) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join([*SUITES, 'all'])}")
    res = run_suite(args.suite)
    if args.json:
        _emit(res.to_json(), args.json, out)
    print("\n".join(res.lines(timings=not args.no_timings)), file=out)
    return OK if res.ok else CHECK_FAILED


def _derivation_json(d: Derivation) -> dict:
    return d.to_json()


def cmd_eval(args, out) -> int:
    try:
        d = parse_derivation(args.expr)
    except ParseError as exc:
        raise UsageError(f"parse error: {exc}") from exc
    if args.output == "a-image":
        print(d.val_a, file=out)
    elif args.output == "json":
        _emit(_derivation_json(d), args.json, out)
    else:
        try:
            m = bridge.psi(d)
        except bridge.NotDerZero as exc:
            raise UsageError(f"not in Der^0: {exc}") from exc
        if args.json:
            _emit(m.to_json(), args.json, out)
        print(md.render(m), file=out)
    return OK


def cmd_mould(args, out) -> int:
    ms = [_load_mould(p) for p in args.files]
    need = {"ari": 2, "swap": 1, "push": 1, "alternal": 1, "singular": 1, "bialternal": 1}[args.op]
    if len(ms) != need:
        raise UsageError(f"mould {args.op} takes {need} file(s)")
    try:
        if args.op == "ari":
            result = md.mould_ari(*ms).to_json()
        elif args.op == "swap":
            result = md.mould_swap(ms[0]).to_json()
        elif args.op == "push":
            result = md.mould_push(ms[0]).to_json()
        elif args.op == "alternal":
            result = {"alternal": md.is_alternal(ms[0])}
        elif args.op == "bialternal":
            result = {"bialternal": md.is_bialternal(ms[0])}
        else:
            result = md.singularity_report(ms[0]).to_json()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(result, args.json, out)
    return OK


def _relation_cell(n: int, d: int, lift: bool) -> tuple[dict, bool]:
    cert = rel.relation_kernel(n, d)
    ok = cert.verify() and all(cert.highest_weight)
    if lift and d == 3 and cert.kernel:
        try:
            rel.lift_relation(cert)
        except rel.NoLift:
            ok = False
    return cert.to_json(), ok


def cmd_relations(args, out) -> int:
    if (args.weight is None) == (args.sweep is None):
        raise UsageError("give exactly one of --weight or --sweep")
    if args.depth not in (2, 3):
        raise UsageError("--depth must be 2 or 3")
    weights = [args.weight] if args.weight is not None else list(_parse_sweep(args.sweep))
    cells, ok = [], True
    for n in weights:
        if not rel.h_labels(n):
            if args.weight is not None:
                raise UsageError(f"no h^{args.depth}_(p,q) at weight {n}")
            continue
        cell, good = _relation_cell(n, args.depth, args.lift)
        cells.append(cell)
        ok = ok and good
    for c in cells:
        kern = "; ".join("(" + ", ".join(v) + ")" for v in c["kernel"]) or "empty"
        labels = ", ".join(f"h({p},{q})" for p, q in c["labels"])
        line = f"weight {c['weight']} depth {c['depth']}: basis {labels}; kernel {kern}"
        if "lift" in c:
            terms = " + ".join(f"{t['coeff']}*[eps({t['triple'][0]}),[eps({t['triple'][1]}),eps({t['triple'][2]})]]"
                               for t in c["lift"]) or "0"
            line += f"; lift {terms}"
        print(line, file=out)
    if args.json:
        _emit(cells[0] if args.weight is not None else cells, args.json, out)
    return OK if ok else CHECK_FAILED


def cmd_map(args, out) -> int:
    if args.verb == "psi":
        try:
            d = parse_derivation(args.input)
            m = bridge.psi(d)
        except (ParseError, bridge.NotDerZero) as exc:
            raise UsageError(str(exc)) from exc
    else:
        p = _load_poly(args.input, args.file)
        fn = {"ma": bridge.ma, "da": bridge.da, "Da": bridge.Da}[args.verb]
        try:
            m = fn(p)
        except NotInCSpan as exc:
            raise UsageError(f"not in the C-span: {exc}") from exc
    if args.json:
        _emit(m.to_json(), args.json, out)
    print(md.render(m), file=out)
    return OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ellmould", description="Elliptic derivations, moulds and their relations.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("--suite", required=True, help=f"one of {', '.join([*SUITES, 'all'])}")
    v.add_argument("--json", metavar="PATH")
    v.add_argument("--no-timings", action="store_true", help="omit timings for byte-stable output")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("eval", help="evaluate a bracket expression in eps(2i), phi0, h(p,q,d)")
    e.add_argument("expr")
    e.add_argument("--as", dest="output", choices=["a-image", "mould", "json"], default="a-image")
    e.add_argument("--json", metavar="PATH")
    e.set_defaults(func=cmd_eval)

    m = sub.add_parser("mould", help="mould operations on JSON files")
    m.add_argument("op", choices=["ari", "swap", "push", "alternal", "bialternal", "singular"])
    m.add_argument("files", nargs="+")
    m.add_argument("--json", metavar="PATH")
    m.set_defaults(func=cmd_mould)

    r = sub.add_parser("relations", help="relation kernels among h^d_(p,q)")
    r.add_argument("--weight", type=int)
    r.add_argument("--sweep", metavar="A..B")
    r.add_argument("--depth", type=int, required=True)
    r.add_argument("--lift", action="store_true")
    r.add_argument("--json", metavar="PATH")
    r.set_defaults(func=cmd_relations)

    for verb in ("ma", "da", "Da"):
        p = sub.add_parser(verb, help=f"{verb} of a polynomial in a, b")
        p.add_argument("input", nargs="?", help='polynomial text such as "aab - 2*aba + baa"')
        p.add_argument("--file", help="polynomial JSON file instead of text")
        p.add_argument("--json", metavar="PATH")
        p.set_defaults(func=cmd_map, verb=verb)
    p = sub.add_parser("psi", help="mould of a derivation given as a bracket expression")
    p.add_argument("input")
    p.add_argument("--json", metavar="PATH")
    p.set_defaults(func=cmd_map, verb="psi", file=None)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else USAGE
    if getattr(args, "verb", None) in ("ma", "da", "Da") and not args.input and not args.file:
        print("error: give polynomial text or --file", file=sys.stderr)
        return USAGE
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
