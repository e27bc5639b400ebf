"""Command-line front end: ``unitary-forge {catalog,unitary,verify,reconstruct}``."""

from __future__ import annotations

import argparse
import json
import sys

from . import blackbox as bb
from . import formulas as fm
from .fingerprint import fingerprint
from .finite_field import FieldConfigError, make_field
from .group_algebra import CapacityError, GroupAlgebra
from .groups import CATALOG_FILTERS, CATALOG_ORDERS, catalog, parse_group
from .harness import SUITES, ConfigError, RunConfig, run_suite
from .unitary import unitary_subgroup

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def cmd_catalog(args) -> int:
    try:
        groups = catalog(args.order, args.filter)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = [
        {"name": g.name, "order": g.order, "family": g.family,
         "generators": [g.labels[i] for i in g.generators]}
        for g in groups
    ]
    if args.format == "json":
        print(json.dumps(rows, indent=2))
    else:
        for r in rows:
            print(f"{r['name']:<10} {r['order']:>4}  {r['family']:<14} gens={','.join(r['generators'])}")
        print(f"{len(rows)} groups")
    return EXIT_OK


def cmd_unitary(args) -> int:
    try:
        group = parse_group(args.group)
        field = make_field(args.p, args.m)
        alg = GroupAlgebra(field, group)
        if group.p != args.p:
            raise UsageError(f"{group.name} is not a {args.p}-group; the algebra would not be modular")
        view = unitary_subgroup(alg)
    except (ValueError, FieldConfigError) as exc:
        raise UsageError(str(exc)) from exc
    out = {"group": group.name, "p": args.p, "m": args.m, "order": view.order}
    abelian = bb.is_abelian(view)
    if abelian:
        vt = bb.abelian_type(view)
        out["abelian_type"] = str(vt)
        if args.invariants:
            out["invariants"] = fm.UnitaryInvariants(vt.order, vt.rank, args.p, args.m, vt).to_json()
    elif args.invariants:
        raise UsageError("--invariants needs an abelian unitary subgroup")
    out["fingerprint"] = fingerprint(view).to_json()
    if args.format == "json":
        print(json.dumps(out, indent=2))
    else:
        print(f"V_*(GF({field.q}){group.name}): order {view.order}")
        if abelian:
            print(f"  abelian type  {out['abelian_type']}")
            if args.invariants:
                print(f"  invariants    {json.dumps(out['invariants'])}")
        for k, v in out["fingerprint"].items():
            print(f"  {k:<14}{v}")
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        config = RunConfig.from_env(m=args.m, max_order=args.max_order, parallel=args.parallel,
                                   long=args.long, format=args.format)
    except (ConfigError, ValueError) as exc:
        raise UsageError(str(exc)) from exc
    suites = SUITES if args.suite == "all" else (args.suite,)
    reports = [run_suite(s, config) for s in suites]
    if args.format == "json":
        docs = [json.loads(r.to_json()) for r in reports]
        print(json.dumps(docs[0] if len(docs) == 1 else docs, indent=2))
    else:
        for r in reports:
            print(r.to_table())
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


def cmd_reconstruct(args) -> int:
    try:
        data = json.loads(args.invariants)
        data.setdefault("p", args.p)
        data.setdefault("m", args.m)
        inv = fm.UnitaryInvariants.from_json(data)
        if (inv.p, inv.m) != (args.p, args.m):
            raise UsageError("field in the invariants disagrees with --p/--m")
        result = fm.reconstruct(inv, args.p, args.m)
    except fm.UniquenessViolation as exc:
        print(f"uniqueness violated: {exc}; matches: {', '.join(map(str, exc.matches))}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"inconsistent input: {exc}") from exc
    if args.format == "json":
        print(json.dumps(result.to_json(), indent=2))
    else:
        print(f"recovered G = {result.base_type}  (|G| = {result.base_order})")
        for t, ci, ok in result.candidates:
            mark = "*" if ok else " "
            print(f" {mark} {str(t):<14} -> V_* = {ci.abelian_type}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="unitary-forge", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("catalog", help="list the groups of one order")
    c.add_argument("--order", type=int, required=True, help=f"one of {CATALOG_ORDERS}")
    c.add_argument("--filter", default="all", choices=CATALOG_FILTERS)
    c.add_argument("--format", default="table", choices=("table", "json"))
    c.set_defaults(func=cmd_catalog)

    u = sub.add_parser("unitary", help="compute V_*(FG) by enumeration")
    u.add_argument("--group", required=True, help="e.g. D16, C2xC4, Q8xC2")
    u.add_argument("--p", type=int, default=2)
    u.add_argument("--m", type=int, default=1)
    u.add_argument("--invariants", action="store_true", help="also print reconstruct-ready invariants")
    u.add_argument("--format", default="table", choices=("table", "json"))
    u.set_defaults(func=cmd_unitary)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--long", action="store_true", help="include the slow checks")
    v.add_argument("--parallel", type=int, default=None, help="worker threads (env UNITARY_FORGE_PARALLEL)")
    v.add_argument("--m", type=int, default=2, help="largest field degree scanned")
    v.add_argument("--max-order", type=int, default=32)
    v.add_argument("--format", default="table", choices=("table", "json"))
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("reconstruct", help="recover an abelian G from V_* invariants")
    r.add_argument("invariants", help='JSON, e.g. {"order": 8, "rank": 2, "abelian_type": {"p": 2, "f": [1, 1]}}')
    r.add_argument("--p", type=int, default=2)
    r.add_argument("--m", type=int, default=1)
    r.add_argument("--format", default="table", choices=("table", "json"))
    r.set_defaults(func=cmd_reconstruct)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the message
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
