"""Command-line entry point.

Subcommands
-----------
L           print the matrix polynomial/series L(z) for a partition
check       run one verification (yangian, membership, main-lemma,
            capelli, identities, premet) and report pass/fail
generators  print a closed generator family for a partition
relations   verify the commutator table of a generator family
conjecture  rebuild L(z) from a generator table (a named family or a
            candidates file) and compare with the direct construction

Exit codes: 0 all requested checks passed, 1 a check failed, 2 bad usage.
Output is deterministic for a fixed invocation; JSON keys are sorted.
"""

from __future__ import annotations

import argparse
import json
import sys

from .pyramid import HalfInt, Partition
from .uea import Algebra, element_from_json
from .walgebra import (
    LOperator,
    WGenerators,
    build_L,
    capelli_suite,
    conjecture_check,
    family_generators,
    main_lemma_check,
    premet_check,
    relation_table_check,
    rho_det_identities,
    w_membership_check,
    yangian_check_L,
    _generating_family,
)

_FAMILIES = ("principal", "rectangular", "minimal")


def _parse_partition(text: str) -> Partition:
    return Partition.parse(text)


def _parse_floor(text):
    if text is None:
        return None
    return HalfInt.parse(text)


def _emit(obj, fmt: str, to_text) -> None:
    if fmt == "json":
        print(json.dumps(obj, indent=2, sort_keys=True, default=str))
    else:
        print(to_text())


def _render_report(rep: dict) -> str:
    lines = [f"check: {rep['check']}"]
    for key in ("partition", "family", "n", "floor"):
        if rep.get(key) is not None:
            lines.append(f"{key}: {rep[key]}")
    lines.append(f"pass: {'yes' if rep['pass'] else 'no'}")
    for key, val in sorted(rep.items()):
        if key in ("check", "partition", "family", "n", "floor", "pass",
                   "witnesses", "coefficients"):
            continue
        lines.append(f"{key}: {val}")
    for c in rep.get("coefficients", ()):
        tag = "central" if c["central"] else "NOT central"
        lines.append(f"coefficient w_{c['k']} ({tag}): {c['text']}")
    for w in rep["witnesses"]:
        lines.append("witness: " + json.dumps(w, sort_keys=True, default=str))
    return "\n".join(lines)


def _finish(rep: dict, fmt: str) -> int:
    _emit(rep, fmt, lambda: _render_report(rep))
    return 0 if rep["pass"] else 1


def _failed_report(check: str, args, exc: ArithmeticError) -> dict:
    rep = {
        "check": check,
        "partition": getattr(args, "partition", None),
        "floor": getattr(args, "floor", None),
        "pass": False,
        "witnesses": [{"error": str(exc)}],
    }
    return rep


def _generators_for(args) -> WGenerators:
    p = _parse_partition(args.partition)
    family = getattr(args, "family", None)
    if family is None:
        family = _generating_family(p)
        if family is None:
            raise ValueError(f"no built-in generator family covers {p}")
    return family_generators(p, family)


def _load_candidates(path: str) -> WGenerators:
    with open(path, "r", encoding="utf-8") as fh:
        obj = json.load(fh)
    p = Partition.parse(obj["partition"]) if isinstance(obj["partition"], str) \
        else Partition(tuple(obj["partition"]))
    alg = Algebra(p)
    table = {}
    for entry in obj["generators"]:
        if "key" in entry:
            i, j, k = entry["key"]
        else:
            i, j, k = entry["i"], entry["j"], entry["k"]
        table[(i, j, k)] = element_from_json(alg, entry["element"])
    family = obj.get("family", "candidates")
    return WGenerators(family=family, partition=p, table=table, lifts={})


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_L(args) -> int:
    p = _parse_partition(args.partition)
    L = build_L(p, _parse_floor(args.floor))
    _emit(L.to_json_obj(), args.format, L.to_text)
    return 0


def _cmd_check(args) -> int:
    which = args.what
    if which in ("capelli", "identities"):
        if args.n is None:
            raise ValueError(f"check {which} requires --n")
        rep = capelli_suite(args.n) if which == "capelli" \
            else rho_det_identities(args.n)
        if args.seed is not None:
            rep["seed"] = args.seed
        return _finish(rep, args.format)

    if args.partition is None:
        raise ValueError(f"check {which} requires --partition")
    p = _parse_partition(args.partition)
    floor = _parse_floor(args.floor)

    try:
        if which == "main-lemma":
            rep = main_lemma_check(p, floor)
        elif which == "membership":
            rep = w_membership_check(build_L(p, floor))
        elif which == "yangian":
            rep = yangian_check_L(build_L(p, floor))
        elif which == "premet":
            rep = premet_check(_generators_for(args))
        else:  # pragma: no cover - argparse restricts choices
            raise ValueError(f"unknown check {which!r}")
    except ArithmeticError as exc:
        return _finish(_failed_report(which, args, exc), args.format)
    if args.seed is not None:
        rep["seed"] = args.seed
    return _finish(rep, args.format)


def _cmd_generators(args) -> int:
    g = _generators_for(args)
    _emit(g.to_json_obj(), args.format, g.to_text)
    return 0


def _cmd_relations(args) -> int:
    try:
        rep = relation_table_check(_generators_for(args))
    except ArithmeticError as exc:
        return _finish(_failed_report("relations", args, exc), args.format)
    return _finish(rep, args.format)


def _cmd_conjecture(args) -> int:
    p = _parse_partition(args.partition)
    if args.candidates is not None:
        g = _load_candidates(args.candidates)
        if g.partition != p:
            raise ValueError(
                f"candidates file is for {g.partition}, not {p}")
    else:
        g = _generators_for(args)
    try:
        rep = conjecture_check(p, g, _parse_floor(args.floor))
    except ArithmeticError as exc:
        return _finish(_failed_report("conjecture", args, exc), args.format)
    return _finish(rep, args.format)


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(sp, partition=True, floor=True):
    if partition:
        sp.add_argument("--partition", help="comma-separated parts, e.g. 2,1")
    if floor:
        sp.add_argument("--floor",
                        help="lowest kept power of z (integer or n/2)")
    sp.add_argument("--format", choices=("json", "text"), default="text")
    sp.add_argument("--seed", type=int, default=None,
                    help="echoed into the report; no command here is randomized")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="wgl",
        description="Exact computations with truncation-invariant matrix "
                    "series over quotients of U(gl_N).")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("L", help="print L(z) for a partition")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_L)

    sp = sub.add_parser("check", help="run one verification")
    sp.add_argument("what", choices=("yangian", "membership", "main-lemma",
                                     "capelli", "identities", "premet"))
    _add_common(sp)
    sp.add_argument("--n", type=int, default=None,
                    help="matrix size for capelli/identities")
    sp.add_argument("--family", choices=_FAMILIES, default=None,
                    help="generator family for premet (default: inferred)")
    sp.set_defaults(fn=_cmd_check)

    sp = sub.add_parser("generators", help="print a closed generator family")
    _add_common(sp, floor=False)
    sp.add_argument("--family", choices=_FAMILIES, default=None,
                    help="family name (default: inferred from the partition)")
    sp.set_defaults(fn=_cmd_generators)

    sp = sub.add_parser("relations", help="verify a family's commutator table")
    _add_common(sp, floor=False)
    sp.add_argument("--family", choices=_FAMILIES, default=None)
    sp.set_defaults(fn=_cmd_relations)

    sp = sub.add_parser("conjecture",
                        help="rebuild L(z) from a generator table")
    _add_common(sp)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--candidates",
                       help="JSON file with a generator table")
    group.add_argument("--family", choices=_FAMILIES, default=None)
    sp.set_defaults(fn=_cmd_conjecture)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
