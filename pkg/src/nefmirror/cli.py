"""Command-line interface.

Subcommands: dualize, invariants, gkz, tautgen, catalog.  --input accepts
either a path to a nef-partition JSON file or the name of a built-in
catalog entry.  Every command is deterministic; identical inputs yield
byte-identical outputs.

Exit codes: 0 success, 2 input validation, 3 smoothness/assumption
failure, 4 golden mismatch, 1 internal error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from .catalog import (
    catalog_run,
    check_gkz_golden,
    check_taut_golden,
    find_entry,
    load_catalog,
)
from .errors import (
    ConsistencyError,
    DomainError,
    GoldenMismatchError,
    InputError,
    SmoothnessError,
)
from .invariants import double_cover_invariants, verify_mirror_duality
from .nefpart import dualize, nef_partition_from_json
from .periods import (
    gkz_data,
    gkz_matrix_text,
    gkz_to_json,
    serialize_operators,
    taut_system,
)
from .toric import fan_to_json

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_INPUT = 2
EXIT_SMOOTHNESS = 3
EXIT_GOLDEN = 4


def _resolve_nef_partition(spec):
    """A path to a nef-partition JSON file, or a catalog entry name."""
    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as handle:
            return nef_partition_from_json(handle.read()), None
    entry = find_entry(spec)
    return entry.build(), entry


def _emit(text, output):
    if not text.endswith("\n"):
        text += "\n"
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _dumps(doc):
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_dualize(args):
    np_, _entry = _resolve_nef_partition(args.input)
    dual = dualize(np_)
    doc = {
        "nabla_vertices": [list(v) for v in dual.nabla.vertices],
        "parts": [list(p) for p in dual.nef_partition.parts],
        "nabla_polar_vertices": [list(v) for v in dual.nabla_polar.vertices],
        "nabla_part_vertices": [[list(v) for v in poly.vertices]
                                for poly in dual.nabla_parts],
        "fan": json.loads(fan_to_json(dual.nef_partition.fan)),
    }
    _emit(_dumps(doc), args.output)
    return EXIT_OK


def _invariants_doc(np_):
    inv = double_cover_invariants(np_)
    ok, report = verify_mirror_duality(np_)
    hodge = {f"{p},{q}": value for (p, q), value in inv.hodge_offdiag}
    doc = {
        "n": inv.n,
        "chi_X": inv.chi_X,
        "chi_Xdual": inv.chi_Xdual,
        "chi_Y": inv.chi_Y,
        "chi_Ydual": inv.chi_Ydual,
        "duality_ok": bool(ok and inv.duality_ok),
        "hodge": hodge,
        "dk_terms": report["dk_terms"],
    }
    if inv.n == 3:
        doc["h11_Y"] = inv.h11_Y
        doc["h21_Y"] = inv.h21_Y
    return doc


def _invariants_markdown(doc):
    lines = [
        "# Double-cover invariants",
        "",
        f"- dimension n = {doc['n']}",
        f"- chi(X) = {doc['chi_X']}, chi(X_dual) = {doc['chi_Xdual']}",
        f"- chi(Y) = {doc['chi_Y']}, chi(Y_dual) = {doc['chi_Ydual']}",
        f"- duality chi(Y) = (-1)^n chi(Y_dual): "
        f"{'ok' if doc['duality_ok'] else 'FAILED'}",
    ]
    if "h11_Y" in doc:
        lines.append(f"- h^(1,1)(Y) = {doc['h11_Y']}, h^(2,1)(Y) = {doc['h21_Y']}")
    lines.extend(["", "## Off-middle Hodge numbers h^(p,q)(Y) = h^(p,q)(X)", ""])
    lines.append("| (p,q) | value |")
    lines.append("|-------|-------|")
    for key in sorted(doc["hodge"]):
        lines.append(f"| ({key}) | {doc['hodge'][key]} |")
    lines.extend(["", "## Danilov-Khovanskii pyramid volumes", ""])
    lines.append("| J | vol_{n+|J|}(Lambda_J) |")
    lines.append("|---|------|")
    for term in doc["dk_terms"]:
        lines.append(f"| {term['J']} | {term['volume']} |")
    return "\n".join(lines) + "\n"


def cmd_invariants(args):
    np_, _entry = _resolve_nef_partition(args.input)
    doc = _invariants_doc(np_)
    if args.format == "md":
        _emit(_invariants_markdown(doc), args.output)
    else:
        _emit(_dumps(doc), args.output)
    return EXIT_OK


def cmd_gkz(args):
    np_, entry = _resolve_nef_partition(args.input)
    if args.check:
        if entry is None or args.side not in entry.expected.get("gkz", {}):
            raise InputError(
                f"no stored golden GKZ matrix for side {args.side!r} here")
        data = check_gkz_golden(np_, args.side, entry.expected["gkz"][args.side])
    else:
        data = gkz_data(np_, side=args.side)
    if args.format == "md":
        text = "```\n" + gkz_matrix_text(data) + "\n```\n" + \
            "beta = (" + ", ".join(str(b) for b in data.beta) + ")\n"
        _emit(text, args.output)
    else:
        _emit(gkz_to_json(data) + "\n", args.output)
    return EXIT_OK


def cmd_tautgen(args):
    degrees = [int(x) for x in args.degrees.split(",") if x.strip()]
    if args.check:
        catalog = load_catalog()
        golden = catalog.get("taut_golden") or {}
        if golden.get("degrees") != degrees or golden.get("dim") != args.dim:
            raise InputError("no stored golden operator list for these degrees")
        operators = check_taut_golden(degrees, args.dim)
    else:
        operators = taut_system(degrees, args.dim)
    _emit(serialize_operators(operators) + "\n", args.output)
    return EXIT_OK


def cmd_catalog(args):
    ok, summary = catalog_run()
    lines = []
    if not summary:
        lines.append("warning: catalog is empty")
    for name, failures in summary:
        if failures:
            lines.append(f"FAIL {name}")
            lines.extend(f"    {msg}" for msg in failures)
        else:
            lines.append(f"PASS {name}")
    lines.append(f"{'all checks passed' if ok else 'FAILURES present'} "
                 f"({len(summary)} targets)")
    _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK if ok else EXIT_GOLDEN


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="nefmirror",
        description="Batyrev-Borisov dual nef-partitions, double-cover "
                    "invariants, and GKZ/tautological systems")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dualize", help="compute the dual nef-partition")
    p.add_argument("--input", required=True,
                   help="nef-partition JSON file or catalog entry name")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_dualize)

    p = sub.add_parser("invariants", help="Euler characteristics and Hodge data")
    p.add_argument("--input", required=True)
    p.add_argument("--output", default=None)
    p.add_argument("--format", choices=("json", "md"), default="json")
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("gkz", help="GKZ A-hypergeometric data")
    p.add_argument("--input", required=True)
    p.add_argument("--side", choices=("primal", "dual"), default="primal")
    p.add_argument("--check", action="store_true",
                   help="compare against the stored golden matrix")
    p.add_argument("--output", default=None)
    p.add_argument("--format", choices=("json", "md"), default="json")
    p.set_defaults(func=cmd_gkz)

    p = sub.add_parser("tautgen", help="tautological PDE system")
    p.add_argument("--degrees", required=True,
                   help="comma-separated bundle degrees, e.g. 1,1,1,1,2")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--check", action="store_true",
                   help="compare against the stored operator list")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_tautgen)

    p = sub.add_parser("catalog", help="run all catalog checks")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_catalog)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DomainError) as exc:
        print(json.dumps({"error": "input", "message": str(exc)}),
              file=sys.stderr)
        return EXIT_INPUT
    except SmoothnessError as exc:
        print(json.dumps({"error": "smoothness", "message": str(exc)}),
              file=sys.stderr)
        return EXIT_SMOOTHNESS
    except GoldenMismatchError as exc:
        print(json.dumps({"error": "golden-mismatch", "message": str(exc)}),
              file=sys.stderr)
        return EXIT_GOLDEN
    except (ConsistencyError, Exception) as exc:  # noqa: B014 - catch-all maps to exit 1
        print(json.dumps({"error": "internal", "message": str(exc)}),
              file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
