"""Command-line front end (``sixterm-k``).

Exit status: 0 success, 1 verification failure, 2 input error, 3 contradiction.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .catalog import DescriptorError, build
from .fgab import ShapeError, WellDefinednessError
from .functors import mc_iter
from .invariant import TEMPLATE_IDS, compute_invariant, hom_lambda, invariant_to_json, verify_diagrams
from .sixterm import LABELS, describe_text, hom_six, rotate3, seq_to_json
from .solver import (
    DEFAULT_MAX_ORDER,
    ContradictionError,
    _slot,
    constraint_from_json,
    deduce,
    populate_h_maps,
    solve_H_layer,
    table_rows,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CONTRADICTION = 0, 1, 2, 3
H_DIAGRAMS = {"SEQ1", "SEQ2", "SEQ3", "TRI1", "TRI2", "TRI3", "D1", "D1*", "D2", "D2*", "D3", "D3*"}


class InputError(Exception):
    pass


def parse_moduli(text: str):
    """``"2,3,5-7"`` -> [2, 3, 5, 6, 7]."""
    out = set()
    for part in text.replace(" ", "").split(","):
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        try:
            rng = range(int(lo), int(hi) + 1) if sep else [int(lo)]
        except ValueError:
            raise InputError(f"bad moduli list {text!r}") from None
        out.update(rng)
    if not out or min(out) < 2:
        raise InputError(f"moduli must be integers >= 2, got {text!r}")
    return sorted(out)


def default_moduli():
    return parse_moduli(os.environ.get("SIXTERMK_MODULI", "2-12"))


def _table(rows):
    widths = [max(len(r[k]) for r in rows) for k in range(len(rows[0]))]
    return "\n".join("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows)


def _emit(args, text, doc):
    if args.format == "json":
        print(json.dumps(doc, indent=2, sort_keys=False))
    else:
        print(text)


def _seq(args, s):
    _emit(args, describe_text(s), seq_to_json(s))


# -- verbs ---------------------------------------------------------------


def cmd_describe(args):
    _seq(args, build(args.ext))
    return EXIT_OK


def cmd_mc(args):
    if args.times < 0:
        raise InputError("--times must be >= 0")
    _seq(args, mc_iter(build(args.ext), args.times))
    return EXIT_OK


def cmd_suspend(args):
    _seq(args, rotate3(build(args.ext)))
    return EXIT_OK


def _moduli(args):
    return parse_moduli(args.mods) if args.mods else default_moduli()


def _layers_text(inv, with_h=False, resolutions=None):
    blocks = [f"moduli: {','.join(str(n) for n in inv.moduli)} (finite truncation)"]
    for n in inv.moduli:
        lay = inv.layer(n)
        header = ["pos", "slot", "F1", f"F{n}"] + ([f"H{n}"] if with_h else [])
        rows = [header]
        for i in range(6):
            row = [f"p{i}", LABELS[i], str(inv.base.groups[i]), str(lay.F[i])]
            if with_h:
                row.append(str(resolutions[n][_slot(n, i)]) if resolutions else str(lay.H[i] or "?"))
            rows.append(row)
        note = "" if lay.exact else "  (coefficient row not exact)"
        blocks.append(f"n = {n}{note}\n" + _table(rows))
    return "\n\n".join(blocks)


def cmd_invariant(args):
    inv = compute_invariant(args.ext, _moduli(args))
    _emit(args, _layers_text(inv), invariant_to_json(inv))
    return EXIT_OK


def _trace_lines(res):
    out = []
    for step in res.trace:
        ins = ", ".join(f"{k}={v}" for k, v in step["inputs"].items())
        out.append(f"  {step['slot']}: {step['rule']} via {step['constraint']} ({ins}) -> {step['result']}")
    return out


def cmd_solve(args):
    if args.constraint:
        with _open(args.constraint) as fh:
            c = constraint_from_json(json.load(fh))
        res = deduce(c, args.max_order)
        text = "\n".join([f"{k}: {v.status} {v}" for k, v in res.slots.items()] + ["trace:"] + _trace_lines(res))
        _emit(args, text, res.to_json())
        return EXIT_OK
    if not args.ext:
        raise InputError("solve needs an extension descriptor or --constraint FILE")
    inv = compute_invariant(args.ext, _moduli(args))
    inv, res = solve_H_layer(inv, args.max_order)
    blocks = [_layers_text(inv, with_h=True, resolutions=res)]
    for n in inv.moduli:
        blocks.append(f"provenance n = {n}:\n" + "\n".join(_trace_lines(res[n])))
    doc = {"invariant": invariant_to_json(inv), "resolutions": {str(n): r.to_json() for n, r in res.items()}}
    _emit(args, "\n\n".join(blocks), doc)
    return EXIT_OK


class _open:
    def __init__(self, path):
        self.path = path

    def __enter__(self):
        if self.path == "-":
            return sys.stdin
        self.fh = open(self.path, encoding="utf-8")
        return self.fh

    def __exit__(self, *exc):
        if self.path != "-":
            self.fh.close()


def _diagram_list(text):
    if not text:
        return list(TEMPLATE_IDS)
    out = []
    for name in text.split(","):
        key = name.strip().upper()
        if key not in TEMPLATE_IDS:
            raise InputError(f"unknown diagram {name!r}; known: {', '.join(TEMPLATE_IDS)}")
        out.append(key)
    return out


def cmd_verify(args):
    which = _diagram_list(args.diagrams)
    inv = compute_invariant(args.ext, _moduli(args))
    missing = []
    if H_DIAGRAMS & set(which):
        inv, _ = solve_H_layer(inv, args.max_order)
        inv, missing = populate_h_maps(inv, args.bound)
    report = verify_diagrams(inv, which)
    rows = [("diagram", "i", "n", "cell", "kind", "verdict", "detail")]
    for r in report.results:
        rows.append((r.template, str(r.index), str(r.n), r.label, r.kind, r.verdict, r.detail))
    summary = [f"{k}: {v}" for k, v in report.status().items()]
    if missing:
        summary.append("no h-map witness for (n, i): " + ", ".join(f"({n},{i})" for n, i in missing))
    text = _table(rows) + "\n\n" + "\n".join(summary)
    doc = {
        "moduli": list(inv.moduli),
        "cells": [r.__dict__ for r in report.results],
        "status": report.status(),
        "missing_witnesses": [list(x) for x in missing],
    }
    _emit(args, text, doc)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_hom_six(args):
    s, t = build(args.source), build(args.target)
    g, basis = hom_six(s, t)
    lines = [f"Hom_six = {g}"]
    for k, b in enumerate(basis):
        lines.append(f"generator {k}: " + "  ".join(f"[{'; '.join(' '.join(map(str, r)) for r in a.matrix)}]" if a.matrix.rows and a.matrix.cols else "0" for a in b.components))
    doc = {"group": str(g), "basis": [[a.matrix.tolist() for a in b.components] for b in basis]}
    _emit(args, "\n".join(lines), doc)
    return EXIT_OK


def cmd_hom(args):
    mods = _moduli(args)
    invs = []
    for d in (args.source, args.target):
        inv = compute_invariant(d, mods)
        inv, _ = solve_H_layer(inv, args.max_order)
        inv, missing = populate_h_maps(inv, args.bound)
        if missing:
            print(f"{d}: incomplete invariant, no h-map witness for {missing}", file=sys.stderr)
            return EXIT_FAIL
        invs.append(inv)
    g, basis = hom_lambda(*invs)
    _emit(args, f"moduli: {','.join(map(str, mods))}\nHom_Lambda = {g}", {"moduli": mods, "group": str(g), "generators": len(basis)})
    return EXIT_OK


def cmd_table(args):
    if args.n < 2 or args.k < 2:
        raise InputError("--n and --k must be >= 2")
    labels, cols = table_rows(args.n, args.k, args.max_order)
    heads = [f"e_{args.n}^{j}" for j in range(6)]
    rows = [[""] + heads] + [[lab] + [c[r] for c in cols] for r, lab in enumerate(labels)]
    doc = {"n": args.n, "k": args.k, "columns": heads, "rows": {lab: [c[r] for c in cols] for r, lab in enumerate(labels)}}
    _emit(args, _table(rows), doc)
    return EXIT_OK


# -- parser --------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="sixterm-k", description="Exact computations with six-term K-data.")
    sub = p.add_subparsers(dest="verb", required=True)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.set_defaults(fn=fn)
        return sp

    def mods(sp):
        sp.add_argument("--mods", help="moduli, e.g. 2,3,5-7 (default: $SIXTERMK_MODULI or 2-12)")

    def search(sp):
        sp.add_argument("--bound", type=int, default=None, help="coefficient bound for the h-map search")
        sp.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, dest="max_order")

    sp = add("describe", cmd_describe, "print K-data of an extension")
    sp.add_argument("ext")
    sp = add("mc", cmd_mc, "iterate the mapping cone")
    sp.add_argument("ext")
    sp.add_argument("--times", type=int, default=1)
    sp = add("suspend", cmd_suspend, "suspension (degree shift)")
    sp.add_argument("ext")
    sp = add("invariant", cmd_invariant, "coefficient layers")
    sp.add_argument("ext")
    mods(sp)
    sp = add("solve", cmd_solve, "deduce H layers, or a constraint file")
    sp.add_argument("ext", nargs="?")
    sp.add_argument("--constraint", help="constraint JSON file ('-' for stdin)")
    mods(sp)
    search(sp)
    sp = add("verify", cmd_verify, "verify diagram templates")
    sp.add_argument("ext")
    sp.add_argument("--diagrams", help=f"comma list of {','.join(TEMPLATE_IDS)} (default: all)")
    mods(sp)
    search(sp)
    sp = add("hom-six", cmd_hom_six, "group of six-term chain maps")
    sp.add_argument("source")
    sp.add_argument("target")
    sp = add("hom", cmd_hom, "homomorphisms of full invariants")
    sp.add_argument("source")
    sp.add_argument("target")
    mods(sp)
    search(sp)
    sp = add("table", cmd_table, "H/F table for the extensions e_n^0..5 with modulus k")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--max-order", type=int, default=DEFAULT_MAX_ORDER, dest="max_order")
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.fn(args)
    except ContradictionError as exc:
        print(f"contradiction: {exc}", file=sys.stderr)
        return EXIT_CONTRADICTION
    except (InputError, DescriptorError, ShapeError, WellDefinednessError, OSError, json.JSONDecodeError,
            KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
