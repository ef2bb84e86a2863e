"""Command-line front end: ``cglkit <command> --catalog NAME | --input PATH``.

Exit codes
    0  every check in the requested report passed
    1  a mathematical identity check failed
    2  usage error (bad flags, unknown catalog name)
    3  the presentation document could not be parsed
    4  the presentation failed validation
    5  a Gröbner completion or nilpotency search hit its cap
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from ._parse import ParseError
from .catalog import BUILTIN_NAMES, FormatError, builtin, is_builtin, load
from .dda import build_tower, generator_image, matchloc_check
from .gbasis import GBCapError
from .hspec import (
    CSV_COLUMNS,
    admissible,
    blackbox_chain,
    diagram_parse,
    diagram_render,
    enumerate_hspec,
    jw_generators,
    poset,
    poset_dot,
    records_csv,
    stratum_report,
    tauvel_report,
)
from .pbw import validate_cgl

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_USAGE = 2
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_CAP = 5

COMMANDS = ("validate", "dda", "hspec", "chain", "tauvel", "center")

# where each reported number comes from
PROVENANCE = {
    "black": "count of black boxes in the diagram",
    "white": "count of white boxes in the diagram",
    "height": "asserted: equals #black for invariant primes of CGL algebras; certified from below by chain_length",
    "gk": "asserted: GK dimension of R/J_w equals #white",
    "chain_length": "certified: strict inclusions found by removing the largest black box repeatedly",
    "stratum_dim": "computed: rank of the integer kernel of the white-index exponent matrix",
    "primitive_gk": "derived: #white - stratum_dim",
    "primitive_height": "derived: #black + stratum_dim",
    "admissible": "computed: diagram lifts through every step of the tower",
    "saturation_flag": "true when a saturation certificate ran out of budget",
}


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cglkit", description="Deleting derivations and H-prime spectra of CGL algebras.")
    p.add_argument("--version", action="version", version=f"cglkit {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    helps = {
        "validate": "check the defining data of a presentation",
        "dda": "build the deleting-derivations tower and verify each level",
        "hspec": "enumerate diagrams and their invariant primes",
        "chain": "descend from one diagram by removing black boxes",
        "tauvel": "height plus GK dimension report",
        "center": "center lattice of the torus attached to a diagram",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--catalog", metavar="NAME", help=f"built-in algebra ({', '.join(BUILTIN_NAMES)})")
        src.add_argument("--input", metavar="PATH", help="presentation document")
        sp.add_argument("--diagram", metavar="BW", help="diagram string such as BBWWB")
        formats = {"hspec": ["text", "csv", "json", "dot"], "tauvel": ["text", "csv", "json"]}
        sp.add_argument("--format", choices=formats.get(name, ["text", "json"]), default="text")
        sp.add_argument("--nilpotency-cap", type=_positive, default=64, metavar="N")
        sp.add_argument("--pair-cap", type=_positive, default=10000, metavar="N")
        sp.add_argument("--jobs", type=_positive, default=1, metavar="N")
        sp.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    return p


def _load(args):
    if args.catalog is not None:
        if not is_builtin(args.catalog):
            raise CliError(f"unknown catalog name {args.catalog!r}; known: {', '.join(BUILTIN_NAMES)}", EXIT_USAGE)
        return builtin(args.catalog)
    try:
        return load(args.input)
    except (ParseError, FormatError) as exc:
        raise CliError(f"{args.input}: {exc}", EXIT_PARSE) from None
    except OSError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def _tower(P, args):
    rep = validate_cgl(P, args.nilpotency_cap)
    if not rep.ok:
        raise CliError("presentation failed validation:\n" + str(rep), EXIT_VALIDATION)
    return build_tower(P, args.nilpotency_cap, validate=True)


def _meta(args, P, command, columns=()):
    return {
        "tool": f"cglkit {__version__}",
        "command": command,
        "input": args.catalog if args.catalog is not None else Path(args.input).name,
        "algebra": P.name,
        "n": P.n,
        "pair_cap": args.pair_cap,
        "nilpotency_cap": args.nilpotency_cap,
        "columns": {c: PROVENANCE[c] for c in columns if c in PROVENANCE},
    }


def _comment_header(meta: dict, prefix: str = "# ") -> str:
    lines = [f"{prefix}{k}: {v}" for k, v in meta.items() if k != "columns"]
    for c, src in meta.get("columns", {}).items():
        lines.append(f"{prefix}column {c}: {src}")
    return "\n".join(lines) + "\n"


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _diagram(args, n):
    if args.diagram is None:
        return None
    try:
        w = diagram_parse(args.diagram)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None
    if w.n != n:
        raise CliError(f"diagram has {w.n} boxes but the algebra has {n} generators", EXIT_USAGE)
    return w


def _cap_check(records):
    for r in records:
        if r.error and r.error.startswith("GBCapError"):
            raise CliError(f"diagram {r.diagram}: {r.error}", EXIT_CAP)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_validate(args, P):
    rep = validate_cgl(P, args.nilpotency_cap)
    meta = _meta(args, P, "validate")
    if args.format == "json":
        text = _dump_json({"meta": meta, "valid": rep.ok, **rep.as_dict()})
    else:
        text = _comment_header(meta) + str(rep) + "\n"
    return text, EXIT_OK if rep.ok else EXIT_VALIDATION


def cmd_dda(args, P):
    T = _tower(P, args)
    n = P.n
    levels = []
    ok = True
    for j in range(n, 1, -1):
        upper, lower = T.level(j + 1), T.level(j)
        removed = sorted(k for k in upper.delta if k not in lower.delta)
        images = {f"T{i}": str(generator_image(T, j, i)) for i in range(1, n + 1)}
        rep = matchloc_check(T, j)
        ok &= rep.ok
        levels.append({
            "step": j,
            "deleted": [f"delta.{a}.{b} = {upper.delta[(a, b)]}" for a, b in removed],
            "images": images,
            "matchloc": [{"relation": c.name, "passed": c.passed, "detail": c.detail} for c in rep.checks],
            "matchloc_ok": rep.ok,
        })
    meta = _meta(args, P, "dda")
    if args.format == "json":
        return _dump_json({"meta": meta, "levels": levels, "ok": ok}), EXIT_OK if ok else EXIT_IDENTITY
    out = [_comment_header(meta).rstrip("\n")]
    for lv in levels:
        out.append(f"== step {lv['step']}: level {lv['step'] + 1} -> level {lv['step']}")
        out.append("deleted: " + (", ".join(lv["deleted"]) or "nothing"))
        for k, v in lv["images"].items():
            out.append(f"  {k} -> {v}")
        for c in lv["matchloc"]:
            out.append(f"  [{'ok' if c['passed'] else 'FAIL'}] {c['relation']}{'  ' + c['detail'] if c['detail'] else ''}")
    out.append("matchloc: " + ("all relations hold" if ok else "FAILED"))
    return "\n".join(out) + "\n", EXIT_OK if ok else EXIT_IDENTITY


def cmd_hspec(args, P):
    T = _tower(P, args)
    records = enumerate_hspec(T, args.pair_cap, args.jobs, args.nilpotency_cap)
    _cap_check(records)
    pos = poset(T, records)
    bad = [r for r in records if r.error] + [r for r in records if r.admissible and r.height + r.gk != P.n]
    ok = pos.ok and not bad
    meta = _meta(args, P, "hspec", CSV_COLUMNS)
    if args.format == "csv":
        text = _comment_header(meta) + records_csv(records)
    elif args.format == "dot":
        text = _comment_header(meta, "// ") + poset_dot(pos, P.name or "hspec")
    elif args.format == "json":
        text = _dump_json({
            "meta": meta,
            "records": [{
                "diagram": r.diagram, "black": r.w.black, "white": r.w.white, "height": r.height,
                "gk": r.gk, "stratum_dim": r.stratum_dim, "admissible": r.admissible,
                "saturation_flag": r.saturation_flag, "reject_step": r.reject_step, "reason": r.reason,
                "error": r.error, "generators": [str(g) for g in jw_generators(r)] if r.admissible else None,
            } for r in records],
            "poset": {"edges": [[diagram_render(a), diagram_render(b)] for a, b in pos.edges],
                      "graded": pos.graded, "problems": pos.problems},
            "ok": ok,
        })
    else:
        lines = [_comment_header(meta).rstrip("\n")]
        lines.append(f"{'diagram':<{max(P.n, 7)}}  adm  height  gk  d   generators / reason")
        for r in records:
            if r.admissible:
                gens = ", ".join(str(g) for g in jw_generators(r)) or "0"
                lines.append(f"{r.diagram:<{max(P.n, 7)}}  yes  {r.height:>6}  {r.gk:>2}  {r.stratum_dim:<2}  {gens}")
            else:
                why = r.error or f"step {r.reject_step}: {r.reason}"
                lines.append(f"{r.diagram:<{max(P.n, 7)}}  no   {'':>6}  {'':>2}  {'':<2}  {why}")
        count = sum(r.admissible for r in records)
        lines.append(f"admissible: {count} of {len(records)}; poset {'graded' if pos.graded else 'NOT graded'}")
        lines.extend(f"problem: {p}" for p in pos.problems)
        text = "\n".join(lines) + "\n"
    return text, EXIT_OK if ok else EXIT_IDENTITY


def cmd_chain(args, P):
    T = _tower(P, args)
    w = _diagram(args, P.n)
    if w is None:
        raise CliError("chain needs --diagram", EXIT_USAGE)
    rec = admissible(T, w, args.pair_cap)
    meta = _meta(args, P, "chain", ["chain_length", "height"])
    if not rec.admissible:
        msg = f"diagram {rec.diagram} is not admissible: step {rec.reject_step}: {rec.reason}"
        if args.format == "json":
            return _dump_json({"meta": meta, "diagram": rec.diagram, "admissible": False, "reason": msg}), EXIT_IDENTITY
        return _comment_header(meta) + msg + "\n", EXIT_IDENTITY
    try:
        chain = blackbox_chain(T, w, args.pair_cap, {w.mask: rec})
    except RuntimeError as exc:
        return _comment_header(meta) + f"chain certificate failed: {exc}\n", EXIT_IDENTITY
    links = [{
        "diagram": diagram_render(link.diagram),
        "generators": [str(g) for g in jw_generators(link.record)],
        "witness": None if link.witness is None else str(link.witness),
    } for link in chain]
    length = len(chain) - 1
    ok = length == w.black
    if args.format == "json":
        return _dump_json({"meta": meta, "chain": links, "length": length, "ok": ok}), EXIT_OK if ok else EXIT_IDENTITY
    lines = [_comment_header(meta).rstrip("\n")]
    for k, link in enumerate(links):
        gens = ", ".join(link["generators"]) or "0"
        lines.append(f"{link['diagram']}  J = <{gens}>")
        if link["witness"] is not None:
            lines.append(f"  contains J({links[k + 1]['diagram']}) strictly; witness {link['witness']}")
    lines.append(f"chain length {length} (#black = {w.black})")
    return "\n".join(lines) + "\n", EXIT_OK if ok else EXIT_IDENTITY


def cmd_tauvel(args, P):
    T = _tower(P, args)
    records = enumerate_hspec(T, args.pair_cap, args.jobs, args.nilpotency_cap)
    _cap_check(records)
    rep = tauvel_report(T, records, args.pair_cap)
    cols = ["black", "white", "chain_length", "gk", "height", "stratum_dim", "primitive_gk", "primitive_height"]
    meta = _meta(args, P, "tauvel", cols)
    rows = [r.as_dict() for r in rep.rows]
    code = EXIT_OK if rep.ok else EXIT_IDENTITY
    if args.format == "json":
        return _dump_json({"meta": meta, "rows": rows, "failures": rep.failures, "ok": rep.ok}), code
    if args.format == "csv":
        import csv
        import io

        buf = io.StringIO()
        keys = list(rows[0]) if rows else ["diagram"]
        wr = csv.DictWriter(buf, keys, lineterminator="\n")
        wr.writeheader()
        for r in rows:
            wr.writerow({k: (str(v).lower() if isinstance(v, bool) else v) for k, v in r.items()})
        return _comment_header(meta) + buf.getvalue(), code
    lines = [_comment_header(meta).rstrip("\n")]
    lines.append(f"{'diagram':<{max(P.n, 7)}}  black  white  chain  height+gk  d  prim gk+height")
    for r in rows:
        lines.append(
            f"{r['diagram']:<{max(P.n, 7)}}  {r['black']:>5}  {r['white']:>5}  {r['chain_length']:>5}  "
            f"{r['height']} + {r['gk']} = {r['sum']:<3}  {r['stratum_dim']}  "
            f"{r['primitive_gk']} + {r['primitive_height']} = {r['primitive_sum']}  {'ok' if r['ok'] else 'FAIL'}"
        )
    lines.extend(f"failure: {f}" for f in rep.failures)
    lines.append("tauvel: " + ("PASSED" if rep.ok else "FAILED") + f" ({len(rows)} admissible diagrams, n = {P.n})")
    return "\n".join(lines) + "\n", code


def cmd_center(args, P):
    from .hspec import CauchonDiagram

    T = _tower(P, args)
    w = _diagram(args, P.n) or CauchonDiagram(P.n, frozenset())
    rep = stratum_report(T, w)
    ok = rep.index_s >= 1 and rep.radical_trivial and all(
        sum(rep.torus_exp[i][k] * a[k] for k in range(len(a))) == 0 for a in rep.center_basis for i in range(len(a)))
    meta = _meta(args, P, "center", ["stratum_dim"])
    data = {
        "diagram": diagram_render(w), "white_indices": rep.white_indices, "torus_exp": rep.torus_exp,
        "center_basis": rep.center_basis, "complement_basis": rep.complement_basis,
        "index_s": rep.index_s, "radical_trivial": rep.radical_trivial, "stratum_dim": rep.stratum_dim,
    }
    if args.format == "json":
        return _dump_json({"meta": meta, **data, "ok": ok}), EXIT_OK if ok else EXIT_IDENTITY
    lines = [_comment_header(meta).rstrip("\n")]
    for k, v in data.items():
        lines.append(f"{k}: {v}")
    return "\n".join(lines) + "\n", EXIT_OK if ok else EXIT_IDENTITY


HANDLERS = {
    "validate": cmd_validate,
    "dda": cmd_dda,
    "hspec": cmd_hspec,
    "chain": cmd_chain,
    "tauvel": cmd_tauvel,
    "center": cmd_center,
}


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        P = _load(args)
        text, code = HANDLERS[args.command](args, P)
    except CliError as exc:
        print(f"cglkit: {exc}", file=sys.stderr)
        return exc.code
    except GBCapError as exc:
        print(f"cglkit: {exc}", file=sys.stderr)
        return EXIT_CAP
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
