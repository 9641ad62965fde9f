"""Command line front end.

Subcommands:
  adm        enumerate the admissible set
  classify   classify every stratum at a level
  dl-data    emit the flag data of the basic strata
  compare    recompute basic strata from closed forms and diff
  check      run the internal consistency suite for one genus

Exit codes: 0 success, 1 internal mismatch, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from ekor_atlas.admissible import bruhat_hasse_edges, straight_classes
from ekor_atlas.affine import GroupError, element_label
from ekor_atlas.coxeter import CoxeterError
from ekor_atlas.ekor import record_to_json, stratum_report
from ekor_atlas.oracles import (
    OracleError,
    bruhat_leq_subword,
    cayley_ball,
    coxeter_group_size,
)
from ekor_atlas.rootdata import RootDatumError
from ekor_atlas.siegel import siegel_context


class UsageError(Exception):
    """Bad flags or arguments; maps to exit code 2."""


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="atlas",
        description="Strata of admissible sets for symplectic similitude groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    specs = {
        "adm": "enumerate the admissible set of the minuscule cocharacter",
        "classify": "classify the strata at a level",
        "dl-data": "emit flag data of the basic strata",
        "compare": "check computed basic strata against closed forms",
        "check": "run the internal consistency suite",
    }
    for name, blurb in specs.items():
        q = sub.add_parser(name, help=blurb)
        q.add_argument("--g", type=int, required=True, metavar="G",
                       help="genus, at least 1")
        q.add_argument("--level", default="iwahori", metavar="LEVEL",
                       help="iwahori, hyperspecial, or comma separated nodes")
        q.add_argument("--format", dest="fmt", default="text",
                       choices=["text", "json", "dot"])
        q.add_argument("--out", default=None, metavar="PATH",
                       help="write output to a file instead of stdout")
    return parser


def _fmt_nodes(nodes) -> str:
    inner = ",".join(str(i) for i in sorted(nodes))
    return "{" + inner + "}"


def _fmt_newton(newton) -> str:
    return "(" + ",".join(str(c) for c in newton) + ")"


def _hasse_dot(group, elements, doubled=frozenset(), name="hasse") -> str:
    lines = [f"digraph {name} {{", "  rankdir=BT;", "  node [shape=box];"]
    for idx, x in enumerate(elements):
        extra = " peripheries=2" if x in doubled else ""
        lines.append(f'  n{idx} [label="{element_label(group, x)}"{extra}];')
    for a, b in bruhat_hasse_edges(group, elements):
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines)


def _cmd_adm(ctx, fmt: str) -> str:
    adm = ctx.adm()
    group = ctx.group
    if fmt == "json":
        return json.dumps([group.element_to_json(x) for x in adm.elements],
                          indent=2, sort_keys=True)
    if fmt == "dot":
        return _hasse_dot(group, adm.elements, name="admissible")
    profile = adm.by_length()
    top = max(profile)
    counts = "/".join(str(profile.get(l, 0)) for l in range(top + 1))
    lines = [f"{len(adm)} elements: {counts} by length 0..{top}"]
    for x in adm.elements:
        lines.append(f"len={group.length(x)} {element_label(group, x)}")
    return "\n".join(lines)


def _cmd_classify(ctx, level, fmt: str) -> str:
    report = stratum_report(ctx.adm(), level)
    group = ctx.group
    if fmt == "json":
        return json.dumps([record_to_json(group, rec) for rec in report],
                          indent=2, sort_keys=True)
    if fmt == "dot":
        doubled = frozenset(rec.element for rec in report if rec.basic)
        return _hasse_dot(group, [rec.element for rec in report],
                          doubled=doubled, name="strata")
    nbasic = sum(1 for rec in report if rec.basic)
    lines = [f"{len(report)} strata, {nbasic} basic"]
    for rec in report:
        lines.append(
            f"len={rec.length} basic={'yes' if rec.basic else 'no'} "
            f"{element_label(group, rec.element)} "
            f"supp={_fmt_nodes(rec.support.raw)} "
            f"closure={_fmt_nodes(rec.support.closure)} "
            f"i_set={_fmt_nodes(rec.stable_subset)} "
            f"newton={_fmt_newton(rec.newton)}")
    return "\n".join(lines)


def _cmd_dl_data(ctx, level, fmt: str) -> str:
    report = [rec for rec in stratum_report(ctx.adm(), level) if rec.basic]
    group = ctx.group
    if fmt == "json":
        return json.dumps([record_to_json(group, rec) for rec in report],
                          indent=2, sort_keys=True)
    lines = [f"{len(report)} basic strata"]
    for rec in report:
        dl = rec.datum
        lines.append(
            f"{element_label(group, rec.element)} type={dl.ambient_type} "
            f"ambient={_fmt_nodes(dl.ambient_nodes)} "
            f"parabolic={_fmt_nodes(dl.parabolic_nodes)} dim={dl.dimension} "
            f"coxeter={'yes' if dl.sigma_coxeter else 'no'} "
            f"stable={'yes' if dl.stabilizes_parabolic else 'no'}")
    return "\n".join(lines)


def _cmd_compare(ctx, level, fmt: str) -> str:
    if level == ctx.iwahori:
        mode = "gortz-yu"
    elif level == ctx.hyperspecial:
        mode = "hoeve"
    else:
        raise UsageError("compare needs an iwahori or hyperspecial level")
    rep = ctx.compare(mode)
    if fmt == "json":
        return json.dumps(rep.to_json(), indent=2, sort_keys=True)
    lines = [f"mode={rep.mode} g={rep.g} strata={rep.strata} "
             f"basic={rep.basic} expected={rep.expected} ok"]
    for label in rep.labels:
        lines.append(f"  {label}")
    return "\n".join(lines)


def _cmd_check(ctx, fmt: str) -> str:
    if ctx.g > 3:
        raise UsageError("check supports g up to 3; larger genera take too long")
    group = ctx.group
    lines = []

    fin = coxeter_group_size(group.affine_coxeter,
                             frozenset(range(1, ctx.g + 1)), cap=10000)
    want = (2 ** ctx.g) * _factorial(ctx.g)
    if fin != want:
        raise GroupError(f"finite group size {fin}, expected {want}")
    lines.append(f"ok: finite group has {want} elements")

    omegas = [group.identity, ctx.tau.element, group.inv(ctx.tau.element)]
    dist = cayley_ball(group, 4, omegas)
    for x, r in dist.items():
        if group.length(x) != r:
            raise GroupError(f"length {group.length(x)} but word distance {r}")
    lines.append(f"ok: length matches word distance on {len(dist)} elements")

    adm = ctx.adm()
    cache: dict = {}
    for x in adm.elements:
        for top in adm.maxima:
            if not bruhat_leq_subword(group, x, top, cache):
                continue
            break
        else:
            raise GroupError("admissible element fails the subword test")
        if not any(group.bruhat_leq(x, top) for top in adm.maxima):
            raise GroupError("admissible element fails the order test")
    lines.append(f"ok: {len(adm)} admissible elements sit below a translation point")

    for mode in ("gortz-yu", "hoeve"):
        rep = ctx.compare(mode)
        lines.append(f"ok: {rep.mode} comparison, {rep.basic} basic strata")

    classes = straight_classes(adm)
    nbasic = sum(1 for cls in classes if cls.is_basic)
    if nbasic != 1:
        raise GroupError("expected exactly one basic class")
    lines.append(f"ok: {len(classes)} straight classes, one basic")

    lines.append("all checks passed")
    return "\n".join(lines)


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def dispatch(args) -> str:
    if args.g < 1:
        raise UsageError("--g must be at least 1")
    if args.fmt == "dot" and args.command not in ("adm", "classify"):
        raise UsageError("dot output is only available for adm and classify")
    ctx = siegel_context(args.g)
    if args.command == "adm":
        return _cmd_adm(ctx, args.fmt)
    if args.command == "check":
        return _cmd_check(ctx, args.fmt)
    try:
        level = ctx.level_nodes(args.level)
    except GroupError as exc:
        raise UsageError(str(exc)) from None
    if args.command == "classify":
        return _cmd_classify(ctx, level, args.fmt)
    if args.command == "dl-data":
        return _cmd_dl_data(ctx, level, args.fmt)
    return _cmd_compare(ctx, level, args.fmt)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = dispatch(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (GroupError, RootDatumError, CoxeterError, OracleError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    payload = text + "\n"
    if args.out is not None:
        with open(args.out, "w", encoding="ascii") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)
    return 0


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
