"""Command-line interface.

Exit codes: 0 success or all checks pass, 1 a check failed or a computation
raised, 2 usage error (bad flags, unknown check id, unparsable group spec,
order above the cap).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .catalog import builtin_catalog
from .checks import CHECK_IDS, check_operations, resolve_selection, run_checks, summarize
from .dsl import evaluate, format_spec, parse_group_spec
from .errors import CapExceeded, PreconditionError, SpecError, UnitLabError
from .pgroup import PGroup, default_cap
from .recognizer import classify_kyl, distinguish, recover_group_invariants, v_invariants

REPORT_PRIMES = (3, 5)


class UsageError(Exception):
    pass


def _cap(args) -> int:
    return args.cap if args.cap is not None else default_cap()


def _build(text: str, cap: int) -> PGroup:
    try:
        return evaluate(parse_group_spec(text), cap)
    except SpecError as e:
        raise UsageError(f"bad group spec {text!r}: {e}") from None


def _group_summary(G: PGroup) -> list[str]:
    z, d, phi = G.center, G.commutator_subgroup, G.frattini
    lines = [
        f"label={G.label} p={G.p} order={G.order} exponent={G.exponent}",
        f"center_order={z.order} center_exponent={z.exponent} derived_order={d.order}",
        f"frattini_order={phi.order} frattini_cyclic={phi.is_cyclic} agemo_order={G.agemo().order}",
        f"classes={len(G.conjugacy_partition)} t={G.conjugacy_partition.t} abelian={G.is_abelian}",
    ]
    if G.negative_control:
        lines.append("negative_control=p2")
    return lines


def cmd_list(args, out) -> int:
    if args.checks:
        return _print_checks(out)
    for e in builtin_catalog(args.p, _cap(args)):
        print(f"{e.label}\t{e.role}\t{format_spec(e.spec)}", file=out)
    return 0


def _print_checks(out) -> int:
    for cid, ops in check_operations().items():
        print(f"{cid}\t{ops}", file=out)
    return 0


def cmd_build(args, out) -> int:
    G = _build(args.spec, _cap(args))
    print(f"spec={format_spec(parse_group_spec(args.spec))}", file=out)
    for line in _group_summary(G):
        print(line, file=out)
    print(f"group_law={'ok' if G.check_group_law() else 'FAILED'}", file=out)
    return 0


def cmd_invariants(args, out) -> int:
    G = _build(args.spec, _cap(args))
    gi = G.invariants()
    print(f"group_invariants order={gi.order} exponent={gi.exponent} "
          f"center_order={gi.center_order} center_exponent={gi.center_exponent}", file=out)
    try:
        ui = v_invariants(G, args.seed, args.samples)
    except PreconditionError as e:
        print(f"unit_invariants unavailable: {e}", file=out)
        return 0
    print(f"unit_invariants p={ui.p} dimension={ui.dimension} log_center_order={ui.log_center_order} "
          f"center_exponent={ui.center_exponent} v_exponent={ui.v_exponent} "
          f"log_vp_order={ui.log_vp_order if ui.log_vp_order is not None else 'absent'}", file=out)
    if G.frattini.is_cyclic:
        rec = recover_group_invariants(ui)
        print(f"recovered order={rec.order} exponent={rec.exponent} center_order={rec.center_order} "
              f"center_exponent={rec.center_exponent} match={rec == gi}", file=out)
        print(f"kyl {classify_kyl(rec, G.p).describe()}", file=out)
    return 0


def cmd_distinguish(args, out) -> int:
    cap = _cap(args)
    G, H = _build(args.spec_a, cap), _build(args.spec_b, cap)
    v = distinguish(G, H, args.seed, args.samples)
    print(f"verdict={v.verdict}", file=out)
    print(f"left={v.left.as_tuple()} kyl={v.left_kyl.describe()}", file=out)
    print(f"right={v.right.as_tuple()} kyl={v.right_kyl.describe()}", file=out)
    if v.differing_fields:
        print(f"differing={','.join(v.differing_fields)}", file=out)
    return 0


def _catalog_groups(p: int, cap: int) -> list[tuple[str, PGroup]]:
    return [(e.label, e.build(cap)) for e in builtin_catalog(p, cap)]


def cmd_verify(args, out) -> int:
    if args.list_checks:
        return _print_checks(out)
    if not args.checks:
        raise UsageError("verify needs check ids (or 'all')")
    try:
        ids = resolve_selection(args.checks)
    except UnitLabError as e:
        raise UsageError(str(e)) from None
    cap = _cap(args)
    if args.group:
        groups = [(_build(s, cap).label, _build(s, cap)) for s in args.group]
        label = "given-groups"
    else:
        groups = _catalog_groups(args.p, cap)
        label = None
    reports = run_checks(ids, groups, args.p, args.seed, args.samples, label)
    for r in reports:
        print(r.line(), file=out)
    print(summarize(reports), file=out)
    return 1 if any(r.status == "fail" for r in reports) else 0


def cmd_report(args, out) -> int:
    cap = _cap(args)
    # controls shared by both catalogs (D8) yield identical lines; keep one
    merged = {}
    for p in REPORT_PRIMES:
        for r in run_checks(list(CHECK_IDS), _catalog_groups(p, cap), p, args.seed, args.samples):
            merged.setdefault((r.check, r.group), r)
    reports = [merged[k] for k in sorted(merged)]
    lines = [r.line() for r in reports] + [summarize(reports)]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        print(summarize(reports), file=out)
    else:
        out.write(text)
    return 1 if any(r.status == "fail" for r in reports) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unitlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, sampling=True):
        sp.add_argument("--cap", type=int, default=None, help="group order cap (default 343 or $UNITLAB_CAP)")
        if sampling:
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--samples", type=int, default=200)

    sp = sub.add_parser("list", help="list the built-in catalog or the check ids")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--checks", action="store_true")
    common(sp, sampling=False)
    sp.set_defaults(func=cmd_list)

    sp = sub.add_parser("build", help="build a group from a spec and summarize it")
    sp.add_argument("spec")
    common(sp, sampling=False)
    sp.set_defaults(func=cmd_build)

    sp = sub.add_parser("invariants", help="group and unit-group invariants of a spec")
    sp.add_argument("spec")
    common(sp)
    sp.set_defaults(func=cmd_invariants)

    sp = sub.add_parser("verify", help="run checks: " + ", ".join(CHECK_IDS))
    sp.add_argument("checks", nargs="?", help="comma-separated check ids or 'all'")
    sp.add_argument("--p", type=int, default=3)
    sp.add_argument("--group", action="append", help="group spec to check instead of the catalog (repeatable)")
    sp.add_argument("--list-checks", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("distinguish", help="compare the unit-group invariants of two specs")
    sp.add_argument("spec_a")
    sp.add_argument("spec_b")
    common(sp)
    sp.set_defaults(func=cmd_distinguish)

    sp = sub.add_parser("report", help="run every check on the p = 3 and p = 5 catalogs")
    sp.add_argument("--out", default=None)
    common(sp)
    sp.set_defaults(func=cmd_report)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args, out)
    except (UsageError, CapExceeded) as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except UnitLabError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 1


def main_exit() -> None:
    sys.exit(main())
