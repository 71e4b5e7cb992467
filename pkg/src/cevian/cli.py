"""Command-line front-end: compute | verify | discover | families | locus | catalog."""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import mpmath
from mpmath import mp, mpf

from .catalog import SPECIAL_CHECK_IDS, catalog, exact_center_quadruple, \
    export_lines, lookup, run_special_check, verify
from .centers import NotableCenter, TriangleShape, center_config
from .discovery import BasisFunction, GridSpec, confirm_family, pair_and_extrapolate, sweep
from .errors import CevianError
from .figure import CevianConfig, angles_from_point, build_from_angles, \
    build_from_angles_real, build_from_point, metrics
from .locus import extract_zero_set, fit_line, locus_value, scan
from .precision import parse_angle, real_to_str, workbits
from .store import RecordLog, record_line

DEFAULT_STORE = "cevian.log"


def _common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--precision-bits", type=int, default=256,
                     help="working binary precision (default 256)")
    sub.add_argument("--digits", type=int, default=50,
                     help="decimal digits for printed values (default 50)")
    sub.add_argument("--seed", type=int, default=0,
                     help="seed for sampled verification (default 0)")
    sub.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                     help="worker processes for sweeps (default: processor count)")
    sub.add_argument("--out", type=str, default=None,
                     help="write a machine-readable artifact to this path")


def _parse_csv_angles(text: str, count: int, what: str) -> tuple[Fraction, ...]:
    parts = [p for p in text.split(",") if p.strip()]
    if len(parts) != count:
        raise ValueError(f"{what} needs {count} comma-separated values: {text!r}")
    return tuple(parse_angle(p) for p in parts)


def _flags_obj(args: argparse.Namespace, command: str, **extra) -> dict:
    obj = {
        "command": command,
        "precision_bits": args.precision_bits,
        "digits": args.digits,
        "seed": args.seed,
    }
    obj.update(extra)
    return obj


def _fmt(x, digits: int) -> str:
    return mpmath.nstr(mpf(x), digits)


def _entry_quadruple(entry):
    """The exact quadruple an entry is pinned to, if it is pinned to one."""
    pred = entry.predicate
    if pred.kind == "quadruple":
        return tuple(pred.quadruple)
    if pred.kind == "center" and pred.shape_rule == "fixed":
        shape = TriangleShape(*pred.fixed_shape)
        exact = exact_center_quadruple(shape, pred.center)
        return tuple(exact) if exact is not None else None
    return None


def cmd_compute(args: argparse.Namespace) -> int:
    forms = [args.quadruple is not None, args.coords is not None,
             args.center is not None]
    if sum(forms) != 1:
        print("error: give exactly one of --quadruple, --coords, --center",
              file=sys.stderr)
        return 2
    bits = args.precision_bits
    quadruple = None
    if args.quadruple:
        quadruple = _parse_csv_angles(args.quadruple, 4, "--quadruple")
        config = CevianConfig(*quadruple)
        lengths = build_from_angles(config, bits)
        shown = [str(x) for x in quadruple]
    elif args.center:
        if not args.angles:
            print("error: --center requires --angles A,B,C", file=sys.stderr)
            return 2
        shape = TriangleShape(*_parse_csv_angles(args.angles, 3, "--angles"))
        center = NotableCenter.parse(args.center)
        exact = exact_center_quadruple(shape, center)
        if exact is not None:
            quadruple = exact
            lengths = build_from_angles(CevianConfig(*exact), bits)
            shown = [str(x) for x in exact]
        else:
            degs = center_config(shape, center, bits)
            lengths = build_from_angles_real(*degs, bits)
            shown = [_fmt(d, args.digits) for d in degs]
    else:
        with workbits(bits):
            vals = [mpf(p) for p in args.coords.split(",")]
        if len(vals) != 8:
            print("error: --coords needs ax,ay,bx,by,cx,cy,px,py", file=sys.stderr)
            return 2
        pts = [(vals[i], vals[i + 1]) for i in range(0, 8, 2)]
        lengths = build_from_point(*pts, bits)
        degs = angles_from_point(*pts, bits)
        shown = [_fmt(d, args.digits) for d in degs]

    figure = metrics(lengths, bits)
    print("quadruple (a, b, c, d) degrees: " + ", ".join(shown))
    print(f"lengths (circumradius normalized to 1/2), {args.digits} digits:")
    for name, value in lengths.as_dict().items():
        print(f"  {name} = {_fmt(value, args.digits)}")
    for tri in figure.triangles:
        print(f"triangle {tri.index}:")
        print(f"  K{tri.index} = {_fmt(tri.area, args.digits)}")
        print(f"  s{tri.index} = {_fmt(tri.semiperimeter, args.digits)}")
        print(f"  r{tri.index} = {_fmt(tri.inradius, args.digits)}")
        print(f"  R{tri.index} = {_fmt(tri.circumradius, args.digits)}")

    if quadruple is not None:
        for entry in catalog():
            if _entry_quadruple(entry) == tuple(quadruple):
                for relation in entry.relations:
                    _, relative = relation.evaluate(figure)
                    print(f"check {entry.entry_id}: {relation}  "
                          f"relative residual {_fmt(relative, 6)}")

    if args.out:
        record = figure.to_flat_record()
        record["flags"] = _flags_obj(args, "compute", quadruple=shown)
        Path(args.out).write_text(
            json.dumps(record, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    selector = args.selector
    entry_ids = [e.entry_id for e in catalog()]
    if selector == "all":
        targets = entry_ids + list(SPECIAL_CHECK_IDS)
    elif selector in entry_ids or selector in SPECIAL_CHECK_IDS:
        targets = [selector]
    else:
        print(f"error: no catalog entry or check named {selector!r}", file=sys.stderr)
        return 2
    reports = []
    for target in targets:
        if target in SPECIAL_CHECK_IDS:
            report = run_special_check(
                target, args.samples, args.precision_bits, args.seed)
        else:
            report = verify(
                lookup(target), args.samples, args.precision_bits,
                args.seed)
        reports.append(report)
        if report.verdict == "skipped":
            note = f" ({report.notes[0]})" if report.notes else ""
            print(f"{report.entry_id}: SKIP{note}")
        else:
            line = (f"{report.entry_id}: {report.verdict.upper()} "
                    f"samples={report.samples_tested} "
                    f"max-rel-residual={_fmt(report.max_relative_residual, 6)}")
            for note in report.notes:
                line += f"  [{note}]"
            print(line)
    if args.out:
        lines = [json.dumps(_flags_obj(args, "verify", selector=selector,
                                       samples=args.samples), sort_keys=True)]
        for report in reports:
            lines.append(json.dumps({
                "entry": report.entry_id,
                "verdict": report.verdict,
                "samples": report.samples_tested,
                "max_relative_residual": real_to_str(
                    report.max_relative_residual, args.precision_bits),
                "notes": list(report.notes),
            }, sort_keys=True))
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 1 if any(r.verdict == "fail" for r in reports) else 0


def cmd_discover(args: argparse.Namespace) -> int:
    step = parse_angle(args.step)
    basis = BasisFunction.parse(args.basis)
    if args.range_around:
        center = _parse_csv_angles(args.range_around, 4, "--range-around")
        grid = GridSpec.box(center, parse_angle(args.box_halfwidth), step)
    else:
        grid = GridSpec.full(step)

    def progress(points: int, hits: int, skipped: int) -> None:
        print(f"progress points={points} hits={hits} skipped={skipped}",
              file=sys.stderr, flush=True)

    with RecordLog.open_append(args.store) as log:
        summary = sweep(grid, basis, args.precision_bits, log,
                        max_coeff=args.max_coeff, jobs=args.jobs,
                        progress=progress, progress_every=1000)
    print(f"sweep points={summary.points_examined} hits={summary.hits} "
          f"skipped={summary.skipped} store={args.store}")
    if args.out:
        obj = _flags_obj(args, "discover", step=str(step), basis=basis.value,
                         store=str(args.store), max_coeff=args.max_coeff)
        obj.update(points=summary.points_examined, hits=summary.hits,
                   skipped=summary.skipped)
        Path(args.out).write_text(json.dumps(obj, sort_keys=True) + "\n",
                                  encoding="utf-8")
    return 0


def cmd_families(args: argparse.Namespace) -> int:
    store_path = Path(args.store)
    if not store_path.exists():
        print("candidates=0 confirmed=0 refuted=0")
        return 0
    log = RecordLog.open_read(store_path)
    candidates = pair_and_extrapolate(log)
    results = []
    for candidate in candidates:
        results.append(confirm_family(candidate, args.high_precision_bits,
                                      args.samples))
    confirmed = [c for c in results if c.status == "confirmed"]
    for result in results:
        quads = " ".join(
            "%s=(%s)" % (name, ",".join(str(x) for x in getattr(result, name)))
            for name in ("q1", "q2", "q3")
        )
        print(f"{result.status} basis={result.basis} "
              f"coeffs=({','.join(str(c) for c in result.coefficients)}) {quads}")
        if result.status == "confirmed":
            relation = BasisFunction(result.basis).to_relation(result.coefficients)
            print(f"  relation: {relation}")
            for t, residual in result.samples:
                print(f"  t={mpmath.nstr(mpf(t), 8)} residual={mpmath.nstr(mpf(residual), 4)}")
    print(f"candidates={len(results)} confirmed={len(confirmed)} "
          f"refuted={len(results) - len(confirmed)}")
    if confirmed:
        with RecordLog.open_append(store_path) as append_log:
            append_log.append_many(confirmed)
    if args.out:
        lines = [json.dumps(_flags_obj(
            args, "families", store=str(args.store),
            high_precision_bits=args.high_precision_bits, samples=args.samples,
        ), sort_keys=True)]
        lines.extend(record_line(result) for result in results)
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0


def cmd_locus(args: argparse.Namespace) -> int:
    shape = TriangleShape(*_parse_csv_angles(args.angles, 3, "--angles"))
    bits = args.precision_bits
    with workbits(bits):
        tolerance = mpf(args.refine_tolerance)
    field = scan(shape, args.resolution, bits)
    polylines = extract_zero_set(field, tolerance, bits)
    positive = sum(1 for v in field.values if v > 0)
    print(f"nodes={len(field.nodes)} positive={positive} "
          f"negative={len(field.values) - positive} polylines={len(polylines)}")
    for idx, poly in enumerate(polylines):
        worst = max(poly.residuals) if poly.residuals else mpf(0)
        line = (f"polyline {idx}: points={len(poly.points)} "
                f"closed={'yes' if poly.closed else 'no'} "
                f"max-residual={_fmt(worst, 4)}")
        if len(poly.points) >= 3:
            fit = fit_line(poly.points, field.diameter)
            line += f" line-fit-deviation={fit.max_deviation:.3e}"
        print(line)
    if args.out:
        flags = json.dumps(_flags_obj(args, "locus",
                                      angles=[str(a) for a in shape.angles],
                                      resolution=args.resolution), sort_keys=True)
        field_lines = ["# " + flags, "i,j,k,x,y,g"]
        for (i, j, k), point, value in zip(field.nodes, field.points, field.values):
            field_lines.append(",".join([
                str(i), str(j), str(k),
                _fmt(point.x, args.digits), _fmt(point.y, args.digits),
                _fmt(value, args.digits),
            ]))
        Path(args.out + ".field.csv").write_text("\n".join(field_lines) + "\n",
                                                 encoding="utf-8")
        zero_lines = ["# " + flags, "polyline,index,closed,x,y,residual"]
        for idx, poly in enumerate(polylines):
            for pos, (point, residual) in enumerate(zip(poly.points, poly.residuals)):
                zero_lines.append(",".join([
                    str(idx), str(pos), "1" if poly.closed else "0",
                    _fmt(point.x, args.digits), _fmt(point.y, args.digits),
                    _fmt(residual, args.digits),
                ]))
        Path(args.out + ".zeros.csv").write_text("\n".join(zero_lines) + "\n",
                                                 encoding="utf-8")
    return 0


def cmd_catalog(args: argparse.Namespace) -> int:
    lines = export_lines()
    for line in lines:
        print(line)
    if args.out:
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cevian",
        description="Six-incircle toolkit: metrics, identity checks, relation "
                    "discovery, and locus scans for cevian-subdivided triangles.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    compute = subs.add_parser("compute", help="lengths and metrics for one figure")
    compute.add_argument("--quadruple", help="cevian angles a,b,c,d in exact degrees")
    compute.add_argument("--coords", help="ax,ay,bx,by,cx,cy,px,py coordinates")
    compute.add_argument("--center", help="notable center name")
    compute.add_argument("--angles", help="vertex angles A,B,C for --center")
    _common_flags(compute)
    compute.set_defaults(func=cmd_compute)

    verify = subs.add_parser("verify", help="verify catalog entries on samples")
    verify.add_argument("selector", nargs="?", default="all",
                        help='entry id, special check id, or "all"')
    verify.add_argument("--samples", type=int, default=100)
    _common_flags(verify)
    verify.set_defaults(func=cmd_verify)

    discover = subs.add_parser("discover", help="sweep a grid for integer relations")
    discover.add_argument("--step", default="5", help="grid step in exact degrees")
    discover.add_argument("--basis", default="recip",
                          help="basis function: r | recip | r2 | recip2 | recip4 | products")
    discover.add_argument("--store", default=DEFAULT_STORE)
    discover.add_argument("--range-around",
                          help="center a,b,c,d of a box grid instead of the full range")
    discover.add_argument("--box-halfwidth", default="3",
                          help="halfwidth of the box grid in degrees (default 3)")
    discover.add_argument("--max-coeff", type=int, default=100)
    _common_flags(discover)
    discover.set_defaults(func=cmd_discover)

    families = subs.add_parser("families",
                               help="pair store hits and confirm families")
    families.add_argument("--store", default=DEFAULT_STORE)
    families.add_argument("--high-precision-bits", type=int, default=512)
    families.add_argument("--samples", type=int, default=5)
    _common_flags(families)
    families.set_defaults(func=cmd_families)

    locus = subs.add_parser("locus", help="scan the alternating inradius-sum locus")
    locus.add_argument("--angles", default="60,60,60",
                       help="vertex angles A,B,C in exact degrees")
    locus.add_argument("--resolution", type=int, default=64)
    locus.add_argument("--refine-tolerance", default="1e-30")
    _common_flags(locus)
    locus.set_defaults(func=cmd_locus)

    catalog = subs.add_parser("catalog", help="list the identity catalog")
    _common_flags(catalog)
    catalog.set_defaults(func=cmd_catalog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    with mp.workprec(args.precision_bits if args.precision_bits >= 64 else 64):
        try:
            return args.func(args)
        except (ValueError, KeyError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        except CevianError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 3
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 3


if __name__ == "__main__":
    sys.exit(main())
