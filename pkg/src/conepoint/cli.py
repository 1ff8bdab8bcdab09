"""Command-line front end.

Subcommands:

  oracle    exact series coefficients (table up to --order, or one --at)
  asym      asymptotic estimate for one direction
  compare   oracle vs prediction over a direction grid, CSV + summary
  classify  direction classification report at the singular points

Exit codes: 0 success, 2 refusal (obstructed or outside the normal cone),
3 spec error, 4 numeric failure.  With a fixed seed, outputs are
byte-identical between runs; grid work is fanned out to a worker pool
capped by the ACSV_CONE_THREADS environment variable and re-emitted in
sorted order.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .oracle import (QuasiRationalSpec, SpecError, coefficient_at, expand, expand_box)
from .localgeo import GeometryError, classify_direction, quadratic_point_data
from .asympt import (GammaPoleError, RefusalError, local_degree, total_asymptotics)
from .presets import PRESET_NAMES, preset
from . import specio

EXIT_OK = 0
EXIT_REFUSAL = 2
EXIT_SPEC = 3
EXIT_NUMERIC = 4


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conepoint",
                                description="coefficient asymptotics at quadratic cone "
                                            "points, with an exact series oracle")
    sub = p.add_subparsers(dest="command", required=True)

    def add_source(sp):
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--preset", choices=PRESET_NAMES)
        src.add_argument("--spec", help="path to a spec JSON file")
        sp.add_argument("--beta", default=None,
                        help="power for the fls preset (rational like 3/4)")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out", default=None, help="output path (default stdout)")
        sp.add_argument("--float", dest="float_digits", nargs="?", const=17, default=None,
                        type=int, help="print values as floats (optional digit count)")

    po = sub.add_parser("oracle", help="exact series coefficients")
    add_source(po)
    po.add_argument("--order", type=int, default=None)
    po.add_argument("--at", default=None, help="single index, e.g. 50,50,50")
    po.add_argument("--format", choices=("csv", "json"), default="csv")

    pa = sub.add_parser("asym", help="asymptotic estimate in one direction")
    add_source(pa)
    pa.add_argument("--r", required=True, help="direction, e.g. 0,0,9")
    pa.add_argument("--terms", type=int, default=1,
                    help="series depth for bare quadratic points")

    pc = sub.add_parser("compare", help="oracle vs prediction over a grid")
    add_source(pc)
    pc.add_argument("--t-list", default="19,29,39")
    pc.add_argument("--slice-step", type=float, default=0.1)
    pc.add_argument("--lambda-min", type=float, default=None)
    pc.add_argument("--lambda-max", type=float, default=None)
    pc.add_argument("--cone-margin", type=float, default=0.2,
                    help="keep directions with dual form > margin * t^2 on the slice")
    pc.add_argument("--directions", default=None,
                    help="explicit direction list 'i,j,k;i,j,k;...' instead of a slice grid")

    pl = sub.add_parser("classify", help="direction classification report")
    add_source(pl)
    pl.add_argument("--r", required=True)
    return p


def _parse_vec(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise specio.SpecFormatError(f"bad integer vector {text!r}") from None


def _parse_beta(text):
    if text is None:
        return None
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(text) if "." not in text else float(text)


def _load(args) -> Tuple[QuasiRationalSpec, Optional[list], object]:
    """Returns (spec, known_points, preset_or_None)."""
    if args.preset:
        pr = preset(args.preset, beta=_parse_beta(args.beta))
        return pr.spec, list(pr.known_points), pr
    with open(args.spec) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise specio.SpecFormatError(f"{args.spec}:{e.lineno}:{e.colno}: {e.msg}") from None
    return specio.spec_from_json(obj), specio.spec_points_from_json(obj), None


def _emit(text: str, out: Optional[str]):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_oracle(args) -> int:
    spec, _, _ = _load(args)
    if args.at:
        r = _parse_vec(args.at)
        v = coefficient_at(spec, r)
        _emit(specio.format_value(v, args.float_digits) + "\n", args.out)
        return EXIT_OK
    if args.order is None:
        raise specio.SpecFormatError("oracle needs --order or --at")
    table = expand(spec, args.order)
    if args.format == "csv":
        _emit(specio.table_to_csv(table, args.float_digits), args.out)
    else:
        _emit(specio.canonical_json(specio.table_to_json(table, args.float_digits)),
              args.out)
    return EXIT_OK


def _cmd_asym(args) -> int:
    spec, points, _ = _load(args)
    r = _parse_vec(args.r)
    est = total_asymptotics(spec, r, points=points, order_terms=args.terms,
                            seed=args.seed)
    _emit(specio.canonical_json(specio.estimate_to_json(est)), args.out)
    if est.formula_tag == "exponential-decay":
        return EXIT_REFUSAL
    return EXIT_OK


def _cmd_classify(args) -> int:
    spec, points, _ = _load(args)
    r = _parse_vec(args.r)
    if points is None:
        raise specio.SpecFormatError("classify needs known points (preset or spec "
                                     "with a 'points' field)")
    report = []
    for Z in points:
        data = quadratic_point_data(spec, Z)
        cls = classify_direction(data, r)
        entry = specio.point_data_to_json(data)
        entry.update({
            "class": cls.tag.value,
            "margin": cls.margin,
            "dual_rr": specio._num(data.dual_eval(r, r)),
            "decay_exponent_bound": float(spec.arity) + float(local_degree(spec, Z)),
        })
        if data.k == 1:
            ell = data.linear_factors[0][0]
            entry["dual_rl"] = specio._num(data.dual_eval(r, ell))
        report.append(entry)
    _emit(specio.canonical_json({"direction": list(r), "points": report}), args.out)
    return EXIT_OK


def _grid(args, spec) -> List[Tuple[int, ...]]:
    if args.directions:
        return sorted({_parse_vec(part) for part in args.directions.split(";") if part})
    data = quadratic_point_data(spec, (1,) * spec.arity)
    lam_lo = args.lambda_min
    lam_hi = args.lambda_max
    if lam_lo is None or lam_hi is None:
        # symmetric slice for Laurent supports, positive slice otherwise
        laurent = any(e < 0 for poly, _ in spec.factors for m in poly.terms for e in m)
        lam_lo = -2.0 if laurent else 0.1
        lam_hi = 2.0
    ts = [int(t) for t in args.t_list.split(",")]
    step = args.slice_step
    n_steps = int(round((lam_hi - lam_lo) / step))
    out = []
    for t in ts:
        for i in range(n_steps + 1):
            lam1 = lam_lo + i * step
            for j in range(n_steps + 1):
                lam2 = lam_lo + j * step
                r = (math.floor(lam1 * t), math.floor(lam2 * t), t)
                if float(data.dual_eval(r, r)) > args.cone_margin * t * t:
                    out.append(r)
    return sorted(set(out))


def _cmd_compare(args) -> int:
    spec, points, _ = _load(args)
    targets = _grid(args, spec)
    if not targets:
        raise specio.SpecFormatError("empty comparison grid")
    lo = tuple(min(0, min(r[i] for r in targets)) for i in range(spec.arity))
    hi = tuple(max(0, max(r[i] for r in targets)) for i in range(spec.arity))
    table = expand_box(spec, lo, hi)

    def predict(r):
        try:
            est = total_asymptotics(spec, r, points=points)
            return r, est.value, est.per_point[0].direction_class if est.per_point else "?"
        except RefusalError as e:
            return r, None, e.diagnostics.get("class", "refused")

    workers = max(1, int(os.environ.get("ACSV_CONE_THREADS", "4")))
    with ThreadPoolExecutor(max_workers=workers) as pool:
        rows = list(pool.map(predict, targets))
    rows.sort(key=lambda row: row[0])
    header = ",".join(f"r{i+1}" for i in range(spec.arity)) + \
        ",oracle,prediction,rel_error,class"
    lines = [header]
    errors = []
    for r, pred, cls in rows:
        oracle_v = float(table.value_at(r))
        if pred is None:
            lines.append(",".join(map(str, r)) + f",{oracle_v!r},,,{cls}")
            continue
        pred_f = float(pred.real if isinstance(pred, complex) else pred)
        if oracle_v == 0.0 and pred_f == 0.0:
            rel = 0.0
        elif oracle_v == 0.0:
            rel = float("inf")
        else:
            rel = abs(pred_f - oracle_v) / abs(oracle_v)
            errors.append(rel)
        lines.append(",".join(map(str, r)) + f",{oracle_v!r},{pred_f!r},{rel!r},{cls}")
    if errors:
        errors.sort()
        median = errors[len(errors) // 2]
        summary = f"# interior points: {len(errors)}, max rel error {max(errors)!r}, " \
                  f"median rel error {median!r}"
    else:
        summary = "# no interior points with nonzero oracle values"
    lines.append(summary)
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {"oracle": _cmd_oracle, "asym": _cmd_asym,
                "compare": _cmd_compare, "classify": _cmd_classify}
    try:
        return handlers[args.command](args)
    except RefusalError as e:
        sys.stderr.write(f"refused: {e}\n")
        if e.diagnostics:
            sys.stderr.write(specio.canonical_json(e.diagnostics))
        return EXIT_REFUSAL
    except (specio.SpecFormatError, SpecError, FileNotFoundError, KeyError) as e:
        sys.stderr.write(f"spec error: {e}\n")
        return EXIT_SPEC
    except (GeometryError, GammaPoleError, ArithmeticError, ValueError) as e:
        sys.stderr.write(f"numeric failure: {e}\n")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
