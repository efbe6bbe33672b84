"""Command line front end.

Every command writes one JSON report object to stdout with the fixed
top-level fields {command, inputs, result, witnesses, timings} in sorted
key order, and a short human-readable table to stderr.  Exit codes:
0 success, 1 malformed input, 2 mathematically not applicable (gate
violations, exhausted searches).

Reports are deterministic: the timings field carries work counters, not
wall-clock times (those go to stderr only), and thread count never
appears in the report.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import bounds as _bounds
from .curves import (curve_from_json, divisor_from_json, divisor_to_json,
                     point_from_json)
from .errors import CurvextError, ExhaustionError, InputError, NotApplicable
from .extensions import (brute_force_destabilizer, class_from_json,
                         make_datum, prop1_certificate, search_semistable,
                         subspace_from_json)
from .riemann_roch import function_to_json, rr_basis
from .secant import offsecant_experiment, secant_member


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 means not-applicable here,
    # so route usage problems through the input-error path instead
    def error(self, message):
        raise InputError(message)


def _load_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def _parse_inline(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad {what} JSON: {exc}") from exc


def _load_curve(path: str):
    return curve_from_json(_load_json(path))


def _load_class(path: str):
    return class_from_json(_load_json(path), base_dir=os.path.dirname(path) or ".")


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# command handlers: fill `inputs` as they parse (the echo survives error
# exits), return (result, witnesses, timings)
# ---------------------------------------------------------------------------

def _cmd_curve_validate(args, inputs):
    inputs["file"] = args.file
    curve = curve_from_json(_load_json(args.file))
    result = {"status": "ok", "valid": True, "genus": curve.genus,
              "f_degree": curve.f.degree, "label": curve.label}
    return result, [], {}


def _cmd_rr_basis(args, inputs):
    inputs["curve"] = args.curve
    curve = _load_curve(args.curve)
    dv = _parse_inline(args.divisor, "divisor")
    inputs["divisor"] = dv
    D = divisor_from_json(curve, dv)
    B = rr_basis(curve, D)
    result = {"status": "ok", "dim": B.dim, "degree": D.degree,
              "pole_orders": list(B.pole_orders),
              "denominator": [curve.field.payload_to_json(v)
                              for v in B.denominator.coeffs],
              "basis": [function_to_json(fn) for fn in B.basis]}
    return result, [], {"dim": B.dim}


def _cmd_ext_det(args, inputs):
    inputs["file"] = args.file
    e = _load_class(args.file)
    F = e.datum.curve.field
    val = e.datum.det_payload(e.coords)
    nonzero = not F.is_zero(val)
    result = {"status": "ok", "det": F.payload_to_json(val),
              "nonzero": nonzero, "certifies_semistable": nonzero,
              "m": e.datum.m, "n": e.datum.n}
    return result, [], {"m": e.datum.m}


def _cmd_ext_prop1(args, inputs):
    inputs["file"] = args.file
    e = _load_class(args.file)
    curve = e.datum.curve
    Lp = Mp = None
    if args.L is not None:
        lv = _parse_inline(args.L, "L divisor")
        inputs["L"] = lv
        Lp = divisor_from_json(curve, lv)
    if args.M is not None:
        mv = _parse_inline(args.M, "M divisor")
        inputs["M"] = mv
        Mp = divisor_from_json(curve, mv)
    cert = prop1_certificate(e, Lp, Mp)
    result = {"status": "ok",
              "certificate": {"outcome": cert.status, "rank": cert.rank,
                              "rows": cert.rows, "cols": cert.cols,
                              "case_a": cert.case_a, "case_b": cert.case_b}}
    return result, [], {"rows": cert.rows, "cols": cert.cols}


def _cmd_ext_search(args, inputs):
    inputs["file"] = args.file
    obj = _load_json(args.file)
    datum, V = subspace_from_json(obj, base_dir=os.path.dirname(args.file) or ".")
    sr = search_semistable(V)
    F = datum.curve.field
    witness = {"coefficients": list(sr.coefficients),
               "coords": [F.payload_to_json(v) for v in sr.witness.coords]}
    result = {"status": "ok", "found": True, "box": sr.box,
              "examined": sr.examined, "coefficients": list(sr.coefficients)}
    return result, [witness], {"examined": sr.examined}


def _cmd_ext_destab(args, inputs):
    inputs["file"] = args.file
    e = _load_class(args.file)
    points = None
    if args.points is not None:
        inputs["points"] = args.points
        pts = _load_json(args.points)
        if not isinstance(pts, list):
            raise InputError("points file must hold a JSON list of points")
        points = [point_from_json(e.datum.curve, p) for p in pts]
    if args.max_degree is not None:
        inputs["max_degree"] = args.max_degree
    res = brute_force_destabilizer(e, max_degree=args.max_degree, points=points)
    result = {"status": "ok", "found": res.found, "examined": res.examined,
              "complete": res.complete, "max_degree": res.max_degree}
    witnesses = [divisor_to_json(res.witness)] if res.found else []
    return result, witnesses, {"examined": res.examined}


def _cmd_secant_member(args, inputs):
    inputs["file"] = args.file
    if args.d is not None:
        inputs["d"] = args.d
    e = _load_class(args.file)
    res = secant_member(e, args.d)
    result = {"status": "ok", "member": res.member, "d": res.d,
              "examined": res.examined, "complete": res.complete}
    witnesses = [divisor_to_json(res.witness)] if res.member else []
    return result, witnesses, {"examined": res.examined}


def _cmd_secant_experiment(args, inputs):
    inputs.update({"curve": args.curve, "n": args.n, "dim": args.dim,
                   "trials": args.trials, "seed": args.seed})
    curve = _load_curve(args.curve)
    if args.n < 2 or args.n % 2:
        raise InputError(f"--n must be a positive even integer, got {args.n}")
    # canonical datum on the infinity class: N = n*inf, M = (n/2+g-1)*inf,
    # so 2M - N - K = 0 and the witness u is the constant 1
    N = curve.infinity_divisor(args.n)
    M = curve.infinity_divisor(args.n // 2 + curve.genus - 1)
    datum = make_datum(curve, N, M)
    report = offsecant_experiment(datum, args.dim, args.trials,
                                  seed=args.seed, threads=args.threads)
    result = {"status": "ok"}
    result.update(report.to_json(curve.field))
    return result, [], {"examined": report.examined_total,
                        "trials": report.trials}


def _cmd_bounds_m(args, inputs):
    inputs["curve"] = args.curve
    curve = _load_curve(args.curve)
    dv = _parse_inline(args.divisor, "divisor")
    inputs["divisor"] = dv
    M = divisor_from_json(curve, dv)
    m = _bounds.compute_m(curve, M)
    result = {"status": "ok", "m": m, "deg_M": M.degree, "genus": curve.genus}
    return result, [], {}


def _cmd_bounds_delta0(args, inputs):
    inputs.update({"n": args.n, "g": args.g, "m": args.m})
    v = _bounds.theorem1_delta0(args.n, args.g, args.m)
    return {"status": "ok", "delta0": v}, [], {}


def _cmd_bounds_theorem2(args, inputs):
    inputs.update({"n": args.n, "g": args.g, "m": args.m, "degF": args.degF,
                   "c1sq": args.c1sq, "k": args.k})
    b = _bounds.BoundInputs(n=args.n, g=args.g, m=args.m, degF=args.degF,
                            c1sq=args.c1sq, k=args.k)
    r = _bounds.theorem2_bound(b)
    result = {"status": "ok", "A": r.A, "bound": r.bound, "ulp": r.ulp,
              "A_rational_part": _frac_str(r.A_rational),
              "bound_rational_part": _frac_str(r.bound_rational),
              "log_argument": r.log_argument, "gate": b.gate}
    return result, [], {}


def _build_parser() -> _Parser:
    p = _Parser(prog="curvext", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="group", required=True)

    curve = sub.add_parser("curve").add_subparsers(dest="cmd", required=True)
    cv = curve.add_parser("validate")
    cv.add_argument("file")
    cv.set_defaults(handler=_cmd_curve_validate, name="curve validate")

    rr = sub.add_parser("rr").add_subparsers(dest="cmd", required=True)
    rb = rr.add_parser("basis")
    rb.add_argument("curve")
    rb.add_argument("--divisor", required=True)
    rb.set_defaults(handler=_cmd_rr_basis, name="rr basis")

    ext = sub.add_parser("ext").add_subparsers(dest="cmd", required=True)
    ed = ext.add_parser("det")
    ed.add_argument("file")
    ed.set_defaults(handler=_cmd_ext_det, name="ext det")
    ep = ext.add_parser("prop1")
    ep.add_argument("file")
    ep.add_argument("--L")
    ep.add_argument("--M")
    ep.set_defaults(handler=_cmd_ext_prop1, name="ext prop1")
    es = ext.add_parser("search")
    es.add_argument("file")
    es.set_defaults(handler=_cmd_ext_search, name="ext search")
    eb = ext.add_parser("destab")
    eb.add_argument("file")
    grp = eb.add_mutually_exclusive_group()
    grp.add_argument("--max-degree", type=int, dest="max_degree")
    grp.add_argument("--points")
    eb.set_defaults(handler=_cmd_ext_destab, name="ext destab")

    sec = sub.add_parser("secant").add_subparsers(dest="cmd", required=True)
    sm = sec.add_parser("member")
    sm.add_argument("file")
    sm.add_argument("--d", type=int)
    sm.set_defaults(handler=_cmd_secant_member, name="secant member")
    se = sec.add_parser("experiment")
    se.add_argument("curve")
    se.add_argument("--n", type=int, required=True)
    se.add_argument("--dim", type=int, required=True)
    se.add_argument("--trials", type=int, required=True)
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("--threads", type=int, default=1)
    se.set_defaults(handler=_cmd_secant_experiment, name="secant experiment")

    bnd = sub.add_parser("bounds").add_subparsers(dest="cmd", required=True)
    bm = bnd.add_parser("m")
    bm.add_argument("curve")
    bm.add_argument("--divisor", required=True)
    bm.set_defaults(handler=_cmd_bounds_m, name="bounds m")
    bd = bnd.add_parser("delta0")
    bd.add_argument("--n", type=int, required=True)
    bd.add_argument("--g", type=int, required=True)
    bd.add_argument("--m", type=int, required=True)
    bd.set_defaults(handler=_cmd_bounds_delta0, name="bounds delta0")
    bt = bnd.add_parser("theorem2")
    bt.add_argument("--n", type=int, required=True)
    bt.add_argument("--g", type=int, required=True)
    bt.add_argument("--m", type=int, required=True)
    bt.add_argument("--degF", type=int, required=True)
    bt.add_argument("--c1sq", required=True)
    bt.add_argument("--k", type=int, required=True)
    bt.set_defaults(handler=_cmd_bounds_theorem2, name="bounds theorem2")
    return p


def _human_table(report: dict, wall: float, stream) -> None:
    rows = [("command", report["command"])]
    for key in sorted(report["result"]):
        val = report["result"][key]
        if isinstance(val, (dict, list)):
            val = json.dumps(val, sort_keys=True)
        rows.append((key, val))
    if report["witnesses"]:
        rows.append(("witnesses", json.dumps(report["witnesses"], sort_keys=True)))
    rows.append(("wall_seconds", f"{wall:.3f}"))
    width = max(len(k) for k, _ in rows)
    for k, v in rows:
        print(f"{k:<{width}}  {v}", file=stream)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    start = time.perf_counter()
    name = "curvext"
    inputs = {}
    try:
        args = _build_parser().parse_args(argv)
        name = args.name
        result, witnesses, timings = args.handler(args, inputs)
        code = 0
    except NotApplicable as exc:
        result = {"status": "not-applicable", "message": str(exc)}
        witnesses, timings, code = [], {}, 2
    except ExhaustionError as exc:
        result = {"status": "exhausted", "message": str(exc)}
        witnesses, timings, code = [], {}, 2
    except CurvextError as exc:
        result = {"status": "input-error", "message": str(exc)}
        witnesses, timings, code = [], {}, 1
    report = {"command": name, "inputs": inputs, "result": result,
              "witnesses": witnesses, "timings": timings}
    json.dump(report, sys.stdout, sort_keys=True, separators=(",", ": "),
              indent=1)
    sys.stdout.write("\n")
    _human_table(report, time.perf_counter() - start, sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
