"""Command line front end: ``cf <instance> --terms ...`` and ``cf examples``.

Exit codes: 0 success, 2 invalid input, 3 internal invariant violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import body2d as bd
from . import fn1d
from ._num import INF, fmt, parse_number
from .body2d import Ball, ConvexBody2
from .core import (InvalidInput, InvalidParameters, TermSequence, approximant_trace)
from .criteria import (FAILS, HOLDS, ConditionReport, check_monotone, check_uniform_simple,
                       check_urr, fixed_point_residual)
from .scalar import SCALAR, seidel_stern_verdict
from .setcf import (SETS, check_constant_theorem, check_nec_suf, periodic_two_condition,
                    polar_lipschitz_check, three_segment_condition)

EXIT_OK, EXIT_INPUT, EXIT_INVARIANT = 0, 2, 3


class SchemaError(ValueError):
    """Malformed term specification; the message names the offending field."""


class InvariantViolation(RuntimeError):
    pass


# -- number and value serialisation -----------------------------------------

def dump_number(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return x


def _number(v, where: str):
    try:
        return parse_number(v)
    except (ValueError, TypeError):
        raise SchemaError(f"{where}: expected a number, got {v!r}") from None


def _point(v, where: str):
    if not isinstance(v, (list, tuple)) or len(v) != 2:
        raise SchemaError(f"{where}: expected [x, y]")
    return (_number(v[0], f"{where}[0]"), _number(v[1], f"{where}[1]"))


def parse_body(obj, where: str = "term"):
    if not isinstance(obj, dict) or len(obj) != 1:
        raise SchemaError(f"{where}: expected one of polygon, ball, segment, strip")
    (kind, val), = obj.items()
    try:
        if kind == "ball":
            r = _number(val, f"{where}.ball")
            if r < 0:
                raise SchemaError(f"{where}.ball: radius must be >= 0")
            return Ball(r)
        if kind == "segment":
            if not isinstance(val, list) or len(val) != 2:
                raise SchemaError(f"{where}.segment: expected two points")
            return bd.segment(_point(val[0], f"{where}.segment[0]"), _point(val[1], f"{where}.segment[1]"))
        if kind == "strip":
            return bd.strip(_number(val, f"{where}.strip"))
        if kind == "polygon":
            if not isinstance(val, dict) or "vertices" not in val:
                raise SchemaError(f"{where}.polygon: expected {{'vertices': [...], 'rays': [...]}}")
            vs = [_point(p, f"{where}.polygon.vertices[{i}]") for i, p in enumerate(val["vertices"])]
            rs = [_point(p, f"{where}.polygon.rays[{i}]") for i, p in enumerate(val.get("rays", []))]
            return bd.polygon(vs, rs)
    except SchemaError:
        raise
    except ValueError as exc:
        raise SchemaError(f"{where}.{kind}: {exc}") from None
    raise SchemaError(f"{where}: unknown body kind {kind!r}")


def dump_body(K) -> dict:
    if isinstance(K, Ball):
        return {"ball": dump_number(K.radius)}
    # hull points keep the origin when it is extreme, so the dump re-parses
    return {"polygon": {"vertices": [[dump_number(c) for c in v] for v in K.hull_points()],
                        "rays": [[dump_number(c) for c in w] for w in K.rays]}}


def parse_fn(obj, where: str = "term"):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected an object")
    try:
        if "quad" in obj:
            return fn1d.quadratic(_number(obj["quad"], f"{where}.quad"))
        if "hp" in obj:
            grid = obj.get("grid", 2000)
            if not isinstance(grid, int) or grid < 1:
                raise SchemaError(f"{where}.grid: expected a positive integer")
            return fn1d.h_p_construct(float(_number(obj["hp"], f"{where}.hp")), grid).fn
        if "pl" in obj:
            spec = obj["pl"]
            if not isinstance(spec, dict) or "points" not in spec:
                raise SchemaError(f"{where}.pl: expected {{'points': [...], ...}}")
            pts = [_point(p, f"{where}.pl.points[{i}]") for i, p in enumerate(spec["points"])]
            left = _number(spec.get("left_slope", "inf"), f"{where}.pl.left_slope")
            right = _number(spec.get("right_slope", "inf"), f"{where}.pl.right_slope")
            return fn1d.pl(pts, left, right)
        if "plq" in obj:
            spec = obj["plq"]
            lo = _number(spec["lo"], f"{where}.plq.lo")
            hi = _number(spec["hi"], f"{where}.plq.hi")
            knots = tuple(_number(t, f"{where}.plq.knots[{i}]") for i, t in enumerate(spec.get("knots", [])))
            pieces = tuple(tuple(_number(c, f"{where}.plq.pieces[{i}]") for c in pc)
                           for i, pc in enumerate(spec["pieces"]))
            return fn1d.ConvexFn1(lo, hi, knots, pieces).check()
    except SchemaError:
        raise
    except (KeyError, TypeError) as exc:
        raise SchemaError(f"{where}: missing or malformed field {exc}") from None
    except ValueError as exc:
        raise SchemaError(f"{where}: {exc}") from None
    raise SchemaError(f"{where}: expected one of pl, quad, hp, plq")


def dump_fn(f: fn1d.ConvexFn1) -> dict:
    if not f.is_pl:
        return {"plq": {"lo": dump_number(f.lo), "hi": dump_number(f.hi),
                        "knots": [dump_number(t) for t in f.knots],
                        "pieces": [[dump_number(c) for c in pc] for pc in f.pieces]}}
    pts = sorted({t for t in f.breaks if abs(t) != INF} or {Fraction(0)})
    left = f.pieces[0][1] if f.lo == -INF else INF
    right = f.pieces[-1][1] if f.hi == INF else INF
    return {"pl": {"points": [[dump_number(x), dump_number(f(x))] for x in pts],
                   "left_slope": dump_number(left), "right_slope": dump_number(right)}}


# -- instances ----------------------------------------------------------------

@dataclass
class Instance:
    name: str
    sg: object
    parse: object
    dump: object
    r_column: object


INSTANCES = {
    "scalar": Instance("scalar", SCALAR, lambda v, w: _scalar_term(v, w), lambda x: _json_num(x),
                       lambda x: x),
    "set": Instance("set", SETS, parse_body, dump_body, bd.inradius_centered),
    "func-lf": Instance("func-lf", fn1d.LF, parse_fn, dump_fn, lambda f: fn1d.quad_bounds(f).r),
    "func-a": Instance("func-a", fn1d.A_ABS, parse_fn, dump_fn,
                       lambda f: fn1d.ratio_bounds(f, fn1d.A_ABS.h).r),
}


def _scalar_term(v, where):
    x = _number(v, where)
    if x != x or x < 0:
        raise SchemaError(f"{where}: scalar terms must lie in [0, inf]")
    return x


@dataclass
class RunSpec:
    instance: str
    terms: list
    mode: str = "finite"
    max_iter: int = 60
    tol: float = 1e-9
    checks: list = field(default_factory=list)
    fmt: str = "csv"
    output: str | None = None


def load_terms_json(text: str):
    """Inline JSON, or a path to a JSON file when the text names one."""
    if not text.lstrip().startswith(("[", "{", '"')) and Path(text).is_file():
        text = Path(text).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"--terms: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_terms(inst: Instance, raw, mode: str) -> TermSequence:
    if mode == "const" and not isinstance(raw, list):
        raw = [raw]
    if not isinstance(raw, list) or not raw:
        raise SchemaError("--terms: expected a nonempty JSON list of terms")
    items = [inst.parse(v, f"terms[{i}]") for i, v in enumerate(raw)]
    for x in items:
        try:
            inst.sg.validate(x)
        except InvalidInput as exc:
            raise SchemaError(str(exc)) from None
    if mode == "const":
        if len(items) != 1:
            raise SchemaError("--const expects exactly one term")
        return TermSequence.constant(items[0])
    if mode == "periodic":
        return TermSequence.periodic(items)
    return TermSequence.finite(items)


DEFAULT_CHECKS = {
    ("set", "const"): ["nec-suf", "constant-theorem", "monotone"],
    ("func-lf", "const"): ["legendre-theorem", "monotone"],
}


def _uniform_bounds(inst, terms: TermSequence):
    pairs = [inst.sg.bounds(x) for x in terms.items]
    return min(r for r, _ in pairs), max(R for _, R in pairs)


def run_check(name: str, inst: Instance, terms: TermSequence, trace, spec: RunSpec) -> ConditionReport:
    sg = inst.sg
    if name == "monotone":
        rep = check_monotone(sg, trace, spec.tol)
        if rep.verdict == FAILS:
            raise InvariantViolation(f"approximants are not monotone: {rep.certificates[:4]}")
        return rep
    if name == "urr":
        r, R = _uniform_bounds(inst, terms)
        if not r > 0:
            raise InvalidParameters("urr needs terms with a positive lower bound r")
        return check_urr(r, R, sg.profile)
    if name == "uniform-simple":
        r, R = _uniform_bounds(inst, terms)
        if not r > 0:
            raise InvalidParameters("uniform-simple needs terms with a positive lower bound r")
        return check_uniform_simple(r, R, sg.exact_xh)
    if name == "seidel-stern" and inst.name == "scalar":
        return seidel_stern_verdict(terms, spec.max_iter, spec.tol)
    if name in ("nec-suf", "constant-theorem") and inst.name == "set":
        if terms.mode != "periodic" or terms.period != 1:
            raise InvalidParameters(f"{name} needs a constant term (--const)")
        K = terms.items[0]
        return check_nec_suf(K, max(1, (spec.max_iter + 1) // 2)) if name == "nec-suf" else check_constant_theorem(K)
    if name == "periodic-two" and inst.name == "set":
        if terms.period != 2:
            raise InvalidParameters("periodic-two needs --periodic with two terms")
        return periodic_two_condition(*terms.items)
    if name == "three-segments" and inst.name == "set":
        if terms.period != 3:
            raise InvalidParameters("three-segments needs --periodic with three segments")
        us = []
        for K in terms.items:
            if not isinstance(K, ConvexBody2) or len(K.vertices) != 2 or K.rays:
                raise InvalidParameters("three-segments needs centred segment terms")
            us.append(max(K.vertices))
        return three_segment_condition(*us)
    if name == "legendre-theorem" and inst.name == "func-lf":
        if terms.period != 1:
            raise InvalidParameters("legendre-theorem needs a constant term (--const)")
        return fn1d.check_legendre_theorem(terms.items[0])
    if name == "a-xh" and inst.name == "func-a":
        return fn1d.check_a_xh(terms.items[0], sg.h)
    raise InvalidParameters(f"check {name!r} is not available for instance {inst.name!r}")


def _rows(inst: Instance, trace, terms: TermSequence):
    const = terms.mode == "periodic" and terms.period == 1
    rows = []
    for e in trace.entries:
        res = fixed_point_residual(inst.sg, e.z, terms.items[0]) if const else None
        rows.append({"n": e.n, "gap": e.gap, "norm": e.norm, "inradius_or_r": inst.r_column(e.z),
                     "residual": res})
    return rows


CSV_HEADER = ["n", "gap", "norm", "inradius-or-r", "residual"]


def render_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r["n"], fmt(r["gap"]), fmt(r["norm"]), fmt(r["inradius_or_r"]), fmt(r["residual"])])
    return buf.getvalue()


def _json_num(x):
    return "nan" if x is None else dump_number(x) if not isinstance(x, Fraction) else float(x)


def run(spec: RunSpec, out=None) -> int:
    out = out or sys.stdout
    inst = INSTANCES[spec.instance]
    terms = parse_terms(inst, spec.terms, spec.mode)
    N = spec.max_iter if spec.mode != "finite" else min(spec.max_iter, terms.available)
    trace = approximant_trace(inst.sg, terms, N, spec.tol)
    checks = spec.checks or DEFAULT_CHECKS.get((spec.instance, spec.mode), [])
    reports = [run_check(c, inst, terms, trace, spec).to_dict() for c in checks]
    rows = _rows(inst, trace, terms)
    summary = {"instance": spec.instance, "verdict": trace.verdict, "N": N, "tol": spec.tol,
               "events": trace.events,
               "limit": inst.dump(trace.limit_estimate) if trace.limit_estimate is not None else None}
    if spec.fmt == "json":
        doc = dict(summary, trace=[{k: _json_num(v) for k, v in r.items()} for r in rows], reports=reports)
        text = json.dumps(doc, indent=2) + "\n"
        _emit(text, spec.output, out)
    else:
        _emit(render_csv(rows), spec.output, out)
        report_doc = json.dumps(dict(summary, reports=reports), indent=2) + "\n"
        if spec.output:
            Path(spec.output + ".report.json").write_text(report_doc)
        else:
            sys.stderr.write(report_doc)
    return EXIT_OK


def _emit(text: str, path, out):
    if path:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)


# -- named examples -----------------------------------------------------------

def _ex_ball(p):
    r = float(p.get("r", 3))
    tr = approximant_trace(SETS, TermSequence.constant(Ball(r)), int(p.get("N", 60)), 1e-9)
    expected = 0.5 * (math.sqrt(r * r + 4) - r)
    radius = tr.limit_estimate.radius if tr.limit_estimate is not None else None
    ok = tr.verdict == "converged" and abs(radius - expected) < 1e-9
    return ok, {"verdict": tr.verdict, "radius": radius, "expected": expected,
                "residual": fixed_point_residual(SETS, tr.limit_estimate, Ball(r)) if radius else None}


def _ex_segment(p):
    K = bd.segment((0, 0), (_number(p.get("length", 1), "length"), 0))
    tr = approximant_trace(SETS, TermSequence.constant(K), int(p.get("N", 40)), 1e-9)
    ns = check_nec_suf(K, 20)
    return tr.verdict == "diverged-oscillating" and ns.verdict == FAILS, \
        {"verdict": tr.verdict, "nec_suf": ns.verdict}


def _ex_strip(p):
    a = _number(p.get("a", 1), "a")
    tr = approximant_trace(SETS, TermSequence.constant(bd.strip(a)), int(p.get("N", 60)), 1e-9)
    ns = check_nec_suf(bd.strip(a), 20)
    return tr.verdict == "converged" and ns.verdict == HOLDS, \
        {"verdict": tr.verdict, "nec_suf": ns.verdict, "nec_suf_k": ns.details["k"],
         "limit": dump_body(tr.limit_estimate) if tr.limit_estimate else None}


def _ex_seidel(p):
    K = bd.segment((-1, 0), (1, 0))
    L = bd.segment((-1, -1), (1, 1))
    tr = approximant_trace(SETS, TermSequence.periodic([K, L]), int(p.get("N", 60)), 1e-9)
    return tr.verdict == "diverged-oscillating", {"verdict": tr.verdict, "term_norm_sum": "inf"}


def _ex_three(p):
    L = float(p.get("L", math.sqrt(2)))
    from .setcf import segments_at_120
    us = segments_at_120(L)
    rep = three_segment_condition(*us)
    segs = [bd.segment((-u[0], -u[1]), u) for u in us]
    tr = approximant_trace(SETS, TermSequence.periodic(segs), int(p.get("N", 100)), 1e-8)
    ok = rep.details["identity_error"] < 1e-9
    return ok, {"condition": rep.verdict, "max_a": rep.details["max_a"], "trace_verdict": tr.verdict,
                "identity_error": rep.details["identity_error"]}


def _ex_quadratic(p):
    c = _number(p.get("c", 2), "c")
    f = fn1d.quadratic(c)
    tr = approximant_trace(fn1d.LF, TermSequence.constant(f), int(p.get("N", 60)), 1e-9)
    gamma = 0.5 * (math.sqrt(float(c) ** 2 + 4) - float(c))
    got = float(tr.limit_estimate.pieces[0][0]) * 2 if tr.limit_estimate is not None else None
    rep = fn1d.check_legendre_theorem(f)
    return tr.verdict == "converged" and got is not None and abs(got - gamma) < 1e-6, \
        {"verdict": tr.verdict, "gamma": got, "expected": gamma, "legendre_theorem": rep.verdict}


def _ex_hp(p):
    q = float(p.get("p", 1))
    s = fn1d.h_p_construct(q, int(p.get("grid", 2000)))
    g = fn1d.a_transform(s.fn)
    if q == 1:
        res = fn1d.rho_wrt(g, s.fn, s.fn)
        return res <= 1e-12, {"residual": float(res), "bound": 0.0}
    c = q / (q - 1)
    lo, hi = 1.5 * c / s.extent, c / 0.1
    worst = 0.0
    for i in range(201):
        x = lo * (hi / lo) ** (i / 200)
        ystar = c / x
        allowed = fn1d.h_p_exact(q, x) * s.bound / fn1d.h_p_exact(q, ystar)
        worst = max(worst, abs(g(x) - fn1d.h_p_exact(q, x)) / allowed)
    return worst <= 10, {"worst_error_over_bound": worst, "bound": s.bound}


def _ex_polar_fuzz(p):
    rng = random.Random(int(os.environ.get("CF_SEED", "0")))
    n = int(p.get("n", 50))
    worst, bad = INF, 0
    for _ in range(n):
        K, L = random_polytope(rng), random_polytope(rng)
        rep = polar_lipschitz_check(K, L)
        if rep.verdict == FAILS:
            bad += 1
        worst = min(worst, rep.details.get("slack", INF))
    return bad == 0, {"pairs": n, "violations": bad, "min_slack": worst}


def random_polytope(rng: random.Random, k_max: int = 7, den: int = 8) -> ConvexBody2:
    """Random rational polygon containing the square [-1/2, 1/2]^2 (hence B/2)."""
    k = rng.randint(3, k_max)
    pts = [(Fraction(rng.randint(-3 * den, 3 * den), den), Fraction(rng.randint(-3 * den, 3 * den), den))
           for _ in range(k)]
    h = Fraction(1, 2)
    pts += [(h, h), (-h, h), (-h, -h), (h, -h)]
    return bd.polygon(pts)


EXAMPLES = {
    "ball": (_ex_ball, "constant disk term rB: limit radius (sqrt(r^2+4)-r)/2 [r=3]"),
    "segment": (_ex_segment, "constant segment [0,(1,0)]: segments and halfplanes alternate"),
    "strip": (_ex_strip, "constant strip |x1| <= a: converges though the constant-term test fails [a=1]"),
    "seidel-counterexample": (_ex_seidel, "two centred segments alternating: diverges"),
    "three-segments": (_ex_three, "three centred segments at 120 degrees [L]"),
    "quadratic-function": (_ex_quadratic, "constant term c x^2/2 under Legendre-Fenchel [c=2]"),
    "hp-selfpolar": (_ex_hp, "h_p is a fixed point of the A-transform [p=1]"),
    "polar-lipschitz-fuzz": (_ex_polar_fuzz, "random rational polygon pairs, seeded by CF_SEED [n=50]"),
}


def examples_run(name: str, params: dict, out=None) -> int:
    out = out or sys.stdout
    if name not in EXAMPLES:
        raise SchemaError(f"unknown example {name!r}; see 'cf examples --list'")
    ok, info = EXAMPLES[name][0](params)
    doc = {"example": name, "params": params, "expected_verdict_met": ok,
           "result": {k: (_json_num(v) if isinstance(v, (int, float, Fraction)) else v) for k, v in info.items()}}
    out.write(json.dumps(doc, indent=2) + "\n")
    if not ok:
        raise InvariantViolation(f"example {name} did not reproduce its documented verdict")
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cf", description="Continued fractions of numbers, convex sets and convex functions.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in INSTANCES:
        p = sub.add_parser(name, help=f"run a continued fraction in the {name} instance")
        p.add_argument("--terms", required=True, help="JSON list of terms (inline or a file path)")
        mode = p.add_mutually_exclusive_group()
        mode.add_argument("--const", action="store_true", help="repeat the single term forever")
        mode.add_argument("--periodic", action="store_true", help="repeat the term list as a cycle")
        p.add_argument("--max-iter", type=int, default=60)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--check", default="", help="comma separated criterion names")
        p.add_argument("--output", default=None)
        p.add_argument("--format", choices=["csv", "json"], default="csv")
    ex = sub.add_parser("examples", help="list or run the named examples")
    g = ex.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--run", metavar="NAME")
    ex.add_argument("--param", action="append", default=[], metavar="KEY=VALUE")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        if args.command == "examples":
            if args.list:
                for name, (_, doc) in EXAMPLES.items():
                    print(f"{name}\t{doc}")
                return EXIT_OK
            params = {}
            for kv in args.param:
                if "=" not in kv:
                    raise SchemaError(f"--param expects KEY=VALUE, got {kv!r}")
                k, v = kv.split("=", 1)
                params[k] = v
            return examples_run(args.run, params)
        if args.max_iter < 2:
            raise SchemaError("--max-iter must be at least 2")
        mode = "const" if args.const else "periodic" if args.periodic else "finite"
        spec = RunSpec(args.command, load_terms_json(args.terms), mode, args.max_iter, args.tol,
                       [c.strip() for c in args.check.split(",") if c.strip()], args.format, args.output)
        return run(spec)
    except (SchemaError, InvalidInput, InvalidParameters) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
