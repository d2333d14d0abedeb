"""Command-line front end.

Every report is a JSON object with sorted keys in which exact numbers are
decimal or p/q strings, so two runs on the same input are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from . import errors
from .coe import COEPair, Transducer, beta, paper_example, psi, verify_coe, xi
from .cohomology import LocallyConstantFn
from .invariants import DEFAULT_ORBIT_BOUND, bowen_franks, one_sided_floweq
from .shift import PeriodicOrbit, Point, ShiftSpace, format_word, orbits_up_to, parse_word, validate_shift
from .suspension import (
    SuspensionPoint,
    SuspensionTriplet,
    equivalent,
    normalize,
    orbit_length,
    retime,
    standard_triplet,
    validate_triplet,
)
from .zeta import zeta_det, zeta_series, zeta_series_det

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_NOT_EQUIVALENT = 3
EXIT_ORBIT_BOUND = 4
EXIT_NOT_ORDER_UNIT = 5
EXIT_COUNTEREXAMPLE = 6
EXIT_BELOW_BASE = 7

EXAMPLES = ("full2-goldenmean",)


class ParseError(Exception):
    """Malformed or unreadable input."""


@dataclass
class RunConfig:
    subcommand: str
    inputs: list
    max_order: int = 12
    depth: int = 10
    max_period: int = 8
    method: str = "exp"
    output_format: str = "json"
    orbit_bound: int = DEFAULT_ORBIT_BOUND

    def __post_init__(self):
        if self.max_order < 0 or self.depth < 1 or self.max_period < 1 or self.orbit_bound < 1:
            raise ParseError("need --max-order >= 0, --depth >= 1, --max-period >= 1, --orbit-bound >= 1")


# ---------------------------------------------------------------------------
# reading inputs

def load_json(source) -> object:
    """A path to a JSON file, or an inline JSON object/array."""
    if isinstance(source, (dict, list)):
        return source
    text = str(source)
    if not text.lstrip().startswith(("{", "[")):
        try:
            text = Path(text).read_text()
        except OSError as exc:
            raise ParseError(f"cannot read {source}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON in {source}: {exc}") from None


def _field(obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing field {key!r}")
    v = obj[key]
    if kind is not None and not isinstance(v, kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return v


def _rational(v) -> Fraction:
    if isinstance(v, bool) or not isinstance(v, (int, str)):
        raise ParseError(f"expected an integer or 'p/q' string, got {v!r}")
    try:
        return Fraction(v)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"bad rational {v!r}") from None


def parse_shift_obj(obj) -> ShiftSpace:
    """Parse {"n", "matrix"}; validation errors propagate."""
    matrix = _field(obj, "matrix", list)
    n = obj.get("n")
    if n is not None and (isinstance(n, bool) or not isinstance(n, int)):
        raise ParseError("field 'n' must be an integer")
    if not all(isinstance(r, list) and all(isinstance(a, int) and not isinstance(a, bool) for a in r)
               for r in matrix):
        raise ParseError("matrix must be a list of integer rows")
    return validate_shift(matrix, n)


def parse_point_obj(S: ShiftSpace, obj) -> Point:
    pre = _field(obj, "preperiod", str)
    per = _field(obj, "period", str)
    try:
        x = Point(parse_word(pre, S.n), parse_word(per, S.n))
    except errors.InvalidPoint as exc:
        raise ParseError(str(exc)) from None
    return S.check_point(x)


def parse_fn_obj(S: ShiftSpace, obj) -> LocallyConstantFn:
    if isinstance(obj, (int, str)) and not isinstance(obj, bool):
        return LocallyConstantFn.constant(S, _rational(obj))
    depth = _field(obj, "depth", int)
    table = _field(obj, "table", dict)
    integer = obj.get("integer")
    try:
        tab = {parse_word(w, S.n): _rational(v) for w, v in table.items()}
        return LocallyConstantFn(S, depth, tab, integer=integer)
    except errors.NotIntegerValued:
        raise
    except (ValueError, errors.InvalidPoint) as exc:
        raise ParseError(f"bad function table: {exc}") from None


def parse_transducer_obj(n_in: int, n_out: int, obj) -> Transducer:
    states = tuple(str(s) for s in _field(obj, "states", list))
    initial = str(_field(obj, "initial"))
    rules = {}
    for st, row in _field(obj, "transitions", dict).items():
        if not isinstance(row, dict):
            raise ParseError(f"transitions of state {st!r} must be an object")
        for sym, rule in row.items():
            try:
                (s,) = parse_word(sym, n_in)
                out = parse_word(str(_field(rule, "out")), n_out)
            except (ValueError, errors.InvalidPoint) as exc:
                raise ParseError(f"bad transition {st}/{sym}: {exc}") from None
            rules[(st, s)] = (out, str(_field(rule, "next")))
    if initial not in states or any(nxt not in states for _, nxt in rules.values()):
        raise ParseError("transducer refers to an undeclared state")
    return Transducer(states, initial, rules)


def parse_pair_obj(obj) -> COEPair:
    A = parse_shift_obj(_field(obj, "A"))
    B = parse_shift_obj(_field(obj, "B"))
    h = parse_transducer_obj(A.n, B.n, _field(obj, "h"))
    h_inv = parse_transducer_obj(B.n, A.n, _field(obj, "h_inv"))
    return COEPair(A, B, h, h_inv,
                   parse_fn_obj(A, _field(obj, "k1")), parse_fn_obj(A, _field(obj, "l1")),
                   parse_fn_obj(B, _field(obj, "k2")), parse_fn_obj(B, _field(obj, "l2")))


def parse_triplet_obj(S: ShiftSpace, obj) -> SuspensionTriplet:
    if obj == "standard":
        return standard_triplet(S)
    return validate_triplet(S, parse_fn_obj(S, _field(obj, "l")),
                            parse_fn_obj(S, _field(obj, "k")),
                            parse_fn_obj(S, obj.get("b", 0)))


def parse_suspension_point_obj(S: ShiftSpace, obj) -> SuspensionPoint:
    return SuspensionPoint(parse_point_obj(S, _field(obj, "point")), _rational(_field(obj, "height")))


# ---------------------------------------------------------------------------
# writing reports

def shift_json(S: ShiftSpace) -> dict:
    return {"n": S.n, "matrix": S.as_lists()}


def point_json(x: Point) -> dict:
    return {"preperiod": format_word(x.pre, sep=" "), "period": format_word(x.per, sep=" ")}


def fn_json(f: LocallyConstantFn) -> dict:
    n = f.shift.n
    return {"depth": f.depth, "integer": f.is_integer,
            "table": {format_word(w, n): str(v) for w, v in f.table.items()}}


def transducer_json(T: Transducer, n_in: int, n_out: int) -> dict:
    rows = {}
    for (st, s), (out, nxt) in sorted(T.transitions.items()):
        rows.setdefault(st, {})[format_word((s,), n_in)] = {"out": format_word(out, n_out), "next": nxt}
    return {"states": list(T.states), "initial": T.initial, "transitions": rows}


def pair_json(P: COEPair) -> dict:
    return {"A": shift_json(P.A), "B": shift_json(P.B),
            "h": transducer_json(P.h, P.A.n, P.B.n), "h_inv": transducer_json(P.h_inv, P.B.n, P.A.n),
            "k1": fn_json(P.k1), "l1": fn_json(P.l1), "k2": fn_json(P.k2), "l2": fn_json(P.l2)}


def triplet_json(T: SuspensionTriplet) -> dict:
    return {"l": fn_json(T.l), "k": fn_json(T.k), "b": fn_json(T.b)}


def canonical_json(p: SuspensionPoint, n: int) -> dict:
    return {"base": point_json(p.base), "height": str(p.height), "steps_n": n}


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def _text_lines(obj, prefix=""):
    if isinstance(obj, dict):
        for k in sorted(obj):
            yield from _text_lines(obj[k], f"{prefix}{k}." if not isinstance(obj[k], (str, int, bool, type(None)))
                                   else f"{prefix}{k}")
    elif isinstance(obj, list):
        if all(isinstance(v, (str, int)) for v in obj):
            yield f"{prefix.rstrip('.')}: [{', '.join(str(v) for v in obj)}]"
        else:
            for i, v in enumerate(obj):
                yield from _text_lines(v, f"{prefix}{i}.")
    else:
        yield f"{prefix}: {'null' if obj is None else obj}"


def render(report, output_format: str) -> str:
    if output_format == "json":
        return dumps(report)
    return "\n".join(_text_lines(report))


# ---------------------------------------------------------------------------
# built-in fixtures

def example_shifts(name: str):
    P = example_pair(name)
    return P.A, P.B


def example_pair(name: str) -> COEPair:
    if name != "full2-goldenmean":
        raise ParseError(f"unknown example {name!r}; available: {', '.join(EXAMPLES)}")
    return paper_example()


# ---------------------------------------------------------------------------
# subcommands; each returns (report, exit code)

def cmd_check(cfg: RunConfig):
    (path,) = cfg.inputs
    try:
        S = parse_shift_obj(load_json(path))
    except ValueError as exc:
        report = {"valid": False, "error": type(exc).__name__, "diagnostic": str(exc)}
        pair = getattr(exc, "pair", None)
        if pair is not None:
            report["unreachable"] = [str(a) for a in pair]
        return report, EXIT_INVALID
    return {"valid": True, **shift_json(S)}, EXIT_OK


def cmd_invariants(cfg: RunConfig):
    S = parse_shift_obj(load_json(cfg.inputs[0]))
    group, det = bowen_franks(S)
    return {"group": group.to_json(), "det": str(det), "n": S.n}, EXIT_OK


def cmd_floweq(cfg: RunConfig):
    SA, SB = (parse_shift_obj(load_json(p)) for p in cfg.inputs)
    ok, report = one_sided_floweq(SA, SB, cfg.orbit_bound)
    return report, EXIT_OK if ok else EXIT_NOT_EQUIVALENT


def cmd_zeta(cfg: RunConfig):
    shift_src, fn_src = cfg.inputs
    S = parse_shift_obj(load_json(shift_src))
    c = parse_fn_obj(S, _fn_source(fn_src))
    K = cfg.max_order
    report = {"method": cfg.method, "potential": fn_json(c)}
    code = EXIT_OK
    if cfg.method in ("exp", "both"):
        report["series"] = zeta_series(S, c, K).to_json()
    if cfg.method in ("det", "both"):
        den, valid = zeta_det(S, c)
        report["denominator"] = {"text": str(den), "terms": den.to_json(), "valid": valid}
        if not valid:
            raise errors.ShiftFlowError("determinant expansion needs a nonnegative potential")
        det_series = zeta_series_det(S, c, K).to_json()
        if cfg.method == "det":
            report["series"] = det_series
        else:
            report["det_series"] = det_series
            report["match"] = det_series == report["series"]
            if not report["match"]:
                code = EXIT_INVALID
    return report, code


def _fn_source(src):
    """A constant written inline, or a fn.json path / literal."""
    text = str(src).strip()
    try:
        Fraction(text)
        return text
    except (ValueError, ZeroDivisionError):
        return load_json(src)


def cmd_coe(cfg: RunConfig, pair_src, action, extra):
    P = pair_src if isinstance(pair_src, COEPair) else parse_pair_obj(load_json(pair_src))
    if action == "verify":
        rep = verify_coe(P, cfg.depth, cfg.max_period)
        return rep.to_json(), EXIT_OK if rep.passed else EXIT_COUNTEREXAMPLE
    if action == "psi":
        if len(extra) != 1:
            raise ParseError("psi needs exactly one potential")
        f = parse_fn_obj(P.B, _fn_source(extra[0]))
        return {"potential": fn_json(f), "psi": fn_json(psi(P, f))}, EXIT_OK
    if action == "orbits":
        if len(extra) > 1:
            raise ParseError("orbits takes at most one potential")
        f = parse_fn_obj(P.B, _fn_source(extra[0])) if extra else LocallyConstantFn.constant(P.B, 1)
        pf = psi(P, f)
        rows = []
        for g in orbits_up_to(P.A, cfg.max_period):
            img = xi(P, g)
            b1, b2 = beta(g, pf), beta(img, f)
            rows.append({"orbit": point_json(g.representative), "period": g.period,
                         "image": point_json(img.representative), "image_period": img.period,
                         "beta_psi_f": str(b1), "beta_f": str(b2), "equal": b1 == b2})
        return {"potential": fn_json(f), "max_period": cfg.max_period, "rows": rows}, EXIT_OK
    raise ParseError(f"unknown coe action {action!r}; use verify, psi or orbits")


def cmd_suspension(cfg: RunConfig, action, extra):
    shift_src, triplet_src = cfg.inputs
    S = parse_shift_obj(load_json(shift_src))
    tri = triplet_src if triplet_src == "standard" else load_json(triplet_src)
    T = parse_triplet_obj(S, tri)

    def need(k):
        if len(extra) != k:
            raise ParseError(f"suspension {action} takes {k} argument(s)")

    if action == "eval":
        need(2)
        p = parse_suspension_point_obj(S, load_json(extra[0]))
        t = _rational(extra[1])
        if t < 0:
            raise ParseError("flow time must be nonnegative")
        q, n = normalize(T, SuspensionPoint(p.base, p.height + t))
        return canonical_json(q, n), EXIT_OK
    if action == "length":
        need(1)
        x = parse_point_obj(S, load_json(extra[0]))
        if x.pre:
            raise ParseError("length needs a periodic point")
        g = PeriodicOrbit.of(x)
        return {"orbit": point_json(g.representative), "period": g.period,
                "length": str(orbit_length(T, g))}, EXIT_OK
    if action == "equiv":
        need(2)
        p, q = (parse_suspension_point_obj(S, load_json(e)) for e in extra)
        (cp, n_p), (cq, n_q) = normalize(T, p), normalize(T, q)
        return {"equivalent": equivalent(T, p, q),
                "p": canonical_json(cp, n_p), "q": canonical_json(cq, n_q)}, EXIT_OK
    if action == "retime":
        need(1)
        d = parse_fn_obj(S, _fn_source(extra[0]))
        T2, _ = retime(T, d)
        return {"triplet": triplet_json(T2), "c": fn_json(T2.c)}, EXIT_OK
    raise ParseError(f"unknown suspension action {action!r}; use eval, length, equiv or retime")


# ---------------------------------------------------------------------------
# argument parsing

def _global_flags(parser, defaults: bool):
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--format", dest="output_format", choices=("json", "text"), default=d("json"))
    parser.add_argument("--max-order", type=int, default=d(12), metavar="K")
    parser.add_argument("--depth", type=int, default=d(10), metavar="D")
    parser.add_argument("--max-period", type=int, default=d(8), metavar="P")
    parser.add_argument("--orbit-bound", type=int, default=d(DEFAULT_ORBIT_BOUND), metavar="N")
    parser.add_argument("--method", choices=("exp", "det", "both"), default=d("exp"))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="shiftflow", description=__doc__.splitlines()[0])
    _global_flags(ap, True)
    sub = ap.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, False)

    p = sub.add_parser("check", parents=[common], help="validate a shift matrix")
    p.add_argument("shift")
    p = sub.add_parser("invariants", parents=[common], help="pointed Bowen-Franks group and det(I - A)")
    p.add_argument("shift")
    p = sub.add_parser("floweq", parents=[common], help="decide one-sided flow equivalence")
    p.add_argument("shifts", nargs="*", metavar="shift")
    p.add_argument("--example", choices=EXAMPLES)
    p = sub.add_parser("zeta", parents=[common], help="zeta series of an integer potential")
    p.add_argument("shift")
    p.add_argument("potential", help="fn.json path, inline JSON, or a constant")
    p = sub.add_parser("coe", parents=[common], help="orbit-equivalence pair tools")
    p.add_argument("args", nargs="+", metavar="[pair] action [arg]")
    p.add_argument("--example", choices=EXAMPLES)
    p = sub.add_parser("suspension", parents=[common], help="one-sided suspension flow")
    p.add_argument("shift")
    p.add_argument("triplet", help="triplet.json path, inline JSON, or 'standard'")
    p.add_argument("action", choices=("eval", "length", "equiv", "retime"))
    p.add_argument("extra", nargs="*")
    return ap


_EXIT_FOR = (
    (errors.OrbitBoundExceeded, EXIT_ORBIT_BOUND),
    (errors.NotOrderUnit, EXIT_NOT_ORDER_UNIT),
    (errors.BelowBase, EXIT_BELOW_BASE),
)


def run(argv=None):
    """Parse argv and execute; returns (report or None, exit code, error
    message or None, output format)."""
    try:
        ns = build_parser().parse_args(argv)
    except SystemExit as exc:
        return None, int(exc.code or 0), None, "json"
    fmt = ns.output_format
    try:
        report, code = _dispatch(ns)
        return report, code, None, fmt
    except ParseError as exc:
        return None, EXIT_PARSE, str(exc), fmt
    except errors.ShiftFlowError as exc:
        code = next((c for kind, c in _EXIT_FOR if isinstance(exc, kind)), EXIT_INVALID)
        return None, code, f"{type(exc).__name__}: {exc}", fmt


def _dispatch(ns):
    sc = ns.subcommand
    cfg_args = dict(max_order=ns.max_order, depth=ns.depth, max_period=ns.max_period,
                    method=ns.method, output_format=ns.output_format, orbit_bound=ns.orbit_bound)
    if sc in ("check", "invariants"):
        cfg = RunConfig(sc, [ns.shift], **cfg_args)
        report, code = (cmd_check if sc == "check" else cmd_invariants)(cfg)
    elif sc == "floweq":
        if ns.example:
            if ns.shifts:
                raise ParseError("give either --example or two shift files")
            shifts = [shift_json(S) for S in example_shifts(ns.example)]
        elif len(ns.shifts) == 2:
            shifts = ns.shifts
        else:
            raise ParseError("floweq needs two shift files")
        report, code = cmd_floweq(RunConfig(sc, shifts, **cfg_args))
    elif sc == "zeta":
        report, code = cmd_zeta(RunConfig(sc, [ns.shift, ns.potential], **cfg_args))
    elif sc == "coe":
        args = list(ns.args)
        if ns.example:
            pair = example_pair(ns.example)
        elif len(args) >= 2:
            pair = args.pop(0)
        else:
            raise ParseError("coe needs a pair file (or --example) and an action")
        action, extra = args[0], args[1:]
        report, code = cmd_coe(RunConfig(sc, [pair], **cfg_args), pair, action, extra)
    else:
        report, code = cmd_suspension(RunConfig(sc, [ns.shift, ns.triplet], **cfg_args), ns.action, ns.extra)
    return report, code


def main(argv=None) -> int:
    report, code, message, fmt = run(argv)
    if report is not None:
        print(render(report, fmt))
    if message:
        print(f"shiftflow: {message}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
