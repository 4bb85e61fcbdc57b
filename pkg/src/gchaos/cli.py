"""``gchaos`` command line.

Every analysis prints a human-readable summary and, with ``--json PATH``
(``-`` for stdout), a machine report.  Machine reports carry the tool
version and every parameter, and no timing or worker count, so reruns with
the same inputs are byte-identical.

Exit codes: 0 success, 2 parse or usage error, 3 invalid system,
4 resource cap, 5 internal error.
"""

from __future__ import annotations

import argparse
import os
import re
import sys as _sys
import time
from fractions import Fraction

from . import __version__
from . import presets
from .chaos import Params, analyze_pair, lift_to_power, scan_scrambled, verify_witness
from .covering import (
    DEFAULT_DEPTH,
    scrambled_from_covering,
    search_covering,
    verify_covering,
)
from .errors import GChaosError, ParseError
from .group import format_word
from .gspace import (
    GSystem,
    check_action,
    check_common_fixed_point,
    check_equivariance,
    check_g_recurrent,
    check_g_transitivity,
    check_periodic_common_point,
)
from .plmap import MAX_BREAKPOINTS, as_rational, format_rational
from .serialize import (
    dump_certificate,
    dump_system,
    dumps,
    load_certificate,
    load_system,
    plain,
    profile_csv,
    report_doc,
    system_to_doc,
)

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_CAP, EXIT_INTERNAL = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _q(x) -> str:
    return format_rational(Fraction(x))


def _rat(text: str) -> Fraction:
    try:
        return as_rational(text)
    except (ParseError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _item(item):
    """Fixed-point item: a rational or a closed interval."""
    if isinstance(item, tuple):
        return {"interval": [item[0], item[1]]}
    return item


def _item_text(item) -> str:
    if isinstance(item, tuple):
        return f"[{_q(item[0])}, {_q(item[1])}]"
    return _q(item)


def resolve_system(ref: str) -> GSystem:
    """A path to a system file, or a preset name."""
    if os.path.isfile(ref):
        with open(ref, encoding="utf-8") as fh:
            text = fh.read()
        return load_system(text, default_name=os.path.splitext(os.path.basename(ref))[0])
    if ref in presets.PRESETS:
        return presets.load(ref)
    raise UsageError(f"{ref!r} is neither a system file nor a preset ({', '.join(sorted(presets.PRESETS))})")


class Output:
    """Collects human text; writes the machine report when asked."""

    def __init__(self, args):
        self.json_path = getattr(args, "json", None)
        self.quiet = self.json_path == "-"
        self.t0 = time.perf_counter()

    def say(self, text: str = ""):
        if not self.quiet:
            print(text)

    def finish(self, kind: str, system: str, parameters: dict, result: dict):
        if not self.quiet:
            print(f"elapsed: {time.perf_counter() - self.t0:.3f}s")
        if self.json_path is None:
            return
        text = dumps(report_doc(kind, system, parameters, result, __version__))
        if self.json_path == "-":
            _sys.stdout.write(text)
        else:
            with open(self.json_path, "w", encoding="utf-8") as fh:
                fh.write(text)


def _params(args) -> Params:
    return Params(args.eps, args.delta, args.window, args.horizon, args.radius, args.beam)


def _params_doc(p: Params) -> dict:
    return plain(p.as_dict())


def _verdict_doc(v) -> dict:
    return {
        "classification": v.classification,
        "tail_min": v.tail_min,
        "tail_max": v.tail_max,
        "argmin_n": v.argmin_n,
        "argmax_n": v.argmax_n,
    }


def _profile_doc(prof) -> list:
    return [
        {"n": r.n, "m": r.m, "M": r.M, "argmin": format_word(r.argmin), "argmax": format_word(r.argmax)}
        for r in prof.rows
    ]


def _witness_doc(sys, ws) -> dict | None:
    if ws is None:
        return None
    return {
        "words": [format_word(w) for w in ws.words],
        "proximal": list(ws.proximal),
        "separated": list(ws.separated),
        "verified": verify_witness(sys, ws),
    }


# -- subcommands


def cmd_define(args) -> int:
    out = Output(args)
    sys = resolve_system(args.system)
    action = check_action(sys)
    eq = check_equivariance(sys)
    out.say(f"system {sys.name or args.system}: {sys.space.kind} space, {len(sys.generators)} generator(s)")
    if action.ok:
        out.say("action: valid (every generator is a homeomorphism with exact inverse)")
    else:
        for name, reason in action.failures:
            out.say(f"action: INVALID, generator {name}: {reason}")
    if eq.equivariant:
        out.say(f"equivariance: f commutes with every generator ({eq.method})")
    else:
        out.say(
            f"equivariance: NOT equivariant, witness {eq.generator} at x = {_q(eq.witness)}: "
            f"f({eq.generator}(x)) = {_q(eq.f_of_g)}, {eq.generator}(f(x)) = {_q(eq.g_of_f)}"
        )
    result = {
        "action_ok": action.ok,
        "action_failures": [list(f) for f in action.failures],
        "equivariant": eq.equivariant,
        "equivariance_method": eq.method,
        "witness": None if eq.equivariant else {
            "generator": eq.generator, "x": eq.witness, "f_of_g": eq.f_of_g, "g_of_f": eq.g_of_f,
        },
        "system": system_to_doc(sys),
    }
    out.finish("define", sys.name, {}, result)
    return EXIT_OK if action.ok else EXIT_INVALID


def cmd_preset(args) -> int:
    if args.name not in presets.PRESETS:
        raise UsageError(f"unknown preset {args.name!r}; choose from {', '.join(sorted(presets.PRESETS))}")
    text = dump_system(presets.load(args.name))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)
    return EXIT_OK


def _print_profile(out, prof):
    out.say(f"{'n':>4}  {'m_n':>14}  {'M_n':>14}  argmin / argmax")
    for r in prof.rows:
        out.say(f"{r.n:>4}  {_q(r.m):>14}  {_q(r.M):>14}  {format_word(r.argmin)} / {format_word(r.argmax)}")


def cmd_pair(args) -> int:
    out = Output(args)
    sys = resolve_system(args.system)
    if args.trivial_group:
        sys = sys.trivial_group()
    x, y = args.x, args.y
    if sys.space.normalize(x) == sys.space.normalize(y):
        raise UsageError("the pair needs two distinct points")
    p = _params(args).resolve(sys)
    prof, verdict, ws = analyze_pair(sys, x, y, p, workers=args.workers)
    params = _params_doc(p)
    params.update({"x": _q(x), "y": _q(y), "trivial_group": args.trivial_group, "power": args.power})
    out.say(f"pair ({_q(x)}, {_q(y)}) on {sys.name}: " + ", ".join(f"{k}={v}" for k, v in sorted(params.items())))
    out.say(f"profile: {'exact' if prof.exact else 'beam (heuristic)'} over ball radius {p.radius}")
    if args.table:
        _print_profile(out, prof)
    out.say(
        f"verdict: {verdict.classification} (tail min {_q(verdict.tail_min)} at n={verdict.argmin_n}, "
        f"tail max {_q(verdict.tail_max)} at n={verdict.argmax_n})"
    )
    if verdict.candidate:
        out.say("note: a candidate is a finite-horizon fact, not a proof of the limit property")
    wdoc = _witness_doc(sys, ws)
    if wdoc is not None:
        out.say(f"witness: P = {wdoc['proximal']}, S = {wdoc['separated']}, re-verified: {wdoc['verified']}")
    result = {"verdict": _verdict_doc(verdict), "exact": prof.exact, "profile": _profile_doc(prof), "witness": wdoc}
    if args.power:
        lift = lift_to_power(sys, x, y, args.power, p, workers=args.workers)
        out.say(
            f"power {args.power}: f -> {lift.base.classification}, f^{args.power} -> "
            f"{lift.lifted.classification}; preserved: {lift.preserved}; identical profiles: {lift.identical_profiles}"
        )
        if lift.caveat:
            out.say(lift.caveat)
        result["lift"] = {
            "power": lift.power,
            "equivariant": lift.equivariant,
            "base": _verdict_doc(lift.base),
            "lifted": _verdict_doc(lift.lifted),
            "preserved": lift.preserved,
            "identical_profiles": lift.identical_profiles,
            "caveat": lift.caveat,
            "lifted_profile": _profile_doc(lift.lifted_profile),
        }
    if args.csv:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(profile_csv(prof))
    out.finish("pair", sys.name, params, result)
    return EXIT_OK


def _samples(sys: GSystem, args) -> list:
    if args.samples:
        return [_rat(s) for s in args.samples.split(",")]
    if args.range:
        lo, hi = args.range
        return [lo + (hi - lo) * Fraction(k, args.count + 1) for k in range(1, args.count + 1)]
    return sys.space.grid(args.count)


def cmd_scan(args) -> int:
    out = Output(args)
    sys = resolve_system(args.system)
    if args.trivial_group:
        sys = sys.trivial_group()
    res = scan_scrambled(sys, _samples(sys, args), _params(args), workers=args.workers)
    params = _params_doc(res.params)
    params.update({"samples": [_q(s) for s in res.samples], "trivial_group": args.trivial_group})
    out.say(f"scan of {len(res.samples)} samples on {sys.name}: {', '.join(_q(s) for s in res.samples)}")
    pairs = []
    for (i, j), v in sorted(res.verdicts.items()):
        out.say(f"  ({i}, {j}) {v.classification}  tail min {_q(v.tail_min)}, tail max {_q(v.tail_max)}")
        pairs.append({"i": i, "j": j, **_verdict_doc(v)})
    out.say(f"greedy candidate clique: {list(res.clique)} (size {len(res.clique)})")
    out.finish("scan", sys.name, params, {"pairs": pairs, "clique": list(res.clique)})
    return EXIT_OK


def cmd_transitivity(args) -> int:
    out = Output(args)
    sys = resolve_system(args.system)
    res = check_g_transitivity(sys, args.grid, args.horizon, args.radius, workers=args.workers)
    params = {"delta": args.grid, "horizon": args.horizon, "radius": args.radius}
    out.say(f"G-transitivity on {sys.name}: {res.cells} cells of size {_q(args.grid)}, N={args.horizon}, L={args.radius}")
    out.say(f"reached {len(res.coverage)}/{res.cells * res.cells} cell pairs: {'PASS' if res.passed else 'FAIL'}")
    if res.unreached is not None:
        out.say(f"first unreached pair: {res.unreached}")
    out.say("note: checked on the whole declared space, not on an orbit closure")
    result = {
        "passed": res.passed,
        "cells": res.cells,
        "reached": len(res.coverage),
        "unreached": list(res.unreached) if res.unreached is not None else None,
        "coverage": [
            {"from": i, "to": j, "n": n, "word": format_word(w)} for (i, j), (n, w) in sorted(res.coverage.items())
        ],
    }
    out.finish("transitivity", sys.name, params, result)
    return EXIT_OK


def cmd_fixed(args) -> int:
    out = Output(args)
    sys = resolve_system(args.system)
    fixed = check_common_fixed_point(sys)
    periodic = check_periodic_common_point(sys, args.max_period, args.max_breakpoints)
    out.say(f"common fixed points of f and the group on {sys.name}: " + (", ".join(map(_item_text, fixed)) or "none"))
    for item, n in periodic:
        out.say(f"  period {n}: {_item_text(item)}")
    result = {
        "fixed": [_item(i) for i in fixed],
        "periodic": [{"item": _item(i), "period": n} for i, n in periodic],
    }
    out.finish("fixed", sys.name, {"max_period": args.max_period}, result)
    return EXIT_OK


def cmd_recurrent(args) -> int:
    out = Output(args)
    sys = resolve_system(args.system)
    eps = args.eps if args.eps is not None else sys.space.diameter / 100
    v = check_g_recurrent(sys, args.x, eps, args.horizon, args.radius)
    params = {"x": _q(args.x), "eps": eps, "horizon": args.horizon, "radius": args.radius}
    out.say(
        f"G-recurrence of {_q(v.point)} on {sys.name}: {'yes' if v.recurrent else 'no'} "
        f"(closest return {_q(v.distance)} at n={v.n} with {format_word(v.word)})"
    )
    result = {"recurrent": v.recurrent, "n": v.n, "word": format_word(v.word), "distance": v.distance}
    out.finish("recurrent", sys.name, params, result)
    return EXIT_OK


def _structure_doc(s) -> dict:
    return {
        "A": [list(a) for a in s.A],
        "B": [list(b) for b in s.B],
        "times": list(s.times),
        "words": [format_word(w) for w in s.words],
    }


def _covering_out(out, sys, s, verdict, args, params, kind):
    out.say(f"covering structure of depth {s.depth} on {sys.name}")
    for i in range(s.depth):
        out.say(f"  level {i}: n = {s.times[i]}, word = {format_word(s.words[i])}")
    if verdict.ok:
        out.say(f"verify: PASS (separation of A_k and B_k: {_q(verdict.separation)})")
    else:
        out.say(f"verify: FAIL at level {verdict.level}: {verdict.reason}")
    result = {
        "structure": _structure_doc(s),
        "ok": verdict.ok,
        "level": verdict.level,
        "reason": verdict.reason,
        "separation": verdict.separation,
    }
    if verdict.ok and getattr(args, "scramble", 0):
        rep = scrambled_from_covering(sys, s, args.scramble, workers=args.workers)
        out.say(f"scrambled cross-check with {args.scramble} codes:")
        for e in rep.enclosures:
            out.say(f"  {e.code}: [{_q(e.interval[0])}, {_q(e.interval[1])}]")
        for (i, j), v in sorted(rep.verdicts.items()):
            out.say(f"  ({i}, {j}) {v.classification}")
        result["scrambled"] = {
            "params": _params_doc(rep.params),
            "enclosures": [{"code": e.code, "interval": list(e.interval)} for e in rep.enclosures],
            "pairs": [{"i": i, "j": j, **_verdict_doc(v)} for (i, j), v in sorted(rep.verdicts.items())],
        }
    out.finish(kind, sys.name, params, result)


def cmd_covering_search(args) -> int:
    out = Output(args)
    sys = resolve_system(args.system)
    a, b = args.seeds
    s = search_covering(sys, args.depth, (a, b), args.radius, args.horizon)
    params = {"seeds": [a, b], "depth": args.depth, "radius": args.radius, "horizon": args.horizon}
    if s is None:
        out.say(f"no covering structure found on {sys.name} (depth {args.depth}, horizon {args.horizon}, L={args.radius})")
        out.finish("covering-search", sys.name, params, {"found": False})
        return EXIT_OK
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(dump_certificate(sys, s))
        out.say(f"certificate written to {args.output}")
    _covering_out(out, sys, s, verify_covering(sys, s), args, params, "covering-search")
    return EXIT_OK


def cmd_covering_verify(args) -> int:
    out = Output(args)
    with open(args.certificate, encoding="utf-8") as fh:
        sys, s = load_certificate(fh.read())
    verdict = verify_covering(sys, s)
    _covering_out(out, sys, s, verdict, args, {"certificate_depth": s.depth}, "covering-verify")
    return EXIT_OK if verdict.ok else EXIT_INVALID


# -- parser


def _add_json(p):
    p.add_argument("--json", metavar="PATH", help="write the machine report to PATH ('-' for stdout only)")


def _add_workers(p):
    p.add_argument("--workers", type=int, default=1, help="worker processes (results do not depend on it)")


def _add_chaos_params(p):
    p.add_argument("-N", "--horizon", type=int, default=64, help="time horizon (default 64)")
    p.add_argument("-L", "--radius", type=int, default=6, help="Cayley ball radius (default 6)")
    p.add_argument("--beam", type=int, default=None, help="beam width; default is exact ball search")
    p.add_argument("--eps", type=_rat, default=None, help="proximality threshold (default diam/100)")
    p.add_argument("--delta", type=_rat, default=None, help="separation threshold (default diam/4)")
    p.add_argument("-W", "--window", type=int, default=None, help="tail window (default N/2)")
    p.add_argument("--trivial-group", action="store_true", help="drop all generators (classical Li-Yorke)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gchaos", description="Exact G-Li-Yorke chaos analysis of PL G-systems.")
    ap.add_argument("--version", action="version", version=f"gchaos {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("define", help="validate a system file or preset")
    p.add_argument("system")
    _add_json(p)
    p.set_defaults(func=cmd_define)

    p = sub.add_parser("preset", help="print a preset system file")
    p.add_argument("name")
    p.add_argument("-o", "--output", help="write to a file instead of stdout")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("pair", help="distance profile and verdict for one pair")
    p.add_argument("system")
    p.add_argument("x", type=_rat)
    p.add_argument("y", type=_rat)
    _add_chaos_params(p)
    p.add_argument("--power", type=int, default=0, help="also compare with f^POWER")
    p.add_argument("--csv", metavar="PATH", help="write the profile as CSV")
    p.add_argument("--table", action="store_true", help="print the full profile")
    _add_json(p)
    _add_workers(p)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("scan", help="pairwise scan for a candidate scrambled set")
    p.add_argument("system")
    _add_chaos_params(p)
    p.add_argument("--samples", help="comma-separated sample points")
    p.add_argument("--range", nargs=2, type=_rat, metavar=("LO", "HI"), help="equispaced samples inside (LO, HI)")
    p.add_argument("--count", type=int, default=8, help="number of equispaced samples (default 8)")
    _add_json(p)
    _add_workers(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("transitivity", help="G-transitivity on a grid of cells")
    p.add_argument("system")
    p.add_argument("--grid", type=_rat, required=True, metavar="DELTA", help="cell size")
    p.add_argument("-N", "--horizon", type=int, default=16)
    p.add_argument("-L", "--radius", type=int, default=2)
    _add_json(p)
    _add_workers(p)
    p.set_defaults(func=cmd_transitivity)

    p = sub.add_parser("fixed", help="common fixed and periodic points")
    p.add_argument("system")
    p.add_argument("--max-period", type=int, default=4)
    p.add_argument("--max-breakpoints", type=int, default=MAX_BREAKPOINTS,
                   help=f"breakpoint cap for powers of f (default {MAX_BREAKPOINTS})")
    _add_json(p)
    p.set_defaults(func=cmd_fixed)

    p = sub.add_parser("recurrent", help="G-recurrence of a point")
    p.add_argument("system")
    p.add_argument("x", type=_rat)
    p.add_argument("--eps", type=_rat, default=None)
    p.add_argument("-N", "--horizon", type=int, default=64)
    p.add_argument("-L", "--radius", type=int, default=2)
    _add_json(p)
    p.set_defaults(func=cmd_recurrent)

    p = sub.add_parser("covering", help="covering-relation certificates")
    csub = p.add_subparsers(dest="action", required=True)
    q = csub.add_parser("search", help="search for a covering structure")
    q.add_argument("system")
    q.add_argument("--seeds", nargs=2, type=_rat, required=True, metavar=("A", "B"))
    q.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    q.add_argument("-L", "--radius", type=int, default=0)
    q.add_argument("--horizon", type=int, default=32, help="max time per level")
    q.add_argument("-o", "--output", help="write the certificate here")
    q.add_argument("--scramble", type=int, default=0, metavar="M", help="cross-check M code-family points")
    _add_json(q)
    _add_workers(q)
    q.set_defaults(func=cmd_covering_search)
    q = csub.add_parser("verify", help="re-check a certificate exactly")
    q.add_argument("certificate")
    q.add_argument("--scramble", type=int, default=0, metavar="M")
    _add_json(q)
    _add_workers(q)
    q.set_defaults(func=cmd_covering_verify)
    return ap


_NEGATIVE_RATIONAL = re.compile(r"-\d+/\d+")


def _protect_negatives(argv):
    # argparse reads "-1/5" as an option flag; a leading space keeps it positional
    return [" " + a if _NEGATIVE_RATIONAL.fullmatch(a) else a for a in argv]


def main(argv=None) -> int:
    ap = build_parser()
    argv = _protect_negatives(_sys.argv[1:] if argv is None else list(argv))
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gchaos: error: {exc}", file=_sys.stderr)
        return EXIT_PARSE
    except GChaosError as exc:
        print(f"gchaos: {type(exc).__name__}: {exc}", file=_sys.stderr)
        return exc.exit_code
    except (ValueError, TypeError) as exc:
        print(f"gchaos: error: {exc}", file=_sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"gchaos: error: {exc}", file=_sys.stderr)
        return EXIT_PARSE
    except Exception as exc:  # pragma: no cover
        print(f"gchaos: internal error: {type(exc).__name__}: {exc}", file=_sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    _sys.exit(main())
