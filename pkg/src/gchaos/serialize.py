"""System files, machine reports, covering certificates and profile CSV.

All documents are JSON with rationals written as ``"p/q"`` strings, so
nothing passes through floating point.

System file grammar::

    {
      "format": "gchaos-system/1",
      "name": "tent",                                  (optional)
      "space": {"interval": ["0", "1"]}  |  "circle",
      "dynamics": MAP,
      "generators": [{"name": "g1", "map": MAP}, ...]     (optional)
    }

    MAP := "identity" | {"pl": [["t0", "v0"], ["t1", "v1"], ...]}
                      | {"rotation": "p/q"}

PL maps list breakpoints with their values; the map interpolates linearly
between consecutive breakpoints, which must cover the whole interval.
"""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .covering import CoveringStructure
from .errors import InvalidSystemError, NotInvertibleError, ParseError
from .group import IDENTITY, GeneratorSet, IdentityMap, Rotation, format_word, parse_word
from .gspace import CircleSpace, GSystem, IntervalSpace
from .plmap import PLMap, as_rational, format_rational

SYSTEM_FORMAT = "gchaos-system/1"
CERT_FORMAT = "gchaos-covering/1"
REPORT_FORMAT = "gchaos-report/1"


def _q(x) -> str:
    return format_rational(Fraction(x))


# -- encoding


def encode_map(m) -> object:
    if isinstance(m, IdentityMap):
        return "identity"
    if isinstance(m, Rotation):
        return {"rotation": _q(m.angle)}
    if isinstance(m, PLMap):
        return {"pl": [[_q(t), _q(v)] for t, v in m.points]}
    raise TypeError(f"cannot encode {type(m).__name__}")


def system_to_doc(sys: GSystem) -> dict:
    if isinstance(sys.space, IntervalSpace):
        space = {"interval": [_q(sys.space.lo), _q(sys.space.hi)]}
    else:
        space = "circle"
    doc = {"format": SYSTEM_FORMAT, "space": space, "dynamics": encode_map(sys.dynamics)}
    if sys.name:
        doc["name"] = sys.name
    doc["generators"] = [
        {"name": n, "map": encode_map(m)} for n, m in zip(sys.generators.names, sys.generators.maps)
    ]
    return doc


def dumps(doc) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def dump_system(sys: GSystem) -> str:
    return dumps(system_to_doc(sys))


# -- decoding


def _rat(value, where: str) -> Fraction:
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise ParseError(f"{where}: expected a rational string 'p/q', got {value!r}")
    try:
        return as_rational(value)
    except (ParseError, ValueError, ZeroDivisionError, TypeError) as exc:
        raise ParseError(f"{where}: {exc}") from None


def _loads(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{what}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def decode_map(obj, where: str, circle: bool):
    if obj == "identity":
        return IDENTITY
    if not isinstance(obj, dict) or len(obj) != 1:
        raise ParseError(f"{where}: expected \"identity\", {{\"pl\": ...}} or {{\"rotation\": ...}}")
    (kind, body), = obj.items()
    if kind == "rotation":
        if not circle:
            raise InvalidSystemError(f"{where}: rotation maps need a circle space")
        return Rotation(_rat(body, f"{where}.rotation"))
    if kind == "pl":
        if circle:
            raise InvalidSystemError(f"{where}: PL maps are only supported on interval spaces")
        if not isinstance(body, list) or len(body) < 2:
            raise ParseError(f"{where}.pl: need at least two [t, v] points")
        pts = []
        for i, pair in enumerate(body):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"{where}.pl[{i}]: expected a [t, v] pair")
            pts.append((_rat(pair[0], f"{where}.pl[{i}][0]"), _rat(pair[1], f"{where}.pl[{i}][1]")))
        for i in range(1, len(pts)):
            if not pts[i - 1][0] < pts[i][0]:
                raise ParseError(f"{where}.pl[{i}]: breakpoints must strictly increase")
        try:
            return PLMap(pts)
        except ValueError as exc:
            raise InvalidSystemError(f"{where}: {exc}") from None
    raise ParseError(f"{where}: unknown map kind {kind!r}")


def system_from_doc(doc, default_name: str = "") -> GSystem:
    if not isinstance(doc, dict):
        raise ParseError("system: expected a JSON object")
    fmt = doc.get("format", SYSTEM_FORMAT)
    if fmt != SYSTEM_FORMAT:
        raise ParseError(f"format: unsupported {fmt!r}")
    unknown = set(doc) - {"format", "name", "space", "dynamics", "generators"}
    if unknown:
        raise ParseError(f"system: unknown fields {sorted(unknown)}")
    if "space" not in doc or "dynamics" not in doc:
        raise ParseError("system: 'space' and 'dynamics' are required")
    sp = doc["space"]
    if sp == "circle":
        space = CircleSpace()
    elif isinstance(sp, dict) and set(sp) == {"interval"}:
        ends = sp["interval"]
        if not isinstance(ends, list) or len(ends) != 2:
            raise ParseError("space.interval: expected [lo, hi]")
        lo, hi = _rat(ends[0], "space.interval[0]"), _rat(ends[1], "space.interval[1]")
        space = IntervalSpace(lo, hi)
    else:
        raise ParseError("space: expected \"circle\" or {\"interval\": [lo, hi]}")
    circle = isinstance(space, CircleSpace)
    f = decode_map(doc["dynamics"], "dynamics", circle)
    gens = doc.get("generators", [])
    if not isinstance(gens, list):
        raise ParseError("generators: expected a list")
    pairs = []
    for i, g in enumerate(gens):
        where = f"generators[{i}]"
        if not isinstance(g, dict) or set(g) != {"name", "map"} or not isinstance(g["name"], str):
            raise ParseError(f"{where}: expected {{\"name\": str, \"map\": MAP}}")
        pairs.append((g["name"], decode_map(g["map"], f"{where}.map", circle)))
    try:
        gset = GeneratorSet.from_maps(pairs)
    except NotInvertibleError as exc:
        raise InvalidSystemError(f"generators: {exc}") from None
    except ValueError as exc:
        raise ParseError(f"generators: {exc}") from None
    name = doc.get("name", default_name)
    if not isinstance(name, str):
        raise ParseError("name: expected a string")
    return GSystem(space, f, gset, name)


def load_system(text: str, default_name: str = "") -> GSystem:
    return system_from_doc(_loads(text, "system file"), default_name)


# -- certificates


def certificate_doc(sys: GSystem, s: CoveringStructure) -> dict:
    def segs(seq):
        return [[_q(a), _q(b)] for a, b in seq]

    return {
        "format": CERT_FORMAT,
        "system": system_to_doc(sys),
        "depth": s.depth,
        "A": segs(s.A),
        "B": segs(s.B),
        "times": list(s.times),
        "words": [format_word(w) for w in s.words],
    }


def dump_certificate(sys: GSystem, s: CoveringStructure) -> str:
    return dumps(certificate_doc(sys, s))


def load_certificate(text: str):
    """Parse a certificate into ``(system, structure)``; no verification."""
    doc = _loads(text, "certificate")
    if not isinstance(doc, dict) or doc.get("format") != CERT_FORMAT:
        raise ParseError(f"certificate: expected format {CERT_FORMAT!r}")
    sys = system_from_doc(doc.get("system"))

    def segs(key):
        seq = doc.get(key)
        if not isinstance(seq, list):
            raise ParseError(f"{key}: expected a list of [lo, hi]")
        out = []
        for i, pair in enumerate(seq):
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"{key}[{i}]: expected [lo, hi]")
            out.append((_rat(pair[0], f"{key}[{i}][0]"), _rat(pair[1], f"{key}[{i}][1]")))
        return tuple(out)

    times = doc.get("times")
    if not isinstance(times, list) or not all(isinstance(n, int) and not isinstance(n, bool) for n in times):
        raise ParseError("times: expected a list of integers")
    words = doc.get("words")
    if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
        raise ParseError("words: expected a list of word strings")
    ws = tuple(parse_word(w) for w in words)
    for i, w in enumerate(ws):
        for letter in w:
            if letter not in sys.generators.letters:
                raise ParseError(f"words[{i}]: unknown generator {letter!r}")
    if doc.get("depth") != len(times):
        raise ParseError("depth: does not match the number of times")
    try:
        s = CoveringStructure(segs("A"), segs("B"), tuple(times), ws)
    except ValueError as exc:
        raise ParseError(f"certificate: {exc}") from None
    return sys, s


# -- reports


def report_doc(kind: str, system: str, parameters: dict, result: dict, version: str) -> dict:
    return {
        "format": REPORT_FORMAT,
        "tool": "gchaos",
        "version": version,
        "kind": kind,
        "system": system,
        "parameters": plain(parameters),
        "result": plain(result),
    }


def plain(obj):
    """JSON-ready copy: rationals to strings, tuples to lists."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return _q(obj)
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def load_report(text: str) -> dict:
    doc = _loads(text, "report")
    if not isinstance(doc, dict) or doc.get("format") != REPORT_FORMAT:
        raise ParseError(f"report: expected format {REPORT_FORMAT!r}")
    return doc


# -- profile CSV


CSV_HEADER = ("n", "m_n", "M_n", "argmin", "argmax", "exact")


def profile_csv(profile) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    flag = "1" if profile.exact else "0"
    for r in profile.rows:
        w.writerow((r.n, _q(r.m), _q(r.M), format_word(r.argmin), format_word(r.argmax), flag))
    return buf.getvalue()


__all__ = [
    "CSV_HEADER",
    "certificate_doc",
    "decode_map",
    "dump_certificate",
    "dump_system",
    "dumps",
    "encode_map",
    "load_certificate",
    "load_report",
    "load_system",
    "plain",
    "profile_csv",
    "report_doc",
    "system_from_doc",
    "system_to_doc",
]
