"""Command-line front end: ``geolink torus|hecke|genusg <command> [flags]``.

Structured output is a single JSON document.  Rationals are strings ("n" or
"num/den").  Exit status is 0 on success, 1 on usage errors and 2 on domain
errors; error messages go to stderr prefixed by the error class name.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import genus_forms as gf
from . import hecke, torus
from .errors import GeolinkError
from .exact_core import FormMatrix, fraction_str
from .svg import emit_svg

COMMANDS = {
    "torus": ["polygon", "invariants", "lk", "birkhoff", "svg"],
    "hecke": ["normalize", "wheel-turn", "lk-cusp", "lens", "bound-matrix", "lk-bound"],
    "genusg": ["qhat", "sform", "generator", "cone-check", "lk-bound", "reduction-check"],
}

# flag name -> (type, help); all default to None so config values can fill gaps
FLAGS = {
    "p": (int, "order of the first cone point"),
    "q": (int, "order of the second cone point"),
    "g": (int, "genus"),
    "x": (int, "first index of a cone generator"),
    "y": (int, "second index of a cone generator"),
    "code": (str, "orbit code, inline JSON or @file"),
    "a": (str, "first input, inline JSON/text or @file"),
    "b": (str, "second input, inline JSON/text or @file"),
    "out": (str, "write output to this file instead of stdout"),
    "format": (str, "json, csv, svg or human"),
    "interpretation": (str, "cone generator convention, A or B"),
    "rotation": (str, "rotation coefficient of the reduced form, lksym or lkv"),
    "calibration": (str, "height unit for reduction-check, a rational"),
    "workers": (int, "worker processes for cone-check"),
}
CHOICES = {
    "format": ("json", "csv", "svg", "human"),
    "interpretation": ("A", "B"),
    "rotation": ("lksym", "lkv"),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    for name, (typ, help_) in FLAGS.items():
        common.add_argument(f"--{name}", type=typ, default=None, choices=CHOICES.get(name), help=help_)
    common.add_argument("--config", default=None, help="JSON file of flag values; explicit flags win")

    parser = _Parser(prog="geolink", description="Exact linking-number calculi for geodesic flows.")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)
    for group, cmds in COMMANDS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="command", required=True, parser_class=_Parser)
        for cmd in cmds:
            sub.add_parser(cmd, parents=[common])
    return parser


def _merge_config(args) -> dict:
    opts = {}
    if args.config:
        try:
            cfg = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config {args.config}: {e}")
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        for k, v in cfg.items():
            k = k.replace("-", "_")
            if k not in FLAGS:
                raise UsageError(f"unknown config key {k!r}")
            if k in CHOICES and v not in CHOICES[k]:
                raise UsageError(f"config {k}={v!r} not in {CHOICES[k]}")
            opts[k] = v
    for k in FLAGS:
        v = getattr(args, k)
        if v is not None:
            opts[k] = v
    return opts


def _need(opts, *names):
    missing = [n for n in names if opts.get(n) is None]
    if missing:
        raise UsageError("missing required flag(s): " + ", ".join("--" + n for n in missing))
    return [opts[n] for n in names]


def _text(raw: str) -> str:
    if isinstance(raw, str) and raw.startswith("@"):
        try:
            return Path(raw[1:]).read_text()
        except OSError as e:
            raise UsageError(f"cannot read {raw[1:]}: {e}")
    return raw


def _json(raw):
    if not isinstance(raw, str):
        return raw  # already decoded from a config file
    try:
        return json.loads(_text(raw))
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed JSON input: {e}")


def _collection(raw) -> torus.TorusCollection:
    data = _json(raw)
    try:
        return torus.TorusCollection.from_json(data)
    except (TypeError, KeyError, ValueError) as e:
        raise UsageError(f"malformed collection: {e}")


def _hecke_code(raw) -> hecke.HeckeCode:
    data = _json(raw)
    try:
        return hecke.HeckeCode.from_json(data)
    except (TypeError, KeyError, ValueError) as e:
        raise UsageError(f"malformed code: {e}")


def _word(raw) -> hecke.FreeProductWord:
    """A word is a list of ``["U"|"V", exponent]`` pairs or of ``[i, j]`` syllables."""
    data = _json(raw)
    if isinstance(data, dict):
        data = data.get("syllables", data.get("letters"))
    try:
        if data and all(isinstance(t[0], str) for t in data):
            return hecke.FreeProductWord(tuple((g, e) for g, e in data))
        return hecke.FreeProductWord.from_code(hecke.HeckeCode.from_json(data))
    except (TypeError, KeyError, ValueError, IndexError) as e:
        raise UsageError(f"malformed word: {e}")


def _reduced_or_dynamical(raw, gp, interpretation) -> gf.ReducedCode:
    text = _text(raw) if isinstance(raw, str) else raw
    if isinstance(text, str) and text.strip() and set(text.strip().upper()) <= {"L", "R"}:
        return gf.dynamical_to_reduced(gp, text, interpretation)
    data = _json(text)
    try:
        return gf.ReducedCode.from_json(data)
    except (TypeError, KeyError, ValueError) as e:
        raise UsageError(f"malformed reduced code: {e}")


def _matrix_doc(M: FormMatrix) -> list:
    return [[fraction_str(e) for e in row] for row in M.entries]


# -- command handlers return (document, csv text or None, svg text or None) --


def _torus(cmd, opts):
    if cmd == "lk":
        a, b = _need(opts, "a", "b")
        return {"lk": fraction_str(torus.linking(_collection(a), _collection(b)))}, None, None
    (a,) = _need(opts, "a")
    c = _collection(a)
    if cmd == "polygon":
        poly = torus.polygon_of(c)
        verts = [[v.x, v.y] for v in poly.vertices]
        csv = "x,y\n" + "".join(f"{x},{y}\n" for x, y in verts)
        return {"collection": c.to_json(), "vertices": verts}, csv, emit_svg(poly)
    if cmd == "invariants":
        inv = torus.invariants_of(c)
        return {
            "twice_area": inv.twice_area,
            "area": fraction_str(inv.area),
            "interior": inv.interior,
            "boundary": inv.boundary,
            "euler": inv.euler,
            "genus": inv.genus,
        }, None, None
    if cmd == "birkhoff":
        st = torus.birkhoff_status(c)
        return {
            "negative_transverse_surface": st.negative_transverse_surface,
            "birkhoff_section": st.birkhoff_section,
            "positive_transverse_surface": st.positive_transverse_surface,
        }, None, None
    if cmd == "svg":
        poly = torus.polygon_of(c)
        return {"svg": emit_svg(poly)}, None, emit_svg(poly)
    raise UsageError(f"unknown command torus {cmd}")


def _hecke(cmd, opts):
    if cmd == "bound-matrix":
        (q,) = _need(opts, "q")
        M = hecke.bound_matrix_p2(q)
        return {"q": q, "matrix": _matrix_doc(M), "signs": hecke.bound_matrix_sign_report(q)}, M.to_csv(), None
    if cmd == "lk-bound":
        q, a, b = _need(opts, "q", "a", "b")
        return {"bound": fraction_str(hecke.lk_bound_p2(_hecke_code(a), _hecke_code(b), q))}, None, None
    p, q = _need(opts, "p", "q")
    params = hecke.HeckeParams(p, q)
    if cmd == "lens":
        r, t = hecke.lens_space(params)
        mc = hecke.median_classes(params)
        return {
            "order": r,
            "twist": t,
            "a_Z": list(mc.a_Z),
            "dP": list(mc.dP),
            "dQ": list(mc.dQ),
        }, None, None
    (raw,) = _need(opts, "code")
    if cmd == "normalize":
        res = hecke.normalize(_word(raw), params)
        if isinstance(res, hecke.Classification):
            return {"class": res.value}, None, None
        return {"class": "Hyperbolic", **res.to_json()}, None, None
    code = _hecke_code(raw)
    if cmd == "wheel-turn":
        return {"wt": fraction_str(hecke.wheel_turn(code, params))}, None, None
    if cmd == "lk-cusp":
        return {"lk": fraction_str(hecke.lk_cusp(code, params))}, None, None
    raise UsageError(f"unknown command hecke {cmd}")


def _genusg(cmd, opts):
    (g,) = _need(opts, "g")
    gp = gf.GenusParams(g)
    interp = opts.get("interpretation") or gf.DEFAULT_INTERPRETATION.value
    rotation = opts.get("rotation") or gf.RotationVariant.LKSYM.value
    if cmd in ("qhat", "sform"):
        M = gf.qhat(gp, rotation) if cmd == "qhat" else gf.s_form(gp, rotation)
        return {"g": g, "rotation": rotation, "matrix": _matrix_doc(M)}, M.to_csv(), None
    if cmd == "generator":
        x, y = _need(opts, "x", "y")
        gen = gf.cone_generator(gp, x, y, interp)
        return {"x": x, "y": y, "interpretation": interp, **gen.code.to_json()}, None, None
    if cmd == "cone-check":
        rep = gf.cone_negativity_report(gp, interp, rotation, workers=opts.get("workers"))
        return rep.to_json(), None, None
    if cmd == "lk-bound":
        a, b = _need(opts, "a", "b")
        c1 = _reduced_or_dynamical(a, gp, interp)
        c2 = _reduced_or_dynamical(b, gp, interp)
        return {
            "s_eval": fraction_str(gf.s_eval(gp, c1, c2, rotation)),
            "bound": fraction_str(gf.lk_bound_orbifold(gp, c1, c2, rotation)),
        }, None, None
    if cmd == "reduction-check":
        if opts.get("calibration") is not None:
            try:
                cands = [Fraction(str(opts["calibration"]))]
            except ValueError:
                raise UsageError(f"bad calibration {opts['calibration']!r}")
        else:
            cands = gf.calibration_candidates(gp)
        reports = [gf.reduction_check(gp, c, rotation) for c in cands]
        passing = [fraction_str(r.calibration) for r in reports if r.passes]
        return {"g": g, "reports": [r.to_json() for r in reports], "passing": passing}, None, None
    raise UsageError(f"unknown command genusg {cmd}")


HANDLERS = {"torus": _torus, "hecke": _hecke, "genusg": _genusg}


def _human(doc, indent=0) -> str:
    pad = "  " * indent
    lines = []
    for k, v in doc.items():
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(_human(v, indent + 1).rstrip("\n"))
        elif isinstance(v, list) and v and isinstance(v[0], list):
            lines.append(f"{pad}{k}:")
            lines += [pad + "  " + " ".join(str(e) for e in row) for row in v]
        elif isinstance(v, list):
            lines.append(f"{pad}{k}: {json.dumps(v, separators=(',', ':'))}")
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(lines) + "\n"


def render(doc, csv, svg, fmt) -> str:
    if fmt == "json":
        return json.dumps(doc, separators=(",", ":")) + "\n"
    if fmt == "csv":
        if csv is None:
            raise UsageError("this command has no CSV output")
        return csv
    if fmt == "svg":
        if svg is None:
            raise UsageError("this command has no SVG output")
        return svg
    return _human(doc)


def run(argv, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        opts = _merge_config(args)
        fmt = opts.get("format") or ("svg" if args.command == "svg" else "json")
        doc, csv, svg = HANDLERS[args.group](args.command, opts)
        text = render(doc, csv, svg, fmt)
    except UsageError as e:
        print(f"usage error: {e}", file=stderr)
        return 1
    except GeolinkError as e:
        print(f"{type(e).__name__}: {e}", file=stderr)
        return 2
    if opts.get("out"):
        Path(opts["out"]).write_text(text)
    else:
        stdout.write(text)
    return 0


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
