"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 input/equation error.  All errors
go to stderr with an "error:" prefix.
"""
from __future__ import annotations

import argparse
import json
import sys

from . import expr as ex
from . import motif, scenefile
from .curve import CurveSpec, export_svg, sample_curve
from .diagnostics import validate_equation
from .render import write_image
from .spherical import export_obj, mesh_lift

USAGE_ERROR, INPUT_ERROR = 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    p = _Parser(prog="motiflab", description="Batik motif generator: implicit "
                "surfaces, hypocycloid curves, and motif layouts.")
    sub = p.add_subparsers(dest="command")

    r = sub.add_parser("render", help="render a scene file or preset")
    r.add_argument("scene", nargs="?", help="scene JSON file")
    r.add_argument("--preset", help="preset name instead of a scene file")
    r.add_argument("--param", action="append", default=[], metavar="K=V")
    r.add_argument("--zoom", type=float)
    r.add_argument("--size", metavar="WxH")
    r.add_argument("--steps", type=int, help="ray-march step count")
    r.add_argument("-o", "--output", required=True)

    c = sub.add_parser("curve", help="sample a hypocycloid curve to SVG")
    c.add_argument("--a", type=float, required=True)
    c.add_argument("--b", type=float, required=True)
    c.add_argument("--samples", type=int, default=1000)
    c.add_argument("--theta-max", type=float)
    c.add_argument("--svg", required=True)

    l = sub.add_parser("lift", help="lift a curve to a surface mesh (OBJ)")
    l.add_argument("--a", type=float, required=True)
    l.add_argument("--b", type=float, required=True)
    l.add_argument("--ntheta", type=int, required=True)
    l.add_argument("--nphi", type=int, required=True)
    l.add_argument("--obj", required=True)

    m = sub.add_parser("motif", help="render a preset into a repeated motif")
    m.add_argument("--preset", required=True)
    m.add_argument("--layout", choices=["fib", "grid"], required=True)
    m.add_argument("--n", type=int, required=True)
    m.add_argument("--size", metavar="WxH", help="tile size")
    m.add_argument("--canvas", metavar="WxH", help="output canvas size")
    m.add_argument("-o", "--output", required=True)

    v = sub.add_parser("validate", help="check an equation, print diagnostics JSON")
    v.add_argument("equation")

    sub.add_parser("presets", help="list the preset catalog as JSON")

    s = sub.add_parser("serve", help="run the HTTP render service")
    s.add_argument("--port", type=int, default=None)
    s.add_argument("--host", default="127.0.0.1")
    return p


def _parse_size(text: str) -> tuple[int, int]:
    try:
        w, h = text.lower().split("x")
        w, h = int(w), int(h)
    except ValueError:
        raise UsageError(f"bad size {text!r}, expected WxH") from None
    if w < 1 or h < 1:
        raise UsageError("size must be at least 1x1")
    return w, h


def _scene_document(args) -> dict:
    if args.preset and args.scene:
        raise UsageError("give either a scene file or --preset, not both")
    if args.preset:
        doc = motif.preset(args.preset).to_dict()
        doc.pop("name", None)
        doc.pop("title", None)
    elif args.scene:
        try:
            with open(args.scene, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as err:
            raise InputError(f"cannot read scene file: {err}")
        except json.JSONDecodeError as err:
            raise InputError(f"scene file is not valid JSON: {err}")
    else:
        raise UsageError("a scene file or --preset is required")
    for kv in args.param:
        if "=" not in kv:
            raise UsageError(f"bad --param {kv!r}, expected K=V")
        k, v = kv.split("=", 1)
        try:
            doc.setdefault("params", {})[k] = float(v)
        except ValueError:
            raise UsageError(f"bad --param value {v!r}") from None
    if args.zoom is not None:
        doc["zoom"] = args.zoom
    if args.size:
        doc["width"], doc["height"] = _parse_size(args.size)
    if getattr(args, "steps", None):
        doc["n_march"] = args.steps
    return doc


class InputError(Exception):
    pass


def _cmd_render(args) -> int:
    doc = _scene_document(args)
    try:
        img, stats, _ = scenefile.render_document(doc)
    except (scenefile.SceneDocumentError, scenefile.EquationError,
            scenefile.ImageTooLargeError, ex.ExprError) as err:
        raise InputError(str(err))
    write_image(img, args.output)
    print(json.dumps(stats.to_dict()))
    return 0


def _cmd_curve(args) -> int:
    try:
        kwargs = {"a": args.a, "b": args.b, "samples": args.samples}
        if args.theta_max is not None:
            kwargs["theta_max"] = args.theta_max
        spec = CurveSpec(**kwargs)
    except ValueError as err:
        raise InputError(str(err))
    export_svg([sample_curve(spec)], path=args.svg)
    return 0


def _cmd_lift(args) -> int:
    try:
        spec = CurveSpec(a=args.a, b=args.b)
        mesh = mesh_lift(spec, args.ntheta, args.nphi)
    except ValueError as err:
        raise InputError(str(err))
    export_obj(mesh, path=args.obj)
    return 0


def _cmd_motif(args) -> int:
    try:
        p = motif.preset(args.preset)
    except motif.UnknownPresetError as err:
        raise InputError(err.args[0])
    doc = p.to_dict()
    doc.pop("name", None)
    doc.pop("title", None)
    if args.size:
        doc["width"], doc["height"] = _parse_size(args.size)
    if args.layout == "fib":
        doc["layout"] = {"mode": "fibonacci", "count": args.n}
    else:
        doc["layout"] = {"mode": "grid", "rows": args.n, "cols": args.n}
    if args.canvas:
        cw, ch = _parse_size(args.canvas)
        doc["layout"]["canvas"] = {"width": cw, "height": ch}
    elif args.layout == "fib":
        w, h = doc.get("width", 512), doc.get("height", 512)
        doc["layout"]["canvas"] = {"width": w * 2, "height": h * 2}
    try:
        img, _, _ = scenefile.render_document(doc)
    except (scenefile.SceneDocumentError, scenefile.EquationError) as err:
        raise InputError(str(err))
    write_image(img, args.output)
    return 0


def _cmd_validate(args) -> int:
    diag = validate_equation(args.equation)
    print(json.dumps(diag.to_dict(), indent=2))
    return 0 if not diag.errors else INPUT_ERROR


def _cmd_presets(_args) -> int:
    print(json.dumps(motif.catalog_json(), indent=2))
    return 0


def _cmd_serve(args) -> int:
    import os

    import uvicorn

    from .server import create_app

    port = args.port or int(os.environ.get("MOTIFLAB_PORT", "8077"))
    uvicorn.run(create_app(), host=args.host, port=port, log_level="warning")
    return 0


_COMMANDS = {
    "render": _cmd_render,
    "curve": _cmd_curve,
    "lift": _cmd_lift,
    "motif": _cmd_motif,
    "validate": _cmd_validate,
    "presets": _cmd_presets,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if not args.command:
            raise UsageError("a subcommand is required (try --help)")
        return _COMMANDS[args.command](args)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR
    except (InputError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
