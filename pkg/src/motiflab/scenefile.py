"""Scene documents: the JSON contract shared by the CLI and the HTTP API.

A scene document is the render module's scene schema plus an optional
"layout" block that turns the rendered tile into a repeated motif:

    {
      "equation": "x^2+y^2+z^2-1",
      "params": {"a": 0.02},
      "zoom": 1.0,
      "width": 512, "height": 512,
      "colors": {"front": "#d8a526", "back": "#7c4a12", "background": "#1d2a52"},
      "layout": {
        "mode": "fibonacci" | "grid",
        "count": 5,                 # fibonacci copies
        "rows": 2, "cols": 2,       # grid repeats
        "mirror": false,
        "canvas": {"width": 1024, "height": 1024}
      }
    }
"""
from __future__ import annotations

import numpy as np

from . import expr as ex
from . import motif
from .render import RenderStats, Scene, render_with_stats


class SceneDocumentError(ValueError):
    """Schema-level problem in a scene document."""


class EquationError(ValueError):
    """The document is well-formed but its equation is unusable."""


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise SceneDocumentError(message)


def validate_layout(doc: dict) -> dict | None:
    layout = doc.get("layout")
    if layout is None:
        return None
    _expect(isinstance(layout, dict), "layout must be an object")
    mode = layout.get("mode")
    _expect(mode in ("fibonacci", "grid"), "layout.mode must be 'fibonacci' or 'grid'")
    canvas = layout.get("canvas", {})
    _expect(isinstance(canvas, dict), "layout.canvas must be an object")
    out = {"mode": mode, "mirror": bool(layout.get("mirror", False))}
    if mode == "fibonacci":
        count = layout.get("count", 1)
        _expect(isinstance(count, int) and count >= 1, "layout.count must be an integer >= 1")
        out["count"] = count
    else:
        rows, cols = layout.get("rows", 1), layout.get("cols", 1)
        _expect(isinstance(rows, int) and rows >= 1, "layout.rows must be an integer >= 1")
        _expect(isinstance(cols, int) and cols >= 1, "layout.cols must be an integer >= 1")
        out["rows"], out["cols"] = rows, cols
    if canvas:
        w, h = canvas.get("width"), canvas.get("height")
        _expect(isinstance(w, int) and w >= 1, "layout.canvas.width must be an integer >= 1")
        _expect(isinstance(h, int) and h >= 1, "layout.canvas.height must be an integer >= 1")
        out["canvas"] = {"width": w, "height": h}
    return out


def scene_from_document(doc: dict, max_size: int | None = None) -> Scene:
    """Build a Scene from a JSON document, distinguishing schema errors
    (SceneDocumentError) from equation problems (EquationError)."""
    _expect(isinstance(doc, dict), "scene document must be an object")
    _expect("equation" in doc, "missing 'equation'")
    _expect(isinstance(doc["equation"], str), "'equation' must be a string")
    params = doc.get("params", {})
    _expect(isinstance(params, dict), "'params' must be an object")
    for k, v in params.items():
        _expect(isinstance(k, str) and len(k) == 1 and k.isalpha(),
                f"parameter name {k!r} must be a single letter")
        _expect(isinstance(v, (int, float)) and not isinstance(v, bool),
                f"parameter {k!r} must be a number")
    for key in ("zoom",):
        if key in doc:
            _expect(isinstance(doc[key], (int, float)) and not isinstance(doc[key], bool),
                    f"'{key}' must be a number")
            _expect(doc[key] > 0, f"'{key}' must be positive")
    for key in ("width", "height", "n_march"):
        if key in doc:
            _expect(isinstance(doc[key], int) and not isinstance(doc[key], bool),
                    f"'{key}' must be an integer")
            _expect(doc[key] >= 1, f"'{key}' must be >= 1")
    colors = doc.get("colors", {})
    _expect(isinstance(colors, dict), "'colors' must be an object")
    for key, val in colors.items():
        _expect(key in ("front", "back", "background"), f"unknown color role {key!r}")
        _expect(isinstance(val, str), f"color {key!r} must be a '#rrggbb' string")
        try:
            int(val.strip().lstrip("#"), 16)
            _expect(len(val.strip().lstrip("#")) == 6, "bad color length")
        except (ValueError, SceneDocumentError):
            raise SceneDocumentError(f"color {key!r} is not '#rrggbb': {val!r}") from None
    for key in ("supersample", "lit"):
        if key in doc:
            _expect(isinstance(doc[key], bool), f"'{key}' must be a boolean")
    validate_layout(doc)

    if max_size is not None:
        w, h = doc.get("width", 512), doc.get("height", 512)
        layout = doc.get("layout") or {}
        canvas = layout.get("canvas") or {}
        cw, ch = canvas.get("width", w), canvas.get("height", h)
        if max(w, h, cw, ch) > max_size:
            raise ImageTooLargeError(
                f"requested image exceeds the {max_size}x{max_size} cap")

    try:
        return Scene.from_dict(doc)
    except ex.ParseError as err:
        raise EquationError(f"equation does not parse: {err}") from err
    except (ex.ExprError, ValueError) as err:
        raise EquationError(str(err)) from err


class ImageTooLargeError(ValueError):
    pass


def render_document(doc: dict, max_size: int | None = None,
                    workers: int | None = None) -> tuple[np.ndarray, RenderStats, list | None]:
    """Render a scene document, applying its optional layout block.

    Returns (image, stats, placements); placements is the list of copy
    rectangles for a fibonacci layout, else None.
    """
    scene = scene_from_document(doc, max_size=max_size)
    layout = validate_layout(doc)
    img, stats = render_with_stats(scene, workers=workers)
    placements = None
    if layout is not None:
        canvas = layout.get("canvas", {})
        if layout["mode"] == "fibonacci":
            cw = canvas.get("width", scene.width)
            ch = canvas.get("height", scene.height)
            try:
                img, placements = motif.fibonacci_layout(
                    img, layout["count"], cw, ch, background=scene.color_background)
            except ValueError as err:
                raise SceneDocumentError(str(err)) from err
        else:
            img = motif.grid_tile(img, layout["rows"], layout["cols"], layout["mirror"])
    return img, stats, placements
