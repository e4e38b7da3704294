"""Motif assembly: preset catalog, Fibonacci repetition, grid tiling,
palette substitution.

Preset equations are stored verbatim (including two factors
whose signs look like transcription quirks; they are reproduced as printed
rather than "corrected").
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr as ex
from .render import Scene

_EQ_SEPARATED = "((x-y)(x+y)-a)((x+y)(x-y)+a)"
_EQ_FIG8_F = "(x^2+y^2+z^2+2*x*y*z-1)"
_EQ_FIG8_G = "((x/{k})^2+(y/{k})^2+(z/{k})^2-2*x/{k}*y/{k}*z/{k}-1)"


@dataclass(frozen=True)
class Preset:
    name: str
    title: str
    equation: str
    params: dict[str, float] = field(default_factory=dict)
    zoom: float = 1.0

    def scene(self, **overrides) -> Scene:
        kwargs = {
            "equation": ex.parse(self.equation),
            "params": dict(self.params),
            "zoom": self.zoom,
        }
        if "params" in overrides:
            kwargs["params"].update(overrides.pop("params"))
        kwargs.update(overrides)
        return Scene(**kwargs)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "title": self.title,
            "equation": self.equation,
            "params": dict(self.params),
            "zoom": self.zoom,
        }


_CATALOG: dict[str, Preset] = {}


def _register(p: Preset) -> None:
    ex.parse(p.equation)  # catalog sanity: every entry must parse
    _CATALOG[p.name] = p


_register(Preset(
    name="poke-planet",
    title="Poke Planet Ball",
    equation="((x^2+y^2+z^2-100))*((x^4+y^4-2)*(x^3+y^3-4)*(x^4+y^4-8)"
             "*(x^3+y^3-16)*(x^4+y^4-32)*(x^3+y^3+36))",
    zoom=0.04,
))
_register(Preset(
    name="ding-dong",
    title="Ding Dong",
    equation="x^2+y^2+z^3-z^2",
    zoom=0.71,
))
_register(Preset(
    name="atom-fish",
    title="Atom Fish",
    equation="(x^2+y^2+z^3-z^2)*" + _EQ_SEPARATED,
    params={"a": 0.02},
    zoom=0.91,
))
_register(Preset(
    name="ring-blaster",
    title="Ring Blaster",
    equation="((x^2+y^2-1)^2+(y^2+z^2-1)^2-a)*" + _EQ_SEPARATED,
    params={"a": 0.02},
    zoom=0.47,
))
_register(Preset(
    name="cylinder-cross",
    title="Crossing Cylinders",
    equation="(x^2+y^2-1)^2+(z^2+(y+3-6*b)^2-1)^2-0.01*a",
    params={"a": 0.26, "b": 0.56},
    zoom=0.71,
))
_register(Preset(
    name="fig8-pair",
    title="Twisted Spheres Pair",
    equation=_EQ_FIG8_F + "*((x-1)^2+(y-1)^2+(z-1)^2+2*(x-1)*(y-1)*(z-1)-2)",
    zoom=0.35,
))
_register(Preset(
    name="fig8-scaled",
    title="Twisted Sphere and Half-Scale Twin",
    equation=_EQ_FIG8_F + "*" + _EQ_FIG8_G.format(k=2),
    zoom=0.35,
))
_register(Preset(
    name="fig8-family",
    title="Twisted Sphere Family (k = 1, 2, 3, 5)",
    equation="*".join([_EQ_FIG8_F] + [_EQ_FIG8_G.format(k=k) for k in (2, 3, 5)]),
    zoom=0.12,
))


class UnknownPresetError(KeyError):
    def __init__(self, name: str):
        names = ", ".join(sorted(_CATALOG))
        super().__init__(f"unknown preset {name!r}; available: {names}")


def preset(name: str) -> Preset:
    try:
        return _CATALOG[name]
    except KeyError:
        raise UnknownPresetError(name) from None


def preset_names() -> list[str]:
    return sorted(_CATALOG)


def catalog_json() -> list[dict]:
    """The catalog contract consumed by the studio UI."""
    return [_CATALOG[n].to_dict() for n in sorted(_CATALOG)]


# ---------------------------------------------------------------------------
# Layouts

def _fibonacci(n: int) -> list[int]:
    fib = [1, 1]
    while len(fib) < n:
        fib.append(fib[-1] + fib[-2])
    return fib[:n]


def _resize_nearest(tile: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    h, w = tile.shape[:2]
    rows = (np.arange(out_h) * h) // out_h
    cols = (np.arange(out_w) * w) // out_w
    return tile[rows][:, cols]


def fibonacci_layout(tile: np.ndarray, n: int, canvas_w: int, canvas_h: int,
                     background: tuple[int, int, int] | None = None,
                     ) -> tuple[np.ndarray, list[tuple[int, int, int, int]]]:
    """Place n copies of the tile at Fibonacci sizes 1,1,2,3,5,... in a
    spiral-quadrant arrangement.

    Linear copy sizes are F_i * unit with unit = floor(canvas/F_n), so the
    size ratios are exact in integer pixels.  Returns the canvas and the
    placement rectangles (x, y, w, h), largest first; placement is
    deterministic.
    """
    if n < 1:
        raise ValueError("need at least one copy")
    tile = np.asarray(tile)
    th, tw = tile.shape[:2]
    fib = _fibonacci(n)
    fmax = fib[-1]
    unit_h = canvas_h // fmax
    unit_w = canvas_w // fmax
    if unit_h < 1 or unit_w < 1:
        raise ValueError(
            f"canvas {canvas_w}x{canvas_h} too small for {n} Fibonacci copies")

    if background is None:
        background = tuple(tile[0, 0])
    canvas = np.empty((canvas_h, canvas_w, 3), dtype=np.uint8)
    canvas[:] = np.uint8(background)

    # Largest copy anchored top-left; smaller copies walk a quadrant spiral
    # around it: right, below, left, above, right, ...
    placements: list[tuple[int, int, int, int]] = []
    x0, y0 = 0, 0
    for idx, f in enumerate(reversed(fib)):
        cw, ch = f * unit_w, f * unit_h
        if idx == 0:
            if n == 1:
                x, y = (canvas_w - cw) // 2, (canvas_h - ch) // 2
            else:
                x, y = 0, 0
            x0, y0 = x + cw, y + ch  # growing corner for the spiral
        else:
            side = (idx - 1) % 4
            if side == 0:      # right of the block, top-aligned
                x, y = x0, 0
            elif side == 1:    # below, left-aligned
                x, y = 0, y0
            elif side == 2:    # diagonal corner
                x, y = x0, y0
            else:              # tucked right of the diagonal
                x, y = min(x0 + cw, canvas_w - cw), y0
            x = min(x, canvas_w - cw)
            y = min(y, canvas_h - ch)
        canvas[y:y + ch, x:x + cw] = _resize_nearest(tile, ch, cw)
        placements.append((x, y, cw, ch))
    return canvas, placements


def grid_tile(tile: np.ndarray, rows: int, cols: int, mirror: bool = False) -> np.ndarray:
    """rows x cols repetition; mirror flips alternate cells horizontally in
    a checkerboard."""
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be >= 1")
    tile = np.asarray(tile)
    flipped = tile[:, ::-1] if mirror else tile
    out_rows = []
    for i in range(rows):
        cells = [flipped if mirror and (i + j) % 2 == 1 else tile for j in range(cols)]
        out_rows.append(np.concatenate(cells, axis=1))
    return np.concatenate(out_rows, axis=0)


def apply_palette(img: np.ndarray, mapping: dict[tuple[int, int, int], tuple[int, int, int]]) -> np.ndarray:
    """Exact color substitution.  Every distinct color in the image must
    have an entry; pixel counts per class are preserved."""
    img = np.asarray(img)
    flat = img.reshape(-1, 3)
    present = {tuple(int(v) for v in c) for c in np.unique(flat, axis=0)}
    missing = present - set(mapping)
    if missing:
        raise ValueError(f"palette mapping missing colors: {sorted(missing)}")
    out = flat.copy()
    for old, new in mapping.items():
        mask = (flat == np.uint8(old)).all(axis=1)
        out[mask] = np.uint8(new)
    return out.reshape(img.shape)
