"""Surfer-style ray-cast renderer for implicit surfaces.

Orthographic camera looking along -z.  The view half-extent is 1/zoom world
units across the smaller image dimension, so zoom 0.04 shows |x|,|y| <= 25.
Rays march through a clipping ball of radius sqrt(2)/zoom in uniform steps;
a sign change of the surface function brackets a root which is refined by
bisection.  Shading follows the two-color convention: front color where the
gradient faces the viewer, back color otherwise, background where nothing
is hit.

Equations are compiled per unique expression (numba, cached in-process), so
the first render of an equation pays a JIT cost and subsequent renders are
fast.  Rendering is deterministic and row-slice parallel: the output is
bit-identical for any worker count.
"""
from __future__ import annotations

import dataclasses
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import expr as ex

DEFAULT_N_MARCH = 512
BISECT_TOL = 1e-9
BISECT_MAX_ITER = 80
_DEGENERATE_GRAD = 1e-12

RGB = tuple[int, int, int]


def parse_hex_color(text: str) -> RGB:
    t = text.strip().lstrip("#")
    if len(t) != 6:
        raise ValueError(f"expected #rrggbb color, got {text!r}")
    return (int(t[0:2], 16), int(t[2:4], 16), int(t[4:6], 16))


def format_hex_color(c: RGB) -> str:
    return "#{:02x}{:02x}{:02x}".format(*c)


DEFAULT_FRONT = parse_hex_color("#d8a526")       # batik gold
DEFAULT_BACK = parse_hex_color("#7c4a12")        # soga brown
DEFAULT_BACKGROUND = parse_hex_color("#1d2a52")  # indigo


@dataclass(frozen=True)
class Scene:
    """Everything needed to reproduce one render."""
    equation: ex.Expr
    params: dict[str, float] = field(default_factory=dict)
    zoom: float = 1.0
    width: int = 512
    height: int = 512
    color_front: RGB = DEFAULT_FRONT
    color_back: RGB = DEFAULT_BACK
    color_background: RGB = DEFAULT_BACKGROUND
    n_march: int = DEFAULT_N_MARCH
    supersample: bool = False
    lit: bool = False

    def __post_init__(self):
        if self.zoom <= 0:
            raise ValueError("zoom must be positive")
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be >= 1")
        if self.n_march < 2:
            raise ValueError("n_march must be >= 2")
        if len({self.color_front, self.color_back, self.color_background}) != 3:
            raise ValueError("front, back and background colors must be distinct")
        missing = ex.free_params(self.equation) - set(self.params)
        if missing:
            raise ValueError(f"unbound parameters: {sorted(missing)}")

    @property
    def clip_radius(self) -> float:
        # circumscribes the visible square of half-extent 1/zoom, but never
        # shrinks below the default unit view's ball: zooming in magnifies
        # instead of clipping surfaces that fit the unit view
        return math.sqrt(2.0) * max(1.0 / self.zoom, 1.0)

    def to_dict(self) -> dict:
        return {
            "equation": ex.print_expr(self.equation),
            "params": dict(self.params),
            "zoom": self.zoom,
            "width": self.width,
            "height": self.height,
            "colors": {
                "front": format_hex_color(self.color_front),
                "back": format_hex_color(self.color_back),
                "background": format_hex_color(self.color_background),
            },
            "n_march": self.n_march,
            "supersample": self.supersample,
            "lit": self.lit,
        }

    @staticmethod
    def from_dict(doc: dict) -> "Scene":
        colors = doc.get("colors", {})
        return Scene(
            equation=ex.parse(doc["equation"]),
            params={str(k): float(v) for k, v in doc.get("params", {}).items()},
            zoom=float(doc.get("zoom", 1.0)),
            width=int(doc.get("width", 512)),
            height=int(doc.get("height", 512)),
            color_front=parse_hex_color(colors.get("front", format_hex_color(DEFAULT_FRONT))),
            color_back=parse_hex_color(colors.get("back", format_hex_color(DEFAULT_BACK))),
            color_background=parse_hex_color(colors.get("background", format_hex_color(DEFAULT_BACKGROUND))),
            n_march=int(doc.get("n_march", DEFAULT_N_MARCH)),
            supersample=bool(doc.get("supersample", False)),
            lit=bool(doc.get("lit", False)),
        )


@dataclass(frozen=True)
class Ray:
    origin: tuple[float, float, float]
    direction: tuple[float, float, float]

    def __post_init__(self):
        n = math.sqrt(sum(c * c for c in self.direction))
        if abs(n - 1.0) > 1e-12:
            raise ValueError("ray direction must be unit length")


@dataclass(frozen=True)
class Hit:
    t: float
    point: tuple[float, float, float]
    normal: tuple[float, float, float]  # unit, flipped toward the viewer
    front_facing: bool


@dataclass
class RenderStats:
    hit_count: int = 0
    eval_error_count: int = 0
    wall_ms: float = 0.0

    def to_dict(self) -> dict:
        return {"hit_count": self.hit_count,
                "eval_error_count": self.eval_error_count,
                "wall_ms": round(self.wall_ms, 3)}


# ---------------------------------------------------------------------------
# Equation compilation

def _emit(e: ex.Expr) -> str:
    if isinstance(e, ex.Const):
        return repr(float(e.value))
    if isinstance(e, ex.Var):
        return e.name
    if isinstance(e, ex.Param):
        return "p_" + e.name
    if isinstance(e, ex.Neg):
        return f"(-{_emit(e.operand)})"
    if isinstance(e, ex.Pow):
        if e.exponent == 0:
            return "1.0"
        if e.exponent == 1:
            return _emit(e.base)
        return f"({_emit(e.base)})**{e.exponent}"
    op = {ex.Add: "+", ex.Sub: "-", ex.Mul: "*", ex.Div: "/"}[type(e)]
    return f"({_emit(e.left)}{op}{_emit(e.right)})"


_KERNEL_TEMPLATE = """
def _march(wx, wy, clip_r, n_march{args}):
    m = wx.shape[0]
    z_hit = np.zeros(m)
    hit = np.zeros(m, np.uint8)
    err = np.zeros(m, np.uint8)
    r2 = clip_r * clip_r
    for i in range(m):
        x = wx[i]
        y = wy[i]
        rr = x * x + y * y
        if rr >= r2:
            continue
        s = np.sqrt(r2 - rr)
        dt = 2.0 * s / n_march
        z0 = s
        f0 = _f(x, y, z0{vals})
        if not np.isfinite(f0):
            err[i] = 1
        elif f0 == 0.0:
            hit[i] = 1
            z_hit[i] = z0
            continue
        for j in range(1, n_march + 1):
            z1 = s - j * dt
            f1 = _f(x, y, z1{vals})
            if not np.isfinite(f1):
                err[i] = 1
                z0 = z1
                f0 = f1
                continue
            if np.isfinite(f0) and f0 * f1 < 0.0:
                lo = z0
                hi = z1
                flo = f0
                mid = 0.5 * (lo + hi)
                for _ in range(80):
                    if abs(lo - hi) < 1e-9:
                        break
                    mid = 0.5 * (lo + hi)
                    fm = _f(x, y, mid{vals})
                    if fm == 0.0:
                        break
                    if (fm > 0.0) == (flo > 0.0):
                        lo = mid
                        flo = fm
                    else:
                        hi = mid
                hit[i] = 1
                z_hit[i] = mid
                break
            if f1 == 0.0:
                hit[i] = 1
                z_hit[i] = z1
                break
            z0 = z1
            f0 = f1
    return z_hit, hit, err
"""


class CompiledSurface:
    """Per-equation compiled evaluators: plain-python/numpy surface function
    and gradient, plus the jitted march kernel."""

    def __init__(self, equation: ex.Expr):
        from numba import njit

        self.param_names = tuple(sorted(ex.free_params(equation)))
        args = "".join(", p_" + p for p in self.param_names)
        vals = "".join(", p_" + p for p in self.param_names)
        grads = [ex.differentiate(equation, v) for v in ex.VARIABLES]
        src = f"def _f(x, y, z{args}):\n    return {_emit(equation)}\n"
        for name, g in zip(("_gx", "_gy", "_gz"), grads):
            src += f"def {name}(x, y, z{args}):\n    return {_emit(g)}\n"
        src += _KERNEL_TEMPLATE.format(args=args, vals=vals)
        ns: dict = {"np": np}
        exec(compile(src, "<motiflab-equation>", "exec"), ns)
        self.f = ns["_f"]
        self.gx, self.gy, self.gz = ns["_gx"], ns["_gy"], ns["_gz"]
        jit = njit(nogil=True, error_model="numpy", fastmath=False)
        self._f_jit = jit(ns["_f"])
        ns["_f"] = self._f_jit
        self.march = jit(ns["_march"])

    def param_values(self, params: dict[str, float]) -> tuple[float, ...]:
        try:
            return tuple(float(params[p]) for p in self.param_names)
        except KeyError as exc:
            raise ex.EvalError(f"unbound parameter {exc.args[0]!r}") from None

    def f_scalar(self, x: float, y: float, z: float, params: dict[str, float]) -> float:
        return float(self._f_jit(x, y, z, *self.param_values(params)))

    def grad_at(self, pts: np.ndarray, params: dict[str, float]) -> np.ndarray:
        """Gradient rows for an (n, 3) array of points."""
        vals = self.param_values(params)
        x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
        with np.errstate(all="ignore"):
            g = np.column_stack([
                np.broadcast_to(np.asarray(self.gx(x, y, z, *vals), dtype=float), x.shape),
                np.broadcast_to(np.asarray(self.gy(x, y, z, *vals), dtype=float), x.shape),
                np.broadcast_to(np.asarray(self.gz(x, y, z, *vals), dtype=float), x.shape),
            ])
        return g


_compile_cache: dict[str, CompiledSurface] = {}


def compiled(equation: ex.Expr) -> CompiledSurface:
    key = ex.print_expr(equation)
    surf = _compile_cache.get(key)
    if surf is None:
        surf = _compile_cache[key] = CompiledSurface(equation)
    return surf


# ---------------------------------------------------------------------------
# Camera and scalar ray queries

def _pixel_scale(scene: Scene) -> float:
    # world units per pixel; the smaller dimension spans [-1/zoom, 1/zoom]
    return (2.0 / scene.zoom) / min(scene.width, scene.height)


def camera_ray(scene: Scene, px: int, py: int) -> Ray:
    """Orthographic ray through the center of pixel (px, py), y up."""
    if not (0 <= px < scene.width and 0 <= py < scene.height):
        raise ValueError(f"pixel ({px}, {py}) outside {scene.width}x{scene.height}")
    s = _pixel_scale(scene)
    wx = (px + 0.5 - scene.width / 2.0) * s
    wy = (scene.height / 2.0 - py - 0.5) * s
    return Ray((wx, wy, scene.clip_radius), (0.0, 0.0, -1.0))


def first_hit(scene: Scene, ray: Ray) -> Hit | None:
    """Nearest surface crossing along the ray inside the clipping ball.

    Uniform marching in scene.n_march steps; a sign change is refined by
    bisection to |dt| < 1e-9.  Even-multiplicity roots (no sign change) are
    missed by construction.
    """
    ox, oy, oz = ray.origin
    dx, dy, dz = ray.direction
    R = scene.clip_radius
    # |o + t d|^2 = R^2  with |d| = 1
    b = ox * dx + oy * dy + oz * dz
    c = ox * ox + oy * oy + oz * oz - R * R
    disc = b * b - c
    if disc <= 0:
        return None
    sq = math.sqrt(disc)
    t0, t1 = max(-b - sq, 0.0), -b + sq
    if t1 <= t0:
        return None

    surf = compiled(scene.equation)
    vals = surf.param_values(scene.params)
    fj = surf._f_jit

    def fval(t: float) -> float:
        return fj(ox + t * dx, oy + t * dy, oz + t * dz, *vals)

    dt = (t1 - t0) / scene.n_march
    ta, fa = t0, fval(t0)
    t_root = None
    if math.isfinite(fa) and fa == 0.0:
        t_root = ta
    else:
        for j in range(1, scene.n_march + 1):
            tb = t0 + j * dt
            fb = fval(tb)
            if not math.isfinite(fb) or not math.isfinite(fa):
                ta, fa = tb, fb
                continue
            if fa * fb < 0.0:
                lo, hi, flo = ta, tb, fa
                mid = 0.5 * (lo + hi)
                for _ in range(BISECT_MAX_ITER):
                    if abs(lo - hi) < BISECT_TOL:
                        break
                    mid = 0.5 * (lo + hi)
                    fm = fval(mid)
                    if fm == 0.0:
                        break
                    if (fm > 0.0) == (flo > 0.0):
                        lo, flo = mid, fm
                    else:
                        hi = mid
                t_root = mid
                break
            if fb == 0.0:
                t_root = tb
                break
            ta, fa = tb, fb
    if t_root is None:
        return None

    p = (ox + t_root * dx, oy + t_root * dy, oz + t_root * dz)
    g = surf.grad_at(np.array([p]), scene.params)[0]
    gn = math.sqrt(float(g @ g))
    d = np.array(ray.direction)
    if gn < _DEGENERATE_GRAD or not math.isfinite(gn):
        return Hit(t_root, p, tuple(-d), True)
    front = float(g @ d) < 0.0
    n = g / gn if front else -g / gn
    return Hit(t_root, p, tuple(float(v) for v in n), front)


def shade(hit: Hit | None, scene: Scene) -> RGB:
    """Two-color convention: background on miss, front/back color by which
    side of the surface faces the viewer; lit variant scales by a headlight
    Lambert factor."""
    if hit is None:
        return scene.color_background
    base = scene.color_front if hit.front_facing else scene.color_back
    if not scene.lit:
        return base
    lambert = max(0.15, hit.normal[2])
    return tuple(int(c * lambert) for c in base)


# ---------------------------------------------------------------------------
# Full-frame rendering

def _render_rows(scene: Scene, surf: CompiledSurface, y0: int, y1: int,
                 width: int, height: int):
    s = _pixel_scale(scene)
    px = np.arange(width, dtype=np.float64)
    wx_row = (px + 0.5 - width / 2.0) * s
    py = np.arange(y0, y1, dtype=np.float64)
    wy_col = (height / 2.0 - py - 0.5) * s
    wx = np.tile(wx_row, y1 - y0)
    wy = np.repeat(wy_col, width)
    vals = surf.param_values(scene.params)
    z_hit, hit, err = surf.march(wx, wy, scene.clip_radius, scene.n_march, *vals)
    return wx, wy, z_hit, hit.astype(bool), err


def render_with_stats(scene: Scene, workers: int | None = None) -> tuple[np.ndarray, RenderStats]:
    """Render and report stats.  Output is bit-identical for any `workers`."""
    start = time.perf_counter()
    if scene.supersample:
        big = dataclasses.replace(scene, width=scene.width * 2,
                                  height=scene.height * 2, supersample=False)
        img, stats = render_with_stats(big, workers)
        img = img.reshape(scene.height, 2, scene.width, 2, 3).mean(axis=(1, 3)).astype(np.uint8)
        stats.wall_ms = (time.perf_counter() - start) * 1000.0
        return img, stats

    surf = compiled(scene.equation)
    w, h = scene.width, scene.height
    if workers is None:
        workers = min(os.cpu_count() or 1, h)
    workers = max(1, min(workers, h))
    bounds = np.linspace(0, h, workers + 1, dtype=int)
    chunks = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]

    if len(chunks) == 1:
        results = [_render_rows(scene, surf, 0, h, w, h)]
    else:
        with ThreadPoolExecutor(max_workers=len(chunks)) as pool:
            results = list(pool.map(
                lambda c: _render_rows(scene, surf, c[0], c[1], w, h), chunks))

    wx = np.concatenate([r[0] for r in results])
    wy = np.concatenate([r[1] for r in results])
    z_hit = np.concatenate([r[2] for r in results])
    hit = np.concatenate([r[3] for r in results])
    err = np.concatenate([r[4] for r in results])

    img = np.empty((h * w, 3), dtype=np.uint8)
    img[:] = scene.color_background

    stats = RenderStats(hit_count=int(hit.sum()),
                        eval_error_count=int(err[~hit].sum()))
    if stats.hit_count:
        pts = np.column_stack([wx[hit], wy[hit], z_hit[hit]])
        g = surf.grad_at(pts, scene.params)
        gz = g[:, 2]
        gnorm = np.sqrt((g * g).sum(axis=1))
        degenerate = (gnorm < _DEGENERATE_GRAD) | ~np.isfinite(gnorm)
        front = (gz > 0.0) | degenerate
        colors = np.where(front[:, None],
                          np.uint8(scene.color_front), np.uint8(scene.color_back))
        if scene.lit:
            with np.errstate(all="ignore"):
                nz = np.abs(gz) / gnorm
            nz = np.where(degenerate, 1.0, nz)
            lam = np.maximum(0.15, nz)
            colors = (colors * lam[:, None]).astype(np.uint8)
        img[hit] = colors
    img = img.reshape(h, w, 3)
    stats.wall_ms = (time.perf_counter() - start) * 1000.0
    return img, stats


def render_scene(scene: Scene, workers: int | None = None) -> np.ndarray:
    """Per-pixel camera ray -> first hit -> shade, vectorized; deterministic."""
    img, _ = render_with_stats(scene, workers)
    return img


# ---------------------------------------------------------------------------
# Image output

def write_ppm(img: np.ndarray, path: str) -> None:
    h, w, _ = img.shape
    with open(path, "wb") as fh:
        fh.write(ppm_bytes(img))


def ppm_bytes(img: np.ndarray) -> bytes:
    h, w, _ = img.shape
    return b"P6\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(img, dtype=np.uint8).tobytes()


def read_ppm(data: bytes) -> np.ndarray:
    if not data.startswith(b"P6"):
        raise ValueError("not a P6 PPM")
    parts = data.split(b"\n", 3)
    w, h = map(int, parts[1].split())
    maxval = int(parts[2])
    if maxval != 255:
        raise ValueError("only maxval 255 supported")
    return np.frombuffer(parts[3][: w * h * 3], dtype=np.uint8).reshape(h, w, 3)


def png_bytes(img: np.ndarray) -> bytes:
    import io

    from PIL import Image as PILImage

    buf = io.BytesIO()
    PILImage.fromarray(np.ascontiguousarray(img, dtype=np.uint8), "RGB").save(buf, "PNG")
    return buf.getvalue()


def write_image(img: np.ndarray, path: str, fmt: str | None = None) -> None:
    """Write PNG or binary PPM (P6); format inferred from the extension when
    not given."""
    if fmt is None:
        ext = os.path.splitext(path)[1].lower()
        fmt = {"": "png", ".png": "png", ".ppm": "ppm"}.get(ext)
        if fmt is None:
            raise ValueError(f"cannot infer image format from {path!r}")
    if fmt == "ppm":
        with open(path, "wb") as fh:
            fh.write(ppm_bytes(img))
    elif fmt == "png":
        with open(path, "wb") as fh:
            fh.write(png_bytes(img))
    else:
        raise ValueError(f"unsupported format {fmt!r}")
