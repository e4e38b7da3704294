"""Modified hypocycloid plane curves.

The curve family has both amplitude terms equal to (a+b) and frequency
ratio k = (a+b)/b:

    x(t) = -(a+b) sin t - (a+b) sin(k t)
    y(t) =  (a+b) cos t + (a+b) cos(k t)

Curves close after 2*pi*q revolutions when k is rational p/q; motif export
relies on detecting that period.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from xml.sax.saxutils import escape

import numpy as np

_CLOSURE_TOL = 1e-9
DEFAULT_DENOM_LIMIT = 100
# fallback sweep for curves whose frequency ratio is not (near) rational
OPEN_CURVE_THETA_MAX = 2 * math.pi * 100


def closure_period(a: float, b: float, denom_limit: int = DEFAULT_DENOM_LIMIT) -> float | None:
    """Smallest sweep 2*pi*q after which the curve closes, or None.

    Uses a continued-fraction (best rational) approximation of k = (a+b)/b
    with denominator <= denom_limit; k must be within 1e-9 of p/q.
    """
    if a <= 0 or b <= 0:
        raise ValueError("a and b must be positive")
    k = (a + b) / b
    approx = Fraction(k).limit_denominator(denom_limit)
    if abs(k - float(approx)) > _CLOSURE_TOL:
        return None
    return 2 * math.pi * approx.denominator


@dataclass(frozen=True)
class CurveSpec:
    """Hypocycloid parameters plus sampling controls.

    theta_max defaults to the closure period when one exists, else to a
    long fixed sweep for non-closing curves.
    """
    a: float
    b: float
    samples: int = 1000
    theta_max: float = field(default=0.0)

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("a and b must be positive (b=0 would make (a+b)/b blow up)")
        if self.samples < 2:
            raise ValueError("need at least 2 samples")
        if self.theta_max == 0.0:
            period = closure_period(self.a, self.b)
            object.__setattr__(self, "theta_max",
                               period if period is not None else OPEN_CURVE_THETA_MAX)
        if self.theta_max <= 0:
            raise ValueError("theta_max must be positive")

    @property
    def k(self) -> float:
        return (self.a + self.b) / self.b


def eval_curve(spec: CurveSpec, theta: float) -> tuple[float, float]:
    """Curve point at angle theta. |x|,|y| <= 2(a+b) always."""
    s = spec.a + spec.b
    k = spec.k
    x = -s * math.sin(theta) - s * math.sin(k * theta)
    y = s * math.cos(theta) + s * math.cos(k * theta)
    return (x, y)


def sample_curve(spec: CurveSpec) -> np.ndarray:
    """Uniformly sampled polyline, shape (samples, 2), theta in [0, theta_max]."""
    theta = np.linspace(0.0, spec.theta_max, spec.samples)
    s = spec.a + spec.b
    x = -s * np.sin(theta) - s * np.sin(spec.k * theta)
    y = s * np.cos(theta) + s * np.cos(spec.k * theta)
    return np.column_stack([x, y])


@dataclass(frozen=True)
class Affine2:
    """2-D affine map p -> M p + v."""
    matrix: tuple[tuple[float, float], tuple[float, float]] = ((1.0, 0.0), (0.0, 1.0))
    translation: tuple[float, float] = (0.0, 0.0)

    @staticmethod
    def rotation(angle: float) -> "Affine2":
        c, s = math.cos(angle), math.sin(angle)
        return Affine2(((c, -s), (s, c)))

    @staticmethod
    def scaling(sx: float, sy: float | None = None) -> "Affine2":
        sy = sx if sy is None else sy
        return Affine2(((sx, 0.0), (0.0, sy)))

    @staticmethod
    def shear(kx: float, ky: float = 0.0) -> "Affine2":
        return Affine2(((1.0, kx), (ky, 1.0)))

    def compose(self, other: "Affine2") -> "Affine2":
        """self after other: (self @ other)(p) = self(other(p))."""
        a = np.asarray(self.matrix)
        b = np.asarray(other.matrix)
        m = a @ b
        v = a @ np.asarray(other.translation) + np.asarray(self.translation)
        return Affine2(tuple(map(tuple, m)), tuple(v))


def apply_affine(poly: np.ndarray, t: Affine2) -> np.ndarray:
    """Map every polyline point through the affine transform."""
    m = np.asarray(t.matrix)
    v = np.asarray(t.translation)
    return np.asarray(poly) @ m.T + v


def export_svg(polys: list[np.ndarray], stroke_colors: list[str] | None = None,
               path: str | None = None, stroke_width: float | None = None) -> str:
    """Write polylines as an SVG 1.1 document, one <path> per polyline.

    viewBox is the joint bounding box with a 5% margin.  Returns the SVG
    text; writes it to `path` when given.
    """
    polys = [np.asarray(p, dtype=float) for p in polys]
    if not polys or any(len(p) == 0 for p in polys):
        raise ValueError("no polylines to export")
    stroke_colors = stroke_colors or []

    allpts = np.vstack(polys)
    if not np.all(np.isfinite(allpts)):
        raise ValueError("polyline contains non-finite points")
    xmin, ymin = allpts.min(axis=0)
    xmax, ymax = allpts.max(axis=0)
    w, h = xmax - xmin, ymax - ymin
    margin = 0.05 * max(w, h, 1e-9)
    vb = (xmin - margin, ymin - margin, w + 2 * margin, h + 2 * margin)
    if stroke_width is None:
        stroke_width = max(w, h, 1e-9) / 200.0

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{vb[0]:.6g} {vb[1]:.6g} {vb[2]:.6g} {vb[3]:.6g}">\n',
    ]
    for i, poly in enumerate(polys):
        color = stroke_colors[i % len(stroke_colors)] if stroke_colors else "#000000"
        coords = " ".join(f"{x:.6g},{y:.6g}" for x, y in poly)
        parts.append(f'  <path d="M {coords}" fill="none" '
                     f'stroke="{escape(color)}" stroke-width="{stroke_width:.6g}"/>\n')
    parts.append("</svg>\n")
    text = "".join(parts)
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def polyline_json(poly: np.ndarray) -> list[list[float]]:
    """Polyline as a plain [[x, y], ...] list for the studio UI."""
    return [[float(x), float(y)] for x, y in np.asarray(poly)]
