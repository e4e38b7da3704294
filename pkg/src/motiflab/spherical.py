"""Spherical-coordinate lift of plane curves to surfaces.

A curve point (xc, yc) at angle theta, with r = sqrt(xc^2 + yc^2) and
rho = r / sin(phi), lifts to

    X = xc * rho * sin(phi) = xc * r
    Y = yc * rho * sin(phi) = yc * r
    Z = rho * cos(phi)      = r * cot(phi)

(the sin(phi) cancels, which also sidesteps 0/0 near the poles).  Every
lifted point lies on the sphere X^2 + Y^2 + Z^2 = r^2 (xc^2 + yc^2 + cot^2 phi);
that identity is the correctness oracle for the whole construction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curve import CurveSpec, eval_curve

DEFAULT_PHI_MIN = 1e-2  # cot(phi) diverges at the poles; clamp a small cap
_CLOSURE_TOL = 1e-9


@dataclass(frozen=True)
class LiftSample:
    theta: float
    phi: float
    point: tuple[float, float, float]


@dataclass(frozen=True)
class SurfaceMesh:
    """Row-major (theta-major) quad grid."""
    vertices: np.ndarray       # (n_theta * n_phi, 3)
    quads: np.ndarray          # (n_quads, 4) vertex indices
    n_theta: int
    n_phi: int
    welded: bool = False

    def __post_init__(self):
        if len(self.vertices) != self.n_theta * self.n_phi:
            raise ValueError("vertex count must be n_theta * n_phi")
        if len(self.quads) and self.quads.max() >= len(self.vertices):
            raise ValueError("quad index out of range")


def lift(spec: CurveSpec, theta: float, phi: float,
         phi_min: float = DEFAULT_PHI_MIN) -> LiftSample:
    """Lift one curve point; phi must stay in [phi_min, pi - phi_min]."""
    if not (phi_min <= phi <= math.pi - phi_min):
        raise ValueError(f"phi={phi} outside [{phi_min}, pi - {phi_min}]")
    xc, yc = eval_curve(spec, theta)
    r = math.hypot(xc, yc)
    cot = math.cos(phi) / math.sin(phi)
    return LiftSample(theta, phi, (xc * r, yc * r, r * cot))


def verify_sphere_identity(sample: LiftSample, spec: CurveSpec) -> float:
    """Relative residual of X^2+Y^2+Z^2 = r^2 (xc^2 + yc^2 + cot^2 phi)."""
    xc, yc = eval_curve(spec, sample.theta)
    r2 = xc * xc + yc * yc
    cot = math.cos(sample.phi) / math.sin(sample.phi)
    rhs = r2 * (xc * xc + yc * yc + cot * cot)
    px, py, pz = sample.point
    lhs = px * px + py * py + pz * pz
    return abs(lhs - rhs) / max(1.0, abs(rhs))


def mesh_lift(spec: CurveSpec, n_theta: int, n_phi: int,
              phi_min: float = DEFAULT_PHI_MIN) -> SurfaceMesh:
    """Quad mesh over theta in [0, theta_max] x phi in [phi_min, pi-phi_min].

    The theta seam is welded (an extra ring of quads joining the last row
    back to the first) when the curve closes over theta_max.
    """
    if n_theta < 2 or n_phi < 2:
        raise ValueError("n_theta and n_phi must be >= 2")
    thetas = np.linspace(0.0, spec.theta_max, n_theta)
    phis = np.linspace(phi_min, math.pi - phi_min, n_phi)

    s = spec.a + spec.b
    xc = -s * np.sin(thetas) - s * np.sin(spec.k * thetas)
    yc = s * np.cos(thetas) + s * np.cos(spec.k * thetas)
    r = np.hypot(xc, yc)
    cot = np.cos(phis) / np.sin(phis)

    # grid index (i_theta, j_phi) -> row-major vertex id i_theta * n_phi + j_phi
    X = np.repeat(xc * r, n_phi)
    Y = np.repeat(yc * r, n_phi)
    Z = np.outer(r, cot).ravel()
    vertices = np.column_stack([X, Y, Z])

    quads = []
    for i in range(n_theta - 1):
        for j in range(n_phi - 1):
            v00 = i * n_phi + j
            quads.append((v00, v00 + n_phi, v00 + n_phi + 1, v00 + 1))

    closed = (math.hypot(xc[-1] - xc[0], yc[-1] - yc[0]) < _CLOSURE_TOL)
    if closed:
        last = (n_theta - 1) * n_phi
        for j in range(n_phi - 1):
            quads.append((last + j, j, j + 1, last + j + 1))

    return SurfaceMesh(vertices, np.asarray(quads, dtype=np.int64),
                       n_theta, n_phi, welded=closed)


def export_obj(mesh: SurfaceMesh, path: str | None = None) -> str:
    """Wavefront OBJ text (v/f records, 1-based indices); optionally written
    to `path`."""
    if len(mesh.vertices) == 0 or len(mesh.quads) == 0:
        raise ValueError("empty mesh")
    lines = [f"v {x:.9g} {y:.9g} {z:.9g}" for x, y, z in mesh.vertices]
    lines += ["f " + " ".join(str(i + 1) for i in quad) for quad in mesh.quads]
    text = "\n".join(lines) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


def mesh_json(mesh: SurfaceMesh) -> dict:
    """Mesh as plain lists for the studio UI preview."""
    return {
        "vertices": [[float(c) for c in v] for v in mesh.vertices],
        "quads": [[int(i) for i in q] for q in mesh.quads],
        "n_theta": mesh.n_theta,
        "n_phi": mesh.n_phi,
        "welded": mesh.welded,
    }
