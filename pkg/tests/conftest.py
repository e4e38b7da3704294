"""Shared fixtures: the catalog equation strings and independent oracles."""
from __future__ import annotations

import math
import random

import pytest

# The catalog equation strings, kept verbatim (including any trailing "=0")
# so the tests exercise exactly what users type.
EQ_POKE_PLANET = ("((x^2+y^2+z^2-100))*((x^4+y^4-2)*(x^3+y^3-4)*(x^4+y^4-8)"
                  "*(x^3+y^3-16)*(x^4+y^4-32)*(x^3+y^3+36))")
EQ_ATOM_FISH = "(x^2+y^2+z^3-z^2)*((x-y)(x+y)-a)((x+y)(x-y)+a)=0"
EQ_RING_BLASTER_F = "(x^2+y^2-1)^2+(y^2+z^2-1)^2-a=0"
EQ_CYLINDER_CROSS = "(x^2+y^2-1)^2+(z^2+(y+3-6*b)^2-1)^2-0.01*a=0"
EQ_FIG8_LEFT = ("(x^2+y^2+z^2+2*x*y*z-1)*((x-1)^2+(y-1)^2+(z-1)^2"
                "+2*(x-1)*(y-1)*(z-1)-2)=0")
EQ_FIG8_MIDDLE = ("(x^2+y^2+z^2+2*x*y*z-1)"
                  "*((x/2)^2+(y/2)^2+(z/2)^2-2*x/2*y/2*z/2-1)=0")
EQ_FIG8_RIGHT = ("(x^2+y^2+z^2+2*x*y*z-1)"
                 "*((x/2)^2+(y/2)^2+(z/2)^2-2*x/2*y/2*z/2-1)"
                 "*((x/3)^2+(y/3)^2+(z/3)^2-2*x/3*y/3*z/3-1)"
                 "*((x/5)^2+(y/5)^2+(z/5)^2-2*x/5*y/5*z/5-1)=0")

PRESET_EQUATIONS = [
    EQ_POKE_PLANET,
    EQ_ATOM_FISH,
    EQ_RING_BLASTER_F,
    EQ_CYLINDER_CROSS,
    EQ_FIG8_LEFT,
    EQ_FIG8_MIDDLE,
    EQ_FIG8_RIGHT,
]


# ---------------------------------------------------------------------------
# Independent straight-line oracles (no dependence on the package under test)

def oracle_cylinder_cross(x, y, z, a, b):
    """Direct transcription of the two-cylinder shell expression."""
    f = x * x + y * y - 1.0
    g = z * z + (y + 3.0 - 6.0 * b) ** 2 - 1.0
    return f * f + g * g - 0.01 * a


def oracle_curve_point(a, b, theta):
    """Direct transcription of the modified hypocycloid formulas."""
    k = (a + b) / b
    x = -(a + b) * math.sin(theta) - (a + b) * math.sin(k * theta)
    y = (a + b) * math.cos(theta) + (a + b) * math.cos(k * theta)
    return x, y


def oracle_lift_point(a, b, theta, phi):
    """Spherical lift computed literally: rho = r/sin(phi), then
    (xc*rho*sin(phi), yc*rho*sin(phi), rho*cos(phi))."""
    xc, yc = oracle_curve_point(a, b, theta)
    r = math.sqrt(xc * xc + yc * yc)
    rho = r / math.sin(phi)
    return (xc * rho * math.sin(phi), yc * rho * math.sin(phi),
            rho * math.cos(phi))


def central_difference_gradient(fn, x, y, z, h=1e-5):
    return (
        (fn(x + h, y, z) - fn(x - h, y, z)) / (2 * h),
        (fn(x, y + h, z) - fn(x, y - h, z)) / (2 * h),
        (fn(x, y, z + h) - fn(x, y, z - h)) / (2 * h),
    )


@pytest.fixture
def rng():
    return random.Random(20170610)
