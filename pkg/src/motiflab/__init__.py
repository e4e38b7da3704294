"""Generative batik motifs from implicit algebraic surfaces and modified
hypocycloid curves."""

from . import curve, diagnostics, expr, motif, render, scenefile, spherical

__all__ = ["curve", "diagnostics", "expr", "motif", "render", "scenefile", "spherical"]
__version__ = "0.1.0"
