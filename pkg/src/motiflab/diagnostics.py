"""Equation and scene diagnostics shared by the CLI and the HTTP service."""
from __future__ import annotations

from dataclasses import dataclass, field

from . import expr as ex

# every catalog preset uses parameters in (0, 1); sliders start there
DEFAULT_PARAM_RANGE = (0.0, 1.0)


@dataclass
class Diagnostics:
    errors: list[dict] = field(default_factory=list)
    free_params: list[str] = field(default_factory=list)
    degree: int | None = None
    render_stats: dict | None = None

    def to_dict(self) -> dict:
        doc = {
            "errors": self.errors,
            "free_params": self.free_params,
            "param_ranges": {p: list(DEFAULT_PARAM_RANGE) for p in self.free_params},
            "degree": self.degree,
        }
        if self.render_stats is not None:
            doc["render_stats"] = self.render_stats
        return doc


def validate_equation(text: str) -> Diagnostics:
    """Parse-check an equation; never raises."""
    diag = Diagnostics()
    try:
        tree = ex.parse(text)
    except ex.ParseError as err:
        diag.errors.append({"offset": min(err.offset, len(text)), "message": err.message})
        return diag
    except ex.ExprError as err:
        diag.errors.append({"offset": 0, "message": str(err)})
        return diag
    diag.free_params = sorted(ex.free_params(tree))
    diag.degree = ex.degree(tree)
    return diag
